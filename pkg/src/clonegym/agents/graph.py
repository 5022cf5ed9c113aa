"""Policies as computation graphs of deterministic and stochastic nodes.

A graph is evaluated topologically once per step. Deterministic nodes are
pure functions of their parents; stochastic nodes additionally receive an
RNG derived from the step seed and the node id, so a fixed seed fixes every
sample. The designated output node produces the action, and the agent state
gains the (observation, action) pair.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ..errors import GraphError
from ..util import stable_seed

__all__ = [
    "DETERMINISTIC",
    "STOCHASTIC",
    "Node",
    "Graph",
    "AgentState",
    "GraphContext",
    "ReactTurn",
    "run_graph",
    "single_policy_graph",
    "rag_graph",
    "rejection_sampling_graph",
    "react_graph",
    "plasmid_retriever",
]

DETERMINISTIC = "deterministic"
STOCHASTIC = "stochastic"

OBSERVATION = "observation"
ACTION = "action"


@dataclass(frozen=True)
class Node:
    """One graph vertex.

    Deterministic nodes call fn(ctx, *parent_outputs); stochastic nodes call
    fn(ctx, rng, *parent_outputs) with a seeded random.Random.
    """

    id: str
    kind: str
    parents: tuple[str, ...] = ()
    fn: Callable = None

    def __post_init__(self) -> None:
        if self.kind not in (DETERMINISTIC, STOCHASTIC):
            raise ValueError(f"node {self.id}: unknown kind {self.kind!r}")
        if self.fn is None:
            raise ValueError(f"node {self.id}: fn is required")


@dataclass(frozen=True)
class Graph:
    nodes: tuple[Node, ...]
    output: str

    def __post_init__(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate node ids")
        if self.output not in ids:
            raise GraphError(f"output node {self.output!r} is not in the graph")

    def topological_order(self) -> tuple[Node, ...]:
        """Kahn's algorithm; raises GraphError on cycles or missing parents."""
        by_id = {n.id: n for n in self.nodes}
        for node in self.nodes:
            for parent in node.parents:
                if parent not in by_id:
                    raise GraphError(f"node {node.id!r} references missing parent {parent!r}")
        remaining = {n.id: set(n.parents) for n in self.nodes}
        order: list[Node] = []
        while remaining:
            ready = sorted(nid for nid, deps in remaining.items() if not deps)
            if not ready:
                raise GraphError("graph has a cycle")
            for nid in ready:
                order.append(by_id[nid])
                del remaining[nid]
            for deps in remaining.values():
                deps.difference_update(ready)
        return tuple(order)


@dataclass(frozen=True)
class GraphContext:
    """Read-only view handed to node functions."""

    observation: str
    state: "AgentState"


@dataclass(frozen=True)
class AgentState:
    """Append-only transcript alternating observations and actions."""

    entries: tuple[tuple[str, object], ...] = ()

    def __post_init__(self) -> None:
        for i, (kind, _) in enumerate(self.entries):
            expected = OBSERVATION if i % 2 == 0 else ACTION
            if kind != expected:
                raise ValueError(f"entry {i} must be an {expected}, got {kind!r}")

    def with_observation(self, observation: str) -> "AgentState":
        if len(self.entries) % 2 != 0:
            raise ValueError("an action is pending; cannot append an observation")
        return AgentState(self.entries + ((OBSERVATION, observation),))

    def with_action(self, action: object) -> "AgentState":
        if len(self.entries) % 2 != 1:
            raise ValueError("no observation is pending; cannot append an action")
        return AgentState(self.entries + ((ACTION, action),))

    @property
    def observations(self) -> tuple[object, ...]:
        return tuple(v for k, v in self.entries if k == OBSERVATION)

    @property
    def actions(self) -> tuple[object, ...]:
        return tuple(v for k, v in self.entries if k == ACTION)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ReactTurn:
    """Action value produced by the two-node architecture: thought, then call."""

    thought: str
    call: object

    def __str__(self) -> str:
        return f"Thought: {self.thought}\nAction: {self.call}"


def run_graph(graph: Graph, observation: str, state: AgentState, seed: int):
    """Evaluate the graph once; return (action, state with [o, a] appended).

    Stochastic node u draws from random.Random(stable_seed(seed, u.id)), so
    the result is a pure function of (graph, observation, state, seed).
    """
    order = graph.topological_order()
    ctx = GraphContext(observation=observation, state=state)
    outputs: dict[str, object] = {}
    for node in order:
        parent_values = [outputs[p] for p in node.parents]
        if node.kind == DETERMINISTIC:
            outputs[node.id] = node.fn(ctx, *parent_values)
        else:
            rng = random.Random(stable_seed(seed, node.id))
            outputs[node.id] = node.fn(ctx, rng, *parent_values)
    action = outputs[graph.output]
    new_state = state.with_observation(observation).with_action(action)
    return action, new_state


# -- the four reference architectures ---------------------------------------


def single_policy_graph(sampler: Callable) -> Graph:
    """(a) One stochastic node: the model samples the action directly.

    sampler(rng, observation, state) -> action
    """
    node = Node(
        id="policy",
        kind=STOCHASTIC,
        fn=lambda ctx, rng: sampler(rng, ctx.observation, ctx.state),
    )
    return Graph(nodes=(node,), output="policy")


def rag_graph(retriever: Callable, generator: Callable) -> Graph:
    """(b) Deterministic retrieval feeding a stochastic generator.

    retriever(observation) -> evidence (seed-invariant by construction)
    generator(rng, observation, state, evidence) -> action
    """
    retrieve = Node(
        id="retrieve",
        kind=DETERMINISTIC,
        fn=lambda ctx: retriever(ctx.observation),
    )
    generate = Node(
        id="generate",
        kind=STOCHASTIC,
        parents=("retrieve",),
        fn=lambda ctx, rng, evidence: generator(rng, ctx.observation, ctx.state, evidence),
    )
    return Graph(nodes=(retrieve, generate), output="generate")


def rejection_sampling_graph(sampler: Callable, scorer: Callable, k: int) -> Graph:
    """(c) k samples from one stochastic node, then a deterministic argmax.

    sampler(rng, observation, state) -> candidate; scorer(candidate) -> real.
    Ties keep the earliest sample.
    """
    if k < 1:
        raise ValueError("k must be at least 1")

    def draw(ctx, rng):
        return tuple(sampler(rng, ctx.observation, ctx.state) for _ in range(k))

    def select(ctx, candidates):
        best = candidates[0]
        best_score = scorer(best)
        for candidate in candidates[1:]:
            score = scorer(candidate)
            if score > best_score:
                best, best_score = candidate, score
        return best

    samples = Node(id="samples", kind=STOCHASTIC, fn=draw)
    choose = Node(id="select", kind=DETERMINISTIC, parents=("samples",), fn=select)
    return Graph(nodes=(samples, choose), output="select")


def react_graph(reasoner: Callable, actor: Callable) -> Graph:
    """(d) Two chained stochastic nodes: free-text reasoning, then the call.

    reasoner(rng, observation, state) -> thought text
    actor(rng, observation, state, thought) -> tool call
    The action value is a ReactTurn, so the transcript records the thought
    ahead of the call it led to.
    """
    reason = Node(
        id="reason",
        kind=STOCHASTIC,
        fn=lambda ctx, rng: reasoner(rng, ctx.observation, ctx.state),
    )
    act = Node(
        id="act",
        kind=STOCHASTIC,
        parents=("reason",),
        fn=lambda ctx, rng, thought: ReactTurn(
            thought=thought, call=actor(rng, ctx.observation, ctx.state, thought)
        ),
    )
    return Graph(nodes=(reason, act), output="act")


def plasmid_retriever(k: int = 3, records=None) -> Callable:
    """Nearest-neighbour lookup over the bundled plasmid records.

    Scores each plasmid by how many whitespace terms of the query occur in
    its name or feature names (case-insensitive, exact term containment) and
    returns the top k rendered one per line. Deterministic, so it fits the
    retrieval node of rag_graph.
    """
    from ..registry import load_plasmid_records

    if records is None:
        records = load_plasmid_records()

    def retrieve(query: str) -> str:
        terms = [t.lower() for t in query.split()]
        scored = []
        for record in records:
            haystacks = [record.name.lower()] + [f.name.lower() for f in record.features]
            score = sum(1 for t in terms if any(t in h for h in haystacks))
            scored.append((-score, record.name, record))
        scored.sort(key=lambda item: item[:2])
        lines = []
        for neg_score, name, record in scored[:k]:
            features = ", ".join(f.name for f in record.features) or "-"
            lines.append(f"{name} ({-neg_score} term match(es)): {features}")
        return "\n".join(lines)

    return retrieve
