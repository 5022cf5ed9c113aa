import random

import pytest
import requests

from clonegym.agents import (
    AgentState,
    ChatReply,
    Graph,
    HttpChatClient,
    MockChatClient,
    Node,
    NoisyAnswerPolicy,
    ReactPolicy,
    ReactTurn,
    ScriptedPolicy,
    build_messages,
    parse_tool_call,
    plasmid_retriever,
    rag_graph,
    react_graph,
    react_policy,
    rejection_sampling_graph,
    run_graph,
    schema_to_wire,
    single_policy_graph,
)
from clonegym.agents.policies import NOOP_CALL
from clonegym.envs import CLONING_SCHEMAS, ToolCall, ToolParam, ToolSchema
from clonegym.envs.tasks import Option, Task
from clonegym.errors import BackendUnavailableError, GraphError, PolicyUnavailableError
from clonegym.registry import PlasmidFeature, PlasmidRecord
from clonegym.sequences import Sequence
from clonegym.util import stable_seed


def const_node(node_id, value, parents=()):
    return Node(id=node_id, kind="deterministic", parents=parents, fn=lambda ctx, *_: value)


TASK = Task(
    id="t1",
    question="q",
    options=(Option("A", "one"), Option("B", "two"), Option("C", "three")),
    ideal="B",
)


# ---------------------------------------------------------------------------
# Graph structure.


def test_node_validation():
    with pytest.raises(ValueError):
        Node(id="x", kind="quantum", fn=lambda ctx: None)
    with pytest.raises(ValueError):
        Node(id="x", kind="deterministic")


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(nodes=(const_node("a", 1), const_node("a", 2)), output="a")
    with pytest.raises(GraphError):
        Graph(nodes=(const_node("a", 1),), output="b")
    graph = Graph(nodes=(const_node("a", 1, parents=("ghost",)),), output="a")
    with pytest.raises(GraphError):
        graph.topological_order()


def test_cycle_detection():
    a = const_node("a", 1, parents=("b",))
    b = const_node("b", 2, parents=("a",))
    with pytest.raises(GraphError):
        Graph(nodes=(a, b), output="a").topological_order()


def test_topological_order_on_a_diamond():
    nodes = (
        const_node("d", 4, parents=("b", "c")),
        const_node("b", 2, parents=("a",)),
        const_node("c", 3, parents=("a",)),
        const_node("a", 1),
    )
    order = [n.id for n in Graph(nodes=nodes, output="d").topological_order()]
    assert order == ["a", "b", "c", "d"]


def test_agent_state_alternation():
    state = AgentState()
    state = state.with_observation("o1")
    with pytest.raises(ValueError):
        state.with_observation("o2")
    state = state.with_action("a1")
    with pytest.raises(ValueError):
        state.with_action("a2")
    assert state.observations == ("o1",)
    assert state.actions == ("a1",)
    assert len(state) == 2
    with pytest.raises(ValueError):
        AgentState(entries=(("action", "a"),))


# ---------------------------------------------------------------------------
# Graph evaluation and the reference architectures.


def test_run_graph_seeds_stochastic_nodes_by_id():
    node = Node(id="pick", kind="stochastic", fn=lambda ctx, rng: rng.random())
    graph = Graph(nodes=(node,), output="pick")
    action, state = run_graph(graph, "obs", AgentState(), seed=7)
    assert action == random.Random(stable_seed(7, "pick")).random()
    assert state.entries == (("observation", "obs"), ("action", action))
    again, _ = run_graph(graph, "obs", AgentState(), seed=7)
    assert again == action
    different, _ = run_graph(graph, "obs", AgentState(), seed=8)
    assert different != action


def test_single_policy_graph_passes_context():
    seen = {}

    def sampler(rng, observation, state):
        seen["observation"] = observation
        seen["state_len"] = len(state)
        return ToolCall("submit_answer", {"answer": "A"})

    graph = single_policy_graph(sampler)
    action, _ = run_graph(graph, "the question", AgentState(), seed=0)
    assert action == ToolCall("submit_answer", {"answer": "A"})
    assert seen == {"observation": "the question", "state_len": 0}


def test_rag_graph_feeds_evidence_forward():
    graph = rag_graph(
        retriever=lambda obs: f"evidence for {obs}",
        generator=lambda rng, obs, state, evidence: evidence.upper(),
    )
    action, _ = run_graph(graph, "q1", AgentState(), seed=0)
    assert action == "EVIDENCE FOR Q1"


def test_rejection_sampling_picks_argmax():
    graph = rejection_sampling_graph(
        sampler=lambda rng, obs, state: rng.randrange(100),
        scorer=lambda c: c,
        k=6,
    )
    action, _ = run_graph(graph, "q", AgentState(), seed=3)
    rng = random.Random(stable_seed(3, "samples"))
    assert action == max(rng.randrange(100) for _ in range(6))


def test_rejection_sampling_tie_keeps_earliest():
    counter = iter(range(100))
    graph = rejection_sampling_graph(
        sampler=lambda rng, obs, state: next(counter),
        scorer=lambda c: 0.0,
        k=4,
    )
    action, _ = run_graph(graph, "q", AgentState(), seed=0)
    assert action == 0
    with pytest.raises(ValueError):
        rejection_sampling_graph(lambda *a: None, lambda c: 0, k=0)


def test_react_graph_emits_composite_turns():
    graph = react_graph(
        reasoner=lambda rng, obs, state: f"thinking about {obs}",
        actor=lambda rng, obs, state, thought: ToolCall("submit_answer", {"answer": "A"}),
    )
    state = AgentState()
    action, state = run_graph(graph, "q", state, seed=0)
    assert isinstance(action, ReactTurn)
    assert action.thought == "thinking about q"
    assert str(action) == f"Thought: thinking about q\nAction: {action.call}"
    # composite turn still occupies a single action slot
    assert len(state) == 2
    _, state = run_graph(graph, "o2", state, seed=1)
    assert len(state) == 4


def test_plasmid_retriever_ranks_by_term_matches():
    records = (
        PlasmidRecord("pAlpha", Sequence("pAlpha", "ATGC"), (PlasmidFeature("AmpR", 0, 4, "+", "protein"),)),
        PlasmidRecord("pBeta", Sequence("pBeta", "ATGC"), (PlasmidFeature("KanR", 0, 4, "+", "protein"),)),
        PlasmidRecord("pGamma", Sequence("pGamma", "ATGC"), ()),
    )
    retrieve = plasmid_retriever(k=2, records=records)
    lines = retrieve("AmpR").splitlines()
    assert len(lines) == 2
    assert lines[0] == "pAlpha (1 term match(es)): AmpR"
    assert lines[1].startswith("pBeta (0 term match(es))")
    assert retrieve("AmpR") == retrieve("AmpR")


def test_plasmid_retriever_over_bundled_records():
    retrieve = plasmid_retriever(k=3)
    lines = retrieve("AmpR ori").splitlines()
    assert len(lines) == 3
    assert "term match(es)" in lines[0]


# ---------------------------------------------------------------------------
# Chat wire format and clients.


def test_schema_to_wire_shapes():
    schema = ToolSchema(
        name="merge",
        description="combine pools",
        params=(
            ToolParam("pool", "sequence_list", description="names or a stored pool"),
            ToolParam("limit", "integer", required=False),
        ),
    )
    wire = schema_to_wire(schema)
    assert wire["type"] == "function"
    fn = wire["function"]
    assert fn["name"] == "merge"
    props = fn["parameters"]["properties"]
    assert props["pool"]["anyOf"] == [
        {"type": "array", "items": {"type": "string"}},
        {"type": "string"},
    ]
    assert props["pool"]["description"] == "names or a stored pool"
    assert props["limit"] == {"type": "integer"}
    assert fn["parameters"]["required"] == ["pool"]


def test_mock_chat_client_replays_in_order():
    call = ToolCall("submit_answer", {"answer": "A"})
    client = MockChatClient(["hello", call, ChatReply(content="bye")])
    assert client.complete([{"role": "user", "content": "hi"}]) == ChatReply(content="hello")
    assert client.complete([]) == ChatReply(tool_call=call)
    assert client.complete([]) == ChatReply(content="bye")
    with pytest.raises(PolicyUnavailableError):
        client.complete([])
    assert len(client.requests) == 4
    assert client.requests[0][0][0]["content"] == "hi"


def test_mock_chat_client_raises_scripted_exceptions():
    client = MockChatClient([requests.ConnectionError("down"), "ok"])
    with pytest.raises(requests.ConnectionError):
        client.complete([])
    assert client.complete([]).content == "ok"


class FakeResponse:
    def __init__(self, payload=None, status_error=None):
        self._payload = payload
        self._status_error = status_error

    def raise_for_status(self):
        if self._status_error:
            raise self._status_error

    def json(self):
        return self._payload


class FakeSession:
    def __init__(self, outcomes):
        self.outcomes = list(outcomes)
        self.posts = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.posts.append({"url": url, "json": json, "headers": headers})
        outcome = self.outcomes.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def reply_payload(content="", tool=None, args="{}"):
    message = {"content": content}
    if tool:
        message["tool_calls"] = [{"function": {"name": tool, "arguments": args}}]
    return {"choices": [{"message": message}]}


def test_http_client_parses_structured_calls():
    session = FakeSession([FakeResponse(reply_payload(tool="calculator", args='{"expr": "6*7"}'))])
    client = HttpChatClient("http://x/v1", model="m", session=session, sleep=lambda s: None)
    reply = client.complete([{"role": "user", "content": "q"}])
    assert reply.tool_call == ToolCall("calculator", {"expr": "6*7"})
    assert session.posts[0]["url"] == "http://x/v1/chat/completions"
    assert session.posts[0]["json"]["model"] == "m"


def test_http_client_retries_with_backoff():
    sleeps = []
    session = FakeSession(
        [
            requests.ConnectionError("1"),
            requests.ConnectionError("2"),
            FakeResponse(reply_payload(content="ok")),
        ]
    )
    client = HttpChatClient("http://x", model="m", session=session, sleep=sleeps.append)
    assert client.complete([]).content == "ok"
    assert sleeps == [0.5, 1.0]


def test_http_client_gives_up_after_three_attempts():
    session = FakeSession([requests.ConnectionError(str(i)) for i in range(3)])
    client = HttpChatClient("http://x", model="m", session=session, sleep=lambda s: None)
    with pytest.raises(PolicyUnavailableError):
        client.complete([])
    assert len(session.posts) == 3


def test_http_client_flags_malformed_payloads_without_retrying():
    session = FakeSession([FakeResponse({"surprise": True})])
    client = HttpChatClient("http://x", model="m", session=session, sleep=lambda s: None)
    with pytest.raises(BackendUnavailableError):
        client.complete([])
    assert len(session.posts) == 1


def test_http_client_reads_key_from_environment(monkeypatch):
    session = FakeSession([FakeResponse(reply_payload(content="ok"))] * 2)
    client = HttpChatClient("http://x", model="m", session=session, sleep=lambda s: None)
    monkeypatch.delenv("CLONEGYM_API_KEY", raising=False)
    client.complete([])
    assert "Authorization" not in session.posts[0]["headers"]
    monkeypatch.setenv("CLONEGYM_API_KEY", "sk-test")
    client.complete([])
    assert session.posts[1]["headers"]["Authorization"] == "Bearer sk-test"


def test_http_client_rejects_negative_temperature():
    with pytest.raises(ValueError):
        HttpChatClient("http://x", model="m", temperature=-0.1)


def test_http_client_sends_tool_schemas():
    session = FakeSession([FakeResponse(reply_payload(content="ok"))])
    client = HttpChatClient("http://x", model="m", temperature=0.7, session=session, sleep=lambda s: None)
    client.complete([], schemas=CLONING_SCHEMAS)
    sent = session.posts[0]["json"]
    assert sent["temperature"] == 0.7
    assert len(sent["tools"]) == 21
    assert sent["tools"][0]["function"]["name"] == "add"


# ---------------------------------------------------------------------------
# Reply parsing and the ReAct loop.


def test_parse_tool_call_prefers_structured_field():
    call = ToolCall("view_sequence", {"sequence": "p"})
    reply = ChatReply(content='```json\n{"tool": "other", "args": {}}\n```', tool_call=call)
    assert parse_tool_call(reply) == call


def test_parse_tool_call_reads_fenced_json():
    reply = ChatReply(content='I will cut.\n```json\n{"tool": "enzyme_cut", "args": {"sequence": "p", "enzyme": "EcoRI"}}\n```')
    assert parse_tool_call(reply) == ToolCall("enzyme_cut", {"sequence": "p", "enzyme": "EcoRI"})
    bare = ChatReply(content='```\n{"tool": "add", "args": {"sequence1": "a", "sequence2": "b"}}\n```')
    assert parse_tool_call(bare) == ToolCall("add", {"sequence1": "a", "sequence2": "b"})


def test_parse_tool_call_recovers_a_valid_line_in_a_noisy_fence():
    content = '```\nlet me think\n{"tool": "view_sequence", "args": {"sequence": "p"}}\n```'
    assert parse_tool_call(ChatReply(content=content)) == ToolCall("view_sequence", {"sequence": "p"})
    assert parse_tool_call(ChatReply(content="no call here")) is None


def test_build_messages_roles():
    state = (
        AgentState()
        .with_observation("the question")
        .with_action(ToolCall("view_sequence", {"sequence": "p"}))
        .with_observation("ATGC")
    )
    messages = build_messages(state, system_prompt="sys")
    assert [m["role"] for m in messages] == ["system", "user", "assistant", "tool"]
    assert messages[0]["content"] == "sys"
    assert messages[2]["content"] == ToolCall("view_sequence", {"sequence": "p"}).to_json()
    assert messages[3]["content"] == "ATGC"


def test_build_messages_serializes_react_turns_as_their_call():
    turn = ReactTurn(thought="hmm", call=ToolCall("view_sequence", {"sequence": "p"}))
    state = AgentState().with_observation("q").with_action(turn).with_observation("o")
    messages = build_messages(state)
    assert messages[2]["content"] == turn.call.to_json()


def test_build_messages_requires_pending_observation():
    state = AgentState().with_observation("q").with_action(ToolCall("noop", {}))
    with pytest.raises(ValueError):
        build_messages(state)


def test_react_policy_retries_parse_once():
    good = ToolCall("submit_answer", {"answer": "A"})
    client = MockChatClient(["unparseable", good])
    state = AgentState().with_observation("q")
    assert react_policy(client, (), state) == good
    assert len(client.requests) == 2


def test_react_policy_falls_back_to_noop():
    client = MockChatClient(["nope", "still nope"])
    state = AgentState().with_observation("q")
    assert react_policy(client, (), state) == NOOP_CALL


def test_react_policy_class_carries_metadata():
    client = MockChatClient([ToolCall("submit_answer", {"answer": "A"})])
    policy = ReactPolicy(client, CLONING_SCHEMAS)
    state = AgentState().with_observation("q")
    assert policy(state) == ToolCall("submit_answer", {"answer": "A"})
    assert policy.metadata["policy"] == "react"
    assert policy.metadata["temperature"] == 0.0
    # schemas travelled with the request
    assert len(client.requests[0][1]) == 21


def test_scripted_policy_indexes_by_actions_taken():
    calls = [ToolCall("view_sequence", {"sequence": "p"}), ToolCall("submit_answer", {"answer": "A"})]
    policy = ScriptedPolicy(calls)
    state = AgentState().with_observation("q")
    assert policy(state) == calls[0]
    state = state.with_action(calls[0]).with_observation("o2")
    assert policy(state) == calls[1]
    state = state.with_action(calls[1]).with_observation("o3")
    assert policy(state) == NOOP_CALL
    assert policy.metadata["policy"] == "scripted"


def test_noisy_policy_is_deterministic_per_task_and_seed():
    first = NoisyAnswerPolicy(TASK, seed=11, p_correct=0.6)
    second = NoisyAnswerPolicy(TASK, seed=11, p_correct=0.6)
    assert first.letter == second.letter
    state = AgentState().with_observation("q")
    assert first(state) == ToolCall("submit_answer", {"answer": first.letter})


def test_noisy_policy_probability_extremes():
    always = {NoisyAnswerPolicy(TASK, seed=s, p_correct=1.0).letter for s in range(40)}
    assert always == {"B"}
    never = {NoisyAnswerPolicy(TASK, seed=s, p_correct=0.0).letter for s in range(40)}
    assert "B" not in never and never <= {"A", "C"}
    with pytest.raises(ValueError):
        NoisyAnswerPolicy(TASK, seed=0, p_correct=1.5)


def test_noisy_policy_hits_rate_in_the_large(seed_count=500):
    hits = sum(NoisyAnswerPolicy(TASK, seed=s, p_correct=0.6).letter == "B" for s in range(seed_count))
    assert abs(hits / seed_count - 0.6) < 0.08
