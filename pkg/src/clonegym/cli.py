"""Command-line interface: ad hoc tool calls, evaluation, expert iteration.

Exit codes: 0 success, 2 usage or tool error, 3 chat backend unreachable.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from collections import Counter
from dataclasses import dataclass

from .agents.chat import DEFAULT_API_KEY_ENV, HttpChatClient
from .agents.policies import NoisyAnswerPolicy, ReactPolicy
from .envs.base import ToolCall, export_tool_schemas
from .envs.calculator import CALCULATOR_SCHEMAS, CalculatorEnv
from .envs.cloning import CLONING_SCHEMAS, CloningEnv
from .envs.expr import render_number
from .envs.tasks import Option, Task, load_calculator_tasks, load_tasks
from .errors import SimulationError
from .fasta import read_fasta_file
from .plots import plot_ei_history, plot_metric_curves
from .sequences import CIRCULAR, LINEAR, Sequence
from .training.metrics import evaluate
from .training.rollout import rollout
from .training.trajectories import (
    TrajectoryBuffer,
    atomic_write_text,
    ei_collect,
    export_sft,
    write_trajectories,
)
from .training.weighting import PassRateTracker, sample_task_ids, task_weights
from .util import stable_seed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BACKEND = 3


@dataclass(frozen=True)
class RunConfig:
    env: str
    tasks_path: str
    policy: str
    out_dir: str
    seed: int
    k: int
    max_steps: int
    parallelism: int
    p_correct: float
    base_url: str | None
    model: str | None
    temperature: float
    resamples: int

    def __post_init__(self) -> None:
        if self.env not in ("cloning", "calculator"):
            raise ValueError(f"unknown env {self.env!r}")
        if self.policy not in ("scripted", "chat"):
            raise ValueError(f"unknown policy {self.policy!r}")
        if not os.path.exists(self.tasks_path):
            raise ValueError(f"task file {self.tasks_path!r} does not exist")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.max_steps < 1:
            raise ValueError("max-steps must be at least 1")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.policy == "chat" and not (self.base_url and self.model):
            raise ValueError("chat policy requires --base-url and --model")


class _NoisyNumberPolicy:
    """Calculator twin of the noisy answer policy: right number w.p. p."""

    def __init__(self, task, seed: int, p_correct: float):
        self.p_correct = p_correct
        rng = random.Random(stable_seed(seed, "noisy-number", task.id))
        if rng.random() < p_correct:
            self.answer = render_number(task.ideal)
        else:
            self.answer = render_number(task.ideal + 1 + rng.randrange(9))

    def __call__(self, state):
        return ToolCall(tool="submit_answer", args={"answer": self.answer})

    @property
    def metadata(self) -> dict:
        return {"policy": "scripted", "p_correct": self.p_correct, "temperature": 0.0}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clonegym",
        description="Sequence-manipulation tools, tool-calling environments, "
        "and the evaluation/expert-iteration pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tool = sub.add_parser("tool", help="run one tool call and print the observation")
    p_tool.add_argument("name", help="tool name, e.g. enzyme_cut")
    p_tool.add_argument("--fasta", help="FASTA file of input sequences")
    p_tool.add_argument("--bases", help="inline bases for a single input sequence")
    p_tool.add_argument("--name-in", default="input", help="name for --bases input")
    p_tool.add_argument("--circular", action="store_true", help="mark --bases input circular")

    p_schemas = sub.add_parser("schemas", help="export tool schemas as JSONL")
    p_schemas.add_argument("--env", default="cloning", choices=["cloning", "calculator"])
    p_schemas.add_argument("--out", help="output path (default stdout)")

    def add_run_flags(p):
        p.add_argument("--env", default="cloning", choices=["cloning", "calculator"])
        p.add_argument("--tasks", required=True, help="task JSONL path")
        p.add_argument("--policy", default="scripted", choices=["scripted", "chat"])
        p.add_argument("--p-correct", type=float, default=0.6,
                       help="scripted policy correctness probability")
        p.add_argument("--base-url", help="chat endpoint base URL")
        p.add_argument("--model", help="chat model name")
        p.add_argument("--temperature", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--k", type=int, default=8, help="rollouts per task")
        p.add_argument("--max-steps", type=int, default=10)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--parallelism", type=int, default=1)
        p.add_argument("--resamples", type=int, default=1000, help="bootstrap resamples")

    p_eval = sub.add_parser("eval", help="roll out a policy and report consensus/pass curves")
    add_run_flags(p_eval)

    p_ei = sub.add_parser("ei", help="expert iteration: weighted sampling, rollout, filter, export")
    add_run_flags(p_ei)
    p_ei.add_argument("--rho", type=float, default=0.5, help="return threshold (strict >)")
    p_ei.add_argument("--rounds", type=int, default=2)

    return parser


# -- tool subcommand --------------------------------------------------------


def _coerce_arg(value: str, type_name: str):
    if type_name == "integer":
        return int(value)
    if type_name == "number":
        return float(value)
    if type_name == "boolean":
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"expected a boolean, got {value!r}")
    if type_name == "sequence_list":
        return value.split(",") if "," in value else value
    return value


def _parse_extra_args(extra: list[str], schema) -> dict:
    by_name = {p.name: p for p in schema.params}
    args: dict = {}
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ValueError(f"unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            i += 1
            if i >= len(extra):
                raise ValueError(f"flag {token} needs a value")
            value = extra[i]
        key = key.replace("-", "_")
        param = by_name.get(key)
        args[key] = _coerce_arg(value, param.type) if param else value
        i += 1
    return args


def _load_cli_inputs(ns) -> list[Sequence]:
    if ns.fasta and ns.bases:
        raise ValueError("use either --fasta or --bases, not both")
    if ns.fasta:
        return read_fasta_file(ns.fasta)
    if ns.bases:
        topology = CIRCULAR if ns.circular else LINEAR
        return [Sequence(name=ns.name_in, bases=ns.bases, topology=topology)]
    return []


def cmd_tool(ns, extra: list[str]) -> int:
    schema_map = {s.name: s for s in CLONING_SCHEMAS}
    schema = schema_map.get(ns.name)
    if schema is None:
        print(f"unknown tool {ns.name!r}; available: {', '.join(sorted(schema_map))}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        inputs = _load_cli_inputs(ns)
        args = _parse_extra_args(extra, schema)
    except (ValueError, OSError, SimulationError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    param_names = {p.name for p in schema.params}
    if "sequence" in param_names and "sequence" not in args and inputs:
        args["sequence"] = inputs[0].name
    if "sequences" in param_names and "sequences" not in args and inputs:
        args["sequences"] = [seq.name for seq in inputs]
    task = Task(
        id="cli",
        question="ad hoc tool call",
        options=(Option("A", "n/a"),),
        ideal="A",
        inputs=tuple(inputs),
    )
    env = CloningEnv(task, max_steps=1)
    env.reset()
    observation = env.step(ToolCall(tool=ns.name, args=args))
    if observation.text.startswith(("invalid tool call:", "error:")):
        print(observation.text, file=sys.stderr)
        return EXIT_USAGE
    print(observation.text)
    return EXIT_OK


# -- schemas subcommand -----------------------------------------------------


def cmd_schemas(ns) -> int:
    schemas = CLONING_SCHEMAS if ns.env == "cloning" else CALCULATOR_SCHEMAS
    text = export_tool_schemas(schemas)
    if ns.out:
        atomic_write_text(ns.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- shared run plumbing ----------------------------------------------------


def _config_from_ns(ns) -> RunConfig:
    return RunConfig(
        env=ns.env,
        tasks_path=ns.tasks,
        policy=ns.policy,
        out_dir=ns.out,
        seed=ns.seed,
        k=ns.k,
        max_steps=ns.max_steps,
        parallelism=ns.parallelism,
        p_correct=ns.p_correct,
        base_url=ns.base_url,
        model=ns.model,
        temperature=ns.temperature,
        resamples=ns.resamples,
    )


def _load_run_tasks(config: RunConfig):
    if config.env == "cloning":
        return load_tasks(config.tasks_path)
    return load_calculator_tasks(config.tasks_path)


def _make_factories(config: RunConfig):
    if config.env == "cloning":
        env_factory = lambda task: CloningEnv(task, max_steps=config.max_steps)
        schemas = CLONING_SCHEMAS
    else:
        env_factory = lambda task: CalculatorEnv(task, max_steps=config.max_steps)
        schemas = CALCULATOR_SCHEMAS
    if config.policy == "chat":
        client = HttpChatClient(
            base_url=config.base_url,
            model=config.model,
            temperature=config.temperature,
            api_key_env=DEFAULT_API_KEY_ENV,
        )
        policy = ReactPolicy(client, schemas)
        policy_factory = lambda task, seed: policy
    elif config.env == "cloning":
        policy_factory = lambda task, seed: NoisyAnswerPolicy(task, seed, config.p_correct)
    else:
        policy_factory = lambda task, seed: _NoisyNumberPolicy(task, seed, config.p_correct)
    return env_factory, policy_factory


def _all_policy_failures(trajectories) -> bool:
    return bool(trajectories) and all(
        "policy_error" in t.metadata and not t.steps for t in trajectories
    )


def _write_metrics(rows: list[dict], out_dir: str) -> None:
    lines = [json.dumps(row, sort_keys=True) for row in rows]
    atomic_write_text(os.path.join(out_dir, "metrics.jsonl"), "\n".join(lines) + "\n")
    header = "metric\tk\tvalue\tci_low\tci_high\tn_tasks\tseed"
    tsv = [header]
    for row in rows:
        tsv.append(
            f"{row['metric']}\t{row['k']}\t{row['value']:.6f}"
            f"\t{row['ci_low']:.6f}\t{row['ci_high']:.6f}\t{row['n_tasks']}\t{row['seed']}"
        )
    atomic_write_text(os.path.join(out_dir, "curves.tsv"), "\n".join(tsv) + "\n")
    plot_metric_curves(rows, os.path.join(out_dir, "curves.png"))


def cmd_eval(ns) -> int:
    try:
        config = _config_from_ns(ns)
        tasks = _load_run_tasks(config)
    except (ValueError, SimulationError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    env_factory, policy_factory = _make_factories(config)
    trajectories = rollout(
        env_factory,
        policy_factory,
        tasks,
        k=config.k,
        base_seed=config.seed,
        parallelism=config.parallelism,
    )
    if config.policy == "chat" and _all_policy_failures(trajectories):
        print("chat endpoint unreachable; no episode produced any steps", file=sys.stderr)
        return EXIT_BACKEND
    os.makedirs(config.out_dir, exist_ok=True)
    write_trajectories(
        trajectories, os.path.join(config.out_dir, "trajectories.jsonl")
    )
    rows = evaluate(trajectories, config.k, seed=config.seed, n_resamples=config.resamples)
    _write_metrics(rows, config.out_dir)
    print(f"{len(tasks)} tasks, {len(trajectories)} trajectories")
    print("metric      k   value   ci_low  ci_high")
    for row in rows:
        print(
            f"{row['metric']:<10}{row['k']:>3}   {row['value']:.3f}   "
            f"{row['ci_low']:.3f}   {row['ci_high']:.3f}"
        )
    print(f"wrote trajectories.jsonl, metrics.jsonl, curves.tsv, curves.png to {config.out_dir}")
    return EXIT_OK


def cmd_ei(ns) -> int:
    try:
        config = _config_from_ns(ns)
        tasks = _load_run_tasks(config)
        if ns.rounds < 1:
            raise ValueError("rounds must be at least 1")
    except (ValueError, SimulationError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    env_factory, policy_factory = _make_factories(config)
    by_id = {task.id: task for task in tasks}
    tracker = PassRateTracker()
    buffer = TrajectoryBuffer(ns.rho)
    manifest_rows: list[dict] = []
    os.makedirs(config.out_dir, exist_ok=True)
    for round_index in range(ns.rounds):
        weights = task_weights(tracker, sorted(by_id))
        rng = random.Random(stable_seed(config.seed, "ei-sample", round_index))
        sampled = sample_task_ids(weights, len(tasks), rng)
        counts = Counter(sampled)
        round_seed = stable_seed(config.seed, "ei-round", round_index)
        round_trajectories = []
        for task_id in sorted(counts):
            round_trajectories.extend(
                rollout(
                    env_factory,
                    policy_factory,
                    [by_id[task_id]],
                    k=config.k * counts[task_id],
                    base_seed=round_seed,
                    parallelism=config.parallelism,
                )
            )
        if config.policy == "chat" and _all_policy_failures(round_trajectories):
            print("chat endpoint unreachable; no episode produced any steps", file=sys.stderr)
            return EXIT_BACKEND
        kept_before = len(buffer)
        ei_collect(buffer, round_trajectories, ns.rho)
        for trajectory in round_trajectories:
            tracker.update(trajectory.task_id, trajectory.correct)
        sft_path = os.path.join(config.out_dir, f"round_{round_index}.jsonl")
        sft_lines = export_sft(buffer, sft_path) if len(buffer) else 0
        rates = tracker.snapshot()
        manifest_rows.append(
            {
                "round": round_index,
                "sampled": dict(sorted(counts.items())),
                "weights": {tid: weights[tid] for tid in sorted(weights)},
                "n_trajectories": len(round_trajectories),
                "kept": len(buffer) - kept_before,
                "buffer_size": len(buffer),
                "sft_lines": sft_lines,
                "mean_f_pass": sum(rates.values()) / len(rates) if rates else 0.0,
                "seed": round_seed,
            }
        )
    manifest_lines = [json.dumps(row, sort_keys=True) for row in manifest_rows]
    atomic_write_text(
        os.path.join(config.out_dir, "manifest.jsonl"), "\n".join(manifest_lines) + "\n"
    )
    plot_ei_history(manifest_rows, os.path.join(config.out_dir, "ei_rounds.png"))
    for row in manifest_rows:
        print(
            f"round {row['round']}: {row['n_trajectories']} trajectories, "
            f"kept {row['kept']}, buffer {row['buffer_size']}, "
            f"mean pass EMA {row['mean_f_pass']:.3f}"
        )
    print(f"wrote manifest.jsonl, round_*.jsonl, ei_rounds.png to {config.out_dir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    ns, extra = parser.parse_known_args(argv)
    if ns.command != "tool" and extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    if ns.command == "tool":
        return cmd_tool(ns, extra)
    if ns.command == "schemas":
        return cmd_schemas(ns)
    if ns.command == "eval":
        return cmd_eval(ns)
    return cmd_ei(ns)


if __name__ == "__main__":
    sys.exit(main())
