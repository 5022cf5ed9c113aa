import json
import random

import pytest

from clonegym.envs import CloningEnv, ToolCall
from clonegym.envs.tasks import Option, Task
from clonegym.agents import NoisyAnswerPolicy, ScriptedPolicy
from clonegym.errors import EmptyBufferError, PolicyUnavailableError
from clonegym.training import (
    PassRateTracker,
    Trajectory,
    TrajectoryBuffer,
    TrajectoryStep,
    bootstrap_ci,
    consensus_at_k,
    consensus_outcomes,
    ei_collect,
    evaluate,
    export_sft,
    load_trajectories,
    pass_at_k,
    pass_outcomes,
    rollout,
    run_episode,
    sample_task_ids,
    task_weights,
    write_trajectories,
)
from clonegym.training.trajectories import SFT_SYSTEM_PROMPT


def make_task(task_id="t1", ideal="A", unsure=None):
    return Task(
        id=task_id,
        question="Pick a letter.",
        options=(Option("A", "one"), Option("B", "two"), Option("C", "three")),
        ideal=ideal,
        unsure_letter=unsure,
    )


def answered(task_id, answer, ideal="A", unsure=None, seed=0, reward=None):
    if reward is None:
        reward = 1.0 if answer == ideal else (0.1 if answer == unsure else -1.0)
    step = TrajectoryStep("obs", ToolCall("submit_answer", {"answer": answer}), reward)
    return Trajectory(
        task_id=task_id,
        seed=seed,
        steps=(step,),
        terminal="answered",
        answer_letter=answer,
        ideal=ideal,
        unsure_letter=unsure,
    )


def truncated(task_id, ideal="A", unsure=None, seed=0):
    step = TrajectoryStep("obs", ToolCall("noop", {}), 0.0)
    return Trajectory(
        task_id=task_id,
        seed=seed,
        steps=(step,),
        terminal="truncated",
        ideal=ideal,
        unsure_letter=unsure,
    )


# ---------------------------------------------------------------------------
# Trajectory records.


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory("t", 0, (), terminal="exploded")
    with pytest.raises(ValueError):
        Trajectory("t", 0, (), terminal="answered")  # no answer letter
    with pytest.raises(ValueError):
        Trajectory("t", 0, (), terminal="truncated", answer_letter="A")


def test_trajectory_properties():
    traj = answered("t", "A", ideal="A", unsure="C")
    assert traj.episode_return == 1.0
    assert traj.correct and not traj.unsure
    traj = answered("t", "C", ideal="A", unsure="C")
    assert traj.unsure and not traj.correct
    assert truncated("t").episode_return == 0.0
    assert not truncated("t").correct


def test_trajectory_json_round_trip():
    traj = answered("t9", "B", ideal="A", unsure="C", seed=4)
    again = Trajectory.from_json(traj.to_json())
    assert again == traj


def test_trajectory_rejects_tampered_return():
    blob = json.loads(answered("t", "A").to_json())
    blob["return"] = 0.25
    with pytest.raises(ValueError):
        Trajectory.from_json(json.dumps(blob))


def test_write_and_load_round_trip(tmp_path):
    path = str(tmp_path / "t.jsonl")
    items = [answered("a", "A"), truncated("b"), answered("c", "B")]
    assert write_trajectories(items, path) == 3
    assert load_trajectories(path) == items


# ---------------------------------------------------------------------------
# Expert-iteration collection.


def test_buffer_is_strictly_above_threshold():
    buffer = TrajectoryBuffer(threshold=0.5)
    buffer.append(answered("t", "A", ideal="A"))  # return 1.0
    with pytest.raises(ValueError):
        buffer.append(answered("t", "C", ideal="A", unsure="C"))  # return 0.1
    with pytest.raises(ValueError):
        buffer.append(answered("t", "A", ideal="A", reward=0.5))  # not strict
    assert len(buffer) == 1


def test_ei_collect_keeps_only_high_return():
    batch = [
        answered("t1", "A", ideal="A"),                 # return  1.0
        answered("t2", "B", ideal="A"),                 # return -1.0
        answered("t3", "C", ideal="A", unsure="C"),     # return  0.1
    ]
    buffer = ei_collect(TrajectoryBuffer(threshold=0.5), batch)
    assert [t.task_id for t in buffer.entries] == ["t1"]
    permissive = ei_collect(TrajectoryBuffer(threshold=-2.0), batch)
    assert len(permissive) == 3
    override = ei_collect(TrajectoryBuffer(threshold=-2.0), batch, rho=0.0)
    assert [t.task_id for t in override.entries] == ["t1", "t3"]


# ---------------------------------------------------------------------------
# Difficulty weighting.


def test_tracker_ema_arithmetic():
    tracker = PassRateTracker(alpha=0.1)
    assert tracker.f_pass("t") == 0.0
    assert tracker.update("t", True) == pytest.approx(0.1)
    assert tracker.update("t", True) == pytest.approx(0.19)
    assert tracker.update("t", False) == pytest.approx(0.171)
    assert tracker.snapshot() == {"t": pytest.approx(0.171)}
    with pytest.raises(ValueError):
        PassRateTracker(alpha=0.0)
    with pytest.raises(ValueError):
        PassRateTracker(alpha=1.5)


def test_task_weights_follow_failure_rates():
    tracker = PassRateTracker(alpha=0.5)
    tracker.update("easy", True)  # f_pass: easy 0.5, hard untouched at 0.0
    weights = task_weights(tracker, ["hard", "easy"])
    assert weights["hard"] == pytest.approx(2 / 3)
    assert weights["easy"] == pytest.approx(1 / 3)


def test_task_weights_scale_invariance_and_fallback():
    tracker = PassRateTracker(alpha=0.5)
    tracker.update("a", True)  # a 0.5, b 0.0
    assert task_weights(tracker, ["a", "b"], scale=20.0) == pytest.approx(
        task_weights(tracker, ["a", "b"], scale=7.0)
    )
    solved = PassRateTracker(alpha=1.0)
    solved.update("a", True)
    solved.update("b", True)
    assert task_weights(solved, ["a", "b"]) == {"a": 0.5, "b": 0.5}
    with pytest.raises(ValueError):
        task_weights(tracker, [])
    with pytest.raises(ValueError):
        task_weights(tracker, ["a"], scale=0.0)


def test_sample_task_ids_is_seeded_and_weighted():
    weights = {"hard": 0.9, "easy": 0.1}
    draws = sample_task_ids(weights, 1000, random.Random(0))
    assert draws == sample_task_ids(weights, 1000, random.Random(0))
    assert 820 <= draws.count("hard") <= 960


# ---------------------------------------------------------------------------
# Episode runner.


def test_run_episode_scripted_submit():
    task = make_task(ideal="A")
    policy = ScriptedPolicy(
        [
            ToolCall("plasmid_search", {"query": "AmpR"}),
            ToolCall("submit_answer", {"answer": "A"}),
        ]
    )
    traj = run_episode(CloningEnv(task), policy, task, seed=3, metadata={"replicate": 0})
    assert traj.terminal == "answered"
    assert traj.answer_letter == "A" and traj.ideal == "A"
    assert traj.episode_return == 1.0
    assert len(traj.steps) == 2
    assert traj.steps[0].observation.startswith("Pick a letter.")
    assert traj.metadata == {"policy": "scripted", "temperature": 0.0, "replicate": 0}


def test_run_episode_truncates_a_stalling_policy():
    task = make_task()
    traj = run_episode(CloningEnv(task, max_steps=10), ScriptedPolicy([]), task, seed=0)
    assert traj.terminal == "truncated"
    assert traj.answer_letter is None
    assert len(traj.steps) == 10
    assert traj.episode_return == 0.0


def test_run_episode_absorbs_policy_unavailable():
    class DeadPolicy:
        metadata = {"policy": "react"}

        def __call__(self, state):
            raise PolicyUnavailableError("endpoint down")

    task = make_task()
    traj = run_episode(CloningEnv(task), DeadPolicy(), task, seed=0)
    assert traj.terminal == "truncated"
    assert traj.steps == ()
    assert traj.metadata["policy_error"] == "endpoint down"


def test_rollout_is_order_stable_across_parallelism():
    tasks = [make_task(task_id=f"t{i}", ideal="B", unsure="C") for i in range(3)]

    def run(parallelism):
        return rollout(
            env_factory=CloningEnv,
            policy_factory=lambda task, seed: NoisyAnswerPolicy(task, seed, 0.6),
            tasks=tasks,
            k=4,
            base_seed=17,
            parallelism=parallelism,
        )

    serial = run(1)
    threaded = run(3)
    assert [t.to_json() for t in serial] == [t.to_json() for t in threaded]
    assert [t.task_id for t in serial] == [f"t{i}" for i in range(3) for _ in range(4)]
    assert [t.metadata["replicate"] for t in serial] == [0, 1, 2, 3] * 3
    with pytest.raises(ValueError):
        rollout(CloningEnv, lambda t, s: ScriptedPolicy([]), tasks, k=0)


# ---------------------------------------------------------------------------
# SFT export.


def test_export_sft_transcripts(tmp_path):
    task = make_task(ideal="A")
    policy = ScriptedPolicy(
        [
            ToolCall("plasmid_search", {"query": "AmpR"}),
            ToolCall("submit_answer", {"answer": "A"}),
        ]
    )
    buffer = TrajectoryBuffer(threshold=0.5)
    for seed in range(3):
        buffer.append(run_episode(CloningEnv(task), policy, task, seed=seed))

    path = str(tmp_path / "sft.jsonl")
    assert export_sft(buffer, path) == 3
    lines = open(path).read().splitlines()
    assert len(lines) == 3
    record = json.loads(lines[0])
    assert set(record) == {"task_id", "seed", "return", "messages"}
    roles = [m["role"] for m in record["messages"]]
    assert roles == ["system", "user", "assistant", "tool", "assistant"]
    assert record["messages"][0]["content"] == SFT_SYSTEM_PROMPT
    for message in record["messages"]:
        if message["role"] == "assistant":
            assert set(message["tool_call"]) == {"tool", "args"}

    again = str(tmp_path / "sft2.jsonl")
    export_sft(buffer, again)
    assert open(path, "rb").read() == open(again, "rb").read()


def test_export_sft_refuses_empty_buffer(tmp_path):
    with pytest.raises(EmptyBufferError):
        export_sft(TrajectoryBuffer(threshold=0.5), str(tmp_path / "x.jsonl"))


# ---------------------------------------------------------------------------
# consensus@k and pass@k.


def test_consensus_majority_and_filters():
    group = [answered("t", a, ideal="A", unsure="C", seed=i) for i, a in enumerate("AAB")]
    assert consensus_outcomes(group, 3) == {"t": True}

    filtered = [
        answered("t", "C", ideal="B", unsure="C"),
        truncated("t", ideal="B"),
        answered("t", "B", ideal="B", unsure="C"),
    ]
    assert consensus_outcomes(filtered, 3) == {"t": True}  # only the B vote survives


def test_consensus_tie_breaks_lexicographically():
    tie = [answered("t", "B", ideal="B"), answered("t", "A", ideal="B")]
    assert consensus_outcomes(tie, 2) == {"t": False}  # A wins the tie
    tie_for_a = [answered("t", "B", ideal="A"), answered("t", "A", ideal="A")]
    assert consensus_outcomes(tie_for_a, 2) == {"t": True}


def test_consensus_all_votes_filtered_counts_incorrect():
    group = [answered("t", "C", ideal="A", unsure="C"), truncated("t")]
    assert consensus_outcomes(group, 2) == {"t": False}
    with pytest.raises(ValueError):
        consensus_outcomes(group, 0)


def test_consensus_uses_only_the_first_k():
    group = [
        answered("t", "B", ideal="A"),
        answered("t", "A", ideal="A"),
        answered("t", "A", ideal="A"),
    ]
    assert consensus_outcomes(group, 1) == {"t": False}
    assert consensus_outcomes(group, 3) == {"t": True}
    assert consensus_at_k(group, 3) == 1.0


def test_pass_at_k_counts_any_hit():
    group = [answered("t", "B", ideal="A"), answered("t", "A", ideal="A")]
    assert pass_outcomes(group, 1) == {"t": False}
    assert pass_outcomes(group, 2) == {"t": True}
    mixed = group + [answered("u", "B", ideal="A"), answered("u", "B", ideal="A")]
    assert pass_at_k(mixed, 2) == 0.5
    with pytest.raises(ValueError):
        pass_outcomes(group, -1)


def test_pass_at_k_is_monotone_in_k():
    rng = random.Random(0)
    trajectories = []
    for i in range(20):
        for _ in range(8):
            letter = "A" if rng.random() < 0.4 else "B"
            trajectories.append(answered(f"t{i}", letter, ideal="A"))
    values = [pass_at_k(trajectories, k) for k in range(1, 9)]
    assert values == sorted(values)


def test_consensus_grows_with_k_for_majority_correct_policies():
    tasks = [make_task(task_id=f"t{i}", ideal="B", unsure="C") for i in range(60)]
    trajectories = rollout(
        env_factory=CloningEnv,
        policy_factory=lambda task, seed: NoisyAnswerPolicy(task, seed, 0.7),
        tasks=tasks,
        k=15,
        base_seed=23,
    )
    assert consensus_at_k(trajectories, 15) >= consensus_at_k(trajectories, 1)


# ---------------------------------------------------------------------------
# Bootstrap intervals.


def test_bootstrap_degenerate_outcomes():
    assert bootstrap_ci([False] * 12) == (0.0, 0.0)
    assert bootstrap_ci([True] * 12) == (1.0, 1.0)


def test_bootstrap_width_shrinks_with_more_tasks():
    rng = random.Random(1)
    small = [rng.random() < 0.7 for _ in range(10)]
    large = [rng.random() < 0.7 for _ in range(100)]
    lo_s, hi_s = bootstrap_ci(small, seed=0)
    lo_l, hi_l = bootstrap_ci(large, seed=0)
    assert (hi_l - lo_l) < (hi_s - lo_s)


def test_bootstrap_is_seeded_and_validated():
    outcomes = [True, False, True, True]
    assert bootstrap_ci(outcomes, seed=9) == bootstrap_ci(outcomes, seed=9)
    with pytest.raises(ValueError):
        bootstrap_ci([])
    with pytest.raises(ValueError):
        bootstrap_ci(outcomes, n_resamples=50)
    with pytest.raises(ValueError):
        bootstrap_ci(outcomes, level=1.0)


def test_evaluate_emits_one_row_per_metric_and_k():
    trajectories = [answered(f"t{i}", "A" if i % 2 else "B", ideal="A") for i in range(8)]
    rows = evaluate(trajectories, max_k=3, seed=5, n_resamples=200)
    assert len(rows) == 6
    assert [(r["metric"], r["k"]) for r in rows] == [
        ("consensus", 1), ("consensus", 2), ("consensus", 3),
        ("pass", 1), ("pass", 2), ("pass", 3),
    ]
    for row in rows:
        assert set(row) == {"metric", "k", "value", "ci_low", "ci_high", "n_tasks", "seed"}
        assert row["n_tasks"] == 8 and row["seed"] == 5
        assert row["ci_low"] <= row["value"] <= row["ci_high"]
    assert rows[0]["value"] == consensus_at_k(trajectories, 1)
    assert rows[3]["value"] == pass_at_k(trajectories, 1)
    with pytest.raises(ValueError):
        evaluate(trajectories, max_k=0)
