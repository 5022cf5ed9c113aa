"""GSM8K-style environment: a calculator tool and answer submission."""

from __future__ import annotations

from ..errors import EpisodeOverError, ExpressionError
from .base import Observation, ToolCall, ToolParam, ToolSchema, validate_call
from .expr import evaluate, render_number
from .tasks import CalculatorTask

__all__ = ["CalculatorEnv", "CALCULATOR_SCHEMAS", "answers_match"]

DEFAULT_MAX_STEPS = 10
RELATIVE_TOLERANCE = 1e-6

CALCULATOR_SCHEMAS = (
    ToolSchema(
        name="calculator",
        description="Calculates the result of a mathematical expression.",
        params=(ToolParam("expr", "text", description="expression to evaluate"),),
    ),
    ToolSchema(
        name="submit_answer",
        description="Submits a proposed answer and checks it. Ends the episode.",
        params=(ToolParam("answer", "text", description="final numeric answer"),),
    ),
)


def answers_match(answer: float, ideal: float) -> bool:
    return abs(answer - ideal) <= RELATIVE_TOLERANCE * max(1.0, abs(ideal))


class CalculatorEnv:
    """Rewards: 1 correct answer, -1 invalid tool call, 0 otherwise."""

    def __init__(self, task: CalculatorTask, max_steps: int = DEFAULT_MAX_STEPS):
        if max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        self.task = task
        self.max_steps = max_steps
        self.step_count = 0
        self.finished = False
        self.submitted: str | None = None

    def tool_schemas(self) -> tuple[ToolSchema, ...]:
        return CALCULATOR_SCHEMAS

    def reset(self) -> Observation:
        self.step_count = 0
        self.finished = False
        self.submitted = None
        lines = [self.task.question, "", "Tools:"]
        lines.extend(f"- {schema.signature()}" for schema in CALCULATOR_SCHEMAS)
        return Observation(text="\n".join(lines))

    def step(self, action: ToolCall) -> Observation:
        if self.finished:
            raise EpisodeOverError("episode already ended; call reset")
        self.step_count += 1
        schemas = {s.name: s for s in CALCULATOR_SCHEMAS}
        problem = validate_call(schemas, action)
        if problem is not None:
            return self._continue(f"invalid tool call: {problem}", reward=-1.0)
        if action.tool == "calculator":
            try:
                value = evaluate(action.args["expr"])
            except ExpressionError as exc:
                return self._continue(f"invalid tool call: {exc}", reward=-1.0)
            return self._continue(render_number(value), reward=0.0)
        # submit_answer: always ends the episode
        self.finished = True
        try:
            submitted = float(action.args["answer"])
        except ValueError:
            self.submitted = action.args["answer"]
            return Observation(text="answer is not a number", reward=0.0, done=True)
        self.submitted = render_number(submitted)
        if answers_match(submitted, self.task.ideal):
            return Observation(text="correct", reward=1.0, done=True)
        return Observation(text="incorrect", reward=0.0, done=True)

    def _continue(self, text: str, reward: float) -> Observation:
        if self.step_count >= self.max_steps:
            self.finished = True
            return Observation(text=text, reward=reward, truncated=True)
        return Observation(text=text, reward=reward)
