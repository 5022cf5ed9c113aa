"""Task records and loaders for the question-answering environments."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from ..errors import ParseError
from ..sequences import CIRCULAR, LINEAR, Sequence

__all__ = [
    "Option",
    "Task",
    "CalculatorTask",
    "parse_task",
    "load_tasks",
    "load_calculator_tasks",
    "extract_bracketed_sequences",
    "bundled_task_path",
]


@dataclass(frozen=True)
class Option:
    letter: str
    text: str


@dataclass(frozen=True)
class Task:
    """A multiple-choice question with optional preloaded input sequences."""

    id: str
    question: str
    options: tuple[Option, ...]
    ideal: str
    unsure_letter: str | None = None
    inputs: tuple[Sequence, ...] = ()

    def __post_init__(self) -> None:
        letters = [o.letter for o in self.options]
        if len(set(letters)) != len(letters):
            raise ValueError(f"task {self.id}: duplicate option letters")
        if self.ideal not in letters:
            raise ValueError(f"task {self.id}: ideal {self.ideal!r} not among options")
        if self.unsure_letter is not None and self.unsure_letter not in letters:
            raise ValueError(f"task {self.id}: unsure letter not among options")

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(o.letter for o in self.options)


@dataclass(frozen=True)
class CalculatorTask:
    id: str
    question: str
    ideal: float


def parse_task(obj: dict) -> Task:
    options = tuple(Option(letter=o["letter"], text=o["text"]) for o in obj["options"])
    inputs = []
    for row in obj.get("inputs", []):
        topology = row.get("topology", LINEAR)
        if topology not in (LINEAR, CIRCULAR):
            raise ParseError(f"task {obj.get('id')}: bad topology {topology!r}")
        inputs.append(Sequence(name=row["name"], bases=row["bases"], topology=topology))
    return Task(
        id=obj["id"],
        question=obj["question"],
        options=options,
        ideal=obj["ideal"],
        unsure_letter=obj.get("unsure_letter"),
        inputs=tuple(inputs),
    )


def load_tasks(path: str) -> list[Task]:
    tasks = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                tasks.append(parse_task(json.loads(line)))
            except (KeyError, ValueError) as exc:
                raise ParseError(f"bad task record: {exc}", lineno) from exc
    return tasks


def load_calculator_tasks(path: str) -> list[CalculatorTask]:
    tasks = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                tasks.append(
                    CalculatorTask(id=obj["id"], question=obj["question"], ideal=float(obj["ideal"]))
                )
            except (KeyError, ValueError) as exc:
                raise ParseError(f"bad calculator task: {exc}", lineno) from exc
    return tasks


def bundled_task_path(name: str) -> str:
    """Filesystem path of a packaged task dataset, e.g. 'cloning_demo.jsonl'."""
    path = resources.files("clonegym").joinpath("data", "tasks", name)
    return str(path)


_BRACKETED = re.compile(r"\[([ACGTUacgtu]{8,})\]")


def extract_bracketed_sequences(question: str, prefix: str = "input") -> tuple[Sequence, ...]:
    """Lift [ACGT...] runs out of question text into linear input sequences.

    Question styles that embed raw sequences inline can be loaded with this
    and the spans referred to by name (input_1, input_2, ...).
    """
    found = []
    for i, match in enumerate(_BRACKETED.finditer(question), start=1):
        found.append(Sequence(name=f"{prefix}_{i}", bases=match.group(1), topology=LINEAR))
    return tuple(found)
