"""Episode protocol: text observations, validated tool-call actions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = [
    "ToolParam",
    "ToolSchema",
    "ToolCall",
    "Observation",
    "validate_call",
    "export_tool_schemas",
]

PARAM_TYPES = ("text", "number", "integer", "boolean", "sequence", "sequence_list")


@dataclass(frozen=True)
class ToolParam:
    name: str
    type: str
    required: bool = True
    description: str = ""

    def __post_init__(self) -> None:
        if self.type not in PARAM_TYPES:
            raise ValueError(f"unknown param type {self.type!r}")


@dataclass(frozen=True)
class ToolSchema:
    name: str
    description: str
    params: tuple[ToolParam, ...] = ()

    def signature(self) -> str:
        return f"{self.name}({', '.join(p.name for p in self.params)})"


@dataclass(frozen=True)
class ToolCall:
    tool: str
    args: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"tool": self.tool, "args": self.args}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ToolCall":
        obj = json.loads(text)
        if not isinstance(obj, dict) or not isinstance(obj.get("tool"), str):
            raise ValueError("action must be an object with a 'tool' string")
        args = obj.get("args", {})
        if not isinstance(args, dict):
            raise ValueError("'args' must be an object")
        return cls(tool=obj["tool"], args=args)


@dataclass(frozen=True)
class Observation:
    text: str
    reward: float = 0.0
    done: bool = False
    truncated: bool = False

    def __post_init__(self) -> None:
        if self.done and self.truncated:
            raise ValueError("done and truncated cannot both be true")

    def to_json(self) -> str:
        return json.dumps(
            {"text": self.text, "reward": self.reward, "done": self.done, "truncated": self.truncated},
            sort_keys=True,
        )


def _type_ok(value, type_name: str) -> bool:
    if type_name in ("text", "sequence"):
        return isinstance(value, str)
    if type_name == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if type_name == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if type_name == "boolean":
        return isinstance(value, bool)
    if type_name == "sequence_list":
        # either a list of sequence names or the name of a stored pool
        if isinstance(value, str):
            return True
        return isinstance(value, list) and all(isinstance(v, str) for v in value)
    return False


def validate_call(schemas: dict[str, ToolSchema], call: ToolCall) -> str | None:
    """None when valid, else a human-readable problem description."""
    schema = schemas.get(call.tool)
    if schema is None:
        known = ", ".join(sorted(schemas))
        return f"unknown tool {call.tool!r}; available tools: {known}"
    by_name = {p.name: p for p in schema.params}
    for key in call.args:
        if key not in by_name:
            return f"{call.tool}: unexpected argument {key!r}"
    for param in schema.params:
        if param.name not in call.args:
            if param.required:
                return f"{call.tool}: missing required argument {param.name!r}"
            continue
        if not _type_ok(call.args[param.name], param.type):
            return f"{call.tool}: argument {param.name!r} must be {param.type}"
    return None


def export_tool_schemas(schemas: tuple[ToolSchema, ...] | list[ToolSchema]) -> str:
    """One JSON object per line, mirroring exactly what the validator accepts."""
    lines = []
    for schema in schemas:
        lines.append(
            json.dumps(
                {
                    "name": schema.name,
                    "description": schema.description,
                    "params": [
                        {
                            "name": p.name,
                            "type": p.type,
                            "required": p.required,
                            "description": p.description,
                        }
                        for p in schema.params
                    ],
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"
