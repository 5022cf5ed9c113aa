"""Sequential decision environments with text observations and tool-call actions."""

from .base import (
    Observation,
    ToolCall,
    ToolParam,
    ToolSchema,
    export_tool_schemas,
    validate_call,
)
from .calculator import CALCULATOR_SCHEMAS, CalculatorEnv, answers_match
from .cloning import CLONING_SCHEMAS, CloningEnv, reward_cloning
from .expr import evaluate, render_number
from .tasks import (
    CalculatorTask,
    Option,
    Task,
    bundled_task_path,
    extract_bracketed_sequences,
    load_calculator_tasks,
    load_tasks,
    parse_task,
)

__all__ = [
    "Observation",
    "ToolCall",
    "ToolParam",
    "ToolSchema",
    "validate_call",
    "export_tool_schemas",
    "CalculatorEnv",
    "CALCULATOR_SCHEMAS",
    "answers_match",
    "CloningEnv",
    "CLONING_SCHEMAS",
    "reward_cloning",
    "evaluate",
    "render_number",
    "Option",
    "Task",
    "CalculatorTask",
    "parse_task",
    "load_tasks",
    "load_calculator_tasks",
    "extract_bracketed_sequences",
    "bundled_task_path",
]
