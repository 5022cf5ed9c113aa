"""Chat-model clients: a scripted mock for tests and an HTTP binding.

The wire format is a role-tagged message list with tool schemas attached.
A reply carries free text plus an optional structured tool call.
"""
from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass

import requests

from ..envs.base import ToolCall, ToolSchema
from ..errors import BackendUnavailableError, PolicyUnavailableError

__all__ = [
    "ChatReply",
    "MockChatClient",
    "HttpChatClient",
    "schema_to_wire",
    "DEFAULT_API_KEY_ENV",
]

DEFAULT_API_KEY_ENV = "CLONEGYM_API_KEY"


@dataclass(frozen=True)
class ChatReply:
    content: str = ""
    tool_call: ToolCall | None = None


def schema_to_wire(schema: ToolSchema) -> dict:
    """Render a ToolSchema as a chat-completions function tool."""
    type_map = {
        "text": {"type": "string"},
        "sequence": {"type": "string"},
        "number": {"type": "number"},
        "integer": {"type": "integer"},
        "boolean": {"type": "boolean"},
        "sequence_list": {
            "anyOf": [
                {"type": "array", "items": {"type": "string"}},
                {"type": "string"},
            ]
        },
    }
    properties = {}
    required = []
    for param in schema.params:
        prop = dict(type_map[param.type])
        if param.description:
            prop["description"] = param.description
        properties[param.name] = prop
        if param.required:
            required.append(param.name)
    return {
        "type": "function",
        "function": {
            "name": schema.name,
            "description": schema.description,
            "parameters": {
                "type": "object",
                "properties": properties,
                "required": required,
            },
        },
    }


class MockChatClient:
    """Replays a script of replies; raisable entries simulate transport faults.

    Thread-safe: concurrent complete() calls consume the script in order.
    """

    def __init__(self, replies, temperature: float = 0.0):
        self._replies = list(replies)
        self._lock = threading.Lock()
        self.temperature = temperature
        self.requests: list[tuple[tuple[dict, ...], tuple[ToolSchema, ...]]] = []

    def complete(self, messages, schemas=()) -> ChatReply:
        with self._lock:
            self.requests.append((tuple(messages), tuple(schemas)))
            if not self._replies:
                raise PolicyUnavailableError("mock script exhausted")
            item = self._replies.pop(0)
        if isinstance(item, Exception):
            raise item
        if isinstance(item, ChatReply):
            return item
        if isinstance(item, ToolCall):
            return ChatReply(tool_call=item)
        return ChatReply(content=str(item))


class HttpChatClient:
    """Chat-completions endpoint client with exponential-backoff retries.

    The API key is read from an environment variable, never stored in code
    or configuration files. Safe for concurrent in-flight requests.
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        temperature: float = 0.0,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        timeout: float = 60.0,
        max_attempts: int = 3,
        backoff: float = 0.5,
        sleep=time.sleep,
        session=None,
    ):
        if temperature < 0:
            raise ValueError("temperature must be non-negative")
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.temperature = temperature
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_attempts = max_attempts
        self.backoff = backoff
        self._sleep = sleep
        self._session = session or requests

    def complete(self, messages, schemas=()) -> ChatReply:
        payload = {
            "model": self.model,
            "messages": list(messages),
            "temperature": self.temperature,
        }
        if schemas:
            payload["tools"] = [schema_to_wire(s) for s in schemas]
        headers = {}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        url = f"{self.base_url}/chat/completions"
        last_error = None
        for attempt in range(self.max_attempts):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self._session.post(
                    url, json=payload, headers=headers, timeout=self.timeout
                )
                response.raise_for_status()
                return self._parse(response.json())
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
        raise PolicyUnavailableError(
            f"chat endpoint unreachable after {self.max_attempts} attempts: {last_error}"
        )

    @staticmethod
    def _parse(data: dict) -> ChatReply:
        try:
            message = data["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendUnavailableError(f"malformed chat response: {exc}") from exc
        content = message.get("content") or ""
        calls = message.get("tool_calls") or []
        if calls:
            fn = calls[0].get("function", {})
            name = fn.get("name")
            raw_args = fn.get("arguments") or "{}"
            try:
                args = json.loads(raw_args) if isinstance(raw_args, str) else raw_args
            except ValueError:
                args = None
            if isinstance(name, str) and isinstance(args, dict):
                return ChatReply(content=content, tool_call=ToolCall(tool=name, args=args))
            # unreadable structured call: leave it to the text fallback parser
        return ChatReply(content=content)
