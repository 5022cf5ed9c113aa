"""Agent policies: computation graphs, chat clients, and the gradient demo."""

from .chat import ChatReply, HttpChatClient, MockChatClient, schema_to_wire
from .graph import (
    AgentState,
    Graph,
    GraphContext,
    Node,
    ReactTurn,
    plasmid_retriever,
    rag_graph,
    react_graph,
    rejection_sampling_graph,
    run_graph,
    single_policy_graph,
)
from .poisson import PoissonNode, fit_poisson_rate, poisson_score_gradient
from .policies import (
    DEFAULT_SYSTEM_PROMPT,
    NOOP_CALL,
    NoisyAnswerPolicy,
    ReactPolicy,
    ScriptedPolicy,
    build_messages,
    parse_tool_call,
    react_policy,
)

__all__ = [
    "AgentState",
    "Graph",
    "GraphContext",
    "Node",
    "ReactTurn",
    "run_graph",
    "single_policy_graph",
    "rag_graph",
    "rejection_sampling_graph",
    "react_graph",
    "plasmid_retriever",
    "ChatReply",
    "MockChatClient",
    "HttpChatClient",
    "schema_to_wire",
    "PoissonNode",
    "poisson_score_gradient",
    "fit_poisson_rate",
    "DEFAULT_SYSTEM_PROMPT",
    "NOOP_CALL",
    "parse_tool_call",
    "build_messages",
    "react_policy",
    "ReactPolicy",
    "ScriptedPolicy",
    "NoisyAnswerPolicy",
]
