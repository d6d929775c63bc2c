from .template import (
    DEFAULT_TEMPLATE,
    PartDescriptions,
    PromptTemplate,
    build_prompt,
    parse_llm_output,
    serialize_parts,
)
from .client import CompletionClient, HttpCompletionClient, LlmRequest, LlmResponse
from .cache import PromptCache
from .describe import describe_batch, describe_parts

__all__ = [
    "DEFAULT_TEMPLATE",
    "PromptTemplate",
    "PartDescriptions",
    "build_prompt",
    "parse_llm_output",
    "serialize_parts",
    "LlmRequest",
    "LlmResponse",
    "CompletionClient",
    "HttpCompletionClient",
    "PromptCache",
    "describe_parts",
    "describe_batch",
]
