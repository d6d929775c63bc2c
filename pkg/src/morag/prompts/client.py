"""Completion endpoint client.

The wire contract is a POST of ``{"model", "prompt", "max_tokens"}`` (plus any
pass-through parameters) returning a JSON body with a completion text field --
either a top-level ``completion`` or the first ``choices[].text``.
"""

import os
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from ..errors import EndpointError

API_KEY_ENV = "MORAG_LLM_API_KEY"
DEFAULT_MAX_TOKENS = 256


@dataclass(frozen=True)
class LlmRequest:
    prompt: str
    max_tokens: int = DEFAULT_MAX_TOKENS
    model_id: str = ""
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LlmResponse:
    completion: str
    usage: dict = field(default_factory=dict)


class CompletionClient(Protocol):
    def complete(self, request: LlmRequest) -> LlmResponse: ...


def _extract_completion(body: dict) -> str:
    if isinstance(body.get("completion"), str):
        return body["completion"]
    choices = body.get("choices")
    if isinstance(choices, list) and choices and isinstance(choices[0], dict):
        text = choices[0].get("text")
        if isinstance(text, str):
            return text
    raise EndpointError(f"endpoint response lacks a completion text field: {body!r}")


class HttpCompletionClient:
    """Minimal synchronous client for a completion endpoint."""

    def __init__(self, endpoint: str, model: str = "", api_key: str | None = None, timeout: float = 30.0):
        if not endpoint:
            raise EndpointError("no completion endpoint configured")
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout

    def complete(self, request: LlmRequest) -> LlmResponse:
        body = {
            "model": request.model_id or self.model,
            "prompt": request.prompt,
            "max_tokens": request.max_tokens,
            **request.params,
        }
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.endpoint, json=body, headers=headers, timeout=self.timeout
            )
            response.raise_for_status()
            payload = response.json()
        except httpx.HTTPError as exc:
            raise EndpointError(f"completion request failed: {exc}") from exc
        except ValueError as exc:
            raise EndpointError(f"endpoint returned non-JSON body: {exc}") from exc
        usage = payload.get("usage") if isinstance(payload.get("usage"), dict) else {}
        return LlmResponse(completion=_extract_completion(payload), usage=usage)
