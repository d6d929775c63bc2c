"""Orchestration of description generation: cache, request, parse, retry."""

import hashlib
from concurrent.futures import ThreadPoolExecutor

from ..errors import ParseError, ParseExhaustedError
from ..retrieval.fileio import normalize_text
from .cache import PromptCache
from .client import DEFAULT_MAX_TOKENS, CompletionClient, LlmRequest
from .template import DEFAULT_TEMPLATE, PartDescriptions, PromptTemplate, build_prompt, parse_llm_output


def cache_key(text: str, template: PromptTemplate) -> str:
    payload = normalize_text(text) + "\n" + template.digest()
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def describe_parts(
    text: str,
    client: CompletionClient | None = None,
    cache: PromptCache | None = None,
    retries: int = 2,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    model_id: str = "",
) -> PartDescriptions:
    """Torso/hands/legs descriptions for one input description.

    A cache hit returns without touching the client. Otherwise the prompt is
    sent, the completion parsed, and the result cached; a malformed completion
    is re-requested up to ``retries`` times before giving up.
    """
    key = cache_key(text, template)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            parsed = parse_llm_output(hit)
            return PartDescriptions(
                torso=parsed.torso, hands=parsed.hands, legs=parsed.legs, source=text
            )
    if client is None:
        from ..errors import ConfigurationError

        raise ConfigurationError(
            "description not cached and no completion client configured; "
            "run describe with an endpoint or pre-populate the cache"
        )
    prompt = build_prompt(text, template)
    request = LlmRequest(prompt=prompt, max_tokens=max_tokens, model_id=model_id)
    last_error: ParseError | None = None
    for _ in range(retries + 1):
        response = client.complete(request)
        try:
            parsed = parse_llm_output(response.completion)
        except ParseError as exc:
            last_error = exc
            continue
        if cache is not None:
            cache.put(key, prompt, response.completion)
        return PartDescriptions(
            torso=parsed.torso, hands=parsed.hands, legs=parsed.legs, source=text
        )
    raise ParseExhaustedError(
        f"no parsable completion after {retries + 1} attempts",
        completion=last_error.completion if last_error else "",
    )


def describe_batch(
    texts,
    client: CompletionClient | None = None,
    cache: PromptCache | None = None,
    retries: int = 2,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    max_in_flight: int = 4,
) -> list[PartDescriptions]:
    """Concurrent :func:`describe_parts` over many descriptions.

    The in-flight cap bounds concurrent endpoint calls; cache access is
    already serialized by the cache itself.
    """
    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        futures = [
            pool.submit(describe_parts, text, client, cache, retries, template)
            for text in texts
        ]
        return [f.result() for f in futures]
