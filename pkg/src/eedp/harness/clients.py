"""LLM clients: an OpenAI-compatible HTTP client and offline test doubles.

Every client is a callable taking a :class:`PromptRecord` and returning the
raw completion text.  Mock clients also look at the attached test case.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import threading
import time
from pathlib import Path

import httpx

from ..benchmark import Task
from .prompts import PromptRecord

log = logging.getLogger(__name__)


class ClientError(RuntimeError):
    kind = "endpoint"


class AuthError(ClientError):
    kind = "auth"


class EndpointTimeout(ClientError):
    kind = "timeout"


class MalformedResponse(ClientError):
    kind = "malformed_response"


class OracleClient:
    """Answers from the gold labels; a correct harness must score 100%."""

    name = "oracle"

    def __call__(self, prompt: PromptRecord) -> str:
        case = prompt.case
        if case.task is Task.EP_CP:
            return "yes" if case.gold_cp else "no"
        return str(case.gold_dp)


class RandomClient:
    """Uniform guesses: yes/no for EP-CP, an integer in [-1, node_count] for EP-DP."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def __call__(self, prompt: PromptRecord) -> str:
        rng = random.Random(f"{self.seed}:{prompt.key}")
        if prompt.case.task is Task.EP_CP:
            return rng.choice(["yes", "no"])
        return str(rng.randint(-1, prompt.node_count))


def prompt_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ScriptedClient:
    """Replays recorded responses keyed by the SHA-256 of the prompt text."""

    name = "scripted"

    def __init__(self, responses: dict[str, str]):
        self.responses = dict(responses)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedClient":
        responses = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    doc = json.loads(line)
                    responses[doc["prompt_sha256"]] = doc["response"]
        return cls(responses)

    def __call__(self, prompt: PromptRecord) -> str:
        try:
            return self.responses[prompt_digest(prompt.text)]
        except KeyError:
            raise ClientError(f"no scripted response for {prompt.key}") from None


class RateLimiter:
    """Spaces calls at least ``60 / rpm`` seconds apart across threads."""

    def __init__(self, requests_per_minute: float | None):
        self.interval = 60.0 / requests_per_minute if requests_per_minute else 0.0
        self._lock = threading.Lock()
        self._next = 0.0

    def acquire(self) -> None:
        if not self.interval:
            return
        with self._lock:
            now = time.monotonic()
            wait = self._next - now
            self._next = max(now, self._next) + self.interval
        if wait > 0:
            time.sleep(wait)


class OpenAIChatClient:
    """Chat-completions over HTTP with retries and a shared rate limiter."""

    name = "openai"
    RETRY_STATUS = {408, 409, 429, 500, 502, 503, 504}

    def __init__(self, base_url: str = "https://api.openai.com/v1", model: str = "gpt-4-turbo",
                 api_key_env: str = "OPENAI_API_KEY", timeout: float = 60.0, max_retries: int = 5,
                 backoff: float = 1.0, requests_per_minute: float | None = None,
                 max_tokens: int = 16, transport: httpx.BaseTransport | None = None,
                 sleep=time.sleep):
        self.model = model
        self.max_retries = max_retries
        self.backoff = backoff
        self.max_tokens = max_tokens
        self.limiter = RateLimiter(requests_per_minute)
        self._sleep = sleep
        api_key = os.environ.get(api_key_env, "")
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._http = httpx.Client(base_url=base_url.rstrip("/"), headers=headers,
                                  timeout=timeout, transport=transport)

    def close(self) -> None:
        self._http.close()

    def __call__(self, prompt: PromptRecord) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": 0,
            "max_tokens": self.max_tokens,
        }
        last: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            self.limiter.acquire()
            try:
                resp = self._http.post("/chat/completions", json=payload)
            except httpx.TimeoutException as exc:
                last = EndpointTimeout(f"timeout: {exc}")
                continue
            except httpx.TransportError as exc:
                last = ClientError(f"transport error: {exc}")
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            if resp.status_code in self.RETRY_STATUS:
                last = ClientError(f"HTTP {resp.status_code}")
                log.info("retrying %s after HTTP %s", prompt.key, resp.status_code)
                continue
            if resp.status_code >= 400:
                raise ClientError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"] or ""
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponse(f"unexpected response body: {exc!r}") from None
        if isinstance(last, EndpointTimeout):
            raise last
        raise ClientError(f"gave up after {self.max_retries} retries: {last}")


def make_client(kind: str, **settings):
    if kind == "oracle":
        return OracleClient()
    if kind == "random":
        return RandomClient(settings.get("seed", 0))
    if kind == "scripted":
        return ScriptedClient.from_file(settings["transcript"])
    if kind == "openai":
        allowed = {"base_url", "model", "api_key_env", "timeout", "max_retries", "backoff",
                   "requests_per_minute", "max_tokens"}
        return OpenAIChatClient(**{k: v for k, v in settings.items() if k in allowed and v is not None})
    raise ValueError(f"unknown client {kind!r}")
