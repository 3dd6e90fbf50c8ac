"""Run configuration: one flat JSON document, ``${VAR}`` expanded from the environment."""
from __future__ import annotations

import json
import os
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


_VAR = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")


def _interpolate(value):
    if isinstance(value, str):
        def sub(m: re.Match) -> str:
            name = m.group(1)
            if name not in os.environ:
                raise ConfigError(f"environment variable {name} is not set")
            return os.environ[name]
        return _VAR.sub(sub, value)
    if isinstance(value, list):
        return [_interpolate(v) for v in value]
    return value


@dataclass
class RunConfig:
    dataset: str | None = None
    benchmark: str | None = None
    methods: list[str] = field(default_factory=lambda: ["eedp"])
    tasks: list[str] = field(default_factory=lambda: ["EP_CP", "EP_DP"])
    seed: int = 0
    sample: int | None = None
    per_bucket: int = 4
    compress: bool = False
    tokenizer: str = "heuristic"
    client: str = "oracle"
    client_seed: int = 0
    transcript: str | None = None
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4-turbo"
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 60.0
    max_retries: int = 5
    requests_per_minute: float | None = None
    concurrency: int = 4
    output_dir: str = "runs"

    def validate(self) -> "RunConfig":
        from .benchmark import Task
        from .flatten import Method

        try:
            self.methods = [Method.parse(m).value for m in self.methods]
            self.tasks = [Task(t).value for t in self.tasks]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.per_bucket < 1 or self.concurrency < 1:
            raise ConfigError("per_bucket and concurrency must be >= 1")
        if self.client not in ("oracle", "random", "scripted", "openai"):
            raise ConfigError(f"unknown client {self.client!r}")
        if self.client == "scripted" and not self.transcript:
            raise ConfigError("scripted client needs a transcript")
        return self

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        return cls(**{k: _interpolate(v) for k, v in doc.items()})

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(doc)

    def override(self, **flags) -> "RunConfig":
        for key, value in flags.items():
            if value is not None:
                setattr(self, key, value)
        return self

    def to_json(self) -> str:
        # the API key itself is never a field; only the variable name is stored
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"
