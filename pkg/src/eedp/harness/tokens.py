"""Token counting for prompts.

The default counter is a byte-length heuristic (roughly 4 bytes per token for
English-like text).  Exact counts need a tiktoken ``.tiktoken`` vocabulary
file, loaded with :class:`BpeTokenizer`.
"""
from __future__ import annotations

import math
import os
from pathlib import Path
from typing import Protocol

CL100K_PATTERN = (
    r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+"""
    r"""|\s++$|\s*[\r\n]|\s+(?!\S)|\s"""
)
CL100K_SHA256 = "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7"

VOCAB_ENV = "EEDP_BPE_VOCAB"


class Tokenizer(Protocol):
    name: str

    def __call__(self, text: str) -> int: ...


class HeuristicTokenizer:
    """Approximate: ceil(utf-8 bytes / 4)."""

    name = "heuristic-bytes/4"
    exact = False

    def __call__(self, text: str) -> int:
        return math.ceil(len(text.encode("utf-8")) / 4)


class BpeTokenizer:
    """Exact BPE counts from a local tiktoken vocabulary (cl100k_base by default)."""

    exact = True

    def __init__(self, vocab_path: str | Path, pattern: str = CL100K_PATTERN,
                 expected_hash: str | None = CL100K_SHA256, name: str = "cl100k_base"):
        import tiktoken
        from tiktoken.load import load_tiktoken_bpe

        vocab_path = Path(vocab_path)
        if not vocab_path.is_file():
            raise FileNotFoundError(f"BPE vocabulary not found: {vocab_path}")
        ranks = load_tiktoken_bpe(str(vocab_path), expected_hash=expected_hash)
        self._enc = tiktoken.Encoding(name, pat_str=pattern, mergeable_ranks=ranks,
                                      special_tokens={})
        self.name = f"bpe:{name}"

    def __call__(self, text: str) -> int:
        return len(self._enc.encode_ordinary(text))


def default_vocab_path() -> Path | None:
    """Vocabulary from ``$EEDP_BPE_VOCAB``, if set."""
    env = os.environ.get(VOCAB_ENV)
    return Path(env) if env else None


def get_tokenizer(choice: str | None = None) -> Tokenizer:
    """``None``/``"heuristic"`` -> heuristic; ``"bpe"`` -> env vocabulary; else a vocab path."""
    if choice in (None, "", "heuristic"):
        return HeuristicTokenizer()
    if choice == "bpe":
        path = default_vocab_path()
        if path is None:
            raise FileNotFoundError(f"exact token counts requested but ${VOCAB_ENV} is not set")
        return BpeTokenizer(path)
    return BpeTokenizer(choice)


def count_tokens(text: str, tokenizer: Tokenizer | None = None) -> int:
    return (tokenizer or HeuristicTokenizer())(text)
