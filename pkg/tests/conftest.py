from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

from eedp.graph import from_arcs

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def diamond():
    return from_arcs(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture
def chain3():
    return from_arcs(3, [(0, 1), (1, 2)])


def bpe_vocab_path() -> Path | None:
    """A cl100k_base vocabulary: $EEDP_BPE_VOCAB, else a copy shipped inside marimo."""
    env = os.environ.get("EEDP_BPE_VOCAB")
    if env:
        return Path(env)
    try:
        import marimo
    except ImportError:
        return None
    candidate = Path(marimo.__file__).parent / "_lsp" / "copilot" / "cl100k_base.tiktoken"
    return candidate if candidate.is_file() else None


def zinc_dir() -> Path | None:
    """Directory holding ZINC_test_A.txt / ZINC_test_graph_indicator.txt."""
    for candidate in (os.environ.get("EEDP_ZINC_DIR"), Path(__file__).parent / "data" / "ZINC_test"):
        if candidate and (Path(candidate) / "ZINC_test_A.txt").is_file():
            return Path(candidate)
    return None


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
