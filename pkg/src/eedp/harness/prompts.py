"""Zero-shot prompt templates and answer extraction."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..benchmark import Task, TestCase
from ..flatten import FlattenedGraph, Method
from .tokens import Tokenizer, count_tokens

PROMPT_VERSION = "v1"

PREAMBLE = "You are given a directed graph. Nodes are numbered from 0 to {last}."
GRAPH_INTRO = "The graph is described below.\n"
QUESTIONS = {
    Task.EP_CP: (
        "Question: Is there a directed path from node {s} to node {t}?\n"
        'Answer with only "yes" or "no".'
    ),
    Task.EP_DP: (
        "Question: Is there a directed path from node {s} to node {t}? "
        "If there is, give the length (number of edges) of such a path. "
        "If there is no directed path, the path length is -1.\n"
        "Answer with a single integer only; answer -1 if there is no path."
    ),
}


class _Malformed:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MALFORMED"


MALFORMED = _Malformed()


@dataclass(frozen=True)
class PromptRecord:
    case: TestCase
    method: Method
    text: str
    token_count: int
    node_count: int

    @property
    def key(self) -> str:
        return f"{self.case.key}:{self.method.value}"


def build_prompt(flat: FlattenedGraph, case: TestCase, node_count: int,
                 tokenizer: Tokenizer | None = None) -> PromptRecord:
    text = (
        PREAMBLE.format(last=node_count - 1) + "\n"
        + GRAPH_INTRO + flat.text + "\n\n"
        + QUESTIONS[case.task].format(s=case.source, t=case.target)
    )
    return PromptRecord(case, flat.method, text, count_tokens(text, tokenizer), node_count)


_YES_NO = re.compile(r"\b(yes|no)\b", re.IGNORECASE)
_INTEGER = re.compile(r"(?<![\w.])[-−]?\d+")


def parse_answer(task: Task, raw: str):
    """``"yes"``/``"no"`` for EP-CP, an int for EP-DP, or ``MALFORMED``."""
    if task is Task.EP_CP:
        m = _YES_NO.search(raw)
        return m.group(1).lower() if m else MALFORMED
    m = _INTEGER.search(raw)
    return int(m.group(0).replace("−", "-")) if m else MALFORMED
