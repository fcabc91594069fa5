"""Sentence salience scoring and top-fraction highlight suggestions.

The scorer is a pluggable contract so a neural model (local or remote) can
replace the built-in heuristic. The built-in scorer is deterministic:
cosine similarity between each sentence's content-lemma frequency vector
and the document centroid, rescaled so the best sentence scores 1.0.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Protocol

import httpx

from .highlights import PendingSuggestion
from .textpipe import Document


class SalienceScorer(Protocol):
    def score_sentences(self, doc: Document) -> list[float]:
        """One score in [0, 1] per sentence, in document order."""


@dataclass(frozen=True)
class SuggestionSet:
    document_id: str
    items: tuple[PendingSuggestion, ...]


def _content_counts(doc: Document) -> list[Counter[str]]:
    return [Counter(s.content_lemmas) for s in doc.sentences]


def _cosine(a: Counter[str], b: Counter[str]) -> float:
    if not a or not b:
        return 0.0
    dot = sum(count * b[lemma] for lemma, count in a.items())
    if dot == 0:
        return 0.0
    norm_a = math.sqrt(sum(c * c for c in a.values()))
    norm_b = math.sqrt(sum(c * c for c in b.values()))
    return dot / (norm_a * norm_b)


class CentroidScorer:
    """Built-in deterministic scorer; safe for concurrent read-only use."""

    def score_sentences(self, doc: Document) -> list[float]:
        vectors = _content_counts(doc)
        centroid: Counter[str] = Counter()
        for v in vectors:
            centroid.update(v)
        raw = [_cosine(v, centroid) for v in vectors]
        top = max(raw, default=0.0)
        if top <= 0.0:
            return [0.0] * len(raw)
        return [score / top for score in raw]


def score_builtin(doc: Document) -> list[float]:
    return CentroidScorer().score_sentences(doc)


class HttpScorer:
    """Client for an external scorer endpoint, falling back to the built-in.

    Wire shape: POST {"sentences": [text, ...]} -> {"scores": [number, ...]}.
    Any transport failure or malformed response falls back.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 5.0,
        client: httpx.Client | None = None,
        fallback: SalienceScorer | None = None,
    ):
        self.endpoint = endpoint
        self.timeout = timeout
        self._client = client
        self._fallback = fallback or CentroidScorer()

    def score_sentences(self, doc: Document) -> list[float]:
        sentences = [doc.text[s.span.start : s.span.end] for s in doc.sentences]
        try:
            client = self._client or httpx.Client(timeout=self.timeout)
            try:
                response = client.post(self.endpoint, json={"sentences": sentences})
                response.raise_for_status()
                scores = response.json()["scores"]
            finally:
                if client is not self._client:
                    client.close()
            if (
                not isinstance(scores, list)
                or len(scores) != len(sentences)
                or not all(isinstance(s, (int, float)) for s in scores)
            ):
                raise ValueError("bad scores payload")
            return [min(1.0, max(0.0, float(s))) for s in scores]
        except (httpx.HTTPError, ValueError, KeyError, TypeError):
            return self._fallback.score_sentences(doc)


def suggest(doc: Document, scorer: SalienceScorer | None = None, ratio: float = 0.3) -> SuggestionSet:
    """Top ``max(1, ceil(ratio * n))`` sentences as pending suggestions.

    Ties break toward the earlier sentence; output is in document order.
    An empty document yields an empty set.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    n = len(doc.sentences)
    if n == 0:
        return SuggestionSet(document_id=doc.id, items=())
    scores = (scorer or CentroidScorer()).score_sentences(doc)
    if len(scores) != n:
        raise ValueError(f"scorer returned {len(scores)} scores for {n} sentences")
    k = max(1, math.ceil(ratio * n))
    ranked = sorted(range(n), key=lambda i: (-scores[i], i))[:k]
    items = tuple(
        PendingSuggestion(id=f"sent-{i}", span=doc.sentences[i].span, score=scores[i])
        for i in sorted(ranked)
    )
    return SuggestionSet(document_id=doc.id, items=items)
