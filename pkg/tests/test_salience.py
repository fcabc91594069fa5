from __future__ import annotations

import math
import random
from collections import Counter

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summary_workbench.salience import (
    CentroidScorer,
    HttpScorer,
    score_builtin,
    suggest,
)
from summary_workbench.textpipe import analyze

TOY = "The cat saw the dog. The cat and the dog met the cat. A bird sang."


def oracle_scores(sentence_lemma_counts: list[dict[str, int]]) -> list[float]:
    """Independent re-derivation: cosine against the summed counts, max-rescaled."""
    centroid: Counter[str] = Counter()
    for counts in sentence_lemma_counts:
        centroid.update(counts)

    def cosine(v: dict[str, int]) -> float:
        dot = sum(c * centroid[w] for w, c in v.items())
        if dot == 0:
            return 0.0
        na = math.sqrt(sum(c * c for c in v.values()))
        nb = math.sqrt(sum(c * c for c in centroid.values()))
        return dot / (na * nb)

    raw = [cosine(v) for v in sentence_lemma_counts]
    top = max(raw, default=0.0)
    return [r / top if top else 0.0 for r in raw]


class TestBuiltinScorer:
    def test_single_sentence_scores_one(self):
        assert score_builtin(analyze("A bird sang.", "d")) == [1.0]

    def test_contentless_sentence_scores_zero(self):
        doc = analyze("The cat sat. Of the and!", "d")
        scores = score_builtin(doc)
        assert scores[1] == 0.0

    def test_repeating_frequent_lemmas_wins(self):
        doc = analyze(TOY, "d")
        scores = score_builtin(doc)
        expected = oracle_scores(
            [
                {"cat": 1, "see": 1, "dog": 1},
                {"cat": 2, "dog": 1, "meet": 1},
                {"bird": 1, "sing": 1},
            ]
        )
        assert scores == pytest.approx(expected, abs=1e-12)
        assert scores.index(max(scores)) == 1
        assert scores[1] == 1.0

    def test_empty_document(self):
        assert score_builtin(analyze("", "d")) == []


class TestSuggest:
    def make_doc(self, n: int):
        return analyze(" ".join(f"Topic number {i} matters greatly." for i in range(n)), "d")

    def test_ratio_counts(self):
        assert len(suggest(self.make_doc(10)).items) == 3
        assert len(suggest(self.make_doc(4)).items) == 2  # ceil(1.2)
        assert len(suggest(self.make_doc(1)).items) == 1

    def test_full_ratio_selects_all(self):
        assert len(suggest(self.make_doc(7), ratio=1.0).items) == 7

    def test_empty_document_yields_empty_set(self):
        assert suggest(analyze("", "d")).items == ()

    def test_invalid_ratio_rejected(self):
        with pytest.raises(ValueError):
            suggest(self.make_doc(3), ratio=0.0)
        with pytest.raises(ValueError):
            suggest(self.make_doc(3), ratio=1.5)

    def test_items_in_document_order_with_sentence_spans(self):
        doc = analyze(TOY, "d")
        got = suggest(doc, ratio=0.99)
        assert [s.span for s in got.items] == [s.span for s in doc.sentences]
        assert [s.id for s in got.items] == ["sent-0", "sent-1", "sent-2"]

    def test_ranking_law(self):
        doc = self.make_doc(12)
        scores = score_builtin(doc)
        chosen = {int(s.id.removeprefix("sent-")) for s in suggest(doc).items}
        floor = min(scores[i] for i in chosen)
        for i, score in enumerate(scores):
            if i not in chosen:
                assert score <= floor

    def test_tie_break_prefers_earlier_sentence(self):
        # identical sentences tie exactly; the earliest index wins
        doc = analyze("The fox ran far. The fox ran far. The fox ran far.", "d")
        got = suggest(doc, ratio=0.3)
        assert [s.id for s in got.items] == ["sent-0"]

    @given(st.integers(1, 200))
    @settings(max_examples=200, deadline=None)
    def test_count_law(self, n):
        got = suggest(self.make_doc(n))
        assert len(got.items) == max(1, math.ceil(0.3 * n))

    def test_shuffling_sentences_keeps_selected_score_multiset(self):
        sentences = [
            "The cat saw the dog.",
            "The cat and the dog met the cat.",
            "A bird sang.",
            "Dogs chase cats daily.",
            "The bird flew away.",
        ]
        rng = random.Random(3)
        shuffled = sentences[:]
        rng.shuffle(shuffled)
        a = suggest(analyze(" ".join(sentences), "a"))
        b = suggest(analyze(" ".join(shuffled), "b"))
        assert sorted(s.score for s in a.items) == pytest.approx(
            sorted(s.score for s in b.items)
        )


class TestHttpScorer:
    def make_doc(self):
        return analyze("The cat sat. The dog ran. A bird sang.", "d")

    def test_uses_remote_scores(self):
        def handler(request: httpx.Request) -> httpx.Response:
            import json

            sentences = json.loads(request.content)["sentences"]
            assert len(sentences) == 3
            return httpx.Response(200, json={"scores": [0.2, 0.9, 0.4]})

        client = httpx.Client(transport=httpx.MockTransport(handler))
        scorer = HttpScorer("http://scorer.test/score", client=client)
        assert scorer.score_sentences(self.make_doc()) == [0.2, 0.9, 0.4]

    def test_falls_back_on_transport_error(self):
        def handler(request: httpx.Request) -> httpx.Response:
            raise httpx.ConnectTimeout("boom")

        client = httpx.Client(transport=httpx.MockTransport(handler))
        scorer = HttpScorer("http://scorer.test/score", client=client)
        doc = self.make_doc()
        assert scorer.score_sentences(doc) == CentroidScorer().score_sentences(doc)

    def test_falls_back_on_malformed_payload(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={"scores": [0.5]})  # wrong length

        client = httpx.Client(transport=httpx.MockTransport(handler))
        scorer = HttpScorer("http://scorer.test/score", client=client)
        doc = self.make_doc()
        assert scorer.score_sentences(doc) == CentroidScorer().score_sentences(doc)
