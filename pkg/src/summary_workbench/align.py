"""Summary-to-source alignment.

For every (summary sentence, source sentence) pair, up to four
longest-common-subsequence passes over full lemma sequences (stopwords and
punctuation included). After each pass the matched summary tokens are
removed, so content the generator reordered can still be found by a later,
shorter match. A match is kept when it has enough content tokens, or when
it covers enough of a highlighted span's content lemmas; everything else
is dropped.

Pure functions throughout; safe to evaluate sentence pairs in parallel.
"""
from __future__ import annotations

from dataclasses import dataclass

from .highlights import HighlightSet
from .spans import Span
from .textpipe import Document, Sentence, TokenKind, lemma_sequence

LemmaSeq = list[tuple[str, TokenKind, int]]

CONTENT_COUNT = "content_count"
HIGHLIGHT_COVERAGE = "highlight_coverage"
REJECTED = "rejected"


@dataclass(frozen=True)
class AlignmentConfig:
    min_content_tokens: int = 3
    coverage_threshold: float = 0.25
    max_iterations: int = 4

    def __post_init__(self) -> None:
        if self.min_content_tokens < 1 or self.max_iterations < 1:
            raise ValueError("limits must be positive")
        if not 0.0 < self.coverage_threshold <= 1.0:
            raise ValueError("coverage_threshold must be in (0, 1]")


@dataclass(frozen=True)
class LcsMatch:
    summary_token_indices: tuple[int, ...]
    source_token_indices: tuple[int, ...]
    lemmas: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.lemmas)


EMPTY_MATCH = LcsMatch((), (), ())


@dataclass(frozen=True)
class AlignmentLink:
    summary_sentence_index: int
    source_sentence_index: int
    match: LcsMatch
    iteration: int
    retained_by: str  # CONTENT_COUNT | HIGHLIGHT_COVERAGE


@dataclass(frozen=True)
class AlignmentMap:
    source: Document
    summary: Document
    links: tuple[AlignmentLink, ...]

    def links_for(self, summary_sentence_index: int) -> list[AlignmentLink]:
        return [l for l in self.links if l.summary_sentence_index == summary_sentence_index]

    def source_token_spans(self, summary_sentence_index: int) -> list[Span]:
        """Union of source token spans aligned to one summary sentence."""
        spans = set()
        for link in self.links_for(summary_sentence_index):
            tokens = self.source.sentences[link.source_sentence_index].tokens
            spans.update(tokens[k].span for k in link.match.source_token_indices)
        return sorted(spans)


def lcs(summary_seq: LemmaSeq, source_seq: LemmaSeq) -> LcsMatch:
    """A longest common subsequence of the two lemma sequences.

    Deterministic tie-break among equal-length candidates: earliest source
    positions, then earliest summary positions. Returns EMPTY_MATCH when
    the sequences share no lemma.
    """
    common = {x[0] for x in summary_seq} & {x[0] for x in source_seq}
    if not common:
        return EMPTY_MATCH
    # DP runs on the items that can possibly match; indices map back.
    a = [x for x in summary_seq if x[0] in common]
    b = [x for x in source_seq if x[0] in common]
    n, m = len(a), len(b)
    a_lemmas = [x[0] for x in a]
    b_lemmas = [x[0] for x in b]

    # table[i][j] = LCS length of a[i:] vs b[j:]
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = table[i]
        below = table[i + 1]
        ai = a_lemmas[i]
        for j in range(m - 1, -1, -1):
            if ai == b_lemmas[j]:
                row[j] = below[j + 1] + 1
            else:
                bj = below[j]
                rj = row[j + 1]
                row[j] = bj if bj >= rj else rj

    need = table[0][0]
    if need == 0:
        return EMPTY_MATCH
    sum_idx: list[int] = []
    src_idx: list[int] = []
    lemmas: list[str] = []
    i = j = 0
    while need:
        jj = j
        found = None
        while found is None:
            if table[i][jj] == need:
                ii = i
                while table[ii][jj] == need:
                    if a_lemmas[ii] == b_lemmas[jj]:
                        found = (ii, jj)
                        break
                    ii += 1
            if found is None:
                jj += 1
        ii, jj = found
        sum_idx.append(a[ii][2])
        src_idx.append(b[jj][2])
        lemmas.append(a_lemmas[ii])
        i, j = ii + 1, jj + 1
        need -= 1
    return LcsMatch(tuple(sum_idx), tuple(src_idx), tuple(lemmas))


def _content_types_in_highlight(sentence: Sentence, highlight_span: Span) -> set[str]:
    return {
        t.lemma
        for t in sentence.tokens
        if t.kind is TokenKind.CONTENT and t.span.overlaps(highlight_span)
    }


def filter_decision(
    match: LcsMatch,
    source_sentence: Sentence,
    highlights: HighlightSet,
    cfg: AlignmentConfig = AlignmentConfig(),
) -> str:
    """Keep or drop one match.

    CONTENT_COUNT when it has at least `min_content_tokens` content tokens;
    otherwise HIGHLIGHT_COVERAGE when, for some active highlight its source
    tokens overlap, the matched content-lemma types reach
    `coverage_threshold` of the highlight's content-lemma types; else
    REJECTED. A highlight with no content tokens cannot rescue a match.
    """
    tokens = source_sentence.tokens
    matched = [tokens[k] for k in match.source_token_indices]
    content = sum(1 for t in matched if t.kind is TokenKind.CONTENT)
    if content >= cfg.min_content_tokens:
        return CONTENT_COUNT
    for highlight in highlights.active:
        if not any(t.span.overlaps(highlight.span) for t in matched):
            continue
        all_types = _content_types_in_highlight(source_sentence, highlight.span)
        if not all_types:
            continue
        matched_types = {
            t.lemma
            for t in matched
            if t.kind is TokenKind.CONTENT and t.span.overlaps(highlight.span)
        }
        if len(matched_types & all_types) / len(all_types) >= cfg.coverage_threshold:
            return HIGHLIGHT_COVERAGE
    return REJECTED


def align_pair(
    summary_sentence: Sentence,
    source_sentence: Sentence,
    highlights: HighlightSet,
    cfg: AlignmentConfig = AlignmentConfig(),
) -> list[AlignmentLink]:
    """Iterative matching of one sentence pair.

    Each round matches the remaining summary tokens against the full source
    sentence. Matched summary tokens are consumed whether or not the match
    is retained; consuming rejected matches is what exposes shorter ones.
    """
    residual = lemma_sequence(summary_sentence)
    source_seq = lemma_sequence(source_sentence)
    links: list[AlignmentLink] = []
    for iteration in range(1, cfg.max_iterations + 1):
        match = lcs(residual, source_seq)
        if not len(match):
            break
        decision = filter_decision(match, source_sentence, highlights, cfg)
        if decision != REJECTED:
            links.append(
                AlignmentLink(
                    summary_sentence_index=summary_sentence.index,
                    source_sentence_index=source_sentence.index,
                    match=match,
                    iteration=iteration,
                    retained_by=decision,
                )
            )
        consumed = set(match.summary_token_indices)
        residual = [item for item in residual if item[2] not in consumed]
        if not residual:
            break
    return links


def align(
    source: Document,
    highlights: HighlightSet,
    summary: Document,
    cfg: AlignmentConfig = AlignmentConfig(),
) -> AlignmentMap:
    """Run align_pair over the full cross-product of sentence pairs."""
    links: list[AlignmentLink] = []
    for summary_sentence in summary.sentences:
        for source_sentence in source.sentences:
            links.extend(align_pair(summary_sentence, source_sentence, highlights, cfg))
    return AlignmentMap(source=source, summary=summary, links=tuple(links))


def highlight_coverage_metric(map_: AlignmentMap, highlights: HighlightSet) -> float:
    """Fraction of highlighted content-lemma types matched by retained links."""
    if not map_.links:
        return 0.0
    highlighted: set[str] = set()
    for highlight in highlights.active:
        for sentence in map_.source.sentences:
            if sentence.span.overlaps(highlight.span):
                highlighted |= _content_types_in_highlight(sentence, highlight.span)
    if not highlighted:
        return 1.0
    matched: set[str] = set()
    for link in map_.links:
        tokens = map_.source.sentences[link.source_sentence_index].tokens
        matched.update(
            tokens[k].lemma
            for k in link.match.source_token_indices
            if tokens[k].kind is TokenKind.CONTENT
        )
    return len(highlighted & matched) / len(highlighted)


def alignment_to_wire(map_: AlignmentMap) -> dict:
    """The documented JSON shape, with character spans for both sides."""
    sentences = []
    for sentence in map_.summary.sentences:
        links = []
        for link in map_.links_for(sentence.index):
            summary_tokens = sentence.tokens
            source_tokens = map_.source.sentences[link.source_sentence_index].tokens
            links.append(
                {
                    "source_sentence": link.source_sentence_index,
                    "summary_token_spans": [
                        [summary_tokens[k].span.start, summary_tokens[k].span.end]
                        for k in link.match.summary_token_indices
                    ],
                    "source_token_spans": [
                        [source_tokens[k].span.start, source_tokens[k].span.end]
                        for k in link.match.source_token_indices
                    ],
                    "retained_by": link.retained_by,
                    "iteration": link.iteration,
                }
            )
        sentences.append(
            {
                "index": sentence.index,
                "span": [sentence.span.start, sentence.span.end],
                "links": links,
            }
        )
    return {"summary_sentences": sentences}
