"""Deterministic linguistic preprocessing.

Sentence segmentation, tokenization, lemmatization, and content-word
classification, producing the immutable :class:`Document` every other
module consumes. No statistical models: a rule-based splitter with a
bundled abbreviation list, a suffix-rule lemmatizer with an irregular-form
table, and a frozen stopword list, all shipped as plain-text data files so
results are reproducible bit for bit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Callable, Iterable

from .spans import Span

Lemmatizer = Callable[[str], str]


class TokenKind(str, Enum):
    CONTENT = "content"
    STOPWORD = "stopword"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    span: Span
    kind: TokenKind


@dataclass(frozen=True)
class Sentence:
    index: int
    span: Span
    tokens: tuple[Token, ...]

    @property
    def content_lemmas(self) -> tuple[str, ...]:
        return tuple(t.lemma for t in self.tokens if t.kind is TokenKind.CONTENT)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    sentences: tuple[Sentence, ...]

    def tokens(self) -> Iterable[Token]:
        for sentence in self.sentences:
            yield from sentence.tokens


def _load_lines(name: str) -> tuple[str, ...]:
    data = resources.files(__package__).joinpath("data").joinpath(name).read_text("utf-8")
    return tuple(line.strip() for line in data.splitlines() if line.strip())


STOPWORDS: frozenset[str] = frozenset(_load_lines("stopwords.txt"))
ABBREVIATIONS: frozenset[str] = frozenset(_load_lines("abbreviations.txt"))
IRREGULAR_LEMMAS: dict[str, str] = {
    form: lemma
    for form, lemma in (line.split(None, 1) for line in _load_lines("irregular_lemmas.txt"))
}

_VOWELS = "aeiou"
# Finals whose doubling is undone when stripping -ed/-ing (stopped -> stop).
# Excludes l/s/z/f, which commonly end base forms (call, pass, buzz, staff).
_UNDOUBLE = "bdgkmnprtv"
# Stem finals that take back their "e" after stripping -ed/-ing (danced -> dance).
_RESTORE_E = ("c", "u", "v", "z")


def default_lemmatize(surface: str) -> str:
    """Lowercase and strip inflection with fixed rules plus an exception table.

    Deterministic and dictionary-free; a stand-in with the usual suffix-rule
    blind spots, adequate for matching inflection variants of the same word.
    """
    w = surface.lower().replace("’", "'")
    if w.endswith("'s"):
        w = w[:-2] or w
    if w in IRREGULAR_LEMMAS:
        return IRREGULAR_LEMMAS[w]
    if not w.isalpha():
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "xes", "zes", "ches", "shes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > 3:
        return w[:-1]
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("eed"):
        return w[:-1] if len(w) > 4 else w
    if w.endswith("ed") and len(w) > 3:
        stem = w[:-2]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
            return stem[:-1]
        if stem.endswith(_RESTORE_E):
            return stem + "e"
        return stem
    if w.endswith("ing") and len(w) > 4:
        stem = w[:-3]
        if len(stem) < 3:
            return w
        if stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
            return stem[:-1]
        if stem.endswith(_RESTORE_E):
            return stem + "e"
        return stem
    return w


def _build_token_re() -> re.Pattern[str]:
    abbrevs = sorted(ABBREVIATIONS, key=len, reverse=True)
    abbrev_alt = "|".join(re.escape(a) for a in abbrevs)
    return re.compile(
        rf"(?i:{abbrev_alt})(?![^\W\d_])"  # Mr., U.S., trailing dot kept
        r"|(?:[^\W\d_]\.){2,}"  # generic letter-dot acronyms
        r"|\d+(?:\.\d+)?"  # numbers, optional decimal part
        r"|[^\W_]+(?:['’][^\W_]+)*"  # words, with internal apostrophes
        r"|\S"  # anything else, one character at a time
    )


_TOKEN_RE = _build_token_re()
_TERMINALS = frozenset(".!?")
_OPENERS = "\"'“‘«(["


def _is_punct_token(surface: str) -> bool:
    return all(not c.isalnum() for c in surface)


def _abbreviation_before(text: str, dot: int) -> bool:
    j = dot
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    word = text[j : dot + 1].lstrip(_OPENERS)
    if word.lower() in ABBREVIATIONS:
        return True
    # single initials, as in "John A. Smith"
    return len(word) == 2 and word[0].isalpha() and word[0].isupper()


def split_sentences(text: str) -> list[Span]:
    """Spans of sentence chunks, trimmed of surrounding whitespace.

    A boundary is `.`, `!` or `?` followed by whitespace and then an
    uppercase letter or an opening quote; a `.` preceded by a listed
    abbreviation never splits.
    """
    spans: list[Span] = []
    start = 0

    def flush(end: int) -> None:
        nonlocal start
        chunk = text[start:end]
        stripped = chunk.strip()
        if stripped:
            lead = len(chunk) - len(chunk.lstrip())
            spans.append(Span(start + lead, start + lead + len(stripped)))
        start = end

    n = len(text)
    for i, ch in enumerate(text):
        if ch not in _TERMINALS:
            continue
        if i + 1 >= n or not text[i + 1].isspace():
            continue
        k = i + 1
        while k < n and text[k].isspace():
            k += 1
        if k < n and not (text[k].isupper() or text[k] in _OPENERS):
            continue
        if ch == "." and _abbreviation_before(text, i):
            continue
        flush(i + 1)
    flush(n)
    return spans


def _tokenize(text: str, span: Span, lemmatize: Lemmatizer) -> tuple[Token, ...]:
    tokens = []
    for m in _TOKEN_RE.finditer(text, span.start, span.end):
        surface = m.group()
        lemma = lemmatize(surface) or surface.lower()
        if _is_punct_token(surface):
            kind = TokenKind.PUNCTUATION
        elif lemma in STOPWORDS:
            kind = TokenKind.STOPWORD
        else:
            kind = TokenKind.CONTENT
        tokens.append(Token(surface, lemma, Span(m.start(), m.end()), kind))
    return tuple(tokens)


def analyze(text: str, id: str = "", lemmatize: Lemmatizer = default_lemmatize) -> Document:
    """Segment, tokenize and classify `text` into an immutable Document.

    Pure and deterministic; empty or whitespace-only text yields a document
    with no sentences. Token spans index into `text` directly, so
    ``text[t.span.start:t.span.end] == t.surface`` for every token.
    """
    sentences = []
    for index, span in enumerate(split_sentences(text)):
        tokens = _tokenize(text, span, lemmatize)
        sentences.append(Sentence(index=index, span=span, tokens=tokens))
    return Document(id=id, text=text, sentences=tuple(sentences))


def lemma_sequence(sentence: Sentence) -> list[tuple[str, TokenKind, int]]:
    """All tokens of a sentence as (lemma, kind, token-index), in order.

    Stopwords and punctuation are included; downstream filters decide what
    counts, not the sequence itself.
    """
    return [(t.lemma, t.kind, i) for i, t in enumerate(sentence.tokens)]
