"""Span algebra over character masks: merging, boundary trimming,
dictionary labeling and majority-vote ensembling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Article, Span, Token
from .errors import DataValidationError

DEFAULT_TRIM_CHARS = frozenset("\"'‘’“”`")


@dataclass(frozen=True)
class CharMask:
    """Boolean coverage mask over every character of one article."""

    article_id: str
    bits: np.ndarray

    def __post_init__(self) -> None:
        if self.bits.dtype != bool or self.bits.ndim != 1:
            raise ValueError("mask bits must be a 1-d boolean array")

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class PostProcessConfig:
    max_gap_words: int = 2
    trim_stopwords: bool = False
    trim_chars: frozenset[str] = DEFAULT_TRIM_CHARS
    stopwords: frozenset[str] = frozenset()
    loaded_language_lexicon: frozenset[str] = frozenset()
    # pipeline order is configurable and recorded in run manifests
    steps: tuple[str, ...] = ("merge_gaps", "trim", "loaded_language", "merge")

    def __post_init__(self) -> None:
        if self.max_gap_words < 0:
            raise ValueError("max_gap_words must be >= 0")
        unknown = set(self.steps) - {"merge_gaps", "trim", "loaded_language", "merge"}
        if unknown:
            raise ValueError(f"unknown post-process steps: {sorted(unknown)}")


def to_mask(spans: list[Span], article: Article) -> CharMask:
    bits = np.zeros(len(article.text), dtype=bool)
    for sp in spans:
        if sp.article_id != article.id:
            raise ValueError(f"span for {sp.article_id!r} applied to article {article.id!r}")
        if sp.end > len(article.text):
            raise DataValidationError(
                f"span [{sp.start}, {sp.end}) beyond article {article.id!r} "
                f"of length {len(article.text)}"
            )
        bits[sp.start : sp.end] = True
    return CharMask(article.id, bits)


def from_mask(mask: CharMask) -> list[Span]:
    """Sorted, disjoint, maximal spans covering exactly the set bits."""
    bits = mask.bits
    spans: list[Span] = []
    idx = 0
    n = len(bits)
    while idx < n:
        if bits[idx]:
            end = idx + 1
            while end < n and bits[end]:
                end += 1
            spans.append(Span(mask.article_id, idx, end))
            idx = end
        else:
            idx += 1
    return spans


def merge_spans(spans: list[Span], article: Article) -> list[Span]:
    """Normalize to sorted disjoint maximal spans (union of coverage)."""
    return from_mask(to_mask(spans, article))


def _tokens_between(tokens: list[Token], gap_start: int, gap_end: int) -> int:
    return sum(1 for t in tokens if t.start >= gap_start and t.end <= gap_end)


def merge_gaps(spans: list[Span], tokens: list[Token], max_gap_words: int) -> list[Span]:
    """Merge consecutive spans separated by at most ``max_gap_words``
    tokens. ``spans`` must be sorted and disjoint; intervening characters
    become part of the merged span."""
    if not spans:
        return []
    merged = [spans[0]]
    for nxt in spans[1:]:
        cur = merged[-1]
        if nxt.start < cur.end:
            raise ValueError("merge_gaps expects sorted disjoint spans")
        if _tokens_between(tokens, cur.end, nxt.start) <= max_gap_words:
            merged[-1] = Span(cur.article_id, cur.start, nxt.end)
        else:
            merged.append(nxt)
    return merged


def _leading_word(text: str, start: int, end: int) -> str:
    idx = start
    while idx < end and text[idx].isalnum():
        idx += 1
    return text[start:idx]


def _trailing_word(text: str, start: int, end: int) -> str:
    idx = end
    while idx > start and text[idx - 1].isalnum():
        idx -= 1
    return text[idx:end]


def trim_boundaries(spans: list[Span], article: Article, config: PostProcessConfig) -> list[Span]:
    """Strip whitespace, stray characters and (optionally) whole stopwords
    from both ends of every span until a fixed point; drop emptied spans."""
    text = article.text
    out: list[Span] = []
    for sp in spans:
        start, end = sp.start, sp.end
        changed = True
        while changed and start < end:
            changed = False
            while start < end and (text[start].isspace() or text[start] in config.trim_chars):
                start += 1
                changed = True
            while start < end and (text[end - 1].isspace() or text[end - 1] in config.trim_chars):
                end -= 1
                changed = True
            if config.trim_stopwords and start < end:
                lead = _leading_word(text, start, end)
                if lead and lead.lower() in config.stopwords:
                    start += len(lead)
                    changed = True
                trail = _trailing_word(text, start, end)
                if trail and trail.lower() in config.stopwords:
                    end -= len(trail)
                    changed = True
        if start < end:
            out.append(Span(sp.article_id, start, end))
    return out


def add_loaded_language(
    spans: list[Span],
    tokens: list[Token],
    lexicon: frozenset[str],
    article: Article,
) -> list[Span]:
    """Mark every uncovered token whose lowercased surface is in the
    lexicon as a single-token span; the result is re-merged."""
    if not lexicon:
        return list(spans)
    mask = to_mask(spans, article)
    bits = mask.bits.copy()
    for tok in tokens:
        if tok.surface.lower() in lexicon and not bits[tok.start : tok.end].any():
            bits[tok.start : tok.end] = True
    return from_mask(CharMask(article.id, bits))


def majority_vote(predictions: list[CharMask], quorum: int | None = None) -> CharMask:
    """Character-level vote: a character is marked iff marked by more than
    half of the models, or by at least ``quorum`` models if given."""
    if not predictions:
        raise ValueError("majority_vote requires at least one prediction")
    first = predictions[0]
    for mask in predictions[1:]:
        if mask.article_id != first.article_id:
            raise ValueError(
                f"vote mixes articles {first.article_id!r} and {mask.article_id!r}"
            )
        if len(mask) != len(first):
            raise DataValidationError(
                f"mask length mismatch for article {first.article_id!r}: "
                f"{len(mask)} vs {len(first)}"
            )
    counts = np.sum([m.bits for m in predictions], axis=0)
    if quorum is None:
        bits = counts * 2 > len(predictions)
    else:
        bits = counts >= quorum
    return CharMask(first.article_id, bits)


def postprocess(
    spans: list[Span],
    article: Article,
    tokens: list[Token],
    config: PostProcessConfig,
) -> list[Span]:
    """Run the configured post-processing steps in order."""
    current = merge_spans(spans, article)
    for step in config.steps:
        if step == "merge_gaps":
            current = merge_gaps(current, tokens, config.max_gap_words)
        elif step == "trim":
            current = trim_boundaries(current, article, config)
        elif step == "loaded_language":
            current = add_loaded_language(current, tokens, config.loaded_language_lexicon, article)
        elif step == "merge":
            current = merge_spans(current, article)
    return current


def derive_loaded_lexicon(
    articles: list[Article],
    tokens_by_article: dict[str, list[Token]],
    spans: list[Span],
    ratio_threshold: float = 0.8,
    min_count: int = 3,
) -> frozenset[str]:
    """Derive a loaded-word lexicon from a training split: words whose
    in-span occurrence ratio reaches the threshold. The threshold is
    configurable because no canonical value exists."""
    inside: dict[str, int] = {}
    total: dict[str, int] = {}
    for art in articles:
        mask = to_mask([s for s in spans if s.article_id == art.id], art)
        for tok in tokens_by_article[art.id]:
            if not tok.surface[0].isalnum():
                continue
            word = tok.surface.lower()
            total[word] = total.get(word, 0) + 1
            if mask.bits[tok.start : tok.end].any():
                inside[word] = inside.get(word, 0) + 1
    return frozenset(
        w
        for w, cnt in total.items()
        if cnt >= min_count and inside.get(w, 0) / cnt >= ratio_threshold
    )
