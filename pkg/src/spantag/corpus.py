"""Corpus ingestion: articles, character-offset span annotations, and the
lossless round trip between spans and per-token labels.

All character indices are Unicode scalar-value indices into the article
text (Python string indices), never byte offsets. Files are read without
newline translation so offsets match the bytes on disk decoded as UTF-8.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataValidationError

LABEL_OUT = 0  # token outside every annotated span
LABEL_IN = 1   # token overlapping at least one annotated span

_ARTICLE_FILE_RE = re.compile(r"^article(?P<id>.+)\.txt$")
_SENTENCE_END_RE = re.compile(r"[.!?]+")


@dataclass(frozen=True)
class Span:
    """Half-open character interval [start, end) inside one article."""

    article_id: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise DataValidationError(
                f"empty or negative span [{self.start}, {self.end}) "
                f"in article {self.article_id!r}"
            )

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Token:
    """Surface string with exact character offsets and its sentence index."""

    surface: str
    start: int
    end: int
    sentence_idx: int


@dataclass(frozen=True)
class TokenLabelSeq:
    """Binary labels for one sentence, plus the derived sentence label."""

    labels: tuple[int, ...]
    sentence_label: int = field(init=False)

    def __post_init__(self) -> None:
        for lab in self.labels:
            if lab not in (LABEL_OUT, LABEL_IN):
                raise ValueError(f"label must be 0 or 1, got {lab}")
        # sentence is positive iff any token is positive
        derived = LABEL_IN if any(l == LABEL_IN for l in self.labels) else LABEL_OUT
        object.__setattr__(self, "sentence_label", derived)


@dataclass(frozen=True)
class Article:
    """Article text with sorted, non-overlapping sentence bounds."""

    id: str
    text: str
    sentence_bounds: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev_end = 0
        for start, end in self.sentence_bounds:
            if not (0 <= start < end <= len(self.text)):
                raise DataValidationError(
                    f"sentence bound ({start}, {end}) outside article "
                    f"{self.id!r} of length {len(self.text)}"
                )
            if start < prev_end:
                raise DataValidationError(
                    f"overlapping sentence bounds in article {self.id!r}"
                )
            prev_end = end

    @property
    def n_sentences(self) -> int:
        return len(self.sentence_bounds)


def split_sentences(text: str) -> tuple[tuple[int, int], ...]:
    """Rule-based sentence bounds: break after a run of ``.!?`` that is
    followed by whitespace (or end of text). Inter-sentence whitespace
    belongs to no sentence."""
    bounds: list[tuple[int, int]] = []
    n = len(text)
    pos = 0
    while pos < n:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        start = pos
        end = None
        for m in _SENTENCE_END_RE.finditer(text, pos):
            after = m.end()
            if after >= n or text[after].isspace():
                end = after
                break
        if end is None:
            # trailing fragment without a terminator
            end = n
            while end > start and text[end - 1].isspace():
                end -= 1
        if end > start:
            bounds.append((start, end))
        pos = end
    return tuple(bounds)


def tokenize(article: Article) -> list[Token]:
    """Deterministic splitter: maximal alphanumeric runs are tokens,
    every other non-space character is a single-character token.

    Tokens outside all sentence bounds are dropped; every returned token
    lies within exactly one sentence.
    """
    tokens: list[Token] = []
    text = article.text
    for sent_idx, (s_start, s_end) in enumerate(article.sentence_bounds):
        i = s_start
        while i < s_end:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isalnum():
                j = i + 1
                while j < s_end and text[j].isalnum():
                    j += 1
            else:
                j = i + 1
            tokens.append(Token(text[i:j], i, j, sent_idx))
            i = j
    return tokens


def load_article(path: Path, bounds: tuple[tuple[int, int], ...] | None = None) -> Article:
    """Read one ``article<ID>.txt`` file; sentence bounds default to the
    rule-based splitter."""
    m = _ARTICLE_FILE_RE.match(path.name)
    if m is None:
        raise DataValidationError(f"article file name {path.name!r} does not match article<ID>.txt")
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return Article(m.group("id"), text, bounds if bounds is not None else split_sentences(text))


def load_sentence_bounds(path: Path) -> dict[str, tuple[tuple[int, int], ...]]:
    """Optional sidecar: one ``<article_id>\\t<start>\\t<end>`` row per sentence."""
    per_article: dict[str, list[tuple[int, int]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataValidationError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                per_article.setdefault(parts[0], []).append((int(parts[1]), int(parts[2])))
            except ValueError as exc:
                raise DataValidationError(f"{path}:{lineno}: non-integer bound") from exc
    return {aid: tuple(sorted(rows)) for aid, rows in per_article.items()}


def load_spans(path: Path) -> list[Span]:
    """Parse a span TSV (``<article_id>\\t<start>\\t<end>``, 0-based,
    end-exclusive, no header)."""
    spans: list[Span] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataValidationError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
            try:
                start, end = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise DataValidationError(f"{path}:{lineno}: non-integer offset") from exc
            try:
                spans.append(Span(parts[0], start, end))
            except DataValidationError as exc:
                raise DataValidationError(f"{path}:{lineno}: {exc}") from exc
    return spans


def write_spans(spans: list[Span], path: Path) -> None:
    """Write spans in the same TSV format used for gold labels."""
    ordered = sorted(spans, key=lambda s: (s.article_id, s.start, s.end))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for sp in ordered:
            fh.write(f"{sp.article_id}\t{sp.start}\t{sp.end}\n")


def load_corpus(
    articles_dir: Path,
    labels_file: Path | None = None,
    bounds_file: Path | None = None,
) -> tuple[list[Article], list[Span]]:
    """Load every article in a directory plus (optionally) its span TSV.

    Every span is validated against its article: a span naming a missing
    article or exceeding the text length is a hard error.
    """
    articles_dir = Path(articles_dir)
    sidecar = load_sentence_bounds(Path(bounds_file)) if bounds_file else {}
    articles: list[Article] = []
    for path in sorted(articles_dir.iterdir()):
        if path.is_file() and _ARTICLE_FILE_RE.match(path.name):
            m = _ARTICLE_FILE_RE.match(path.name)
            articles.append(load_article(path, sidecar.get(m.group("id"))))
    by_id = {a.id: a for a in articles}

    spans: list[Span] = []
    if labels_file is not None:
        spans = load_spans(Path(labels_file))
        for sp in spans:
            art = by_id.get(sp.article_id)
            if art is None:
                raise DataValidationError(
                    f"span references unknown article {sp.article_id!r}"
                )
            if sp.end > len(art.text):
                raise DataValidationError(
                    f"span [{sp.start}, {sp.end}) out of bounds for article "
                    f"{sp.article_id!r} of length {len(art.text)}"
                )
    return articles, spans


def group_tokens_by_sentence(article: Article, tokens: list[Token]) -> list[list[Token]]:
    per_sentence: list[list[Token]] = [[] for _ in range(article.n_sentences)]
    for tok in tokens:
        per_sentence[tok.sentence_idx].append(tok)
    return per_sentence


def project_spans(article: Article, tokens: list[Token], spans: list[Span]) -> list[TokenLabelSeq]:
    """Project character spans onto per-token labels, one sequence per
    sentence. A token is positive iff its interval overlaps any span by
    at least one character."""
    intervals = [(sp.start, sp.end) for sp in spans if sp.article_id == article.id]
    per_sentence = group_tokens_by_sentence(article, tokens)
    out: list[TokenLabelSeq] = []
    for sent_tokens in per_sentence:
        labels = []
        for tok in sent_tokens:
            hit = any(tok.start < e and s < tok.end for s, e in intervals)
            labels.append(LABEL_IN if hit else LABEL_OUT)
        out.append(TokenLabelSeq(tuple(labels)))
    return out


def decode_spans(article: Article, tokens: list[Token], labels: list[TokenLabelSeq]) -> list[Span]:
    """Inverse projection: each maximal run of consecutive positive tokens
    within a sentence becomes one span covering first token start through
    last token end (inter-token characters included)."""
    per_sentence = group_tokens_by_sentence(article, tokens)
    if len(per_sentence) != len(labels):
        raise ValueError(
            f"label sequences ({len(labels)}) do not match sentence count ({len(per_sentence)})"
        )
    spans: list[Span] = []
    for sent_tokens, seq in zip(per_sentence, labels):
        if len(sent_tokens) != len(seq.labels):
            raise ValueError("label sequence length does not match token count")
        run_start: int | None = None
        run_end = 0
        for tok, lab in zip(sent_tokens, seq.labels):
            if lab == LABEL_IN:
                if run_start is None:
                    run_start = tok.start
                run_end = tok.end
            elif run_start is not None:
                spans.append(Span(article.id, run_start, run_end))
                run_start = None
        if run_start is not None:
            spans.append(Span(article.id, run_start, run_end))
    return spans


def split_span_at_sentences(article: Article, span: Span) -> list[Span]:
    """Clip a span to the sentence bounds it crosses, one piece per
    sentence. Used at training time so every gold span lies within one
    sentence; pieces outside all sentences are dropped."""
    pieces = []
    for s_start, s_end in article.sentence_bounds:
        lo, hi = max(span.start, s_start), min(span.end, s_end)
        if lo < hi:
            pieces.append(Span(article.id, lo, hi))
    return pieces


def count_cross_sentence_spans(article: Article, spans: list[Span]) -> int:
    return sum(
        1
        for sp in spans
        if sp.article_id == article.id and len(split_span_at_sentences(article, sp)) > 1
    )
