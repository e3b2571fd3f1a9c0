"""Word, sentence and document feature extraction from pluggable lexicon
and annotation files.

Word-level features are, in declared order: one block per lexicon (zero
vector for absent words), the span-salience scalar, and a part-of-speech
one-hot. Constituency parse paths are not part of the float matrix; they
hash to integer ids that the model maps through a learned embedding.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .corpus import Article, Span, Token
from .errors import DataValidationError

DEFAULT_PARSE_VOCAB = 4096


@dataclass(frozen=True)
class Lexicon:
    """Word to score-vector table; all vectors share one dimension."""

    name: str
    dimension: int
    entries: dict[str, np.ndarray]
    duplicate_rows: int = 0

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"lexicon {self.name!r} dimension must be >= 1")

    def lookup(self, word: str) -> np.ndarray | None:
        return self.entries.get(word.lower())


def load_lexicon(path, name: str | None = None) -> Lexicon:
    """Load a TSV lexicon (``word\\tv1\\t...\\tvk``, constant k).

    A ``#dim=K`` comment line declares the dimension explicitly, which is
    how an entry-less file still carries one. Duplicate words keep the
    last row; the count is recorded on the lexicon.
    """
    entries: dict[str, np.ndarray] = {}
    dimension: int | None = None
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                flag = line[1:].strip().replace(" ", "")
                if flag.startswith("dim="):
                    dimension = int(flag[4:])
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise DataValidationError(f"{path}:{lineno}: expected word and at least one value")
            row_dim = len(parts) - 1
            if dimension is None:
                dimension = row_dim
            elif row_dim != dimension:
                raise DataValidationError(
                    f"{path}:{lineno}: row has {row_dim} values, expected {dimension}"
                )
            try:
                vec = np.array([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataValidationError(f"{path}:{lineno}: non-numeric value") from exc
            word = parts[0].lower()
            if word in entries:
                duplicates += 1
            entries[word] = vec
    if dimension is None:
        raise DataValidationError(f"{path}: empty lexicon without a #dim= header")
    return Lexicon(name or str(path), dimension, entries, duplicates)


@dataclass(frozen=True)
class SalienceTable:
    """Per-word ratio of in-span occurrences over the training split,
    with add-one smoothing on both counts."""

    scores: dict[str, float]

    def score(self, word: str) -> float:
        return self.scores.get(word.lower(), 0.5)


def build_salience(
    articles: list[Article],
    tokens_by_article: dict[str, list[Token]],
    spans: list[Span],
) -> SalienceTable:
    inside: dict[str, int] = {}
    outside: dict[str, int] = {}
    spans_by_article: dict[str, list[Span]] = {}
    for sp in spans:
        spans_by_article.setdefault(sp.article_id, []).append(sp)
    for art in articles:
        intervals = [(s.start, s.end) for s in spans_by_article.get(art.id, [])]
        for tok in tokens_by_article[art.id]:
            word = tok.surface.lower()
            hit = any(tok.start < e and s < tok.end for s, e in intervals)
            bucket = inside if hit else outside
            bucket[word] = bucket.get(word, 0) + 1
    scores = {}
    for word in set(inside) | set(outside):
        n_in = inside.get(word, 0)
        n_out = outside.get(word, 0)
        scores[word] = (n_in + 1) / (n_in + n_out + 2)
    return SalienceTable(scores)


def load_token_sidecar(path, multi: bool) -> dict[tuple[str, int, int], tuple[str, ...]]:
    """Shared reader for parse-path and POS sidecars
    (``<article_id>\\t<sent_idx>\\t<tok_idx>\\t<value>``); parse paths use
    ``/``-joined labels in the value field."""
    out: dict[tuple[str, int, int], tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataValidationError(f"{path}:{lineno}: expected 4 tab-separated fields")
            try:
                key = (parts[0], int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise DataValidationError(f"{path}:{lineno}: non-integer index") from exc
            value = tuple(parts[3].split("/")) if multi else (parts[3],)
            out[key] = value
    return out


def parse_path_id(labels: tuple[str, ...] | list[str], vocab_size: int = DEFAULT_PARSE_VOCAB) -> int:
    """Hash a root path to a stable embedding id; empty paths map to the
    reserved id 0."""
    if not labels:
        return 0
    digest = zlib.crc32("/".join(labels).encode("utf-8"))
    return 1 + digest % (vocab_size - 1)


def word_features(
    tokens: list[Token],
    lexicons: list[Lexicon],
    salience: SalienceTable | None,
    pos_tags: list[str] | None = None,
    pos_inventory: tuple[str, ...] = (),
) -> np.ndarray:
    """Per-token feature matrix of shape (n, d_w)."""
    if pos_tags is not None and len(pos_tags) != len(tokens):
        raise DataValidationError(
            f"POS annotation length {len(pos_tags)} does not match {len(tokens)} tokens"
        )
    d_w = sum(lx.dimension for lx in lexicons)
    if salience is not None:
        d_w += 1
    d_w += len(pos_inventory)
    pos_index = {tag: i for i, tag in enumerate(pos_inventory)}
    out = np.zeros((len(tokens), d_w))
    for row, tok in enumerate(tokens):
        col = 0
        for lx in lexicons:
            vec = lx.lookup(tok.surface)
            if vec is not None:
                out[row, col : col + lx.dimension] = vec
            col += lx.dimension
        if salience is not None:
            out[row, col] = salience.score(tok.surface)
            col += 1
        if pos_inventory and pos_tags is not None:
            idx = pos_index.get(pos_tags[row])
            if idx is not None:
                out[row, col + idx] = 1.0
    return out


def parse_path_ids(
    tokens: list[Token],
    parse_paths: list[tuple[str, ...]] | None,
    vocab_size: int = DEFAULT_PARSE_VOCAB,
) -> np.ndarray:
    if parse_paths is None:
        return np.zeros(len(tokens), dtype=np.int64)
    if len(parse_paths) != len(tokens):
        raise DataValidationError(
            f"parse annotation length {len(parse_paths)} does not match {len(tokens)} tokens"
        )
    return np.array([parse_path_id(p, vocab_size) for p in parse_paths], dtype=np.int64)


def sentence_features(tokens: list[Token], f_word: np.ndarray) -> np.ndarray:
    """Mean of the word features plus three surface statistics:
    token count, capitalized fraction, punctuation fraction."""
    d_w = f_word.shape[1]
    if not tokens:
        return np.zeros(d_w + 3)
    n = len(tokens)
    caps = sum(1 for t in tokens if t.surface[0].isupper()) / n
    punct = sum(1 for t in tokens if not t.surface[0].isalnum()) / n
    return np.concatenate([f_word.mean(axis=0), [float(n), caps, punct]])


def document_features(sent_vectors: list[np.ndarray]) -> np.ndarray:
    if not sent_vectors:
        raise ValueError("document_features requires at least one sentence")
    return np.mean(sent_vectors, axis=0)


@dataclass(frozen=True)
class SentenceFeatures:
    f_word: np.ndarray
    parse_ids: np.ndarray
    f_sent: np.ndarray
    f_doc: np.ndarray


@dataclass
class FeatureExtractor:
    """Frozen-after-fit feature pipeline for one run.

    Toggles mirror the ablation families: affect lexicon (A), syntactic
    parse path + POS (X), semantic-class lexicon (N), salience scalar,
    sentence vector (S), document vector (D).
    """

    lexicons: tuple[Lexicon, ...] = ()
    salience: SalienceTable | None = None
    use_syntax: bool = False
    use_sentence: bool = False
    use_document: bool = False
    pos_inventory: tuple[str, ...] = ()
    parse_vocab_size: int = DEFAULT_PARSE_VOCAB
    parse_paths: dict = field(default_factory=dict, repr=False)
    pos_tags: dict = field(default_factory=dict, repr=False)
    lookup_count: int = field(default=0, repr=False, compare=False)
    miss_count: int = field(default=0, repr=False, compare=False)

    @property
    def d_word(self) -> int:
        d = sum(lx.dimension for lx in self.lexicons)
        if self.salience is not None:
            d += 1
        if self.use_syntax:
            d += len(self.pos_inventory)
        return d

    @property
    def d_sentence(self) -> int:
        return self.d_word + 3 if self.use_sentence else 0

    @property
    def d_document(self) -> int:
        return self.d_word + 3 if self.use_document else 0

    def _sentence_annotations(self, article_id: str, sent_idx: int, n_tokens: int):
        paths = None
        tags = None
        if self.use_syntax:
            if self.parse_paths:
                paths = [
                    self.parse_paths.get((article_id, sent_idx, i), ()) for i in range(n_tokens)
                ]
            if self.pos_tags and self.pos_inventory:
                tags = [
                    self.pos_tags.get((article_id, sent_idx, i), ("",))[0] for i in range(n_tokens)
                ]
        return paths, tags

    def extract_article(self, article: Article, sentence_tokens: list[list[Token]]) -> list[SentenceFeatures]:
        """Features for every sentence of one article, in sentence order."""
        f_words = []
        f_sents = []
        for sent_idx, toks in enumerate(sentence_tokens):
            paths, tags = self._sentence_annotations(article.id, sent_idx, len(toks))
            f_w = word_features(
                toks,
                list(self.lexicons),
                self.salience,
                tags,
                self.pos_inventory if self.use_syntax else (),
            )
            self._count_misses(toks)
            f_words.append((f_w, parse_path_ids(toks, paths, self.parse_vocab_size) if self.use_syntax else np.zeros(len(toks), dtype=np.int64)))
            f_sents.append(sentence_features(toks, f_w))
        non_empty = [v for v, toks in zip(f_sents, sentence_tokens) if toks]
        doc = document_features(non_empty) if (self.use_document and non_empty) else np.zeros(self.d_word + 3)
        out = []
        for (f_w, pids), f_s in zip(f_words, f_sents):
            out.append(
                SentenceFeatures(
                    f_word=f_w,
                    parse_ids=pids,
                    f_sent=f_s if self.use_sentence else np.zeros(0),
                    f_doc=doc[: self.d_document] if self.use_document else np.zeros(0),
                )
            )
        return out

    def _count_misses(self, tokens: list[Token]) -> None:
        for lx in self.lexicons:
            for tok in tokens:
                self.lookup_count += 1
                if lx.lookup(tok.surface) is None:
                    self.miss_count += 1

    def miss_rate(self) -> float:
        return self.miss_count / self.lookup_count if self.lookup_count else 0.0

    def to_dict(self) -> dict:
        return {
            "lexicons": [
                {
                    "name": lx.name,
                    "dimension": lx.dimension,
                    "entries": {w: v.tolist() for w, v in sorted(lx.entries.items())},
                }
                for lx in self.lexicons
            ],
            "salience": dict(sorted(self.salience.scores.items())) if self.salience else None,
            "use_syntax": self.use_syntax,
            "use_sentence": self.use_sentence,
            "use_document": self.use_document,
            "pos_inventory": list(self.pos_inventory),
            "parse_vocab_size": self.parse_vocab_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureExtractor":
        lexicons = tuple(
            Lexicon(
                lx["name"],
                lx["dimension"],
                {w: np.array(v) for w, v in lx["entries"].items()},
            )
            for lx in data["lexicons"]
        )
        salience = SalienceTable(dict(data["salience"])) if data["salience"] else None
        return cls(
            lexicons=lexicons,
            salience=salience,
            use_syntax=data["use_syntax"],
            use_sentence=data["use_sentence"],
            use_document=data["use_document"],
            pos_inventory=tuple(data["pos_inventory"]),
            parse_vocab_size=data["parse_vocab_size"],
        )

    def with_sidecars(self, parse_paths: dict, pos_tags: dict) -> "FeatureExtractor":
        inventory = tuple(sorted({v[0] for v in pos_tags.values()})) if pos_tags else self.pos_inventory
        return replace(self, parse_paths=parse_paths, pos_tags=pos_tags, pos_inventory=inventory)
