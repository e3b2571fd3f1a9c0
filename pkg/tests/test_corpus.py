"""Corpus loading, tokenization and span/label round trips."""

import numpy as np
import pytest

from spantag.corpus import (
    LABEL_IN,
    LABEL_OUT,
    Article,
    Span,
    TokenLabelSeq,
    decode_spans,
    load_corpus,
    project_spans,
    split_sentences,
    split_span_at_sentences,
    tokenize,
)
from spantag.errors import DataValidationError


def make_article(text, article_id="a1"):
    return Article(article_id, text, split_sentences(text))


def covered_chars(spans):
    out = set()
    for sp in spans:
        out.update(range(sp.start, sp.end))
    return out


class TestTokenize:
    def test_basic_punctuation_split(self):
        art = make_article("He won.")
        toks = [(t.surface, t.start, t.end) for t in tokenize(art)]
        assert toks == [("He", 0, 2), ("won", 3, 6), (".", 6, 7)]

    def test_double_space_offsets(self):
        art = Article("a1", "a  b", ((0, 4),))
        toks = [(t.surface, t.start, t.end) for t in tokenize(art)]
        assert toks == [("a", 0, 1), ("b", 3, 4)]

    def test_apostrophe_is_single_char_token(self):
        art = Article("a1", "don't", ((0, 5),))
        toks = [(t.surface, t.start, t.end) for t in tokenize(art)]
        assert toks == [("don", 0, 3), ("'", 3, 4), ("t", 4, 5)]

    def test_offsets_are_exact_on_random_unicode(self):
        rng = np.random.default_rng(7)
        alphabet = list("ab cé1!?. —\n\t口 ")
        for _ in range(200):
            n = int(rng.integers(1, 60))
            text = "".join(rng.choice(alphabet) for _ in range(n))
            art = make_article(text)
            for tok in tokenize(art):
                assert text[tok.start : tok.end] == tok.surface
                s, e = art.sentence_bounds[tok.sentence_idx]
                assert s <= tok.start < tok.end <= e


class TestSentenceSplit:
    def test_terminator_followed_by_space(self):
        assert split_sentences("He won. She lost.") == ((0, 7), (8, 17))

    def test_trailing_fragment_without_terminator(self):
        assert split_sentences("He won. Yes") == ((0, 7), (8, 11))

    def test_terminator_run_kept_whole(self):
        assert split_sentences("What?! Go.") == ((0, 6), (7, 10))

    def test_whitespace_only(self):
        assert split_sentences("   \n ") == ()


class TestProjectSpans:
    def test_full_containment(self):
        art = make_article("He won.")
        toks = tokenize(art)
        seqs = project_spans(art, toks, [Span("a1", 0, 6)])
        assert seqs[0].labels == (LABEL_IN, LABEL_IN, LABEL_OUT)
        assert seqs[0].sentence_label == LABEL_IN

    def test_single_char_overlap_marks_token(self):
        # brute force: token [0,2) and span [1,2) share character 1
        art = Article("a1", "He", ((0, 2),))
        toks = tokenize(art)
        assert set(range(0, 2)) & set(range(1, 2))
        seqs = project_spans(art, toks, [Span("a1", 1, 2)])
        assert seqs[0].labels == (LABEL_IN,)

    def test_no_spans_all_negative(self):
        art = make_article("He won.")
        seqs = project_spans(art, tokenize(art), [])
        assert seqs[0].labels == (LABEL_OUT, LABEL_OUT, LABEL_OUT)
        assert seqs[0].sentence_label == LABEL_OUT

    def test_monotone_under_added_spans(self):
        rng = np.random.default_rng(11)
        art = make_article("one two three four five. six seven eight.")
        toks = tokenize(art)
        n = len(art.text)
        for _ in range(50):
            a = sorted(rng.integers(0, n, size=2).tolist())
            b = sorted(rng.integers(0, n, size=2).tolist())
            if a[0] == a[1] or b[0] == b[1]:
                continue
            base = project_spans(art, toks, [Span("a1", *a)])
            more = project_spans(art, toks, [Span("a1", *a), Span("a1", *b)])
            for s0, s1 in zip(base, more):
                for l0, l1 in zip(s0.labels, s1.labels):
                    assert l1 >= l0


class TestDecodeSpans:
    def test_run_includes_gap_characters(self):
        art = make_article("He won.")
        toks = tokenize(art)
        seq = TokenLabelSeq((LABEL_IN, LABEL_IN, LABEL_OUT))
        assert decode_spans(art, toks, [seq]) == [Span("a1", 0, 6)]

    def test_all_negative_decodes_empty(self):
        art = make_article("He won.")
        seq = TokenLabelSeq((LABEL_OUT,) * 3)
        assert decode_spans(art, tokenize(art), [seq]) == []

    def test_round_trip_superset_on_token_aligned_spans(self):
        """decode(project(S)) covers at least the characters of S when span
        endpoints coincide with token boundaries. The cover can gain the
        whitespace between two token-adjacent spans (runs merge), so the
        general relation is a superset, fuzzed over random corpora."""
        rng = np.random.default_rng(23)
        words = ["alpha", "beta", "gamma", "delta", "run", "x"]
        for _ in range(100):
            n_sent = int(rng.integers(1, 4))
            text = " ".join(
                " ".join(rng.choice(words) for _ in range(rng.integers(1, 7))) + "."
                for _ in range(n_sent)
            )
            art = make_article(text)
            toks = tokenize(art)
            if not toks:
                continue
            spans = []
            for _ in range(int(rng.integers(0, 4))):
                i, j = sorted(rng.integers(0, len(toks), size=2).tolist())
                a, b = toks[i], toks[j]
                if a.sentence_idx != b.sentence_idx:
                    continue
                spans.append(Span("a1", a.start, b.end))
            decoded = decode_spans(art, toks, project_spans(art, toks, spans))
            assert covered_chars(decoded) >= covered_chars(spans)

    def test_round_trip_exact_when_runs_are_separated(self):
        """Exact char-set equality holds when every pair of spans is
        separated by at least one uncovered token."""
        rng = np.random.default_rng(29)
        words = ["alpha", "beta", "gamma", "delta", "run", "x"]
        for _ in range(100):
            text = " ".join(rng.choice(words) for _ in range(12)) + "."
            art = make_article(text)
            toks = tokenize(art)
            spans = []
            idx = 0
            while idx < len(toks) - 1:
                width = int(rng.integers(1, 3))
                j = min(idx + width - 1, len(toks) - 1)
                if rng.random() < 0.5:
                    spans.append(Span("a1", toks[idx].start, toks[j].end))
                idx = j + 2  # always leave one token uncovered between runs
            decoded = decode_spans(art, toks, project_spans(art, toks, spans))
            assert covered_chars(decoded) == covered_chars(spans)


class TestSpanSplitting:
    def test_cross_sentence_span_is_clipped_per_sentence(self):
        art = make_article("He won. She lost.")
        pieces = split_span_at_sentences(art, Span("a1", 3, 11))
        assert pieces == [Span("a1", 3, 7), Span("a1", 8, 11)]


class TestLoadCorpus:
    def test_load_and_validate(self, tmp_path):
        (tmp_path / "articles").mkdir()
        (tmp_path / "articles" / "articlea1.txt").write_text("abc def", encoding="utf-8")
        (tmp_path / "labels.tsv").write_text("a1\t0\t3\n", encoding="utf-8")
        articles, spans = load_corpus(tmp_path / "articles", tmp_path / "labels.tsv")
        assert [a.id for a in articles] == ["a1"]
        assert spans == [Span("a1", 0, 3)]

    def test_empty_span_rejected(self, tmp_path):
        (tmp_path / "articles").mkdir()
        (tmp_path / "articles" / "articlea1.txt").write_text("abc def", encoding="utf-8")
        (tmp_path / "labels.tsv").write_text("a1\t3\t3\n", encoding="utf-8")
        with pytest.raises(DataValidationError, match="empty"):
            load_corpus(tmp_path / "articles", tmp_path / "labels.tsv")

    def test_out_of_bounds_span_rejected(self, tmp_path):
        (tmp_path / "articles").mkdir()
        (tmp_path / "articles" / "articlea1.txt").write_text("abc def", encoding="utf-8")
        (tmp_path / "labels.tsv").write_text("a1\t5\t99\n", encoding="utf-8")
        with pytest.raises(DataValidationError, match="out of bounds"):
            load_corpus(tmp_path / "articles", tmp_path / "labels.tsv")

    def test_unknown_article_rejected(self, tmp_path):
        (tmp_path / "articles").mkdir()
        (tmp_path / "articles" / "articlea1.txt").write_text("abc def", encoding="utf-8")
        (tmp_path / "labels.tsv").write_text("zz\t0\t2\n", encoding="utf-8")
        with pytest.raises(DataValidationError, match="zz"):
            load_corpus(tmp_path / "articles", tmp_path / "labels.tsv")

    def test_sentence_bounds_sidecar_overrides_splitter(self, tmp_path):
        (tmp_path / "articles").mkdir()
        (tmp_path / "articles" / "articlea1.txt").write_text("abc def", encoding="utf-8")
        (tmp_path / "bounds.tsv").write_text("a1\t0\t3\na1\t4\t7\n", encoding="utf-8")
        articles, _ = load_corpus(tmp_path / "articles", bounds_file=tmp_path / "bounds.tsv")
        assert articles[0].sentence_bounds == ((0, 3), (4, 7))
