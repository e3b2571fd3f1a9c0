"""Span-level normalized precision/recall/F1 plus a token-level
diagnostic metric.

The span metric gives partial credit proportional to character overlap:
with C(s, t, h) = |chars(s) ∩ chars(t)| / h,

    precision = (1/|S|) * sum over s in S, t in T of C(s, t, |s|)
    recall    = (1/|T|) * sum over s in S, t in T of C(s, t, |t|)

where S are predicted spans and T gold spans; pairs from different
articles contribute zero. Predicted spans are normalized to disjoint
before scoring; gold spans are used exactly as given (overlapping gold
is accepted and flagged in the report).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Article, Span, TokenLabelSeq
from .spanops import merge_spans


@dataclass(frozen=True)
class ArticleScore:
    n_predicted: int
    n_gold: int
    precision_sum: float
    recall_sum: float


@dataclass(frozen=True)
class ScoreReport:
    precision: float
    recall: float
    f1: float
    n_predicted: int
    n_gold: int
    per_article: dict[str, ArticleScore] = field(default_factory=dict)
    gold_overlap_articles: tuple[str, ...] = ()

    def lines(self) -> list[str]:
        out = [
            f"predicted spans: {self.n_predicted}",
            f"gold spans:      {self.n_gold}",
            f"precision: {self.precision:.6f}",
            f"recall:    {self.recall:.6f}",
            f"f1:        {self.f1:.6f}",
        ]
        if self.gold_overlap_articles:
            out.append(
                "note: overlapping gold spans in articles "
                + ", ".join(self.gold_overlap_articles)
            )
        return out


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def _overlap(a: Span, b: Span) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start))


def _has_overlaps(spans: list[Span]) -> bool:
    ordered = sorted(spans, key=lambda s: (s.start, s.end))
    return any(x.end > y.start for x, y in zip(ordered, ordered[1:]))


def span_f1(
    predicted: list[Span],
    gold: list[Span],
    articles: list[Article],
) -> ScoreReport:
    """Score predictions against gold over a set of articles.

    Spans for articles outside ``articles`` are rejected so that silent
    id mismatches cannot inflate or deflate the score.
    """
    by_id = {a.id: a for a in articles}
    for sp in predicted + gold:
        if sp.article_id not in by_id:
            raise ValueError(f"span references article {sp.article_id!r} not under scoring")

    pred_by_article: dict[str, list[Span]] = {a.id: [] for a in articles}
    gold_by_article: dict[str, list[Span]] = {a.id: [] for a in articles}
    for sp in predicted:
        pred_by_article[sp.article_id].append(sp)
    for sp in gold:
        gold_by_article[sp.article_id].append(sp)

    per_article: dict[str, ArticleScore] = {}
    overlap_articles: list[str] = []
    total_p = 0.0
    total_r = 0.0
    n_pred = 0
    n_gold = 0
    for art in articles:
        preds = merge_spans(pred_by_article[art.id], art)
        if _has_overlaps(preds):
            raise AssertionError("predicted spans still overlap after normalization")
        golds = gold_by_article[art.id]
        if _has_overlaps(golds):
            overlap_articles.append(art.id)
        p_sum = 0.0
        r_sum = 0.0
        for s in preds:
            for t in golds:
                ov = _overlap(s, t)
                if ov:
                    p_sum += ov / len(s)
                    r_sum += ov / len(t)
        per_article[art.id] = ArticleScore(len(preds), len(golds), p_sum, r_sum)
        total_p += p_sum
        total_r += r_sum
        n_pred += len(preds)
        n_gold += len(golds)

    if n_pred == 0 and n_gold == 0:
        precision = recall = 1.0
    else:
        precision = total_p / n_pred if n_pred else 0.0
        recall = total_r / n_gold if n_gold else 0.0
    return ScoreReport(
        precision=precision,
        recall=recall,
        f1=_f1(precision, recall),
        n_predicted=n_pred,
        n_gold=n_gold,
        per_article=per_article,
        gold_overlap_articles=tuple(overlap_articles),
    )


def token_f1(predicted: list[TokenLabelSeq], gold: list[TokenLabelSeq]) -> ScoreReport:
    """Binary precision/recall/F1 on the positive token class."""
    if len(predicted) != len(gold):
        raise ValueError(f"sequence count mismatch: {len(predicted)} vs {len(gold)}")
    tp = fp = fn = 0
    for pseq, gseq in zip(predicted, gold):
        if len(pseq.labels) != len(gseq.labels):
            raise ValueError(
                f"label length mismatch: {len(pseq.labels)} vs {len(gseq.labels)}"
            )
        for p, g in zip(pseq.labels, gseq.labels):
            if p and g:
                tp += 1
            elif p and not g:
                fp += 1
            elif g and not p:
                fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return ScoreReport(
        precision=precision,
        recall=recall,
        f1=_f1(precision, recall),
        n_predicted=tp + fp,
        n_gold=tp + fn,
    )
