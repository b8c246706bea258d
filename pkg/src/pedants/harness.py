"""Metric-vs-human comparison: agreement, Macro F1, sweeps, and rankings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import EmptyRecords, OutOfRangeScore, TooFewModels
from .pipeline import QAExample


@dataclass
class JudgedRecord:
    """A human-labeled example plus one boolean verdict per metric."""

    example: QAExample
    verdicts: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if self.example.human_label is None:
            raise ValueError("JudgedRecord requires an example with a human label")


@dataclass
class ConfusionCounts:
    """Streaming 2x2 confusion matrix over (human label, metric verdict)."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def update(self, label: bool, verdict: bool) -> None:
        if label and verdict:
            self.tp += 1
        elif not label and verdict:
            self.fp += 1
        elif label and not verdict:
            self.fn += 1
        else:
            self.tn += 1

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def accuracy(self) -> float:
        if not self.total:
            raise EmptyRecords("no records counted")
        return (self.tp + self.tn) / self.total

    def class_f1(self, cls: bool) -> float:
        if cls:
            tp, fp, fn = self.tp, self.fp, self.fn
        else:
            tp, fp, fn = self.tn, self.fn, self.fp
        denom = 2 * tp + fp + fn
        return 2 * tp / denom if denom else 0.0  # absent class contributes 0

    def macro_f1(self) -> float:
        if not self.total:
            raise EmptyRecords("no records counted")
        return (self.class_f1(True) + self.class_f1(False)) / 2


@dataclass
class RankingInput:
    """Per-model correctness rates for humans and for each metric."""

    human_rates: Mapping[str, float]
    metric_rates: Mapping[str, Mapping[str, float]]

    def __post_init__(self):
        if len(self.human_rates) < 2:
            raise TooFewModels(f"need >= 2 models, got {len(self.human_rates)}")
        models = set(self.human_rates)
        for name, rates in self.metric_rates.items():
            if set(rates) != models:
                raise ValueError(f"metric {name!r} rates cover different models than humans")
        for rates in (self.human_rates, *self.metric_rates.values()):
            for model, rate in rates.items():
                if not 0.0 <= rate <= 1.0:
                    raise ValueError(f"rate for {model!r} out of [0, 1]: {rate}")

    @property
    def n_models(self) -> int:
        return len(self.human_rates)


def _counts_for(records: Sequence[JudgedRecord], metric: str) -> ConfusionCounts:
    if not records:
        raise EmptyRecords("no records to aggregate")
    counts = ConfusionCounts()
    for r in records:
        counts.update(bool(r.example.human_label), r.verdicts[metric])
    return counts


def agreement_accuracy(records: Sequence[JudgedRecord], metric: str) -> float:
    """Fraction of records where the metric's verdict matches the human label."""
    return _counts_for(records, metric).accuracy()


def macro_f1(records: Sequence[JudgedRecord], metric: str) -> float:
    """Unweighted mean of per-class F1 over the correct/incorrect classes."""
    return _counts_for(records, metric).macro_f1()


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def pairwise_ranking_accuracy(ranking: RankingInput, metric: str) -> float:
    """Fraction of model pairs the metric orders the same way humans do.

    A pair agrees when sign(rate_m(i) - rate_m(j)) equals
    sign(rate_h(i) - rate_h(j)); exact ties count as their own order.
    """
    rates = ranking.metric_rates[metric]
    models = sorted(ranking.human_rates)
    n = len(models)
    agree = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            a, b = models[i], models[j]
            human = _sign(ranking.human_rates[a] - ranking.human_rates[b])
            auto = _sign(rates[a] - rates[b])
            agree += human == auto
    return agree / math.comb(n, 2)


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    accuracy: float
    macro_f1: float


def threshold_sweep(
    scored: Sequence[tuple[float, bool]], thresholds: Sequence[float]
) -> list[SweepRow]:
    """Agreement stats of the F1-threshold judge at each cutoff.

    ``scored`` pairs each example's token F1 with its human label. Rows are
    piecewise-constant in the threshold: they only change at observed F1
    values.
    """
    if not scored:
        raise EmptyRecords("no scored records to sweep")
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    for t in thresholds:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"threshold out of [0, 1]: {t}")
    rows = []
    for t in thresholds:
        counts = ConfusionCounts()
        for f1, label in scored:
            counts.update(label, f1 >= t)
        rows.append(SweepRow(t, counts.accuracy(), counts.macro_f1()))
    return rows


def likert_to_binary(score: float, cutoff: float = 4) -> bool:
    """Convert a 1-5 rating to a correctness label: correct iff score >= cutoff."""
    if not 1 <= score <= 5:
        raise OutOfRangeScore(f"Likert score must be in [1, 5], got {score}")
    return score >= cutoff
