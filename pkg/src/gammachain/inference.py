"""Binning, transition counting, and likelihood scoring of candidate models.

A gamma series is mapped to a state sequence through a strategy partition;
consecutive states accumulate into a transition-count matrix. The empirical
row-normalized matrix is the maximum-likelihood transition model for those
counts, so any candidate model can be scored by its log-likelihood gap to
the empirical one. The gap is zero exactly when the candidate matches the
empirical matrix on every observed cell, and infinite when the candidate
assigns probability zero to an observed transition.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .markov import StateDistribution, TransitionMatrix
from .network import GammaSeries
from .partition import StrategyPartition, default_partition

REFERENCE_COUNTS_FILE = "reference_counts.csv"


def _readonly_int(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TransitionCounts:
    """Non-negative transition counts over the states of a partition.

    Raises
    ------
    ValueError
        If the matrix is not square over the partition states or any entry
        is negative.
    """

    counts: np.ndarray
    partition: StrategyPartition

    def __post_init__(self):
        counts = _readonly_int(self.counts)
        object.__setattr__(self, "counts", counts)
        k = len(self.partition)
        if counts.shape != (k, k):
            raise ValueError("counts must be square over the partition states")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")

    def __eq__(self, other):
        if not isinstance(other, TransitionCounts):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(
            self.counts, other.counts
        )

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def labels(self) -> tuple[str, ...]:
        return self.partition.labels

    def to_csv(self) -> str:
        return "\n".join(",".join(str(int(v)) for v in row) for row in self.counts) + "\n"

    @classmethod
    def from_csv(cls, text: str, partition: StrategyPartition | None = None) -> "TransitionCounts":
        partition = partition or default_partition()
        rows = [
            [int(cell) for cell in line.split(",")]
            for line in text.strip().splitlines()
            if line.strip()
        ]
        return cls(np.asarray(rows, dtype=np.int64), partition)

    def to_json_obj(self) -> dict:
        return {
            "labels": list(self.labels),
            "counts": [[int(v) for v in row] for row in self.counts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)


@dataclass(frozen=True)
class LikelihoodReport:
    """Score of one model against observed counts."""

    model_name: str
    relative_likelihood: float
    log_likelihood: float

    def __post_init__(self):
        if not (self.relative_likelihood >= 0 or math.isnan(self.relative_likelihood)):
            raise ValueError("relative likelihood must be non-negative")

    def to_json_obj(self) -> dict:
        return {
            "model_name": self.model_name,
            "relative_likelihood": self.relative_likelihood,
            "log_likelihood": self.log_likelihood,
        }


def bin_gamma(value: float, partition: StrategyPartition) -> int:
    """State index of a gamma value under the partition's binning rule.

    Raises
    ------
    ValueError
        If the value lies outside [0, 1].
    """
    return partition.index_of(value)


def bin_series(values, partition: StrategyPartition) -> np.ndarray:
    """Vectorized binning of many gamma values."""
    arr = np.asarray(values, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("gamma values must lie in [0, 1]")
    uppers = np.asarray([iv.upper for iv in partition])
    idx = np.searchsorted(uppers, arr, side="right")
    return np.minimum(idx, len(uppers) - 1)


def count_transitions(series: GammaSeries, partition: StrategyPartition | None = None) -> TransitionCounts:
    """Accumulate consecutive-pair transitions of a series into counts.

    The total over all cells equals the series length minus one.

    Raises
    ------
    ValueError
        If the series has fewer than two samples.
    """
    partition = partition or default_partition()
    if len(series) < 2:
        raise ValueError("need at least two samples to count transitions")
    states = bin_series(series.values, partition)
    k = len(partition)
    flat = states[:-1] * k + states[1:]
    counts = np.bincount(flat, minlength=k * k).reshape(k, k)
    return TransitionCounts(counts, partition)


def empirical_transition_matrix(counts: TransitionCounts) -> TransitionMatrix:
    """Row-normalize counts into the maximum-likelihood transition matrix.

    A row with no observations carries no information; it becomes the
    uniform row so the result stays row-stochastic.
    """
    matrix = counts.counts.astype(float)
    row_sums = matrix.sum(axis=1, keepdims=True)
    k = matrix.shape[0]
    uniform = np.full((k, k), 1.0 / k)
    with np.errstate(invalid="ignore"):
        normalized = np.where(row_sums > 0, matrix / np.maximum(row_sums, 1.0), uniform)
    return TransitionMatrix(normalized, counts.labels)


def occupancy_fractions(series: GammaSeries, partition: StrategyPartition | None = None) -> StateDistribution:
    """Fraction of samples falling in each partition state."""
    partition = partition or default_partition()
    states = bin_series(series.values, partition)
    k = len(partition)
    occ = np.bincount(states, minlength=k) / len(series)
    return StateDistribution(occ, partition.labels)


def log_likelihood(model: TransitionMatrix, counts: TransitionCounts) -> float:
    """Sum of count-weighted log transition probabilities.

    Cells with zero counts contribute nothing regardless of the model
    probability; an observed cell with model probability zero makes the
    whole value -inf.

    Raises
    ------
    ValueError
        If the model and counts dimensions disagree.
    """
    if model.size != counts.counts.shape[0]:
        raise ValueError("model and counts dimensions disagree")
    observed = counts.counts > 0
    theta = model.entries[observed]
    if np.any(theta == 0.0):
        return float("-inf")
    weights = counts.counts[observed].astype(float)
    return float((weights * np.log(theta)).sum())


def relative_likelihood(model: TransitionMatrix, counts: TransitionCounts) -> float:
    """Log-likelihood gap from the empirical maximum-likelihood matrix.

    Always non-negative: zero when the model matches the empirical matrix
    on every observed cell, +inf when the model zeroes an observed cell.
    """
    best = log_likelihood(empirical_transition_matrix(counts), counts)
    return best - log_likelihood(model, counts)


def score_model(name: str, model: TransitionMatrix, counts: TransitionCounts) -> LikelihoodReport:
    """Bundle the two likelihood figures for one model into a report."""
    return LikelihoodReport(
        model_name=name,
        relative_likelihood=relative_likelihood(model, counts),
        log_likelihood=log_likelihood(model, counts),
    )


def load_reference_counts(partition: StrategyPartition | None = None) -> TransitionCounts:
    """The packaged reference transition counts over the default partition."""
    text = (
        resources.files("gammachain")
        .joinpath("data", REFERENCE_COUNTS_FILE)
        .read_text(encoding="utf-8")
    )
    return TransitionCounts.from_csv(text, partition or default_partition())
