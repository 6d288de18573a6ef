"""Entropy, mutual information, and mutual redundancy over categorical data.

All measures are in bits and operate on dense joint probability tables.
For a variable subset S of size n:

    H(S) = -sum_s p(s) log2 p(s)
    T(S) = sum over nonempty U subset of S of (-1)^(|U|+1) H(U)
    R(S) = (-1)^(n-1) T(S)

T is ordinary mutual information for n = 2 (nonnegative) and
configurational information for n >= 3, where either sign may occur.
R flips the sign on even n so that negative R consistently reads as a
net reduction of joint uncertainty (synergy between the variables) and
positive R as net added variation.

``synergy_indicator`` evaluates R over a sliding window of an event
stream, producing a time-resolved series.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """Dense joint distribution over named categorical variables.

    ``probabilities`` has one axis per variable, in ``variables`` order.
    ``categories`` optionally maps axis indices back to observed labels.
    """

    variables: tuple[str, ...]
    probabilities: np.ndarray
    categories: tuple[tuple, ...] | None = None

    def __post_init__(self):
        variables = tuple(self.variables)
        probs = np.asarray(self.probabilities, dtype=float)
        if len(variables) != len(set(variables)):
            raise ValueError("duplicate variable labels")
        if probs.ndim != len(variables):
            raise ValueError(
                f"probabilities have {probs.ndim} axes for {len(variables)} variables"
            )
        if probs.size == 0:
            raise ValueError("empty probability table")
        if np.any(probs < 0.0):
            raise ValueError("negative probability")
        total = float(probs.sum())
        if abs(total - 1.0) > _PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if self.categories is not None:
            cats = tuple(tuple(c) for c in self.categories)
            if tuple(len(c) for c in cats) != probs.shape:
                raise ValueError("categories do not match table shape")
            object.__setattr__(self, "categories", cats)
        probs = probs.copy()
        probs.flags.writeable = False
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "probabilities", probs)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return self.probabilities.shape

    def axes_of(self, subset) -> tuple[int, ...]:
        """Axis indices of the given variable labels, in subset order."""
        missing = [v for v in subset if v not in self.variables]
        if missing:
            raise ValueError(f"unknown variable labels: {missing}")
        return tuple(self.variables.index(v) for v in subset)

    def marginal(self, subset) -> "ProbabilityTable":
        """Marginal table over ``subset``, axes reordered to subset order."""
        subset = tuple(subset)
        if not subset:
            raise ValueError("empty subset")
        if len(subset) != len(set(subset)):
            raise ValueError("repeated variable in subset")
        keep = self.axes_of(subset)
        drop = tuple(i for i in range(len(self.variables)) if i not in keep)
        marg = self.probabilities.sum(axis=drop) if drop else self.probabilities
        # sum() over axes preserves the original axis order; permute to subset order
        kept_order = [i for i in range(len(self.variables)) if i in keep]
        perm = [kept_order.index(i) for i in keep]
        marg = np.transpose(marg, perm)
        cats = None
        if self.categories is not None:
            cats = tuple(self.categories[i] for i in keep)
        return ProbabilityTable(subset, marg, cats)


@dataclass(frozen=True)
class InformationReport:
    """Entropy, mutual information, and redundancy of one variable subset."""

    subset: tuple[str, ...]
    entropy_bits: float
    mutual_information_bits: float | None
    redundancy_bits: float | None

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "n": len(self.subset),
            "H": self.entropy_bits,
            "T": self.mutual_information_bits,
            "R": self.redundancy_bits,
        }


@dataclass(frozen=True)
class RedundancySeries:
    """Windowed mutual redundancy over an event stream."""

    window_starts: np.ndarray
    redundancy_bits: np.ndarray
    window_length: int


def from_observations(rows, variables, pseudocount: float = 0.0) -> ProbabilityTable:
    """Estimate a joint table from categorical observations.

    Probabilities are relative frequencies (optionally with an additive
    pseudocount per cell). Categories are indexed by first appearance.
    """
    rows = list(rows)
    variables = tuple(variables)
    if not rows:
        raise ValueError("no observations")
    if pseudocount < 0.0:
        raise ValueError("pseudocount must be nonnegative")
    arity = len(variables)
    index_maps: list[dict] = [{} for _ in range(arity)]
    encoded = []
    for row in rows:
        row = tuple(row)
        if len(row) != arity:
            raise ValueError(
                f"row arity {len(row)} does not match {arity} variables"
            )
        code = []
        for j, value in enumerate(row):
            m = index_maps[j]
            if value not in m:
                m[value] = len(m)
            code.append(m[value])
        encoded.append(tuple(code))
    shape = tuple(len(m) for m in index_maps)
    counts = np.zeros(shape, dtype=float)
    for code in encoded:
        counts[code] += 1.0
    counts += pseudocount
    probs = counts / counts.sum()
    categories = tuple(tuple(m.keys()) for m in index_maps)
    return ProbabilityTable(variables, probs, categories)


def entropy(table: ProbabilityTable, subset) -> float:
    """Joint Shannon entropy of ``subset`` in bits, with 0 log 0 = 0."""
    p = table.marginal(subset).probabilities.ravel()
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def mutual_information(table: ProbabilityTable, subset) -> float:
    """Mutual (n = 2) or configurational (n >= 3) information in bits.

    Alternating inclusion-exclusion over the subset's joint entropies:
    T(S) = sum over nonempty U of (-1)^(|U|+1) H(U), e.g.
    T12 = H1 + H2 - H12 and T123 = H1 + H2 + H3 - H12 - H13 - H23 + H123.
    """
    subset = tuple(subset)
    if len(subset) < 2:
        raise ValueError("mutual information needs at least two variables")
    total = 0.0
    for size in range(1, len(subset) + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        for combo in itertools.combinations(subset, size):
            total += sign * entropy(table, combo)
    return total


def mutual_redundancy(table: ProbabilityTable, subset) -> float:
    """Signed redundancy R = (-1)^(n-1) T; negative values signal synergy."""
    subset = tuple(subset)
    sign = 1.0 if (len(subset) - 1) % 2 == 0 else -1.0
    return sign * mutual_information(table, subset)


def information_report(table: ProbabilityTable, subset) -> InformationReport:
    """Bundle H, T, and R for one subset (T and R are None for n = 1)."""
    subset = tuple(subset)
    h = entropy(table, subset)
    if len(subset) >= 2:
        t = mutual_information(table, subset)
        sign = 1.0 if (len(subset) - 1) % 2 == 0 else -1.0
        r = sign * t
    else:
        t = None
        r = None
    return InformationReport(subset, h, t, r)


def synergy_indicator(stream, variables, subset, window: int, stride: int) -> RedundancySeries:
    """Sliding-window mutual redundancy over an event stream.

    Windows are half-open ``[start, start + window)``, advanced by
    ``stride``; an incomplete tail window is dropped. Each window is
    turned into a frequency table and reduced to R over ``subset``.
    """
    stream = list(stream)
    subset = tuple(subset)
    if window < 8:
        raise ValueError("window must be at least 8 samples")
    if stride < 1:
        raise ValueError("stride must be positive")
    if window > len(stream):
        raise ValueError(
            f"window of {window} exceeds stream length {len(stream)}"
        )
    starts = []
    values = []
    for start in range(0, len(stream) - window + 1, stride):
        table = from_observations(stream[start:start + window], variables)
        starts.append(start)
        values.append(mutual_redundancy(table, subset))
    return RedundancySeries(
        window_starts=np.asarray(starts, dtype=int),
        redundancy_bits=np.asarray(values, dtype=float),
        window_length=window,
    )
