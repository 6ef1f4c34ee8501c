"""Shared domain types: norms, sample sets, and 0/1 condition functions.

Everything in this module is immutable after construction and safe to share
across threads. Arrays handed in are copied and marked read-only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class InputError(ValueError):
    """Malformed or out-of-range input (bad values, unparsable files)."""


class DimensionMismatchError(ValueError):
    """Inputs that must agree on dimension or norm choice do not."""


class DegenerateDomainError(ValueError):
    """Every sample sits at the origin, so radius ratios are undefined."""


class MetricUndefinedError(ValueError):
    """A ranking metric was requested on a single-class score set."""


class NormKind(enum.Enum):
    """Vector norm choice carried explicitly by every sample set."""

    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def from_string(cls, text: str) -> "NormKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InputError(f"unknown norm {text!r}; expected l1, l2, or linf") from None


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a read-only 1-D float64 vector.

    Rejects non-finite coordinates and, when ``dim`` is given, any length
    mismatch.
    """
    v = np.array(x, dtype=np.float64, copy=True)
    if v.ndim != 1 or v.size == 0:
        raise InputError(f"expected a nonempty 1-D vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise InputError("vector has non-finite coordinates")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.size}")
    v.flags.writeable = False
    return v


def norms(points: np.ndarray, kind: NormKind) -> np.ndarray:
    """Per-row norms of a (n, d) array."""
    a = np.asarray(points, dtype=np.float64)
    if a.ndim != 2:
        raise InputError(f"expected a 2-D array of row vectors, got shape {a.shape}")
    if kind is NormKind.L1:
        return np.abs(a).sum(axis=1)
    if kind is NormKind.L2:
        return np.sqrt((a * a).sum(axis=1))
    return np.abs(a).max(axis=1)


def norm(v, kind: NormKind = NormKind.L2) -> float:
    """Norm of a single vector; shares the row-wise code path exactly."""
    vec = as_vector(v)
    return float(norms(vec.reshape(1, -1), kind)[0])


def exact_mean(points: np.ndarray) -> np.ndarray:
    """Column means via correctly rounded (fsum) accumulation.

    Deterministic and independent of summation order, which keeps the
    1e-12 equality contracts between code paths honest.
    """
    a = np.asarray(points, dtype=np.float64)
    n = a.shape[0]
    return np.array([math.fsum(col) for col in a.T.tolist()], dtype=np.float64) / n


@dataclass(frozen=True, eq=False)
class SampleSet:
    """A nonempty batch of same-dimension vectors plus the norm that scores them.

    Per-sample norms, the pooled max norm, and the empirical mean are computed
    once at construction.
    """

    samples: np.ndarray
    norm: NormKind = NormKind.L2
    norms: np.ndarray = field(init=False, repr=False, compare=False)
    max_norm: float = field(init=False, compare=False)
    mean: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        a = np.array(self.samples, dtype=np.float64, copy=True)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
            raise InputError(f"expected a nonempty (n, d) sample array, got shape {a.shape}")
        if not np.isfinite(a).all():
            raise InputError("sample array has non-finite entries")
        a.flags.writeable = False
        per_sample = norms(a, self.norm)
        per_sample.flags.writeable = False
        mean = exact_mean(a)
        mean.flags.writeable = False
        object.__setattr__(self, "samples", a)
        object.__setattr__(self, "norms", per_sample)
        object.__setattr__(self, "max_norm", float(per_sample.max()))
        object.__setattr__(self, "mean", mean)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]


class ConditionFunction:
    """A binary predicate over vectors, evaluating to exactly 0 or 1."""

    label: str

    def evaluate(self, x) -> int:
        raise NotImplementedError

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation: bool array over the rows of ``points``."""
        raise NotImplementedError


@dataclass(frozen=True)
class RadiusIndicator(ConditionFunction):
    """Closed-ball membership: 1 iff the chosen norm of x is <= radius."""

    radius: float
    norm: NormKind = NormKind.L2

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius < 0:
            raise InputError(f"radius must be finite and >= 0, got {self.radius}")

    @property
    def label(self) -> str:
        return f"{self.norm.value}-ball<={self.radius!r}"

    def evaluate(self, x) -> int:
        return int(norm(x, self.norm) <= self.radius)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return norms(points, self.norm) <= self.radius


@dataclass(frozen=True)
class ScoreThreshold(ConditionFunction):
    """1 iff a fitted scorer's clamped confidence for x is <= threshold.

    The scorer must expose ``clamped_scores(points) -> array in [0, 1]``;
    any fitted one-class scorer from this package qualifies.
    """

    threshold: float
    scorer: object

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise InputError(f"threshold must lie in [0, 1], got {self.threshold}")

    @property
    def label(self) -> str:
        return f"score<={self.threshold!r}"

    def evaluate(self, x) -> int:
        return int(self.evaluate_many(as_vector(x).reshape(1, -1))[0])

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.scorer.clamped_scores(points)) <= self.threshold


@dataclass(frozen=True)
class RadiusFamily:
    """Evenly spaced closed-ball indicators r_j = (j/k) * top, j = 1..k.

    j starts at 1 because a zero radius is a degenerate predicate. When
    ``top`` is 0 the family collapses to k copies of the zero ball, which is
    tolerated so that scorers fitted on all-origin data still work.
    """

    k: int
    top: float
    norm: NormKind = NormKind.L2
    radii: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if not math.isfinite(self.top) or self.top < 0:
            raise InputError(f"top radius must be finite and >= 0, got {self.top}")
        radii = tuple(self.top * j / self.k for j in range(1, self.k + 1))
        object.__setattr__(self, "radii", radii)

    def indicators(self) -> tuple[RadiusIndicator, ...]:
        return tuple(RadiusIndicator(r, self.norm) for r in self.radii)


def make_sample_set(samples, norm: NormKind | str | None = None) -> SampleSet:
    """Convenience constructor accepting raw arrays, lists of rows, or 1-D data.

    ``norm=None`` keeps an existing SampleSet's norm and defaults raw data to
    L2; passing a norm rebuilds a mismatched SampleSet under that norm.
    """
    if norm is None:
        if isinstance(samples, SampleSet):
            return samples
        kind = NormKind.L2
    else:
        kind = norm if isinstance(norm, NormKind) else NormKind.from_string(str(norm))
    if isinstance(samples, SampleSet):
        return samples if samples.norm is kind else SampleSet(samples.samples, kind)
    return SampleSet(np.asarray(samples, dtype=np.float64), kind)


def clamp_unit(x: float) -> float:
    """Clamp to [0, 1]."""
    return min(1.0, max(0.0, x))


def require_compatible(a: SampleSet, b: SampleSet) -> None:
    """Two sample sets that feed one computation must agree on d and norm."""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"sample sets have different dimensions: {a.dimension} vs {b.dimension}"
        )
    if a.norm is not b.norm:
        raise DimensionMismatchError(
            f"sample sets carry different norms: {a.norm.value} vs {b.norm.value}"
        )


def condition_parameter(g: ConditionFunction) -> float:
    """The scalar knob of a condition function (radius or threshold)."""
    if isinstance(g, RadiusIndicator):
        return g.radius
    if isinstance(g, ScoreThreshold):
        return g.threshold
    return float("nan")


Conditions = Sequence[ConditionFunction]
