"""Exact overlap and variation distances on finite discrete distributions.

On finite support the defining integrals reduce to sums, so every quantity
here is computed exactly (with correctly rounded accumulation). This module
is the ground truth the estimators are tested against.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    ConditionFunction,
    DegenerateDomainError,
    DimensionMismatchError,
    InputError,
    NormKind,
    norms,
)

MASS_TOLERANCE = 1e-12

# Membership of a subset of the joint support: a condition function, a boolean
# mask, an index collection, or a per-point callable.
SubsetSpec = ConditionFunction | np.ndarray | Sequence[int] | Callable[[np.ndarray], bool]


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finite support points with probability masses summing to one."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        mass = np.array(self.masses, dtype=np.float64, copy=True)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InputError(f"expected a nonempty (m, d) support array, got shape {pts.shape}")
        if mass.ndim != 1 or mass.shape[0] != pts.shape[0]:
            raise InputError(
                f"masses must be 1-D with one entry per support point "
                f"({pts.shape[0]}), got shape {mass.shape}"
            )
        if not np.isfinite(pts).all():
            raise InputError("support points have non-finite coordinates")
        if not np.isfinite(mass).all() or (mass < 0).any():
            raise InputError("masses must be finite and nonnegative")
        total = math.fsum(mass.tolist())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise InputError(f"masses must sum to 1 within {MASS_TOLERANCE}, got {total!r}")
        keys = {tuple(row) for row in pts.tolist()}
        if len(keys) != pts.shape[0]:
            raise InputError("support points must be pairwise distinct")
        pts.flags.writeable = False
        mass.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", mass)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def mean(self) -> np.ndarray:
        """Mass-weighted mean, accumulated exactly per coordinate."""
        cols = (self.points * self.masses[:, None]).T.tolist()
        return np.array([math.fsum(c) for c in cols], dtype=np.float64)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n i.i.d. support points according to the masses."""
        idx = rng.choice(self.points.shape[0], size=n, p=self.masses)
        return self.points[idx]

    @classmethod
    def from_json_dict(cls, doc: dict, source: str = "<memory>") -> "DiscreteDistribution":
        try:
            dim = int(doc["dimension"])
            points = np.asarray(doc["points"], dtype=np.float64)
            masses = np.asarray(doc["masses"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{source}: expected keys dimension/points/masses: {exc}") from exc
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.shape[1] != dim:
            raise InputError(f"{source}: points have {points.shape[1]} columns, dimension says {dim}")
        return cls(points, masses)

    @classmethod
    def from_json_file(cls, path) -> "DiscreteDistribution":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"{path}: cannot read distribution JSON: {exc}") from exc
        return cls.from_json_dict(doc, source=str(path))


@dataclass(frozen=True, eq=False)
class JointSupport:
    """Union of two supports with aligned mass vectors (0 where absent).

    Points are matched by exact coordinate identity; nearby-but-unequal points
    stay distinct so the oracle never does fuzzy merging.
    """

    points: np.ndarray
    p_masses: np.ndarray
    q_masses: np.ndarray

    @classmethod
    def of(cls, p: DiscreteDistribution, q: DiscreteDistribution) -> "JointSupport":
        if p.dimension != q.dimension:
            raise DimensionMismatchError(
                f"distributions have different dimensions: {p.dimension} vs {q.dimension}"
            )
        index: dict[tuple, int] = {}
        rows: list[list[float]] = []
        for row in p.points.tolist():
            index[tuple(row)] = len(rows)
            rows.append(row)
        for row in q.points.tolist():
            key = tuple(row)
            if key not in index:
                index[key] = len(rows)
                rows.append(row)
        m = len(rows)
        p_mass = np.zeros(m)
        q_mass = np.zeros(m)
        p_mass[: p.points.shape[0]] = p.masses
        for row, w in zip(q.points.tolist(), q.masses.tolist()):
            q_mass[index[tuple(row)]] = w
        return cls(np.asarray(rows, dtype=np.float64), p_mass, q_mass)

    def membership(self, subset: SubsetSpec) -> np.ndarray:
        """Boolean mask over the joint points for any accepted subset spec."""
        if isinstance(subset, ConditionFunction):
            return np.asarray(subset.evaluate_many(self.points), dtype=bool)
        if isinstance(subset, np.ndarray) and subset.dtype == bool:
            if subset.shape != (self.points.shape[0],):
                raise InputError(
                    f"boolean subset mask has shape {subset.shape}, "
                    f"expected ({self.points.shape[0]},)"
                )
            return subset
        if callable(subset):
            return np.array([bool(subset(pt)) for pt in self.points], dtype=bool)
        mask = np.zeros(self.points.shape[0], dtype=bool)
        for i in subset:  # index collection
            mask[int(i)] = True
        return mask


def overlap(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Exact overlap index: sum of pointwise minimum masses. 1 iff identical."""
    joint = JointSupport.of(p, q)
    return math.fsum(np.minimum(joint.p_masses, joint.q_masses).tolist())


def total_variation(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Exact total variation distance: half the L1 gap between mass vectors."""
    joint = JointSupport.of(p, q)
    return 0.5 * math.fsum(np.abs(joint.p_masses - joint.q_masses).tolist())


def subset_variation(
    p: DiscreteDistribution, q: DiscreteDistribution, subset: SubsetSpec
) -> float:
    """Total-variation mass restricted to a subset of the joint support."""
    joint = JointSupport.of(p, q)
    mask = joint.membership(subset)
    gaps = np.abs(joint.p_masses - joint.q_masses)[mask]
    return 0.5 * math.fsum(gaps.tolist())


def expectation(dist: DiscreteDistribution, g: ConditionFunction) -> float:
    """Exact acceptance probability of a condition function."""
    accepted = np.asarray(g.evaluate_many(dist.points), dtype=bool)
    return math.fsum(dist.masses[accepted].tolist())


def _region_max_norm(joint: JointSupport, mask: np.ndarray, kind: NormKind) -> float:
    sub = joint.points[mask]
    if sub.shape[0] == 0:
        return 0.0
    return float(norms(sub, kind).max())


def subset_bound(
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    subset: SubsetSpec,
    norm: NormKind = NormKind.L2,
    use_domain_radius: bool = True,
) -> float:
    """Exact upper bound on the overlap built from one subset.

    The bound combines the gap between the two means with the variation mass
    on the subset, each scaled by max-norm radii taken exactly over the joint
    support. ``use_domain_radius`` selects the denominator: the max norm over
    the whole support (True) or over the subset's complement (False).
    """
    joint = JointSupport.of(p, q)
    mask = joint.membership(subset)
    r_region = _region_max_norm(joint, mask, norm)
    if use_domain_radius:
        r_denom = _region_max_norm(joint, np.ones(len(mask), dtype=bool), norm)
        what = "joint support"
    else:
        r_denom = _region_max_norm(joint, ~mask, norm)
        what = "subset complement"
    if r_denom == 0.0:
        raise DegenerateDomainError(
            f"max norm over the {what} is 0; the bound is undefined (overlap is 1 "
            "whenever both distributions are the same point mass at the origin)"
        )
    mean_gap = float(norms((p.mean() - q.mean()).reshape(1, -1), norm)[0])
    dv = subset_variation(p, q, mask)
    return 1.0 - mean_gap / (2.0 * r_denom) - ((r_denom - r_region) / r_denom) * dv


def indicator_bound(
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    conditions: Sequence[ConditionFunction],
    norm: NormKind = NormKind.L2,
) -> float:
    """Exact upper bound on the overlap over a family of condition functions.

    Uses exact acceptance probabilities instead of the per-subset variation
    mass, taking the best (largest) separation term across the family.
    """
    if len(conditions) == 0:
        raise InputError("need at least one condition function")
    joint = JointSupport.of(p, q)
    all_mask = np.ones(joint.points.shape[0], dtype=bool)
    r_domain = _region_max_norm(joint, all_mask, norm)
    if r_domain == 0.0:
        raise DegenerateDomainError(
            "max norm over the joint support is 0; both distributions are a "
            "point mass at the origin and the overlap is exactly 1"
        )
    mean_gap = float(norms((p.mean() - q.mean()).reshape(1, -1), norm)[0])
    best = 0.0
    for g in conditions:
        mask = joint.membership(g)
        r_region = _region_max_norm(joint, mask, norm)
        rate_gap = abs(
            math.fsum(joint.p_masses[mask].tolist())
            - math.fsum(joint.q_masses[mask].tolist())
        )
        term = ((r_domain - r_region) / (2.0 * r_domain)) * rate_gap
        if term > best:
            best = term
    return 1.0 - mean_gap / (2.0 * r_domain) - best
