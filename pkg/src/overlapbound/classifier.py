"""One-class confidence scoring from cached statistics.

Fitting stores the in-class mean plus, for each of k nested balls, the
in-class acceptance rate and in-ball max norm. That is the whole model:
its size does not depend on how many samples were fitted, and scoring a
query costs one mean-gap norm plus k scalar updates. The cached path is an
exact refactoring of running the pooled bound against the query singleton,
not an approximation, and tests pin the two paths together.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bound import compute_bound
from .core import (
    DimensionMismatchError,
    InputError,
    NormKind,
    RadiusFamily,
    RadiusIndicator,
    SampleSet,
    as_vector,
    clamp_unit,
    make_sample_set,
    norms,
)

MODEL_FORMAT_VERSION = 1
_BATCH_ROWS = 8192


@dataclass(frozen=True)
class ScoreRecord:
    """One query's confidence score, its [0, 1] clamp, and optional verdict."""

    score: float
    clamped: float
    verdict: str | None = None  # "in" / "out", present iff a threshold was supplied


@dataclass(frozen=True, eq=False)
class FittedScorer:
    """Precomputed in-class statistics enabling constant-space scoring.

    Stores exactly the mean vector plus 2k + 1 scalars, independent of the
    training-set size. ``degenerate`` flags a fit where every sample sat at
    the origin (all radii collapse to zero).
    """

    norm: NormKind
    dimension: int
    k: int
    mean: np.ndarray
    fit_radius: float
    radii: tuple[float, ...]
    accept_rates: tuple[float, ...]
    region_radii: tuple[float, ...]
    degenerate: bool

    def conditions(self) -> tuple[RadiusIndicator, ...]:
        return tuple(RadiusIndicator(r, self.norm) for r in self.radii)

    def raw_scores(self, points) -> np.ndarray:
        """Vectorized raw confidence scores for a (l, d) query block."""
        queries = np.asarray(points, dtype=np.float64)
        if queries.ndim == 1:
            queries = queries.reshape(-1, 1) if self.dimension == 1 else queries.reshape(1, -1)
        if queries.ndim != 2 or queries.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"queries have shape {queries.shape}, scorer expects dimension {self.dimension}"
            )
        if not np.isfinite(queries).all():
            raise InputError("query block has non-finite entries")
        out = np.empty(queries.shape[0], dtype=np.float64)
        radii = np.asarray(self.radii)
        rates = np.asarray(self.accept_rates)
        region = np.asarray(self.region_radii)
        for lo in range(0, queries.shape[0], _BATCH_ROWS):
            block = queries[lo : lo + _BATCH_ROWS]
            qn = norms(block, self.norm)
            gaps = norms(block - self.mean, self.norm)
            pool = np.maximum(self.fit_radius, qn)
            inside = qn[:, None] <= radii[None, :]
            # Pooled in-ball max norm: the cached value, or the query norm if
            # the query joined the ball.
            reg = np.where(inside, np.maximum(region[None, :], qn[:, None]), region[None, :])
            with np.errstate(divide="ignore", invalid="ignore"):
                sep = (1.0 - reg / pool[:, None]) * np.abs(
                    inside.astype(np.float64) - rates[None, :]
                )
                raw = 1.0 - gaps / (2.0 * pool) - 0.5 * sep.max(axis=1)
            # An all-origin pool means both sides are the same point mass.
            out[lo : lo + _BATCH_ROWS] = np.where(pool == 0.0, 1.0, raw)
        return out

    def clamped_scores(self, points) -> np.ndarray:
        return np.clip(self.raw_scores(points), 0.0, 1.0)

    def to_json_dict(self) -> dict:
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "norm": self.norm.value,
            "k": self.k,
            "dimension": self.dimension,
            "mean": self.mean.tolist(),
            "rFit": self.fit_radius,
            "gMeans": list(self.accept_rates),
            "gMaxNorms": list(self.region_radii),
            "degenerate": self.degenerate,
        }
        uniform = tuple(self.fit_radius * j / self.k for j in range(1, self.k + 1))
        if self.radii != uniform:
            doc["radii"] = list(self.radii)
        return doc

    def to_json_text(self) -> str:
        """Model JSON with fixed-width floats.

        18 significant digits round-trip float64 exactly, and the constant
        field width keeps the file size independent of the fitted data (up
        to sign characters), which pins the constant-space contract.
        """

        def num(x: float) -> str:
            return format(float(x), ".17e")

        def arr(values) -> str:
            return "[" + ", ".join(num(v) for v in values) + "]"

        doc = self.to_json_dict()
        fields = [
            f'"format_version": {MODEL_FORMAT_VERSION}',
            f'"norm": "{self.norm.value}"',
            f'"k": {self.k}',
            f'"dimension": {self.dimension}',
            f'"mean": {arr(self.mean.tolist())}',
            f'"rFit": {num(self.fit_radius)}',
            f'"gMeans": {arr(self.accept_rates)}',
            f'"gMaxNorms": {arr(self.region_radii)}',
            f'"degenerate": {"true" if self.degenerate else "false"}',
        ]
        if "radii" in doc:
            fields.append(f'"radii": {arr(self.radii)}')
        return "{" + ", ".join(fields) + "}"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json_text())
            fh.write("\n")

    @classmethod
    def from_json_dict(cls, doc: dict, source: str = "<memory>") -> "FittedScorer":
        version = doc.get("format_version")
        for key in ("norm", "k", "dimension", "mean", "rFit", "gMeans", "gMaxNorms", "degenerate"):
            if key not in doc:
                raise InputError(
                    f"{source}: model file (format_version={version!r}) is missing field {key!r}"
                )
        if version != MODEL_FORMAT_VERSION:
            raise InputError(
                f"{source}: unsupported model format_version {version!r}, "
                f"expected {MODEL_FORMAT_VERSION}"
            )
        k = int(doc["k"])
        fit_radius = float(doc["rFit"])
        if "radii" in doc:
            radii = tuple(float(r) for r in doc["radii"])
        else:
            radii = tuple(fit_radius * j / k for j in range(1, k + 1))
        mean = np.asarray(doc["mean"], dtype=np.float64)
        mean.flags.writeable = False
        return cls(
            norm=NormKind.from_string(doc["norm"]),
            dimension=int(doc["dimension"]),
            k=k,
            mean=mean,
            fit_radius=fit_radius,
            radii=radii,
            accept_rates=tuple(float(v) for v in doc["gMeans"]),
            region_radii=tuple(float(v) for v in doc["gMaxNorms"]),
            degenerate=bool(doc["degenerate"]),
        )

    @classmethod
    def load(cls, path) -> "FittedScorer":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"{path}: cannot read model JSON: {exc}") from exc
        return cls.from_json_dict(doc, source=str(path))


def fit(
    in_class,
    k: int = 50,
    norm: NormKind | str | None = None,
    radii=None,
) -> FittedScorer:
    """Cache the in-class statistics needed for constant-space scoring.

    One pass over the data. ``radii`` overrides the default evenly spaced
    family (j/k of the in-class max norm, j = 1..k); when given, k is its
    length.
    """
    samples = make_sample_set(in_class, norm)
    if radii is not None:
        family = tuple(float(r) for r in radii)
        if len(family) == 0:
            raise InputError("custom radius family must be nonempty")
        if any(not math.isfinite(r) or r < 0 for r in family):
            raise InputError("custom radii must be finite and >= 0")
        if any(b <= a for a, b in zip(family, family[1:])):
            raise InputError("custom radii must be strictly increasing")
        k = len(family)
    else:
        if k < 1:
            raise InputError(f"k must be >= 1, got {k}")
        family = RadiusFamily(k=k, top=samples.max_norm, norm=samples.norm).radii

    n = len(samples)
    accept_rates = []
    region_radii = []
    for r in family:
        mask = samples.norms <= r
        accept_rates.append(int(np.count_nonzero(mask)) / n)
        region_radii.append(float(samples.norms[mask].max()) if mask.any() else 0.0)
    return FittedScorer(
        norm=samples.norm,
        dimension=samples.dimension,
        k=k,
        mean=samples.mean,
        fit_radius=samples.max_norm,
        radii=family,
        accept_rates=tuple(accept_rates),
        region_radii=tuple(region_radii),
        degenerate=samples.max_norm == 0.0,
    )


def score(scorer: FittedScorer, x, threshold: float | None = None) -> ScoreRecord:
    """Confidence that x came from the fitted in-class distribution.

    Equal to running the pooled-bound computation between the singleton {x}
    and the full fit set, evaluated from the cached statistics alone.
    """
    vec = as_vector(x, dim=scorer.dimension)
    qn = float(norms(vec.reshape(1, -1), scorer.norm)[0])
    pool = max(scorer.fit_radius, qn)
    if pool == 0.0:
        raw = 1.0
    else:
        gap = float(norms((vec - scorer.mean).reshape(1, -1), scorer.norm)[0])
        best = 0.0
        for r, rate, reg in zip(scorer.radii, scorer.accept_rates, scorer.region_radii):
            if qn <= r:
                region = max(reg, qn)
                sep = (1.0 - region / pool) * abs(1.0 - rate)
            else:
                sep = (1.0 - reg / pool) * abs(0.0 - rate)
            if sep > best:
                best = sep
        raw = 1.0 - gap / (2.0 * pool) - 0.5 * best
    verdict = None if threshold is None else ("in" if raw >= threshold else "out")
    return ScoreRecord(score=raw, clamped=clamp_unit(raw), verdict=verdict)


def classify(scorer: FittedScorer, x, threshold: float) -> bool:
    """True iff the confidence score reaches the threshold (boundary counts as in)."""
    return score(scorer, x).score >= threshold


def iterative_score(
    scorer: FittedScorer,
    in_class,
    x,
    k2: int | None = None,
    threshold: float | None = None,
) -> ScoreRecord:
    """Second-pass confidence computed in the space of first-pass scores.

    Every fitted sample and the query are mapped to their clamped first-pass
    score, then the pooled bound is rerun on those one-dimensional values
    with k2 evenly spaced threshold predicates (accept iff score <= j/k2).
    In score space the predicates are plain closed balls under the absolute
    value, since clamped scores are nonnegative.
    """
    samples = make_sample_set(in_class, scorer.norm)
    if samples.dimension != scorer.dimension:
        raise DimensionMismatchError(
            f"fit set has dimension {samples.dimension}, scorer expects {scorer.dimension}"
        )
    if k2 is None:
        k2 = scorer.k
    if k2 < 1:
        raise InputError(f"k2 must be >= 1, got {k2}")
    query_first = clamp_unit(score(scorer, x).score)
    class_first = scorer.clamped_scores(samples.samples)
    pos = SampleSet(np.array([[query_first]]), NormKind.L2)
    neg = SampleSet(class_first.reshape(-1, 1), NormKind.L2)
    predicates = [RadiusIndicator(j / k2, NormKind.L2) for j in range(1, k2 + 1)]
    report = compute_bound(pos, neg, predicates)
    raw = report.raw_bound
    verdict = None if threshold is None else ("in" if raw >= threshold else "out")
    return ScoreRecord(score=raw, clamped=clamp_unit(raw), verdict=verdict)


def iterative_scores_batch(
    scorer: FittedScorer, in_class, queries, k2: int | None = None
) -> np.ndarray:
    """Second-pass scores for a query block, reusing one first-pass sweep."""
    samples = make_sample_set(in_class, scorer.norm)
    if samples.dimension != scorer.dimension:
        raise DimensionMismatchError(
            f"fit set has dimension {samples.dimension}, scorer expects {scorer.dimension}"
        )
    if k2 is None:
        k2 = scorer.k
    if k2 < 1:
        raise InputError(f"k2 must be >= 1, got {k2}")
    class_first = scorer.clamped_scores(samples.samples)
    neg = SampleSet(class_first.reshape(-1, 1), NormKind.L2)
    predicates = [RadiusIndicator(j / k2, NormKind.L2) for j in range(1, k2 + 1)]
    query_first = scorer.clamped_scores(queries)
    out = np.empty(query_first.shape[0], dtype=np.float64)
    for i, s in enumerate(query_first):
        pos = SampleSet(np.array([[s]]), NormKind.L2)
        out[i] = compute_bound(pos, neg, predicates).raw_bound
    return out
