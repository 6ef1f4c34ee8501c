import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from overlapbound import DiscreteDistribution, NormKind, SampleSet

ALL_NORMS = (NormKind.L1, NormKind.L2, NormKind.LINF)


def random_support(rng: np.random.Generator, n_points: int, dim: int) -> np.ndarray:
    """Distinct support points in [-2, 2]^dim."""
    while True:
        pts = rng.uniform(-2.0, 2.0, size=(n_points, dim))
        if len({tuple(r) for r in pts.tolist()}) == n_points:
            return pts


def random_masses(rng: np.random.Generator, n: int) -> np.ndarray:
    """Strictly positive masses summing to 1 to within float addition error."""
    w = rng.uniform(0.05, 1.0, size=n)
    m = w / math.fsum(w.tolist())
    m[-1] = 1.0 - math.fsum(m[:-1].tolist())
    return m


def random_pair(
    rng: np.random.Generator, max_points: int = 16, max_dim: int = 3
) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Two distributions over subsets of one point pool, so supports overlap."""
    dim = int(rng.integers(1, max_dim + 1))
    pool_size = int(rng.integers(2, max_points + 1))
    pool = random_support(rng, pool_size, dim)
    n_p = int(rng.integers(1, pool_size + 1))
    n_q = int(rng.integers(1, pool_size + 1))
    idx_p = rng.permutation(pool_size)[:n_p]
    idx_q = rng.permutation(pool_size)[:n_q]
    p = DiscreteDistribution(pool[idx_p], random_masses(rng, n_p))
    q = DiscreteDistribution(pool[idx_q], random_masses(rng, n_q))
    return p, q


def integer_count_pair(
    rng: np.random.Generator, max_points: int = 8, max_dim: int = 3, max_count: int = 6
) -> tuple[DiscreteDistribution, DiscreteDistribution, np.ndarray, np.ndarray]:
    """A pair whose masses are exact replication counts over a shared pool.

    Returns (p, q, replicated_p, replicated_q) where the replicated arrays
    contain each support point repeated by its count, so empirical rates and
    means reproduce the exact ones to float-addition accuracy.
    """
    dim = int(rng.integers(1, max_dim + 1))
    pool_size = int(rng.integers(2, max_points + 1))
    pool = random_support(rng, pool_size, dim)

    def one_side():
        n = int(rng.integers(1, pool_size + 1))
        idx = rng.permutation(pool_size)[:n]
        counts = rng.integers(1, max_count + 1, size=n)
        total = int(counts.sum())
        masses = counts / total
        masses[-1] = 1.0 - math.fsum(masses[:-1].tolist())
        dist = DiscreteDistribution(pool[idx], masses)
        replicated = np.repeat(pool[idx], counts, axis=0)
        return dist, replicated

    p, rep_p = one_side()
    q, rep_q = one_side()
    return p, q, rep_p, rep_q


def as_mass_dict(dist: DiscreteDistribution) -> dict:
    return {tuple(pt): m for pt, m in zip(dist.points.tolist(), dist.masses.tolist())}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def gaussian_cloud(
    rng: np.random.Generator, n: int, dim: int, center=0.0, norm: NormKind = NormKind.L2
) -> SampleSet:
    return SampleSet(rng.normal(size=(n, dim)) + np.asarray(center), norm)
