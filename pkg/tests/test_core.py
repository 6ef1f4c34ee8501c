import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlapbound import (
    DimensionMismatchError,
    InputError,
    NormKind,
    RadiusFamily,
    RadiusIndicator,
    SampleSet,
    ScoreThreshold,
    fit,
    make_sample_set,
    norm,
)
from conftest import ALL_NORMS

# coordinate magnitudes stay above the range where squaring underflows to 0
finite_coord = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-120, max_value=1e6),
    st.floats(min_value=-1e6, max_value=-1e-120),
)
vectors = st.lists(finite_coord, min_size=1, max_size=8)


@pytest.mark.parametrize(
    "kind,expected",
    [(NormKind.L2, 5.0), (NormKind.L1, 7.0), (NormKind.LINF, 4.0)],
)
def test_norm_on_3_4(kind, expected):
    assert norm([3.0, 4.0], kind) == expected


def test_norm_rejects_nonfinite():
    with pytest.raises(InputError):
        norm([1.0, float("nan")])
    with pytest.raises(InputError):
        norm([float("inf")])


@given(vectors, st.sampled_from(ALL_NORMS))
def test_norm_nonnegative_and_zero_iff_zero(coords, kind):
    value = norm(coords, kind)
    assert value >= 0.0
    assert (value == 0.0) == all(c == 0.0 for c in coords)


@given(st.data(), st.sampled_from(ALL_NORMS))
@settings(max_examples=200)
def test_norm_triangle_inequality(data, kind):
    size = data.draw(st.integers(1, 8))
    u = data.draw(st.lists(finite_coord, min_size=size, max_size=size))
    v = data.draw(st.lists(finite_coord, min_size=size, max_size=size))
    lhs = norm([a + b for a, b in zip(u, v)], kind)
    rhs = norm(u, kind) + norm(v, kind)
    assert lhs <= rhs + 1e-12 * max(1.0, rhs)


# scale magnitudes stay clear of the subnormal regime, where squaring underflows
scales = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-6, max_value=1e3),
    st.floats(min_value=-1e3, max_value=-1e-6),
)


@given(vectors, scales, st.sampled_from(ALL_NORMS))
@settings(max_examples=200)
def test_norm_absolute_homogeneity(coords, c, kind):
    scaled = norm([c * v for v in coords], kind)
    direct = abs(c) * norm(coords, kind)
    assert scaled == pytest.approx(direct, rel=1e-12, abs=1e-300)


def test_radius_indicator_boundary_is_closed():
    ball = RadiusIndicator(1.0, NormKind.L2)
    assert ball.evaluate([0.6, 0.8]) == 1  # norm exactly 1
    assert RadiusIndicator(0.5, NormKind.L2).evaluate([0.6, 0.8]) == 0


def test_score_threshold_uses_clamped_score():
    scorer = fit([[1.0, 0.0]], k=2)
    # query scores below/above the cut
    g = ScoreThreshold(0.5, scorer)
    self_score = scorer.clamped_scores([[1.0, 0.0]])[0]
    assert self_score == 1.0
    assert g.evaluate([1.0, 0.0]) == 0  # 1.0 > 0.5
    loose = ScoreThreshold(1.0, scorer)
    assert loose.evaluate([1.0, 0.0]) == 1


@given(vectors, st.floats(min_value=0, max_value=10), st.sampled_from(ALL_NORMS))
def test_indicator_always_zero_or_one(coords, radius, kind):
    assert RadiusIndicator(radius, kind).evaluate(coords) in (0, 1)


@given(
    vectors,
    st.floats(min_value=0, max_value=5),
    st.floats(min_value=0, max_value=5),
    st.sampled_from(ALL_NORMS),
)
def test_indicator_monotone_in_radius(coords, r1, r2, kind):
    small, big = sorted([r1, r2])
    assert RadiusIndicator(small, kind).evaluate(coords) <= RadiusIndicator(big, kind).evaluate(coords)


def test_radius_family_spacing_and_top():
    fam = RadiusFamily(k=4, top=2.0)
    assert fam.radii == (0.5, 1.0, 1.5, 2.0)
    assert all(b > a for a, b in zip(fam.radii, fam.radii[1:]))
    assert fam.radii[-1] == fam.top


def test_radius_family_degenerate_top_zero():
    fam = RadiusFamily(k=3, top=0.0)
    assert fam.radii == (0.0, 0.0, 0.0)


def test_radius_family_rejects_bad_k():
    with pytest.raises(InputError):
        RadiusFamily(k=0, top=1.0)


def test_sample_set_caches_and_validates():
    ss = SampleSet(np.array([[0.2], [1.0]]))
    assert ss.max_norm == 1.0
    assert ss.mean[0] == pytest.approx(0.6)
    assert len(ss) == 2 and ss.dimension == 1
    assert not ss.samples.flags.writeable
    with pytest.raises(InputError):
        SampleSet(np.empty((0, 2)))
    with pytest.raises(InputError):
        SampleSet(np.array([[np.nan]]))


def test_sample_set_1d_input_is_column():
    ss = make_sample_set([0.2, 1.0])
    assert ss.samples.shape == (2, 1)


def test_indicator_vectorized_matches_scalar(rng):
    X = rng.normal(size=(50, 3))
    for kind in ALL_NORMS:
        g = RadiusIndicator(1.2, kind)
        batch = g.evaluate_many(X)
        assert batch.dtype == bool
        assert [int(b) for b in batch] == [g.evaluate(row) for row in X]


def test_score_threshold_dimension_mismatch():
    scorer = fit([[1.0, 0.0]], k=1)
    with pytest.raises(DimensionMismatchError):
        ScoreThreshold(0.5, scorer).evaluate([1.0, 0.0, 0.0])
