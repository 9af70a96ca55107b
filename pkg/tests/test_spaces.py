import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bollobas_lab.errors import GeometryError
from bollobas_lab.spaces import (INF, Space, SumSpace, duality_map, lp_norm,
                                 modulus_convexity, pair, state_pair,
                                 support_states)

from _oracles import modulus_convexity_grid


def test_norm_basics():
    assert lp_norm([1, 0, 0], 1) == 1.0
    assert lp_norm([1, 1], INF) == 1.0
    assert lp_norm([3, 4], 2) == 5.0


def test_pairing_basics():
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    assert pair(e1, e1) == 1.0
    assert pair(e1, e2) == 0.0
    w = 0.5 ** np.arange(1, 11)
    assert pair(w, np.ones(10)) == pytest.approx(1 - 2.0 ** -10, abs=0)


def test_pair_dimension_mismatch():
    from bollobas_lab.errors import DimensionMismatchError
    with pytest.raises(DimensionMismatchError):
        pair(np.ones(3), np.ones(4))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000),
       st.sampled_from([1.0, 1.5, 2.0, 3.0, INF]))
def test_hoelder_consistency(dim, seed, p):
    rng = np.random.default_rng(seed)
    s = Space(p, dim)
    x = rng.normal(size=dim)
    xs = rng.normal(size=dim)
    assert abs(pair(xs, x)) <= s.dual().norm(xs) * s.norm(x) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000),
       st.sampled_from([1.3, 1.5, 2.0, 2.7, 4.0]),
       st.booleans())
def test_duality_map_correctness(dim, seed, p, complex_field):
    rng = np.random.default_rng(seed)
    s = Space(p, dim, "complex" if complex_field else "real")
    x = rng.normal(size=dim) + (1j * rng.normal(size=dim) if complex_field else 0)
    x = x / s.norm(x)
    xs = duality_map(x, s)
    assert pair(xs, x) == pytest.approx(1.0, abs=1e-10)
    assert s.dual().norm(xs) == pytest.approx(1.0, abs=1e-10)


def test_duality_map_spec_example():
    p = 2.5
    s = Space(p, 2)
    x = np.array([1.0, 1.0]) / 2 ** (1 / p)
    xs = duality_map(x, s)
    q = p / (p - 1)
    assert np.allclose(xs, np.array([1.0, 1.0]) / 2 ** (1 / q))


def test_support_states_hilbert_unique():
    s = Space(2, 3)
    x = np.array([1.0, 0.0, 0.0])
    desc = support_states(x, s)
    assert desc.kind == "unique"
    assert np.allclose(desc.sample(np.random.default_rng(0))[0], x)


def test_support_states_l1_box():
    s = Space(1, 4)
    x = np.array([1.0, 0.0, 0.0, 0.0])
    desc = support_states(x, s)
    assert desc.kind == "l1_box"
    rng = np.random.default_rng(0)
    for xs in desc.sample(rng, 12):
        assert xs[0] == 1.0
        assert np.abs(xs[1:]).max() <= 1.0
        state_pair(x, s, xs)            # validates Pi membership


def test_support_states_linf_simplex():
    s = Space(INF, 3)
    x = np.array([1.0, -1.0, 0.3])
    desc = support_states(x, s)
    assert desc.kind == "linf_simplex"
    rng = np.random.default_rng(1)
    for xs in desc.sample(rng, 12):
        state_pair(x, s, xs)


def test_support_states_sampled_members_are_states(rng):
    for p in (1.0, 1.7, 2.0, INF):
        s = Space(p, 5)
        x = rng.normal(size=5)
        x = x / s.norm(x)
        desc = support_states(x, s)
        for xs in desc.sample(rng, 6):
            state_pair(x, s, xs)


def test_modulus_convexity_hilbert_closed_form():
    s = Space(2, 2)
    assert modulus_convexity(s, 2.0) == pytest.approx(1.0, abs=1e-12)
    assert modulus_convexity(s, 1.0) == pytest.approx(1 - np.sqrt(3) / 2,
                                                      abs=1e-12)


@pytest.mark.parametrize("p", [4.0, 3.0])
def test_modulus_convexity_matches_two_dim_oracle(p):
    for eps in (0.5, 1.0, 1.5):
        ours = modulus_convexity(Space(p, 2), eps)
        hanner = 1 - (1 - (eps / 2) ** p) ** (1 / p)   # exact for p >= 2
        assert ours == pytest.approx(hanner, abs=1e-8)


def test_modulus_convexity_small_p_against_grid():
    val = modulus_convexity(Space(1.5, 2), 1.0)
    grid = modulus_convexity_grid(1.5, 1.0, n=1500)
    assert val <= grid + 1e-6
    assert val == pytest.approx(grid, abs=5e-4)


def test_modulus_convexity_monotone_and_positive():
    s = Space(1.5, 2)
    prev = 0.0
    for eps in (0.2, 0.6, 1.0, 1.6):
        d = modulus_convexity(s, eps)
        assert d > 0
        assert d >= prev - 1e-12
        prev = d


def test_modulus_convexity_rejects_extreme_p():
    with pytest.raises(GeometryError):
        modulus_convexity(Space(1, 2), 0.5)
    with pytest.raises(GeometryError):
        modulus_convexity(Space(INF, 2), 0.5)


def test_dual_involution():
    s = Space(1.5, 4)
    assert s.dual().dual() == s
    assert Space(1, 3).dual().p == INF
    assert Space(INF, 3).dual().p == 1


def test_sum_space_norms():
    s = SumSpace((Space(2, 2), Space(2, 2)), 1.0)
    v = np.array([3.0, 4.0, 0.0, 1.0])
    assert s.norm(v) == pytest.approx(6.0)
    s2 = SumSpace((Space(2, 2), Space(2, 2)), INF)
    assert s2.norm(v) == pytest.approx(5.0)
    assert s.dual().outer_p == INF
