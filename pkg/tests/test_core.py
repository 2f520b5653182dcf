from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflecopula.core import (
    M,
    PI,
    W,
    CompleteDependence,
    Convex,
    GridCopula,
    OrdinalSum,
    Parametric,
    eval_cdf,
    eval_cdf_array,
    fgm,
    partial1,
    partial2,
    to_grid,
    transpose,
    validate,
)
from shufflecopula.maps import IntervalExchange, PiecewiseAffineMap
from shufflecopula.shuffles import doubling_map, half_swap

from strategies import exchanges, irregular_exchanges, thetas

PROBE = np.linspace(0, 1, 17)
X, Y = np.meshgrid(PROBE, PROBE, indexing="ij")


def test_pi_is_valid():
    assert validate(PI).ok


def test_bad_grid_rejected():
    g = np.full((4, 4), 1 / 16)
    g[0, 0] += 0.01
    report = validate(GridCopula(g))
    assert not report.ok
    assert any("not doubly stochastic" in f for f in report.failures())
    assert report.row_sums[0] == pytest.approx(0.26)


def test_negative_mass_rejected():
    g = np.array([[0.6, -0.1], [-0.1, 0.6]])
    assert not validate(GridCopula(g)).ok


def test_fgm_theta_range():
    assert not validate(Parametric("FGM", 1.5)).ok


def test_non_measure_preserving_map_rejected():
    h = PiecewiseAffineMap.from_affine([(0, 1, F(1, 2), 0)])
    assert not validate(CompleteDependence(h)).ok


def test_ordinal_partition_checked():
    assert not validate(OrdinalSum((0, F(1, 2)), (M,))).ok
    assert validate(OrdinalSum((0, F(1, 3), 1), (fgm(0.5), W))).ok


def test_fgm_closed_form_values():
    # C(x, y) = xy(1 + θ(1-x)(1-y))
    assert eval_cdf(fgm(1), 0.75, 0.5) == pytest.approx(0.421875, abs=1e-15)
    assert partial1(fgm(1), 0, 0.5) == pytest.approx(0.75, abs=1e-15)


def test_eval_rejects_outside_square():
    with pytest.raises(ValueError):
        eval_cdf(PI, 1.2, 0.5)


def test_shuffle_cdf_is_exact():
    assert eval_cdf(half_swap(), F(3, 4), F(3, 4)) == F(1, 2)
    assert isinstance(eval_cdf(half_swap(), F(1, 3), F(5, 6)), F)


def test_support_flag():
    v, on = partial1(M, 0.5, 0.5, flag=True)
    assert on and v == 1.0
    v, on = partial1(M, 0.5, 0.25, flag=True)
    assert not on and v == 0.0


@given(exchanges(), st.fractions(0, 1), st.fractions(0, 1))
def test_shuffle_partials_binary(f, x, y):
    assert partial1(f, x, y) in (0.0, 1.0)
    assert partial2(f, x, y) in (0.0, 1.0)


def test_partial2_of_doubling():
    # X = (Y + k)/2 with k ∈ {0, 1} so ∂₂C(x, y) = #{preimages ≤ x} / 2
    d = doubling_map()
    assert partial2(d, F(3, 4), F(1, 4)) == 1.0
    assert partial2(d, F(1, 4), F(1, 4)) == 0.5


def test_grid_partial_is_linear_in_cell():
    g = to_grid(PI, 4)
    assert partial1(g, 0.3, 0.6) == pytest.approx(0.6)


def test_transpose_involution(named_corpus):
    for name, d in named_corpus.items():
        back = transpose(transpose(d))
        np.testing.assert_allclose(eval_cdf_array(back, X, Y), eval_cdf_array(d, X, Y), atol=1e-12, err_msg=name)


def test_transpose_swaps_arguments(named_corpus):
    for name, d in named_corpus.items():
        np.testing.assert_allclose(
            eval_cdf_array(transpose(d), X, Y), eval_cdf_array(d, Y, X), atol=1e-12, err_msg=name
        )


def test_corpus_axioms(named_corpus):
    for name, d in named_corpus.items():
        assert validate(d).ok, name
        C = eval_cdf_array(d, X, Y)
        # Fréchet bounds W ≤ C ≤ M
        assert np.all(C <= np.minimum(X, Y) + 1e-12), name
        assert np.all(C >= np.maximum(X + Y - 1, 0) - 1e-12), name
        # 2-increasing
        assert np.diff(np.diff(C, axis=0), axis=1).min() >= -1e-12, name


@given(data=st.data())
def test_lipschitz(data, named_corpus):
    name = data.draw(st.sampled_from(sorted(named_corpus)))
    d = named_corpus[name]
    u, v, x, y = (data.draw(st.floats(0, 1)) for _ in range(4))
    lhs = abs(float(eval_cdf_array(d, u, v)) - float(eval_cdf_array(d, x, y)))
    assert lhs <= abs(u - x) + abs(v - y) + 1e-12


@pytest.mark.parametrize("n", [2, 7, 16, 64])
def test_to_grid_doubly_stochastic(named_corpus, n):
    for name, d in named_corpus.items():
        if isinstance(d, GridCopula) and (n % d.n) and n != d.n:
            continue
        m = to_grid(d, n).mass
        assert m.min() >= 0, name
        np.testing.assert_allclose(m.sum(axis=0), 1 / n, atol=1e-9, err_msg=name)
        np.testing.assert_allclose(m.sum(axis=1), 1 / n, atol=1e-9, err_msg=name)


def test_to_grid_small_oracles():
    np.testing.assert_array_equal(to_grid(M, 2).mass, [[0.5, 0], [0, 0.5]])
    np.testing.assert_array_equal(to_grid(PI, 2).mass, np.full((2, 2), 0.25))
    np.testing.assert_array_equal(to_grid(half_swap(), 2).mass, [[0, 0.5], [0.5, 0]])


def test_to_grid_cell_masses_match_cdf():
    # cell masses of an exact copula equal inclusion–exclusion of its CDF
    d = Convex(0.4, doubling_map(), fgm(-0.6))
    n = 8
    t = np.linspace(0, 1, n + 1)
    C = eval_cdf_array(d, *np.meshgrid(t, t, indexing="ij"))
    np.testing.assert_allclose(to_grid(d, n).mass, np.diff(np.diff(C, axis=0), axis=1), atol=1e-12)


def test_ordinal_grid_block_placement():
    d = OrdinalSum((0, F(1, 2), 1), (PI, M))
    g = to_grid(d, 4).mass
    np.testing.assert_allclose(g[:2, :2], np.full((2, 2), 1 / 8))
    np.testing.assert_allclose(g[2:, 2:], np.diag([0.25, 0.25]))
    assert g[:2, 2:].sum() == 0


@given(thetas)
def test_fgm_grid_valid(theta):
    assert validate(to_grid(fgm(theta), 8)).ok


@given(irregular_exchanges())
def test_exchange_grid_matches_transpose(f):
    np.testing.assert_allclose(to_grid(f.inverse(), 16).mass, to_grid(f, 16).mass.T, atol=1e-15)


def test_kron_upsample():
    g = to_grid(fgm(0.5), 4)
    up = to_grid(g, 8)
    np.testing.assert_allclose(up.mass[:2, :2].sum(), g.mass[0, 0])
    assert validate(up).ok


def test_grid_equality():
    assert to_grid(M, 4) == to_grid(IntervalExchange.identity(), 4)
    assert to_grid(M, 4) != to_grid(W, 4)
