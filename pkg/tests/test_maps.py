from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflecopula.maps import IntervalExchange, IntervalUnion, PiecewiseAffineMap, l1_distance

from strategies import exchanges, interval_unions, irregular_exchanges

DOUBLING = PiecewiseAffineMap.from_affine([(0, F(1, 2), 2, 0), (F(1, 2), 1, 2, -1)])
TENT = PiecewiseAffineMap.from_affine([(0, F(1, 2), 2, 0), (F(1, 2), 1, -2, 2)])
IDENT = IntervalExchange.identity()
HALF_SWAP = IntervalExchange.from_permutation([1, 0])


class TestIntervalUnion:
    def test_parse_and_measure(self):
        a = IntervalUnion.parse("0.25,0.5;0.75,1")
        assert a.intervals == ((F(1, 4), F(1, 2)), (F(3, 4), F(1)))
        assert a.measure() == F(1, 2)
        assert a.measure_below(F(7, 8)) == F(3, 8)

    def test_merges_and_drops_degenerate(self):
        a = IntervalUnion([(0, F(1, 4)), (F(1, 4), F(1, 2)), (F(3, 4), F(3, 4))])
        assert a.intervals == ((F(0), F(1, 2)),)

    def test_rejects_outside_unit(self):
        with pytest.raises(ValueError):
            IntervalUnion([(F(-1, 2), F(1, 2))])

    @given(interval_unions())
    def test_complement_partitions(self, a):
        comp = a.complement()
        assert a.measure() + comp.measure() == 1


class TestPiecewiseAffine:
    def test_doubling_is_measure_preserving(self):
        assert DOUBLING.problems() == []

    def test_non_measure_preserving_detected(self):
        h = PiecewiseAffineMap.from_affine([(0, 1, F(1, 2), 0)])
        assert any("measure" in p for p in h.problems())

    @pytest.mark.parametrize("h, expected", [(DOUBLING, F(7, 8)), (TENT, F(7, 8)), (IDENT, F(1))])
    def test_exact_norm(self, h, expected):
        assert h.sobolev_norm_sq() == expected

    def test_doubling_norm_split(self):
        # ∬(∂₁C)² = 1 - ∫h = 1/2 for the doubling map
        assert 1 - DOUBLING.integral() == F(1, 2)

    def test_cdf_exact(self):
        # C(x, y) = m{t ≤ x : 2t mod 1 ≤ y}
        assert DOUBLING.cdf(F(3, 4), F(1, 2)) == F(1, 4) + F(1, 4)
        assert DOUBLING.cdf(F(1), F(1, 3)) == F(1, 3)

    def test_cdf_array_matches_exact(self):
        xs = np.linspace(0, 1, 7)
        grid = DOUBLING.cdf_array(xs[:, None], xs[None, :])
        exact = [[float(DOUBLING.cdf(F(x), F(y))) for y in xs] for x in xs]
        np.testing.assert_allclose(grid, exact, atol=1e-15)

    def test_compose_doubling_twice(self):
        quad = DOUBLING.compose(DOUBLING)
        assert quad(F(3, 8)) == F(1, 2)
        assert quad.problems() == []
        assert len(quad.pieces) == 4


class TestIntervalExchange:
    def test_half_swap(self):
        assert HALF_SWAP(F(1, 4)) == F(3, 4)
        assert HALF_SWAP.inverse() == HALF_SWAP
        assert l1_distance(IDENT, HALF_SWAP) == F(1, 2)

    def test_cell_mass_half_swap(self):
        np.testing.assert_array_equal(HALF_SWAP.cell_mass(2), [[0, 0.5], [0.5, 0]])

    def test_reversal_slope(self):
        w = IntervalExchange.reversal()
        assert w(F(1, 4)) == F(3, 4)
        assert w.problems() == []

    def test_bad_slope_reported(self):
        bad = IntervalExchange.from_targets([(0, 1, 0, 1)])
        assert bad.problems() == []
        two = IntervalExchange(PiecewiseAffineMap.from_affine([(0, F(1, 2), 2, 0), (F(1, 2), 1, 2, -1)]).pieces)
        assert any("slope" in p for p in two.problems())

    @given(irregular_exchanges())
    def test_inverse_composes_to_identity(self, f):
        assert f.compose(f.inverse()) == IDENT
        assert f.inverse().compose(f) == IDENT

    @given(exchanges(), exchanges())
    def test_composition_is_exchange(self, f, g):
        h = f.compose(g)
        assert isinstance(h, IntervalExchange)
        assert h.problems() == []

    @given(irregular_exchanges(), irregular_exchanges())
    def test_l1_symmetric_and_bounded(self, f, g):
        d = l1_distance(f, g)
        assert d == l1_distance(g, f)
        assert 0 <= d <= 1

    @given(irregular_exchanges())
    def test_l1_inverse_to_identity_equal(self, f):
        # substituting y = f(x) shows ∫|f⁻¹ - id| = ∫|f - id|
        assert l1_distance(f.inverse(), IDENT) == l1_distance(f, IDENT)

    @given(irregular_exchanges())
    def test_cell_mass_doubly_stochastic(self, f):
        m = f.cell_mass(16)
        np.testing.assert_allclose(m.sum(axis=0), 1 / 16, atol=1e-12)
        np.testing.assert_allclose(m.sum(axis=1), 1 / 16, atol=1e-12)

    @given(st.permutations(range(6)))
    def test_cell_permutation_roundtrip(self, perm):
        f = IntervalExchange.from_permutation(perm)
        assert list(f.cell_permutation(6)) == list(perm)
        assert f.is_aligned(6)
