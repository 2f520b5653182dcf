from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shufflecopula.core import M, PI, GridCopula, fgm, to_grid, transpose
from shufflecopula.maps import IntervalExchange, IntervalUnion
from shufflecopula.norms import grid_norm_sq, shuffle_dist_sq, sobolev_dist_sq
from shufflecopula.shuffles import (
    alternating_partial_sum,
    approx_by_shuffles,
    block_leakage,
    diagonalize,
    doubling_map,
    half_swap,
    quarter_cycle,
    right_diagonalize,
    selfsimilar,
    selfsimilar_left_limit,
    sorting_shuffle,
    straighten,
)
from shufflecopula.star import star

from strategies import exchanges, interval_unions

half, quarter = F(1, 2), F(1, 4)


def offsets(s):
    return [(a, b, t - a) for a, b, t, _ in s.targets()]


class TestSortingShuffle:
    def test_sorted_set_gives_identity(self):
        assert sorting_shuffle("0,0.5") == IntervalExchange.identity()

    def test_upper_half(self):
        assert offsets(sorting_shuffle("0.5,1")) == [(0, half, half), (half, 1, -half)]

    def test_two_quarters(self):
        s = sorting_shuffle("0.25,0.5;0.75,1")
        assert offsets(s) == [(0, quarter, half), (quarter, half, -quarter), (half, F(3, 4), quarter), (F(3, 4), 1, -half)]

    def test_degenerate_intervals_dropped(self):
        assert sorting_shuffle("0.5,0.5;0.5,1") == sorting_shuffle("0.5,1")

    def test_block_restricted(self):
        s = sorting_shuffle(IntervalUnion([(F(3, 4), 1)]), half, 1)
        assert s(F(1, 4)) == F(1, 4) and s(F(7, 8)) == F(5, 8) and s(F(5, 8)) == F(7, 8)

    @given(interval_unions())
    def test_measure_preserving_bijection(self, a):
        s = sorting_shuffle(a)
        assert s.problems() == []
        assert all(slope == 1 for *_, slope in s.targets())
        assert s.compose(s.inverse()) == IntervalExchange.identity()
        # A lands on an initial segment
        assert all(s(lo) == a.measure_below(lo) for lo, _ in a)


class TestDiagonalize:
    def test_m_is_fixed(self):
        t = diagonalize(M, 4)
        assert all(s == IntervalExchange.identity() for s, _ in t.steps)
        assert t.norms == [1.0] * 5

    def test_half_swap_one_step(self):
        t = diagonalize(half_swap(), 1)
        assert t.steps[0][0] == half_swap()
        assert t.result == IntervalExchange.identity()
        assert t.final_norm_sq == 1.0 and t.mode == "exact"

    def test_doubling_exact_trace(self):
        t = diagonalize(doubling_map(), 6)
        assert t.norms == [1 - 2.0 ** -(k + 3) for k in range(7)]

    def test_doubling_support_in_diagonal_blocks(self):
        t = diagonalize(doubling_map(), 4)
        for (x0, y0), (x1, y1) in t.result.map.segments():
            xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
            assert int(xm * 16) == int(ym * 16)
        assert block_leakage(to_grid(t.result, 16).mass, 4) == pytest.approx(0, abs=1e-12)

    def test_doubling_grid(self):
        t = diagonalize(to_grid(doubling_map(), 512), 6)
        assert t.initial_norm_sq == pytest.approx(7 / 8, abs=1e-3)
        assert t.final_norm_sq >= 0.95
        assert all(b >= a - 1e-9 for a, b in zip(t.norms, t.norms[1:]))
        assert block_leakage(t.result.mass, 6) < 2 / 64

    def test_right_transpose_symmetry(self):
        left = diagonalize(doubling_map(), 6)
        right = right_diagonalize(transpose(doubling_map()), 6)
        assert right.norms == left.norms and right.side == "right"
        g = to_grid(doubling_map(), 256)
        assert right_diagonalize(transpose(g), 5).norms == pytest.approx(diagonalize(g, 5).norms, abs=1e-12)

    def test_right_of_m(self):
        assert all(s == IntervalExchange.identity() for s, _ in right_diagonalize(M, 3).steps)

    def test_right_quarter_cycle(self):
        t = right_diagonalize(quarter_cycle(), 2)
        assert t.result == IntervalExchange.identity()
        # the composed shuffle undoes the input from the right
        assert star(quarter_cycle(), t.composed).copula == IntervalExchange.identity()

    @given(exchanges(max_cells=8))
    def test_shuffles_reach_one(self, f):
        t = diagonalize(f, 3)
        assert t.final_norm_sq == 1.0
        assert star(t.composed, f).copula == t.result

    def test_grid_depth_limit(self):
        with pytest.raises(ValueError, match="exhausts"):
            diagonalize(fgm(0.5), 6, n=32)

    def test_grid_nondecreasing_fgm(self):
        t = diagonalize(fgm(1.0), 4, n=64)
        assert all(b >= a - 1e-9 for a, b in zip(t.norms, t.norms[1:]))

    def test_leakage(self):
        assert block_leakage(to_grid(M, 8).mass, 3) == 0
        assert block_leakage(to_grid(PI, 8).mass, 1) == pytest.approx(0.5)


class TestApproximation:
    def test_aligned_shuffle_is_returned(self):
        s = IntervalExchange.from_permutation([2, 0, 3, 1])
        res = approx_by_shuffles(s, 4)
        assert res.shuffle == s and res.dist_sq == 0 and res.bound == 0

    def test_bound_and_monotonicity(self):
        prev = np.inf
        for bins in (4, 8, 16):
            res = approx_by_shuffles(selfsimilar(6), bins)
            assert res.dist_sq <= res.bound + 1e-9
            assert res.dist_sq < prev
            prev = res.dist_sq

    def test_selfsimilar_values(self):
        d = [approx_by_shuffles(selfsimilar(8), b).dist_sq for b in (4, 8, 16, 32)]
        assert d == pytest.approx([0.16666, 0.08333, 0.04166, 0.020813], abs=1e-4)

    @given(exchanges(max_cells=6), st.sampled_from([2, 3, 5, 8]))
    def test_straight_output(self, f, bins):
        res = approx_by_shuffles(f, bins)
        assert all(slope == 1 for *_, slope in res.shuffle.targets())
        assert res.shuffle.problems() == []
        assert res.dist_sq <= res.bound + 1e-9

    def test_lemma_bound_is_not_certified(self):
        f = IntervalExchange.from_permutation([0, 2, 1])
        res = approx_by_shuffles(f, 2)
        assert res.lemma_bound == pytest.approx(2 / 9)
        assert res.dist_sq == res.bound == pytest.approx(5 / 18)

    def test_straighten_reversal(self):
        s = straighten(IntervalExchange.reversal(), 2)
        assert s == half_swap()

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError, match="unit-norm"):
            approx_by_shuffles(fgm(0.5), 4)
        with pytest.raises(ValueError, match="unit-norm"):
            approx_by_shuffles(to_grid(PI, 16), 4)

    def test_grid_input(self):
        f = IntervalExchange.from_permutation([3, 1, 0, 2, 6, 7, 5, 4])
        res = approx_by_shuffles(to_grid(f, 8), 8)
        assert res.shuffle == f and res.source == "grid(8)"
        assert res.dist_sq == pytest.approx(sobolev_dist_sq(to_grid(f, 8), f))

    def test_eps(self):
        g = to_grid(M, 4)  # norm² = 1 − 1/12
        with pytest.raises(ValueError):
            approx_by_shuffles(g, 2, eps=0.01)
        assert approx_by_shuffles(g, 2).shuffle == IntervalExchange.identity()


class TestSelfSimilar:
    def test_level0(self):
        assert selfsimilar(0) == IntervalExchange.identity()

    def test_level1(self):
        # the stripe F_1 = [1/4, 1/2] ∪ [3/4, 1] is flipped
        s = selfsimilar(1)
        assert s(F(1, 8)) == F(1, 8) and s(F(3, 8)) == F(3, 8)
        assert [(a, b, slope) for a, b, _, slope in s.targets()] == [
            (0, quarter, 1), (quarter, half, -1), (half, F(3, 4), 1), (F(3, 4), 1, -1)]

    def test_shift_one_matches_explicit_f1(self):
        s = selfsimilar(1, shift=1)
        xs = [F(k, 7) for k in range(7)]
        assert [s(x) for x in xs] == [x if x < half else F(3, 2) - x for x in xs]

    def test_piece_count(self):
        assert len(selfsimilar(5).targets()) <= 2**6

    def test_level_bounds(self):
        with pytest.raises(ValueError):
            selfsimilar(17)
        with pytest.raises(ValueError):
            selfsimilar(-1)
        assert len(selfsimilar(16).targets()) > 0

    @pytest.mark.parametrize("level", [2, 5, 10, 16])
    def test_left_limit_series(self, level):
        v = selfsimilar_left_limit(level, half)
        assert v == alternating_partial_sum(level + 1)
        assert abs(v - F(1, 3)) <= F(1, 2**level)

    def test_alternating_sum(self):
        assert alternating_partial_sum(0) == 0
        assert alternating_partial_sum(3) == F(3, 8)

    def test_consecutive_and_limit(self):
        for n in range(1, 9):
            assert shuffle_dist_sq(selfsimilar(n), selfsimilar(n - 1)) == F(1, 2 ** (n + 2))

    @given(st.integers(0, 6))
    def test_involution_structure(self, level):
        s = selfsimilar(level)
        assert s.problems() == []
        assert grid_norm_sq(to_grid(s, 2 ** (level + 1)).mass) == pytest.approx(1 - 1 / (3 * 2 ** (level + 1)))


def test_grid_copula_from_argmax_roundtrip():
    f = IntervalExchange.from_permutation([1, 3, 0, 2])
    g = to_grid(f, 4)
    assert isinstance(g, GridCopula)
    assert approx_by_shuffles(g, 4).target == f
