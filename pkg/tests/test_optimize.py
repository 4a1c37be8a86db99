import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jcreceiver.errors import DomainError, EvaluationError
from jcreceiver.optimize import (SearchWindow, best_over_windows, golden_section_max, maximize_scalar,
                                 scan)


def test_two_point_scan():
    xs, ys = scan(lambda x: x * x, SearchWindow(0.0, 1.0, 2))
    np.testing.assert_array_equal(xs, [0.0, 1.0])
    np.testing.assert_array_equal(ys, [0.0, 1.0])


def test_vectorized_scan_matches_loop():
    w = SearchWindow(-1.0, 2.0, 31)
    a = scan(np.sin, w, vectorized=True)[1]
    b = scan(math.sin, w)[1]
    np.testing.assert_allclose(a, b, atol=0)


@given(st.floats(-3.0, 3.0))
def test_quadratic_peak(c):
    rep = maximize_scalar(lambda x: -(x - c) ** 2, SearchWindow(-4.0, 4.0, 64))
    assert abs(rep.x_star - c) < 1e-6
    assert rep.f_star >= -1e-12


def test_golden_section_tolerance():
    x, y, n = golden_section_max(lambda x: -abs(x - 0.3), 0.0, 1.0, 1e-10)
    assert abs(x - 0.3) < 1e-9
    assert n < 60


def test_refinement_never_loses_to_grid():
    f = lambda x: math.cos(40.0 * x)
    w = SearchWindow(0.0, 1.0, 17)
    rep = maximize_scalar(f, w)
    assert rep.f_star >= max(scan(f, w)[1])


def test_flat_objective_returns_lower_edge():
    rep = maximize_scalar(lambda x: 1.0, SearchWindow(2.0, 5.0, 10))
    assert rep.x_star == 2.0


def test_edge_maximum():
    rep = maximize_scalar(lambda x: x, SearchWindow(0.0, 1.0, 11))
    assert rep.x_star == 1.0 and rep.f_star == 1.0


def test_earlier_window_wins_tie():
    w1, w2 = SearchWindow(0.0, 1.0, 9), SearchWindow(10.0, 11.0, 9)
    rep = best_over_windows(lambda x: math.cos(2 * math.pi * x), [w1, w2])
    assert rep.window == w1


def test_best_window_is_reported():
    w1, w2 = SearchWindow(0.0, 1.0), SearchWindow(7.5, 9.0)
    rep = best_over_windows(lambda x: -(x - 8.0) ** 2, [w1, w2])
    assert rep.window == w2 and abs(rep.x_star - 8.0) < 1e-8


def test_non_finite_objective():
    with pytest.raises(EvaluationError):
        maximize_scalar(lambda x: math.nan if x > 0.5 else x, SearchWindow(0.0, 1.0, 5))
    with pytest.raises(EvaluationError):
        scan(lambda xs: np.where(xs > 0.5, np.inf, xs), SearchWindow(0.0, 1.0, 5), vectorized=True)


@pytest.mark.parametrize("args", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf), (0.0, 1.0, 1), (0.0, 1.0, 10, 1e-2)])
def test_window_validation(args):
    with pytest.raises(DomainError):
        SearchWindow(*args)


def test_no_windows():
    with pytest.raises(DomainError):
        best_over_windows(lambda x: x, [])


def test_trace_distance_objectives():
    from jcreceiver.measurement import closed_form_Dtr
    rep = maximize_scalar(lambda p: closed_form_Dtr(1.0, p), SearchWindow(0.0, 2.0, 2048), vectorized=True)
    assert abs(rep.x_star - 0.8069) < 1e-3 and abs(rep.f_star - 0.9550) < 5e-4
    assert rep.window.lo <= rep.x_star <= rep.window.hi
    assert rep.f_star == closed_form_Dtr(1.0, rep.x_star)
    _, ys = scan(lambda p: closed_form_Dtr(2.0, p), SearchWindow(0.0, 2.0), vectorized=True)
    assert abs(ys.max() - 0.9896) < 1e-3


def test_doubling_grid_never_hurts():
    from jcreceiver.measurement import closed_form_Dtr
    for alpha, (lo, hi) in [(1.0, (0, 2)), (0.5, (7.5, 9)), (2.0, (0, 35))]:
        f = lambda p: closed_form_Dtr(alpha, p)
        vals = [maximize_scalar(f, SearchWindow(lo, hi, n), vectorized=True).f_star for n in (64, 128, 256, 512)]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_deterministic():
    f = lambda x: math.sin(3 * x) * math.exp(-x)
    w = SearchWindow(0.0, 3.0, 100)
    assert maximize_scalar(f, w) == maximize_scalar(f, w)


def test_constant_scan():
    _, ys = scan(lambda x: 2.5, SearchWindow(0.0, 0.1, 2))
    assert np.all(ys == 2.5)
