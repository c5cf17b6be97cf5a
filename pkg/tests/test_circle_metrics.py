import math

import numpy as np
import pytest

from grid_oracle import CircleGrid

from diffeocurv.circle_metrics import (
    ABMetric,
    L_residual,
    burgers_curvature_1d,
    choose_j,
    closed_form_C,
    curvature_ab_direct,
    gamma,
    hs_backend,
    much_backend,
    much_example,
    negative_section,
    random_trigpoly,
    regime1_S,
    regime2_S,
    section_cos_const,
    section_cos_sin,
    sphere_prediction,
)
from diffeocurv.euler_arnold import curvature_S
from diffeocurv.trigpoly import DomainError, TrigPoly

PI = math.pi


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)])
@pytest.mark.parametrize("i,j", [(1, 2), (1, 5), (3, 4), (6, 2)])
def test_mode_pairs_equal_closed_form(a, b, i, j):
    m = ABMetric(a, b)
    C = closed_form_C(m, 2 * PI * i, 2 * PI * j)
    assert C > 0
    for u, v in [(TrigPoly.cos(i), TrigPoly.cos(j)), (TrigPoly.cos(i), TrigPoly.sin(j)),
                 (TrigPoly.sin(i), TrigPoly.sin(j))]:
        assert curvature_S(m, u, v).S == pytest.approx(C, rel=1e-10)


def test_mode_pair_frozen_value():
    # a = b = 1, cos(2 pi x), cos(4 pi x): evaluated on an FFT grid
    g = CircleGrid(lambda k: 1 + k * k)
    oracle = g.curvature(np.cos(2 * PI * g.x), np.cos(4 * PI * g.x))
    assert oracle == pytest.approx(384.30713845357, rel=1e-10)
    assert closed_form_C(ABMetric(1, 1), 2 * PI, 4 * PI) == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0), (1.0, 0.0)])
def test_companion_sections(a, b):
    m = ABMetric(a, b)
    for i in (1, 2, 3):
        k = 2 * PI * i
        rep = curvature_S(m, TrigPoly.cos(i), TrigPoly.sin(i))
        assert rep.S == pytest.approx(section_cos_sin(m, k), rel=1e-9)
        rep = curvature_S(m, TrigPoly.cos(i), TrigPoly.constant(1.0))
        assert rep.S == pytest.approx(section_cos_const(m, k), rel=1e-9)


def test_closed_form_rejects_equal_or_zero_frequency():
    m = ABMetric(1, 1)
    with pytest.raises(ValueError):
        closed_form_C(m, 2 * PI, 2 * PI)
    with pytest.raises(ValueError):
        closed_form_C(m, 0.0, 2 * PI)


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)])
def test_generic_engine_matches_grid_oracle(a, b):
    rng = np.random.default_rng(7)
    m = ABMetric(a, b)
    g = CircleGrid(lambda k: a + b * k * k)
    for _ in range(5):
        u, v = random_trigpoly(rng, 5), random_trigpoly(rng, 5)
        s = curvature_S(m, u, v).S
        assert s == pytest.approx(g.curvature(g.sample(u), g.sample(v)), rel=1e-8, abs=1e-8 * m.norm2(u) * m.norm2(v))


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)])
def test_christoffel_form_and_remainder(a, b):
    rng = np.random.default_rng(11)
    m = ABMetric(a, b)
    for _ in range(20):
        u, v = random_trigpoly(rng, 5), random_trigpoly(rng, 5)
        s = curvature_S(m, u, v).S
        scale = max(abs(s), 1e-12 * m.norm2(u) * m.norm2(v))
        assert abs(curvature_ab_direct(m, u, v) - s) < 1e-9 * scale
        assert abs(L_residual(m, u, v)) < 1e-9 * scale


def test_gamma_is_symmetric():
    rng = np.random.default_rng(3)
    m = ABMetric(1.0, 2.0)
    u, v = random_trigpoly(rng, 3), random_trigpoly(rng, 3)
    assert gamma(m, u, v).allclose(gamma(m, v, u))


@pytest.mark.parametrize("alpha", [0.05, 0.1, 0.2, 0.34])
def test_small_alpha_negative_section(alpha):
    m = ABMetric(4 * PI ** 2 * alpha, 1.0)
    cert = negative_section(m)
    assert cert.regime == "small-alpha"
    assert cert.S < 0
    assert cert.S == pytest.approx(regime1_S(alpha, 1.0), rel=1e-8)
    assert curvature_S(m, cert.u, cert.v).S == pytest.approx(cert.S, rel=1e-8)


@pytest.mark.parametrize("r", [0.35, 0.6, 1.0, 1.3])
def test_large_alpha_negative_section(r):
    m = ABMetric(4 * PI ** 2 * r, 1.0)
    cert = negative_section(m)
    assert cert.regime == "r-construction" and cert.j == 1
    assert cert.S < 0
    assert cert.S == pytest.approx(regime2_S(r, 1, 1.0), rel=1e-8)


@pytest.mark.parametrize("alpha", [2.0, 10.0, 57.3])
def test_negative_section_for_larger_alpha(alpha):
    j = choose_j(alpha)
    assert math.sqrt(alpha / 0.34) / 2 < j <= math.sqrt(alpha / 0.34)
    cert = negative_section(ABMetric(4 * PI ** 2 * alpha, 1.0))
    assert cert.S < 0
    assert cert.S == pytest.approx(regime2_S(cert.r, j, 1.0), rel=1e-8)


def test_negative_section_needs_both_parameters():
    with pytest.raises(DomainError):
        negative_section(ABMetric(1.0, 0.0))


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("k", [1, 2])
def test_much_negative_plane(c, k):
    u, v = much_example(c, k)
    assert curvature_S(much_backend(c), u, v).S < 0


def test_much_frozen_value():
    # c = 1, k = 1: FFT-grid evaluation with A = c on constants and k^2 otherwise
    g = CircleGrid(lambda k: 1.0 if k == 0 else k * k)
    u, v = much_example(1.0, 1)
    oracle = g.curvature(g.sample(u), g.sample(v))
    assert oracle == pytest.approx(-48.7045455169864, rel=1e-9)
    assert curvature_S(much_backend(1.0), u, v).S == pytest.approx(oracle, rel=1e-9)


def test_hs_is_a_round_sphere():
    rng = np.random.default_rng(5)
    m = hs_backend()
    for _ in range(10):
        u = random_trigpoly(rng, 5, mean_zero=True)
        v = random_trigpoly(rng, 5, mean_zero=True)
        assert curvature_S(m, u, v).S == pytest.approx(sphere_prediction(m, u, v), rel=1e-9)
    rep = curvature_S(m, TrigPoly.cos(1), TrigPoly.sin(1))
    assert rep.S == pytest.approx(PI ** 4)
    assert rep.K == pytest.approx(0.25)


def test_hs_is_limit_of_ab():
    u, v = TrigPoly.cos(1) + 0.3 * TrigPoly.sin(3), TrigPoly.sin(2)
    s_hs = curvature_S(hs_backend(), u, v).S
    s_small = curvature_S(ABMetric(1e-7, 1.0), u, v).S
    assert s_small == pytest.approx(s_hs, rel=1e-5)


def test_hs_rejects_constants():
    with pytest.raises(DomainError, match="mean"):
        curvature_S(hs_backend(), TrigPoly({0: 1.0, 1: 1.0}), TrigPoly.sin(1))


def test_l2_metric_is_one_dimensional_burgers():
    rng = np.random.default_rng(9)
    m = ABMetric(1.0, 0.0)
    for _ in range(10):
        u, v = random_trigpoly(rng, 4), random_trigpoly(rng, 4)
        s = curvature_S(m, u, v).S
        assert s >= 0
        assert s == pytest.approx(burgers_curvature_1d(u, v), rel=1e-9)


def test_period_mismatch_rejected():
    with pytest.raises(DomainError, match="period"):
        curvature_S(ABMetric(1, 1), TrigPoly.cos(1, period=2.0), TrigPoly.sin(1, period=2.0))
