import math

import numpy as np
import pytest

from diffeocurv.circle_metrics import ABMetric, hs_backend, much_backend, random_trigpoly
from diffeocurv.euler_arnold import (
    RigidBody,
    curvature_numerator,
    curvature_S,
    displayed_so3_form,
    duality_residual,
    hat,
    so3_form_coefficients,
    vee,
)
from diffeocurv.semidirect import SemidirectElement, SemidirectMetric
from diffeocurv.torus_metrics import ABCMetric, LambdaMetric
from diffeocurv.trigpoly import DomainError, TrigPoly, VectorField

rng = np.random.default_rng(2024)


def _circle(mean_zero=False):
    return random_trigpoly(rng, 4, mean_zero=mean_zero)


def _field():
    return VectorField(TrigPoly({(1, 0): (rng.normal(), rng.normal()), (1, -1): (rng.normal(), 0.0),
                                 (0, 2): (0.0, rng.normal())}, 2),
                       TrigPoly({(0, 1): (rng.normal(), rng.normal()), (2, 1): (rng.normal(), rng.normal())}, 2))


def _stream():
    return TrigPoly({(1, 0): (rng.normal(), rng.normal()), (1, 1): (rng.normal(), 0.0),
                     (0, 2): (rng.normal(), rng.normal())}, 2)


BACKENDS = [
    ("ab", lambda: ABMetric(1.0, 1.0), lambda: _circle()),
    ("l2", lambda: ABMetric(2.0, 0.0), lambda: _circle()),
    ("hs", lambda: hs_backend(), lambda: _circle(mean_zero=True)),
    ("much", lambda: much_backend(1.5), lambda: _circle()),
    ("abc", lambda: ABCMetric(1.0, 0.5, 2.0), _field),
    ("abc-a0", lambda: ABCMetric(0.0, 1.0, 1.0), _field),
    ("lambda", lambda: LambdaMetric("biharmonic"), _stream),
    ("semidirect", lambda: SemidirectMetric(1.0, 2.0), lambda: SemidirectElement(_circle(), _circle())),
    ("so3", lambda: RigidBody((1.0, 2.0, 3.5)), lambda: rng.normal(size=3)),
]


@pytest.mark.parametrize("name,make,sample", BACKENDS, ids=[b[0] for b in BACKENDS])
def test_coadjoint_duality(name, make, sample):
    m = make()
    for _ in range(3):
        u, v, w = sample(), sample(), sample()
        scale = math.sqrt(m.norm2(u) * m.norm2(v) * m.norm2(w))
        assert abs(duality_residual(m, u, v, w)) < 1e-8 * scale


@pytest.mark.parametrize("name,make,sample", BACKENDS, ids=[b[0] for b in BACKENDS])
def test_curvature_symmetry_and_scaling(name, make, sample):
    m = make()
    u, v = sample(), sample()
    s = curvature_numerator(m, u, v)
    assert curvature_numerator(m, v, u) == pytest.approx(s, rel=1e-9, abs=1e-9 * m.norm2(u) * m.norm2(v))
    scaled = curvature_numerator(m, u * 2.0, v * -3.0)
    assert scaled == pytest.approx(36.0 * s, rel=1e-9, abs=1e-9 * m.norm2(u) * m.norm2(v))


@pytest.mark.parametrize("name,make,sample", BACKENDS, ids=[b[0] for b in BACKENDS])
def test_curvature_depends_only_on_plane(name, make, sample):
    m = make()
    u, v = sample(), sample()
    K = curvature_S(m, u, v).K
    K2 = curvature_S(m, u * 0.5 + v * 2.0, u - v * 1.5).K
    assert K2 == pytest.approx(K, rel=1e-8, abs=1e-10)


def test_degenerate_plane():
    m = ABMetric(1.0, 1.0)
    u = TrigPoly.cos(1)
    rep = curvature_S(m, u, 3.0 * u)
    assert rep.degenerate and rep.K is None and rep.sign == "degenerate"
    assert rep.S == pytest.approx(0.0, abs=1e-9)


def test_report_uses_squared_cross_term():
    m = ABMetric(1.0, 1.0)
    u = TrigPoly.cos(1)
    v = TrigPoly.cos(1) + TrigPoly.sin(1)
    rep = curvature_S(m, u, v)
    assert rep.gram == pytest.approx(rep.nu2 * rep.nv2 - rep.uv ** 2)
    assert rep.K == pytest.approx(rep.S / rep.gram)


def test_circle_ad_star_matches_grid_oracle():
    from grid_oracle import CircleGrid

    m = ABMetric(1.5, 0.5)
    g = CircleGrid(lambda k: 1.5 + 0.5 * k * k)
    u, v = _circle(), _circle()
    assert np.allclose(m.ad_star(v, u)(g.x), g.ad_star(g.sample(v), g.sample(u)), atol=1e-9)
    assert np.allclose(m.ad(u, v)(g.x), g.ad(g.sample(u), g.sample(v)), atol=1e-9)


def test_euler_rhs_gives_inviscid_burgers():
    m = ABMetric(1.0, 0.0)
    u = TrigPoly.sin(1)
    expected = -3 * u * u.diff()
    assert m.euler_rhs(u).allclose(expected)


def test_so3_bracket_is_cross_product():
    e1, e2, e3 = np.eye(3)
    body = RigidBody((1.0, 2.0, 3.0))
    assert np.allclose(body.bracket(e1, e2), e3)
    x, y = rng.normal(size=3), rng.normal(size=3)
    assert np.allclose(hat(x) @ hat(y) - hat(y) @ hat(x), hat(np.cross(x, y)))
    assert np.allclose(vee(hat(x)), x)


def test_rigid_body_euler_equations():
    lam = np.array([1.0, 2.0, 3.5])
    body = RigidBody(lam)
    u = rng.normal(size=3)
    l1, l2, l3 = lam
    expected = np.array([(l2 - l3) * u[1] * u[2] / l1, (l3 - l1) * u[2] * u[0] / l2, (l1 - l2) * u[0] * u[1] / l3])
    assert np.allclose(body.euler_rhs(u), expected)


def test_rigid_body_koszul_matches_arnold_formula():
    body = RigidBody((0.7, 1.3, 2.0))
    for _ in range(5):
        u, v = rng.normal(size=3), rng.normal(size=3)
        koszul = body.inner(body.riemann(u, v, v), u)
        assert curvature_numerator(body, u, v) == pytest.approx(koszul, rel=1e-12, abs=1e-14)
        assert np.allclose(body.curvature_operator(u), body.jacobi_operator(u))


def test_round_so3_has_constant_curvature():
    body = RigidBody((1.0, 1.0, 1.0))
    for _ in range(5):
        rep = curvature_S(body, rng.normal(size=3), rng.normal(size=3))
        assert rep.K == pytest.approx(0.25)


def test_so3_form_against_display():
    lam = (0.8, 1.0, 1.2)
    c1, c3, c13 = so3_form_coefficients(lam)
    d1, d3 = displayed_so3_form(lam)
    assert c1 == pytest.approx(1 / 120)
    assert d1 == pytest.approx(c1)
    assert c3 == pytest.approx(0.5125)
    assert d3 == pytest.approx(-0.8875)
    assert c13 == pytest.approx(0.0, abs=1e-14)


def test_rigid_body_rejects_bad_moments():
    with pytest.raises(DomainError):
        RigidBody((1.0, 0.0, 2.0))
    with pytest.raises(DomainError):
        curvature_S(RigidBody((1.0, 2.0, 3.0)), np.ones(2), np.ones(3))
