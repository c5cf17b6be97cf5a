import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffeocurv.trigpoly import (
    DomainError,
    FourierMultiplier,
    SingularModeError,
    TrigPoly,
    VectorField,
    ab_inertia,
    differentiate,
    evaluate,
    field_inner,
    from_spec,
    l2_inner,
    project_modes,
    to_spec,
)

X = np.linspace(0.0, 1.0, 97, endpoint=False)

coef = st.floats(-3, 3, allow_nan=False)


@st.composite
def polys(draw, max_degree=4):
    deg = draw(st.integers(0, max_degree))
    terms = {n: (draw(coef), draw(coef)) for n in range(deg + 1)}
    return TrigPoly(terms)


def test_cos_sin_values():
    assert evaluate(TrigPoly.cos(1), 0.25) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(TrigPoly.sin(1), 0.25) == pytest.approx(1.0)
    assert TrigPoly.sin(2, period=2.0)(0.125) == pytest.approx(math.sin(math.pi / 4))


def test_negative_frequencies_are_canonicalized():
    p = TrigPoly({-2: (1.0, 3.0)})
    assert dict(p.terms) == {(2,): (1.0, -3.0)}
    assert np.allclose(p(X), np.cos(4 * np.pi * X) - 3 * np.sin(4 * np.pi * X))


def test_product_to_sum():
    prod = TrigPoly.cos(1) * TrigPoly.cos(2)
    assert prod.allclose(0.5 * TrigPoly.cos(1) + 0.5 * TrigPoly.cos(3))
    sq = TrigPoly.sin(1) ** 2
    assert sq.allclose(TrigPoly.constant(0.5) - 0.5 * TrigPoly.cos(2))


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_product_matches_pointwise(p, q):
    assert np.allclose((p * q)(X), p(X) * q(X), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    assert (p * q).allclose(q * p, atol=1e-12)
    assert (p * (q + r)).allclose(p * q + p * r, atol=1e-10)
    assert (p - p).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_leibniz(p, q):
    lhs = differentiate(p * q)
    rhs = differentiate(p) * q + p * differentiate(q)
    assert lhs.allclose(rhs, atol=1e-9)


def test_derivative_matches_finite_difference():
    p = TrigPoly({0: 0.3, 1: (1.0, -0.5), 3: (0.2, 0.7)})
    h = 1e-5
    fd = (p(X + h) - p(X - h)) / (2 * h)
    assert np.allclose(differentiate(p)(X), fd, atol=1e-6)
    assert differentiate(p, order=2).allclose(differentiate(differentiate(p)))


def test_l2_inner_matches_quadrature():
    p = TrigPoly({0: 0.3, 1: (1.0, -0.5), 3: (0.2, 0.7)})
    q = TrigPoly({0: -1.0, 1: (0.4, 0.1), 2: (1.5, 0.0), 3: (0.0, 2.0)})
    grid = np.arange(64) / 64
    assert l2_inner(p, q) == pytest.approx(np.mean(p(grid) * q(grid)), rel=1e-13)
    r = TrigPoly.cos(1, period=3.0)
    assert l2_inner(r, r) == pytest.approx(1.5)


def test_mean_and_mean_zero():
    p = TrigPoly({0: 2.0, 1: 1.0})
    assert p.mean == 2.0
    assert p.mean_zero().allclose(TrigPoly.cos(1))


def test_truncation_and_projection():
    p = TrigPoly({1: 1.0, 2: 1.0, 5: 1.0})
    assert project_modes(p, 2).allclose(TrigPoly({1: 1.0, 2: 1.0}))
    assert p.truncate(4).degree == 2
    with pytest.raises(ValueError):
        project_modes(p, -1)


def test_torus_polynomials():
    p = TrigPoly.cos((1, 2))
    pts = np.array([[0.1, 0.3], [0.7, 0.2]])
    assert np.allclose(p(pts), np.cos(2 * np.pi * (pts[:, 0] + 2 * pts[:, 1])))
    q = TrigPoly.sin((1, -1))
    assert np.allclose((p * q)(pts), p(pts) * q(pts))
    assert differentiate(p, axis=1).allclose(TrigPoly.sin((1, 2), amp=-4 * np.pi))


def test_incompatible_operands_rejected():
    with pytest.raises(ValueError):
        TrigPoly.cos(1) + TrigPoly.cos(1, period=2.0)
    with pytest.raises(ValueError):
        TrigPoly.cos(1) * TrigPoly.cos((1, 0))


def test_complex_round_trip():
    p = TrigPoly({0: 0.5, 1: (1.0, -2.0), 4: (0.0, 3.0)})
    assert TrigPoly.from_complex(p.to_complex(), 1, 1.0).allclose(p)


def test_multiplier_and_inverse():
    A = ab_inertia(1.0, 2.0)
    p = TrigPoly({0: 1.0, 2: (0.5, 0.3)})
    Ap = A.apply(p)
    assert Ap.allclose(p - 2.0 * differentiate(p, order=2))
    assert A.inverse(Ap).allclose(p)


def test_singular_mode_is_named():
    lap = FourierMultiplier(lambda k: float(k @ k), dim=1)
    with pytest.raises(SingularModeError) as info:
        lap.inverse(TrigPoly({0: 1.0, 1: 1.0}))
    assert info.value.frequency == (0,)
    assert "n=[0]" in str(info.value)
    assert lap.inverse(TrigPoly.cos(1)).allclose(TrigPoly.cos(1) / (4 * math.pi ** 2))


def test_matrix_multiplier_on_fields():
    sym = lambda k: np.eye(2) + np.outer(k, k)  # noqa: E731
    A = FourierMultiplier(sym, dim=2, matrix=True)
    u = VectorField(TrigPoly.cos((1, 0)), TrigPoly.sin((0, 1)))
    back = A.inverse(A.apply(u))
    assert back.allclose(u)


def test_vector_field_operations():
    f = TrigPoly.sin((1, 0))
    g = TrigPoly.cos((0, 1))
    u = VectorField(f, g)
    assert u.divergence().allclose(differentiate(f, 0) + differentiate(g, 1))
    assert u.curl().allclose(differentiate(g, 0) - differentiate(f, 1))
    assert field_inner(u, u) == pytest.approx(1.0)
    assert (2 * u - u).allclose(u)


def test_field_spec_round_trip(tmp_path):
    p = TrigPoly({0: 0.25, 1: (1.0, -0.5), 3: (0.0, 2.0)}, period=2.0)
    spec = to_spec(p)
    path = tmp_path / "u.json"
    path.write_text(json.dumps(spec))
    assert from_spec(json.loads(path.read_text())).allclose(p)
    u = VectorField(TrigPoly.cos((1, 0)), TrigPoly.sin((1, 2)))
    assert from_spec(to_spec(u)).allclose(u)


def test_field_spec_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown"):
        from_spec({"dim": 1, "components": [], "colour": "red"})
    with pytest.raises(ValueError, match="trig"):
        from_spec({"dim": 1, "components": [{"terms": [{"trig": "tan", "n": [1], "amp": 1}]}]})


def test_domain_error_is_value_error():
    assert issubclass(DomainError, ValueError)
