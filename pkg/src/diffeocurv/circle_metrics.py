"""Right-invariant metrics on the diffeomorphism group of the circle.

Every metric here has the form ``<u, v> = integral (A u) v`` for a Fourier
multiplier ``A``, so the coadjoint operator has the closed form

    ad*_v u = A^{-1}(2 (Au) v_x + (Au)_x v).

For the a-b metric ``A = a - b d^2/dx^2`` this expands to
``A^{-1}(2a u v_x + a v u_x - 2b v_x u_xx - b v u_xxx)``.  When ``A``
annihilates constants (``a = 0``) the backend lives on mean-zero fields and
the momentum is projected there before ``A`` is inverted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .euler_arnold import MetricBackend, curvature_S
from .trigpoly import (
    DomainError,
    FourierMultiplier,
    TrigPoly,
    differentiate,
    l2_inner,
    to_spec,
)


def dx(p: TrigPoly, order: int = 1) -> TrigPoly:
    return differentiate(p, 0, order)


class CircleMultiplierMetric(MetricBackend):
    """Metric ``integral (A u) v`` on vector fields ``u(x) d/dx`` of the circle."""

    def __init__(self, symbol, period: float = 1.0, mean_zero: bool = False, name: str = "circle"):
        self.A = FourierMultiplier(lambda k: symbol(float(k[0])), dim=1)
        self.period = float(period)
        self.mean_zero = mean_zero
        self.name = name

    def project(self, u: TrigPoly) -> TrigPoly:
        return u.mean_zero() if self.mean_zero else u

    def check(self, u) -> None:
        if not isinstance(u, TrigPoly) or u.dim != 1:
            raise DomainError(f"{self.name}: elements are 1D trigonometric polynomials")
        if u.period != (self.period,):
            raise DomainError(f"{self.name}: period {u.period[0]} differs from metric period {self.period}")
        if self.mean_zero and abs(u.mean) > 1e-14 * max(1.0, u.max_abs_coefficient()):
            raise DomainError(f"{self.name}: field has nonzero mean {u.mean:g} "
                              "but the metric only sees mean-zero fields (mode n=[0] is singular)")

    def inertia(self, u: TrigPoly) -> TrigPoly:
        return self.A.apply(u)

    def inverse_inertia(self, m: TrigPoly) -> TrigPoly:
        return self.A.inverse(self.project(m))

    def bracket(self, u, v):
        # not projected: the constant part is invisible to a degenerate inner
        # product but still pairs with the momentum in the curvature formula
        return u * dx(v) - dx(u) * v

    def inner(self, u, v) -> float:
        return l2_inner(self.A.apply(u), v)

    def ad_star(self, v, u):
        m = self.A.apply(u)
        return self.inverse_inertia(2.0 * m * dx(v) + dx(m) * v)

    def momentum_rhs(self, u: TrigPoly) -> TrigPoly:
        """``m_t`` for the Euler-Arnold equation written in the momentum ``m = A u``."""
        m = self.A.apply(u)
        return self.project(-(2.0 * m * dx(u) + dx(m) * u))


class ABMetric(CircleMultiplierMetric):
    """The a-b metric ``a integral u v + b integral u_x v_x``.

    ``a = 0`` gives the homogeneous metric on mean-zero fields and ``b = 0``
    the right-invariant L2 metric.
    """

    def __init__(self, a: float, b: float, period: float = 1.0):
        a, b = float(a), float(b)
        if a < 0 or b < 0 or (a == 0 and b == 0):
            raise DomainError("a-b metric needs a, b >= 0, not both zero")
        self.a, self.b = a, b
        super().__init__(lambda k: a + b * k * k, period, mean_zero=(a == 0),
                         name=f"ab(a={a:g}, b={b:g})")


def ab_ad_star(m: ABMetric, v: TrigPoly, u: TrigPoly) -> TrigPoly:
    """``ad*_v u = A^{-1}(2a u v_x + a v u_x - 2b v_x u_xx - b v u_xxx)``."""
    a, b = m.a, m.b
    ux, vx = dx(u), dx(v)
    rhs = 2 * a * u * vx + a * v * ux - 2 * b * vx * dx(u, 2) - b * v * dx(u, 3)
    return m.inverse_inertia(rhs)


def gamma(m: ABMetric, u: TrigPoly, v: TrigPoly) -> TrigPoly:
    """Christoffel map ``A^{-1} d/dx (a u v + (b/2) u_x v_x)``."""
    return m.A.inverse(dx(m.a * u * v + 0.5 * m.b * dx(u) * dx(v)))


def _require_ab_positive(m: ABMetric) -> None:
    if not (m.a > 0 and m.b > 0):
        raise DomainError("this formula needs a > 0 and b > 0; use the generic curvature engine")


def curvature_ab_direct(m: ABMetric, u: TrigPoly, v: TrigPoly) -> float:
    """``<Gamma(u,v), Gamma(u,v)> - <Gamma(u,u), Gamma(v,v)>``."""
    _require_ab_positive(m)
    g_uv = gamma(m, u, v)
    return m.inner(g_uv, g_uv) - m.inner(gamma(m, u, u), gamma(m, v, v))


def L_residual(m: ABMetric, u: TrigPoly, v: TrigPoly) -> float:
    """The remainder term separating Arnold's formula from the Christoffel form.

    Evaluated term by term; it vanishes identically.
    """
    _require_ab_positive(m)
    ip = m.inner
    d_uv, d_uu, d_vv = dx(u * v), dx(u * u), dx(v * v)
    ad_uv = m.ad(u, v)
    return (ip(gamma(m, u, v), d_uv)
            - 0.5 * ip(gamma(m, u, u), d_vv)
            - 0.5 * ip(gamma(m, v, v), d_uu)
            + 0.25 * ip(d_uv, d_uv)
            - 0.25 * ip(d_uu, d_vv)
            - 0.75 * ip(ad_uv, ad_uv)
            + 0.5 * ip(ad_uv, m.ad_star(v, u) - m.ad_star(u, v)))


# ---------------------------------------------------------------------------
# closed forms for trigonometric sections


def closed_form_C(m: ABMetric, k: float, l: float) -> float:
    """Curvature of the plane spanned by two pure modes of distinct wavenumbers ``k, l > 0``."""
    if k == l:
        raise ValueError("k == l: use section_cos_sin instead")
    if k <= 0 or l <= 0:
        raise ValueError("wavenumbers must be positive; use section_cos_const for the constant mode")
    a, b = m.a, m.b
    d, s = k - l, k + l
    return ((a + 0.5 * b * k * l) ** 2 / (a + b * d * d) * d * d
            + (a - 0.5 * b * k * l) ** 2 / (a + b * s * s) * s * s) / 8.0


def section_cos_sin(m: ABMetric, k: float) -> float:
    """``S(cos kx, sin kx)``."""
    a, b = m.a, m.b
    return (a - 0.5 * b * k * k) ** 2 * k * k / (a + 4 * b * k * k)


def section_cos_const(m: ABMetric, k: float) -> float:
    """``S(cos kx, 1)``."""
    a, b = m.a, m.b
    return a * a * k * k / (2 * (a + b * k * k))


def burgers_curvature_1d(u: TrigPoly, v: TrigPoly, a: float = 1.0) -> float:
    """``a * integral (u v_x - v u_x)^2`` for the L2 metric on the circle."""
    w = u * dx(v) - v * dx(u)
    return a * l2_inner(w, w)


# ---------------------------------------------------------------------------
# negative sections for the a-b metric

REGIME_BOUNDARY = 0.34


@dataclass
class NegativeSectionCertificate:
    regime: str
    a: float
    b: float
    alpha: float
    u: TrigPoly
    v: TrigPoly
    S: float
    S_symbolic: float
    j: int | None = None
    r: float | None = None
    phi: float | None = None
    psi: float | None = None

    def to_dict(self) -> dict:
        return {"regime": self.regime, "a": self.a, "b": self.b, "alpha": self.alpha,
                "j": self.j, "r": self.r,
                "phi_or_psi": self.phi if self.regime == "small-alpha" else self.psi,
                "S": self.S, "S_symbolic": self.S_symbolic,
                "u": to_spec(self.u), "v": to_spec(self.v)}


def regime1_S(alpha: float, b: float) -> float:
    return (2 * b * math.pi ** 4 * (alpha ** 4 + 18 * alpha ** 3 + 357 * alpha ** 2 - 20 * alpha - 36)
            / ((alpha + 9) * (alpha + 4) ** 2))


def P_regime2(r: float) -> float:
    return (1435 * r ** 6 + 21940 * r ** 5 - 55074 * r ** 4 - 222512 * r ** 3
            + 584323 * r ** 2 - 215364 * r + 15552)


def regime2_S(r: float, j: int, b: float) -> float:
    return -(3 * math.pi ** 4 * b * j ** 4 / 64) * P_regime2(r) / ((r + 9) ** 2 * (r + 4) * (r - 2) ** 2)


def regime2_psi(r: float) -> float:
    radicand = -(73 * r * r - 188 * r + 45) * (r + 16) / (128 * (r + 9) * (r - 2) ** 2)
    if radicand < 0:
        raise DomainError(f"r={r} lies outside the range where the construction applies")
    return math.sqrt(radicand)


def choose_j(alpha: float) -> int:
    """Integer ``j`` with ``sqrt(alpha/0.34)/2 < j <= sqrt(alpha/0.34)``."""
    top = math.sqrt(alpha / REGIME_BOUNDARY)
    j = math.floor(top * (1 + 1e-12))
    if not (0.5 * top < j <= top * (1 + 1e-12)) or j < 1:
        raise DomainError(f"no admissible j for alpha={alpha}")
    return j


def negative_section(m: ABMetric) -> NegativeSectionCertificate:
    """A plane of strictly negative curvature for the a-b metric with ``a, b > 0``."""
    _require_ab_positive(m)
    if m.period != 1.0:
        raise DomainError("the construction is stated on the unit-period circle")
    a, b = m.a, m.b
    alpha = a / (4 * math.pi ** 2 * b)
    if alpha <= REGIME_BOUNDARY:
        phi = -1.5 * (alpha ** 2 - alpha - 2) / (alpha * (alpha + 4))
        u = TrigPoly({0: phi, 2: 1.0})
        v = TrigPoly.sin(1)
        S = curvature_ab_direct(m, u, v)
        return NegativeSectionCertificate("small-alpha", a, b, alpha, u, v, S,
                                          regime1_S(alpha, b), phi=phi)
    j = choose_j(alpha)
    r = alpha / j ** 2
    psi = regime2_psi(r)
    u = TrigPoly({j: (1.0, 0.0), 2 * j: (psi, 0.0)})
    v = TrigPoly({j: (0.0, 1.0), 2 * j: (0.0, 2 * psi)})
    S = curvature_ab_direct(m, u, v)
    return NegativeSectionCertificate("r-construction", a, b, alpha, u, v, S,
                                      regime2_S(r, j, b), j=j, r=r, psi=psi)


# ---------------------------------------------------------------------------
# muCH and homogeneous H1


class MuCHMetric(CircleMultiplierMetric):
    """``c mu(u) mu(v) + integral u_x v_x`` with ``mu(u) = integral u``."""

    def __init__(self, c: float, period: float = 1.0):
        c = float(c)
        if not c > 0:
            raise DomainError("muCH metric needs c > 0")
        self.c = c
        L = float(period)
        super().__init__(lambda k: c * L if k == 0 else k * k, period, name=f"much(c={c:g})")


def much_backend(c: float, period: float = 1.0) -> MuCHMetric:
    return MuCHMetric(c, period)


def much_example(c: float, k: int) -> tuple[TrigPoly, TrigPoly]:
    """``u = 3 pi^2 k^2 / c + cos(4 pi k x)``, ``v = sin(2 pi k x)``."""
    u = TrigPoly({0: 3 * math.pi ** 2 * k ** 2 / c}) + TrigPoly.cos(2 * k)
    return u, TrigPoly.sin(k)


def hs_backend(period: float = 1.0) -> ABMetric:
    """Homogeneous ``integral u_x v_x`` on mean-zero fields (the Hunter-Saxton metric)."""
    m = ABMetric(0.0, 1.0, period)
    m.name = "hs"
    return m


def sphere_prediction(m: MetricBackend, u, v) -> float:
    """Quarter of the Gram determinant: the curvature of a round sphere of radius 2."""
    nu2, nv2, uv = m.inner(u, u), m.inner(v, v), m.inner(u, v)
    return 0.25 * (nu2 * nv2 - uv * uv)


def random_trigpoly(rng: np.random.Generator, degree: int, period: float = 1.0,
                    mean_zero: bool = False) -> TrigPoly:
    """Random 1D polynomial with standard normal coefficients up to ``degree``."""
    terms = {n: (float(rng.standard_normal()), float(rng.standard_normal())) for n in range(1, degree + 1)}
    if not mean_zero:
        terms[0] = (float(rng.standard_normal()), 0.0)
    return TrigPoly(terms, 1, period)


def ab_curvature(m: ABMetric, u: TrigPoly, v: TrigPoly):
    return curvature_S(m, u, v)
