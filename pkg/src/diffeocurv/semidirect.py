"""The circle diffeomorphism group inside ``Diff(S^1) x| C(S^1)``.

Elements of the Lie algebra are pairs ``(u, f)`` (first-order operators
``u D + f``) with the right-invariant L2 metric ``integral (a u v + b f g)``.
The map ``u -> (u, u_x)`` is an isometric Lie-algebra embedding of the a-b
metric, and its second fundamental form ``((b/a) Q_x, Q)`` recovers the a-b
curvature through the Gauss-Codazzi formula.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circle_metrics import ABMetric, curvature_ab_direct, dx
from .euler_arnold import MetricBackend
from .trigpoly import DomainError, TrigPoly, l2_inner


@dataclass(frozen=True, eq=False)
class SemidirectElement:
    u: TrigPoly
    f: TrigPoly

    def __post_init__(self):
        if self.u.dim != 1 or self.f.dim != 1 or self.u.period != self.f.period:
            raise DomainError("semidirect elements are pairs of 1D polynomials with a common period")

    def __add__(self, other):
        return SemidirectElement(self.u + other.u, self.f + other.f)

    def __sub__(self, other):
        return SemidirectElement(self.u - other.u, self.f - other.f)

    def __neg__(self):
        return SemidirectElement(-self.u, -self.f)

    def __mul__(self, s):
        return SemidirectElement(self.u * s, self.f * s)

    __rmul__ = __mul__

    def allclose(self, other, atol=1e-12, rtol=1e-12) -> bool:
        return self.u.allclose(other.u, atol, rtol) and self.f.allclose(other.f, atol, rtol)

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.f.is_zero()


def embed(u: TrigPoly) -> SemidirectElement:
    """Derivative of ``eta -> (eta, log eta_x)`` at the identity: ``u -> (u, u_x)``."""
    return SemidirectElement(u, dx(u))


class SemidirectMetric(MetricBackend):
    def __init__(self, a: float, b: float, period: float = 1.0):
        a, b = float(a), float(b)
        if not (a > 0 and b > 0):
            raise DomainError("semidirect metric needs a > 0 and b > 0")
        self.a, self.b = a, b
        self.period = float(period)
        self.name = f"semidirect(a={a:g}, b={b:g})"

    def check(self, x) -> None:
        if not isinstance(x, SemidirectElement):
            raise DomainError("expected a SemidirectElement")
        if x.u.period != (self.period,):
            raise DomainError("period mismatch")

    def inner(self, x, y) -> float:
        return self.a * l2_inner(x.u, y.u) + self.b * l2_inner(x.f, y.f)

    def bracket(self, x, y):
        # ad_{(u,f)}(v,g) = (u_x v - u v_x, v f_x - u g_x) is minus this
        return SemidirectElement(x.u * dx(y.u) - dx(x.u) * y.u, x.u * dx(y.f) - y.u * dx(x.f))

    def ad_star(self, x, y):
        """``ad*_{(u,f)}(v,g) = (2u_x v + u v_x + (b/a) g f_x, g u_x + g_x u)``."""
        u, f = x.u, x.f
        v, g = y.u, y.f
        return SemidirectElement(2.0 * dx(u) * v + u * dx(v) + (self.b / self.a) * g * dx(f),
                                 g * dx(u) + dx(g) * u)

    def ab_metric(self) -> ABMetric:
        return ABMetric(self.a, self.b, self.period)


def sd_ad(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    """``ad_{(u,f)}(v,g) = (-u v_x + u_x v, v f_x - u g_x)``."""
    return SemidirectElement(dx(x.u) * y.u - x.u * dx(y.u), y.u * dx(x.f) - x.u * dx(y.f))


def sd_ad_star(m: SemidirectMetric, x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    return m.ad_star(x, y)


def ambient_curvature(m: SemidirectMetric, x: SemidirectElement, y: SemidirectElement) -> float:
    """Closed-form curvature of the semidirect product."""
    a, b = m.a, m.b
    u, f, v, g = x.u, x.f, y.u, y.f
    ux, vx, fx, gx = dx(u), dx(v), dx(f), dx(g)
    first = u * vx - v * ux + (b / (2 * a)) * (g * fx - f * gx)
    w = g * ux - f * vx
    return a * l2_inner(first, first) + 0.25 * b * l2_inner(w, w + 8.0 * v * fx - 8.0 * u * gx)


def _q_source(m, u: TrigPoly, v: TrigPoly) -> TrigPoly:
    return m.a * u * v + 0.5 * m.b * dx(u) * dx(v)


def T_map(m, u: TrigPoly, v: TrigPoly) -> TrigPoly:
    """``A^{-1}(a u v + (b/2) u_x v_x)``."""
    return _ab(m).A.inverse(_q_source(m, u, v))


def Q_map(m, u: TrigPoly, v: TrigPoly) -> TrigPoly:
    """``-d^2/dx^2 A^{-1}(a u v + (b/2) u_x v_x)``."""
    return -dx(T_map(m, u, v), 2)


def _ab(m) -> ABMetric:
    return m.ab_metric() if isinstance(m, SemidirectMetric) else m


def second_fundamental_form(m: SemidirectMetric, u: TrigPoly, v: TrigPoly) -> SemidirectElement:
    """``Pi(u, v) = ((b/a) Q_x, Q)``, normal to the image of the embedding."""
    q = Q_map(m, u, v)
    return SemidirectElement((m.b / m.a) * dx(q), q)


def gauss_codazzi(m: SemidirectMetric, u: TrigPoly, v: TrigPoly) -> float:
    """Ambient curvature of the embedded plane plus the second fundamental form terms."""
    pi_uu = second_fundamental_form(m, u, u)
    pi_vv = second_fundamental_form(m, v, v)
    pi_uv = second_fundamental_form(m, u, v)
    return (ambient_curvature(m, embed(u), embed(v))
            + m.inner(pi_uu, pi_vv) - m.inner(pi_uv, pi_uv))


def curvature_T_form(m, u: TrigPoly, v: TrigPoly) -> float:
    """``-(a/2) int (u v_x - v u_x)^2 + (a/b)(<T(u,u),T(v,v)> - <T(u,v),T(u,v)>)``."""
    ab = _ab(m)
    a, b = ab.a, ab.b
    w = u * dx(v) - v * dx(u)
    t_uv = T_map(ab, u, v)
    return (-0.5 * a * l2_inner(w, w)
            + (a / b) * (ab.inner(T_map(ab, u, u), T_map(ab, v, v)) - ab.inner(t_uv, t_uv)))


def curvature_Q_form(m, u: TrigPoly, v: TrigPoly) -> float:
    """``(1/a) int (a(u v_x - v u_x) + (b/2)(v_x u_xx - u_x v_xx))^2 + (b/a)(<Q,Q> - |Q|^2)``."""
    ab = _ab(m)
    a, b = ab.a, ab.b
    ux, vx = dx(u), dx(v)
    w = a * (u * vx - v * ux) + 0.5 * b * (vx * dx(u, 2) - ux * dx(v, 2))
    q_uv = Q_map(ab, u, v)
    return (l2_inner(w, w) / a
            + (b / a) * (ab.inner(Q_map(ab, u, u), Q_map(ab, v, v)) - ab.inner(q_uv, q_uv)))


def rewrite_check(m, u: TrigPoly, v: TrigPoly) -> tuple[float, float, float]:
    """Pairwise differences between the Christoffel, T- and Q-forms of the a-b curvature.

    Returns ``(christoffel - T_form, christoffel - Q_form, T_form - Q_form)``.
    """
    ab = _ab(m)
    s0 = curvature_ab_direct(ab, u, v)
    s1 = curvature_T_form(ab, u, v)
    s2 = curvature_Q_form(ab, u, v)
    return s0 - s1, s0 - s2, s1 - s2
