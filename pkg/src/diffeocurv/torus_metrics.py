"""Right-invariant metrics on diffeomorphisms of the flat 2-torus.

Vector fields are :class:`VectorField` pairs of trigonometric polynomials.
The a-b-c metric

    <u, v> = a integral u.v + b integral div u div v + c integral curl u curl v

acts on each Fourier mode ``k`` through the 2x2 matrix
``a I + b k k^T + c (|k|^2 I - k k^T)``: ``a + b|k|^2`` on the gradient part of
the coefficient pair and ``a + c|k|^2`` on the divergence-free part.

Exact volume-preserving fields are skew-gradients of stream functions, and the
metrics ``integral f Lambda g`` with ``Lambda = F(k)`` are handled directly on
stream functions.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from .euler_arnold import MetricBackend, curvature_S
from .trigpoly import (
    DomainError,
    FourierMultiplier,
    TrigPoly,
    VectorField,
    differentiate,
    field_inner,
    l2_inner,
)


def _dx(p: TrigPoly) -> TrigPoly:
    return differentiate(p, 0)


def _dy(p: TrigPoly) -> TrigPoly:
    return differentiate(p, 1)


def field_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Vector-field commutator ``X.grad Y - Y.grad X``."""
    return VectorField(*(X.directional(Yi) - Y.directional(Xi) for Xi, Yi in zip(X, Y)))


def x_field(f: TrigPoly, period=(1.0, 1.0)) -> TrigPoly:
    """Lift a function of ``x`` (1D polynomial) to the torus."""
    if f.dim == 2:
        return f
    return TrigPoly({(n[0], 0): amp for n, amp in f.terms.items()}, 2, (f.period[0], period[1]))


def field_dx(f: TrigPoly, period=(1.0, 1.0)) -> VectorField:
    """``f(x) d/dx``."""
    F = x_field(f, period)
    return VectorField(F, TrigPoly.zero(2, F.period))


def field_dy(f: TrigPoly, period=(1.0, 1.0)) -> VectorField:
    """``f(x) d/dy``."""
    F = x_field(f, period)
    return VectorField(TrigPoly.zero(2, F.period), F)


class ABCMetric(MetricBackend):
    """a-b-c Sobolev metric on vector fields of the 2-torus.

    With ``a = 0`` constant (harmonic) fields carry no length; the backend
    then works on mean-zero fields and drops the zero mode of every momentum
    before inverting the inertia operator.
    """

    def __init__(self, a: float, b: float, c: float, period=(1.0, 1.0)):
        a, b, c = float(a), float(b), float(c)
        if min(a, b, c) < 0 or max(a, b, c) == 0:
            raise DomainError("a-b-c metric needs nonnegative parameters, at least one positive")
        if a == 0 and (b == 0 or c == 0):
            raise DomainError("with a = 0 both b and c must be positive for the inertia to be invertible")
        self.a, self.b, self.c = a, b, c
        self.period = tuple(float(L) for L in period)
        self.name = f"abc(a={a:g}, b={b:g}, c={c:g})"

        def symbol(k):
            kk = np.outer(k, k)
            return a * np.eye(2) + b * kk + c * (float(k @ k) * np.eye(2) - kk)

        self.A = FourierMultiplier(symbol, dim=2, matrix=True)

    @property
    def harmonic_free(self) -> bool:
        return self.a == 0

    def project(self, u: VectorField) -> VectorField:
        return u.map(TrigPoly.mean_zero) if self.harmonic_free else u

    def check(self, u) -> None:
        if not isinstance(u, VectorField) or len(u) != 2 or u.dim != 2:
            raise DomainError(f"{self.name}: elements are planar vector fields on the torus")
        if u.period != self.period:
            raise DomainError(f"{self.name}: period mismatch {u.period} vs {self.period}")
        if self.harmonic_free:
            scale = max(1.0, max(c.max_abs_coefficient() for c in u))
            if any(abs(c.mean) > 1e-14 * scale for c in u):
                raise DomainError(f"{self.name}: field has a constant (harmonic) component, "
                                  "which the a=0 metric cannot see (mode n=[0, 0] is singular)")

    def inertia(self, u: VectorField) -> VectorField:
        return self.A.apply(u)

    def inverse_inertia(self, m: VectorField) -> VectorField:
        return self.A.inverse(self.project(m))

    def inner(self, u, v) -> float:
        return field_inner(self.A.apply(u), v)

    def bracket(self, u, v):
        return field_bracket(u, v)

    def coadjoint_momentum(self, v: VectorField, u: VectorField) -> VectorField:
        """``(div v) m + d<m, v> + i_v dm`` with ``m = A u``."""
        m = self.A.apply(u)
        m1, m2 = m
        v1, v2 = v
        div_v = v.divergence()
        dm = _dx(m2) - _dy(m1)
        mv = m1 * v1 + m2 * v2
        return VectorField(div_v * m1 + _dx(mv) - v2 * dm,
                           div_v * m2 + _dy(mv) + v1 * dm)

    def ad_star(self, v, u):
        return self.inverse_inertia(self.coadjoint_momentum(v, u))


def abc_ad_star(m: ABCMetric, v: VectorField, u: VectorField) -> VectorField:
    return m.ad_star(v, u)


def abc_curvature(m: ABCMetric, u: VectorField, v: VectorField):
    return curvature_S(m, u, v)


def abc_sin_pair(k_index: int = 1, period=(1.0, 1.0)) -> tuple[VectorField, VectorField]:
    """``u = sin(kx) d/dy`` and ``v = sin(kx) d/dx``."""
    f = TrigPoly.sin(k_index, period=period[0])
    return field_dy(f, period), field_dx(f, period)


def abc_closed_form(a: float, b: float, c: float, k: float) -> float:
    """Curvature of the ``sin(kx) d/dy, sin(kx) d/dx`` plane."""
    num = (7 * a ** 3 - 8 * a ** 2 * b * k ** 2 + 56 * a ** 2 * c * k ** 2 + 44 * a * c * k ** 4 * b
           + 76 * c ** 2 * k ** 4 * a + 160 * c ** 2 * k ** 6 * b)
    return -k ** 2 * num / (32 * (a + 4 * c * k ** 2) * (a + 4 * b * k ** 2))


def abc_closed_form_a0(c: float, k: float) -> float:
    return -5 * c * k ** 4 / 16


def abc_closed_form_b0(a: float, c: float, k: float) -> float:
    return -k ** 2 * (7 * a ** 2 + 56 * a * c * k ** 2 + 76 * c ** 2 * k ** 4) / (32 * (a + 4 * c * k ** 2))


def abc_ad_star_closed(a: float, c: float, k: float) -> float:
    """Coefficient of ``sin(2kx) d/dy`` in ``ad*_v u`` for the sin pair."""
    return k * (a + c * k ** 2) / (a + 4 * c * k ** 2)


# ---------------------------------------------------------------------------
# right-invariant L2 metric


class BurgersT2(ABCMetric):
    """The L2 metric ``a integral u.v`` (geodesics solve the multidimensional Burgers equation)."""

    def __init__(self, a: float = 1.0, period=(1.0, 1.0)):
        if not a > 0:
            raise DomainError("L2 metric needs a > 0")
        super().__init__(a, 0.0, 0.0, period)
        self.name = f"burgers(a={a:g})"


def burgers_ad_star(a: float, v: VectorField, u: VectorField) -> VectorField:
    """``u div v + i_v du + grad<u, v>``; independent of ``a``."""
    u1, u2 = u
    v1, v2 = v
    div_v = v.divergence()
    du = _dx(u2) - _dy(u1)
    uv = u1 * v1 + u2 * v2
    return VectorField(u1 * div_v - v2 * du + _dx(uv), u2 * div_v + v1 * du + _dy(uv))


def burgers_curvature(a: float, u: VectorField, v: VectorField) -> float:
    return curvature_S(BurgersT2(a, u.period), u, v).S


def burgers_x_only_closed(a: float, f: TrigPoly, g: TrigPoly) -> float:
    """``a integral (f g' - g f')^2`` for ``u = f d/dx, v = g d/dx``."""
    w = f * differentiate(g) - g * differentiate(f)
    return a * l2_inner(w, w)


def burgers_mixed_closed(a: float, f: TrigPoly, g: TrigPoly) -> float:
    """``a integral (f'^2 g^2 / 4 - 2 f f' g g')`` for ``u = f d/dx, w = g d/dy``."""
    fp, gp = differentiate(f), differentiate(g)
    integrand = 0.25 * fp * fp * g * g - 2.0 * f * fp * g * gp
    return a * integrand.mean * f.volume


# ---------------------------------------------------------------------------
# volume-preserving fields via stream functions


def sgrad(f: TrigPoly) -> VectorField:
    """Skew-gradient ``-f_y d/dx + f_x d/dy``."""
    return VectorField(-_dy(f), _dx(f))


def poisson(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``{f, g} = f_x g_y - f_y g_x``."""
    return _dx(f) * _dy(g) - _dy(f) * _dx(g)


def _power_symbol(power: float, scale: float = 1.0) -> Callable[[np.ndarray], float]:
    return lambda k: scale * float(k @ k) ** power


def lambda_symbol(choice: str | Callable) -> tuple[str, Callable[[np.ndarray], float]]:
    """Resolve a named choice of ``F(p) = lambda(|p|^2)``.

    ``l2`` is ``|p|^2`` (the L2 metric on fields), ``biharmonic`` is ``|p|^4``,
    ``custom-power:n`` is ``|p|^(2n)`` and ``one-plus-l2`` is ``1 + |p|^2``.
    """
    if callable(choice):
        return getattr(choice, "__name__", "custom"), choice
    if choice == "l2":
        return choice, _power_symbol(1.0)
    if choice == "biharmonic":
        return choice, _power_symbol(2.0)
    if choice == "one-plus-l2":
        return choice, lambda k: 1.0 + float(k @ k)
    if choice.startswith("custom-power:"):
        try:
            n = float(choice.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad power in {choice!r}") from None
        return choice, _power_symbol(n)
    raise ValueError(f"unknown lambda choice {choice!r}; expected l2, biharmonic, one-plus-l2 or custom-power:n")


class LambdaMetric(MetricBackend):
    """``<f, g> = integral f Lambda g`` on mean-zero stream functions.

    The bracket is the Poisson bracket, matching ``[sgrad f, sgrad g] = sgrad {f, g}``,
    and ``ad*_g f = Lambda^{-1} {g, Lambda f}``.
    """

    def __init__(self, F: str | Callable = "l2", period=(1.0, 1.0), scale: float = 1.0):
        label, sym = lambda_symbol(F)
        if scale != 1.0:
            base = sym
            sym = lambda k: scale * base(k)  # noqa: E731
        self.F = sym
        self.period = tuple(float(L) for L in period)
        self.name = f"lambda({label}{'' if scale == 1.0 else f', scale={scale:g}'})"
        self.Lam = FourierMultiplier(sym, dim=2)

    def check(self, f) -> None:
        if not isinstance(f, TrigPoly) or f.dim != 2:
            raise DomainError(f"{self.name}: elements are stream functions on the torus")
        if f.period != self.period:
            raise DomainError(f"{self.name}: period mismatch {f.period} vs {self.period}")
        if abs(f.mean) > 1e-14 * max(1.0, f.max_abs_coefficient()):
            raise DomainError(f"{self.name}: stream functions must have zero mean")

    def project(self, f: TrigPoly) -> TrigPoly:
        return f.mean_zero()

    def inner(self, f, g) -> float:
        return l2_inner(self.Lam.apply(f.mean_zero()), g)

    def bracket(self, f, g):
        return poisson(f, g)

    def ad_star(self, g, f):
        return self.Lam.inverse(poisson(g, self.Lam.apply(f)).mean_zero())


def lambda_ad_star(m: LambdaMetric, g: TrigPoly, f: TrigPoly) -> TrigPoly:
    return m.ad_star(g, f)


def wedge(p, q) -> float:
    return float(p[0] * q[1] - p[1] * q[0])


def lambda_curvature_closed(F: Callable[[np.ndarray], float], p, q, area: float = 1.0) -> float:
    """Curvature of the plane of ``cos(p.x), cos(q.x)`` stream functions.

    ``p, q`` are physical wavevectors and ``area`` the torus area.
    """
    p, q = np.asarray(p, float), np.asarray(q, float)
    vecs = (p, q, p + q, p - q)
    if any(float(w @ w) == 0.0 for w in vecs):
        raise DomainError("p, q, p+q and p-q must all be nonzero")
    Fp, Fq, Fs, Fd = (F(w) for w in vecs)
    if min(Fp, Fq, Fs, Fd) <= 0:
        raise DomainError("F must be positive on p, q, p+q, p-q")
    braces = (0.25 * (Fp - Fq) ** 2 * (1 / Fs + 1 / Fd) - 0.75 * (Fs + Fd) + Fp + Fq)
    return area * wedge(p, q) ** 2 / 8.0 * braces


def arnold_T2_reference(p, q) -> float:
    """Closed-form L2 curvature of ``cos(jx+ky), cos(lx+my)`` with ``p=(j,k), q=(l,m)``."""
    j, k = p
    l, m = q
    s = (j + l) ** 2 + (k + m) ** 2
    d = (j - l) ** 2 + (k - m) ** 2
    if s == 0 or d == 0:
        raise DomainError("p + q and p - q must be nonzero")
    return -math.pi ** 2 * (j * m - k * l) ** 4 * (j * j + k * k + l * l + m * m) / (s * d)


def stream_cos(n, period=(1.0, 1.0)) -> TrigPoly:
    """``cos(2 pi n.x / L)`` as a stream function."""
    return TrigPoly.cos(tuple(n), period=period)


def arnold_limit_pair(k: int) -> tuple[TrigPoly, TrigPoly]:
    """``f = cos(3kx - y) + cos(3kx + 2y)``, ``g = cos(kx + y) + cos(kx - 2y)`` on the 2 pi torus."""
    P = (2 * math.pi, 2 * math.pi)
    f = TrigPoly.cos((3 * k, -1), period=P) + TrigPoly.cos((3 * k, 2), period=P)
    g = TrigPoly.cos((k, 1), period=P) + TrigPoly.cos((k, -2), period=P)
    return f, g


def arnold_limit_check(k: int) -> float:
    """Normalized L2 curvature of the high-frequency example pair."""
    f, g = arnold_limit_pair(k)
    rep = curvature_S(LambdaMetric("l2", period=f.period), f, g)
    return rep.K


ARNOLD_LIMIT = 9.0 / (8.0 * math.pi ** 2)
