"""Generic Euler-Arnold machinery: metric backends and Arnold's curvature formula.

Conventions used throughout the package
---------------------------------------
``bracket(u, v)``
    The bracket of the underlying algebra.  For vector fields this is the
    usual vector-field commutator ``u v_x - u_x v``; for so(3) it is the
    cross product.
``ad(u, v) = -bracket(u, v)``
    The Lie-algebra bracket of right-invariant fields, so that on the circle
    ``ad_u v = u_x v - u v_x``.
``ad_star(v, u)``
    The coadjoint operator ``ad*_v u`` defined by
    ``<ad*_v u, w> = -<u, bracket(v, w)> = <u, ad_v w>``.
``du/dt = -ad*_u u``
    The Euler-Arnold equation.  For ``a = 1, b = 0`` this is
    ``u_t + 3 u u_x = 0`` and for so(3) it is the free rigid body.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .trigpoly import DomainError

DEGENERACY_RTOL = 1e-12


class MetricBackend:
    """Inner product plus bracket and coadjoint operator on a Lie algebra.

    Subclasses implement :meth:`bracket`, :meth:`ad_star` and :meth:`inner`,
    and may override :meth:`project` / :meth:`check` to restrict to an
    admissible subspace.
    """

    name = "backend"

    def bracket(self, u, v):
        raise NotImplementedError

    def ad(self, u, v):
        return -self.bracket(u, v)

    def ad_star(self, v, u):
        """``ad*_v u``."""
        raise NotImplementedError

    def inner(self, u, v) -> float:
        raise NotImplementedError

    def norm2(self, u) -> float:
        return self.inner(u, u)

    def project(self, u):
        return u

    def check(self, u) -> None:
        """Raise :class:`DomainError` if ``u`` is not admissible."""

    def euler_rhs(self, u):
        return -self.ad_star(u, u)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True)
class CurvatureReport:
    S: float
    nu2: float
    nv2: float
    uv: float
    K: float | None
    degenerate: bool

    @property
    def gram(self) -> float:
        return self.nu2 * self.nv2 - self.uv ** 2

    @property
    def sign(self) -> str:
        if self.degenerate:
            return "degenerate"
        if self.S > 0:
            return "+"
        if self.S < 0:
            return "-"
        return "0"

    def to_dict(self) -> dict[str, Any]:
        return {"S": self.S, "K": self.K, "norm_u2": self.nu2, "norm_v2": self.nv2,
                "inner_uv": self.uv, "degenerate": self.degenerate}


def curvature_numerator(backend: MetricBackend, u, v) -> float:
    """Arnold's formula for ``<R(u,v)v, u>``.

    The mixed term ``<ad_u v, ad*_v u - ad*_u v>`` is evaluated through the
    defining identity ``<w, ad*_v u> = <u, ad_v w>``.  This is the same number
    for a nondegenerate metric, and for metrics that vanish on constants it
    keeps the pairing of the constant part of ``ad_u v`` with the mean of the
    momentum, which an explicit ``ad*`` (defined only up to constants) loses.
    """
    ad_uv = backend.ad(u, v)
    s_vu = backend.ad_star(v, u)
    s_uv = backend.ad_star(u, v)
    s_uu = backend.ad_star(u, u)
    s_vv = backend.ad_star(v, v)
    total = s_vu + s_uv
    mixed = backend.inner(u, backend.ad(v, ad_uv)) - backend.inner(v, backend.ad(u, ad_uv))
    return (0.25 * backend.inner(total, total)
            - backend.inner(s_uu, s_vv)
            - 0.75 * backend.inner(ad_uv, ad_uv)
            + 0.5 * mixed)


def curvature_S(backend: MetricBackend, u, v) -> CurvatureReport:
    """Unnormalized and normalized sectional curvature of the plane spanned by ``u, v``."""
    backend.check(u)
    backend.check(v)
    nu2 = backend.inner(u, u)
    nv2 = backend.inner(v, v)
    uv = backend.inner(u, v)
    gram = nu2 * nv2 - uv * uv
    degenerate = not gram > DEGENERACY_RTOL * nu2 * nv2
    S = curvature_numerator(backend, u, v)
    if degenerate:
        return CurvatureReport(S, nu2, nv2, uv, None, True)
    return CurvatureReport(S, nu2, nv2, uv, S / gram, False)


def duality_residual(backend: MetricBackend, u, v, w) -> float:
    """``<ad*_v u, w> + <u, [v, w]>``; vanishes for a correct backend."""
    return backend.inner(backend.ad_star(v, u), w) + backend.inner(u, backend.bracket(v, w))


# ---------------------------------------------------------------------------
# rigid body


def hat(x) -> np.ndarray:
    """Skew matrix with ``hat(x) @ y == cross(x, y)``."""
    x1, x2, x3 = x
    return np.array([[0.0, -x3, x2], [x3, 0.0, -x1], [-x2, x1, 0.0]])


def vee(M) -> np.ndarray:
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def so3_ad_star(lam, v, u) -> np.ndarray:
    """``ad*_v u = Lambda^{-1}(v x Lambda u)`` for the diagonal inertia ``lam``."""
    lam = np.asarray(lam, dtype=float)
    return np.cross(np.asarray(v, float), lam * np.asarray(u, float)) / lam


class RigidBody(MetricBackend):
    """so(3) with ``<e_i, e_j> = lam_i delta_ij`` and ``[e1, e2] = e3`` (cyclic)."""

    def __init__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (3,) or np.any(lam <= 0):
            raise DomainError("rigid body needs three positive moments")
        self.lam = lam
        self.name = f"so3(lambda={lam.tolist()})"

    def bracket(self, u, v):
        return np.cross(np.asarray(u, float), np.asarray(v, float))

    def ad_star(self, v, u):
        return so3_ad_star(self.lam, v, u)

    def inner(self, u, v):
        return float(np.sum(self.lam * np.asarray(u, float) * np.asarray(v, float)))

    def check(self, u):
        if np.shape(u) != (3,):
            raise DomainError("so(3) elements are triples")

    def euler_rhs(self, u):
        # -ad*_u u = Lambda^{-1}(Lambda u x u)
        return -self.ad_star(u, u)

    def linearized_rhs(self, u, z):
        """``dz/dt = -(ad*_u z + ad*_z u)``."""
        return -(self.ad_star(u, z) + self.ad_star(z, u))

    def growth_rate(self) -> float:
        """Instability exponent of steady rotation about the middle axis (sorted moments)."""
        l1, l2, l3 = np.sort(self.lam)
        return float(np.sqrt(max((l3 - l2) * (l2 - l1), 0.0) / (l1 * l3)))

    def levi_civita(self, x, y):
        """``nabla_x y`` for left-invariant fields, from the Koszul formula."""
        return 0.5 * (self.bracket(x, y) + self.ad_star(x, y) + self.ad_star(y, x))

    def riemann(self, x, y, z):
        nab = self.levi_civita
        return nab(x, nab(y, z)) - nab(y, nab(x, z)) - nab(self.bracket(x, y), z)

    def curvature_operator(self, u) -> np.ndarray:
        """Matrix of ``y -> R(y, u)u`` in coordinates, built by polarizing the generic formula."""
        basis = np.eye(3)
        s = lambda x: curvature_numerator(self, x, u)  # noqa: E731
        B = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                B[i, j] = 0.5 * (s(basis[i] + basis[j]) - s(basis[i]) - s(basis[j]))
        return B / self.lam[:, None]

    def jacobi_operator(self, u) -> np.ndarray:
        """Matrix of ``y -> R(y, u)u`` from the Levi-Civita connection."""
        return np.column_stack([self.riemann(e, u, u) for e in np.eye(3)])


def displayed_so3_form(lam) -> tuple[float, float]:
    """Coefficients of ``(x1)^2`` and ``(x3)^2`` in the closed-form rigid-body display.

    This evaluates the printed expression as it stands, for comparison with
    the generic engine.
    """
    l1, l2, l3 = (float(v) for v in lam)
    c1 = ((l2 - l1) ** 2 - l3 ** 2 + 2 * l3 * (l2 - l3 + l1)) / (4 * l3)
    c3 = ((l3 - l2) ** 2 - l1 ** 2 + 2 * l1 * (l1 - l3 - l2)) / (4 * l1)
    return c1, c3


def so3_form_coefficients(lam) -> tuple[float, float, float]:
    """Generic-engine values of ``<R(e2, x)x, e2>`` as a quadratic form in ``x``.

    Returns the ``(x1)^2`` and ``(x3)^2`` coefficients and the ``x1 x3`` cross
    coefficient.
    """
    body = RigidBody(lam)
    e1, e2, e3 = np.eye(3)
    c1 = curvature_numerator(body, e2, e1)
    c3 = curvature_numerator(body, e2, e3)
    c13 = curvature_numerator(body, e2, e1 + e3) - c1 - c3
    return c1, c3, c13
