"""Exact finite trigonometric polynomials on the circle and the 2-torus.

A polynomial is a sparse table mapping canonical integer frequencies ``n`` to
a ``(cos, sin)`` amplitude pair::

    p(x) = sum_n  c_n cos(k_n . x) + s_n sin(k_n . x),    k_n = 2 pi n / L

where ``L`` is the period along each axis.  A frequency is canonical when its
first nonzero entry is positive (or it is zero); ``cos(-k.x) = cos(k.x)`` and
``sin(-k.x) = -sin(k.x)`` are applied on insertion so the table is unique.

Products are computed term by term with the product-to-sum identities, so the
degree of a product is the sum of the degrees and nothing aliases.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from types import MappingProxyType
from typing import Union

import numpy as np

PRUNE_RTOL = 1e-14

Frequency = tuple[int, ...]


class SingularModeError(ArithmeticError):
    """An inverse Fourier multiplier hit a mode where it is not invertible."""

    def __init__(self, frequency, message: str | None = None):
        self.frequency = tuple(frequency)
        super().__init__(message or f"multiplier is singular on mode n={list(self.frequency)}")


class DomainError(ValueError):
    """An element lies outside the admissible space of a metric or equation."""


def canonical(n: Iterable[int]) -> tuple[Frequency, int]:
    """Return the canonical representative of ``n`` and the sign flip applied."""
    n = tuple(int(v) for v in n)
    for v in n:
        if v > 0:
            return n, 1
        if v < 0:
            return tuple(-w for w in n), -1
    return n, 1


def _as_period(period, dim: int) -> tuple[float, ...]:
    if np.isscalar(period):
        period = (float(period),) * dim
    period = tuple(float(L) for L in period)
    if len(period) != dim:
        raise ValueError(f"period has {len(period)} entries, expected {dim}")
    if any(not L > 0 for L in period):
        raise ValueError("period must be positive")
    return period


def _prune(table: dict) -> dict:
    if not table:
        return table
    scale = max(max(abs(c), abs(s)) for c, s in table.values())
    if scale == 0.0:
        return {}
    cut = PRUNE_RTOL * scale
    out = {}
    for n, (c, s) in table.items():
        c = c if abs(c) >= cut else 0.0
        s = s if abs(s) >= cut else 0.0
        if c or s:
            out[n] = (c, s)
    return out


class TrigPoly:
    """Immutable real trigonometric polynomial in one or two variables.

    Parameters
    ----------
    terms : mapping
        ``{n: (cos_amp, sin_amp)}``.  Keys may be ints (1D) or integer
        tuples, in any sign convention; they are canonicalized.
    dim : int
        1 (circle) or 2 (torus).
    period : float or sequence of float
        Period along each axis.
    """

    __slots__ = ("dim", "period", "_terms")

    def __init__(self, terms: Mapping | None = None, dim: int = 1, period=1.0):
        if dim not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        self.dim = dim
        self.period = _as_period(period, dim)
        table: dict[Frequency, tuple[float, float]] = {}
        for key, amp in (terms or {}).items():
            n = (key,) if np.isscalar(key) else tuple(key)
            if len(n) != dim:
                raise ValueError(f"frequency {key!r} does not have dimension {dim}")
            n, sign = canonical(n)
            c, s = (float(amp[0]), float(amp[1])) if not np.isscalar(amp) else (float(amp), 0.0)
            if not any(n):
                s = 0.0
            c0, s0 = table.get(n, (0.0, 0.0))
            table[n] = (c0 + c, s0 + sign * s)
        self._terms = _prune(table)

    @classmethod
    def _raw(cls, table: dict, dim: int, period: tuple[float, ...]) -> TrigPoly:
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.period = period
        obj._terms = _prune(table)
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value: float, dim: int = 1, period=1.0) -> TrigPoly:
        return cls({(0,) * dim: (value, 0.0)}, dim, period)

    @classmethod
    def zero(cls, dim: int = 1, period=1.0) -> TrigPoly:
        return cls({}, dim, period)

    @classmethod
    def cos(cls, n, amp: float = 1.0, period=1.0) -> TrigPoly:
        """``amp * cos(2 pi n.x / L)``."""
        n = (n,) if np.isscalar(n) else tuple(n)
        return cls({n: (amp, 0.0)}, len(n), period)

    @classmethod
    def sin(cls, n, amp: float = 1.0, period=1.0) -> TrigPoly:
        """``amp * sin(2 pi n.x / L)``."""
        n = (n,) if np.isscalar(n) else tuple(n)
        return cls({n: (0.0, amp)}, len(n), period)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Frequency, tuple[float, float]]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Largest max-norm among stored frequencies (0 for constants / zero)."""
        return max((max(abs(v) for v in n) for n in self._terms), default=0)

    @property
    def mean(self) -> float:
        return self._terms.get((0,) * self.dim, (0.0, 0.0))[0]

    @property
    def volume(self) -> float:
        return math.prod(self.period)

    def is_zero(self) -> bool:
        return not self._terms

    def wavevector(self, n: Frequency) -> np.ndarray:
        return 2.0 * np.pi * np.asarray(n, dtype=float) / np.asarray(self.period)

    def max_abs_coefficient(self) -> float:
        return max((max(abs(c), abs(s)) for c, s in self._terms.values()), default=0.0)

    def __repr__(self) -> str:
        body = ", ".join(f"{list(n)}: ({c:.6g}, {s:.6g})" for n, (c, s) in sorted(self._terms.items()))
        return f"TrigPoly(dim={self.dim}, period={self.period}, {{{body}}})"

    # -- arithmetic -------------------------------------------------------

    def _check_compatible(self, other: TrigPoly) -> None:
        if not isinstance(other, TrigPoly):
            raise TypeError(f"expected TrigPoly, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.period != self.period:
            raise ValueError(f"period mismatch: {self.period} vs {other.period}")

    def __add__(self, other):
        if np.isscalar(other):
            other = TrigPoly.constant(other, self.dim, self.period)
        self._check_compatible(other)
        table = dict(self._terms)
        for n, (c, s) in other._terms.items():
            c0, s0 = table.get(n, (0.0, 0.0))
            table[n] = (c0 + c, s0 + s)
        return TrigPoly._raw(table, self.dim, self.period)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly._raw({n: (-c, -s) for n, (c, s) in self._terms.items()}, self.dim, self.period)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        if np.isscalar(other):
            other = float(other)
            return TrigPoly._raw({n: (other * c, other * s) for n, (c, s) in self._terms.items()},
                                 self.dim, self.period)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if np.isscalar(other):
            return self * (1.0 / float(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0 or int(k) != k:
            raise ValueError("only nonnegative integer powers")
        out = TrigPoly.constant(1.0, self.dim, self.period)
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.dim == other.dim and self.period == other.period and self._terms == other._terms

    __hash__ = None

    def allclose(self, other: TrigPoly, atol: float = 1e-12, rtol: float = 1e-12) -> bool:
        """Coefficientwise comparison with tolerance ``atol + rtol * scale``."""
        self._check_compatible(other)
        scale = max(self.max_abs_coefficient(), other.max_abs_coefficient())
        diff = (self - other).max_abs_coefficient()
        return diff <= atol + rtol * scale

    # -- calculus ---------------------------------------------------------

    def diff(self, axis: int = 0, order: int = 1) -> TrigPoly:
        return differentiate(self, axis, order)

    def __call__(self, x):
        return evaluate(self, x)

    def mean_zero(self) -> TrigPoly:
        """Drop the constant term."""
        zero = (0,) * self.dim
        return TrigPoly._raw({n: v for n, v in self._terms.items() if n != zero}, self.dim, self.period)

    def truncate(self, N: int) -> TrigPoly:
        return project_modes(self, N)

    def to_complex(self) -> dict[Frequency, complex]:
        """Coefficients ``a_n`` of ``sum a_n exp(i k_n.x)`` over all of Z^d."""
        out: dict[Frequency, complex] = {}
        for n, (c, s) in self._terms.items():
            if not any(n):
                out[n] = complex(c)
            else:
                out[n] = complex(0.5 * c, -0.5 * s)
                out[tuple(-v for v in n)] = complex(0.5 * c, 0.5 * s)
        return out

    @classmethod
    def from_complex(cls, coeffs: Mapping[Frequency, complex], dim: int, period) -> TrigPoly:
        """Inverse of :meth:`to_complex`; assumes Hermitian symmetry, reads canonical keys."""
        table = {}
        for n, a in coeffs.items():
            cn, sign = canonical(n)
            if sign < 0:
                continue
            if not any(cn):
                table[cn] = (float(np.real(a)), 0.0)
            else:
                table[cn] = (2.0 * float(np.real(a)), -2.0 * float(np.imag(a)))
        return cls._raw(table, dim, _as_period(period, dim))


def multiply(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact pointwise product."""
    p._check_compatible(q)
    if p.is_zero() or q.is_zero():
        return TrigPoly.zero(p.dim, p.period)
    a, b = p.to_complex(), q.to_complex()
    out: dict[Frequency, complex] = {}
    if p.dim == 1:
        for (n,), x in a.items():
            for (m,), y in b.items():
                k = n + m
                if k >= 0:
                    out[(k,)] = out.get((k,), 0.0) + x * y
    else:
        for (n1, n2), x in a.items():
            for (m1, m2), y in b.items():
                k = (n1 + m1, n2 + m2)
                if canonical(k)[1] > 0:
                    out[k] = out.get(k, 0.0) + x * y
    return TrigPoly.from_complex(out, p.dim, p.period)


def differentiate(p: TrigPoly, axis: int = 0, order: int = 1) -> TrigPoly:
    """Exact partial derivative along ``axis``."""
    if not 0 <= axis < p.dim:
        raise ValueError(f"axis {axis} out of range for dim {p.dim}")
    out = p
    for _ in range(order):
        table = {}
        for n, (c, s) in out._terms.items():
            k = 2.0 * np.pi * n[axis] / out.period[axis]
            if k:
                table[n] = (k * s, -k * c)
        out = TrigPoly._raw(table, p.dim, p.period)
    return out


def l2_inner(p: TrigPoly, q: TrigPoly) -> float:
    """``integral of p*q`` over one period box."""
    p._check_compatible(q)
    zero = (0,) * p.dim
    total = 0.0
    small, big = (p, q) if len(p._terms) <= len(q._terms) else (q, p)
    for n, (c, s) in small._terms.items():
        other = big._terms.get(n)
        if other is None:
            continue
        if n == zero:
            total += c * other[0]
        else:
            total += 0.5 * (c * other[0] + s * other[1])
    return p.volume * total


def evaluate(p: TrigPoly, x):
    """Pointwise value(s).  ``x`` is a scalar/array (1D) or ``(..., 2)`` array (2D)."""
    x = np.asarray(x, dtype=float)
    if p.dim == 1:
        pts = x[..., None]
    else:
        if x.shape[-1] != 2:
            raise ValueError("2D evaluation points need a trailing axis of length 2")
        pts = x
    out = np.zeros(pts.shape[:-1])
    for n, (c, s) in p._terms.items():
        theta = pts @ p.wavevector(n)
        if c:
            out = out + c * np.cos(theta)
        if s:
            out = out + s * np.sin(theta)
    return float(out) if out.ndim == 0 else out


def project_modes(p: TrigPoly, N: int) -> TrigPoly:
    """Galerkin truncation: keep frequencies with max-norm at most ``N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return TrigPoly._raw({n: v for n, v in p._terms.items() if max(abs(k) for k in n) <= N},
                         p.dim, p.period)


# ---------------------------------------------------------------------------
# vector fields on the torus


class VectorField:
    """Tuple of TrigPoly components sharing dimension and period."""

    __slots__ = ("components",)

    def __init__(self, *components: TrigPoly):
        if len(components) == 1 and not isinstance(components[0], TrigPoly):
            components = tuple(components[0])
        if not components:
            raise ValueError("need at least one component")
        first = components[0]
        for c in components[1:]:
            first._check_compatible(c)
        self.components = tuple(components)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    @property
    def period(self):
        return self.components[0].period

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other):
        return VectorField(*(a + b for a, b in zip(self, other, strict=True)))

    def __sub__(self, other):
        return VectorField(*(a - b for a, b in zip(self, other, strict=True)))

    def __neg__(self):
        return VectorField(*(-a for a in self))

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return VectorField(*(a * scalar for a in self))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __repr__(self):
        return f"VectorField({', '.join(map(repr, self.components))})"

    def allclose(self, other: VectorField, atol=1e-12, rtol=1e-12) -> bool:
        return all(a.allclose(b, atol, rtol) for a, b in zip(self, other, strict=True))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def map(self, fn: Callable[[TrigPoly], TrigPoly]) -> VectorField:
        return VectorField(*(fn(c) for c in self))

    def frequencies(self) -> list[Frequency]:
        return sorted(set().union(*(c.terms.keys() for c in self)))

    def evaluate(self, x) -> np.ndarray:
        return np.stack([evaluate(c, x) for c in self], axis=-1)

    def divergence(self) -> TrigPoly:
        out = differentiate(self[0], 0)
        for i in range(1, len(self)):
            out = out + differentiate(self[i], i)
        return out

    def curl(self) -> TrigPoly:
        """Scalar curl ``d u2/dx - d u1/dy`` of a planar field."""
        if len(self) != 2:
            raise ValueError("scalar curl needs a 2-component field")
        return differentiate(self[1], 0) - differentiate(self[0], 1)

    def directional(self, f: TrigPoly) -> TrigPoly:
        """``(self . grad) f``."""
        out = self[0] * differentiate(f, 0)
        for i in range(1, len(self)):
            out = out + self[i] * differentiate(f, i)
        return out


def field_inner(u: VectorField, v: VectorField) -> float:
    """Pointwise-dot L2 inner product of two vector fields."""
    return sum(l2_inner(a, b) for a, b in zip(u, v, strict=True))


Element = Union[TrigPoly, VectorField]


# ---------------------------------------------------------------------------
# Fourier multipliers


class FourierMultiplier:
    """Translation-invariant operator acting mode by mode.

    ``symbol`` receives the physical wavevector ``k`` (a length-``dim`` array)
    and returns a scalar for scalar fields or a symmetric ``(d, d)`` matrix for
    vector fields (acting on the cos- and sin-coefficient vectors separately).
    """

    def __init__(self, symbol: Callable[[np.ndarray], object], dim: int = 1, matrix: bool = False):
        self.symbol = symbol
        self.dim = dim
        self.matrix = matrix

    def _scalar(self, p: TrigPoly, inverse: bool) -> TrigPoly:
        table = {}
        for n, (c, s) in p.terms.items():
            m = float(self.symbol(p.wavevector(n)))
            if inverse:
                if m == 0.0:
                    raise SingularModeError(n)
                m = 1.0 / m
            table[n] = (m * c, m * s)
        return TrigPoly._raw(table, p.dim, p.period)

    def _matrix(self, u: VectorField, inverse: bool) -> VectorField:
        d = len(u)
        tables: list[dict] = [{} for _ in range(d)]
        for n in u.frequencies():
            M = np.asarray(self.symbol(u[0].wavevector(n)), dtype=float).reshape(d, d)
            C = np.array([u[i].terms.get(n, (0.0, 0.0))[0] for i in range(d)])
            S = np.array([u[i].terms.get(n, (0.0, 0.0))[1] for i in range(d)])
            if inverse:
                if abs(np.linalg.det(M)) <= 1e-300 or np.linalg.cond(M) > 1e14:
                    raise SingularModeError(n)
                C, S = np.linalg.solve(M, C), np.linalg.solve(M, S)
            else:
                C, S = M @ C, M @ S
            for i in range(d):
                tables[i][n] = (float(C[i]), float(S[i]))
        return VectorField(*(TrigPoly._raw(t, u.dim, u.period) for t in tables))

    def __call__(self, p: Element) -> Element:
        return self.apply(p)

    def apply(self, p: Element) -> Element:
        if self.matrix:
            return self._matrix(p, inverse=False)
        return self._scalar(p, inverse=False)

    def inverse(self, p: Element) -> Element:
        if self.matrix:
            return self._matrix(p, inverse=True)
        return self._scalar(p, inverse=True)


def apply_multiplier(m: FourierMultiplier, p: Element, inverse: bool = False) -> Element:
    return m.inverse(p) if inverse else m.apply(p)


def ab_inertia(a: float, b: float, dim: int = 1) -> FourierMultiplier:
    """``A = a - b * Laplacian`` as a scalar multiplier."""
    return FourierMultiplier(lambda k: a + b * float(np.dot(k, k)), dim)


# ---------------------------------------------------------------------------
# field-spec JSON


def to_spec(field: Element) -> dict:
    comps = field.components if isinstance(field, VectorField) else (field,)
    first = comps[0]
    out = {"dim": first.dim, "period": list(first.period), "components": []}
    for comp in comps:
        terms = []
        for n, (c, s) in sorted(comp.terms.items()):
            if c:
                terms.append({"trig": "cos", "n": list(n), "amp": c})
            if s:
                terms.append({"trig": "sin", "n": list(n), "amp": s})
        out["components"].append({"terms": terms})
    return out


def from_spec(spec: Mapping) -> Element:
    """Parse a field spec; one component gives a TrigPoly, several a VectorField."""
    allowed = {"dim", "period", "components"}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown field-spec keys: {sorted(unknown)}")
    dim = int(spec.get("dim", 1))
    period = spec.get("period", [1.0] * dim)
    comps = []
    for comp in spec["components"]:
        table: dict = {}
        for term in comp["terms"]:
            kind = term["trig"]
            n = tuple(int(v) for v in term["n"])
            amp = float(term["amp"])
            if kind == "cos":
                piece = (amp, 0.0)
            elif kind == "sin":
                piece = (0.0, amp)
            else:
                raise ValueError(f"trig must be 'cos' or 'sin', got {kind!r}")
            p = TrigPoly({n: piece}, dim, period)
            for k, v in p.terms.items():
                c0, s0 = table.get(k, (0.0, 0.0))
                table[k] = (c0 + v[0], s0 + v[1])
        comps.append(TrigPoly(table, dim, period))
    if not comps:
        raise ValueError("field spec has no components")
    return comps[0] if len(comps) == 1 else VectorField(*comps)
