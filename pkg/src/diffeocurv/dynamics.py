"""Time integration of Euler-Arnold flows, flow maps and Jacobi fields.

Field equations on the circle are integrated as Galerkin systems on the modes
``|n| <= N``.  For speed the state is held as a dense vector of complex
Fourier coefficients ``c_n, n = -N..N`` (``u(x) = sum c_n exp(i k_n x)``);
products are exact convolutions truncated back to ``|n| <= N``, so the
nonlinear terms agree with the exact trigonometric-polynomial algebra followed
by :func:`~diffeocurv.trigpoly.project_modes`.

Equations (``m = A u``)::

    ch       m_t = -(2 m u_x + m_x u),   A = a - b d^2/dx^2
    burgers  u_t = -3 u u_x              (A = a)
    hs       m_t = -(2 m u_x + m_x u),   A = -d^2/dx^2 on mean-zero fields
    kdv      u_t = -3 u u_x - a u_xxx    (exponential integrator for the linear part)
    rigid    u_t = Lambda^{-1}(Lambda u x u)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .euler_arnold import RigidBody, hat
from .trigpoly import DomainError, TrigPoly

FIELD_KINDS = ("ch", "burgers", "hs", "kdv")
KINDS = FIELD_KINDS + ("rigid",)
DERIVATIVE_BOUND = 1e4
DRIFT_BOUND = 1e-3


@dataclass(frozen=True)
class EquationSpec:
    """Which Euler-Arnold flow to integrate.

    ``kind`` is one of ``ch`` (a-b metric), ``burgers`` (``a`` only), ``hs``,
    ``kdv`` (``a`` is the dispersion coefficient) or ``rigid`` (``lam``).
    """

    kind: str
    a: float = 1.0
    b: float = 0.0
    lam: tuple[float, float, float] = (1.0, 2.0, 3.0)
    N: int = 32
    period: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown equation {self.kind!r}; expected one of {KINDS}")
        if self.kind == "ch" and (self.a < 0 or self.b < 0 or not (self.a > 0 or self.b > 0)):
            raise DomainError("Camassa-Holm needs a, b >= 0 with a > 0 or b > 0")
        if self.kind == "burgers" and not self.a > 0:
            raise DomainError("Burgers needs a > 0")
        if self.kind == "rigid" and (len(self.lam) != 3 or min(self.lam) <= 0):
            raise DomainError("rigid body needs three positive moments")
        if self.kind in FIELD_KINDS and self.N < 1:
            raise ValueError("Galerkin cutoff N must be at least 1")
        if not self.period > 0:
            raise ValueError("period must be positive")

    @classmethod
    def camassa_holm(cls, a=1.0, b=1.0, N=32, period=1.0):
        return cls("ch", a=a, b=b, N=N, period=period)

    @classmethod
    def burgers(cls, a=1.0, N=32, period=1.0):
        return cls("burgers", a=a, b=0.0, N=N, period=period)

    @classmethod
    def hunter_saxton(cls, N=32, period=1.0):
        return cls("hs", a=0.0, b=1.0, N=N, period=period)

    @classmethod
    def kdv(cls, central=1.0, N=32, period=1.0):
        return cls("kdv", a=central, N=N, period=period)

    @classmethod
    def rigid_body(cls, lam=(1.0, 2.0, 3.0)):
        return cls("rigid", lam=tuple(float(v) for v in lam))

    @property
    def is_field(self) -> bool:
        return self.kind in FIELD_KINDS


# ---------------------------------------------------------------------------
# dense Galerkin representation


def to_dense(p: TrigPoly, N: int) -> np.ndarray:
    """Complex coefficients ``c_{-N..N}`` of ``p`` (higher modes dropped)."""
    if p.dim != 1:
        raise DomainError("dynamics works with 1D fields")
    c = np.zeros(2 * N + 1, dtype=complex)
    for (n,), a in p.to_complex().items():
        if abs(n) <= N:
            c[n + N] = a
    return c


def from_dense(c: np.ndarray, period: float = 1.0) -> TrigPoly:
    N = (len(c) - 1) // 2
    table = {}
    for n in range(0, N + 1):
        a = c[n + N]
        if n == 0:
            table[(0,)] = (float(a.real), 0.0)
        else:
            table[(n,)] = (2.0 * float(a.real), -2.0 * float(a.imag))
    return TrigPoly(table, 1, period)


class Galerkin:
    """Dense spectral operators for one equation."""

    def __init__(self, spec: EquationSpec):
        self.spec = spec
        self.N = N = spec.N
        self.n = np.arange(-N, N + 1)
        self.k = 2 * np.pi * self.n / spec.period
        self.ik = 1j * self.k
        if spec.kind == "hs":
            A = self.k ** 2
        elif spec.kind == "kdv":
            A = np.ones_like(self.k)
        else:
            A = spec.a + spec.b * self.k ** 2
        self.A = A
        self.mean_zero = spec.kind == "hs"
        with np.errstate(divide="ignore"):
            self.Ainv = np.where(A != 0, 1.0 / np.where(A != 0, A, 1.0), 0.0)
        if spec.kind == "kdv":
            self.linear = 1j * spec.a * self.k ** 3
        else:
            self.linear = None

    def product(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        N = self.N
        full = np.convolve(p, q)
        return full[N:3 * N + 1]

    def hermitian(self, c: np.ndarray) -> np.ndarray:
        return 0.5 * (c + np.conj(c[::-1]))

    def project(self, c: np.ndarray) -> np.ndarray:
        if self.mean_zero:
            c = c.copy()
            c[self.N] = 0.0
        return c

    def coadjoint(self, v: np.ndarray, u: np.ndarray) -> np.ndarray:
        """``ad*_v u = A^{-1} P (2 (A u) v_x + (A u)_x v)``."""
        m = self.A * u
        r = 2.0 * self.product(m, self.ik * v) + self.product(self.ik * m, v)
        return self.Ainv * self.project(r)

    def ad(self, u: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``ad_u y = u_x y - u y_x``."""
        return self.product(self.ik * u, y) - self.product(u, self.ik * y)

    def nonlinear(self, u: np.ndarray) -> np.ndarray:
        if self.spec.kind == "kdv":
            return -3.0 * self.product(u, self.ik * u)
        return -self.coadjoint(u, u)

    def rhs(self, u: np.ndarray) -> np.ndarray:
        out = self.nonlinear(u)
        if self.linear is not None:
            out = out + self.linear * u
        return out

    def energy(self, u: np.ndarray) -> float:
        L = self.spec.period
        return float(L * np.real(np.vdot(u, self.A * u)))

    def mean(self, u: np.ndarray) -> float:
        return float(self.spec.period * u[self.N].real)

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(self.spec.period * np.real(np.vdot(u, self.A * v)))

    def grid_values(self, u: np.ndarray, derivative: int = 0, M: int | None = None) -> np.ndarray:
        N = self.N
        M = M or 4 * N + 4
        c = u * self.ik ** derivative if derivative else u
        a = np.zeros(M, dtype=complex)
        a[self.n % M] = c
        return (M * np.fft.ifft(a)).real

    def evaluate(self, u: np.ndarray, x: np.ndarray, derivative: int = 0) -> np.ndarray:
        N = self.N
        pos = u[N:]
        kk = self.k[N:]
        if derivative:
            pos = pos * (1j * kk) ** derivative
        phase = np.exp(1j * np.outer(np.asarray(x), kk))
        w = np.full(N + 1, 2.0)
        w[0] = 1.0
        return (phase @ (w * pos)).real


# ---------------------------------------------------------------------------
# steppers


def _rk4(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk2(f, y, dt):
    return y + dt * f(y + 0.5 * dt * f(y))


def etdrk4_coefficients(L: np.ndarray, dt: float, M: int = 64):
    """Exponential time-differencing RK4 weights, evaluated by contour averaging.

    The contour mean avoids cancellation in the phi-functions for small ``|L dt|``.
    """
    r = np.exp(2j * np.pi * (np.arange(1, M + 1) - 0.5) / M)
    z = dt * L[:, None] + r[None, :]
    ez = np.exp(z)
    Q = dt * np.mean((np.exp(z / 2) - 1) / z, axis=1)
    f1 = dt * np.mean((-4 - z + ez * (4 - 3 * z + z * z)) / z ** 3, axis=1)
    f2 = dt * np.mean((2 + z + ez * (z - 2)) / z ** 3, axis=1)
    f3 = dt * np.mean((-4 - 3 * z - z * z + ez * (4 - z)) / z ** 3, axis=1)
    return np.exp(dt * L), np.exp(0.5 * dt * L), Q, f1, f2, f3


def _etdrk4(nonlin, coeffs, y):
    E, E2, Q, f1, f2, f3 = coeffs
    Ny = nonlin(y)
    a = E2 * y + Q * Ny
    Na = nonlin(a)
    b = E2 * y + Q * Na
    Nb = nonlin(b)
    c = E2 * a + Q * (2 * Nb - Ny)
    Nc = nonlin(c)
    return E * y + f1 * Ny + 2 * f2 * (Na + Nb) + f3 * Nc


def _lawson_rk2(nonlin, L, y, dt):
    E = np.exp(0.5 * dt * L)
    k1 = nonlin(y)
    k2 = nonlin(E * (y + 0.5 * dt * k1))
    return E * E * y + dt * E * k2


SCHEMES = ("rk4", "rk2")


def _check_run(dt: float, T: float, scheme: str) -> int:
    if not (dt > 0 and T > 0):
        raise ValueError("dt and T must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    steps = int(round(T / dt))
    if steps < 1 or abs(steps * dt - T) > 1e-9 * max(T, 1.0):
        raise ValueError("T must be a positive integer multiple of dt")
    return steps


# ---------------------------------------------------------------------------
# trajectories


@dataclass
class Trajectory:
    spec: EquationSpec
    dt: float
    times: np.ndarray
    states: np.ndarray
    energy: np.ndarray
    monitors: dict = field(default_factory=dict)
    breakdown: bool = False
    breakdown_time: float | None = None
    breakdown_reason: str | None = None

    @property
    def drift(self) -> np.ndarray:
        E0 = self.energy[0]
        if E0 == 0:
            return np.abs(self.energy - E0)
        return np.abs(self.energy - E0) / abs(E0)

    @property
    def max_drift(self) -> float:
        return float(self.drift.max())

    def field(self, i: int = -1) -> TrigPoly:
        if not self.spec.is_field:
            raise TypeError("rigid-body states are triples")
        return from_dense(self.states[i], self.spec.period)

    def final(self):
        return self.field(-1) if self.spec.is_field else self.states[-1].copy()

    def coefficient_columns(self, modes=None) -> tuple[list[str], np.ndarray]:
        """Real coefficient columns for CSV output (cos/sin amplitudes per mode)."""
        if not self.spec.is_field:
            return ["u1", "u2", "u3"], np.asarray(self.states, float)
        N = self.spec.N
        modes = list(range(0, min(N, 8) + 1)) if modes is None else list(modes)
        names, cols = [], []
        for n in modes:
            if not 0 <= n <= N:
                raise ValueError(f"mode {n} outside 0..{N}")
            c = self.states[:, n + N]
            if n == 0:
                names.append("c0")
                cols.append(c.real)
            else:
                names += [f"c{n}", f"s{n}"]
                cols += [2 * c.real, -2 * c.imag]
        return names, np.column_stack(cols)


def initial_state(spec: EquationSpec, u0) -> np.ndarray:
    if spec.is_field:
        if not isinstance(u0, TrigPoly):
            raise DomainError("field equations need a TrigPoly initial state")
        if u0.period != (spec.period,):
            raise DomainError("initial field period differs from the equation period")
        if spec.kind == "hs" and abs(u0.mean) > 1e-14 * max(1.0, u0.max_abs_coefficient()):
            raise DomainError("Hunter-Saxton states must have zero mean (mode n=[0] is singular)")
        if u0.degree > spec.N:
            raise DomainError(f"initial field has degree {u0.degree} > N={spec.N}")
        return to_dense(u0, spec.N)
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (3,):
        raise DomainError("rigid-body state must be a triple")
    return u0


class System:
    """Right-hand side, energy and step for one equation."""

    def __init__(self, spec: EquationSpec):
        self.spec = spec
        self._etd = None
        if spec.is_field:
            self.g = Galerkin(spec)
        else:
            self.body = RigidBody(spec.lam)

    def rhs(self, u):
        if self.spec.is_field:
            return self.g.rhs(u)
        return self.body.euler_rhs(u)

    def energy(self, u) -> float:
        if self.spec.is_field:
            return self.g.energy(u)
        return self.body.inner(u, u)

    def step(self, u, dt, scheme):
        if self.spec.is_field and self.g.linear is not None:
            if scheme == "rk4":
                if self._etd is None or self._etd[0] != dt:
                    self._etd = (dt, etdrk4_coefficients(self.g.linear, dt))
                out = _etdrk4(self.g.nonlinear, self._etd[1], u)
            else:
                out = _lawson_rk2(self.g.nonlinear, self.g.linear, u, dt)
            return self.g.hermitian(out)
        stepper = _rk4 if scheme == "rk4" else _rk2
        out = stepper(self.rhs, u, dt)
        return self.g.hermitian(out) if self.spec.is_field else out

    def monitors(self, u) -> dict:
        if self.spec.is_field:
            g = self.g
            out = {"mean": g.mean(u), "l2": float(self.spec.period * np.real(np.vdot(u, u))),
                   "max_ux": float(np.abs(g.grid_values(u, 1)).max())}
            if self.spec.kind == "hs" or self.spec.kind == "ch":
                out["h1dot"] = float(self.spec.period * np.real(np.vdot(u, g.k ** 2 * u)))
            return out
        lam = self.body.lam
        return {"casimir": float(np.sum((lam * u) ** 2))}


def rhs(spec: EquationSpec, state):
    """Time derivative of ``state`` (a TrigPoly for field equations, a triple for the rigid body)."""
    sysm = System(spec)
    if spec.is_field:
        return from_dense(sysm.g.hermitian(sysm.rhs(initial_state(spec, state))), spec.period)
    return sysm.rhs(initial_state(spec, state))


def integrate(spec: EquationSpec, u0, dt: float, T: float, scheme: str = "rk4",
              derivative_bound: float = DERIVATIVE_BOUND, drift_bound: float = DRIFT_BOUND) -> Trajectory:
    """Fixed-step integration of the Euler-Arnold equation from ``u0``.

    Integration stops early, flagging breakdown, when ``max |u_x|`` exceeds
    ``derivative_bound`` or the relative energy drift exceeds ``drift_bound``.
    """
    steps = _check_run(dt, T, scheme)
    sysm = System(spec)
    u = initial_state(spec, u0)
    states = [u]
    energy = [sysm.energy(u)]
    mons = {k: [v] for k, v in sysm.monitors(u).items()}
    E0 = energy[0]
    breakdown, when, reason = False, None, None
    for i in range(1, steps + 1):
        u = sysm.step(u, dt, scheme)
        E = sysm.energy(u)
        m = sysm.monitors(u)
        states.append(u)
        energy.append(E)
        for key, val in m.items():
            mons[key].append(val)
        drift = abs(E - E0) / abs(E0) if E0 else abs(E - E0)
        if not np.all(np.isfinite(u)):
            breakdown, when, reason = True, i * dt, "non-finite state"
        elif "max_ux" in m and m["max_ux"] > derivative_bound:
            breakdown, when, reason = True, i * dt, f"max|u_x| > {derivative_bound:g}"
        elif drift > drift_bound:
            breakdown, when, reason = True, i * dt, f"energy drift > {drift_bound:g}"
        if breakdown:
            break
    times = dt * np.arange(len(states))
    return Trajectory(spec, dt, times, np.array(states), np.array(energy),
                      {k: np.array(v) for k, v in mons.items()}, breakdown, when, reason)


# ---------------------------------------------------------------------------
# flow maps


@dataclass
class FlowMap:
    times: np.ndarray
    positions: np.ndarray
    log_deformation: np.ndarray
    monotone: np.ndarray
    order_violation_time: float | None
    collapse_time: float | None
    collapse_tol: float

    @property
    def deformation(self) -> np.ndarray:
        return np.exp(self.log_deformation)

    @property
    def breakdown_time(self) -> float | None:
        cands = [t for t in (self.order_violation_time, self.collapse_time) if t is not None]
        return min(cands) if cands else None


def _monotone(x: np.ndarray, period: float) -> bool:
    gaps = np.diff(np.append(x, x[0] + period))
    return bool(np.all(gaps > 0))


def flow_map(traj: Trajectory, n_particles: int = 256, x0: np.ndarray | None = None,
             reverse: bool = False, collapse_tol: float = 0.2) -> FlowMap:
    """Integrate particles ``d eta/dt = u(t, eta)`` through a stored field trajectory.

    Particles start on a uniform grid (or at ``x0``) and are advanced by RK4
    with step ``2 dt`` using the stored states as stage values; a trailing
    single step uses the midpoint rule.  ``log eta_x`` is integrated along each
    particle.  With ``reverse=True`` the particles are carried from the final
    time back to the initial one.

    The flow stops being a diffeomorphism when particles change order or the
    smallest ``eta_x`` drops below ``collapse_tol``; the first such times are
    reported.  A truncated Galerkin field stays smooth, so its flow never
    folds exactly; near a gradient catastrophe the compression of the worst
    particle lags the exact one once the front is under-resolved.  The
    default tolerance flags a five-fold compression, which the resolved part
    of the run still tracks.
    """
    if not traj.spec.is_field:
        raise TypeError("flow maps need a field trajectory")
    g = Galerkin(traj.spec)
    L = traj.spec.period
    x = (np.arange(n_particles) * L / n_particles) if x0 is None else np.array(x0, dtype=float)
    logd = np.zeros_like(x)
    states = traj.states[::-1] if reverse else traj.states
    times = traj.times[::-1] if reverse else traj.times
    h = -traj.dt if reverse else traj.dt

    def vel(c, pts):
        return g.evaluate(c, pts), g.evaluate(c, pts, 1)

    out_t, out_x, out_d, mono = [times[0]], [x.copy()], [logd.copy()], [_monotone(np.sort(x), L) if x0 is not None else _monotone(x, L)]
    order_t = collapse_t = None
    i = 0
    n = len(states)
    while i < n - 1:
        if i + 2 <= n - 1:
            s0, s1, s2 = states[i], states[i + 1], states[i + 2]
            H = 2 * h
            u1, d1 = vel(s0, x)
            u2, d2 = vel(s1, x + 0.5 * H * u1)
            u3, d3 = vel(s1, x + 0.5 * H * u2)
            u4, d4 = vel(s2, x + H * u3)
            x = x + H / 6.0 * (u1 + 2 * u2 + 2 * u3 + u4)
            logd = logd + H / 6.0 * (d1 + 2 * d2 + 2 * d3 + d4)
            i += 2
        else:
            s0, s1 = states[i], states[i + 1]
            u1, d1 = vel(s0, x)
            um = 0.5 * (s0 + s1)
            u2, d2 = vel(um, x + 0.5 * h * u1)
            x = x + h * u2
            logd = logd + h * d2
            i += 1
        t = times[i]
        ok = _monotone(x, L) if x0 is None else True
        out_t.append(t)
        out_x.append(x.copy())
        out_d.append(logd.copy())
        mono.append(ok)
        if order_t is None and not ok:
            order_t = t
        if collapse_t is None and logd.min() < math.log(collapse_tol):
            collapse_t = t
    return FlowMap(np.array(out_t), np.array(out_x), np.array(out_d), np.array(mono),
                   order_t, collapse_t, collapse_tol)


# ---------------------------------------------------------------------------
# Jacobi fields


@dataclass
class JacobiRun:
    base: Trajectory
    y: np.ndarray
    z: np.ndarray
    y_norm: np.ndarray
    z_norm: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.base.times

    def growth_rate(self, t_from: float | None = None) -> float:
        """Least-squares slope of ``log |z|`` over the second half of the run (or from ``t_from``)."""
        t = self.times
        start = t[-1] / 2 if t_from is None else t_from
        sel = (t >= start) & (self.z_norm > 0)
        return float(np.polyfit(t[sel], np.log(self.z_norm[sel]), 1)[0])


def jacobi_linearized(spec: EquationSpec, u0, z0, y0=None, dt: float = 1e-3, T: float = 1.0,
                      scheme: str = "rk4") -> JacobiRun:
    """Evolve ``u`` with the linearized flow ``y`` and linearized Euler ``z``.

    ``dy/dt = z + ad_u y`` and ``dz/dt = -(ad*_u z + ad*_z u)``.
    """
    if spec.kind == "kdv":
        raise ValueError("Jacobi fields are available for the metric flows (ch, burgers, hs, rigid), not kdv")
    steps = _check_run(dt, T, scheme)
    sysm = System(spec)
    u = initial_state(spec, u0)
    z = initial_state(spec, z0)
    y = np.zeros_like(z) if y0 is None else initial_state(spec, y0)

    if spec.is_field:
        g = sysm.g

        def f(state):
            uu, yy, zz = state
            return np.array([-g.coadjoint(uu, uu),
                             zz + g.ad(uu, yy),
                             -(g.coadjoint(uu, zz) + g.coadjoint(zz, uu))])

        norm = lambda w: math.sqrt(max(g.inner(w, w), 0.0))  # noqa: E731
        fix = g.hermitian
    else:
        body = sysm.body

        def f(state):
            uu, yy, zz = state
            return np.array([body.euler_rhs(uu), zz + body.ad(uu, yy), body.linearized_rhs(uu, zz)])

        norm = lambda w: math.sqrt(body.inner(w, w))  # noqa: E731
        fix = lambda w: w  # noqa: E731

    stepper = _rk4 if scheme == "rk4" else _rk2
    state = np.array([u, y, z])
    us, ys, zs = [u], [y], [z]
    energy = [sysm.energy(u)]
    for _ in range(steps):
        state = stepper(f, state, dt)
        state = np.array([fix(s) for s in state])
        us.append(state[0])
        ys.append(state[1])
        zs.append(state[2])
        energy.append(sysm.energy(state[0]))
    times = dt * np.arange(steps + 1)
    base = Trajectory(spec, dt, times, np.array(us), np.array(energy))
    return JacobiRun(base, np.array(ys), np.array(zs),
                     np.array([norm(w) for w in ys]), np.array([norm(w) for w in zs]))


def fd_gap(spec: EquationSpec, u0, z0, eps: float, dt: float, T: float) -> float:
    """``|(u_eps(T) - u(T))/eps - z(T)|`` relative to ``|z(T)|``, with ``u_eps(0) = u0 + eps z0``."""
    run = jacobi_linearized(spec, u0, z0, dt=dt, T=T)
    sysm = System(spec)
    if spec.is_field:
        pert = u0 + eps * z0
    else:
        pert = np.asarray(u0, float) + eps * np.asarray(z0, float)
    ue = integrate(spec, pert, dt, T, derivative_bound=np.inf, drift_bound=np.inf).states[-1]
    u = run.base.states[-1]
    diff = (ue - u) / eps - run.z[-1]
    if spec.is_field:
        return math.sqrt(sysm.g.inner(diff, diff)) / run.z_norm[-1]
    return math.sqrt(sysm.body.inner(diff, diff)) / run.z_norm[-1]


def fd_ratio(spec: EquationSpec, u0, z0, eps: float = 1e-5, dt: float = 1e-3, T: float = 1.0) -> tuple[float, float, float]:
    """Gaps at ``eps`` and ``eps/2`` and their ratio (close to 2 for a first-order gap)."""
    g1 = fd_gap(spec, u0, z0, eps, dt, T)
    g2 = fd_gap(spec, u0, z0, eps / 2, dt, T)
    return g1, g2, g1 / g2


# ---------------------------------------------------------------------------
# rigid-body group-level checks


def _body_group_rhs(body: RigidBody):
    def f(state):
        R = state[:9].reshape(3, 3)
        u = state[9:]
        return np.concatenate([(R @ hat(u)).ravel(), body.euler_rhs(u)])
    return f


def rigid_exp(lam, v, t: float, dt: float = 1e-3) -> np.ndarray:
    """Group element reached at time ``t`` by the geodesic from the identity with body velocity ``v``."""
    body = RigidBody(lam)
    f = _body_group_rhs(body)
    steps = max(1, int(math.ceil(t / dt)))
    h = t / steps
    state = np.concatenate([np.eye(3).ravel(), np.asarray(v, float)])
    for _ in range(steps):
        state = _rk4(f, state, h)
    return state[:9].reshape(3, 3)


def rigid_jacobi(lam, v, w, t: float, dt: float = 1e-3) -> np.ndarray:
    """Jacobi field ``J(t) = R(t) hat(y(t))`` with ``J(0) = 0`` and ``J'(0) = w``.

    Solved in the body frame: ``p = dy/dt + nabla_u y`` and
    ``dp/dt = -nabla_u p - R(y, u) u``.
    """
    body = RigidBody(lam)
    nab = body.levi_civita

    def f(state):
        R = state[:9].reshape(3, 3)
        u, y, p = state[9:12], state[12:15], state[15:18]
        K = body.jacobi_operator(u)
        return np.concatenate([(R @ hat(u)).ravel(), body.euler_rhs(u),
                               p - nab(u, y), -nab(u, p) - K @ y])

    steps = max(1, int(math.ceil(t / dt)))
    h = t / steps
    state = np.concatenate([np.eye(3).ravel(), np.asarray(v, float), np.zeros(3), np.asarray(w, float)])
    for _ in range(steps):
        state = _rk4(f, state, h)
    R = state[:9].reshape(3, 3)
    return R @ hat(state[12:15])


def cartan_check(lam, v, w, t: float = 1.0, eps: float = 1e-5, dt: float = 1e-2) -> float:
    """Relative gap between a central difference of ``exp`` along ``t w`` and the Jacobi field."""
    v, w = np.asarray(v, float), np.asarray(w, float)
    Rp = rigid_exp(lam, v + eps * w, t, dt)
    Rm = rigid_exp(lam, v - eps * w, t, dt)
    fd = (Rp - Rm) / (2 * eps)
    J = rigid_jacobi(lam, v, w, t, dt)
    return float(np.linalg.norm(fd - J) / np.linalg.norm(J))


@dataclass
class ConjugatedRun:
    times: np.ndarray
    R: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    momentum_Z: np.ndarray
    residual_flow: float
    residual_euler: float

    @property
    def residual(self) -> float:
        return max(self.residual_flow, self.residual_euler)


def ad_conjugate_check(lam, u0, z0, y0=None, dt: float = 1e-3, T: float = 2.0) -> ConjugatedRun:
    """Transport a rigid-body Jacobi run to the frame ``Y = R y, Z = R z``.

    Checks ``dY/dt = Z`` and ``d/dt(Lambda^{-1} R Lambda R^T Z) + ad*_Z u0 = 0``
    by fourth-order central differences of the integrated series.  The returned
    residuals are relative to ``max |Z|`` and ``max |ad*_Z u0|``.
    """
    body = RigidBody(lam)
    lam_arr = body.lam
    u0 = np.asarray(u0, float)
    z0 = np.asarray(z0, float)
    y0 = np.zeros(3) if y0 is None else np.asarray(y0, float)

    def f(state):
        R = state[:9].reshape(3, 3)
        u, y, z = state[9:12], state[12:15], state[15:18]
        return np.concatenate([(R @ hat(u)).ravel(), body.euler_rhs(u),
                               z + body.ad(u, y), body.linearized_rhs(u, z)])

    steps = _check_run(dt, T, "rk4")
    state = np.concatenate([np.eye(3).ravel(), u0, y0, z0])
    hist = [state]
    for _ in range(steps):
        state = _rk4(f, state, dt)
        hist.append(state)
    hist = np.array(hist)
    R = hist[:, :9].reshape(-1, 3, 3)
    y, z = hist[:, 12:15], hist[:, 15:18]
    Y = np.einsum("tij,tj->ti", R, y)
    Z = np.einsum("tij,tj->ti", R, z)
    # Ad*_eta Ad_eta Z with eta = R^T is Lambda^{-1} R Lambda R^T Z = Lambda^{-1} R Lambda z
    MZ = np.einsum("tij,tj->ti", R, lam_arr * z) / lam_arr

    def d4(series):
        return (-series[4:] + 8 * series[3:-1] - 8 * series[1:-3] + series[:-4]) / (12 * dt)

    dY = d4(Y)
    dMZ = d4(MZ)
    Zi = Z[2:-2]
    forcing = np.array([body.ad_star(zz, u0) for zz in Zi])
    zscale = max(float(np.abs(Z).max()), 1e-300)
    fscale = max(float(np.abs(forcing).max()), zscale * 1e-12, 1e-300)
    res_flow = float(np.abs(dY - Zi).max()) / zscale
    res_euler = float(np.abs(dMZ + forcing).max()) / max(fscale, zscale)
    times = dt * np.arange(steps + 1)
    return ConjugatedRun(times, R, Y, Z, MZ, res_flow, res_euler)
