"""Self-contained numerical verification suite.

Each check compares the generic curvature engine or the integrators against
an independent closed form or invariant and records the worst error seen.
Checks never raise: an exception is reported as a failed check.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .circle_metrics import (
    ABMetric,
    L_residual,
    closed_form_C,
    curvature_ab_direct,
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
from .dynamics import (
    EquationSpec,
    ad_conjugate_check,
    cartan_check,
    flow_map,
    fd_ratio,
    integrate,
    jacobi_linearized,
)
from .euler_arnold import RigidBody, curvature_S, displayed_so3_form, duality_residual, so3_form_coefficients
from .semidirect import SemidirectElement, SemidirectMetric, ambient_curvature, gauss_codazzi, rewrite_check
from .torus_metrics import (
    ARNOLD_LIMIT,
    ABCMetric,
    LambdaMetric,
    abc_closed_form,
    abc_closed_form_a0,
    abc_sin_pair,
    arnold_T2_reference,
    arnold_limit_check,
    burgers_curvature,
    burgers_mixed_closed,
    burgers_x_only_closed,
    field_dx,
    field_dy,
    lambda_curvature_closed,
    stream_cos,
    x_field,
)
from .trigpoly import TrigPoly, VectorField

BURGERS_BREAKDOWN = 1.0 / (6.0 * math.pi)


def rel_err(x: float, ref: float, floor: float = 1e-300) -> float:
    return abs(x - ref) / max(abs(ref), floor)


@dataclass
class CheckResult:
    id: str
    anchor: str
    expected: str
    computed: str
    tolerance: float
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)


@dataclass
class Check:
    id: str
    anchor: str
    tolerance: float
    run: Callable[[float], tuple[str, str, bool, dict]]


# ---------------------------------------------------------------------------
# curvature on the circle

AB_PARAMS = [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)]


def _mode_pairs(tol):
    worst = companion = companion_rel = 0.0
    positive = True
    ks = [2 * math.pi * j for j in range(1, 7)]
    for a, b in AB_PARAMS:
        m = ABMetric(a, b)
        for i, j in [(i, j) for i in range(1, 7) for j in range(1, 7) if i != j]:
            C = closed_form_C(m, ks[i - 1], ks[j - 1])
            positive &= C > 0
            for u, v in [(TrigPoly.cos(i), TrigPoly.cos(j)), (TrigPoly.cos(i), TrigPoly.sin(j)),
                         (TrigPoly.sin(i), TrigPoly.sin(j))]:
                worst = max(worst, rel_err(curvature_S(m, u, v).S, C))
        for i in range(1, 7):
            k = ks[i - 1]
            for u, v, ref in [(TrigPoly.cos(i), TrigPoly.sin(i), section_cos_sin(m, k)),
                              (TrigPoly.cos(i), TrigPoly.constant(1.0), section_cos_const(m, k))]:
                rep = curvature_S(m, u, v)
                companion_rel = max(companion_rel, rel_err(rep.S, ref))
                # S(cos kx, 1) is a small difference of terms of size |u|^2 |v|^2
                companion = max(companion, abs(rep.S - ref) / (rep.nu2 * rep.nv2))
    ok = positive and worst < tol and companion < tol
    return ("rel err 0 and C > 0", f"max rel err {worst:.3g}; companions {companion:.3g} of |u|^2|v|^2", ok,
            {"max_rel_err": worst, "all_positive": positive, "companion_err_over_norms": companion,
             "companion_rel_err": companion_rel})


def _christoffel_form(tol):
    rng = np.random.default_rng(61)
    worst_L = worst_eq = 0.0
    for a, b in AB_PARAMS:
        m = ABMetric(a, b)
        for _ in range(100):
            u = random_trigpoly(rng, int(rng.integers(1, 6)))
            v = random_trigpoly(rng, int(rng.integers(1, 6)))
            direct = curvature_ab_direct(m, u, v)
            generic = curvature_S(m, u, v).S
            scale = max(abs(generic), 1e-12 * m.norm2(u) * m.norm2(v))
            worst_L = max(worst_L, abs(L_residual(m, u, v)) / scale)
            worst_eq = max(worst_eq, abs(direct - generic) / scale)
    ok = worst_L < tol and worst_eq < tol
    return ("0", f"|L| {worst_L:.3g}, direct vs generic {worst_eq:.3g}", ok,
            {"L_residual": worst_L, "direct_vs_generic": worst_eq})


def _negative_sections(tol):
    rows = []
    worst = 0.0
    ok = True
    b = 1.0
    for alpha in (0.05, 0.1, 0.2, 0.34):
        m = ABMetric(4 * math.pi ** 2 * b * alpha, b)
        cert = negative_section(m)
        sym = regime1_S(alpha, b)
        worst = max(worst, rel_err(cert.S, sym))
        ok &= cert.S < 0 and cert.regime == "small-alpha"
        rows.append({"alpha": alpha, "S": cert.S})
    for r in (0.35, 0.6, 1.0, 1.3):
        m = ABMetric(4 * math.pi ** 2 * b * r, b)
        cert = negative_section(m)
        sym = regime2_S(r, 1, b)
        worst = max(worst, rel_err(cert.S, sym))
        ok &= cert.S < 0 and cert.regime == "r-construction" and cert.j == 1
        rows.append({"r": r, "S": cert.S})
    ok &= worst < tol
    return ("S < 0, rel err 0", f"max S {max(x['S'] for x in rows):.4g}, rel err {worst:.3g}", ok,
            {"sections": rows, "max_rel_err": worst})


def _much(tol):
    vals = {}
    for k in (1, 2):
        for c in (0.5, 1.0, 2.0):
            u, v = much_example(c, k)
            vals[f"k={k},c={c:g}"] = curvature_S(much_backend(c), u, v).S
    ok = all(s < 0 for s in vals.values())
    return "S < 0", f"max S {max(vals.values()):.4g}", ok, vals


def _h1_sphere(tol):
    rng = np.random.default_rng(41)
    m = hs_backend()
    worst = 0.0
    for _ in range(50):
        u = random_trigpoly(rng, int(rng.integers(1, 6)), mean_zero=True)
        v = random_trigpoly(rng, int(rng.integers(1, 6)), mean_zero=True)
        worst = max(worst, rel_err(curvature_S(m, u, v).S, sphere_prediction(m, u, v)))
    return "S = Gram/4", f"max rel err {worst:.3g}", worst < tol, {"max_rel_err": worst}


# ---------------------------------------------------------------------------
# curvature on the torus


def _l2_torus(tol):
    f = TrigPoly.sin(1)
    g = TrigPoly.sin(1) ** 2
    P = (1.0, 1.0)
    mixed = burgers_curvature(1.0, field_dx(f, P), field_dy(g, P))
    target = -15 * math.pi ** 2 / 16
    err_mixed = rel_err(mixed, target)
    err_mixed_closed = rel_err(burgers_mixed_closed(1.0, f, g), target)
    rng = np.random.default_rng(72)
    worst = 0.0
    nonneg = True
    zero = TrigPoly.zero(2, P)
    for _ in range(50):
        p = random_trigpoly(rng, int(rng.integers(1, 5)))
        q = random_trigpoly(rng, int(rng.integers(1, 5)))
        u = VectorField(x_field(p, P), zero)
        v = VectorField(x_field(q, P), zero)
        s = burgers_curvature(1.0, u, v)
        ref = burgers_x_only_closed(1.0, p, q)
        nonneg &= s >= -1e-12 * max(1.0, abs(ref))
        worst = max(worst, abs(s - ref) / max(abs(ref), 1e-12))
    ok = err_mixed < tol and err_mixed_closed < tol and worst < tol and nonneg
    return ("-15 pi^2/16 and x-only = closed form >= 0",
            f"mixed {mixed:.12g}, x-only rel err {worst:.3g}", ok,
            {"mixed": mixed, "target": target, "x_only_rel_err": worst, "x_only_nonnegative": nonneg})


def _abc(tol):
    worst = 0.0
    rows = {}
    for a, b, c in [(1.0, 1.0, 1.0), (0.0, 1.0, 1.0), (1.0, 0.0, 1.0)]:
        m = ABCMetric(a, b, c)
        for j in (1, 2):
            k = 2 * math.pi * j
            u, v = abc_sin_pair(j)
            s = curvature_S(m, u, v).S
            ref = abc_closed_form(a, b, c, k)
            worst = max(worst, rel_err(s, ref))
            if a == 0:
                worst = max(worst, rel_err(s, abc_closed_form_a0(c, k)))
            rows[f"a={a:g},b={b:g},c={c:g},k={j}*2pi"] = s
    return "rational closed form", f"max rel err {worst:.3g}", worst < tol, {"S": rows, "max_rel_err": worst}


def _admissible_pairs(count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = tuple(int(x) for x in rng.integers(-3, 4, size=2))
        q = tuple(int(x) for x in rng.integers(-3, 4, size=2))
        vecs = [p, q, (p[0] + q[0], p[1] + q[1]), (p[0] - q[0], p[1] - q[1])]
        if any(w == (0, 0) for w in vecs) or p[0] * q[1] - p[1] * q[0] == 0:
            continue
        out.append((p, q))
    return out


def _lambda_closed(tol):
    worst = 0.0
    for F in ("l2", "biharmonic", "one-plus-l2"):
        m = LambdaMetric(F)
        for p, q in _admissible_pairs(30, 84):
            s = curvature_S(m, stream_cos(p), stream_cos(q)).S
            ref = lambda_curvature_closed(m.F, 2 * np.pi * np.array(p), 2 * np.pi * np.array(q))
            worst = max(worst, rel_err(s, ref))
    bih = LambdaMetric("biharmonic").F
    pos = lambda_curvature_closed(bih, (10 * math.pi, 0.0), (8 * math.pi, 2 * math.pi))
    neg = lambda_curvature_closed(bih, (2 * math.pi, 0.0), (0.0, 2 * math.pi))
    ok = worst < tol and pos > 0 and neg < 0
    return ("closed form = engine; signs +, -", f"max rel err {worst:.3g}; signs {pos:+.3g}, {neg:+.3g}", ok,
            {"max_rel_err": worst, "positive_example": pos, "negative_example": neg})


def _arnold(tol):
    m = LambdaMetric("l2")
    ratios = []
    for p, q in _admissible_pairs(8, 9):
        s = curvature_S(m, stream_cos(p), stream_cos(q)).S
        ratios.append(s / arnold_T2_reference(2 * np.pi * np.array(p), 2 * np.pi * np.array(q)))
    ratios = np.array(ratios)
    spread = float((ratios.max() - ratios.min()) / abs(ratios.mean()))
    k40 = arnold_limit_check(40) / ARNOLD_LIMIT
    k80 = arnold_limit_check(80) / ARNOLD_LIMIT
    ok = spread < tol and abs(k40 - 1) < 0.05 and abs(k80 - 1) < 0.02
    return ("constant ratio; K -> 9/(8 pi^2)",
            f"ratio {ratios.mean():.12g} (spread {spread:.2g}); K/limit {k40:.5f} (k=40), {k80:.5f} (k=80)", ok,
            {"ratio": float(ratios.mean()), "spread": spread, "K_over_limit_k40": k40, "K_over_limit_k80": k80})


# ---------------------------------------------------------------------------
# semidirect embedding


def _semidirect(tol):
    rng = np.random.default_rng(105)
    worst = {"duality": 0.0, "ambient": 0.0, "rewrite": 0.0, "gauss_codazzi": 0.0}
    for a, b in AB_PARAMS:
        m = SemidirectMetric(a, b)
        ab = m.ab_metric()
        for _ in range(34):
            deg = lambda: int(rng.integers(1, 5))  # noqa: E731
            x, y, z = (SemidirectElement(random_trigpoly(rng, deg()), random_trigpoly(rng, deg())) for _ in range(3))
            scale3 = math.sqrt(m.norm2(x) * m.norm2(y) * m.norm2(z)) * 2 * math.pi * 5
            worst["duality"] = max(worst["duality"], abs(duality_residual(m, x, y, z)) / scale3)
            s_gen = curvature_S(m, x, y).S
            sc = max(abs(s_gen), 1e-12 * m.norm2(x) * m.norm2(y))
            worst["ambient"] = max(worst["ambient"], abs(ambient_curvature(m, x, y) - s_gen) / sc)
            u, v = random_trigpoly(rng, deg()), random_trigpoly(rng, deg())
            s = curvature_ab_direct(ab, u, v)
            sc = max(abs(s), 1e-12 * ab.norm2(u) * ab.norm2(v))
            worst["rewrite"] = max(worst["rewrite"], max(abs(r) for r in rewrite_check(ab, u, v)) / sc)
            worst["gauss_codazzi"] = max(worst["gauss_codazzi"], abs(gauss_codazzi(m, u, v) - s) / sc)
    top = max(worst.values())
    return "0", ", ".join(f"{k} {v:.2g}" for k, v in worst.items()), top < tol, worst


# ---------------------------------------------------------------------------
# dynamics


def _dynamics(tol):
    out = {}
    ch = integrate(EquationSpec.camassa_holm(1, 1, N=64), 0.1 * TrigPoly.cos(1), 1e-3, 1.0)
    out["ch_drift"] = ch.max_drift
    half = integrate(EquationSpec.camassa_holm(1, 1, N=32), 0.1 * TrigPoly.cos(1), 1e-3, 1.0)
    out["galerkin_N32_vs_N64"] = (half.final() - ch.final()).max_abs_coefficient()
    drifts = []
    for dt in (0.05, 0.025, 0.0125, 0.00625):
        tr = integrate(EquationSpec.camassa_holm(1, 1, N=32), 0.3 * TrigPoly.cos(1), dt, 1.0)
        drifts.append(tr.max_drift)
    orders = [math.log2(drifts[i] / drifts[i + 1]) for i in range(3)]
    out["ch_refinement_orders"] = orders
    kdv = integrate(EquationSpec.kdv(1.0, N=32), TrigPoly.cos(1), 2e-4, 1.0)
    out["kdv_l2_drift"] = kdv.max_drift
    out["kdv_mean_drift"] = float(np.abs(kdv.monitors["mean"] - kdv.monitors["mean"][0]).max())
    hs = integrate(EquationSpec.hunter_saxton(N=64), 0.1 * TrigPoly.cos(1) + 0.05 * TrigPoly.sin(2), 1e-3, 1.0)
    out["hs_drift"] = hs.max_drift
    bt = integrate(EquationSpec.burgers(1.0, N=128), TrigPoly.sin(1), 1e-4, 0.065)
    fm = flow_map(bt, n_particles=256)
    out["burgers_breakdown_over_exact"] = (fm.breakdown_time / BURGERS_BREAKDOWN
                                           if fm.breakdown_time is not None else None)
    ok = (out["ch_drift"] < tol and out["kdv_l2_drift"] < tol and out["kdv_mean_drift"] < tol
          and out["hs_drift"] < tol and out["galerkin_N32_vs_N64"] < 1e-8
          and all(3.5 <= q <= 5.0 for q in orders)
          and out["burgers_breakdown_over_exact"] is not None
          and abs(out["burgers_breakdown_over_exact"] - 1) < 0.05)
    ratio = out["burgers_breakdown_over_exact"]
    computed = (f"CH {out['ch_drift']:.2g}, KdV {out['kdv_l2_drift']:.2g}/{out['kdv_mean_drift']:.2g}, "
                f"HS {out['hs_drift']:.2g}, order {min(orders):.2f}-{max(orders):.2f}, "
                f"Burgers t/t* {'none' if ratio is None else f'{ratio:.4f}'}")
    return "drift < tol, order ~4, t* = 1/(6 pi)", computed, ok, out


def _stability(tol):
    out = {}
    lam = (1.0, 2.0, 3.0)
    body = RigidBody(lam)
    u0 = np.array([0.0, 1.0, 0.0])
    J = np.empty((3, 3))
    h = 1e-6
    for i in range(3):
        e = np.eye(3)[i]
        J[:, i] = (body.euler_rhs(u0 + h * e) - body.euler_rhs(u0 - h * e)) / (2 * h)
    eig = float(np.max(np.linalg.eigvals(J).real))
    run = jacobi_linearized(EquationSpec.rigid_body(lam), u0, [1e-3, 0.0, 0.0], dt=1e-2, T=10.0)
    rate = run.growth_rate()
    out["eigenvalue"] = eig
    out["growth_rate"] = rate
    bounded = []
    for axis in ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]):
        r = jacobi_linearized(EquationSpec.rigid_body(lam), axis, [0.0, 0.3, 0.3], dt=1e-2, T=50.0)
        bounded.append(float(r.z_norm.max() / r.z_norm[0]))
    out["stable_axis_max_growth"] = bounded
    g1, g2, ratio = fd_ratio(EquationSpec.camassa_holm(1, 1, N=32), 0.1 * TrigPoly.cos(1), TrigPoly.sin(2))
    out["fd_ratio"] = ratio
    out["cartan"] = cartan_check(lam, [0.3, 1.0, 0.2], [1.0, 0.5, -0.4])
    out["ad_conjugate"] = ad_conjugate_check(lam, [0.3, 1.0, 0.2], [1.0, 0.5, -0.4]).residual
    ok = (abs(rate / eig - 1) < 0.05 and max(bounded) < 10.0 and 1.8 <= ratio <= 2.2
          and out["cartan"] < tol)
    computed = (f"rate {rate:.5f} vs {eig:.5f}, stable growth {max(bounded):.3g}, "
                f"FD ratio {ratio:.4f}, Cartan {out['cartan']:.2g}")
    return "rate = eigenvalue, bounded, ratio ~2, Cartan ~0", computed, ok, out


def _so3(tol):
    lam = (0.8, 1.0, 1.2)
    body = RigidBody(lam)
    c1, c3, c13 = so3_form_coefficients(lam)
    e1, e2, e3 = np.eye(3)
    k1 = float(body.riemann(e1, e2, e2) @ (body.lam * e1))
    k3 = float(body.riemann(e3, e2, e2) @ (body.lam * e3))
    k13 = float(body.riemann(e1 + e3, e2, e2) @ (body.lam * (e1 + e3))) - k1 - k3
    consistency = max(abs(c1 - k1), abs(c3 - k3), abs(c13 - k13)) / max(abs(c1), abs(c3))
    cartan = cartan_check(lam, [0.2, 1.0, -0.3], [0.5, 0.1, 1.0])
    d1, d3 = displayed_so3_form(lam)
    ok = consistency < 1e-12 and cartan < 1e-4
    details = {"engine_x1": c1, "engine_x3": c3, "engine_x1x3": c13, "display_x1": d1, "display_x3": d3,
               "connection_consistency": consistency, "cartan": cartan,
               "display_agrees_x1": math.isclose(c1, d1, rel_tol=1e-9),
               "display_agrees_x3": math.isclose(c3, d3, rel_tol=1e-9),
               "sign_disagreement_x3": (c3 > 0) != (d3 > 0)}
    computed = (f"engine ({c1:.6g}, {c3:.6g}) vs display ({d1:.6g}, {d3:.6g}); "
                f"Koszul gap {consistency:.2g}, Cartan {cartan:.2g}")
    return "engine self-consistent", computed, ok, details


CHECKS = [
    Check("ab-mode-pairs", "a-b metric: pairs of pure modes of distinct frequency", 1e-9, _mode_pairs),
    Check("ab-christoffel-form", "a-b metric: Christoffel form of the curvature", 1e-9, _christoffel_form),
    Check("ab-negative-sections", "a-b metric: explicit negatively curved planes", 1e-8, _negative_sections),
    Check("much-negative", "muCH metric: negatively curved plane", 0.0, _much),
    Check("h1-sphere", "homogeneous H1 metric: constant curvature 1/4", 1e-8, _h1_sphere),
    Check("l2-torus", "L2 metric on torus fields", 1e-9, _l2_torus),
    Check("abc-torus", "a-b-c metric on torus fields: sin(kx) pair", 1e-9, _abc),
    Check("lambda-closed-form", "Lambda metric on stream functions: cosine pairs", 1e-10, _lambda_closed),
    Check("arnold-reference", "L2 volumorphisms: Arnold's formula and high-frequency limit", 1e-8, _arnold),
    Check("semidirect-embedding", "semidirect product embedding and Gauss-Codazzi", 1e-9, _semidirect),
    Check("dynamics", "Galerkin integrators: invariants, order, Burgers breakdown", 1e-6, _dynamics),
    Check("stability", "rigid body and Jacobi fields", 1e-4, _stability),
    Check("so3-form", "rigid body curvature form at lambda = (4/5, 1, 6/5)", 1e-4, _so3),
]


@dataclass
class VerifyReport:
    checks: list[CheckResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "seconds": round(self.seconds, 3),
                "checks": [asdict(c) for c in self.checks]}

    def to_json(self, timings: bool = False) -> str:
        d = self.to_dict()
        if not timings:
            d.pop("seconds")
            for c in d["checks"]:
                c.pop("seconds")
        return json.dumps(d, indent=2, sort_keys=True, default=_jsonable)

    def table(self) -> str:
        width = max(len(c.id) for c in self.checks) if self.checks else 2
        lines = [f"{'id':<{width}}  result  tolerance  computed"]
        for c in self.checks:
            lines.append(f"{c.id:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  {c.tolerance:<9.2g}  {c.computed}")
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def run_check(check: Check, tol: float | None = None) -> CheckResult:
    t = check.tolerance if tol is None else tol
    start = time.perf_counter()
    try:
        expected, computed, ok, details = check.run(t)
    except Exception as exc:  # a broken check is a failed check
        expected, computed, ok, details = "no error", f"{type(exc).__name__}: {exc}", False, {}
    return CheckResult(check.id, check.anchor, expected, computed, t, bool(ok),
                       time.perf_counter() - start, details)


def select(only: str | None = None) -> list[Check]:
    if not only:
        return list(CHECKS)
    return [c for c in CHECKS if only in c.id]


def run_verify(only: str | None = None, tol: float | None = None) -> VerifyReport:
    start = time.perf_counter()
    results = [run_check(c, tol) for c in select(only)]
    return VerifyReport(results, time.perf_counter() - start)
