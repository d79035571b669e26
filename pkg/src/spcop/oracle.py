"""Construction-based simulators and bracketing integrators used as ground
truth against the main estimators.

Nothing here reuses the copula samplers or the eta estimators; agreement
between the two routes is evidence, not tautology. Shared surface is limited
to the Distribution type and the copula cdf (for the certified grid bracket).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .copula import (CopulaSpec, Independence, MarshallOlkinConnecting,
                     OrderStatistics, Shuffle, sample_uv)
from .dist import Distribution, Uniform
from .errors import SpecError
from .rng import make_stream, open_uniform

__all__ = [
    "LoadSharingModel", "load_sharing_sample", "load_sharing_survival",
    "load_sharing_checks", "order_stats_triple_sample", "order_stats_checks",
    "mo_construction_sample", "mo_checks", "mo_survival_eta_audit",
    "grid_eta_oracle", "run_verification",
]


@dataclass(frozen=True)
class LoadSharingModel:
    """Exponential pair under load sharing: Y ~ exp(lam); X runs at hazard 1
    while Y is alive and at hazard beta afterwards. Standing assumption
    1 < lam < beta < 1 + lam."""

    lam: float
    beta: float
    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha != 1.0:
            raise SpecError("the load-sharing model fixes alpha = 1")
        if not (1.0 < self.lam < self.beta < 1.0 + self.lam):
            raise SpecError(
                f"need 1 < lam < beta < 1+lam, got lam={self.lam}, beta={self.beta}")


def load_sharing_sample(model: LoadSharingModel, n: int, seed: int):
    """(x, y) pairs via the hazard time change: X = E1 while E1 < Y, else
    Y + (E1 - Y)/beta."""
    rng = make_stream(seed)
    e1 = rng.exponential(1.0, n)
    y = rng.exponential(1.0 / model.lam, n)
    x = np.where(e1 < y, e1, y + (e1 - y) / model.beta)
    return x, y


def load_sharing_survival(model: LoadSharingModel, x):
    """Closed-form P(X > x)."""
    lam, beta = model.lam, model.beta
    k = lam / (1.0 + lam - beta)
    x = np.asarray(x, dtype=float)
    return (1.0 - k) * np.exp(-(1.0 + lam) * x) + k * np.exp(-beta * x)


def load_sharing_checks(model: LoadSharingModel, n: int, seed: int,
                        grid: int = 32) -> dict:
    """Differential checks for the load-sharing pair.

    Note the dominance check reports what the data shows: the closed-form
    survival of X crosses exp(-lam x) (at 2*ln3 for lam=2, beta=2.5), so X is
    *not* stochastically dominated by Y on the bulk of the support even though
    P(X <= Y) = 1/(1+lam) < 1/2.
    """
    x, y = load_sharing_sample(model, n, seed)
    p_le = float(np.mean(x <= y))
    p_expected = 1.0 / (1.0 + model.lam)
    se = math.sqrt(p_le * (1.0 - p_le) / n)

    # quantile-spaced grid of Y's scale covering the bulk of both laws
    qs = (np.arange(grid) + 0.5) / grid
    ts = -np.log1p(-qs) / model.lam
    emp_surv = np.array([np.mean(x > t) for t in ts])
    closed = load_sharing_survival(model, ts)
    surv_se = np.sqrt(np.maximum(emp_surv * (1.0 - emp_surv), 1e-12) / n)
    formula_dev = float(np.max(np.abs(emp_surv - closed)))

    bench = np.exp(-model.lam * ts)
    excess = emp_surv - bench  # > 0 means X survives more than Y there
    dominated = bool(np.all(excess <= 3.0 * surv_se))
    return {
        "p_x_le_y": p_le,
        "p_x_le_y_expected": p_expected,
        "p_x_le_y_ok": abs(p_le - p_expected) <= max(3.0 * se, 0.002),
        "survival_formula_max_dev": formula_dev,
        "survival_formula_ok": formula_dev <= 5.0 * float(np.max(surv_se)) + 1e-4,
        "st_dominated_by_y": dominated,
        "max_dominance_excess": float(np.max(excess)),
        "grid": [float(t) for t in ts],
    }


def order_stats_triple_sample(n: int, seed: int, base: Distribution = Uniform(0.0, 1.0)):
    """(t, x', x'') with t = min of two iid draws, x' their max, x'' the max
    of three more iid draws from the same base law."""
    rng = make_stream(seed)
    draws = base.quantile(open_uniform(rng, 5 * n).reshape(n, 5))
    t = np.minimum(draws[:, 0], draws[:, 1])
    x_prime = np.maximum(draws[:, 0], draws[:, 1])
    x_double = np.max(draws[:, 2:], axis=1)
    return t, x_prime, x_double


def order_stats_checks(n: int, seed: int, grid: int = 32) -> dict:
    t, xp, xpp = order_stats_triple_sample(n, seed)
    p1 = float(np.mean(t <= xp))
    p2 = float(np.mean(t <= xpp))
    # independent 1-D quadrature oracle for P(T <= X''): integral of
    # (1-(1-x)^2) d(x^3) over [0,1]
    xs = np.linspace(0.0, 1.0, 20001)
    integrand = (1.0 - (1.0 - xs) ** 2) * 3.0 * xs ** 2
    p2_oracle = float(np.trapezoid(integrand, xs))
    ts = (np.arange(grid) + 1.0) / (grid + 1.0)
    cdf_p = np.array([np.mean(xp <= s) for s in ts])
    cdf_pp = np.array([np.mean(xpp <= s) for s in ts])
    dkw = 4.0 / math.sqrt(n)
    st_ok = bool(np.all(cdf_p >= cdf_pp - 2.0 * dkw))
    return {
        "p_t_le_xprime": p1,
        "p_t_le_xprime_ok": p1 == 1.0,
        "p_t_le_xdouble": p2,
        "p_t_le_xdouble_oracle": p2_oracle,
        "p_t_le_xdouble_ok": abs(p2 - p2_oracle) <= max(0.002, 3.0 * math.sqrt(0.09 / n)),
        "xprime_st_xdouble": st_ok,
    }


def mo_construction_sample(alpha1: float, alpha2: float, n: int, seed: int):
    """Common-shock exponential construction: X1 = V ^ Z, X2 = W ^ Z with
    rates (1/a1 - 1, 1/a2 - 1, 1); the tie flag marks Z <= V ^ W."""
    if not (0.0 < alpha1 < 1.0 and 0.0 < alpha2 < 1.0):
        raise SpecError("alphas must lie in (0,1)")
    rng = make_stream(seed)
    v = rng.exponential(1.0 / (1.0 / alpha1 - 1.0), n)
    w = rng.exponential(1.0 / (1.0 / alpha2 - 1.0), n)
    z = rng.exponential(1.0, n)
    x1 = np.minimum(v, z)
    x2 = np.minimum(w, z)
    tie = z <= np.minimum(v, w)
    return x1, x2, tie


def mo_checks(alpha1: float, alpha2: float, n: int, seed: int) -> dict:
    x1, x2, tie = mo_construction_sample(alpha1, alpha2, n, seed)
    den = alpha1 + alpha2 - alpha1 * alpha2
    p_le, p_lt, p_eq = (float(np.mean(x1 <= x2)), float(np.mean(x1 < x2)),
                        float(np.mean(x1 == x2)))
    expect = {"p_le": alpha2 / den, "p_lt": (1.0 - alpha1) * alpha2 / den,
              "p_eq": alpha1 * alpha2 / den}
    tie_frac = float(np.mean(tie))

    def tol(p):
        # 0.002 is calibrated for n=1e6; keep 3-sigma coverage below that
        return max(0.002, 3.0 * math.sqrt(p * (1.0 - p) / n))

    # empirical copula of the construction vs the library's connecting sampler
    u1 = -np.expm1(-x1 / alpha1)
    v1 = -np.expm1(-x2 / alpha2)
    u2, v2, _, _ = sample_uv(MarshallOlkinConnecting(alpha1, alpha2), n, seed + 1)
    qs = np.linspace(1.0 / 16, 15.0 / 16, 15)
    emp1 = np.array([[np.mean((u1 <= a) & (v1 <= b)) for b in qs] for a in qs])
    emp2 = np.array([[np.mean((u2 <= a) & (v2 <= b)) for b in qs] for a in qs])
    dkw = 4.0 * (1.0 / math.sqrt(n) + 1.0 / math.sqrt(n))
    cop_dev = float(np.max(np.abs(emp1 - emp2)))
    return {
        "p_x1_le_x2": p_le, "p_x1_lt_x2": p_lt, "p_x1_eq_x2": p_eq,
        "expected": expect,
        "p_le_ok": abs(p_le - expect["p_le"]) <= tol(expect["p_le"]),
        "p_lt_ok": abs(p_lt - expect["p_lt"]) <= tol(expect["p_lt"]),
        "p_eq_ok": abs(p_eq - expect["p_eq"]) <= tol(expect["p_eq"]),
        "tie_fraction": tie_frac,
        "tie_matches_singular_mass": abs(tie_frac - expect["p_eq"]) <= tol(expect["p_eq"]),
        "copula_sampler_max_dev": cop_dev,
        "copula_sampler_ok": cop_dev <= dkw,
    }


def mo_survival_eta_audit(n: int, seed: int,
                          pairs=((0.4, 0.2), (0.2, 0.4), (0.3, 0.3))) -> dict:
    """Audit the piecewise closed form of eta for the survival-form copula.

    MC estimates come from the raw construction mapped through the survival
    functions (u = exp(-x/alpha)); each is compared against both branches of
    the piecewise formula. The diagonal is where the branches disagree, so the
    audit records which branch the measurement selects.
    """
    rows = []
    for i, (a1, a2) in enumerate(pairs):
        x1, x2, _ = mo_construction_sample(a1, a2, n, seed + i)
        u = np.exp(-x1 / a1)
        v = np.exp(-x2 / a2)
        est = float(np.mean(u <= v))
        tol = max(0.002, 3.0 * math.sqrt(est * (1.0 - est) / n))
        branch_le = 1.0 / (2.0 - a1)          # formula branch for a1 <= a2
        branch_gt = (1.0 - a2) / (2.0 - a2)   # formula branch for a1 > a2
        matches = ("alpha1<=alpha2" if abs(est - branch_le) <= tol else
                   "alpha1>alpha2" if abs(est - branch_gt) <= tol else "neither")
        rows.append({
            "alpha1": a1, "alpha2": a2, "mc_eta": est,
            "branch_le_value": branch_le, "branch_gt_value": branch_gt,
            "matching_branch": matches, "diagonal": a1 == a2,
        })
    off_ok = all(r["matching_branch"] != "neither" for r in rows if not r["diagonal"])
    diag = [r for r in rows if r["diagonal"]]
    diag_resolution = (
        "eta at alpha1=alpha2 equals 1/(2-alpha), the alpha1<=alpha2 branch limit"
        if all(r["matching_branch"] == "alpha1<=alpha2" for r in diag) else
        "diagonal measurement did not match the alpha1<=alpha2 branch")
    return {"rows": rows, "off_diagonal_ok": off_ok, "diagonal_resolution": diag_resolution}


def grid_eta_oracle(spec: CopulaSpec, g1: Distribution, g2: Distribution,
                    grid: int = 512):
    """Certified bracket (eta_low, eta_high) for eta(spec, g1, g2).

    Partitions [0,1]^2 into grid^2 cells, sums the copula mass of cells whose
    quantile images lie entirely inside {x1 <= x2} (lower bound) and adds the
    straddling cells' mass for the upper bound.
    """
    if grid < 16:
        raise SpecError("oracle grid must be at least 16")
    edges = np.linspace(0.0, 1.0, grid + 1)
    cc = np.asarray(spec.cdf(edges[:, None], edges[None, :]))
    masses = np.maximum(cc[1:, 1:] - cc[:-1, 1:] - cc[1:, :-1] + cc[:-1, :-1], 0.0)
    q1 = np.asarray(g1.quantile(edges))
    q2 = np.asarray(g2.quantile(edges))
    with np.errstate(invalid="ignore"):
        inside = q1[1:, None] <= q2[None, :-1]    # worst corner still inside
        outside = q1[:-1, None] > q2[None, 1:]    # best corner already outside
    # widen by the float-accumulation allowance of ~grid^2 mass roundings
    slack = 1e-9
    eta_low = float(np.sum(masses[inside])) - slack
    eta_high = float(1.0 - np.sum(masses[outside & ~inside])) + slack
    return max(min(eta_low, 1.0), 0.0), min(max(eta_high, eta_low), 1.0)


def run_verification(n: int = 10 ** 6, seed: int = 20240801) -> dict:
    """All oracle differential checks as a machine-readable report."""
    checks = []

    mo = mo_checks(0.4, 0.2, n, seed)
    checks.append({"name": "mo_probabilities", "passed": bool(
        mo["p_le_ok"] and mo["p_lt_ok"] and mo["p_eq_ok"] and mo["tie_matches_singular_mass"]),
        "detail": {k: mo[k] for k in ("p_x1_le_x2", "p_x1_lt_x2", "p_x1_eq_x2",
                                      "expected", "tie_fraction")}})
    checks.append({"name": "mo_vs_copula_sampler", "passed": bool(mo["copula_sampler_ok"]),
                   "detail": {"max_dev": mo["copula_sampler_max_dev"]}})

    audit = mo_survival_eta_audit(n, seed + 10)
    checks.append({"name": "mo_survival_eta_audit", "passed": bool(audit["off_diagonal_ok"]),
                   "detail": audit})

    ls = load_sharing_checks(LoadSharingModel(2.0, 2.5), n, seed + 20)
    checks.append({"name": "load_sharing_probability", "passed": bool(ls["p_x_le_y_ok"]),
                   "detail": {"p_x_le_y": ls["p_x_le_y"],
                              "expected": ls["p_x_le_y_expected"]}})
    checks.append({"name": "load_sharing_survival_formula",
                   "passed": bool(ls["survival_formula_ok"]),
                   "detail": {"max_dev": ls["survival_formula_max_dev"]}})
    checks.append({"name": "load_sharing_st_dominance", "passed": bool(ls["st_dominated_by_y"]),
                   "detail": {"max_dominance_excess": ls["max_dominance_excess"],
                              "note": "survival of X crosses exp(-lam x); "
                                      "dominance fails on the bulk of the support"}})

    os_checks = order_stats_checks(n, seed + 30)
    checks.append({"name": "order_stats_triple", "passed": bool(
        os_checks["p_t_le_xprime_ok"] and os_checks["p_t_le_xdouble_ok"]
        and os_checks["xprime_st_xdouble"]), "detail": os_checks})

    gu = Uniform(0.0, 1.0)
    brackets = []
    for name, spec, target, g in [
            ("independence", Independence(), 0.5, 256),
            ("shuffle_0.3", Shuffle(0.3), 0.3, 512),
            ("order_statistics", OrderStatistics(), 2.0 - math.pi / 2.0, 512)]:
        lo, hi = grid_eta_oracle(spec, gu, gu, g)
        brackets.append({"spec": name, "low": lo, "high": hi, "target": target,
                         "ok": lo - 1e-9 <= target <= hi + 1e-9})
    checks.append({"name": "grid_oracle_brackets",
                   "passed": all(b["ok"] for b in brackets),
                   "detail": {"brackets": brackets}})

    return {"n": n, "seed": seed, "passed": all(c["passed"] for c in checks),
            "checks": checks}
