"""Quantitative checks of the asymptotic layer claims, aggregated into a report.

All tolerances live in :data:`DEFAULT_TOLERANCES` and may be overridden from a
JSON object with the same keys. Every check is deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .caputo import Mesh, apply, build_operator
from .figures import fig1_data, fig2_data
from .layers import (
    conv_layer_correction,
    conv_layer_limit,
    fit_theta_conv,
    mu_reac,
    reac_layer0,
    vstar_half_closed,
    vstar_half_series,
)
from .laplace import conv_layer_transform, talbot_invert
from .output import fmt
from .solver import ProblemSpec, converge_study, exact_solution, solve_bvp
from .specfun import erfc, gamma, mittag_leffler

__all__ = ["Check", "DEFAULT_EPS", "DEFAULT_TOLERANCES", "VerificationReport", "load_tolerances", "run_verification"]

DEFAULT_EPS = (1e-2, 1e-3, 1e-4)
SQRT_PI = math.sqrt(math.pi)

DEFAULT_TOLERANCES: dict[str, float] = {
    "ml_identity": 1e-9,
    "ml_cosine": 1e-10,
    "vstar_equivalence": 1e-8,
    "transform_oracle": 1e-6,
    "theta_scaling": 1e-3,
    "theta_bound": 1.0,
    "vstar_growth": 0.02,
    "limit_law": 0.01,
    "limit_rate_per_decade": 5.0,
    "non_exponential": 0.05,
    "reac_decay": 0.01,
    "mu_scaling": 0.01,
    "mu_ratio": 0.05,
    "conv_solver": 0.05,
    "classical_solver": 0.02,
    "reac_self_convergence": 1.4,
    "reac_indicator_level": 0.1,
    "reac_indicator_width": 15.0,
    "caputo_exactness": 1e-11,
    "caputo_refinement": 1.5,
    "figure_v1_level": 1e-3,
}

RELATIONS = {
    "abs": lambda m, t, tol: abs(m - t) <= tol,
    "rel": lambda m, t, tol: abs(m - t) <= tol * abs(t),
    "le": lambda m, t, tol: m <= t,
    "lt": lambda m, t, tol: m < t,
    "ge": lambda m, t, tol: m >= t,
    "gt": lambda m, t, tol: m > t,
}


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    target: float
    tolerance: float
    relation: str
    claim: str
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        ok = bool(np.isfinite(self.measured)) and RELATIONS[self.relation](self.measured, self.target, self.tolerance)
        object.__setattr__(self, "passed", ok)


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def table(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"{'check':<{width}}  {'measured':>13}  rel  {'target':>13}  {'tolerance':>9}  result  claim"]
        for c in self.checks:
            lines.append(
                f"{c.name:<{width}}  {c.measured:>13.6e}  {c.relation:<3}  {c.target:>13.6e}  "
                f"{c.tolerance:>9.2e}  {'PASS' if c.passed else 'FAIL':<6}  {c.claim}"
            )
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'} ({len(self.checks) - len(self.failures())}/{len(self.checks)})")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        header = "name,measured,target,tolerance,relation,pass,claim\n"
        rows = [
            f"{c.name},{fmt(c.measured)},{fmt(c.target)},{fmt(c.tolerance)},{c.relation},{int(c.passed)},\"{c.claim}\"\n"
            for c in self.checks
        ]
        return header + "".join(rows)


def load_tolerances(path: str | None) -> dict[str, float]:
    tol = dict(DEFAULT_TOLERANCES)
    if path is None:
        return tol
    with open(path, encoding="utf-8") as fh:
        override = json.load(fh)
    if not isinstance(override, dict):
        raise ValueError("tolerance file must hold a JSON object")
    unknown = sorted(set(override) - set(tol))
    if unknown:
        raise ValueError(f"unknown tolerance keys: {', '.join(unknown)}")
    tol.update({k: float(v) for k, v in override.items()})
    return tol


def _rel_err(a, b, scale=None) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    s = np.abs(b) if scale is None else np.asarray(scale, dtype=float)
    return float(np.max(np.abs(a - b) / s))


# individual check groups ------------------------------------------------


def ml_identity_errors() -> dict[str, float]:
    """Maximum relative errors of the four Mittag-Leffler identities."""
    out = {}
    z = np.linspace(-20.0, 20.0, 81)
    out["exp"] = _rel_err([mittag_leffler(1.0, 1.0, v) for v in z], np.exp(z))
    z = np.linspace(0.0, 10.0, 101)
    out["cos"] = float(np.max(np.abs([mittag_leffler(2.0, 1.0, -v * v) - math.cos(v) for v in z])))
    z = np.linspace(-5.0, 2.0, 71)
    ref = np.array([math.exp(v * v) * erfc(-v) for v in z])
    out["erfc"] = _rel_err([mittag_leffler(0.5, 1.0, v) for v in z], ref)
    worst = 0.0
    for a in (0.5, 1.0, 1.5, 2.0):
        for b in (0.5, 1.0, 1.5, 2.0):
            zmax = min(30.0**a, 50.0)
            for v in np.concatenate([np.linspace(-50.0, 0.0, 11), np.linspace(0.0, zmax, 11)[1:]]):
                lhs = mittag_leffler(a, b, v)
                rhs_ml = v * mittag_leffler(a, a + b, v)
                rg = 1.0 / gamma(b)
                # relative to the size of the terms (exact cancellation possible)
                scale = abs(lhs) + abs(rhs_ml) + abs(rg)
                worst = max(worst, abs(lhs - rhs_ml - rg) / scale)
    out["recurrence"] = worst
    return out


def vstar_equivalence_error() -> float:
    xi = np.linspace(0.0, 30.0, 300)
    series = vstar_half_series(xi, 200)
    closed = vstar_half_closed(xi)
    return float(np.max(np.abs(series - closed) / (1.0 + np.abs(closed))))


def transform_oracle_error() -> float:
    """Inverted conv transform vs ``1 + theta xi E_{1/2,2}(-sqrt xi)``.

    Errors are scaled by ``1 + |theta| V*`` so zero crossings of the layer
    function do not inflate the measure.
    """
    worst = 0.0
    for theta in (-1.0, -0.1, 0.0, 0.5):
        fn = conv_layer_transform(0.5, theta)
        for xi in np.linspace(0.1, 10.0, 34):
            vstar = xi * mittag_leffler(0.5, 2.0, -math.sqrt(xi))
            ref = 1.0 + theta * vstar
            got = talbot_invert(fn, float(xi))
            worst = max(worst, abs(got - ref) / (1.0 + abs(theta) * abs(vstar)))
    return worst


def exp_fit_misfit(eps: float = 1e-4) -> float:
    """Max-norm misfit of the least-squares fit ``c exp(-x/delta)`` on [0.01, 0.99]."""
    x = np.linspace(0.01, 0.99, 197)
    v = conv_layer_correction(x, eps)
    best = math.inf
    for d0 in (0.01, 0.1, 1.0):
        fit = least_squares(lambda p: p[0] * np.exp(-x / p[1]) - v, [1.0, d0], bounds=([-np.inf, 1e-8], [np.inf, np.inf]))
        best = min(best, float(np.max(np.abs(fit.fun))))
    return best


def caputo_exactness_error() -> float:
    worst = 0.0
    for n in (16, 64, 256):
        for mesh in (Mesh.uniform(n), Mesh.graded(n, 2.0, "left"), Mesh.graded(n, 2.0, "both"), Mesh.graded(n, 3.0, "right")):
            x = mesh.nodes
            for beta in (1.25, 1.5, 1.75):
                op = build_operator(mesh, beta)
                for u, d in ((np.ones_like(x), 0.0 * x), (x, 0.0 * x), (x * x, 2.0 / gamma(3.0 - beta) * x ** (2.0 - beta))):
                    worst = max(worst, float(np.max(np.abs(apply(op, u) - d))))
    return worst


def caputo_refinement_factor(beta: float = 1.5) -> float:
    errors = []
    for n in (64, 128, 256, 512):
        mesh = Mesh.uniform(n)
        x = mesh.nodes
        exact = gamma(3.5) / gamma(3.5 - beta) * x ** (2.5 - beta)
        errors.append(float(np.max(np.abs(apply(build_operator(mesh, beta), x**2.5) - exact))))
    return min(a / b for a, b in zip(errors, errors[1:]))


def reaction_properties(eps: float, ns=(128, 256, 512, 1024), reference_n: int = 2048) -> dict[str, float]:
    alpha = 0.5
    p = ProblemSpec.reaction(alpha, eps)
    rows = converge_study(p, ns, reference_n=reference_n)
    factors = [a.error / b.error for a, b in zip(rows, rows[1:])]
    sol = solve_bvp(p, Mesh.graded(ns[-1], 2.0, "both"))
    interior = sol.values[1:-1]
    violation = float(max(np.max(interior) - 0.0, -1.0 - np.min(interior), 0.0))
    x = sol.x
    indicator = np.abs(sol.values + 1.0 - reac_layer0(x / eps ** (1.0 / (2.0 - alpha)), alpha))
    return {
        "bc": float(abs(sol.values[0]) + abs(sol.values[-1])),
        "range_violation": violation,
        "min_factor": min(factors),
        "indicator": indicator,
        "x": x,
    }


# report -----------------------------------------------------------------


def run_verification(eps_list: Sequence[float] = DEFAULT_EPS, tolerances: dict | None = None) -> VerificationReport:
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)
    eps_list = sorted({float(e) for e in eps_list}, reverse=True)
    if not eps_list or any(not 0.0 < e < 1.0 for e in eps_list):
        raise ValueError("eps values must lie in (0, 1)")
    checks: list[Check] = []
    add = checks.append

    ml = ml_identity_errors()
    add(Check("ml_exp", ml["exp"], 0.0, tol["ml_identity"], "abs", "E_{1,1}(z) = exp(z)"))
    add(Check("ml_cos", ml["cos"], 0.0, tol["ml_cosine"], "abs", "E_{2,1}(-z^2) = cos(z)"))
    add(Check("ml_erfc", ml["erfc"], 0.0, tol["ml_identity"], "abs", "E_{1/2,1}(z) = exp(z^2) erfc(-z)"))
    add(Check("ml_recurrence", ml["recurrence"], 0.0, tol["ml_identity"], "abs", "E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)"))
    add(Check("vstar_series_vs_closed", vstar_equivalence_error(), 0.0, tol["vstar_equivalence"], "abs",
              "power series of V* equals its Mittag-Leffler/erfc closed form"))
    add(Check("transform_oracle", transform_oracle_error(), 0.0, tol["transform_oracle"], "abs",
              "Laplace inversion of the layer IVP transform reproduces 1 + theta V*"))

    th = fit_theta_conv(1e-4)
    add(Check("theta_scaling", th / 1e-4, -SQRT_PI / 2.0, tol["theta_scaling"], "rel", "theta = O(eps), constant -sqrt(pi)/2"))
    bound = max(abs(fit_theta_conv(e)) / e for e in eps_list)
    add(Check("theta_bounded", bound, tol["theta_bound"], 0.0, "le", "theta = O(eps)"))
    for e in eps_list:
        add(Check(f"vstar_growth_eps={e:g}", e * vstar_half_closed(1.0 / e**2), 2.0 / SQRT_PI, tol["vstar_growth"], "rel",
                  "V*(1/eps^2) = O(1/eps), constant 2/sqrt(pi)"))

    devs = {}
    for x0 in (0.04, 0.25, 0.64):
        for e in eps_list:
            devs[x0, e] = abs(conv_layer_correction(x0, e) - conv_layer_limit(x0))
            add(Check(f"limit_law_x0={x0:g}_eps={e:g}", devs[x0, e], 0.0, tol["limit_law"], "abs",
                      "layer correction tends to 1 - sqrt(x0)"))
        for e1, e2 in zip(eps_list, eps_list[1:]):
            need = tol["limit_rate_per_decade"] ** math.log10(e1 / e2)
            add(Check(f"limit_rate_x0={x0:g}_eps={e1:g}->{e2:g}", devs[x0, e1] / devs[x0, e2], need, 0.0, "ge",
                      "deviation from 1 - sqrt(x0) shrinks proportionally to eps"))

    add(Check("non_exponential_layer", exp_fit_misfit(1e-4), tol["non_exponential"], 0.0, "gt",
              "the fractional layer is not a classical exponential layer"))

    for xi in (1e2, 1e3, 1e4):
        add(Check(f"reac_decay_xi={xi:g}", reac_layer0(xi, 0.5) * math.sqrt(math.pi * xi), 1.0, tol["reac_decay"], "abs",
                  "left reaction layer decays like xi^(alpha-1)"))
    mu6 = mu_reac(1e-6, 0.5)
    add(Check("mu_scaling", mu6 * 1e-6 ** (-1.0 / 3.0) * SQRT_PI, 1.0, tol["mu_scaling"], "abs",
              "mu = O(eps^((1-alpha)/(2-alpha)))"))
    add(Check("mu_ratio", mu_reac(1e-3, 0.5) / mu6, 10.0, tol["mu_ratio"], "rel", "mu = O(eps^((1-alpha)/(2-alpha)))"))

    conv = ProblemSpec.convection(0.5, 1e-2)
    rows = converge_study(conv, (128, 256, 512, 1024), mesh_kind="graded", r=2.0, side="left")
    add(Check("conv_solver_error_N=1024", rows[-1].error, tol["conv_solver"], 0.0, "le",
              "u = (x - 1) + layer correction solves the convection problem"))
    add(Check("conv_solver_error_ratio", max(b.error / a.error for a, b in zip(rows, rows[1:])), 1.0, 0.0, "lt",
              "u = (x - 1) + layer correction solves the convection problem"))
    cl = ProblemSpec.classical(1e-2)
    cl_sol = solve_bvp(cl, Mesh.shishkin(1024, 1e-2))
    cl_err = float(np.max(np.abs(cl_sol.values - exact_solution(cl)(cl_sol.x))))
    add(Check("classical_layer", cl_err, tol["classical_solver"], 0.0, "le", "classical limit has an exponential layer exp(-x/eps)"))

    e = 1e-3
    reac = reaction_properties(e)
    add(Check("reac_boundary_values", reac["bc"], 0.0, 0.0, "abs", "u(0) = u(1) = 0"))
    add(Check("reac_range", reac["range_violation"], 0.0, 0.0, "abs", "-1 <= u <= 0 for f = -1"))
    add(Check("reac_self_convergence", reac["min_factor"], tol["reac_self_convergence"], 0.0, "ge",
              "discrete reaction solution converges under refinement"))
    width = tol["reac_indicator_width"] * e ** (2.0 / 3.0)
    flagged = reac["x"][reac["indicator"] > tol["reac_indicator_level"]]
    dist = float(np.max(1.0 - flagged)) if flagged.size else 0.0
    add(Check("reac_right_layer_location", dist, width, 0.0, "le", "different layers at x = 0 and x = 1"))

    add(Check("caputo_exactness", caputo_exactness_error(), 0.0, tol["caputo_exactness"], "abs",
              "Caputo derivative of order in (1,2) is exact on quadratics"))
    add(Check("caputo_refinement", caputo_refinement_factor(), tol["caputo_refinement"], 0.0, "ge",
              "power rule D^beta x^p = Gamma(p+1)/Gamma(p+1-beta) x^(p-beta)"))

    for name, value, target, key, rel, claim in _figure_checks(tol):
        add(Check(name, value, target, tol.get(key, 0.0) if key else 0.0, rel, claim))
    return VerificationReport(tuple(checks))


def _figure_checks(tol: dict):
    f1a, f2a = fig1_data(), fig2_data()
    f1b, f2b = fig1_data(), fig2_data()
    same = all(a.csv() == b.csv() and a.svg() == b.svg() for a, b in ((f1a, f1b), (f2a, f2b)))
    yield ("figures_deterministic", float(same), 1.0, None, "abs", "figures are reproducible")
    bnd = max(abs(f.column("u")[i]) for f in (f1a, f2a) for i in (0, -1))
    yield ("figures_boundary_rows", bnd, 0.0, None, "abs", "homogeneous boundary values")
    x = f1a.column("x")
    eps = 1e-2
    far = 1.0 - x > 2.0 * eps ** (2.0 / 3.0) * math.log(1.0 / eps)
    yield ("fig1_v1_localised", float(np.max(f1a.column("v1")[far])), tol["figure_v1_level"], None, "le",
           "right layer lives within O(eps^(2/3) ln(1/eps)) of x = 1")
    yield ("fig1_v0_near_left", float(f1a.column("v0")[x <= eps].min()), 0.5, None, "ge", "left layer V0 is large near x = 0")
    lc = f2a.column("layer_correction")
    yield ("fig2_layer_unit_at_0", float(lc[0]), 1.0, None, "abs", "layer correction equals 1 at x = 0")
