"""Runtime-checkable certificates of the solvers' descent and rate guarantees.

Each check consumes a solver trace (plus, where needed, a high-accuracy
reference point) and returns a pass/fail result with its worst-case margin,
where positive margins mean the inequality held with room to spare.  The
checks deliberately recompute everything from recorded quantities so a
corrupted trace is caught rather than papered over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .accelerated import lambda_rate_bound
from .hierarchy import LevelStack
from .multigrid import CycleConfig, SolverTrace, cycle_work_units, vcycle


@dataclass
class CertificateResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}  margin={self.margin:.3e}"
        return text + (f"  ({self.detail})" if self.detail else "")


@dataclass
class CertificateReport:
    results: list[CertificateResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def extend(self, results):
        self.results.extend(results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]


def check_stage_monotonicity(trace: SolverTrace, rel_slack: float = 1e-12) -> CertificateResult:
    """Fine-level objective never increases across any stage boundary."""
    worst = np.inf
    for ct in trace.cycles:
        vals = ct.stage_objectives
        scale = max(1.0, abs(vals[0]))
        for a, b in zip(vals, vals[1:]):
            worst = min(worst, (a - b) / scale + rel_slack)
    passed = worst >= 0.0
    return CertificateResult("stage-monotonicity", bool(passed), float(worst),
                             f"{len(trace.cycles)} cycles")


def check_angle_condition(trace: SolverTrace, p_floor: float = 1e-10) -> CertificateResult:
    """<subgradient, correction> < 0 whenever the correction is nonzero."""
    worst = -np.inf
    counted = 0
    for ct in trace.cycles:
        if ct.correction_norms and ct.correction_norms[0] > p_floor:
            counted += 1
            worst = max(worst, ct.angle_products[0])
    if counted == 0:
        return CertificateResult("angle-condition", True, 0.0, "no nonzero corrections")
    return CertificateResult("angle-condition", bool(worst < 0.0), float(-worst),
                             f"{counted} corrections checked")


def check_smoothing_descent(trace: SolverTrace, slack: float = 1e-12) -> CertificateResult:
    """First smoothing step of each cycle obeys F(y) <= F(x) - ||G(x)||^2/(2L).

    G(x) is reconstructed from the stored step endpoints, G = L (x - y), so
    the check is independent of the solver's own bookkeeping.
    """
    worst = np.inf
    for ct in trace.cycles:
        F_x = ct.stage_objectives[0]
        G = ct.L_first * (ct.x_entry - ct.y_first)
        bound = F_x - float(G @ G) / (2.0 * ct.L_first)
        scale = max(1.0, abs(F_x))
        worst = min(worst, (bound - ct.F_y_first) / scale + slack)
    if worst is np.inf:
        worst = slack
    return CertificateResult("smoothing-sufficient-descent", bool(worst >= 0.0),
                             float(worst), f"{len(trace.cycles)} cycles")


def check_mgprox_sufficient_descent(trace: SolverTrace, x_star: np.ndarray,
                                    F_star: float, slack: float = 1e-8) -> CertificateResult:
    """Per cycle: F(x+) - F* <= (L/2)(||x - x*||^2 - ||y1 - x*||^2) + slack."""
    worst = np.inf
    for ct, F_next in zip(trace.cycles, trace.objectives):
        lhs = F_next - F_star
        dx = float(np.linalg.norm(ct.x_entry - x_star)) ** 2
        dy = float(np.linalg.norm(ct.y_first - x_star)) ** 2
        rhs = 0.5 * ct.L_first * (dx - dy)
        worst = min(worst, rhs - lhs + slack)
    return CertificateResult("mgprox-sufficient-descent", bool(worst >= 0.0),
                             float(worst), f"slack={slack:g}")


def check_one_over_k(trace: SolverTrace, x_star: np.ndarray, F_star: float,
                     L: float, slack: float = 1e-9) -> CertificateResult:
    """k * (F(x^k) - F*) stays under the max(8 delta^2 L, initial gap) envelope.

    delta is the largest recorded distance of any iterate (or first smoothing
    point) to the reference, a computable stand-in for the sublevel-set
    diameter the bound is stated with.
    """
    delta = 0.0
    for ct in trace.cycles:
        delta = max(delta,
                    float(np.linalg.norm(ct.x_entry - x_star)),
                    float(np.linalg.norm(ct.y_first - x_star)))
    gap1 = trace.objective_initial - F_star
    envelope = max(8.0 * delta * delta * L, gap1)
    worst = np.inf
    for k, F in enumerate(trace.objectives, start=1):
        worst = min(worst, envelope / k - (F - F_star) + slack)
    return CertificateResult("one-over-k-envelope", bool(worst >= 0.0), float(worst),
                             f"delta={delta:.3e}")


def check_linear_rate(trace: SolverTrace, F_star: float, mu: float, L: float,
                      slack: float = 1e-12) -> CertificateResult:
    """F(x^{k+1}) - F* <= (1 - mu/L)^k (F(x^1) - F*) for every k.

    x^1 is the starting point, so the k-th recorded objective (the iterate
    after k cycles) is tested against rho^k times the initial gap.
    """
    if not trace.objectives:
        return CertificateResult("linear-rate", True, 0.0, "empty run")
    gap1 = trace.objective_initial - F_star
    rho = 1.0 - mu / L
    worst = np.inf
    for k, F in enumerate(trace.objectives, start=1):
        bound = rho**k * gap1 + slack
        worst = min(worst, bound - (F - F_star))
    return CertificateResult("linear-rate", bool(worst >= 0.0), float(worst),
                             f"rho={rho:.6f}")


def check_work_units(trace: SolverTrace, num_levels: int, n_smooth: int,
                     r: float = 0.25) -> CertificateResult:
    """Per-cycle smoothing work <= (8/3)(1 - r^L) fine smoothing blocks."""
    budget = (8.0 / 3.0) * (1.0 - r**num_levels) * n_smooth
    worst = np.inf
    for ct in trace.cycles:
        worst = min(worst, budget - cycle_work_units(ct, r) + 1e-9)
    if worst is np.inf:
        worst = budget
    return CertificateResult("multilevel-work", bool(worst >= 0.0), float(worst),
                             f"budget={budget:.2f} fine steps")


def check_fast_certificates(trace: SolverTrace, gamma0: float, L: float,
                            rel_slack: float = 1e-9) -> list[CertificateResult]:
    """Estimate-sequence certificates of an accelerated run."""
    lam = trace.extras.get("lam", [])
    phi = trace.extras.get("phi_bar", [])
    alpha = trace.extras.get("alpha", [])
    gamma = trace.extras.get("gamma", [])
    results = []

    worst = np.inf
    prev = 1.0
    for k, l in enumerate(lam, start=1):
        worst = min(worst, lambda_rate_bound(k, gamma0, L) - l, prev - l)
        prev = l
    if worst is np.inf:
        worst = 0.0
    results.append(CertificateResult("lambda-decay-bound", bool(worst > 0.0 or not lam),
                                     float(worst), f"{len(lam)} iterations"))

    worst = np.inf
    for F, p in zip(trace.objectives, phi):
        scale = max(1.0, abs(p))
        worst = min(worst, (p - F) / scale + rel_slack)
    if worst is np.inf:
        worst = rel_slack
    results.append(CertificateResult("estimate-sequence-bound", bool(worst >= 0.0),
                                     float(worst), "F(x^k) <= phi_bar^k"))

    worst = np.inf
    for a, g_next, l_next in zip(alpha, gamma, lam):
        worst = min(worst, 1e-12 - abs(g_next - l_next * gamma0) / max(1.0, g_next))
    if worst is np.inf:
        worst = 0.0
    results.append(CertificateResult("gamma-lambda-identity", bool(worst >= 0.0 or not alpha),
                                     float(worst), "gamma^k = lambda^k gamma0"))

    worst = np.inf
    for resid in trace.extras.get("alpha_residual", []):
        worst = min(worst, 1e-14 - resid)
    if worst is np.inf:
        worst = 0.0
    results.append(CertificateResult("alpha-equation", bool(worst >= 0.0), float(worst),
                                     "L a^2 = (1 - a) gamma"))

    worst = np.inf
    for F_y, gny, F_next in zip(trace.extras.get("F_y", []),
                                trace.extras.get("g_norm_y", []), trace.objectives):
        bound = F_y - gny * gny / (2.0 * L) + 1e-10 * max(1.0, abs(F_y))
        worst = min(worst, bound - F_next)
    if worst is np.inf:
        worst = 0.0
    results.append(CertificateResult("accelerated-descent", bool(worst >= 0.0),
                                     float(worst), "F(x+) <= F(y) - ||G(y)||^2/2L"))
    return results


def check_fixed_point(stack: LevelStack, x_star: np.ndarray,
                      config: CycleConfig | None = None,
                      move_tol: float = 1e-8) -> list[CertificateResult]:
    """One cycle from the reference point moves nothing, coarse solve included."""
    config = config or CycleConfig(coarse_mode="exact")
    x_next, ct = vcycle(stack, x_star, config)
    move = float(np.max(np.abs(x_next - x_star)))
    coarse = max(ct.coarse_moves) if ct.coarse_moves else 0.0
    F0, F1 = ct.stage_objectives[0], ct.stage_objectives[-1]
    rel_F = abs(F1 - F0) / max(1.0, abs(F0))
    return [
        CertificateResult("fixed-point-fine", bool(move <= move_tol),
                          float(move_tol - move), f"inf-norm move {move:.3e}"),
        CertificateResult("fixed-point-coarse", bool(coarse <= move_tol),
                          float(move_tol - coarse), f"coarse move {coarse:.3e}"),
        CertificateResult("fixed-point-objective", bool(rel_F <= 1e-10),
                          float(1e-10 - rel_F), f"relative drift {rel_F:.3e}"),
    ]


def certify_run(trace: SolverTrace, stack: LevelStack, x_star: np.ndarray,
                F_star: float, mu: float | None = None) -> CertificateReport:
    """Aggregate every certificate the trace carries enough data for."""
    report = CertificateReport()
    L = stack.fine.L_est
    if trace.cycles and trace.cycles[0].stage_objectives:
        report.results.append(check_stage_monotonicity(trace))
        report.results.append(check_angle_condition(trace))
        report.results.append(check_smoothing_descent(trace))
        report.results.append(check_mgprox_sufficient_descent(trace, x_star, F_star))
        report.results.append(check_one_over_k(trace, x_star, F_star, L))
        report.results.append(check_work_units(trace, len(stack), stack.n_smooth))
    if mu is not None:
        report.results.append(check_linear_rate(trace, F_star, mu, L))
    if "phi_bar" in trace.extras:
        gamma0 = trace.meta.get("gamma0", L)
        report.extend(check_fast_certificates(trace, gamma0, L))
    return report
