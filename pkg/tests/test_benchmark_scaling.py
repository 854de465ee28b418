"""Ordering of the solvers at a larger grid, mirroring the benchmark table."""

import numpy as np

from proxmg.baselines import fista_solve, proxgrad_solve
from proxmg.hierarchy import build_obstacle_hierarchy
from proxmg.multigrid import CycleConfig, StoppingRule, mgprox_solve


def test_multigrid_is_fastest_in_iterations_on_the_63_grid():
    stack = build_obstacle_hierarchy(63, 1e-6, 5, 20)
    rng = np.random.Generator(np.random.PCG64(0))
    x0 = rng.uniform(0, 1, size=stack.fine.problem.dim)
    # backtracking steps: the declared curvature bound is far too conservative
    # at this scale for fixed 1/L smoothing to be competitive
    x, tr = mgprox_solve(stack, x0.copy(), StoppingRule(600, 1e-10),
                         CycleConfig(step_mode="backtracking"))
    assert tr.converged
    budget = 10 * tr.iterations + 1
    problem = stack.fine.problem
    _, tr_f = fista_solve(problem, x0.copy(), StoppingRule(budget, 1e-10))
    _, tr_p = proxgrad_solve(problem, x0.copy(), StoppingRule(budget, 1e-10))
    assert not tr_f.converged
    assert not tr_p.converged
