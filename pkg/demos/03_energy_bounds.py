"""Energy-norm contraction of CG against the theoretical envelope.

For each condition number the measured error quantity is the range
residual in the inverse-spectrum norm; the envelope is 2 rho^k times its
starting value with rho = (sqrt(kappa) - 1)/(sqrt(kappa) + 1). The
envelope must dominate the measurement at every iteration until the
measurement sinks into rounding noise.
"""

import numpy as np

from semikrylov import (
    ProblemSpec,
    SolverConfig,
    cg_bound_verify,
    cg_solve,
    make_problem,
    symmetric_eig,
)

n, rank = 40, 24

for kappa in (10.0, 100.0, 1000.0):
    spectrum = tuple(np.geomspace(1.0, 1.0 / kappa, rank)) + (0.0,) * (n - rank)
    spec = ProblemSpec("spsd", (n, n), spectrum, seed=5)
    problem = make_problem(spec)
    decomp = symmetric_eig(problem.a)
    trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(rel_tol=1e-13))
    report = cg_bound_verify(trace, decomp)

    print(f"\nkappa = {kappa:g}: rho = {report.contraction_factor:.6f}, "
          f"{trace.iterations} iterations, "
          f"{'no violations' if report.passed else f'{len(report.violations)} violations'}")
    print("  iter      measured         envelope")
    step = max(1, len(report.measured) // 8)
    for k in range(0, len(report.measured), step):
        print(f"  {k:4d}  {report.measured[k]:14.6e}  {report.bound[k]:14.6e}")
