"""CGLS and CGNE on rank-deficient least squares problems.

CGLS iterates on the first-kind normal equations and drives A^T r to zero
even when b has a residual component outside the range; from x0 = 0 it
lands on the minimum-norm least squares solution. CGNE iterates on the
second-kind normal equations for consistent underdetermined systems and
lands on the same pseudoinverse solution. Both obey a geometric bound with
rho = (sigma_1 - sigma_r)/(sigma_1 + sigma_r).
"""

import numpy as np

from semikrylov import (
    ProblemSpec,
    SolverConfig,
    cgls_bound_verify,
    cgls_solve,
    cgne_bound_verify,
    cgne_solve,
    make_problem,
    pinv_apply_rect,
    svd,
)

sigmas = tuple(np.geomspace(1.0, 0.05, 12)) + (0.0,) * 6

print("=== CGLS: 30 x 18 tall problem, rank 12, inconsistent b ===")
spec = ProblemSpec("rectangular", (30, 18), sigmas, seed=404, consistency_gap=0.6)
problem = make_problem(spec)
sdec = svd(problem.a)
trace = cgls_solve(problem.a, problem.b, problem.x0, SolverConfig(rel_tol=1e-13))
print(f"{trace.stop_reason} after {trace.iterations} iterations")
normal_res = np.linalg.norm(problem.a.T @ (problem.b - problem.a @ trace.x))
print(f"final ||A^T r|| = {normal_res:.2e} (the least squares optimality condition)")
residual = np.linalg.norm(problem.b - problem.a @ trace.x)
print(f"final ||r|| = {residual:.4f} (stays at the size of the inconsistent part: 0.6)")
xstar = pinv_apply_rect(sdec, problem.b)
print(f"distance to minimum-norm solution: "
      f"{np.linalg.norm(trace.x - xstar) / np.linalg.norm(xstar):.2e}")
report = cgls_bound_verify(trace, sdec, xstar)
print(f"range-residual bound: rho = {report.contraction_factor:.4f}, "
      f"{'holds' if report.passed else 'VIOLATED'}")

print("\n=== CGNE: 18 x 30 wide problem, rank 12, consistent b ===")
spec = ProblemSpec("rectangular", (18, 30), sigmas, seed=405)
problem = make_problem(spec)
sdec = svd(problem.a)
trace = cgne_solve(problem.a, problem.b, np.zeros(18), SolverConfig(rel_tol=1e-13))
print(f"{trace.stop_reason} after {trace.iterations} iterations")
xstar = pinv_apply_rect(sdec, problem.b)
print(f"distance to minimum-norm solution: "
      f"{np.linalg.norm(trace.x - xstar) / np.linalg.norm(xstar):.2e}")
print(f"solution norm {np.linalg.norm(trace.x):.4f} vs pseudoinverse {np.linalg.norm(xstar):.4f}")
report = cgne_bound_verify(trace, sdec)
print(f"quadratic-form bound: rho = {report.contraction_factor:.4f}, "
      f"{'holds' if report.passed else 'VIOLATED'}")
