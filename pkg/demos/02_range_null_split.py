"""The CG recurrence split into range and null-space coordinates.

Runs plain CG and the transformed recurrence side by side on the same
problem and checks they are the same algorithm in rotated coordinates.
For an inconsistent right-hand side the null block has rigid structure:
the null residual never moves from b2, and every null direction stays on
the one-dimensional line spanned by b2, until the curvature denominator
degenerates and the run stops with a breakdown flag.
"""

import numpy as np

from semikrylov import (
    ProblemSpec,
    SolverConfig,
    cg_solve,
    consistency_check,
    decomposed_cg_run,
    equivalence_check,
    make_problem,
    null_direction_confinement,
    symmetric_eig,
)

n, rank, iters = 30, 22, 15
spectrum = tuple(10.0 * np.geomspace(1.0, 1e-3, rank)) + (0.0,) * (n - rank)

for gap in (0.0, 0.5):
    spec = ProblemSpec("spsd", (n, n), spectrum, seed=77, consistency_gap=gap)
    problem = make_problem(spec)
    decomp = symmetric_eig(problem.a)
    report = consistency_check(decomp, problem.b)
    label = "consistent" if report.consistent else "inconsistent"
    print(f"\n=== gap {gap}: {label} (null-space content of b: {report.null_norm:.3e}) ===")

    trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(max_iters=iters))
    dtrace = decomposed_cg_run(decomp, problem.b, problem.x0, iters)
    print(f"plain run: {trace.stop_reason} after {trace.iterations} iterations")
    print(f"transformed run: {dtrace.stop_reason} after {dtrace.iterations} iterations")

    equivalence = equivalence_check(trace, dtrace, decomp, tol=1e-8)
    print(
        f"equivalence over {equivalence.iterations_compared} healthy iterations: "
        f"max deviation {equivalence.max_deviation:.2e} -> "
        f"{'match' if equivalence.passed else 'MISMATCH'}"
    )

    if report.consistent:
        biggest = max(np.linalg.norm(p2) for p2 in dtrace.p2)
        print(f"null block: largest direction norm in the transformed run: {biggest:.2e}")
    else:
        pinned = max(np.linalg.norm(r2 - dtrace.b2) for r2 in dtrace.r2)
        print(f"null residual pinned at b2 (max deviation {pinned:.1e})")
        confinement = null_direction_confinement(dtrace, tol=1e-8)
        print(
            f"null directions confined to the b2 line: sine of worst angle "
            f"{confinement.max_angle:.2e} -> {'confined' if confinement.passed else 'ESCAPED'}"
        )
