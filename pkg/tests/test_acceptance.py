"""End-to-end acceptance checks at desk scale.

Each test prints one PASS/FAIL line (run with -s to see them all) and holds
the library to the documented tolerances on seeded problem families:
finite termination and minimum-norm convergence of CG on singular systems,
structural behavior of the transformed recurrence, the contraction bounds
for all three methods, oracle integrity, and the hand-derived micro-cases.
"""

import math

import numpy as np
import pytest

from semikrylov.bounds import cg_bound_verify, cgls_bound_verify, cgne_bound_verify
from semikrylov.decomposition import (
    decomposed_cg_run,
    equivalence_check,
    null_direction_confinement,
)
from semikrylov.genmat import ProblemSpec, make_problem
from semikrylov.linalg import svd, symmetric_eig
from semikrylov.oracle import (
    pinv_apply_rect,
    pseudoinverse_apply,
    pseudoinverse_matrix,
)
from semikrylov.solvers import SolverConfig, cg_solve, cgls_solve, cgne_solve


def _report(criterion: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"acceptance: {criterion}: {status}")
    assert not failures, failures


def _spsd_spectrum(kappa: float, rank: int, n: int) -> tuple:
    """Positive block with extreme-ratio kappa; clustered where rounding
    would otherwise defeat exact-arithmetic finite termination."""
    distinct = {10.0: rank, 1e2: 10, 1e4: 5}[kappa]
    levels = np.geomspace(1.0, 1.0 / kappa, distinct)
    values = np.sort(np.array([levels[i % distinct] for i in range(rank)]))[::-1]
    return tuple(values) + (0.0,) * (n - rank)


@pytest.fixture(scope="module")
def singular_cg_family():
    """20 seeded consistent SPSD problems: n=50, rank 30, kappa in {10, 1e2, 1e4}."""
    runs = []
    for i in range(20):
        kappa = (10.0, 1e2, 1e4)[i % 3]
        spec = ProblemSpec("spsd", (50, 50), _spsd_spectrum(kappa, 30, 50), seed=1000 + i)
        problem = make_problem(spec)
        decomp = symmetric_eig(problem.a)
        trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(rel_tol=1e-13))
        runs.append((kappa, problem, decomp, trace))
    return runs


def test_criterion_1_finite_termination(singular_cg_family):
    failures = []
    for kappa, problem, decomp, trace in singular_cg_family:
        rank = decomp.rank
        if rank != 30:
            failures.append(("rank", kappa, rank))
        target = 1e-10 * np.linalg.norm(problem.b)
        hit = next((k for k, rn in enumerate(trace.res_norms) if rn <= target), None)
        if hit is None or hit > rank + 2:
            failures.append(("termination", kappa, hit))
    _report("criterion 1 (finite termination on singular systems)", failures)


def test_criterion_2_minimum_norm_convergence(singular_cg_family):
    failures = []
    for kappa, problem, decomp, trace in singular_cg_family:
        xdag = pseudoinverse_apply(decomp, problem.b)
        distance = np.linalg.norm(trace.x - xdag) / np.linalg.norm(xdag)
        if distance > 1e-8:
            failures.append(("min_norm", kappa, distance))
        for k, xk in enumerate(trace.iterates):
            null_content = np.linalg.norm(decomp.q2.T @ xk)
            if null_content > 1e-10 * max(np.linalg.norm(xk), 1.0):
                failures.append(("null_content", kappa, k, null_content))
                break
    _report("criterion 2 (minimum-norm convergence)", failures)


def test_criterion_3_offset_invariance():
    failures = []
    for i in range(20):
        kappa = (10.0, 1e2, 1e4)[i % 3]
        spec = ProblemSpec(
            "spsd", (50, 50), _spsd_spectrum(kappa, 30, 50), seed=1300 + i,
            x0_mode="random_full",
        )
        problem = make_problem(spec)
        decomp = symmetric_eig(problem.a)
        trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(rel_tol=1e-13))
        x20 = decomp.q2.T @ problem.x0
        scale = max(np.linalg.norm(x20), 1.0)
        drift = max(np.linalg.norm(decomp.q2.T @ xk - x20) for xk in trace.iterates)
        if drift > 1e-10 * scale:
            failures.append(("offset_drift", i, drift))
        expected = pseudoinverse_apply(decomp, problem.b) + decomp.q2 @ x20
        final = np.linalg.norm(trace.x - expected) / np.linalg.norm(expected)
        if final > 1e-8:
            failures.append(("final", i, final))
    _report("criterion 3 (offset invariance with random x0)", failures)


def test_criterion_4_decomposed_equivalence():
    failures = []
    for i in range(10):
        gap = 0.0 if i % 2 == 0 else 0.5
        spectrum = tuple(np.geomspace(1, 1e-2, 25)) + (0.0,) * 15
        spec = ProblemSpec("spsd", (40, 40), spectrum, seed=1400 + i, consistency_gap=gap)
        problem = make_problem(spec)
        decomp = symmetric_eig(problem.a)
        trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(max_iters=25))
        dtrace = decomposed_cg_run(decomp, problem.b, problem.x0, 25)
        report = equivalence_check(trace, dtrace, decomp, 1e-8)
        if not report.passed:
            failures.append((i, gap, report.max_deviation))
    _report("criterion 4 (decomposed-CG equivalence)", failures)


def test_criterion_5_general_case_structure():
    failures = []
    for i in range(10):
        spectrum = tuple(10.0 * np.geomspace(1, 1e-4, 35)) + (0.0,) * 5
        spec = ProblemSpec("spsd", (40, 40), spectrum, seed=1500 + i, consistency_gap=0.5)
        problem = make_problem(spec)
        decomp = symmetric_eig(problem.a)
        trace = cg_solve(problem.a, problem.b, problem.x0, SolverConfig(max_iters=20))
        dtrace = decomposed_cg_run(decomp, problem.b, problem.x0, 20)
        b2 = dtrace.b2
        scale = max(np.linalg.norm(b2), 1.0)
        for rk in trace.residuals:
            drift = np.linalg.norm(decomp.q2.T @ rk - b2)
            if drift > 1e-10 * scale:
                failures.append(("r2_pinned", i, drift))
                break
        confinement = null_direction_confinement(dtrace, 1e-8)
        if not confinement.passed:
            failures.append(("confinement", i, confinement.max_angle))
    _report("criterion 5 (null residual pinned, directions confined)", failures)


def test_criterion_6_cg_energy_bound(singular_cg_family):
    failures = []
    for kappa, problem, decomp, trace in singular_cg_family:
        report = cg_bound_verify(trace, decomp)
        if not report.passed:
            failures.append(("violations", kappa, report.violations[:3]))
        expected_rho = (math.sqrt(kappa) - 1.0) / (math.sqrt(kappa) + 1.0)
        if abs(report.contraction_factor - expected_rho) > 1e-6:
            failures.append(("rho", kappa, report.contraction_factor))
        pinv = pseudoinverse_matrix(decomp)
        for k, rk in enumerate(trace.residuals):
            if report.measured[k] <= 1e-10 * report.measured[0]:
                break
            direct = math.sqrt(float(rk @ (pinv @ rk)))
            if abs(direct - report.measured[k]) > 1e-9 * direct:
                failures.append(("identity", kappa, k))
                break
    _report("criterion 6 (CG energy-norm bound)", failures)


def test_criterion_7_cgls_rank_deficient():
    failures = []
    spectrum = tuple(np.geomspace(1.0, 1e-2, 15)) + (0.0,) * 10
    for i in range(10):
        spec = ProblemSpec(
            "rectangular", (40, 25), spectrum, seed=1700 + i, consistency_gap=0.5
        )
        problem = make_problem(spec)
        sdec = svd(problem.a)
        trace = cgls_solve(problem.a, problem.b, problem.x0, SolverConfig(rel_tol=1e-13))
        normal_final = np.linalg.norm(problem.a.T @ (problem.b - problem.a @ trace.x))
        if normal_final > 1e-8 * np.linalg.norm(problem.a.T @ problem.b):
            failures.append(("normal_residual", i, normal_final))
        xstar = pinv_apply_rect(sdec, problem.b)
        distance = np.linalg.norm(trace.x - xstar) / np.linalg.norm(xstar)
        if distance > 1e-8:
            failures.append(("min_norm", i, distance))
        report = cgls_bound_verify(trace, sdec, xstar)
        sig = sdec.sigmas_r
        expected_rho = (sig[0] - sig[-1]) / (sig[0] + sig[-1])
        if not report.passed or abs(report.contraction_factor - expected_rho) > 1e-12:
            failures.append(("bound", i, report.violations[:3]))
    _report("criterion 7 (CGLS on rank-deficient least squares)", failures)


def test_criterion_8_cgne_underdetermined():
    failures = []
    spectrum = tuple(np.geomspace(1.0, 1e-2, 15)) + (0.0,) * 10
    for i in range(10):
        spec = ProblemSpec("rectangular", (25, 40), spectrum, seed=1800 + i)
        problem = make_problem(spec)
        sdec = svd(problem.a)
        trace = cgne_solve(problem.a, problem.b, np.zeros(25), SolverConfig(rel_tol=1e-13))
        xstar = pinv_apply_rect(sdec, problem.b)
        distance = np.linalg.norm(trace.x - xstar) / np.linalg.norm(xstar)
        if distance > 1e-8:
            failures.append(("min_norm", i, distance))
        report = cgne_bound_verify(trace, sdec)
        if not report.passed:
            failures.append(("bound", i, report.violations[:3]))
    _report("criterion 8 (CGNE on underdetermined systems)", failures)


def test_criterion_9_oracle_integrity():
    failures = []
    rng = np.random.default_rng(1900)
    for case in range(50):
        n = int(rng.integers(2, 31))
        g = rng.normal(size=(n, n))
        a = 0.5 * (g + g.T)
        dec = symmetric_eig(a)
        fro = max(np.linalg.norm(a), 1e-300)
        if np.linalg.norm((dec.q * dec.lambdas) @ dec.q.T - a) > 1e-12 * fro:
            failures.append(("eig_reconstruction", case))
        if np.abs(dec.q.T @ dec.q - np.eye(n)).max() > 1e-12:
            failures.append(("eig_orthogonality", case))

        m = int(rng.integers(2, 31))
        k = int(rng.integers(2, 31))
        b = rng.normal(size=(m, k))
        sd = svd(b)
        smat = np.zeros((m, k))
        np.fill_diagonal(smat, sd.sigmas)
        if np.linalg.norm(sd.u @ smat @ sd.v.T - b) > 1e-10 * np.linalg.norm(b):
            failures.append(("svd_reconstruction", case))
        if np.abs(sd.u.T @ sd.u - np.eye(m)).max() > 1e-12:
            failures.append(("svd_orthogonality_u", case))
        if np.abs(sd.v.T @ sd.v - np.eye(k)).max() > 1e-12:
            failures.append(("svd_orthogonality_v", case))

        size = int(rng.integers(2, 21))
        rank = int(rng.integers(1, size + 1))
        root = rng.normal(size=(size, rank))
        spsd = root @ root.T
        dec2 = symmetric_eig(spsd)
        pinv = pseudoinverse_matrix(dec2)
        fro_a = np.linalg.norm(spsd)
        fro_p = max(np.linalg.norm(pinv), 1e-300)
        if np.linalg.norm(spsd @ pinv @ spsd - spsd) > 1e-10 * fro_a:
            failures.append(("penrose_axa", case))
        if np.linalg.norm(pinv @ spsd @ pinv - pinv) > 1e-10 * fro_p:
            failures.append(("penrose_xax", case))
        cross = spsd @ pinv
        if np.linalg.norm(cross - cross.T) > 1e-10 * max(fro_a * fro_p, 1.0):
            failures.append(("penrose_symmetry", case))
    _report("criterion 9 (oracle integrity)", failures)


def test_criterion_10_closed_form_micro_cases():
    failures = []

    trace = cg_solve(np.diag([2.0, 1.0, 0.0]), [2.0, 1.0, 0.0], np.zeros(3))
    if abs(trace.alphas[0] - 5.0 / 9.0) > 1e-12:
        failures.append(("cg_alpha0", trace.alphas[0]))
    if abs(trace.alphas[1] - 0.9) > 1e-12:
        failures.append(("cg_alpha1", trace.alphas[1]))
    if abs(trace.betas[0] - 4.0 / 81.0) > 1e-12:
        failures.append(("cg_beta0", trace.betas[0]))
    if np.abs(trace.x - np.array([1.0, 1.0, 0.0])).max() > 1e-12:
        failures.append(("cg_x2", trace.x))

    trace = cgls_solve(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]), [1.0, 1.0, 0.0], np.zeros(2))
    if trace.iterations != 1 or abs(trace.alphas[0] - 1.0) > 1e-12:
        failures.append(("cgls_step", trace.alphas))
    if np.abs(trace.x - np.array([1.0, 0.0])).max() > 1e-12:
        failures.append(("cgls_x", trace.x))

    trace = cgne_solve(np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]), [1.0, 0.0], np.zeros(2))
    if np.abs(trace.x - np.array([1.0, 0.0, 0.0])).max() > 1e-12:
        failures.append(("cgne_wide_x", trace.x))

    trace = cgne_solve(np.array([[1.0, 0.0]]), [2.0], np.zeros(1))
    if np.abs(trace.y - np.array([2.0])).max() > 1e-12:
        failures.append(("cgne_row_y", trace.y))
    if np.abs(trace.x - np.array([2.0, 0.0])).max() > 1e-12:
        failures.append(("cgne_row_x", trace.x))

    _report("criterion 10 (closed-form micro-cases)", failures)
