"""Geometric convergence-bound evaluation against recorded solver traces.

Each verifier computes the method's natural error quantity per iteration
from the spectral factors, forms the theoretical envelope 2 * rho^k times
the initial value with rho built from the extreme nonzero eigenvalues or
singular values, and flags iterations where the measurement escapes the
envelope beyond a small slack. The slack (multiplicative 1 + 1e-6 plus an
absolute floor of 1e-13 times the initial value) absorbs rounding noise
near convergence, and violation collection stops once the measurement has
dropped to rounding level relative to its start, where comparing against a
geometric envelope stops meaning anything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SingularDecomposition, SpectralDecomposition
from .oracle import DEFAULT_CONSISTENCY_TOL, consistency_check
from .solvers import SolveTrace

SLACK_REL = 1e-6
SLACK_FLOOR = 1e-13
NOISE_CUT = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """Measured error quantities against the 2 * rho^k envelope.

    kappa_or_sigmas holds the extreme spectral values the contraction
    factor was built from: (lambda_1, lambda_r) for the cg energy bound,
    (sigma_1, sigma_r) for the least squares bounds. violations lists
    (iteration, measured, bound) triples that escaped the slack.
    """

    kind: str
    measured: list[float]
    bound: list[float]
    contraction_factor: float
    kappa_or_sigmas: tuple[float, float]
    violations: list[tuple[int, float, float]]
    passed: bool


def _envelope(rho: float, m0: float, count: int) -> list[float]:
    return [2.0 * rho**k * m0 for k in range(count)]


def _violations(measured: list[float], bound: list[float]) -> list[tuple[int, float, float]]:
    m0 = measured[0]
    out = []
    for k, (mk, bk) in enumerate(zip(measured, bound)):
        if mk < NOISE_CUT * m0:
            break
        if mk > bk * (1.0 + SLACK_REL) + SLACK_FLOOR * m0:
            out.append((k, mk, bk))
    return out


def cg_bound_verify(trace: SolveTrace, decomp: SpectralDecomposition) -> BoundReport:
    """Check the energy-norm contraction of a plain cg trace.

    The measured quantity per iteration is the range residual in the
    inverse-spectrum norm, sqrt(r1_k^T Lambda_r^{-1} r1_k), which equals
    sqrt(r_k^T A_pinv r_k); the envelope contracts by
    rho = (sqrt(kappa) - 1) / (sqrt(kappa) + 1) with kappa the ratio of
    extreme nonzero eigenvalues. The right-hand side is reconstructed from
    the trace and must be consistent; the trace must carry its vector
    history.
    """
    if trace.method != "cg":
        raise ValueError("cg_bound_verify expects a cg trace")
    if not trace.residuals:
        raise ValueError("trace has no recorded residual vectors")
    if decomp.rank == 0:
        raise ValueError("bound undefined for a zero-rank matrix")
    b = trace.residuals[0] + decomp.apply(trace.iterates[0])
    report = consistency_check(decomp, b)
    if not report.consistent:
        raise ValueError(
            f"right-hand side has null-space content {report.null_norm:.3e}; "
            "the energy bound only covers consistent systems"
        )

    lam = decomp.lambdas_r
    kappa = float(lam[0] / lam[-1])
    rho = float((np.sqrt(kappa) - 1.0) / (np.sqrt(kappa) + 1.0))
    q1 = decomp.q1
    measured = [float(np.sqrt(np.sum((q1.T @ r) ** 2 / lam))) for r in trace.residuals]
    bound = _envelope(rho, measured[0], len(measured))
    bad = _violations(measured, bound)
    return BoundReport(
        "cg_energy", measured, bound, rho, (float(lam[0]), float(lam[-1])), bad, not bad
    )


def cgls_bound_verify(
    trace: SolveTrace, sdec: SingularDecomposition, xstar: np.ndarray
) -> BoundReport:
    """Check the range-residual contraction ||A (x_k - x*)|| of a cgls trace.

    rho is (sigma_1 - sigma_r) / (sigma_1 + sigma_r) over the nonzero
    singular values; xstar should be the minimum-norm least squares
    solution (see ``pinv_apply_rect``).
    """
    if trace.method != "cgls":
        raise ValueError("cgls_bound_verify expects a cgls trace")
    if not trace.iterates:
        raise ValueError("trace has no recorded iterate vectors")
    if sdec.rank == 0:
        raise ValueError("bound undefined for a zero-rank matrix")
    sig = sdec.sigmas_r
    rho = float((sig[0] - sig[-1]) / (sig[0] + sig[-1]))
    measured = [float(np.linalg.norm(sdec.apply(xk - xstar))) for xk in trace.iterates]
    bound = _envelope(rho, measured[0], len(measured))
    bad = _violations(measured, bound)
    return BoundReport(
        "cgls_range_residual",
        measured,
        bound,
        rho,
        (float(sig[0]), float(sig[-1])),
        bad,
        not bad,
    )


def cgne_bound_verify(trace: SolveTrace, sdec: SingularDecomposition) -> BoundReport:
    """Check the quadratic-form contraction r_k^T (A A^T)^+ r_k of a cgne trace.

    The bound applies to the quadratic form itself (no square root), with
    the same rho as the cgls bound. Requires a consistent right-hand side,
    reconstructed from the trace.
    """
    if trace.method != "cgne":
        raise ValueError("cgne_bound_verify expects a cgne trace")
    if not trace.residuals or trace.y_iterates is None or not trace.y_iterates:
        raise ValueError("trace has no recorded vector history")
    if sdec.rank == 0:
        raise ValueError("bound undefined for a zero-rank matrix")
    y0 = trace.y_iterates[0]
    b = trace.residuals[0] + sdec.apply(sdec.apply_transpose(y0))
    null_norm = float(np.linalg.norm(sdec.u2.T @ b))
    if null_norm > DEFAULT_CONSISTENCY_TOL * max(float(np.linalg.norm(b)), 1.0):
        raise ValueError(
            f"right-hand side has null-space content {null_norm:.3e}; "
            "the bound only covers consistent systems"
        )

    sig = sdec.sigmas_r
    rho = float((sig[0] - sig[-1]) / (sig[0] + sig[-1]))
    u1 = sdec.u1
    measured = [float(np.sum(((u1.T @ r) / sig) ** 2)) for r in trace.residuals]
    bound = _envelope(rho, measured[0], len(measured))
    bad = _violations(measured, bound)
    return BoundReport(
        "cgne_energy", measured, bound, rho, (float(sig[0]), float(sig[-1])), bad, not bad
    )
