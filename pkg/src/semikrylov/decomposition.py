"""CG carried directly in the eigenbasis, split into range and null blocks.

``decomposed_cg_run`` iterates the same recurrence as ``cg_solve`` but in
transformed coordinates: the range block sees the positive eigenvalues as a
diagonal operator, while the null block sees only the null component of the
right-hand side, whose direction never changes. When that component is zero
the null block provably stays frozen at its starting value.

``equivalence_check`` rotates a plain trace into the same basis and
confirms the two runs are the same algorithm iteration by iteration. Both
runs obey exact arithmetic only while the plain recurrence keeps its
residuals mutually orthogonal; once that degrades (or the range residual
reaches rounding level relative to b1), the two finite-precision runs part
ways in ways exact arithmetic does not predict, so the comparison stops at
whichever signal fires first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SpectralDecomposition, as_vector
from .oracle import split
from .solvers import BREAKDOWN, SolveTrace

COMPLETED = "completed"

_HORIZON_REL = 1e-12
_HORIZON_ORTH = 1e-10


@dataclass(frozen=True)
class DecomposedTrace:
    """Per-iteration history of the transformed recurrence.

    x1/r1/p1 live in range coordinates (length rank), x2/r2/p2 in null
    coordinates (length dim - rank). The r2 entries are stored as the exact
    null component of b: the recurrence never updates them.
    """

    x1: list[np.ndarray]
    r1: list[np.ndarray]
    p1: list[np.ndarray]
    x2: list[np.ndarray]
    r2: list[np.ndarray]
    p2: list[np.ndarray]
    alphas: list[float]
    betas: list[float]
    b1: np.ndarray
    b2: np.ndarray
    stop_reason: str

    @property
    def iterations(self) -> int:
        return len(self.alphas)


def decomposed_cg_run(
    decomp: SpectralDecomposition, b, x0, iters: int, breakdown_tol: float = 1e-14
) -> DecomposedTrace:
    """Run ``iters`` iterations of CG in eigenbasis coordinates.

    The range block uses the diagonal positive spectrum directly; the full
    matrix is never applied. Stops early with stop_reason "breakdown" when
    the curvature denominator (p1, Lambda_r p1) degenerates relative to
    ||p||^2, exactly as the plain solver would; the trace then records the
    iterations completed up to that point.
    """
    b = as_vector(b)
    x0 = as_vector(x0)
    if iters < 0:
        raise ValueError("iters must be nonnegative")
    if b.shape[0] != decomp.dim or x0.shape[0] != decomp.dim:
        raise ValueError("right-hand side and initial guess must match the decomposition dimension")

    lam = decomp.lambdas_r
    parts_b = split(decomp, b)
    b1, b2 = parts_b.range_part, parts_b.null_part
    parts_x0 = split(decomp, x0)
    x1 = parts_x0.range_part.copy()
    x2 = parts_x0.null_part.copy()
    b22 = float(b2 @ b2)

    r1 = b1 - lam * x1
    p1 = r1.copy()
    p2 = b2.copy()

    x1s, r1s, p1s = [x1.copy()], [r1.copy()], [p1.copy()]
    x2s, r2s, p2s = [x2.copy()], [b2.copy()], [p2.copy()]
    alphas: list[float] = []
    betas: list[float] = []
    stop_reason = COMPLETED
    num = float(r1 @ r1) + b22

    for _ in range(iters):
        lp = lam * p1
        curvature = float(p1 @ lp)
        if curvature <= breakdown_tol * (float(p1 @ p1) + float(p2 @ p2)):
            stop_reason = BREAKDOWN
            break
        alpha = num / curvature
        x1 = x1 + alpha * p1
        x2 = x2 + alpha * p2
        r1 = r1 - alpha * lp
        num_next = float(r1 @ r1) + b22
        beta = num_next / num
        p1 = r1 + beta * p1
        p2 = b2 + beta * p2
        num = num_next

        alphas.append(alpha)
        betas.append(beta)
        x1s.append(x1.copy())
        r1s.append(r1.copy())
        p1s.append(p1.copy())
        x2s.append(x2.copy())
        r2s.append(b2.copy())
        p2s.append(p2.copy())

    return DecomposedTrace(x1s, r1s, p1s, x2s, r2s, p2s, alphas, betas, b1, b2, stop_reason)


@dataclass(frozen=True)
class EquivalenceReport:
    max_deviation: float
    iterations_compared: int
    passed: bool


def _scalar_dev(a: float, b: float) -> float:
    denom = max(abs(a), abs(b))
    return abs(a - b) / denom if denom > 0.0 else 0.0


def _block_dev(reference: np.ndarray, other: np.ndarray) -> float:
    return float(np.linalg.norm(reference - other)) / max(float(np.linalg.norm(reference)), 1.0)


def _healthy_states(trace: SolveTrace, dtrace: DecomposedTrace) -> int:
    """Number of leading states still governed by exact-arithmetic behavior.

    State i (i >= 1) stops being healthy once the plain residuals have lost
    mutual orthogonality past 1e-10, or once the transformed range residual
    drops below 1e-12 relative to b1 (it then consists of rounding noise).
    """
    count = min(len(trace.iterates), len(dtrace.x1))
    b1_norm = float(np.linalg.norm(dtrace.b1))
    unit_residuals = []
    for r in trace.residuals:
        norm_r = float(np.linalg.norm(r))
        unit_residuals.append(r / norm_r if norm_r > 0.0 else r)
    for i in range(count):
        r1_norm = float(np.linalg.norm(dtrace.r1[i]))
        # an exactly zero range residual is the exact-arithmetic limit, not noise
        if 0.0 < r1_norm < _HORIZON_REL * b1_norm:
            return i
        if i >= 1:
            loss = max(abs(float(unit_residuals[i] @ unit_residuals[j])) for j in range(i))
            if loss > _HORIZON_ORTH:
                return i
    return count


def equivalence_check(
    trace: SolveTrace, dtrace: DecomposedTrace, decomp: SpectralDecomposition, tol: float
) -> EquivalenceReport:
    """Rotate a plain cg trace into the eigenbasis and compare both runs.

    Compares, per iteration, the range and null blocks of x, r, p and the
    step scalars alpha, beta. Traces of different lengths are compared up
    to the shorter, and only over the healthy leading states (see
    ``_healthy_states``): with K comparable iterations, states 0..K are
    checked and scalars 0..K-1, so every referenced state is healthy
    (beta_i looks one state ahead). Vector blocks deviate by
    ||difference|| / max(||plain block||, 1); scalars relative to the
    larger magnitude. Raises if no iteration is comparable at all.
    """
    if trace.method != "cg":
        raise ValueError("equivalence_check expects a plain cg trace")
    if not trace.iterates:
        raise ValueError("plain trace has no recorded vector history")

    n_scalars = min(len(trace.alphas), len(dtrace.alphas))
    healthy = _healthy_states(trace, dtrace)
    iterations = min(healthy - 1, n_scalars) if healthy > 0 else 0
    if iterations <= 0:
        raise ValueError("no comparable iterations before the rounding horizon")

    devs = [0.0]
    for i in range(iterations + 1):
        for plain_vec, d1, d2 in (
            (trace.iterates[i], dtrace.x1[i], dtrace.x2[i]),
            (trace.residuals[i], dtrace.r1[i], dtrace.r2[i]),
            (trace.directions[i], dtrace.p1[i], dtrace.p2[i]),
        ):
            parts = split(decomp, plain_vec)
            devs.append(_block_dev(parts.range_part, d1))
            devs.append(_block_dev(parts.null_part, d2))
    for i in range(iterations):
        devs.append(_scalar_dev(trace.alphas[i], dtrace.alphas[i]))
        devs.append(_scalar_dev(trace.betas[i], dtrace.betas[i]))

    max_dev = max(devs)
    return EquivalenceReport(max_dev, iterations, max_dev <= tol)


@dataclass(frozen=True)
class ConfinementReport:
    max_angle: float
    passed: bool


def null_direction_confinement(dtrace: DecomposedTrace, tol: float) -> ConfinementReport:
    """Check that every null-block direction stays parallel to b2.

    For each recorded p2 with ||p2|| > tol * ||b2||, measures the sine of
    its angle against b2 (as the relative size of the component orthogonal
    to b2). Passes when every sine is at most tol. Only meaningful when b2
    is nonzero; for a consistent right-hand side the null directions are
    identically zero and the stagnation invariants apply instead.
    """
    b2 = dtrace.b2
    nb2 = float(np.linalg.norm(b2))
    if nb2 == 0.0:
        raise ValueError(
            "b2 is zero (consistent case): check x2 stagnation and p2 = 0 instead of confinement"
        )
    bhat = b2 / nb2
    max_sine = 0.0
    for p2 in dtrace.p2:
        np2 = float(np.linalg.norm(p2))
        if np2 <= tol * nb2:
            continue
        orthogonal = p2 - (bhat @ p2) * bhat
        sine = float(np.linalg.norm(orthogonal)) / np2
        max_sine = max(max_sine, sine)
    return ConfinementReport(max_sine, max_sine <= tol)
