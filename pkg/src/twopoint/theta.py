"""Lovasz number via a self-contained dense semidefinite solver.

The program solved is

    maximize  <J, X>   subject to  tr(X) = 1,  X_ij = 0 for every edge,
                                   X positive semidefinite,

whose optimum is the Lovasz number of the graph.  The solver is a
feasible-start primal-dual path-following interior-point method with the
HKM search direction.  X0 = I/n and the dual slack Z0 = (n+1) I - J are
strictly feasible, so both residuals stay (numerically) zero throughout and
only the duality gap has to be driven below tolerance; primal iterates are
re-projected onto the exact affine constraints after every step.  The Schur
complement is assembled sparsely from the two-entry constraint matrices, so
one iteration costs one Cholesky of an m x m system (m = 1 + |E|) plus a
handful of n x n eigendecompositions for the step lengths.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .graphs import Graph
from .independence import independence_number

DEFAULT_TOLERANCE = 1e-7
DEFAULT_MAX_ITERATIONS = 10_000


class SdpStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SdpResiduals:
    min_eigenvalue: float
    trace_error: float
    max_edge_entry: float


@dataclass(frozen=True)
class SdpSolution:
    X: np.ndarray
    primal_value: float
    dual_value: float
    tolerance: float
    status: SdpStatus
    residuals: SdpResiduals
    iterations: int

    def __post_init__(self) -> None:
        X = np.array(self.X)
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @property
    def duality_gap(self) -> float:
        return self.dual_value - self.primal_value


@dataclass(frozen=True)
class FeasibilityReport:
    min_eigenvalue: float
    trace_error: float
    max_edge_entry: float
    eigenvalue_ok: bool
    trace_ok: bool
    edges_ok: bool

    @property
    def passed(self) -> bool:
        return self.eigenvalue_ok and self.trace_ok and self.edges_ok


def _check_graph(g: Graph) -> None:
    if g.n < 1:
        raise ValueError("theta needs at least one vertex")
    if g.is_weighted:
        raise ValueError("theta expects an unweighted graph; apply expand_weighted")


def _residuals(g: Graph, X: np.ndarray) -> SdpResiduals:
    eigs = np.linalg.eigvalsh((X + X.T) / 2)
    max_edge = 0.0
    if g.edges:
        ei = np.fromiter((e[0] for e in g.edges), dtype=int)
        ej = np.fromiter((e[1] for e in g.edges), dtype=int)
        max_edge = float(np.max(np.abs(X[ei, ej])))
    return SdpResiduals(
        min_eigenvalue=float(eigs[0]),
        trace_error=float(abs(np.trace(X) - 1.0)),
        max_edge_entry=max_edge,
    )


def verify_feasibility(g: Graph, X: np.ndarray, tolerance: float) -> FeasibilityReport:
    """Recompute the primal feasibility residuals independently of the solver."""
    X = np.asarray(X, dtype=float)
    if X.shape != (g.n, g.n):
        raise ValueError(f"X has shape {X.shape}, expected ({g.n},{g.n})")
    r = _residuals(g, X)
    return FeasibilityReport(
        min_eigenvalue=r.min_eigenvalue,
        trace_error=r.trace_error,
        max_edge_entry=r.max_edge_entry,
        eigenvalue_ok=r.min_eigenvalue >= -tolerance,
        trace_ok=r.trace_error <= tolerance,
        edges_ok=r.max_edge_entry <= tolerance,
    )


def _lift_to_pd(M: np.ndarray) -> np.ndarray:
    """Shift the diagonal just enough to undo a roundoff-level loss of definiteness."""
    lmin = float(np.linalg.eigvalsh(M)[0])
    if lmin <= 0.0:
        M = M + (1e-14 + 2.0 * abs(lmin)) * np.eye(M.shape[0])
    return M


def _max_step(M: np.ndarray, dM: np.ndarray) -> float:
    """Largest a with M + a dM still positive semidefinite (M positive definite)."""
    try:
        w = sla.eigh(dM, M, eigvals_only=True)
    except (np.linalg.LinAlgError, ValueError):
        try:
            w = sla.eigh(dM, _lift_to_pd(M), eigvals_only=True)
        except (np.linalg.LinAlgError, ValueError):
            return 0.0
    lmin = float(w[0])
    if lmin >= -1e-14:
        return math.inf
    return -1.0 / lmin


def theta(
    g: Graph,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> SdpSolution:
    """Lovasz number of g with feasibility and duality-gap certificates.

    The returned primal value is a lower and the dual value an upper bound
    on the true optimum, up to the reported residuals.  Non-convergence
    within the iteration cap is reported as status MAX_ITERATIONS carrying
    the best iterate found, never silently.
    """
    _check_graph(g)
    if not (1e-10 <= tolerance <= 1e-3):
        raise ValueError(f"tolerance must lie in [1e-10, 1e-3], got {tolerance}")
    if g.n == 1:
        X = np.ones((1, 1))
        return SdpSolution(
            X=X,
            primal_value=1.0,
            dual_value=1.0,
            tolerance=tolerance,
            status=SdpStatus.CONVERGED,
            residuals=_residuals(g, X),
            iterations=0,
        )

    n = g.n
    me = len(g.edges)
    m = 1 + me
    ei = np.fromiter((e[0] for e in g.edges), dtype=int) if me else np.empty(0, dtype=int)
    ej = np.fromiter((e[1] for e in g.edges), dtype=int) if me else np.empty(0, dtype=int)
    J = np.ones((n, n))
    eye_n = np.eye(n)

    def build_Z(y: np.ndarray) -> np.ndarray:
        Z = y[0] * eye_n - J
        if me:
            Z[ei, ej] += y[1:]
            Z[ej, ei] += y[1:]
        return Z

    def reproject(X: np.ndarray) -> np.ndarray:
        # Edge entries are zero and the trace is one by construction of the
        # search direction; re-impose both exactly to stop roundoff drift.
        # Near convergence X is close to singular and the zeroing can flip
        # its smallest eigenvalue negative, so lift it back when that
        # happens (a diagonal shift respects the edge constraints).
        X = (X + X.T) / 2
        if me:
            X[ei, ej] = 0.0
            X[ej, ei] = 0.0
        try:
            sla.cho_factor(X)
        except np.linalg.LinAlgError:
            X = _lift_to_pd(X)
        return X / np.trace(X)

    X = eye_n / n
    y = np.zeros(m)
    y[0] = n + 1.0
    Z = build_Z(y)

    # Aim well below the certified tolerance: downstream consumers (the
    # representation extraction in particular) amplify the remaining gap.
    target_gap = max(0.01 * tolerance, 2e-10)
    tau = 0.98
    best_gap = math.inf
    best = (X, y)
    stall = 0
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        gap = float(y[0] - X.sum())
        if gap < best_gap:
            if gap < 0.99 * best_gap:
                stall = 0
            best_gap, best = gap, (X, y)
        else:
            stall += 1
        if gap <= target_gap or stall >= 10:
            break
        mu = gap / n

        try:
            cz = sla.cho_factor(Z)
        except np.linalg.LinAlgError:
            break
        W = sla.cho_solve(cz, eye_n)
        W = (W + W.T) / 2

        # Symmetrized HKM Schur complement H[p,q] = tr(A_p X A_q W) using the
        # sparsity of the constraint matrices (identity + one per edge).
        H = np.empty((m, m))
        H[0, 0] = float(np.sum(X * W))
        if me:
            R = W @ X
            h0 = R[ej, ei] + R[ei, ej]
            H[0, 1:] = h0
            H[1:, 0] = h0
            Hxw = (
                X[np.ix_(ej, ei)] * W[np.ix_(ej, ei)].T
                + X[np.ix_(ei, ei)] * W[np.ix_(ej, ej)].T
                + X[np.ix_(ej, ej)] * W[np.ix_(ei, ei)].T
                + X[np.ix_(ei, ej)] * W[np.ix_(ei, ej)].T
            )
            H[1:, 1:] = (Hxw + Hxw.T) / 2

        ch = None
        jitter_scale = float(np.trace(H)) / m
        for jit in (0.0, 1e-12, 1e-9, 1e-6):
            try:
                ch = sla.cho_factor(H + jit * jitter_scale * np.eye(m))
                break
            except np.linalg.LinAlgError:
                continue
        if ch is None:
            break

        def solve_schur(rhs: np.ndarray) -> np.ndarray:
            # One round of iterative refinement against the unjittered H;
            # the Schur system turns badly conditioned as the gap closes.
            dy = sla.cho_solve(ch, rhs)
            dy += sla.cho_solve(ch, rhs - H @ dy)
            return dy

        def direction(sigma: float):
            rhs = np.empty(m)
            rhs[0] = sigma * mu * float(np.trace(W)) - 1.0
            if me:
                rhs[1:] = 2 * sigma * mu * W[ei, ej] - 2 * X[ei, ej]
            dy = solve_schur(rhs)
            dZ = dy[0] * eye_n
            if me:
                dZ[ei, ej] += dy[1:]
                dZ[ej, ei] += dy[1:]
            dXr = sigma * mu * W - X - X @ dZ @ W
            return dy, dZ, (dXr + dXr.T) / 2

        # Predictor step fixes the centering weight, then the corrector
        # reuses the factorization.
        dy_a, dZ_a, dX_a = direction(0.0)
        ap = min(1.0, tau * _max_step(X, dX_a))
        ad = min(1.0, tau * _max_step(Z, dZ_a))
        gap_aff = float((y[0] + ad * dy_a[0]) - (X + ap * dX_a).sum())
        sigma = float(np.clip((max(gap_aff, 0.0) / gap) ** 3, 0.01, 0.8))

        dy, dZ, dX = direction(sigma)
        ap = min(1.0, tau * _max_step(X, dX))
        ad = min(1.0, tau * _max_step(Z, dZ))
        if ap <= 1e-12 and ad <= 1e-12:
            break
        X = reproject(X + ap * dX)
        y = y + ad * dy
        Z = build_Z(y)

    gap = float(y[0] - X.sum())
    if gap < best_gap:
        best_gap, best = gap, (X, y)
    X, y = best

    resid = _residuals(g, X)
    ok = (
        best_gap <= tolerance
        and resid.min_eigenvalue >= -tolerance
        and resid.trace_error <= tolerance
        and resid.max_edge_entry <= tolerance
    )
    return SdpSolution(
        X=X,
        primal_value=float(X.sum()),
        dual_value=float(y[0]),
        tolerance=tolerance,
        status=SdpStatus.CONVERGED if ok else SdpStatus.MAX_ITERATIONS,
        residuals=resid,
        iterations=iterations,
    )


def odd_cycle_theta(n: int) -> float:
    """Closed-form Lovasz number of an odd cycle: n cos(pi/n) / (1 + cos(pi/n))."""
    if n < 5 or n % 2 == 0:
        raise ValueError(f"odd cycle formula needs odd n >= 5, got {n}")
    c = math.cos(math.pi / n)
    return n * c / (1 + c)


def theta_sandwich(
    g: Graph,
    tolerance: float = DEFAULT_TOLERANCE,
    alpha_limit: int = 64,
) -> tuple[int, float]:
    """Independence number and Lovasz number, checked against alpha <= theta."""
    alpha = independence_number(g, limit=alpha_limit).alpha
    sol = theta(g, tolerance=tolerance)
    if alpha > sol.primal_value + max(tolerance, sol.duality_gap) + 10 * tolerance:
        raise ArithmeticError(
            f"sandwich violated: alpha={alpha} > theta={sol.primal_value}"
        )
    return alpha, sol.primal_value
