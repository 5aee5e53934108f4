"""Symmetric eigen-analysis of coupling matrices and analytic gain bounds.

The eigensolver is a cyclic Jacobi rotation scheme: adequate for the dense,
modest-size matrices this package works with, and self-contained. On top of
it sit the controlled-spectrum computation, closed-form sufficient gain
bounds for star and cluster-of-stars networks, a Schur-complement
feasibility test for a requested spectral margin, and a bisection search
for the minimal uniform gain (the feasibility predicate is monotone in the
gain, so bisection is exact to tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BoundaryCaseError,
    BoundUndefinedError,
    ContractViolationError,
    NumericalFailureError,
)
from .pinning import CostReport, PinningPlan, controlled_coupling, cost

__all__ = [
    "EigenDecomposition",
    "SpectralMargin",
    "DiagBoundsReport",
    "eig_symmetric",
    "controlled_spectrum",
    "check_margin",
    "star_leaf_gain_bound",
    "cluster_leaf_gain_bound",
    "schur_feasible",
    "min_uniform_gain",
    "diag_bounds_check",
    "gershgorin_check",
    "evaluate_plan",
]

SYMMETRY_TOL = 1e-12
# Stop once the off-diagonal Frobenius mass is negligible against the input.
_OFF_DIAG_FACTOR = 1e-12
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending, eigenvector columns in matching order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])


@dataclass(frozen=True)
class SpectralMargin:
    """Whether the controlled spectrum sits strictly below -margin."""

    margin: float
    satisfied: bool
    lambda_max: float


@dataclass(frozen=True)
class DiagBoundsReport:
    """Consistency checks between a Hermitian matrix's diagonal and spectrum.

    diag_within_spectrum: every diagonal entry lies in [lambda_min, lambda_max].
    lambda2_bound_holds: when lambda_max == 0, the two largest diagonal
    entries satisfy a11 + a22 <= lambda_2; None when lambda_max != 0.
    """

    diag_within_spectrum: bool
    lambda2_bound_holds: Optional[bool]


def _off_diag_norm(a: np.ndarray) -> float:
    mask = ~np.eye(a.shape[0], dtype=bool)
    return float(np.sqrt(np.sum(a[mask] ** 2)))


def eig_symmetric(M: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric real matrix by cyclic Jacobi.

    Sweeps all upper-triangle pairs in row order, rotating each away, until
    the off-diagonal norm falls below 1e-12 times the input Frobenius norm.
    Raises ContractViolationError on asymmetric input and
    NumericalFailureError if 100 sweeps do not converge.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        raise ContractViolationError("empty matrix")
    if float(np.max(np.abs(M - M.T))) > SYMMETRY_TOL:
        raise ContractViolationError("matrix is not symmetric within 1e-12")

    n = M.shape[0]
    a = M.copy()
    u = np.eye(n)
    fro = float(np.linalg.norm(M))
    if fro == 0.0:
        return EigenDecomposition(np.zeros(n), u)
    threshold = _OFF_DIAG_FACTOR * fro

    converged = False
    for _ in range(_MAX_SWEEPS):
        if _off_diag_norm(a) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold / n:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e100:
                    t = 1.0 / (2.0 * theta)
                else:
                    sign = 1.0 if theta >= 0 else -1.0
                    t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # Two-sided rotation on rows/columns p and q.
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                ucol_p, ucol_q = u[:, p].copy(), u[:, q].copy()
                u[:, p] = c * ucol_p - s * ucol_q
                u[:, q] = s * ucol_p + c * ucol_q
    else:
        converged = _off_diag_norm(a) <= threshold
    if not converged:
        raise NumericalFailureError(
            f"Jacobi iteration did not converge within {_MAX_SWEEPS} sweeps"
        )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return EigenDecomposition(eigenvalues[order], u[:, order])


def controlled_spectrum(A: np.ndarray, plan: PinningPlan) -> EigenDecomposition:
    """Spectrum of the controlled coupling matrix A - diag(gains)."""
    return eig_symmetric(controlled_coupling(A, plan))


def check_margin(A: np.ndarray, plan: PinningPlan, margin: float) -> SpectralMargin:
    """Test whether every controlled eigenvalue lies strictly below -margin."""
    if margin <= 0:
        raise ContractViolationError("margin must be positive")
    lam_max = controlled_spectrum(A, plan).lambda_max
    return SpectralMargin(margin=margin, satisfied=lam_max < -margin, lambda_max=lam_max)


def star_leaf_gain_bound(n_nodes: int, margin: float) -> float:
    """Sufficient uniform gain for pinning every leaf of a star network.

    Any gain strictly above the returned value pushes all eigenvalues of the
    controlled coupling matrix below -margin. Requires margin < n_nodes - 1
    by a unit; outside that the bound is undefined.
    """
    if margin <= 0:
        raise BoundUndefinedError("margin must be positive")
    if n_nodes - margin - 1 <= 0:
        raise BoundUndefinedError(
            f"bound undefined: need n_nodes - margin - 1 > 0, got {n_nodes - margin - 1}"
        )
    return max(margin - 1.0, margin * (n_nodes - margin) / (n_nodes - margin - 1.0))


def cluster_leaf_gain_bound(n1: int, margin: float) -> float:
    """Sufficient uniform gain for pinning every leaf of a cluster of stars.

    n1 is the smallest branch size; it alone controls the bound. Any gain
    strictly above the returned value pushes all controlled eigenvalues
    below -margin. Requires n1 > margin.
    """
    if margin <= 0:
        raise BoundUndefinedError("margin must be positive")
    if n1 <= margin:
        raise BoundUndefinedError(f"bound undefined: need n1 > margin, got n1={n1}")
    return max(margin - 1.0, margin * (n1 + 1.0 - margin) / (n1 - margin))


def _split_blocks(A: np.ndarray, pinned: Iterable[int]):
    """Permute to (unpinned block first, pinned block second)."""
    n = A.shape[0]
    pinned = sorted(set(int(i) for i in pinned))
    if not pinned:
        raise ContractViolationError("pinned set must be nonempty")
    if len(pinned) >= n:
        raise ContractViolationError("pinned set must be a proper subset")
    if pinned[0] < 0 or pinned[-1] >= n:
        raise ContractViolationError(f"pinned indices outside 0..{n - 1}")
    unpinned = [i for i in range(n) if i not in set(pinned)]
    return unpinned, pinned


def schur_feasible(
    A_full: np.ndarray, pinned: Iterable[int], gains, alpha: float
) -> bool:
    """Block test for the controlled spectrum sitting below -alpha.

    With nodes permuted so the unpinned block A1 comes first, the controlled
    matrix is below -alpha*I exactly when A1 + alpha*I is negative definite
    and so is the Schur complement
    A2 + D - A12^T (A1 + alpha*I)^{-1} A12 + alpha*I,
    where D carries the pinned gains. If any eigenvalue of A1 sits within
    1e-9 of -alpha the pivot is singular and the outcome indeterminate.
    """
    A_full = np.asarray(A_full, dtype=float)
    if alpha <= 0:
        raise ContractViolationError("alpha must be positive")
    unpinned, pinned_list = _split_blocks(A_full, pinned)
    gains = np.asarray(gains, dtype=float)
    if gains.shape != (len(pinned_list),):
        raise ContractViolationError(
            f"expected {len(pinned_list)} gains, got shape {gains.shape}"
        )
    a1 = A_full[np.ix_(unpinned, unpinned)]
    a12 = A_full[np.ix_(unpinned, pinned_list)]
    a2 = A_full[np.ix_(pinned_list, pinned_list)]

    dec1 = eig_symmetric(a1)
    if dec1.lambda_max >= -alpha:
        return False  # first block condition fails; no inverse needed
    if np.min(np.abs(dec1.eigenvalues + alpha)) < 1e-9:
        raise BoundaryCaseError(
            "pivot block is nearly singular at -alpha; feasibility indeterminate"
        )
    # Invert the pivot through its own eigendecomposition.
    inv_pivot = dec1.eigenvectors @ (
        (1.0 / (dec1.eigenvalues + alpha))[:, None] * dec1.eigenvectors.T
    )
    complement = a2 - np.diag(gains) - a12.T @ inv_pivot @ a12 + alpha * np.eye(len(pinned_list))
    complement = 0.5 * (complement + complement.T)  # scrub roundoff asymmetry
    return eig_symmetric(complement).lambda_max < 0.0


def min_uniform_gain(
    A: np.ndarray, pinned: Iterable[int], margin: float, tol: float
) -> Optional[float]:
    """Smallest uniform gain (within tol) pushing the controlled spectrum below -margin.

    Returns None when no finite gain works: the largest eigenvalue of the
    controlled matrix is bounded below by that of the unpinned principal
    block, which is its limit as the gain grows without bound. The
    satisfied-set is an up-set in the gain, so bisection applies.
    """
    if tol <= 0:
        raise ContractViolationError("tol must be positive")
    if margin <= 0:
        raise ContractViolationError("margin must be positive")
    A = np.asarray(A, dtype=float)
    unpinned, pinned_list = _split_blocks(A, pinned)
    a1 = A[np.ix_(unpinned, unpinned)]
    if eig_symmetric(a1).lambda_max >= -margin:
        return None

    def satisfied(eps: float) -> bool:
        a_ctrl = A.copy()
        for i in pinned_list:
            a_ctrl[i, i] -= eps
        return eig_symmetric(a_ctrl).lambda_max < -margin

    if satisfied(0.0):
        return 0.0
    hi = 1.0
    while not satisfied(hi):
        hi *= 2.0
        if hi > 2.0**60:  # unreachable once the block test passed
            raise NumericalFailureError("gain expansion failed to find a feasible point")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if satisfied(mid):
            hi = mid
        else:
            lo = mid
    return hi


def diag_bounds_check(M: np.ndarray) -> DiagBoundsReport:
    """Check the diagonal-vs-spectrum inequalities of a symmetric matrix.

    Every diagonal entry of a Hermitian matrix lies between the extreme
    eigenvalues, and when the largest eigenvalue is zero the two largest
    diagonal entries are bounded above by the second eigenvalue.
    """
    dec = eig_symmetric(M)
    diag = np.diag(np.asarray(M, dtype=float))
    lo, hi = dec.lambda_min, dec.lambda_max
    within = bool(np.all(diag >= lo - 1e-9) and np.all(diag <= hi + 1e-9))
    lambda2_holds: Optional[bool] = None
    if abs(dec.lambda_max) <= 1e-9 and M.shape[0] >= 2:
        top_two = np.sort(diag)[::-1][:2]
        lambda2_holds = bool(top_two[0] + top_two[1] <= dec.eigenvalues[1] + 1e-9)
    return DiagBoundsReport(within, lambda2_holds)


def gershgorin_check(M: np.ndarray) -> bool:
    """Every eigenvalue lies in the union of Gershgorin discs (1e-9 slack)."""
    M = np.asarray(M, dtype=float)
    centers = np.diag(M)
    radii = np.sum(np.abs(M), axis=1) - np.abs(centers)
    eigenvalues = eig_symmetric(M).eigenvalues
    for lam in eigenvalues:
        if not np.any(np.abs(lam - centers) <= radii + 1e-9):
            return False
    return True


def evaluate_plan(A: np.ndarray, plan: PinningPlan) -> CostReport:
    """Cost and controlled spectral radius of a plan on a coupling matrix."""
    return CostReport(
        cf=cost(plan),
        pinned_count=plan.pinned_count,
        lambda_max_controlled=controlled_spectrum(A, plan).lambda_max,
    )
