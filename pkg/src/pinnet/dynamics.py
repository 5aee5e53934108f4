"""Node dynamics and nonlinear simulation of controlled coupled networks.

The network state is an (N, n) array, one row per node. The right-hand side
adds three parts: the isolated-node field applied row-wise, diffusive
coupling c * A x through the inner linking matrix, and feedback
-c * eps_i * Gamma (x_i - s) on pinned nodes. Integration is classical
fixed-step RK4 with a step-size guard tied to a documented stiffness
estimate, so a blown-up run raises instead of masquerading as
non-synchronization.

Local stability of the synchronized state reduces to n-dimensional mode
systems Df(s) + c*lambda_i*Gamma, one per eigenvalue of the controlled
coupling matrix; for three-dimensional nodes their spectral abscissa comes
from the closed-form cubic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ContractViolationError,
    DivergenceError,
    InvalidDomainError,
    RegionShapeError,
)
from .pinning import PinningPlan, cost
from .spectral import eig_symmetric

__all__ = [
    "NodeDynamics",
    "ChenParameters",
    "NetworkSystem",
    "SimulationResult",
    "QuadSampleReport",
    "chen_field",
    "linear_field",
    "network_rhs",
    "integrate_rk4",
    "sync_error",
    "sync_time",
    "mode_matrix",
    "spectral_abscissa_3",
    "mode_threshold",
    "modal_equivalence_check",
    "quad_condition_sample",
]

# Documented stiffness estimate for the chaotic oscillator below; feeds the
# RK4 step-size guard h * (L + c * (|lambda_min(A)| + max gain)) <= 2.5.
CHEN_LIPSCHITZ = 80.0
RK4_STABILITY_SPAN = 2.5


@dataclass(frozen=True)
class NodeDynamics:
    """Isolated-node vector field with its Jacobian.

    `field(x, t)` accepts a single state of shape (n,) or a batch (..., n)
    and returns the same shape; `jacobian(x, t)` takes a single state.
    `lipschitz` is the stiffness estimate used by the integrator guard.
    """

    dimension: int
    field: Callable[[np.ndarray, float], np.ndarray]
    jacobian: Callable[[np.ndarray, float], np.ndarray]
    lipschitz: float
    name: str


@dataclass(frozen=True)
class ChenParameters:
    """Chaotic oscillator parameters; defaults give the standard chaotic regime."""

    a: float = 35.0
    b: float = 3.0
    c: float = 28.0

    def __post_init__(self):
        if 2.0 * self.c - self.a <= 0:
            raise ContractViolationError("need 2c - a > 0 for real equilibria")

    def equilibrium(self, sign: int = 1) -> np.ndarray:
        """Nonzero equilibrium (+-r, +-r, 2c-a) with r = sqrt(b(2c-a))."""
        r = math.sqrt(self.b * (2.0 * self.c - self.a))
        return np.array([sign * r, sign * r, 2.0 * self.c - self.a])


def chen_field(p: ChenParameters = ChenParameters()) -> NodeDynamics:
    """Three-dimensional chaotic oscillator

    dx = a (y - x)
    dy = (c - a) x - x z + c y
    dz = x y - b z
    """
    a, b, c = p.a, p.b, p.c

    def field(x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
        return np.stack(
            [a * (x2 - x1), (c - a) * x1 - x1 * x3 + c * x2, x1 * x2 - b * x3],
            axis=-1,
        )

    def jacobian(x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x1, x2, x3 = x
        return np.array(
            [
                [-a, a, 0.0],
                [(c - a) - x3, c, -x1],
                [x2, x1, -b],
            ]
        )

    return NodeDynamics(3, field, jacobian, CHEN_LIPSCHITZ, "chen")


def linear_field(F: np.ndarray) -> NodeDynamics:
    """Linear test system dx = F x with constant Jacobian F."""
    F = np.asarray(F, dtype=float)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ContractViolationError(f"F must be square, got shape {F.shape}")
    n = F.shape[0]
    spectral_norm = math.sqrt(max(eig_symmetric(F.T @ F).lambda_max, 0.0))

    def field(x: np.ndarray, t: float) -> np.ndarray:
        return np.asarray(x, dtype=float) @ F.T

    def jacobian(x: np.ndarray, t: float) -> np.ndarray:
        return F.copy()

    return NodeDynamics(n, field, jacobian, spectral_norm, "linear")


@dataclass(frozen=True)
class NetworkSystem:
    """A coupled controlled network: dynamics, coupling matrix, plan, target."""

    dynamics: NodeDynamics
    coupling: np.ndarray
    plan: PinningPlan
    gamma: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        n = self.dynamics.dimension
        object.__setattr__(self, "coupling", np.asarray(self.coupling, dtype=float))
        object.__setattr__(self, "gamma", np.asarray(self.gamma, dtype=float))
        object.__setattr__(self, "target", np.asarray(self.target, dtype=float))
        N = self.plan.n_nodes
        if self.coupling.shape != (N, N):
            raise ContractViolationError(
                f"coupling shape {self.coupling.shape} vs plan on {N} nodes"
            )
        if self.gamma.shape != (n,) or not np.all(np.isin(self.gamma, (0.0, 1.0))):
            raise ContractViolationError("gamma must be a length-n 0/1 vector")
        if self.target.shape != (n,):
            raise ContractViolationError(f"target must have shape ({n},)")
        resid = float(np.linalg.norm(self.dynamics.field(self.target, 0.0)))
        if resid > 1e-3:
            raise ContractViolationError(
                f"target is not an equilibrium of the node field (|f(s)|={resid:.3g})"
            )

    @property
    def n_nodes(self) -> int:
        return self.plan.n_nodes


@dataclass
class SimulationResult:
    """Recorded trajectory, per-step synchronization error, and plan cost."""

    times: np.ndarray
    states: np.ndarray
    error_metric: np.ndarray
    cf: float
    sync_time: Optional[float] = dataclass_field(default=None)


def network_rhs(sys: NetworkSystem, X: np.ndarray, t: float) -> np.ndarray:
    """Row i: f(x_i, t) + c * sum_j A_ij Gamma x_j - c * eps_i * Gamma (x_i - s)."""
    X = np.asarray(X, dtype=float)
    if X.shape != (sys.n_nodes, sys.dynamics.dimension):
        raise ContractViolationError(
            f"state shape {X.shape}, expected {(sys.n_nodes, sys.dynamics.dimension)}"
        )
    c = sys.plan.coupling_strength
    out = sys.dynamics.field(X, t)
    if c != 0.0:
        out = out + c * (sys.coupling @ X) * sys.gamma
        eps = sys.plan.gain_array()
        if np.any(eps):
            out = out - c * eps[:, None] * (sys.gamma * (X - sys.target))
    return out


def sync_error(states: np.ndarray, target: np.ndarray) -> float:
    """Largest Euclidean node deviation from the target state."""
    diff = np.asarray(states, dtype=float) - np.asarray(target, dtype=float)
    return float(np.max(np.sqrt(np.sum(diff * diff, axis=-1))))


def integrate_rk4(
    sys: NetworkSystem,
    X0: np.ndarray,
    h: float,
    T: float,
    record_every: int = 1,
) -> SimulationResult:
    """Fixed-step classical RK4 over [0, T], recording every `record_every` steps.

    Refuses steps outside the stability guard
    h * (L_f + c * (|lambda_min(A)| + max gain)) <= 2.5, and raises
    DivergenceError (with the blow-up time) if the state goes non-finite.
    """
    if h <= 0:
        raise ContractViolationError("h must be positive")
    if T < h:
        raise ContractViolationError("T must be at least one step")
    if record_every < 1:
        raise ContractViolationError("record_every must be >= 1")
    X = np.array(X0, dtype=float)
    if X.shape != (sys.n_nodes, sys.dynamics.dimension):
        raise ContractViolationError(
            f"initial state shape {X.shape}, expected {(sys.n_nodes, sys.dynamics.dimension)}"
        )

    c = sys.plan.coupling_strength
    stiffness = sys.dynamics.lipschitz
    if c != 0.0:
        lam_min = eig_symmetric(sys.coupling).lambda_min
        stiffness += c * (abs(lam_min) + max(sys.plan.gains))
    if h * stiffness > RK4_STABILITY_SPAN:
        raise ContractViolationError(
            f"step h={h:g} exceeds the stability guard "
            f"{RK4_STABILITY_SPAN:g}/{stiffness:g} = {RK4_STABILITY_SPAN / stiffness:.3g}"
        )

    steps = int(round(T / h))
    n_records = steps // record_every + 1
    times = np.empty(n_records)
    states = np.empty((n_records, sys.n_nodes, sys.dynamics.dimension))
    errors = np.empty(n_records)

    def record(idx: int, t: float) -> None:
        times[idx] = t
        states[idx] = X
        errors[idx] = sync_error(X, sys.target)

    record(0, 0.0)
    rec = 1
    # Overflow is handled explicitly via the finiteness check, so numpy's
    # warnings would only be noise on a run that is about to raise anyway.
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, steps + 1):
            t = (step - 1) * h
            k1 = network_rhs(sys, X, t)
            k2 = network_rhs(sys, X + 0.5 * h * k1, t + 0.5 * h)
            k3 = network_rhs(sys, X + 0.5 * h * k2, t + 0.5 * h)
            k4 = network_rhs(sys, X + h * k3, t + h)
            X = X + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(X)):
                raise DivergenceError(step * h)
            if step % record_every == 0:
                record(rec, step * h)
                rec += 1
    return SimulationResult(
        times=times[:rec],
        states=states[:rec],
        error_metric=errors[:rec],
        cf=cost(sys.plan),
    )


def sync_time(result: SimulationResult, tol: float) -> Optional[float]:
    """Earliest recorded time after which the error stays below tol; None if never."""
    if tol <= 0:
        raise ContractViolationError("tol must be positive")
    above = np.nonzero(result.error_metric >= tol)[0]
    if len(above) == 0:
        return float(result.times[0])
    if above[-1] == len(result.times) - 1:
        return None
    return float(result.times[above[-1] + 1])


def mode_matrix(sys: NetworkSystem, lambda_i: float) -> np.ndarray:
    """Mode system matrix Df(s) + c * lambda_i * Gamma."""
    jac = sys.dynamics.jacobian(sys.target, 0.0)
    return jac + sys.plan.coupling_strength * lambda_i * np.diag(sys.gamma)


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def spectral_abscissa_3(M: np.ndarray) -> float:
    """Max real part of the eigenvalues of a 3x3 matrix, via the closed-form cubic.

    The characteristic polynomial s^3 + a1 s^2 + a2 s + a3 is depressed and
    solved trigonometrically (three real roots) or by Cardano's formula (one
    real root plus a conjugate pair whose real part is -y1/2 - a1/3).
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise ContractViolationError(f"expected a 3x3 matrix, got shape {M.shape}")
    tr = float(np.trace(M))
    tr2 = float(np.trace(M @ M))
    det = float(
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )
    a1 = -tr
    a2 = 0.5 * (tr * tr - tr2)
    a3 = -det

    p = a2 - a1 * a1 / 3.0
    q = 2.0 * a1**3 / 27.0 - a1 * a2 / 3.0 + a3
    shift = -a1 / 3.0
    disc = -4.0 * p**3 - 27.0 * q * q
    if disc < 0.0:
        # One real root; the conjugate pair has real part -y1/2.
        w = math.sqrt(q * q / 4.0 + p**3 / 27.0)
        y1 = _cbrt(-q / 2.0 + w) + _cbrt(-q / 2.0 - w)
        return max(y1, -0.5 * y1) + shift
    if p == 0.0:
        return shift  # triple root
    m = 2.0 * math.sqrt(-p / 3.0)
    cos3 = 3.0 * q / (p * m)
    phi = math.acos(min(1.0, max(-1.0, cos3)))
    return m * math.cos(phi / 3.0) + shift


def mode_threshold(sys: NetworkSystem, tol: float) -> float:
    """Stability boundary of the mode systems along the coupling axis.

    Returns sigma* < 0 with Df(s) + sigma*Gamma stable for sigma below it and
    unstable at it, located by bisection to `tol`. Network modes with
    c * lambda_i < sigma* are locally stable. Raises RegionShapeError when the
    search bracket shows no sign change or stability is not one-sided.
    """
    if tol <= 0:
        raise ContractViolationError("tol must be positive")
    if sys.dynamics.dimension != 3:
        raise ContractViolationError("mode threshold implemented for 3-dimensional nodes")
    jac = sys.dynamics.jacobian(sys.target, 0.0)
    gamma_diag = np.diag(sys.gamma)

    def abscissa(sigma: float) -> float:
        return spectral_abscissa_3(jac + sigma * gamma_diag)

    lo, hi = -1.0e4, 0.0
    if abscissa(hi) < 0.0:
        raise RegionShapeError("mode system already stable at sigma = 0")
    if abscissa(lo) >= 0.0:
        raise RegionShapeError(f"mode system not stable at sigma = {lo:g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if abscissa(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    sigma_star = hi
    for probe in (1.5 * sigma_star - 1.0, 2.0 * sigma_star - 10.0, -1.0e4):
        if abscissa(probe) >= 0.0:
            raise RegionShapeError(
                f"stability region is not one-sided: unstable at sigma = {probe:g}"
            )
    return sigma_star


def _rk4_path(rhs, Y0: np.ndarray, h: float, steps: int) -> list[np.ndarray]:
    Y = Y0.copy()
    path = [Y.copy()]
    for _ in range(steps):
        k1 = rhs(Y)
        k2 = rhs(Y + 0.5 * h * k1)
        k3 = rhs(Y + 0.5 * h * k2)
        k4 = rhs(Y + h * k3)
        Y = Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        path.append(Y.copy())
    return path


def modal_equivalence_check(
    F: np.ndarray,
    A_tilde: np.ndarray,
    c: float,
    gamma: np.ndarray,
    e0: np.ndarray,
    h: float,
    T: float,
) -> float:
    """Max deviation between the coupled linear error system and its modes.

    Integrates both the full system E' = E F^T + c (A~ E) Gamma and the N
    decoupled modes obtained through the orthogonal eigenbasis of A~, then
    maps the modes back and reports the largest absolute difference over
    all recorded times. Exact modal decoupling means this is pure roundoff.
    """
    F = np.asarray(F, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    e0 = np.asarray(e0, dtype=float)
    dec = eig_symmetric(A_tilde)
    U, lam = dec.eigenvectors, dec.eigenvalues
    steps = int(round(T / h))

    def full_rhs(E):
        return E @ F.T + c * (np.asarray(A_tilde) @ E) * gamma

    def mode_rhs(Et):
        return Et @ F.T + c * lam[:, None] * (Et * gamma)

    full_path = _rk4_path(full_rhs, e0, h, steps)
    mode_path = _rk4_path(mode_rhs, U.T @ e0, h, steps)
    deviation = 0.0
    for E_full, E_modes in zip(full_path, mode_path):
        deviation = max(deviation, float(np.max(np.abs(E_full - U @ E_modes))))
    return deviation


@dataclass(frozen=True)
class QuadSampleReport:
    """Sampled (not proved) one-sided contraction estimate.

    holds_on_samples: every sampled pair satisfied the strict inequality.
    mu_estimate: negated worst sampled quadratic-form ratio.
    """

    holds_on_samples: bool
    mu_estimate: float


def quad_condition_sample(
    dynamics: NodeDynamics,
    P: np.ndarray,
    c: float,
    margin: float,
    gamma: np.ndarray,
    box: tuple[np.ndarray, np.ndarray],
    samples: int,
    seed: int,
) -> QuadSampleReport:
    """Sample the contraction inequality
    (x-y)^T P (f(x) - f(y) - c*margin*Gamma(x-y)) <= -mu |x-y|^2 on a box.

    Draws `samples` pairs uniformly (seeded), evaluates the quadratic-form
    ratio q for each, and reports whether all q < 0 together with
    mu_estimate = -max q. A sampling check only, not a proof.
    """
    if samples < 1:
        raise ContractViolationError("samples must be >= 1")
    P = np.asarray(P, dtype=float)
    n = dynamics.dimension
    if P.shape != (n, n) or np.any(P != np.diag(np.diag(P))) or np.any(np.diag(P) <= 0):
        raise ContractViolationError("P must be a positive diagonal matrix")
    gamma = np.asarray(gamma, dtype=float)
    lo = np.asarray(box[0], dtype=float)
    hi = np.asarray(box[1], dtype=float)
    if lo.shape != (n,) or hi.shape != (n,) or np.any(hi <= lo):
        raise InvalidDomainError("box must have positive volume in every coordinate")

    rng = np.random.Generator(np.random.PCG64(seed))
    p_diag = np.diag(P)
    worst = -math.inf
    remaining = samples
    while remaining > 0:
        x = rng.uniform(lo, hi, size=(remaining, n))
        y = rng.uniform(lo, hi, size=(remaining, n))
        d = x - y
        norms2 = np.sum(d * d, axis=1)
        keep = norms2 > 0.0
        if not np.any(keep):
            continue
        x, y, d, norms2 = x[keep], y[keep], d[keep], norms2[keep]
        rhs = dynamics.field(x, 0.0) - dynamics.field(y, 0.0) - c * margin * (d * gamma)
        q = np.sum(d * (rhs * p_diag), axis=1) / norms2
        worst = max(worst, float(np.max(q)))
        remaining -= len(q)
    return QuadSampleReport(holds_on_samples=worst < 0.0, mu_estimate=-worst)
