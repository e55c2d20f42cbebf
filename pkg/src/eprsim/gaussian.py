"""Exact Gaussian (first/second moment) dynamics.

The dissipative model is linear in the mode operators, so Gaussian states
stay Gaussian and the full dynamics closes on the mean vector and
covariance matrix.  This module is the independent oracle for the
Fock-space integrator: both must produce the same moments, and the test
suite holds them to each other at 1e-6.

Conventions: quadrature ordering (Q1, P1, Q2, P2, ...), with
``Q = b + b†``, ``P = -i(b - b†)``; the vacuum covariance is the
identity.  Covariance dynamics follow

    dSigma/dt = A Sigma + Sigma A^T + D,      dmu/dt = A mu,

with drift ``A`` and diffusion ``D`` from :class:`DriftDiffusion`.

Three model builders are provided: the two-mode white-noise model
(moment-level image of the master equation), the four-mode cascaded
model in which the source cavity's output drives the motional modes
unidirectionally at finite bandwidth, and the trivial collective-mode
rate map for K-atom ensembles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, solve_continuous_lyapunov

from .lindblad import LindbladModel
from .nopa import NopaParams

SYMMETRY_ATOL = 1e-12
PHYSICALITY_ATOL = 1e-8
LYAPUNOV_RESIDUAL_TOL = 1e-10


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for (Q1, P1, ..., Qn, Pn) ordering."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = j
    return out


@dataclass(frozen=True)
class CovarianceState:
    """Gaussian state: mean vector and covariance (vacuum = identity)."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or len(mean) % 2:
            raise ValueError("mean must be a flat vector of even length")
        if cov.shape != (len(mean), len(mean)):
            raise ValueError(f"cov shape {cov.shape} does not match mean length {len(mean)}")
        asym = np.max(np.abs(cov - cov.T))
        if asym > SYMMETRY_ATOL:
            raise ValueError(f"covariance not symmetric: max asymmetry {asym:.3e}")
        omega = symplectic_form(len(mean) // 2)
        evals = np.linalg.eigvalsh(cov + 1j * omega)
        if evals.min() < -PHYSICALITY_ATOL:
            raise ValueError(
                f"covariance violates the uncertainty bound: min eig(cov + i Omega) "
                f"= {evals.min():.3e}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return len(self.mean) // 2

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceState":
        return cls(np.zeros(2 * n_modes), np.eye(2 * n_modes))


@dataclass(frozen=True)
class DriftDiffusion:
    """Linear moment dynamics: drift A and diffusion D (both 2n x 2n)."""

    drift: np.ndarray
    diffusion: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.drift, dtype=float)
        d = np.asarray(self.diffusion, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
            raise ValueError("drift must be square with even dimension")
        if d.shape != a.shape:
            raise ValueError("diffusion shape must match drift")
        if np.max(np.abs(d - d.T)) > SYMMETRY_ATOL:
            raise ValueError("diffusion must be symmetric")
        if np.linalg.eigvalsh(d).min() < -PHYSICALITY_ATOL:
            raise ValueError("diffusion must be positive semidefinite")
        object.__setattr__(self, "drift", a)
        object.__setattr__(self, "diffusion", d)


def model_from_lindblad(model: LindbladModel) -> DriftDiffusion:
    """Moment-level image of the two-mode master equation.

    Drift is ``-(gamma + heating_rate) * I``; the diffusion carries the
    bath occupation on the diagonal, ``2 gamma (1 + 2N) + 6 heating_rate``
    (the heating channel has occupation 1, hence ``2 h (1 + 2*1) = 6h``),
    and the pair correlation M on the cross blocks with opposite signs
    for Q1Q2 and P1P2.  The resulting steady state has
    ``Var(Q_j) = 1 + 2N`` and ``<Q1 Q2> = -2M``, ``<P1 P2> = +2M``.
    """
    g, n_p, m_p, h = model.gamma, model.n_param, model.m_param, model.heating_rate
    drift = -(g + h) * np.eye(4)
    diag = 2.0 * g * (1.0 + 2.0 * n_p) + 6.0 * h
    diffusion = diag * np.eye(4)
    diffusion[0, 2] = diffusion[2, 0] = -4.0 * g * m_p
    diffusion[1, 3] = diffusion[3, 1] = +4.0 * g * m_p
    return DriftDiffusion(drift, diffusion)


def steady_covariance(dd: DriftDiffusion) -> CovarianceState:
    """Solve ``A S + S A^T + D = 0`` for the stationary covariance."""
    evals = np.linalg.eigvals(dd.drift)
    worst = evals[np.argmax(evals.real)]
    if worst.real >= 0:
        raise ValueError(
            f"drift is not Hurwitz: eigenvalue {worst:.6g} has non-negative real part"
        )
    sigma = solve_continuous_lyapunov(dd.drift, -dd.diffusion)
    sigma = (sigma + sigma.T) / 2.0
    resid = np.linalg.norm(dd.drift @ sigma + sigma @ dd.drift.T + dd.diffusion)
    if resid > LYAPUNOV_RESIDUAL_TOL * max(1.0, np.linalg.norm(dd.diffusion)):
        raise ValueError(f"Lyapunov solve residual {resid:.3e} too large")
    return CovarianceState(np.zeros(sigma.shape[0]), sigma)


def evolve_covariance(state: CovarianceState, dd: DriftDiffusion, t: float) -> CovarianceState:
    """Propagate mean and covariance for a time ``t >= 0``.

    Exact up to matrix-exponential accuracy, via the block trick

        expm([[A, D], [0, -A^T]] t) = [[F11, F12], [0, F22]]

    giving ``Sigma(t) = F11 Sigma F11^T + F12 F11^T`` and
    ``mu(t) = F11 mu``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if state.cov.shape != dd.drift.shape:
        raise ValueError("state and model dimensions differ")
    if t == 0:
        return state
    n2 = state.cov.shape[0]
    block = np.zeros((2 * n2, 2 * n2))
    block[:n2, :n2] = dd.drift
    block[:n2, n2:] = dd.diffusion
    block[n2:, n2:] = -dd.drift.T
    f = expm(block * t)
    f11, f12 = f[:n2, :n2], f[:n2, n2:]
    cov = f11 @ state.cov @ f11.T + f12 @ f11.T
    cov = (cov + cov.T) / 2.0
    return CovarianceState(f11 @ state.mean, cov)


def cascade_model(nopa: NopaParams, gamma: float) -> DriftDiffusion:
    """Four-mode cascaded model: source cavity modes (c1, c2) drive (b1, b2).

    Quadrature ordering (Qc1, Pc1, Qc2, Pc2, Qb1, Pb1, Qb2, Pb2).  The
    source block evolves under pump coupling epsilon and decay kappa_c;
    its output feeds the motional modes through the unidirectional
    coupling ``2 sqrt(gamma kappa_c)`` (drift is block-triangular — no
    back-action on the source).  The shared vacuum inputs give the
    cross-correlated diffusion ``D = B B^T`` with noise rows
    ``sqrt(2 kappa_c)`` for the source and ``-sqrt(2 gamma)`` for the
    motional modes on the same channels.

    In the broadband limit ``kappa_c >> gamma`` the motional block of the
    steady covariance reproduces the white-noise model, with relative
    error scaling linearly in ``gamma / kappa_c``.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    eps, kappa = nopa.epsilon, nopa.kappa_c
    a = np.zeros((8, 8))
    # source block: dc1/dt = -kappa c1 - eps c2† (+ noise), and 1 <-> 2
    a[0:4, 0:4] = -kappa * np.eye(4)
    a[0, 2] = a[2, 0] = -eps   # Q couplings
    a[1, 3] = a[3, 1] = +eps   # P couplings
    # motional block and feed-forward
    ff = 2.0 * np.sqrt(gamma * kappa)
    for m in range(4):
        a[4 + m, 4 + m] = -gamma
        a[4 + m, m] = ff
    noise = np.zeros((8, 4))
    for ch in range(4):
        noise[ch, ch] = np.sqrt(2.0 * kappa)
        noise[4 + ch, ch] = -np.sqrt(2.0 * gamma)
    return DriftDiffusion(a, noise @ noise.T)


def collective_mode_map(k_atoms: int, gamma: float) -> float:
    """Effective rate for the collective mode of K atoms per site.

    With K atoms coupled identically in each trap, the collective modes
    ``B = K**(-1/2) sum_j b_j`` obey the same two-mode model with the
    rate scaled to ``K * gamma``.  The steady state is unchanged — only
    the approach rate grows.
    """
    if k_atoms < 1 or int(k_atoms) != k_atoms:
        raise ValueError(f"k_atoms must be a positive integer, got {k_atoms}")
    return float(k_atoms) * gamma


def epr_variances(state: CovarianceState) -> tuple[float, float]:
    """(Var(Q1+Q2), Var(P1-P2)) for a two-mode Gaussian state."""
    if state.n_modes != 2:
        raise ValueError(f"two-mode state required, got {state.n_modes} modes")
    c = state.cov
    var_sum_q = c[0, 0] + c[2, 2] + 2.0 * c[0, 2]
    var_diff_p = c[1, 1] + c[3, 3] - 2.0 * c[1, 3]
    return float(var_sum_q), float(var_diff_p)
