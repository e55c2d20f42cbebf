"""Entanglement and nonlocality diagnostics.

Fock-space quantities (fidelity, mean phonon number, displaced-parity
correlations, CHSH combinations) operate on density matrices; the
Gaussian quantities (EPR criterion helper, logarithmic negativity)
operate on covariance data.  The displaced-parity correlator is the
measurable behind both the Bell test and the Wigner function, so the two
are proportional point by point — a cross-check exercised in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import CovarianceState, symplectic_form
from .hilbert import DensityMatrix, PureState, number_op, expectation
from .states import displaced_parity_expectation, _warn_if_truncated

# Displacements beyond this magnitude push coherent amplitude into the
# truncation edge for typical n_max; reject rather than silently degrade.
MAX_SETTING_MAGNITUDE = 3.0


@dataclass(frozen=True)
class BellSettings:
    """Two displacement settings per mode for a CHSH measurement."""

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    max_magnitude: float = MAX_SETTING_MAGNITUDE

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            val = complex(getattr(self, name))
            object.__setattr__(self, name, val)
            if not np.isfinite(val.real) or not np.isfinite(val.imag):
                raise ValueError(f"{name} must be finite")
            if abs(val) > self.max_magnitude:
                raise ValueError(
                    f"|{name}| = {abs(val):.3g} exceeds the truncation-safety "
                    f"bound {self.max_magnitude}"
                )


def fidelity(rho: DensityMatrix, target: PureState) -> float:
    """Overlap <target| rho |target>, in [0, 1] up to numerical noise."""
    if rho.basis != target.basis:
        raise ValueError(f"basis mismatch: {rho.basis} vs {target.basis}")
    psi = target.normalized().amplitudes
    val = np.real(psi.conj() @ rho.elements @ psi)
    return float(val)


def mean_phonon(rho: DensityMatrix, mode_index: int = 0) -> float:
    """Mean excitation <b† b> on one mode."""
    return float(expectation(rho, number_op(rho.basis, mode_index)).real)


def epr_criterion(var_sum_q: float, var_diff_p: float) -> tuple[float, bool]:
    """Sum-variance entanglement criterion.

    Returns ``(value, entangled)`` with value = Var(Q1+Q2) + Var(P1-P2).
    With vacuum variance 1 per quadrature, every separable state obeys
    value >= 4 (vacuum saturates it), so value < 4 certifies entanglement.
    """
    if var_sum_q < 0 or var_diff_p < 0:
        raise ValueError("variances must be >= 0")
    value = float(var_sum_q + var_diff_p)
    return value, value < 4.0


def parity_correlation(
    rho: DensityMatrix,
    alpha: complex,
    beta: complex,
    max_magnitude: float = MAX_SETTING_MAGNITUDE,
) -> float:
    """Joint displaced-parity correlator E(alpha, beta) in [-1, 1].

    E = <D1(alpha) D2(beta) P1 P2 D2†(beta) D1†(alpha)> — the product of
    displaced even/odd phonon-number measurements on the two modes.
    """
    if rho.basis.n_modes != 2:
        raise ValueError("two-mode density matrix required")
    if abs(alpha) > max_magnitude or abs(beta) > max_magnitude:
        raise ValueError(
            f"displacement magnitude exceeds truncation-safety bound {max_magnitude}"
        )
    _warn_if_truncated(rho, "parity_correlation")
    return displaced_parity_expectation(rho, alpha, beta)


def chsh_value(rho: DensityMatrix, s: BellSettings) -> float:
    """CHSH combination B = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2).

    |B| <= 2 for every separable state; displaced-parity measurements on
    the pair-correlated states here push B above 2 for suitable settings.
    """
    e11 = parity_correlation(rho, s.alpha1, s.beta1, s.max_magnitude)
    e12 = parity_correlation(rho, s.alpha1, s.beta2, s.max_magnitude)
    e21 = parity_correlation(rho, s.alpha2, s.beta1, s.max_magnitude)
    e22 = parity_correlation(rho, s.alpha2, s.beta2, s.max_magnitude)
    return e11 + e12 + e21 - e22


def log_negativity(state: CovarianceState) -> float:
    """Logarithmic negativity (base 2) of a two-mode Gaussian state.

    Computed from the smallest symplectic eigenvalue of the
    partial-transpose covariance (momentum flip on mode 2):
    ``E_N = max(0, -log2(nu_min))``.  Zero for separable Gaussian states;
    ``2 r / ln 2`` for a pure two-mode squeezed state.
    """
    if state.n_modes != 2:
        raise ValueError(f"two-mode state required, got {state.n_modes} modes")
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    cov_pt = flip @ state.cov @ flip
    omega = symplectic_form(2)
    nu = np.abs(np.linalg.eigvals(1j * omega @ cov_pt))
    nu_min = float(np.min(nu))
    if nu_min <= 0:
        raise ValueError("unphysical covariance: vanishing symplectic eigenvalue")
    return max(0.0, -float(np.log2(nu_min)))
