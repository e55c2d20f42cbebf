"""Two-mode dissipative dynamics with a correlated (pair-squeezed) bath.

The generator implemented here is, term for term,

    drho/dt =  G(N+1) sum_j (2 bj rho bj† - bj†bj rho - rho bj†bj)
             + G N     sum_j (2 bj† rho bj - bj bj† rho - rho bj bj†)
             + 2 G M (b1 rho b2 + b2 rho b1 - b1 b2 rho - rho b1 b2)
             + 2 G M (b1† rho b2† + b2† rho b1† - b1†b2† rho - rho b1†b2†)

with G the motional coupling rate and (N, M) the effective bath
parameters of the driving light.  The factor-of-2 convention is fixed by
the relaxation law <n_j>(t) = N (1 - exp(-2 G t)) from vacuum, which the
test suite enforces against closed forms and against the independent
Gaussian-covariance propagator.

An optional heating channel (thermal dissipator pair with occupation
n_th = 1, scaled by ``heating_rate``) models extraneous motional
decoherence; it is an add-on diagnostic, not part of the driven model.

The generator conserves the index difference
``delta = (m0 - n0) - (m1 - n1)`` of a matrix element
``<m0 m1| rho |n0 n1>``, and every state reachable from vacuum (and the
steady state itself) lives in the ``delta = 0`` sector.  Steady-state
solves and vacuum-start integrations are therefore performed on that
sector, which cuts the unknown count from ``n_max**4`` to roughly
``n_max**3``; results are identical to full-space solves and are checked
against the dense generator in the tests.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import splu

from .hilbert import (
    DensityMatrix,
    FockBasis,
    ModeOperator,
    annihilation_op,
)
from .states import TruncationWarning

log = logging.getLogger(__name__)

STEADY_RESIDUAL_TOL = 1e-8
EVOLVE_RTOL = 1e-9
EVOLVE_ATOL = 1e-12


class NumericalError(RuntimeError):
    """A solver failed to reach its accuracy contract."""


@dataclass(frozen=True)
class LindbladModel:
    """Rates defining the two-mode master equation.

    gamma        : motional coupling rate (angular frequency units)
    n_param      : effective thermal occupation N of the driving bath
    m_param      : cross-mode correlation M, 0 <= M <= sqrt(N(N+1))
    heating_rate : optional extraneous heating channel rate (default 0)
    """

    gamma: float
    n_param: float
    m_param: float
    heating_rate: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.n_param < 0:
            raise ValueError(f"n_param must be >= 0, got {self.n_param}")
        m_max = np.sqrt(self.n_param * (self.n_param + 1.0))
        if not 0 <= self.m_param <= m_max * (1 + 1e-12) + 1e-15:
            raise ValueError(
                f"m_param must satisfy 0 <= M <= sqrt(N(N+1)) = {m_max:.6g}, "
                f"got {self.m_param}"
            )
        if self.heating_rate < 0:
            raise ValueError(f"heating_rate must be >= 0, got {self.heating_rate}")


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory of density matrices with recorded second moments."""

    times: np.ndarray
    states: list[DensityMatrix]
    n1: np.ndarray        # <b1† b1>(t), real
    n2: np.ndarray        # <b2† b2>(t), real
    b1b2: np.ndarray      # <b1 b2>(t), complex


def _terms(model: LindbladModel, basis: FockBasis):
    """Generator as a list of (coeff, A, B) meaning sum coeff * A rho B.

    A and B are sparse (the ladder operators are banded); coefficients
    and matrix entries are real.
    """
    g, n_p, m_p, h = model.gamma, model.n_param, model.m_param, model.heating_rate
    b1 = sp.csr_matrix(annihilation_op(basis, 0).elements.real)
    b2 = sp.csr_matrix(annihilation_op(basis, 1).elements.real)
    b1d, b2d = b1.T.tocsr(), b2.T.tocsr()
    eye = sp.identity(basis.dimension, format="csr")
    terms = []

    def dissipator(rate, lop, lopd):
        # rate * (2 L rho L† - L†L rho - rho L†L)
        ldl = lopd @ lop
        terms.append((2.0 * rate, lop, lopd))
        terms.append((-rate, ldl, eye))
        terms.append((-rate, eye, ldl))

    for b, bd in ((b1, b1d), (b2, b2d)):
        dissipator(g * (n_p + 1.0), b, bd)
        dissipator(g * n_p, bd, b)
        if h > 0:
            dissipator(2.0 * h, b, bd)   # (n_th + 1) = 2
            dissipator(1.0 * h, bd, b)   # n_th = 1
    if m_p != 0:
        c = 2.0 * g * m_p
        pair = b1 @ b2
        paird = b1d @ b2d
        terms.append((c, b1, b2))
        terms.append((c, b2, b1))
        terms.append((-c, pair, eye))
        terms.append((-c, eye, pair))
        terms.append((c, b1d, b2d))
        terms.append((c, b2d, b1d))
        terms.append((-c, paird, eye))
        terms.append((-c, eye, paird))
    return terms


class Superoperator:
    """Linear map on vectorized (row-major) density matrices.

    Stores the generator as a list of left/right factor pairs; the sparse
    matrix ``kron(A, B.T)`` form is materialized on first access of
    :attr:`matrix` (cheap up to moderate ``n_max``; avoid for very large
    bases where :meth:`apply` suffices).
    """

    def __init__(self, basis: FockBasis, terms):
        self.basis = basis
        self.terms = terms

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        d = self.basis.dimension
        out = sp.csr_matrix((d * d, d * d))
        for coeff, a, b in self.terms:
            out = out + coeff * sp.kron(a, b.T, format="csr")
        return out

    def apply(self, rho_elements: np.ndarray) -> np.ndarray:
        """Generator applied to a (matrix-shaped) density operator."""
        out = np.zeros_like(rho_elements, dtype=complex)
        for coeff, a, b in self.terms:
            out += coeff * (a @ rho_elements @ b)
        return out

    def apply_to(self, rho: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(self.basis, self.apply(rho.elements))


def build_superoperator(model: LindbladModel, basis: FockBasis) -> Superoperator:
    """Assemble the master-equation generator on a two-mode basis."""
    if basis.n_modes != 2:
        raise ValueError("the correlated-bath master equation is a two-mode model")
    return Superoperator(basis, _terms(model, basis))


# ---------------------------------------------------------------------------
# delta-sector machinery
# ---------------------------------------------------------------------------

def _sector_indices(basis: FockBasis):
    """Vectorized-element indices of the conserved delta = 0 sector.

    Returns (indices, positions): ``indices`` lists the d*d vec positions
    in the sector; ``positions`` is the inverse map (-1 outside).
    """
    n = basis.n_max
    d = basis.dimension
    vec = np.arange(d * d)
    u, v = vec // d, vec % d
    m0, m1 = u // n, u % n
    n0, n1 = v // n, v % n
    mask = (m0 - n0) == (m1 - n1)
    indices = np.nonzero(mask)[0]
    positions = np.full(d * d, -1, dtype=np.int64)
    positions[indices] = np.arange(len(indices))
    return indices, positions


def _sector_matrix(terms, basis: FockBasis, positions: np.ndarray, size: int):
    """Generator restricted to the delta = 0 sector, as sparse CSC.

    Built generically from the (coeff, A, B) factor pairs: the superoperator
    entry ((u,v), (a,c)) of ``A rho B`` is ``A[u,a] * B[c,v]``.
    """
    d = basis.dimension
    rows, cols, vals = [], [], []
    for coeff, a_mat, b_mat in terms:
        a_coo = sp.coo_matrix(a_mat)
        b_coo = sp.coo_matrix(b_mat)
        na, nb = a_coo.nnz, b_coo.nnz
        if na == 0 or nb == 0:
            continue
        u = np.repeat(a_coo.row.astype(np.int64), nb)
        a = np.repeat(a_coo.col.astype(np.int64), nb)
        va = np.repeat(a_coo.data, nb)
        c = np.tile(b_coo.row.astype(np.int64), na)
        v = np.tile(b_coo.col.astype(np.int64), na)
        vb = np.tile(b_coo.data, na)
        tgt = positions[u * d + v]
        src = positions[a * d + c]
        keep = (tgt >= 0) & (src >= 0)
        rows.append(tgt[keep])
        cols.append(src[keep])
        vals.append(coeff * va[keep] * vb[keep])
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )
    return mat.tocsc()


def _scatter(sector_vec, indices, basis: FockBasis) -> np.ndarray:
    d = basis.dimension
    full = np.zeros(d * d, dtype=complex)
    full[indices] = sector_vec
    return full.reshape(d, d)


def _top_level_population(rho: DensityMatrix) -> float:
    n = rho.basis.n_max
    pops = np.real(np.diag(rho.elements)).reshape(n, n)
    return float(pops[n - 1, :].sum() + pops[:, n - 1].sum() - pops[n - 1, n - 1])


def steady_state(
    model: LindbladModel,
    basis: FockBasis,
    residual_tol: float = STEADY_RESIDUAL_TOL,
) -> DensityMatrix:
    """Steady state of the master equation.

    Solved by shifted inverse iteration (targeting eigenvalue zero) on the
    sector-restricted sparse generator; falls back to long-time integration
    (t = 20 / gamma from vacuum) if the iteration stalls.  The returned
    state is Hermitized, trace-normalized, and certified by the generator
    residual ``||L(rho)||_F < residual_tol``.
    """
    if basis.n_modes != 2:
        raise ValueError("the correlated-bath master equation is a two-mode model")
    terms = _terms(model, basis)
    indices, positions = _sector_indices(basis)
    size = len(indices)
    l_sec = _sector_matrix(terms, basis, positions, size)
    log.info("steady_state: sector size %d, nnz %d", size, l_sec.nnz)

    vec = _inverse_iteration(l_sec, model.gamma, size)
    if vec is None:
        log.warning("inverse iteration stalled; falling back to long-time integration")
        vec = _integrate_to_steady(l_sec, indices, basis, model.gamma)

    rho_el = _scatter(vec, indices, basis)
    rho_el = (rho_el + rho_el.conj().T) / 2.0
    tr = np.trace(rho_el).real
    if abs(tr) < 1e-300:
        raise NumericalError("steady-state solve returned a traceless vector")
    rho_el /= tr

    # certify on the final (hermitized, normalized) state
    resid = float(np.linalg.norm(l_sec @ rho_el.reshape(-1)[indices]))
    if resid >= residual_tol:
        # inverse iteration result did not certify; try the fallback path once
        vec = _integrate_to_steady(l_sec, indices, basis, model.gamma)
        rho_el = _scatter(vec, indices, basis)
        rho_el = (rho_el + rho_el.conj().T) / 2.0
        rho_el /= np.trace(rho_el).real
        resid = float(np.linalg.norm(l_sec @ rho_el.reshape(-1)[indices]))
        if resid >= residual_tol:
            raise NumericalError(
                f"steady-state residual {resid:.3e} exceeds tolerance {residual_tol:.0e}"
            )
    log.info("steady_state: certified residual %.3e", resid)

    rho = DensityMatrix(basis, rho_el)
    pop = _top_level_population(rho)
    if pop > 1e-4:
        warnings.warn(
            f"steady_state: top Fock level holds population {pop:.2e}; "
            "increase n_max",
            TruncationWarning,
            stacklevel=2,
        )
    return rho


def _inverse_iteration(l_sec, gamma, size, shift_frac=1e-2, max_iter=8):
    """Shifted inverse iteration for the zero mode; None if it stalls."""
    shift = shift_frac * gamma
    ident = sp.identity(size, format="csc")
    try:
        lu = splu((l_sec - shift * ident).tocsc())
    except RuntimeError as exc:  # singular factorization
        log.warning("sparse LU failed: %s", exc)
        return None
    start = np.ones(size)  # deterministic start with overlap on the zero mode
    x = start / np.linalg.norm(start)
    best, best_res = None, np.inf
    for _ in range(max_iter):
        x = lu.solve(x)
        x /= np.linalg.norm(x)
        res = float(np.linalg.norm(l_sec @ x))
        if res < best_res:
            best, best_res = x, res
        if res < 1e-13 * max(1.0, abs(gamma)):
            break
    if best is None or not np.all(np.isfinite(best)):
        return None
    return best


def _integrate_to_steady(l_sec, indices, basis: FockBasis, gamma):
    """Integrate the sector ODE from vacuum to t = 20/gamma."""
    d = basis.dimension
    vac = np.zeros(d * d)
    vac[0] = 1.0  # |0,0><0,0| sits at vec index 0, inside the sector
    y0 = vac[indices].astype(float)
    sol = solve_ivp(
        lambda _, y: l_sec @ y,
        (0.0, 20.0 / gamma),
        y0,
        method="DOP853",
        rtol=EVOLVE_RTOL,
        atol=EVOLVE_ATOL,
    )
    if not sol.success:
        raise NumericalError(f"long-time integration failed: {sol.message}")
    return sol.y[:, -1]


def evolve(rho0: DensityMatrix, model: LindbladModel, times) -> EvolutionResult:
    """Integrate the master equation through the given (increasing) times.

    ``rho0`` is the state at ``times[0]``.  Uses adaptive high-order
    explicit stepping at rtol 1e-9 on the vectorized state; the relevant
    eigenvalues scale like gamma * O(n_max), which is mild stiffness.
    States whose support lies in the conserved sector (e.g. vacuum or any
    number-diagonal-correlated start) are integrated on the sector alone.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-D array")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    basis = rho0.basis
    if basis.n_modes != 2:
        raise ValueError("the correlated-bath master equation is a two-mode model")
    rho0.validate()

    if len(times) == 1:
        states = [rho0]
        return _with_moments(times, states, basis)

    terms = _terms(model, basis)
    indices, positions = _sector_indices(basis)
    vec0 = rho0.elements.reshape(-1)
    outside = np.delete(vec0, indices)
    in_sector = not outside.size or float(np.max(np.abs(outside))) < 1e-15

    if in_sector:
        mat = _sector_matrix(terms, basis, positions, len(indices))
        y0 = vec0[indices]
    else:
        mat = Superoperator(basis, terms).matrix
        y0 = vec0

    sol = solve_ivp(
        lambda _, y: mat @ y,
        (times[0], times[-1]),
        y0.astype(complex),
        method="DOP853",
        rtol=EVOLVE_RTOL,
        atol=EVOLVE_ATOL,
        t_eval=times,
    )
    if not sol.success:
        raise NumericalError(f"integrator failed: {sol.message}")

    states = []
    for k in range(sol.y.shape[1]):
        if in_sector:
            el = _scatter(sol.y[:, k], indices, basis)
        else:
            el = sol.y[:, k].reshape(basis.dimension, basis.dimension)
        el = (el + el.conj().T) / 2.0
        states.append(DensityMatrix(basis, el))
    return _with_moments(times, states, basis)


def _with_moments(times, states, basis: FockBasis) -> EvolutionResult:
    n = basis.n_max
    diag_n = np.arange(n, dtype=float)
    n1_op = np.kron(np.diag(diag_n), np.eye(n))
    n2_op = np.kron(np.eye(n), np.diag(diag_n))
    b = np.diag(np.sqrt(np.arange(1.0, n)), k=1)
    b1b2 = np.kron(b, b)
    n1 = np.array([np.sum(s.elements * n1_op.T).real for s in states])
    n2 = np.array([np.sum(s.elements * n2_op.T).real for s in states])
    cross = np.array([complex(np.sum(s.elements * b1b2.T)) for s in states])
    return EvolutionResult(np.asarray(times, float), states, n1, n2, cross)


def purity(rho: DensityMatrix) -> float:
    """``trace(rho @ rho)`` — 1 for pure states, 1/d for maximally mixed."""
    el = rho.elements
    return float(np.sum(el * el.T).real)
