"""Thermal states, unitary evolution, and multiple-quantum coherence spectra.

The observable chain implemented here: start from the equilibrium state
``exp(beta * Iz) / Z``, evolve it under the two-quantum Hamiltonian for a
time ``tau``, split the evolved matrix into coherence orders (elements whose
magnetization difference is n), and collect the normalized intensities

    J_n = sum_{m_i - m_j = n} |rho_ij|^2 / Tr(rho_eq^2).

The normalization uses the closed form Tr(rho_eq^2) = 2^N cosh^N(beta) / Z^2
rather than the matrix, so a drift in the evolution shows up as sum(J) != 1
instead of being silently absorbed.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BasisMismatch, ConsistencyError, NotADensityMatrix
from .spincore import HermitianOperator, ZeemanBasis

TRACE_ATOL = 1e-12
SPECTRUM_SUM_ATOL = 1e-8


def log_2cosh(x: float) -> float:
    """log(2*cosh(x)) without overflow."""
    ax = abs(float(x))
    return ax + math.log1p(math.exp(-2.0 * ax))


def log_partition(n_spins: int, beta: float) -> float:
    """log Z for the equilibrium state: N * log(2*cosh(beta/2))."""
    return n_spins * log_2cosh(beta / 2.0)


def log_equilibrium_purity(n_spins: int, beta: float) -> float:
    """log Tr(rho_eq^2) from the closed form 2^N cosh^N(beta) / Z^2.

    Always in [-N log 2, 0], so the exponential never overflows.
    """
    return n_spins * (log_2cosh(beta) - 2.0 * log_2cosh(beta / 2.0))


@dataclass(frozen=True)
class DensityMatrix(HermitianOperator):
    """Hermitian, unit-trace state matrix.

    Positive semidefiniteness is not rechecked on every construction (a full
    eigendecomposition per instance would dominate sweep cost); operations
    that need the spectrum, such as the skew information, validate it there.
    """

    def __post_init__(self):
        super().__post_init__()
        tr = self.entries.trace()
        if abs(tr - 1.0) > TRACE_ATOL:
            raise NotADensityMatrix(f"trace is {tr}, expected 1")

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def thermal_state(basis: ZeemanBasis, beta: float, *,
                  allow_negative_beta: bool = False) -> DensityMatrix:
    """Equilibrium state diag(exp(beta*m_i)) / Z on the product basis.

    The maximum exponent is factored out before exponentiating, so any
    finite beta is safe. Negative beta (population inversion) must be
    requested explicitly.
    """
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    if beta < 0 and not allow_negative_beta:
        raise ValueError("negative beta rejected (pass allow_negative_beta=True)")
    p = thermal_populations(basis, beta)
    return DensityMatrix(np.diag(p).astype(complex), basis.tag)


def thermal_populations(basis: ZeemanBasis, beta: float) -> np.ndarray:
    """Diagonal of the equilibrium state, exp(beta*m_i)/Z, overflow-safe."""
    x = beta * basis.magnetization
    p = np.exp(x - x.max())
    return p / p.sum()


class Propagator:
    """One Hermitian eigendecomposition of H, reused for every evolution time.

    Sweeps evaluate many tau values against a fixed Hamiltonian, so the
    factorization is done once here and ``unitary``/``evolve`` are cheap
    matrix products afterwards.
    """

    def __init__(self, hamiltonian: HermitianOperator):
        self.basis_tag = hamiltonian.basis_tag
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(hamiltonian.entries)

    def unitary(self, tau: float) -> np.ndarray:
        """exp(-i H tau) via the cached eigensystem."""
        phase = np.exp(-1j * self.eigenvalues * float(tau))
        return (self.eigenvectors * phase) @ self.eigenvectors.conj().T

    def evolve(self, rho: DensityMatrix, tau: float) -> DensityMatrix:
        if rho.basis_tag != self.basis_tag:
            raise BasisMismatch(
                f"state basis {rho.basis_tag!r} does not match "
                f"Hamiltonian basis {self.basis_tag!r}")
        u = self.unitary(tau)
        return DensityMatrix((u @ rho.entries) @ u.conj().T, rho.basis_tag)


def evolve(rho: DensityMatrix, h: HermitianOperator, tau: float) -> DensityMatrix:
    """rho -> exp(-iH tau) rho exp(+iH tau).

    Convenience wrapper; when evaluating many tau values build a
    :class:`Propagator` once instead.
    """
    if not math.isfinite(float(tau)):
        raise ValueError(f"tau must be finite, got {tau}")
    rho.same_basis(h)
    return Propagator(h).evolve(rho, tau)


def _require_basis(op: HermitianOperator, basis: ZeemanBasis) -> None:
    if op.basis_tag != basis.tag:
        raise BasisMismatch(
            f"operator basis {op.basis_tag!r} does not match {basis.tag!r}")


def coherence_decomposition(rho_pre: DensityMatrix,
                            basis: ZeemanBasis) -> dict[int, np.ndarray]:
    """Split a state into coherence orders rho_n.

    rho_n keeps exactly the elements <i|rho|j> with m(i) - m(j) = n; the
    parts sum back to rho entry-for-entry and satisfy [Iz, rho_n] = n rho_n.
    Intended for moderate sizes; intensity spectra should go through
    :func:`coherence_spectrum`, which never materializes the parts.
    """
    _require_basis(rho_pre, basis)
    n = basis.n_spins
    dm = (basis.twice_m[:, None] - basis.twice_m[None, :]) // 2
    return {order: np.where(dm == order, rho_pre.entries, 0.0)
            for order in range(-n, n + 1)}


@dataclass(frozen=True)
class CoherenceSpectrum:
    """Normalized coherence intensities J_n for n in [-N, N]."""

    n_spins: int
    values: np.ndarray  # length 2N+1, index n + N

    def intensity(self, order: int) -> float:
        n = self.n_spins
        if not -n <= order <= n:
            raise ValueError(f"order {order} outside [-{n}, {n}]")
        return float(self.values[order + n])

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.n_spins, self.n_spins + 1)

    def as_dict(self) -> dict[int, float]:
        return {int(n): float(v) for n, v in zip(self.orders, self.values)}

    def total(self) -> float:
        return float(self.values.sum())


def coherence_spectrum(rho_pre: DensityMatrix, basis: ZeemanBasis,
                       beta: float) -> CoherenceSpectrum:
    """Normalized intensity of each coherence order of an evolved thermal state.

    ``beta`` must be the inverse temperature the initial state was prepared
    at: it enters through the closed-form purity normalization, and a
    mismatch (or a broken evolution) surfaces as sum(J) != 1.
    """
    _require_basis(rho_pre, basis)
    hist = kernels.coherence_histogram(rho_pre.entries, basis.twice_m,
                                       basis.n_spins)
    values = hist * math.exp(-log_equilibrium_purity(basis.n_spins, beta))
    total = values.sum()
    if abs(total - 1.0) > SPECTRUM_SUM_ATOL:
        raise ConsistencyError(
            f"coherence intensities sum to {total!r}, expected 1 "
            f"(was the state really prepared at beta={beta}?)")
    return CoherenceSpectrum(basis.n_spins, values)


def second_moment(spectrum: CoherenceSpectrum) -> float:
    """Dispersion sum(n^2 J_n) of the coherence-order distribution."""
    return float(np.sum(spectrum.orders.astype(float) ** 2 * spectrum.values))


def phase_signal(rho_pre: DensityMatrix, basis: ZeemanBasis,
                 phi: float) -> float:
    """Two-copy overlap Tr{ exp(i phi Iz) rho exp(-i phi Iz) rho }.

    Real for Hermitian input; at phi = 0 it equals the purity. Its Fourier
    coefficients over phi reproduce the unnormalized coherence intensities,
    which is used as an independent cross-check of the spectrum code path.
    """
    _require_basis(rho_pre, basis)
    weights = rho_pre.entries.real ** 2 + rho_pre.entries.imag ** 2
    v = np.exp(1j * float(phi) * basis.magnetization)
    g = v @ weights @ v.conj()
    if abs(g.imag) > 1e-12 * max(1.0, abs(g.real)):
        raise ConsistencyError(f"phase signal has imaginary residue {g.imag}")
    return float(g.real)
