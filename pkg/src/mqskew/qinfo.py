"""Skew information, Fisher information, and entanglement-depth certificates.

Normalization conventions (chosen so that all identities below hold
simultaneously, and stated here because the literature is split):

* skew information  I_WY(rho, Iz) = -2 Tr([sqrt(rho), Iz]^2).
  For a pure state this equals 4*Var(Iz); a GHZ state of N spins gives N^2.
* Fisher information I_F(rho, Iz) = 2 sum_{i,j} (l_i - l_j)^2 / (l_i + l_j)
  |<i|Iz|j>|^2 over ordered eigenpair indices (the standard metrological
  convention). For a pure state this also equals 4*Var(Iz), so I_F tends to
  I_WY, not 2*I_WY, in the zero-temperature limit.

Under these conventions:

* I_WY <= I_F <= 2*I_WY for every state (the skew/Fisher sandwich), with the
  lower end saturated by pure states;
* for a thermal state evolved unitarily, I_WY at inverse temperature beta
  equals twice the coherence second moment at beta/2, which is therefore a
  measurable lower bound on I_F at the same beta;
* both quantities are capped by N^2, and either exceeding
  m*k^2 + (N - m*k)^2 (m = floor(N/k)) certifies (k+1)-spin entanglement.

Beware the tempting shortcut of doubling the second moment at full beta:
2*M2(tau, beta) generally *exceeds* I_F at finite temperature (it only
converges to it as beta -> infinity), so it is not a valid bound. The
reported bound is always 2*M2(tau, beta/2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (DensityMatrix, Propagator, coherence_spectrum,
                       second_moment, thermal_populations)
from .errors import ConsistencyError, NotADensityMatrix
from .spincore import (DEFAULT_DENSE_CAP, HermitianOperator, SpinSystem,
                       build_iz, build_mq_hamiltonian, build_zeeman_basis)

EIGENVALUE_CLAMP = 1e-12     # roundoff negatives silently set to zero
EIGENVALUE_REJECT = 1e-9     # anything below this is a broken input
QFI_DENOMINATOR_FLOOR = 1e-300
CROSS_CHECK_RTOL = 1e-6
PAIR_RTOL = 1e-8


def _clamped_spectrum(eigenvalues: np.ndarray, what: str) -> np.ndarray:
    lo = float(eigenvalues.min(initial=0.0))
    if lo < -EIGENVALUE_REJECT:
        raise NotADensityMatrix(f"{what} has eigenvalue {lo} < -{EIGENVALUE_REJECT}")
    return np.clip(eigenvalues, 0.0, None)


def wy_skew_direct(rho: DensityMatrix, iz: HermitianOperator) -> float:
    """Skew information -2 Tr([sqrt(rho), Iz]^2) from the matrix square root.

    The square root comes from an eigendecomposition of rho with tiny
    negative eigenvalues (roundoff) clamped to zero; genuinely negative
    spectra are rejected.
    """
    rho.same_basis(iz)
    lam, vec = np.linalg.eigh(rho.entries)
    lam = _clamped_spectrum(lam, "state")
    root = (vec * np.sqrt(lam)) @ vec.conj().T
    comm = root @ iz.entries - iz.entries @ root
    trace = np.einsum("ij,ji->", comm, comm)
    value = -2.0 * trace
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ConsistencyError(f"skew information has imaginary part {value.imag}")
    return max(0.0, float(value.real))


def wy_skew_via_spectrum(m2_at_half_beta: float) -> float:
    """Skew information from the coherence route: twice the second moment.

    The argument must be the second moment of the spectrum taken at *half*
    the inverse temperature of the state (same evolution time); see the
    module docstring.
    """
    m2 = float(m2_at_half_beta)
    if m2 < 0:
        raise ValueError(f"second moment must be >= 0, got {m2}")
    return 2.0 * m2


def qfi(eigenvalues, eigenvectors, iz: HermitianOperator) -> float:
    """Spectral Fisher information of a state given its eigensystem.

    2 sum_{ij} (l_i - l_j)^2/(l_i + l_j) |<i|Iz|j>|^2 over ordered pairs;
    terms whose denominator is below 1e-300 are skipped (their weight
    vanishes there anyway). For a thermal state evolved under a Hamiltonian
    the eigenvalues are the initial populations and the eigenvectors the
    columns of the evolution operator, so no diagonalization is needed.
    """
    lam = _clamped_spectrum(np.asarray(eigenvalues, dtype=float), "eigenvalues")
    vec = np.asarray(eigenvectors)
    a = (vec.conj().T * iz.entries.diagonal().real) @ vec \
        if _is_diagonal(iz.entries) else vec.conj().T @ iz.entries @ vec
    num = (lam[:, None] - lam[None, :]) ** 2
    den = lam[:, None] + lam[None, :]
    weight = np.where(den > QFI_DENOMINATOR_FLOOR,
                      num / np.maximum(den, QFI_DENOMINATOR_FLOOR), 0.0)
    return float(2.0 * np.sum(weight * (a.real**2 + a.imag**2)))


def _is_diagonal(a: np.ndarray) -> bool:
    return np.count_nonzero(a - np.diag(a.diagonal())) == 0


def qfi_of_state(rho: DensityMatrix, iz: HermitianOperator) -> float:
    """Fisher information of an arbitrary state (diagonalizes rho)."""
    rho.same_basis(iz)
    lam, vec = np.linalg.eigh(rho.entries)
    return qfi(lam, vec, iz)


def fisher_lower_bound(m2: float) -> float:
    """Double a coherence second moment.

    Feed it the second moment at half the inverse temperature of the state:
    that doubled value equals the skew information and hence bounds the
    Fisher information from below. Doubling the full-temperature moment
    does *not* give a bound (see the module docstring).
    """
    m2 = float(m2)
    if m2 < 0:
        raise ValueError(f"second moment must be >= 0, got {m2}")
    return 2.0 * m2


def producibility_bound(k: int, n_spins: int) -> float:
    """Largest information value compatible with k-spin producibility.

    With m = floor(N/k): m*k^2 + (N - m*k)^2. Nondecreasing in k; equals N
    at k=1 (separable states) and N^2 at k=N.
    """
    k = int(k)
    n = int(n_spins)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    m = n // k
    r = n - m * k
    return float(m * k * k + r * r)


def entanglement_depth(info_value: float, n_spins: int) -> int:
    """Certified number of mutually entangled spins for an information value.

    Returns 1 + max{k : value > bound(k)} scanning k = 1 .. N-1, or 1 when
    the value does not even exceed the separable bound N; capped at N.
    """
    value = float(info_value)
    if value < 0:
        raise ValueError(f"information value must be >= 0, got {value}")
    n = int(n_spins)
    depth = 1
    for k in range(1, n):
        if value > producibility_bound(k, n):
            depth = k + 1
    return min(depth, n)


@dataclass(frozen=True)
class InformationPair:
    """Skew information, Fisher information, and the coherence-moment bound."""

    wy: float
    fisher: float
    m2_bound: float

    def validate(self, n_spins: int, rtol: float = PAIR_RTOL) -> None:
        """Check the sandwich, the bound, and the N^2 cap; raise on violation."""
        problems = []
        if not _leq(self.wy, self.fisher, rtol):
            problems.append(f"wy={self.wy!r} > fisher={self.fisher!r}")
        if not _leq(self.fisher, 2.0 * self.wy, rtol):
            problems.append(f"fisher={self.fisher!r} > 2*wy={2 * self.wy!r}")
        if not _leq(self.m2_bound, self.fisher, rtol):
            problems.append(f"m2_bound={self.m2_bound!r} > fisher={self.fisher!r}")
        if self.fisher > n_spins**2 + 1e-8:
            problems.append(f"fisher={self.fisher!r} > N^2={n_spins**2}")
        if problems:
            raise ConsistencyError("; ".join(problems))


def _leq(a: float, b: float, rtol: float, atol: float = 1e-12) -> bool:
    return a <= b + rtol * abs(b) + atol


@dataclass(frozen=True)
class DepthReport:
    """All per-point observables for one (tau, beta) of one model."""

    engine: str
    n_spins: int
    beta: float
    tau: float
    m2: float
    m2_half_beta: float
    wy: float
    fisher: float
    fisher_lb: float
    depth_wy: int
    depth_fisher: int

    @property
    def pair(self) -> InformationPair:
        return InformationPair(self.wy, self.fisher, self.fisher_lb)

    def validate(self) -> None:
        self.pair.validate(self.n_spins)
        if self.depth_wy > self.depth_fisher:
            raise ConsistencyError(
                f"depth_wy={self.depth_wy} exceeds depth_fisher={self.depth_fisher}")


def assemble_report(engine: str, n_spins: int, beta: float, tau: float,
                    m2: float, m2_half_beta: float, wy_direct: float,
                    wy_from_spectrum: float, fisher: float) -> DepthReport:
    """Cross-check the two skew-information routes and build a report.

    The direct (matrix square root) and spectrum (2*M2 at beta/2) values
    must agree to CROSS_CHECK_RTOL relative; disagreement means one of the
    engines is broken and is raised instead of being reported.
    """
    scale = max(abs(wy_direct), abs(wy_from_spectrum), 1e-12)
    if abs(wy_direct - wy_from_spectrum) > CROSS_CHECK_RTOL * scale:
        raise ConsistencyError(
            f"skew-information routes disagree at tau={tau}, beta={beta}: "
            f"direct={wy_direct!r} vs spectrum={wy_from_spectrum!r}")
    report = DepthReport(
        engine=engine, n_spins=n_spins, beta=beta, tau=tau,
        m2=m2, m2_half_beta=m2_half_beta,
        wy=wy_direct, fisher=fisher,
        fisher_lb=fisher_lower_bound(m2_half_beta),
        depth_wy=entanglement_depth(wy_direct, n_spins),
        depth_fisher=entanglement_depth(fisher, n_spins),
    )
    report.validate()
    return report


class DenseEngine:
    """Exact product-basis engine for arbitrary coupling networks.

    Builds the basis, Iz, the pair-flip Hamiltonian, and its
    eigendecomposition once; each (tau, beta) evaluation is then a handful
    of dense matrix products. Memory and time scale as 4^N, hence the cap.
    """

    engine_id = "dense"

    def __init__(self, system: SpinSystem, cap: int = DEFAULT_DENSE_CAP):
        self.system = system
        self.basis = build_zeeman_basis(system.n_spins, cap=cap)
        self.iz = build_iz(self.basis)
        self.hamiltonian = build_mq_hamiltonian(system, self.basis)
        self.propagator = Propagator(self.hamiltonian)

    @property
    def n_spins(self) -> int:
        return self.system.n_spins

    def rho_pre(self, tau: float, beta: float) -> DensityMatrix:
        """Thermal state at beta evolved for tau."""
        u = self.propagator.unitary(tau)
        p = thermal_populations(self.basis, beta)
        return DensityMatrix((u * p) @ u.conj().T, self.basis.tag)

    def spectrum(self, tau: float, beta: float):
        return coherence_spectrum(self.rho_pre(tau, beta), self.basis, beta)

    def evaluate(self, tau: float, beta: float):
        """(report, spectrum) for one grid point.

        The evolution operator and the two evolved states (beta, beta/2)
        are built once and shared; only the skew-information route
        re-diagonalizes the evolved state, deliberately, so it stays an
        independent check on the coherence route.
        """
        u = self.propagator.unitary(tau)
        populations = thermal_populations(self.basis, beta)
        rho = DensityMatrix((u * populations) @ u.conj().T, self.basis.tag)
        spec = coherence_spectrum(rho, self.basis, beta)
        m2 = second_moment(spec)
        half = thermal_populations(self.basis, beta / 2.0)
        rho_half = DensityMatrix((u * half) @ u.conj().T, self.basis.tag)
        m2_half = second_moment(
            coherence_spectrum(rho_half, self.basis, beta / 2.0))
        wy_dir = wy_skew_direct(rho, self.iz)
        wy_spec = wy_skew_via_spectrum(m2_half)
        fisher = qfi(populations, u, self.iz)
        report = assemble_report(self.engine_id, self.n_spins, beta, tau,
                                 m2, m2_half, wy_dir, wy_spec, fisher)
        return report, spec

    def report(self, tau: float, beta: float) -> DepthReport:
        return self.evaluate(tau, beta)[0]


def information_report(engine, tau: float, beta: float) -> DepthReport:
    """Full information report for one grid point of any engine.

    ``engine`` is a :class:`DenseEngine` or a nanopore engine; both expose
    ``report`` with identical semantics and cross-checks.
    """
    if not (math.isfinite(float(tau)) and math.isfinite(float(beta))):
        raise ValueError(f"tau and beta must be finite, got {tau}, {beta}")
    return engine.report(float(tau), float(beta))
