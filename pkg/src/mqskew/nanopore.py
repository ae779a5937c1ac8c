"""Large-N engine for the all-equal-coupling (nanopore) model.

When every pair carries the same coupling D, the pair-flip Hamiltonian
collapses to collective ladder operators, -(D/4) [(I+)^2 + (I-)^2], which
conserves the total spin S. The 2^N-dimensional problem then factorizes into
independent blocks of dimension 2S+1 (S = N/2, N/2-1, ...), each entering
with the multiplicity of its total-spin sector. Total work per grid point is
sum over S of O((2S+1)^3) = O(N^4), which keeps a couple of hundred spins
interactive.

Multiplicities and partition-function factors are carried as logarithms:
n_N(S) and Z overflow doubles long before N = 201, but only ratios of them
enter any observable, and those ratios are all bounded by 1.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .dynamics import CoherenceSpectrum, log_2cosh, second_moment
from .errors import CapExceeded, ConsistencyError
from .qinfo import (DepthReport, assemble_report, wy_skew_via_spectrum)

#: Largest spin count accepted by the sector engine unless overridden.
DEFAULT_NANOPORE_CAP = 300

SPECTRUM_SUM_ATOL = 1e-8
QFI_DENOMINATOR_FLOOR = 1e-300


@dataclass(frozen=True)
class NanoporeModel:
    """All pairwise couplings equal: N spins with a single coupling D."""

    n_spins: int
    coupling: float = 1.0

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if not math.isfinite(self.coupling):
            raise ValueError(f"coupling must be finite, got {self.coupling}")


def sector_spins(n_spins: int) -> list[float]:
    """Total-spin values N/2, N/2-1, ..., down to 0 or 1/2."""
    top = n_spins / 2.0
    count = int(top) + 1 if n_spins % 2 == 0 else int(top + 0.5)
    return [top - i for i in range(count)]


def sector_multiplicity_log(n_spins: int, s: float) -> float:
    """log of the number of total-spin-S sectors of N spin-1/2 particles.

    n_N(S) = C(N, N/2 - S) * (2S + 1) / (N/2 + S + 1), evaluated through
    log-gamma so it stays finite for hundreds of spins. S must have the same
    parity as N/2 and lie in [0, N/2].
    """
    two_s = 2.0 * s
    if abs(two_s - round(two_s)) > 1e-9:
        raise ValueError(f"S={s} is not half-integer")
    if (n_spins - round(two_s)) % 2 != 0:
        raise ValueError(f"S={s} has the wrong parity for N={n_spins}")
    if s < 0 or two_s > n_spins:
        raise ValueError(f"S={s} outside [0, {n_spins / 2}]")
    k = round(n_spins / 2.0 - s)
    log_binom = (gammaln(n_spins + 1) - gammaln(k + 1)
                 - gammaln(n_spins - k + 1))
    return float(log_binom + math.log(two_s + 1.0)
                 - math.log(n_spins / 2.0 + s + 1.0))


def ladder_matrix(s: float) -> np.ndarray:
    """Raising operator on the (2S+1)-dimensional spin-S multiplet.

    <m+1|I+|m> = sqrt(S(S+1) - m(m+1)), rows/columns ordered m = -S .. S.
    """
    dim = int(round(2 * s)) + 1
    m = -s + np.arange(dim - 1)
    up = np.zeros((dim, dim))
    up[np.arange(1, dim), np.arange(dim - 1)] = np.sqrt(s * (s + 1) - m * (m + 1))
    return up


@dataclass
class SectorBlock:
    """One total-spin block: operators, multiplicity, cached eigensystem."""

    s: float
    m: np.ndarray              # -S .. S
    log_multiplicity: float
    hamiltonian: np.ndarray    # unit-coupling -(1/4)[(I+)^2 + (I-)^2]
    eigenvalues: np.ndarray    # of the unit-coupling Hamiltonian
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.m)

    def unitary(self, coupling: float, tau: float) -> np.ndarray:
        phase = np.exp(-1j * self.eigenvalues * (coupling * tau))
        return (self.eigenvectors * phase) @ self.eigenvectors.conj().T


def build_sector_block(n_spins: int, s: float) -> SectorBlock:
    up = ladder_matrix(s)
    h = -0.25 * (up @ up + up.T @ up.T)
    evals, evecs = np.linalg.eigh(h)
    dim = int(round(2 * s)) + 1
    return SectorBlock(
        s=s,
        m=(-s + np.arange(dim)),
        log_multiplicity=sector_multiplicity_log(n_spins, s),
        hamiltonian=h,
        eigenvalues=evals,
        eigenvectors=evecs,
    )


def check_sector_completeness(n_spins: int, rtol: float = 1e-10) -> float:
    """Verify sum over S of (2S+1) n_N(S) = 2^N in log space.

    Returns the relative deviation; raises ConsistencyError beyond rtol.
    """
    logs = [math.log(2 * s + 1) + sector_multiplicity_log(n_spins, s)
            for s in sector_spins(n_spins)]
    total = _logsumexp(logs)
    expected = n_spins * math.log(2.0)
    deviation = abs(total - expected) / abs(expected)
    if deviation > rtol:
        raise ConsistencyError(
            f"sector multiplicities sum to exp({total}), expected 2^{n_spins}")
    return deviation


def _logsumexp(values) -> float:
    top = max(values)
    return top + math.log(sum(math.exp(v - top) for v in values))


class NanoporeEngine:
    """Sector-resolved engine matching :class:`~mqskew.qinfo.DenseEngine`.

    Eigendecompositions are computed once per model at unit coupling (the
    coupling only rescales time) and shared read-only across grid points, so
    concurrent evaluation of different (tau, beta) points is safe.
    """

    engine_id = "nanopore"

    def __init__(self, model: NanoporeModel, cap: int = DEFAULT_NANOPORE_CAP):
        if model.n_spins > cap:
            raise CapExceeded(
                f"n_spins={model.n_spins} exceeds the sector-engine cap of {cap}")
        self.model = model
        self.blocks = [build_sector_block(model.n_spins, s)
                       for s in sector_spins(model.n_spins)]

    @property
    def n_spins(self) -> int:
        return self.model.n_spins

    def spectrum(self, tau: float, beta: float) -> CoherenceSpectrum:
        """Coherence intensities combined across all total-spin sectors.

        Per sector the thermal weights carry the shift exp(-beta*S) so all
        matrix entries stay <= 1; the dropped factor is restored in log
        space together with the multiplicity and the purity normalization.
        """
        n = self.n_spins
        log_norm = n * log_2cosh(beta)  # log(2^N cosh^N beta)
        values = np.zeros(2 * n + 1)
        for blk in self.blocks:
            weight = math.exp(blk.log_multiplicity + 2.0 * beta * blk.s - log_norm)
            if weight == 0.0:
                continue
            u = blk.unitary(self.model.coupling, tau)
            w = np.exp(beta * (blk.m - blk.s))
            _accumulate_histogram(values, n, (u * w) @ u.conj().T, weight)
        total = values.sum()
        if abs(total - 1.0) > SPECTRUM_SUM_ATOL:
            raise ConsistencyError(
                f"sector spectrum sums to {total!r} at tau={tau}, beta={beta}")
        return CoherenceSpectrum(n, values)

    def fisher_information(self, tau: float, beta: float) -> float:
        """Spectral Fisher information accumulated sector by sector.

        Thermal eigenvalues exp(beta*m)/Z enter with the per-sector maximum
        factored out; sectors whose total weight underflows contribute
        nothing, which is also their true weight to double precision.
        """
        log_z = self.n_spins * log_2cosh(beta / 2.0)
        total = 0.0
        for blk in self.blocks:
            pref = math.exp(blk.log_multiplicity + beta * blk.s - log_z)
            if pref == 0.0:
                continue
            u = blk.unitary(self.model.coupling, tau)
            w = np.exp(beta * (blk.m - blk.s))
            mz = (u.conj().T * blk.m) @ u
            total += pref * _fisher_terms(w, mz)
        return float(total)

    def wy_direct(self, tau: float, beta: float) -> float:
        """Skew information from sqrt(rho), sector by sector.

        The square root of the thermal state halves beta in the populations,
        so the commutator trace reduces to the Fisher-like sum with
        (sqrt(l_i) - sqrt(l_j))^2 weights.
        """
        log_z = self.n_spins * log_2cosh(beta / 2.0)
        total = 0.0
        for blk in self.blocks:
            pref = math.exp(blk.log_multiplicity + beta * blk.s - log_z)
            if pref == 0.0:
                continue
            u = blk.unitary(self.model.coupling, tau)
            w = np.exp(beta * (blk.m - blk.s))
            mz = (u.conj().T * blk.m) @ u
            total += pref * _skew_terms(np.sqrt(w), mz)
        return float(total)

    def evaluate(self, tau: float, beta: float):
        """(report, spectrum) for one grid point in one pass over the sectors.

        The evolution operator and the rotated Iz of each sector are shared
        between the beta and beta/2 spectra, the skew information, and the
        Fisher information; this halves the matrix-product count relative
        to calling the individual methods.
        """
        n = self.n_spins
        log_norm_full = n * log_2cosh(beta)
        log_norm_half = n * log_2cosh(beta / 2.0)  # also log Z(beta)
        vals_full = np.zeros(2 * n + 1)
        vals_half = np.zeros(2 * n + 1)
        wy_dir = 0.0
        fisher = 0.0
        for blk in self.blocks:
            pref_full = math.exp(blk.log_multiplicity + 2.0 * beta * blk.s
                                 - log_norm_full)
            pref_half = math.exp(blk.log_multiplicity + beta * blk.s
                                 - log_norm_half)
            if pref_full == 0.0 and pref_half == 0.0:
                continue
            u = blk.unitary(self.model.coupling, tau)
            uh = u.conj().T
            w = np.exp(beta * (blk.m - blk.s))
            w_half = np.sqrt(w)
            if pref_full > 0.0:
                _accumulate_histogram(vals_full, n, (u * w) @ uh, pref_full)
            if pref_half > 0.0:
                _accumulate_histogram(vals_half, n, (u * w_half) @ uh, pref_half)
                mz = (uh * blk.m) @ u
                abs2 = mz.real**2 + mz.imag**2
                fisher += pref_half * _fisher_terms(w, mz, abs2)
                wy_dir += pref_half * _skew_terms(w_half, mz, abs2)
        for vals, b, label in ((vals_full, beta, "beta"),
                               (vals_half, beta / 2.0, "beta/2")):
            total = vals.sum()
            if abs(total - 1.0) > SPECTRUM_SUM_ATOL:
                raise ConsistencyError(
                    f"sector spectrum at {label} sums to {total!r} "
                    f"(tau={tau}, beta={beta})")
        spec = CoherenceSpectrum(n, vals_full)
        m2 = second_moment(spec)
        m2_half = second_moment(CoherenceSpectrum(n, vals_half))
        wy_spec = wy_skew_via_spectrum(m2_half)
        report = assemble_report(self.engine_id, n, beta, tau,
                                 m2, m2_half, float(wy_dir), wy_spec,
                                 float(fisher))
        return report, spec

    def report(self, tau: float, beta: float) -> DepthReport:
        return self.evaluate(tau, beta)[0]


def _accumulate_histogram(values: np.ndarray, n_spins: int,
                          rho: np.ndarray, weight: float) -> None:
    """Add weight * sum |rho[i, j]|^2 per diagonal into the order histogram.

    Within a sector the row index *is* the magnetization offset, so the
    coherence order of element (i, j) is just i - j; numpy's trace offset
    counts columns right of the main diagonal, hence the sign flip.
    """
    dim = rho.shape[0]
    abs2 = rho.real**2 + rho.imag**2
    for offset in range(-(dim - 1), dim):
        values[n_spins - offset] += weight * np.trace(abs2, offset=offset)


def _fisher_terms(w: np.ndarray, mz: np.ndarray, abs2=None) -> float:
    """2 sum (w_i - w_j)^2/(w_i + w_j) |mz_ij|^2 with zero-denominator skip."""
    if abs2 is None:
        abs2 = mz.real**2 + mz.imag**2
    num = (w[:, None] - w[None, :]) ** 2
    den = w[:, None] + w[None, :]
    weight = np.where(den > QFI_DENOMINATOR_FLOOR,
                      num / np.maximum(den, QFI_DENOMINATOR_FLOOR), 0.0)
    return float(2.0 * np.sum(weight * abs2))


def _skew_terms(w_root: np.ndarray, mz: np.ndarray, abs2=None) -> float:
    """2 sum (sqrt(w)_i - sqrt(w)_j)^2 |mz_ij|^2."""
    if abs2 is None:
        abs2 = mz.real**2 + mz.imag**2
    num = (w_root[:, None] - w_root[None, :]) ** 2
    return float(2.0 * np.sum(num * abs2))


_ENGINE_CACHE: dict[tuple, NanoporeEngine] = {}
_ENGINE_LOCK = threading.Lock()


def _cached_engine(model: NanoporeModel, cap: int) -> NanoporeEngine:
    key = (model.n_spins, model.coupling, cap)
    with _ENGINE_LOCK:
        engine = _ENGINE_CACHE.get(key)
        if engine is None:
            engine = NanoporeEngine(model, cap=cap)
            if len(_ENGINE_CACHE) >= 8:
                _ENGINE_CACHE.pop(next(iter(_ENGINE_CACHE)))
            _ENGINE_CACHE[key] = engine
    return engine


def nanopore_spectrum(model: NanoporeModel, tau: float, beta: float,
                      cap: int = DEFAULT_NANOPORE_CAP) -> CoherenceSpectrum:
    """Coherence spectrum of the all-equal-coupling model at one grid point."""
    return _cached_engine(model, cap).spectrum(float(tau), float(beta))


def nanopore_information(model: NanoporeModel, tau: float, beta: float,
                         cap: int = DEFAULT_NANOPORE_CAP) -> DepthReport:
    """Information report of the all-equal-coupling model at one grid point."""
    return _cached_engine(model, cap).report(float(tau), float(beta))
