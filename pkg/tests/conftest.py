"""Shared brute-force oracles, deliberately independent of the package code.

Everything here is built from Kronecker products, dense matrix exponentials,
and explicit double loops, so agreement with the package is a real
cross-check rather than the same algorithm twice.
"""

import numpy as np
import pytest
import scipy.linalg

RAISE = np.array([[0, 0], [1, 0]], dtype=complex)   # |up><down|, bit set = up
LOWER = RAISE.conj().T
SZ = np.diag([-0.5, 0.5]).astype(complex)
ID2 = np.eye(2, dtype=complex)


def site_operator(op, site, n_spins):
    """Single-site operator on the little-endian product space."""
    out = np.array([[1.0 + 0j]])
    for b in range(n_spins):
        out = np.kron(op if b == site else ID2, out)
    return out


def kron_mq_hamiltonian(couplings):
    """Pair-flip Hamiltonian assembled from explicit ladder products."""
    n = couplings.shape[0]
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n):
        for k in range(j + 1, n):
            up = site_operator(RAISE, j, n) @ site_operator(RAISE, k, n)
            dn = site_operator(LOWER, j, n) @ site_operator(LOWER, k, n)
            h += -0.5 * couplings[j, k] * (up + dn)
    return h


def kron_iz(n_spins):
    return sum(site_operator(SZ, j, n_spins) for j in range(n_spins))


def collective_ladder(n_spins):
    """Total raising operator I+ = sum_j I_j^+."""
    return sum(site_operator(RAISE, j, n_spins) for j in range(n_spins))


def magnetizations(n_spins):
    return np.array([bin(i).count("1") - n_spins / 2
                     for i in range(2**n_spins)])


def thermal_matrix(n_spins, beta):
    w = np.exp(beta * magnetizations(n_spins))
    return np.diag(w / w.sum()).astype(complex)


def expm_evolve(rho, h, tau):
    """Evolution through scipy's expm rather than an eigendecomposition."""
    u = scipy.linalg.expm(-1j * h * tau)
    return u @ rho @ u.conj().T


def brute_coherence_sums(rho, n_spins):
    """T_n = sum over elements with magnetization difference n, double loop."""
    m = magnetizations(n_spins)
    out = {}
    dim = 2**n_spins
    for i in range(dim):
        for j in range(dim):
            n = round(m[i] - m[j])
            out[n] = out.get(n, 0.0) + abs(rho[i, j]) ** 2
    return out


def brute_qfi(rho, generator, tol=1e-14):
    """Spectral Fisher information by explicit double loop over eigenpairs."""
    lam, vec = np.linalg.eigh(rho)
    a = vec.conj().T @ generator @ vec
    total = 0.0
    for i in range(len(lam)):
        for j in range(len(lam)):
            den = lam[i] + lam[j]
            if den > tol:
                total += (lam[i] - lam[j]) ** 2 / den * abs(a[i, j]) ** 2
    return 2.0 * total


def sqrtm_skew_information(rho, generator):
    """Skew information via scipy's sqrtm (valid away from singular states)."""
    root = scipy.linalg.sqrtm(rho)
    comm = root @ generator - generator @ root
    value = -2.0 * np.trace(comm @ comm)
    assert abs(value.imag) < 1e-9
    return float(value.real)


def random_couplings(rng, n_spins, scale=1.0):
    d = rng.normal(scale=scale, size=(n_spins, n_spins))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
