"""Backend equivalence: compiled kernels against the NumPy fallback."""

import numpy as np
import pytest

from mqskew import build_zeeman_basis
from mqskew.kernels import available_backends, backend, coherence_histogram, mq_hamiltonian

from conftest import brute_coherence_sums, kron_mq_hamiltonian, random_couplings

BACKENDS = available_backends()
HAS_COMPILED = "cython" in BACKENDS


def random_hermitian(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (z + z.conj().T) / 2


@pytest.mark.parametrize("name", sorted(BACKENDS))
class TestEachBackend:
    def test_hamiltonian_vs_kron(self, rng, name):
        impl = BACKENDS[name]
        for n in (2, 4, 5):
            couplings = random_couplings(rng, n)
            h = mq_hamiltonian(couplings, impl=impl)
            assert np.allclose(h, kron_mq_hamiltonian(couplings).real,
                               atol=1e-13)

    def test_histogram_vs_double_loop(self, rng, name):
        impl = BACKENDS[name]
        for n in (2, 3, 4):
            basis = build_zeeman_basis(n)
            rho = random_hermitian(rng, 2**n)
            hist = coherence_histogram(rho, basis.twice_m, n, impl=impl)
            brute = brute_coherence_sums(rho, n)
            for order in range(-n, n + 1):
                assert hist[order + n] == pytest.approx(
                    brute.get(order, 0.0), rel=1e-12, abs=1e-15)


@pytest.mark.skipif(not HAS_COMPILED, reason="compiled kernels unavailable")
class TestBackendAgreement:
    def test_hamiltonian_identical(self, rng):
        for n in (3, 6, 8):
            couplings = random_couplings(rng, n)
            a = mq_hamiltonian(couplings, impl=BACKENDS["cython"])
            b = mq_hamiltonian(couplings, impl=BACKENDS["numpy"])
            assert np.array_equal(a, b)

    def test_histogram_close(self, rng):
        # summation orders differ between backends, so bit-equality is not
        # guaranteed, only floating-point agreement
        for n in (3, 6, 8):
            basis = build_zeeman_basis(n)
            rho = random_hermitian(rng, 2**n)
            a = coherence_histogram(rho, basis.twice_m, n,
                                    impl=BACKENDS["cython"])
            b = coherence_histogram(rho, basis.twice_m, n,
                                    impl=BACKENDS["numpy"])
            assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


def test_backend_reported():
    assert backend() in ("cython", "numpy")
