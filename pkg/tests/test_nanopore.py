"""Total-spin sector engine: multiplicities, blocks, and dense agreement."""

import math

import numpy as np
import pytest

from mqskew import (CapExceeded, DenseEngine, NanoporeEngine, NanoporeModel,
                    SpinSystem, check_sector_completeness,
                    nanopore_information, nanopore_spectrum,
                    sector_multiplicity_log, sector_spins)
from mqskew.nanopore import build_sector_block, ladder_matrix


def multiplicity(n, s):
    return round(math.exp(sector_multiplicity_log(n, s)))


class TestMultiplicities:
    def test_two_spins(self):
        assert multiplicity(2, 1.0) == 1    # triplet
        assert multiplicity(2, 0.0) == 1    # singlet

    def test_four_spins(self):
        assert multiplicity(4, 2.0) == 1
        assert multiplicity(4, 1.0) == 3
        assert multiplicity(4, 0.0) == 2

    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_exact_binomial_difference(self, n):
        for s in sector_spins(n):
            k = round(n / 2 - s)
            expected = math.comb(n, k) - (math.comb(n, k - 1) if k else 0)
            assert multiplicity(n, s) == expected

    def test_parity_rejected(self):
        with pytest.raises(ValueError):
            sector_multiplicity_log(4, 1.5)
        with pytest.raises(ValueError):
            sector_multiplicity_log(4, 3.0)

    @pytest.mark.parametrize("n", [2, 7, 31, 201, 300])
    def test_completeness_identity(self, n):
        assert check_sector_completeness(n) < 1e-10

    def test_sector_list(self):
        assert sector_spins(4) == [2.0, 1.0, 0.0]
        assert sector_spins(5) == [2.5, 1.5, 0.5]


class TestSectorBlocks:
    def test_ladder_elements(self):
        s = 1.5
        up = ladder_matrix(s)
        m = -s + np.arange(3)
        expected = np.sqrt(s * (s + 1) - m * (m + 1))
        assert np.allclose(np.diag(up, -1), expected)

    def test_block_commutator_identity(self):
        # within a sector, [Iz, (I+)^2 part] = +2 (I+)^2 part
        blk = build_sector_block(6, 2.0)
        up = ladder_matrix(2.0)
        plus_part = -0.25 * (up @ up)
        iz = np.diag(blk.m)
        comm = iz @ plus_part - plus_part @ iz
        assert np.allclose(comm, 2.0 * plus_part, atol=1e-12)
        assert np.allclose(blk.hamiltonian, plus_part + plus_part.T, atol=1e-14)

    def test_unitary_is_unitary(self):
        blk = build_sector_block(5, 2.5)
        u = blk.unitary(1.3, 0.8)
        assert np.allclose(u @ u.conj().T, np.eye(blk.dim), atol=1e-12)


class TestEngineEquivalence:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_spectra_match_dense(self, n):
        coupling = 0.8
        dense = DenseEngine(SpinSystem.all_equal(n, coupling))
        sector = NanoporeEngine(NanoporeModel(n, coupling))
        for tau, beta in ((0.4, 0.7), (1.7, 3.2)):
            ds = dense.spectrum(tau, beta)
            ss = sector.spectrum(tau, beta)
            assert np.abs(ds.values - ss.values).max() < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_information_matches_dense(self, n):
        coupling = 1.1
        dense = DenseEngine(SpinSystem.all_equal(n, coupling))
        sector = NanoporeEngine(NanoporeModel(n, coupling))
        for tau, beta in ((0.9, 0.5), (2.3, 4.0)):
            rd = dense.report(tau, beta)
            rs = sector.report(tau, beta)
            for a, b in ((rd.m2, rs.m2), (rd.m2_half_beta, rs.m2_half_beta),
                         (rd.wy, rs.wy), (rd.fisher, rs.fisher)):
                assert b == pytest.approx(a, rel=1e-8, abs=1e-12)
            assert rd.depth_wy == rs.depth_wy
            assert rd.depth_fisher == rs.depth_fisher


class TestSectorEngineBehavior:
    def test_tau_zero(self):
        spec = nanopore_spectrum(NanoporeModel(40, 1.0), 0.0, 2.5)
        assert spec.intensity(0) == pytest.approx(1.0, abs=1e-12)

    def test_infinite_temperature(self):
        spec = nanopore_spectrum(NanoporeModel(40, 1.0), 1.7, 0.0)
        assert spec.intensity(0) == pytest.approx(1.0, abs=1e-12)
        report = nanopore_information(NanoporeModel(40, 1.0), 1.7, 0.0)
        assert report.wy == pytest.approx(0.0, abs=1e-10)
        assert report.fisher == pytest.approx(0.0, abs=1e-10)
        assert report.depth_wy == 1

    def test_spectrum_symmetric_and_normalized(self):
        spec = nanopore_spectrum(NanoporeModel(60, 1.0), 0.2, 3.0)
        assert abs(spec.total() - 1.0) < 1e-8
        assert np.abs(spec.values - spec.values[::-1]).max() < 1e-10
        odd = spec.values[1::2] if 60 % 2 == 0 else spec.values[0::2]
        assert np.abs(odd).max() < 1e-20

    def test_cap(self):
        with pytest.raises(CapExceeded):
            NanoporeEngine(NanoporeModel(301, 1.0))
        NanoporeEngine(NanoporeModel(31, 1.0), cap=31)

    def test_stress_no_overflow(self):
        # largest supported size at very low temperature: everything finite
        engine = NanoporeEngine(NanoporeModel(300, 1.0))
        report, spec = engine.evaluate(0.05, 50.0)
        assert np.isfinite(spec.values).all()
        for value in (report.m2, report.wy, report.fisher):
            assert np.isfinite(value)
        report.validate()

    def test_depth_rises_with_beta(self):
        engine = NanoporeEngine(NanoporeModel(101, 1.0))
        depths = [engine.report(0.4, beta).depth_fisher
                  for beta in (0.5, 2.0, 5.0)]
        assert depths == sorted(depths)
        assert depths[-1] > 10
