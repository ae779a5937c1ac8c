"""Skew information, Fisher information, bounds, and depth certificates."""

import math

import numpy as np
import pytest

from mqskew import (ConsistencyError, DenseEngine, DensityMatrix,
                    InformationPair, NotADensityMatrix, SpinSystem,
                    build_iz, build_zeeman_basis, entanglement_depth,
                    fisher_lower_bound, information_report,
                    producibility_bound, qfi, qfi_of_state, wy_skew_direct,
                    wy_skew_via_spectrum)

from conftest import brute_qfi, random_couplings, sqrtm_skew_information


def ghz_state(n):
    basis = build_zeeman_basis(n)
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = vec[-1] = 1 / math.sqrt(2)
    return DensityMatrix(np.outer(vec, vec.conj()), basis.tag), build_iz(basis)


def random_state(rng, n):
    """Random full-rank state with Haar-ish eigenvectors."""
    dim = 2**n
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(z)
    lam = rng.dirichlet(np.ones(dim))
    rho = (q * lam) @ q.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T), f"zeeman:{n}")


class TestSkewInformation:
    def test_diagonal_state_vanishes(self):
        basis = build_zeeman_basis(3)
        from mqskew import thermal_state
        rho = thermal_state(basis, 2.0)
        assert wy_skew_direct(rho, build_iz(basis)) == pytest.approx(0.0, abs=1e-12)

    def test_ghz_two_spins(self):
        rho, iz = ghz_state(2)
        # pure state: -2 Tr([sqrt(rho), Iz]^2) = 4 Var(Iz) = N^2 for GHZ
        assert wy_skew_direct(rho, iz) == pytest.approx(4.0, abs=1e-10)

    @pytest.mark.parametrize("n", [3, 5])
    def test_ghz_reaches_n_squared(self, n):
        rho, iz = ghz_state(n)
        assert wy_skew_direct(rho, iz) == pytest.approx(n**2, abs=1e-9)

    def test_two_spin_closed_form(self):
        d, tau, beta = 1.3, 0.7, 2.4
        engine = DenseEngine(SpinSystem.all_equal(2, d))
        value = wy_skew_direct(engine.rho_pre(tau, beta), engine.iz)
        expected = 4 * math.sin(d * tau) ** 2 * math.tanh(beta / 2) ** 2
        assert value == pytest.approx(expected, abs=1e-12)

    def test_matches_scipy_sqrtm(self, rng):
        engine = DenseEngine(SpinSystem(4, random_couplings(rng, 4)))
        rho = engine.rho_pre(1.1, 1.7)
        ours = wy_skew_direct(rho, engine.iz)
        oracle = sqrtm_skew_information(rho.entries, engine.iz.entries)
        assert ours == pytest.approx(oracle, rel=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_equals_doubled_half_temperature_moment(self, rng, n):
        engine = DenseEngine(SpinSystem(n, random_couplings(rng, n)))
        for _ in range(3):
            tau = rng.uniform(0.1, 4.0)
            beta = rng.uniform(0.1, 8.0)
            from mqskew import second_moment
            direct = wy_skew_direct(engine.rho_pre(tau, beta), engine.iz)
            doubled = wy_skew_via_spectrum(
                second_moment(engine.spectrum(tau, beta / 2)))
            assert direct == pytest.approx(doubled, rel=1e-8, abs=1e-12)

    def test_rejects_negative_spectrum(self):
        basis = build_zeeman_basis(2)
        mat = np.diag([0.5, 0.5, 1e-5, -1e-5]).astype(complex)
        rho = DensityMatrix(mat, basis.tag)
        with pytest.raises(NotADensityMatrix):
            wy_skew_direct(rho, build_iz(basis))

    def test_via_spectrum_rejects_negative(self):
        with pytest.raises(ValueError):
            wy_skew_via_spectrum(-0.1)


class TestFisherInformation:
    def test_diagonal_state_vanishes(self):
        basis = build_zeeman_basis(3)
        from mqskew import thermal_state
        rho = thermal_state(basis, 1.5)
        assert qfi_of_state(rho, build_iz(basis)) == pytest.approx(0.0, abs=1e-12)

    def test_ghz_two_spins(self):
        # standard metrological normalization: pure states give 4 Var(Iz),
        # so GHZ of two spins gives exactly N^2 = 4
        rho, iz = ghz_state(2)
        assert qfi_of_state(rho, iz) == pytest.approx(4.0, abs=1e-10)
        assert brute_qfi(rho.entries, iz.entries) == pytest.approx(4.0, abs=1e-10)

    def test_two_spin_closed_form(self):
        d, tau, beta = 1.3, 0.7, 2.4
        engine = DenseEngine(SpinSystem.all_equal(2, d))
        value = engine.report(tau, beta).fisher
        expected = (8 * math.sin(d * tau) ** 2 * math.sinh(beta / 2) ** 2
                    / math.cosh(beta))
        assert value == pytest.approx(expected, abs=1e-12)

    def test_two_spin_ratio(self):
        # I_F / I_WY = (cosh(beta) + 1)/cosh(beta), in (1, 2]
        d, tau = 1.0, 0.9
        engine = DenseEngine(SpinSystem.all_equal(2, d))
        for beta in (0.3, 1.0, 3.0, 8.0):
            r = engine.report(tau, beta)
            assert r.fisher / r.wy == pytest.approx(
                (math.cosh(beta) + 1) / math.cosh(beta), rel=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_brute_force_on_random_states(self, rng, n):
        basis = build_zeeman_basis(n)
        iz = build_iz(basis)
        for _ in range(3):
            rho = random_state(rng, n)
            assert qfi_of_state(rho, iz) == pytest.approx(
                brute_qfi(rho.entries, iz.entries), rel=1e-10, abs=1e-12)

    def test_supplied_eigensystem_matches_diagonalization(self, rng):
        engine = DenseEngine(SpinSystem(3, random_couplings(rng, 3)))
        tau, beta = 1.3, 2.2
        from mqskew.dynamics import thermal_populations
        fast = qfi(thermal_populations(engine.basis, beta),
                   engine.propagator.unitary(tau), engine.iz)
        slow = qfi_of_state(engine.rho_pre(tau, beta), engine.iz)
        assert fast == pytest.approx(slow, rel=1e-8)

    def test_rejects_negative_eigenvalues(self):
        basis = build_zeeman_basis(2)
        with pytest.raises(NotADensityMatrix):
            qfi(np.array([0.6, 0.5, -1e-5, -0.1 + 1e-5]), np.eye(4),
                build_iz(basis))


class TestBoundsAndDepth:
    def test_fisher_lower_bound_doubles(self):
        assert fisher_lower_bound(0.0) == 0.0
        assert fisher_lower_bound(1.7) == 3.4
        with pytest.raises(ValueError):
            fisher_lower_bound(-1.0)

    def test_bound_unit_values(self):
        assert producibility_bound(1, 201) == 201
        assert producibility_bound(201, 201) == 201**2
        assert producibility_bound(4, 6) == 20
        assert producibility_bound(6, 6) == 36

    def test_bound_rejects_bad_k(self):
        with pytest.raises(ValueError):
            producibility_bound(0, 5)
        with pytest.raises(ValueError):
            producibility_bound(7, 6)

    @pytest.mark.parametrize("n", [2, 6, 17, 100, 300])
    def test_bound_monotone_in_k(self, n):
        bounds = [producibility_bound(k, n) for k in range(1, n + 1)]
        assert all(b <= c for b, c in zip(bounds, bounds[1:]))

    def test_depth_examples(self):
        assert entanglement_depth(0.0, 6) == 1
        assert entanglement_depth(201.0, 201) == 1
        assert entanglement_depth(21.0, 6) == 5
        assert entanglement_depth(36.0, 6) == 6     # cannot exceed N
        assert entanglement_depth(1e9, 6) == 6

    def test_depth_monotone_in_value(self):
        for n in (6, 17):
            depths = [entanglement_depth(v, n)
                      for v in np.linspace(0, n**2 + 5, 200)]
            assert all(a <= b for a, b in zip(depths, depths[1:]))

    def test_depth_rejects_negative(self):
        with pytest.raises(ValueError):
            entanglement_depth(-1.0, 4)


class TestInformationPair:
    def test_valid_pair_passes(self):
        InformationPair(wy=2.0, fisher=3.0, m2_bound=2.0).validate(4)

    def test_sandwich_violations_raise(self):
        with pytest.raises(ConsistencyError):
            InformationPair(wy=3.0, fisher=2.0, m2_bound=1.0).validate(4)
        with pytest.raises(ConsistencyError):
            InformationPair(wy=1.0, fisher=2.5, m2_bound=1.0).validate(4)
        with pytest.raises(ConsistencyError):
            InformationPair(wy=8.0, fisher=9.0, m2_bound=9.5).validate(4)
        with pytest.raises(ConsistencyError):
            InformationPair(wy=90.0, fisher=100.0, m2_bound=1.0).validate(4)


class TestInformationReport:
    def test_tau_zero_all_vanish(self, rng):
        engine = DenseEngine(SpinSystem(4, random_couplings(rng, 4)))
        r = information_report(engine, 0.0, 2.0)
        for value in (r.m2, r.m2_half_beta, r.wy, r.fisher, r.fisher_lb):
            assert value == pytest.approx(0.0, abs=1e-12)
        assert r.depth_wy == 1 and r.depth_fisher == 1

    def test_infinite_temperature_all_vanish(self, rng):
        engine = DenseEngine(SpinSystem(4, random_couplings(rng, 4)))
        r = information_report(engine, 1.3, 0.0)
        assert r.wy == pytest.approx(0.0, abs=1e-12)
        assert r.fisher == pytest.approx(0.0, abs=1e-12)
        assert r.depth_wy == 1 and r.depth_fisher == 1

    @pytest.mark.parametrize("n", [3, 6])
    def test_sandwich_and_depth_order_on_grid(self, rng, n):
        engine = DenseEngine(SpinSystem.all_equal(n, 1.0))
        for tau in np.linspace(0.2, 2.2, 4):
            for beta in np.linspace(0.3, 6.0, 4):
                r = information_report(engine, float(tau), float(beta))
                assert r.wy <= r.fisher * (1 + 1e-8) + 1e-12
                assert r.fisher <= 2 * r.wy * (1 + 1e-8) + 1e-12
                assert r.fisher_lb <= r.fisher * (1 + 1e-8) + 1e-12
                assert r.depth_wy <= r.depth_fisher

    def test_near_pure_limits(self, rng):
        # at beta = 30 the initial state is effectively the polarized pure
        # state: both informations converge to 4 Var(Iz) of the evolved
        # state, i.e. their ratio goes to 1 (the pure-state end of the
        # sandwich)
        engine = DenseEngine(SpinSystem(3, random_couplings(rng, 3)))
        tau, beta = 1.1, 30.0
        r = engine.report(tau, beta)
        u = engine.propagator.unitary(tau)
        ground = np.zeros(8, dtype=complex)
        ground[-1] = 1.0                      # all spins up
        evolved = u @ ground
        iz = engine.iz.entries
        mean = np.real(evolved.conj() @ iz @ evolved)
        square = np.real(evolved.conj() @ (iz @ iz) @ evolved)
        four_var = 4 * (square - mean**2)
        assert r.wy == pytest.approx(four_var, rel=1e-4)
        assert r.fisher == pytest.approx(four_var, rel=1e-4)
        assert r.fisher / r.wy == pytest.approx(1.0, abs=1e-4)

    def test_cross_check_guard(self, rng):
        from mqskew.qinfo import assemble_report
        with pytest.raises(ConsistencyError):
            assemble_report("dense", 4, 1.0, 1.0, m2=1.0, m2_half_beta=0.5,
                            wy_direct=1.0, wy_from_spectrum=1.5, fisher=1.2)
