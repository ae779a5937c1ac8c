"""Built-in invariant suite behind ``mqskew verify``.

A condensed version of the test suite suitable for a quick health check of
an installation: closed-form oracles for the two-spin system, the
skew-information/second-moment identity on random networks, dense vs sector
engine agreement, the Fourier route to the spectrum, and the
producibility-bound arithmetic.
"""

import numpy as np

from .dynamics import coherence_spectrum, phase_signal, thermal_state
from .kernels import backend
from .nanopore import (NanoporeEngine, NanoporeModel,
                       check_sector_completeness)
from .qinfo import (DenseEngine, entanglement_depth, producibility_bound,
                    wy_skew_direct)
from .spincore import SpinSystem

TWO_SPIN_TOL = 1e-10
IDENTITY_RTOL = 1e-8
ENGINE_RTOL = 1e-8
FOURIER_TOL = 1e-10


def _random_system(rng, n):
    d = rng.normal(size=(n, n))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return SpinSystem(n, d)


def check_two_spin_closed_forms():
    """Simulator vs the analytic two-spin solution on a small grid."""
    coupling = 1.3
    engine = DenseEngine(SpinSystem.all_equal(2, coupling))
    worst = 0.0
    for tau in np.linspace(0.0, 3.0, 7):
        for beta in np.linspace(0.1, 6.0, 7):
            report, spec = engine.evaluate(tau, beta)
            s2 = np.sin(coupling * tau) ** 2
            expected = {
                "J_2": s2 * np.tanh(beta) ** 2 / 4.0,
                "M2": 2.0 * s2 * np.tanh(beta) ** 2,
                "I_WY": 4.0 * s2 * np.tanh(beta / 2.0) ** 2,
                "I_F": 8.0 * s2 * np.sinh(beta / 2.0) ** 2 / np.cosh(beta),
            }
            got = {"J_2": spec.intensity(2), "M2": report.m2,
                   "I_WY": report.wy, "I_F": report.fisher}
            for key in expected:
                worst = max(worst, abs(got[key] - expected[key]))
    return worst < TWO_SPIN_TOL, f"max abs deviation {worst:.2e}"


def check_skew_moment_identity(seed):
    """Skew information at beta vs doubled second moment at beta/2."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, 7):
        engine = DenseEngine(_random_system(rng, n))
        for _ in range(4):
            tau = rng.uniform(0.1, 4.0)
            beta = rng.uniform(0.1, 8.0)
            report = engine.report(tau, beta)
            direct = wy_skew_direct(engine.rho_pre(tau, beta), engine.iz)
            rel = abs(direct - 2.0 * report.m2_half_beta) / max(1e-12, direct)
            worst = max(worst, rel)
    return worst < IDENTITY_RTOL, f"max rel deviation {worst:.2e}"


def check_engine_agreement():
    """Dense vs sector engine on all-equal couplings."""
    worst = 0.0
    for n in range(2, 7):
        dense = DenseEngine(SpinSystem.all_equal(n, 0.9))
        sector = NanoporeEngine(NanoporeModel(n, 0.9))
        for tau, beta in ((0.7, 0.5), (1.9, 2.5)):
            rd, sd = dense.evaluate(tau, beta)
            rs, ss = sector.evaluate(tau, beta)
            worst = max(worst, float(np.max(np.abs(sd.values - ss.values))))
            for a, b in ((rd.m2, rs.m2), (rd.wy, rs.wy),
                         (rd.fisher, rs.fisher)):
                worst = max(worst, abs(a - b) / max(1e-12, abs(a)))
    return worst < ENGINE_RTOL, f"max deviation {worst:.2e}"


def check_fourier_route(seed):
    """Spectrum from the phase-increment signal vs the block decomposition."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (3, 4, 5):
        engine = DenseEngine(_random_system(rng, n))
        tau = rng.uniform(0.5, 3.0)
        beta = rng.uniform(0.5, 4.0)
        rho = engine.rho_pre(tau, beta)
        direct = coherence_spectrum(rho, engine.basis, beta)
        points = 2 * n + 1
        phis = 2.0 * np.pi * np.arange(points) / points
        g = np.array([phase_signal(rho, engine.basis, phi) for phi in phis])
        coeff = np.real(np.fft.ifft(g))  # G(phi) = sum_k e^{ik phi} T_k
        purity = np.exp(
            n * (np.log(2 * np.cosh(beta)) - 2 * np.log(2 * np.cosh(beta / 2))))
        fourier = np.concatenate((coeff[-n:], coeff[:n + 1])) / purity
        worst = max(worst, float(np.max(np.abs(fourier - direct.values))))
    return worst < FOURIER_TOL, f"max abs deviation {worst:.2e}"


def check_sector_degeneracies():
    """Completeness of the total-spin decomposition up to 300 spins."""
    worst = max(check_sector_completeness(n) for n in (2, 7, 64, 201, 300))
    return worst < 1e-10, f"max rel deviation {worst:.2e}"


def check_bound_arithmetic():
    """Producibility-bound unit values, monotonicity, and the depth scan."""
    ok = (producibility_bound(1, 201) == 201
          and producibility_bound(6, 6) == 36
          and producibility_bound(4, 6) == 20
          and entanglement_depth(21.0, 6) == 5
          and entanglement_depth(0.0, 6) == 1)
    for n in (2, 17, 300):
        bounds = [producibility_bound(k, n) for k in range(1, n + 1)]
        ok = ok and all(b2 >= b1 for b1, b2 in zip(bounds, bounds[1:]))
    return ok, "unit values and monotonicity"


def check_thermal_normalization(seed):
    """Closed-form purity vs the matrix, and spectrum sum/symmetry."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 4, 6):
        engine = DenseEngine(_random_system(rng, n))
        beta = rng.uniform(0.2, 5.0)
        rho_eq = thermal_state(engine.basis, beta)
        purity = float(np.real(np.trace(rho_eq.entries @ rho_eq.entries)))
        z = np.sum(np.exp(beta * engine.basis.magnetization))
        closed = 2**n * np.cosh(beta) ** n / z**2
        worst = max(worst, abs(purity - closed))
        spec = engine.spectrum(rng.uniform(0.3, 2.0), beta)
        worst = max(worst, abs(spec.total() - 1.0))
        worst = max(worst, float(np.max(np.abs(spec.values
                                               - spec.values[::-1]))))
    return worst < 1e-10, f"max deviation {worst:.2e}"


CHECKS = (
    ("two-spin closed forms", check_two_spin_closed_forms, False),
    ("skew info = doubled half-temperature moment", check_skew_moment_identity, True),
    ("dense vs sector engine", check_engine_agreement, False),
    ("Fourier route to the spectrum", check_fourier_route, True),
    ("sector degeneracy completeness", check_sector_degeneracies, False),
    ("producibility bounds", check_bound_arithmetic, False),
    ("thermal normalization", check_thermal_normalization, True),
)


def run_verify(seed: int = 0, stream=None) -> bool:
    """Run every check, print one line each, return overall success."""
    import sys
    out = stream or sys.stdout
    print(f"kernel backend: {backend()}", file=out)
    all_ok = True
    for name, fn, needs_seed in CHECKS:
        ok, detail = fn(seed) if needs_seed else fn()
        all_ok = all_ok and ok
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}", file=out)
    return all_ok
