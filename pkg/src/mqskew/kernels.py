"""Backend selection for the dense-engine inner loops.

At import time the compiled Cython kernels are preferred; if the extension
is unavailable (or ``MQSKEW_PURE_PYTHON`` is set to a non-empty value) the
NumPy implementations in ``_kernels_np`` are used instead. Both backends
are bit-for-bit interchangeable for the supported dtypes.
"""

import os

import numpy as np

from . import _kernels_np

if os.environ.get("MQSKEW_PURE_PYTHON"):
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_np
        BACKEND = "numpy"


def backend() -> str:
    """Name of the active kernel backend ('cython' or 'numpy')."""
    return BACKEND


def available_backends():
    """Mapping of backend name to implementation module, for benchmarks."""
    impls = {"numpy": _kernels_np}
    try:
        from . import _ckernels
        impls["cython"] = _ckernels
    except ImportError:
        pass
    return impls


def mq_hamiltonian(couplings, impl=None):
    couplings = np.ascontiguousarray(couplings, dtype=np.float64)
    return (impl or _impl).mq_hamiltonian(couplings)


def coherence_histogram(rho, twice_m, n_spins, impl=None):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    twice_m = np.ascontiguousarray(twice_m, dtype=np.int64)
    return (impl or _impl).coherence_histogram(rho, twice_m, int(n_spins))
