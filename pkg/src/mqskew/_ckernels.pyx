# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense-engine inner loops (see _kernels_np for the fallback)."""

import numpy as np

cimport numpy as cnp


def mq_hamiltonian(const double[:, ::1] couplings):
    """Pair-flip Hamiltonian on the little-endian product basis.

    Amplitude -D_jk/2 between each state and its double spin-flip partner;
    real symmetric output.
    """
    cdef Py_ssize_t n = couplings.shape[0]
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n
    out = np.zeros((dim, dim), dtype=np.float64)
    cdef double[:, ::1] h = out
    cdef Py_ssize_t j, k, i, t, mask
    cdef double amp
    for j in range(n):
        for k in range(j + 1, n):
            amp = -0.5 * couplings[j, k]
            if amp == 0.0:
                continue
            mask = ((<Py_ssize_t>1) << j) | ((<Py_ssize_t>1) << k)
            for i in range(dim):
                if (i & mask) == 0:
                    t = i | mask
                    h[t, i] += amp
                    h[i, t] += amp
    return out


def coherence_histogram(const double complex[:, ::1] rho, const cnp.int64_t[::1] twice_m,
                        int n_spins):
    """Sum |rho_ij|^2 grouped by magnetization difference m_i - m_j.

    One pass over the matrix; index ``order + n_spins`` in the output.
    twice_m differences are always even, so the truncating C division is
    exact.
    """
    cdef Py_ssize_t d = rho.shape[0]
    out = np.zeros(2 * n_spins + 1, dtype=np.float64)
    cdef double[::1] acc = out
    cdef Py_ssize_t i, j
    cdef cnp.int64_t tmi
    cdef double re, im
    cdef double complex z
    for i in range(d):
        tmi = twice_m[i]
        for j in range(d):
            z = rho[i, j]
            re = z.real
            im = z.imag
            acc[(tmi - twice_m[j]) // 2 + n_spins] += re * re + im * im
    return out
