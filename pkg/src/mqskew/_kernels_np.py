"""NumPy implementations of the dense-engine inner loops.

These mirror the compiled kernels in ``_ckernels`` exactly; ``kernels``
picks one implementation at import time. Everything here is vectorized,
so the fallback stays usable up to the dense cap, just slower than the
compiled path.
"""

import numpy as np


def mq_hamiltonian(couplings):
    """Pair-flip Hamiltonian matrix on the little-endian product basis.

    For every spin pair (j, k) with coupling D, basis states in which both
    spins point the same way are connected to the doubly-flipped state with
    amplitude -D/2. The result is real symmetric and only mixes states whose
    total magnetization differs by exactly 2.
    """
    n = couplings.shape[0]
    dim = 1 << n
    h = np.zeros((dim, dim))
    idx = np.arange(dim)
    for j in range(n):
        for k in range(j + 1, n):
            amp = -0.5 * couplings[j, k]
            if amp == 0.0:
                continue
            mask = (1 << j) | (1 << k)
            src = idx[(idx & mask) == 0]
            dst = src | mask
            h[dst, src] += amp
            h[src, dst] += amp
    return h


def coherence_histogram(rho, twice_m, n_spins):
    """Sum |rho_ij|^2 grouped by the magnetization difference m_i - m_j.

    Returns an array of length 2*n_spins + 1 indexed by order + n_spins.
    States are visited block-wise after sorting by magnetization so each
    group reduces to one contiguous-slice reduction.
    """
    out = np.zeros(2 * n_spins + 1)
    order = np.argsort(twice_m, kind="stable")
    sorted_tm = twice_m[order]
    perm = rho[np.ix_(order, order)]
    weights = perm.real ** 2 + perm.imag ** 2
    # boundaries of constant-magnetization runs
    edges = np.flatnonzero(np.diff(sorted_tm)) + 1
    starts = np.concatenate(([0], edges))
    stops = np.concatenate((edges, [len(sorted_tm)]))
    values = sorted_tm[starts]
    for a, (ia, ja) in enumerate(zip(starts, stops)):
        for b, (ib, jb) in enumerate(zip(starts, stops)):
            n = (values[a] - values[b]) // 2
            out[n + n_spins] += weights[ia:ja, ib:jb].sum()
    return out
