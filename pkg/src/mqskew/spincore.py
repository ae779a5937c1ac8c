"""Product bases, collective operators, and the two-quantum Hamiltonian.

Basis convention: computational index ``i`` encodes the spin configuration
little-endian, bit ``b`` of ``i`` set means spin ``b`` points up. The
magnetization of state ``i`` is ``popcount(i) - n/2``. This ordering is
fixed so that operator matrices are reproducible bit-exactly, and every
operator carries a ``basis_tag`` so that mixed-basis arithmetic fails loudly
instead of silently.

Couplings are stored in angular-frequency units; gyromagnetic factors and
hbar are absorbed into a single geometry prefactor. Inverse temperature is a
separate dimensionless number throughout the package.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BasisMismatch, CapExceeded, GeometryError

#: Largest spin count accepted by the dense engine unless overridden.
#: 2^14 = 16384 is about the largest dimension for which one full Hermitian
#: eigendecomposition still finishes in seconds.
DEFAULT_DENSE_CAP = 14

HERMITICITY_RTOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _popcount(idx: np.ndarray) -> np.ndarray:
    try:
        return np.bitwise_count(idx).astype(np.int64)
    except AttributeError:  # numpy < 2.0
        out = np.zeros(idx.shape, dtype=np.int64)
        work = idx.astype(np.uint64).copy()
        while work.any():
            out += (work & 1).astype(np.int64)
            work >>= 1
        return out


@dataclass(frozen=True)
class SpinSystem:
    """Spin count plus the symmetric dipolar coupling matrix (zero diagonal)."""

    n_spins: int
    couplings: np.ndarray

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        d = np.asarray(self.couplings, dtype=np.float64)
        if d.shape != (self.n_spins, self.n_spins):
            raise ValueError(
                f"couplings must be {self.n_spins}x{self.n_spins}, got {d.shape}")
        if not np.isfinite(d).all():
            raise ValueError("couplings must be finite")
        if not np.allclose(d, d.T, rtol=0, atol=1e-12 * max(1.0, np.abs(d).max())):
            raise ValueError("couplings must be symmetric")
        if np.abs(np.diagonal(d)).max(initial=0.0) != 0.0:
            raise ValueError("coupling matrix must have a zero diagonal")
        object.__setattr__(self, "couplings", _readonly(0.5 * (d + d.T)))

    @classmethod
    def all_equal(cls, n_spins: int, coupling: float) -> "SpinSystem":
        d = np.full((n_spins, n_spins), float(coupling))
        np.fill_diagonal(d, 0.0)
        return cls(n_spins, d)

    @property
    def coupling_scale(self) -> float:
        """Mean |D_jk| over distinct pairs; 0 for a single spin."""
        if self.n_spins < 2:
            return 0.0
        iu = np.triu_indices(self.n_spins, k=1)
        return float(np.mean(np.abs(self.couplings[iu])))


@dataclass(frozen=True)
class ZeemanBasis:
    """Little-endian product basis with its magnetization table."""

    n_spins: int
    magnetization: np.ndarray  # m(i), length 2^n
    twice_m: np.ndarray        # 2*m(i) as integers, for exact binning

    @property
    def dim(self) -> int:
        return 1 << self.n_spins

    @property
    def tag(self) -> str:
        return f"zeeman:{self.n_spins}"


def build_zeeman_basis(n_spins: int, cap: int = DEFAULT_DENSE_CAP) -> ZeemanBasis:
    """Enumerate the 2^n product states and their magnetizations.

    Raises :class:`CapExceeded` above the dense cap, since every dense-engine
    operation downstream scales at least with 4^n.
    """
    if n_spins < 1:
        raise ValueError(f"n_spins must be >= 1, got {n_spins}")
    if n_spins > cap:
        raise CapExceeded(
            f"n_spins={n_spins} exceeds the dense cap of {cap} "
            f"(dimension 2^{n_spins})")
    idx = np.arange(1 << n_spins, dtype=np.uint64)
    twice_m = 2 * _popcount(idx) - n_spins
    return ZeemanBasis(
        n_spins=n_spins,
        magnetization=_readonly(twice_m / 2.0),
        twice_m=_readonly(twice_m),
    )


@dataclass(frozen=True)
class HermitianOperator:
    """Complex Hermitian matrix tagged with the basis it is expressed in."""

    entries: np.ndarray
    basis_tag: str

    def __post_init__(self):
        a = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be square, got shape {a.shape}")
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        if np.abs(a - a.conj().T).max(initial=0.0) > HERMITICITY_RTOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        object.__setattr__(self, "entries", _readonly(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def same_basis(self, other) -> None:
        if self.basis_tag != other.basis_tag:
            raise BasisMismatch(
                f"basis tags differ: {self.basis_tag!r} vs {other.basis_tag!r}")


def build_iz(basis: ZeemanBasis) -> HermitianOperator:
    """Total-magnetization operator: diagonal with entries m(i), traceless."""
    return HermitianOperator(np.diag(basis.magnetization).astype(complex),
                             basis.tag)


def build_mq_hamiltonian(system: SpinSystem, basis: ZeemanBasis) -> HermitianOperator:
    """Two-quantum pair-flip Hamiltonian for the given coupling network.

    Matrix element -D_jk/2 between any state and the state obtained by
    flipping spins j and k in the same direction; all other elements vanish,
    so the operator only connects magnetization sectors differing by 2.
    """
    if system.n_spins != basis.n_spins:
        raise BasisMismatch(
            f"system has {system.n_spins} spins but basis has {basis.n_spins}")
    h = kernels.mq_hamiltonian(system.couplings)
    return HermitianOperator(h.astype(np.complex128), basis.tag)


@dataclass(frozen=True)
class Geometry:
    """Spin positions with the external-field direction and a coupling prefactor.

    Lengths are dimensionless; ``prefactor`` absorbs the physical
    gamma^2*hbar/2 factor so the resulting couplings come out in the
    angular-frequency unit chosen by the caller.
    """

    positions: np.ndarray
    field_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    prefactor: float = 1.0

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=np.float64))
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise GeometryError(f"positions must be (n, 3), got {pos.shape}")
        if not np.isfinite(pos).all():
            raise GeometryError("positions must be finite")
        axis = np.asarray(self.field_axis, dtype=np.float64)
        norm = np.linalg.norm(axis)
        if axis.shape != (3,) or not np.isfinite(norm) or norm < 1e-12:
            raise GeometryError("field_axis must be a nonzero 3-vector")
        object.__setattr__(self, "positions", _readonly(pos))
        object.__setattr__(self, "field_axis", _readonly(axis / norm))
        object.__setattr__(self, "prefactor", float(self.prefactor))

    @property
    def n_spins(self) -> int:
        return self.positions.shape[0]


def dipolar_couplings_from_geometry(geom: Geometry) -> SpinSystem:
    """Secular dipolar couplings D_jk = prefactor * (1 - 3 cos^2 theta_jk) / r_jk^3.

    theta_jk is the angle between the internuclear vector and the field axis.
    Couplings vanish at the magic angle and are invariant under rigid
    translations and under rotations about the field axis.
    """
    pos = geom.positions
    n = geom.n_spins
    d = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            rvec = pos[j] - pos[k]
            r = np.linalg.norm(rvec)
            if r < 1e-12:
                raise GeometryError(f"spins {j} and {k} are coincident")
            cos_theta = np.dot(rvec, geom.field_axis) / r
            d[j, k] = d[k, j] = geom.prefactor * (1.0 - 3.0 * cos_theta**2) / r**3
    return SpinSystem(n, d)
