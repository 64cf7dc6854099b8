"""Pure states of L qudits.

Amplitudes are stored flat in row-major order with the first subsystem index
varying slowest, so ``amplitudes.reshape(dims)[k1, ..., kL]`` is the
coefficient of ``e_k1 (x) ... (x) e_kL``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.stats import unitary_group

from .errors import BadArity, DimensionMismatch, IndexOutOfRange, NotBipartite, ZeroVector

ZERO_NORM = 1e-14
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatch(f"bad subsystem dimensions {self.dims!r}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise DimensionMismatch(f"{amps.size} amplitudes for dims {dims}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def amplitude(self, index: Sequence[int]) -> complex:
        return complex(self.tensor[MultiIndex.checked(index, self.dims).indices])

    def __repr__(self):
        return f"PureState(dims={self.dims}, norm={np.linalg.norm(self.amplitudes):.3g})"


@dataclass(frozen=True)
class MultiIndex:
    indices: tuple[int, ...]

    @classmethod
    def checked(cls, indices: Sequence[int], dims: Sequence[int]) -> MultiIndex:
        idx = tuple(int(i) for i in indices)
        if len(idx) != len(dims):
            raise DimensionMismatch(f"index {idx} has wrong length for dims {tuple(dims)}")
        for i, d in zip(idx, dims):
            if not 0 <= i < d:
                raise IndexOutOfRange(f"index {idx} out of range for dims {tuple(dims)}")
        return cls(idx)

    def flat(self, dims: Sequence[int]) -> int:
        return int(np.ravel_multi_index(self.indices, tuple(dims)))


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """v = sum_k coefficients[k] * left_basis[:, k] (x) right_basis[:, k]."""

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    multiplicities: tuple[int, ...]

    @property
    def m0(self) -> int:
        return self.multiplicities[0]

    @property
    def r(self) -> int:
        return len(self.multiplicities) - 1

    def reconstruct(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coefficients, self.left_basis, self.right_basis).reshape(-1)


def make_state(dims: Sequence[int], amplitudes) -> PureState:
    raw = np.asarray(amplitudes, dtype=complex).reshape(-1)
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims) or raw.size != int(np.prod(dims)):
        raise DimensionMismatch(f"{raw.size} amplitudes for dims {dims}")
    norm = np.linalg.norm(raw)
    if norm < ZERO_NORM:
        raise ZeroVector("all amplitudes vanish")
    return PureState(dims, raw / norm)


def _same_dims(u: PureState, v: PureState):
    if u.dims != v.dims:
        raise DimensionMismatch(f"dims {u.dims} vs {v.dims}")


def overlap(u: PureState, v: PureState) -> complex:
    """Hermitian scalar product <u, v>, conjugate-linear in u."""
    _same_dims(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def projective_distance(u: PureState, v: PureState) -> float:
    """1 - |<u,v>|^2, which vanishes iff [u] = [v]."""
    _same_dims(u, v)
    ov = abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2
    return float(min(1.0, max(0.0, 1.0 - ov)))


def group_multiplicities(values: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """(m0, m1, ..., mr) for nonincreasing nonnegative values.

    Values within ``tol * max(1, values[0])`` of each other share a group,
    values below that threshold count as vanishing.
    """
    vals = np.asarray(values, dtype=float)
    scale = tol * max(1.0, float(vals[0])) if vals.size else tol
    nonzero = vals[vals > scale]
    m0 = int(vals.size - nonzero.size)
    groups: list[int] = []
    start = None
    for p in nonzero:
        if start is not None and abs(start - p) <= scale:
            groups[-1] += 1
        else:
            groups.append(1)
            start = p
    return (m0, *groups)


def _phase_fix(vec: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(vec)))
    a = vec[j]
    return vec * (abs(a) / a) if abs(a) > 0 else vec


def schmidt(v: PureState, tol: float = DEFAULT_TOL) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite state with equal local dimensions.

    The left frame comes from the eigendecomposition of the first reduced
    density; coefficients are recomputed as ``|e_k^dagger M|`` so vanishing
    values are accurate to machine precision rather than its square root.
    """
    if v.n_parties != 2 or v.dims[0] != v.dims[1]:
        raise NotBipartite(f"need two equal subsystems, got dims {v.dims}")
    n = v.dims[0]
    m = v.tensor
    rho = m @ m.conj().T
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(evals)[::-1]
    evecs = evecs[:, order]
    rows = evecs.conj().T @ m  # row k equals p_k f_k^T
    p = np.linalg.norm(rows, axis=1)
    order = np.argsort(-p, kind="stable")
    p, evecs, rows = p[order], evecs[:, order], rows[order]

    mult = group_multiplicities(p, tol)
    thresh = tol * max(1.0, float(p[0]))
    left = evecs.copy()
    right = np.zeros((n, n), dtype=complex)
    nonzero = p > thresh
    for k in range(n):
        isolated = all(abs(p[k] - p[j]) > thresh for j in range(n) if j != k)
        if isolated:
            left[:, k] = _phase_fix(left[:, k])
            rows[k] = left[:, k].conj() @ m
        if nonzero[k]:
            right[:, k] = rows[k] / p[k]
    nz = int(nonzero.sum())
    if nz < n:
        comp = null_space(right[:, :nz].conj().T) if nz else np.eye(n, dtype=complex)
        right[:, nz:] = comp[:, : n - nz]
        p = np.where(nonzero, p, 0.0)
    return SchmidtDecomposition(p, left, right, mult)


def random_state(dims: Sequence[int], seed: int) -> PureState:
    """Haar-random pure state from normalized standard complex Gaussians (PCG64 stream)."""
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return make_state(dims, z)


def ghz(n_parties: int) -> PureState:
    if n_parties < 2:
        raise BadArity("GHZ state needs at least two qubits")
    amps = np.zeros(2**n_parties, dtype=complex)
    amps[0] = amps[-1] = 1.0
    return make_state([2] * n_parties, amps)


def basis_state(dims: Sequence[int], index: Sequence[int]) -> PureState:
    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    amps[MultiIndex.checked(index, dims).flat(dims)] = 1.0
    return PureState(tuple(dims), amps)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.atleast_2d(unitary_group.rvs(n, random_state=rng))


def random_local_unitaries(dims: Sequence[int], rng: np.random.Generator) -> list[np.ndarray]:
    return [haar_unitary(d, rng) for d in dims]


def apply_local(unitaries: Sequence[np.ndarray | None], v: PureState) -> PureState:
    """(U_1 (x) ... (x) U_L) v; a ``None`` entry acts as the identity."""
    if len(unitaries) != v.n_parties:
        raise DimensionMismatch(f"{len(unitaries)} operators for {v.n_parties} parties")
    t = v.tensor
    for k, u in enumerate(unitaries):
        if u is None:
            continue
        u = np.asarray(u)
        if u.shape != (v.dims[k], v.dims[k]):
            raise DimensionMismatch(f"operator {k} has shape {u.shape}, dims {v.dims}")
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
    return PureState(v.dims, t.reshape(-1))
