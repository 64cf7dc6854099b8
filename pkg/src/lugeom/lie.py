"""su(N) bases, local generators of su(N_1) + ... + su(N_L) and their action on states.

Generators are stored anti-Hermitian (exp of a generator is unitary). The
Hermitian "observable" picture of the dual algebra differs by a factor of i
and only appears where the moment map is paired with generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadArity, DimensionMismatch, IndexOutOfRange
from .state import PureState

GEN_TOL = 1e-12

PAULI = {
    "0": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def su_basis(n: int) -> list[np.ndarray]:
    """N^2 - 1 anti-Hermitian traceless matrices.

    Off-diagonal pairs (i < j) first, each contributing i*(E_ij + E_ji) and
    -(E_ij - E_ji) (i.e. i times the Hermitian symmetric/antisymmetric
    Gell-Mann pair), then the N - 1 diagonal Gell-Mann matrices times i. All
    elements satisfy -tr(A A) = 2 and are mutually orthogonal under -tr(AB).
    For N = 2 this is exactly i*sigma_x, i*sigma_y, i*sigma_z.
    """
    if n < 2:
        raise BadArity("su(N) needs N >= 2")
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            sym = unit_matrix(n, i, j) + unit_matrix(n, j, i)
            asym = -1j * unit_matrix(n, i, j) + 1j * unit_matrix(n, j, i)
            out.append(1j * sym)
            out.append(1j * asym)
    for j in range(1, n):
        diag = np.zeros(n)
        diag[:j] = 1.0
        diag[j] = -j
        out.append(1j * np.sqrt(2.0 / (j * (j + 1))) * np.diag(diag).astype(complex))
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class LocalGenerator:
    """Sum over subsystems of I (x) ... (x) X_k (x) ... (x) I with X_k in su(N_k)."""

    terms: tuple[tuple[int, np.ndarray], ...]

    def __post_init__(self):
        seen = set()
        clean = []
        for k, mat in self.terms:
            k = int(k)
            mat = np.array(mat, dtype=complex)
            if k in seen:
                raise DimensionMismatch(f"two terms on subsystem {k}")
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise DimensionMismatch(f"term on subsystem {k} is not square")
            if np.max(np.abs(mat + mat.conj().T), initial=0.0) > GEN_TOL:
                raise ValueError(f"term on subsystem {k} is not anti-Hermitian")
            if abs(np.trace(mat)) > GEN_TOL:
                raise ValueError(f"term on subsystem {k} is not traceless")
            mat.setflags(write=False)
            seen.add(k)
            clean.append((k, mat))
        object.__setattr__(self, "terms", tuple(sorted(clean, key=lambda t: t[0])))

    @classmethod
    def single(cls, k: int, mat: np.ndarray) -> LocalGenerator:
        return cls(((k, mat),))

    @classmethod
    def from_blocks(cls, blocks: Sequence[np.ndarray | None]) -> LocalGenerator:
        return cls(tuple((k, b) for k, b in enumerate(blocks) if b is not None))

    def block(self, k: int, n: int) -> np.ndarray:
        for j, mat in self.terms:
            if j == k:
                return mat
        return np.zeros((n, n), dtype=complex)

    def blocks(self, dims: Sequence[int]) -> list[np.ndarray]:
        self.check(dims)
        return [self.block(k, d) for k, d in enumerate(dims)]

    def check(self, dims: Sequence[int]):
        for k, mat in self.terms:
            if k >= len(dims):
                raise IndexOutOfRange(f"term on subsystem {k} but only {len(dims)} parties")
            if mat.shape[0] != dims[k]:
                raise DimensionMismatch(f"term on subsystem {k} has size {mat.shape[0]}, dim {dims[k]}")

    def __add__(self, other: LocalGenerator) -> LocalGenerator:
        acc: dict[int, np.ndarray] = {}
        for k, mat in self.terms + other.terms:
            acc[k] = acc.get(k, 0) + mat
        return LocalGenerator(tuple(acc.items()))

    def scale(self, c: float) -> LocalGenerator:
        return LocalGenerator(tuple((k, c * mat) for k, mat in self.terms))


def local_basis(dims: Sequence[int]) -> list[LocalGenerator]:
    """Basis of su(N_1) + ... + su(N_L): su_basis of each factor in party order."""
    return [LocalGenerator.single(k, x) for k, d in enumerate(dims) if d > 1 for x in su_basis(d)]


def local_generator_from_coords(dims: Sequence[int], coords: Iterable[float]) -> LocalGenerator:
    coords = np.asarray(list(coords), dtype=float)
    basis = local_basis(dims)
    if coords.size != len(basis):
        raise DimensionMismatch(f"{coords.size} coordinates for algebra of dimension {len(basis)}")
    blocks: list[np.ndarray | None] = [None] * len(dims)
    for c, g in zip(coords, basis):
        k, mat = g.terms[0]
        blocks[k] = c * mat if blocks[k] is None else blocks[k] + c * mat
    return LocalGenerator.from_blocks(blocks)


def embed(gen: LocalGenerator, dims: Sequence[int]) -> np.ndarray:
    """Dense D x D matrix of the generator acting on the full tensor product."""
    blocks = gen.blocks(dims)
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    for k, mat in enumerate(blocks):
        if not np.any(mat):
            continue
        left = int(np.prod(dims[:k]))
        right = int(np.prod(dims[k + 1:]))
        out += np.kron(np.kron(np.eye(left), mat), np.eye(right))
    return out


def apply_generator(gen: LocalGenerator, v: PureState) -> np.ndarray:
    """Matrix-free action xi v on the flat amplitude vector."""
    gen.check(v.dims)
    t = v.tensor
    out = np.zeros_like(t)
    for k, mat in gen.terms:
        out += np.moveaxis(np.tensordot(mat, t, axes=([1], [k])), 0, k)
    return out.reshape(-1)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Horizontal representative of a tangent vector to P(H) at [base]."""

    base: PureState
    rep: np.ndarray

    def __post_init__(self):
        rep = np.array(self.rep, dtype=complex).reshape(-1)
        if rep.size != self.base.dim:
            raise DimensionMismatch("tangent representative has wrong length")
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    @classmethod
    def horizontal(cls, base: PureState, vec: np.ndarray) -> TangentVector:
        v = base.amplitudes
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(base, vec - np.vdot(v, vec) * v)


def fundamental_field(gen: LocalGenerator, v: PureState) -> TangentVector:
    """Tangent to t -> [exp(t xi) v] at t = 0, as xi v - <v, xi v> v."""
    return TangentVector.horizontal(v, apply_generator(gen, v))
