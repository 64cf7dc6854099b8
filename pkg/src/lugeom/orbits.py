"""Symplectic geometry of local-unitary orbits in projective Hilbert space.

Tangent vectors at [v] are represented by complex vectors orthogonal to v and
handled as real vectors r(a) = (Re a, Im a). In that picture the Fubini-Study
form Im<a, b> is r(a)^T Omega r(b) with Omega = [[0, I], [-I, 0]].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import BaseMismatch, DimensionMismatch, InvalidProfile
from .lie import LocalGenerator, TangentVector, apply_generator, commutator, local_basis
from .moment import MomentImage, moment_image
from .state import PureState

RANK_TOL = 1e-7
# Absolute floor for singular values: a map that vanishes identically (for
# example ad at mu = 0) otherwise has a noise-level sigma_max and a random rank.
RANK_ATOL = 1e-10
INCLUSION_TOL = 1e-8

CLASSES = ("symplectic", "coisotropic_strict", "lagrangian", "isotropic_strict", "none")


def realify(vecs: np.ndarray) -> np.ndarray:
    """Columns of complex vectors -> columns of real vectors (Re; Im)."""
    vecs = np.asarray(vecs)
    if vecs.ndim == 1:
        return np.concatenate([vecs.real, vecs.imag])
    return np.vstack([vecs.real, vecs.imag])


def omega_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def numerical_rank(s: np.ndarray, tol: float = RANK_TOL, atol: float = RANK_ATOL) -> int:
    if s.size == 0:
        return 0
    cutoff = max(tol * float(s[0]), atol)
    return int(np.sum(s > cutoff))


def _range_basis(mat: np.ndarray, tol: float) -> np.ndarray:
    if mat.size == 0:
        return np.zeros((mat.shape[0], 0))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    return u[:, : numerical_rank(s, tol)]


def _null_basis(mat: np.ndarray, tol: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    return vh[numerical_rank(s, tol):].conj().T


def fs_form(v: PureState, a: TangentVector, b: TangentVector) -> float:
    """Fubini-Study form Im<a, b> on horizontal representatives at [v]."""
    for t in (a, b):
        if t.base is not v and (
            t.base.dims != v.dims or not np.allclose(t.base.amplitudes, v.amplitudes, atol=1e-12)
        ):
            raise BaseMismatch("tangent vector is based at a different state")
    return float(np.vdot(a.rep, b.rep).imag)


def orbit_fields(v: PureState) -> np.ndarray:
    """Complex D x dim(g) matrix of horizontal fundamental fields of the local basis."""
    amps = v.amplitudes
    cols = []
    for gen in local_basis(v.dims):
        w = apply_generator(gen, v)
        cols.append(w - np.vdot(amps, w) * amps)
    if not cols:
        return np.zeros((v.dim, 0), dtype=complex)
    return np.column_stack(cols)


def orbit_tangent(v: PureState, tol: float = RANK_TOL) -> tuple[np.ndarray, int]:
    """Orthonormal real basis (columns, length 2D) of T_[v]O and its dimension."""
    basis = _range_basis(realify(orbit_fields(v)), tol)
    return basis, basis.shape[1]


def horizontal_basis(v: PureState) -> np.ndarray:
    """Orthonormal real basis of the tangent space of P(H) at [v] (dimension 2D - 2)."""
    amps = v.amplitudes
    constraints = np.vstack([realify(amps), realify(1j * amps)])
    return null_space(constraints)


def restricted_form(v: PureState) -> np.ndarray:
    """Matrix of fs_form on the fundamental fields of the local basis."""
    f = orbit_fields(v)
    return (f.conj().T @ f).imag


def ad_matrix(alpha: MomentImage) -> np.ndarray:
    """Real matrix of xi -> ([X_k, Y_k])_k on the local basis."""
    dims = alpha.dims
    cols = []
    for gen in local_basis(dims):
        k, mat = gen.terms[0]
        blocks = [np.zeros((d, d), dtype=complex) for d in dims]
        blocks[k] = commutator(mat, alpha.components[k])
        cols.append(realify(np.concatenate([b.reshape(-1) for b in blocks])))
    total = 2 * sum(d * d for d in dims)
    return np.column_stack(cols) if cols else np.zeros((total, 0))


def coadjoint_dim(v: PureState, tol: float = RANK_TOL) -> int:
    """Dimension of the coadjoint orbit through mu([v]) = rank of ad at mu([v])."""
    s = np.linalg.svd(ad_matrix(moment_image(v)), compute_uv=False)
    return numerical_rank(s, tol)


def skew_nullity(v: PureState, tol: float = RANK_TOL) -> int:
    """Nullity of the Fubini-Study form restricted to the orbit tangent space."""
    q, dim = orbit_tangent(v, tol)
    if dim == 0:
        return 0
    gram = q.T @ omega_matrix(v.dim) @ q
    s = np.linalg.svd(gram, compute_uv=False)
    return dim - numerical_rank(s, tol)


def degeneracy(v: PureState, tol: float = RANK_TOL) -> int:
    """D = dim O - dim Omega; the skew-form nullity must give the same number."""
    _, dim_o = orbit_tangent(v, tol)
    d1 = dim_o - coadjoint_dim(v, tol)
    d2 = skew_nullity(v, tol)
    if d1 != d2:
        raise ArithmeticError(f"degeneracy routes disagree: {d1} vs {d2}")
    return d1


def orthocomplement(v: PureState, tol: float = RANK_TOL) -> np.ndarray:
    """Real basis of the omega-orthocomplement of T_[v]O inside T_[v]P(H)."""
    qt, _ = orbit_tangent(v, tol)
    qh = horizontal_basis(v)
    coupling = qt.T @ omega_matrix(v.dim) @ qh
    c = _null_basis(coupling, tol)
    perp = qh @ c
    if perp.shape[1]:
        perp, _ = np.linalg.qr(perp)
    return perp


def _contained(sub: np.ndarray, space: np.ndarray) -> bool:
    if sub.shape[1] == 0:
        return True
    resid = sub - space @ (space.T @ sub)
    return float(np.max(np.linalg.norm(resid, axis=0))) <= INCLUSION_TOL


@dataclass(frozen=True)
class OrbitReport:
    dim_orbit: int
    dim_coadjoint: int
    degeneracy: int
    classification: str
    tol_used: float
    dim_projective: int = 0
    dim_orthocomplement: int = 0

    @property
    def fiber_excess(self) -> int:
        """dim of the orthocomplement minus dim of the orbit."""
        return self.dim_orthocomplement - self.dim_orbit

    def as_dict(self) -> dict:
        return {
            "dim_orbit": self.dim_orbit,
            "dim_coadjoint": self.dim_coadjoint,
            "degeneracy": self.degeneracy,
            "classification": self.classification,
            "dim_projective": self.dim_projective,
            "dim_orthocomplement": self.dim_orthocomplement,
            "tol_used": self.tol_used,
        }


def classify(v: PureState, tol: float = RANK_TOL) -> OrbitReport:
    qt, dim_o = orbit_tangent(v, tol)
    dim_c = coadjoint_dim(v, tol)
    deg = degeneracy(v, tol)
    perp = orthocomplement(v, tol)
    coiso = _contained(perp, qt)
    iso = _contained(qt, perp) if perp.shape[1] else dim_o == 0
    if coiso and iso:
        label = "lagrangian"
    elif deg == 0:
        label = "symplectic"
    elif coiso:
        label = "coisotropic_strict"
    elif iso:
        label = "isotropic_strict"
    else:
        label = "none"
    return OrbitReport(dim_o, dim_c, deg, label, tol, 2 * v.dim - 2, perp.shape[1])


@dataclass(frozen=True)
class MultiplicityProfile:
    m0: int
    nonzero: tuple[int, ...]
    N: int

    def __post_init__(self):
        nonzero = tuple(int(m) for m in self.nonzero)
        object.__setattr__(self, "nonzero", nonzero)
        if self.m0 < 0 or any(m <= 0 for m in nonzero):
            raise InvalidProfile("multiplicities must be positive (m0 nonnegative)")
        if not nonzero:
            raise InvalidProfile("at least one nonvanishing coefficient is required")
        if self.m0 + sum(nonzero) != self.N:
            raise InvalidProfile(f"m0 + sum(m) = {self.m0 + sum(nonzero)} but N = {self.N}")

    @classmethod
    def from_multiplicities(cls, mult: Sequence[int]) -> MultiplicityProfile:
        return cls(int(mult[0]), tuple(mult[1:]), int(sum(mult)))


def bipartite_dims(profile: MultiplicityProfile) -> tuple[int, int, int, int]:
    """(dim O, dim Omega, dim orthocomplement, D) for two N-level systems.

    The orthocomplement dimension is dim P(H) - dim O = 2 m0^2 + sum m_n^2 - 1.
    """
    n, m0 = profile.N, profile.m0
    sq = sum(m * m for m in profile.nonzero)
    dim_o = 2 * n * n - 2 * m0 * m0 - sq - 1
    dim_c = 2 * n * n - 2 * (m0 * m0 + sq)
    dim_perp = 2 * m0 * m0 + sq - 1
    return dim_o, dim_c, dim_perp, sq - 1


def kks_form(alpha: MomentImage, g1: LocalGenerator, g2: LocalGenerator) -> float:
    """Kirillov-Kostant-Souriau form (i/2) sum_k tr(Y_k [X_k, X'_k]) at alpha."""
    dims = alpha.dims
    b1, b2 = g1.blocks(dims), g2.blocks(dims)
    total = 0j
    for y, x1, x2 in zip(alpha.components, b1, b2):
        if x1.shape != y.shape or x2.shape != y.shape:
            raise DimensionMismatch("generator blocks do not match the moment image")
        total += np.trace(y @ commutator(x1, x2))
    return float((0.5j * total).real)
