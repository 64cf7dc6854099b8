"""Reduced densities, the moment map for local unitaries, and the sorted trace form.

Conventions: ``rho_k[a, b] = sum_rest v[.., a, ..] conj(v[.., b, ..])`` is the
usual partial trace. The coefficient matrices written C^(k) in some treatments
index the other way round and equal ``rho_k.T``; spectra and diagonality do not
care, but witnesses built from C^(k) eigenvectors come out transposed.

The moment map is paired with an anti-Hermitian generator as
``mu_xi([v]) = (i/2) <v, xi v> = (i/2) sum_k tr(rho_k X_k)``. Since each X_k is
traceless we may replace rho_k by the traceless part Y_k = rho_k - I/N_k,
which is what MomentImage stores.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange
from .lie import LocalGenerator, apply_generator
from .state import DEFAULT_TOL, PureState, _phase_fix, apply_local, group_multiplicities


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    subsystem: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class MomentImage:
    """Traceless Hermitian parts Y_k = rho_k - I/N_k, one per subsystem."""

    components: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.shape[0] for c in self.components)

    def norm(self) -> float:
        """Largest Frobenius norm over the components."""
        return max(float(np.linalg.norm(c)) for c in self.components)

    def pair(self, gen: LocalGenerator) -> float:
        """(i/2) sum_k tr(Y_k X_k)."""
        total = 0j
        for k, mat in gen.terms:
            if k >= len(self.components):
                raise IndexOutOfRange(f"generator acts on subsystem {k}")
            if mat.shape != self.components[k].shape:
                raise DimensionMismatch(f"generator block {k} has shape {mat.shape}")
            total += np.trace(self.components[k] @ mat)
        return float((0.5j * total).real)


@dataclass(frozen=True, eq=False)
class SortedTraceForm:
    """x' = (U_1 x ... x U_L) x with every reduced density diagonal and nonincreasing."""

    state: PureState
    witnesses: tuple[np.ndarray, ...]
    spectra: tuple[np.ndarray, ...]
    profiles: tuple[tuple[int, ...], ...]

    def nondegenerate(self, gap: float = 1e-6) -> list[bool]:
        return [bool(np.all(-np.diff(s) > gap)) for s in self.spectra]


def _density(t: np.ndarray, k: int) -> np.ndarray:
    m = np.moveaxis(t, k, 0).reshape(t.shape[k], -1)
    rho = m @ m.conj().T
    return 0.5 * (rho + rho.conj().T)


def reduced_density(v: PureState, k: int) -> ReducedDensity:
    if not 0 <= k < v.n_parties:
        raise IndexOutOfRange(f"subsystem {k} of {v.n_parties}")
    return ReducedDensity(k, _density(v.tensor, k))


def reduced_densities(v: PureState) -> list[np.ndarray]:
    t = v.tensor
    return [_density(t, k) for k in range(v.n_parties)]


def moment_pairing(v: PureState, gen: LocalGenerator) -> float:
    """(i/2) <v, xi v>, real because xi is anti-Hermitian."""
    return float((0.5j * np.vdot(v.amplitudes, apply_generator(gen, v))).real)


def moment_image(v: PureState) -> MomentImage:
    comps = []
    for rho in reduced_densities(v):
        n = rho.shape[0]
        comps.append(rho - np.eye(n) / n)
    return MomentImage(tuple(comps))


def spectra(v: PureState) -> list[np.ndarray]:
    """Nonincreasing eigenvalue lists of every reduced density."""
    return [np.sort(np.linalg.eigvalsh(rho))[::-1] for rho in reduced_densities(v)]


def _sorted_frame(rho: np.ndarray, tol: float):
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    evals = np.clip(evals, 0.0, None)
    scale = tol * max(1.0, float(evals[0]))
    for j in range(evals.size):
        if all(abs(evals[j] - evals[i]) > scale for i in range(evals.size) if i != j):
            evecs[:, j] = _phase_fix(evecs[:, j])
    return evals, evecs


def sorted_trace_form(v: PureState, tol: float = DEFAULT_TOL) -> SortedTraceForm:
    """Rotate every factor into the eigenbasis of its reduced density.

    With rho_k = V_k diag(lambda) V_k^dagger (eigenvalues descending) the
    witness is U_k = V_k^dagger, since rho_k(Uv) = U_k rho_k U_k^dagger.
    """
    witnesses, specs, profiles = [], [], []
    for rho in reduced_densities(v):
        evals, evecs = _sorted_frame(rho, tol)
        witnesses.append(evecs.conj().T)
        specs.append(evals)
        profiles.append(group_multiplicities(evals, tol))
    out = apply_local(witnesses, v)
    return SortedTraceForm(out, tuple(witnesses), tuple(specs), tuple(profiles))


def in_cartan(v: PureState, tol: float = DEFAULT_TOL) -> bool:
    """True iff every reduced density is diagonal within tol."""
    for rho in reduced_densities(v):
        off = rho - np.diag(np.diag(rho))
        if np.max(np.abs(off), initial=0.0) > tol:
            return False
    return True


def spectra_distance(x: PureState, y: PureState) -> list[float]:
    if x.dims != y.dims:
        raise DimensionMismatch(f"dims {x.dims} vs {y.dims}")
    return [float(np.max(np.abs(a - b))) for a, b in zip(spectra(x), spectra(y))]


def density_pairing(v: PureState, blocks: Sequence[np.ndarray]) -> float:
    """Reduced-density route (i/2) sum_k tr(rho_k X_k), used as a cross-check."""
    total = 0j
    for rho, mat in zip(reduced_densities(v), blocks):
        total += np.trace(rho @ mat)
    return float((0.5j * total).real)
