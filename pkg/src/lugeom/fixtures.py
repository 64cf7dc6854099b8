"""Seeded generators of test states and state pairs."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .moment import moment_image, reduced_densities
from .orbits import MultiplicityProfile
from .state import PureState, apply_local, ghz, make_state, random_local_unitaries, random_state
from .verifiers import fiber_words, pauli_word

FIBER_TOL = 1e-12
FIBER_TRIES = 20


def state_with_profile(profile: MultiplicityProfile, rng: np.random.Generator, rotate: bool = True) -> PureState:
    """Bipartite N x N state whose Schmidt coefficients follow the multiplicity profile."""
    n = profile.N
    levels = 1.0 + 0.5 * np.arange(len(profile.nonzero))[::-1] + rng.uniform(0, 0.2, len(profile.nonzero))
    p = np.concatenate([np.full(m, lv) for m, lv in zip(profile.nonzero, levels)] + [np.zeros(profile.m0)])
    amps = np.zeros((n, n), dtype=complex)
    amps[np.arange(n), np.arange(n)] = p
    v = make_state([n, n], amps)
    return apply_local(random_local_unitaries([n, n], rng), v) if rotate else v


def random_profile(n: int, rng: np.random.Generator) -> MultiplicityProfile:
    """Random composition of N into (m0; m1, ..., mr) with at least one nonzero group."""
    m0 = int(rng.integers(0, n))
    rest = n - m0
    parts = []
    while rest:
        m = int(rng.integers(1, rest + 1))
        parts.append(m)
        rest -= m
    return MultiplicityProfile(m0, tuple(parts), n)


def planted_pair(dims: Sequence[int], seed: int) -> tuple[PureState, PureState, list[np.ndarray]]:
    rng = np.random.default_rng(seed)
    x = random_state(dims, int(rng.integers(2**63)))
    us = random_local_unitaries(dims, rng)
    return x, apply_local(us, x), us


def conjugate_pair(seed: int, dims: Sequence[int] = (2, 2, 2)) -> tuple[PureState, PureState]:
    """x and a local rotation of conj(x).

    For generic three-qubit x these share every reduced spectrum and all
    sorted-form moduli, but the phase system is inconsistent.
    """
    rng = np.random.default_rng(seed)
    x = random_state(dims, int(rng.integers(2**63)))
    xc = PureState(x.dims, x.amplitudes.conj())
    return x, apply_local(random_local_unitaries(dims, rng), xc)


def _to_fiber(start: np.ndarray, dims, targets: dict[int, np.ndarray]):
    """Nearest-ish state to ``start`` whose reduced densities equal the targets, and the residual."""

    def unpack(z):
        half = z.size // 2
        return z[:half] + 1j * z[half:]

    def resid(z):
        v = unpack(z)
        v = v / np.linalg.norm(v)
        t = v.reshape(dims)
        out = []
        for k, target in targets.items():
            m = np.moveaxis(t, k, 0).reshape(dims[k], -1)
            d = m @ m.conj().T - target
            out.append(d.real.ravel())
            out.append(d.imag.ravel())
        return np.concatenate(out)

    z0 = np.concatenate([start.real, start.imag])
    sol = least_squares(resid, z0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    return make_state(dims, unpack(sol.x)), float(np.max(np.abs(resid(sol.x))))


def fiber_partner(x: PureState, seed: int) -> PureState:
    """A random state with exactly the same reduced densities as x."""
    rng = np.random.default_rng(seed)
    targets = dict(enumerate(reduced_densities(x)))
    for _ in range(FIBER_TRIES):
        start = random_state(x.dims, int(rng.integers(2**63))).amplitudes
        v, res = _to_fiber(start, x.dims, targets)
        if res <= FIBER_TOL:
            return v
    raise ArithmeticError(f"no fiber partner within {FIBER_TOL} (best residual {res:.1e})")


def mixed_middle_state(seed: int) -> PureState:
    """Three-qubit state with maximally mixed second qubit and generic other factors."""
    rng = np.random.default_rng(seed)
    start = random_state([2, 2, 2], int(rng.integers(2**63))).amplitudes
    return _to_fiber(start, (2, 2, 2), {1: np.eye(2) / 2})[0]


def ghz3_fiber_state(seed: int) -> PureState:
    """exp(tB) GHZ_3 for a fiber-tangent Pauli word B, followed by a random local rotation."""
    rng = np.random.default_rng(seed)
    words = _ghz3_words()
    word = words[int(rng.integers(len(words)))]
    t = float(rng.uniform(0, 2 * np.pi))
    b_mat = 1j * pauli_word(word)
    g = ghz(3).amplitudes
    w = make_state([2, 2, 2], (np.cos(t) * np.eye(8) + np.sin(t) * b_mat) @ g)
    return apply_local(random_local_unitaries([2, 2, 2], rng), w)


@lru_cache(maxsize=None)
def _ghz3_words() -> tuple:
    return tuple(fiber_words(3))


def moment_norm(v: PureState) -> float:
    return moment_image(v).norm()
