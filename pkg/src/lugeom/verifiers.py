"""Executable checks of two analytic arguments about moment-map fibers.

1. Bipartite states with vanishing Schmidt coefficients: the directions S
   spanned by e_k (x) f_l with p_k = p_l = 0 lie in the omega-orthocomplement
   of the orbit, but the second derivative of mu_{I (x) A} along any curve
   leaving [v] in such a direction is nonzero, so fibers are not tangent to S.
2. GHZ states: for a Pauli word B = i sigma_{a1} (x) ... (x) sigma_{aL} whose
   fundamental direction is omega-orthogonal to the orbit, the curve
   exp(tB) v stays inside the zero fiber of the moment map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import (
    BadArity,
    BadProfile,
    BadWord,
    LUGeomError,
    NonvanishingCoefficient,
    NotBipartite,
    StepOutOfRange,
)
from .lie import PAULI, LocalGenerator, TangentVector, commutator, embed, unit_matrix
from .moment import moment_image
from .state import PureState, ghz, group_multiplicities

DEFAULT_T_SAMPLES = (0.1, 0.5, 1.3, 2.9)
SCHMIDT_FORM_TOL = 1e-12


def appendix_a_matrix(n: int, m0: int) -> np.ndarray:
    """diag(i, ..., i, -i (N - m0)/m0, ...) with the last m0 entries on the vanishing coefficients."""
    if not 1 <= m0 <= n - 1:
        raise BadProfile(f"need 1 <= m0 <= N - 1, got m0={m0}, N={n}")
    diag = np.full(n, 1j)
    diag[n - m0:] = -1j * (n - m0) / m0
    return np.diag(diag)


def hermitian_pair(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """X_ij = i(E_ij - E_ji) and Y_ij = E_ij + E_ji (both Hermitian)."""
    x = 1j * (unit_matrix(n, i, j) - unit_matrix(n, j, i))
    y = unit_matrix(n, i, j) + unit_matrix(n, j, i)
    return x, y


def schmidt_profile(v: PureState) -> np.ndarray:
    """Diagonal of the coefficient matrix of a state already in Schmidt form."""
    if v.n_parties != 2 or v.dims[0] != v.dims[1]:
        raise NotBipartite(f"need two equal subsystems, got dims {v.dims}")
    m = v.tensor
    p = np.diag(m)
    off = m - np.diag(p)
    if np.max(np.abs(off)) > SCHMIDT_FORM_TOL or np.max(np.abs(p.imag)) > SCHMIDT_FORM_TOL:
        raise LUGeomError("state is not in Schmidt form (real diagonal coefficient matrix)")
    p = p.real
    if np.any(p < -SCHMIDT_FORM_TOL) or np.any(np.diff(p) > SCHMIDT_FORM_TOL):
        raise LUGeomError("Schmidt coefficients must be nonnegative and nonincreasing")
    return p


@dataclass(frozen=True)
class SDirection:
    base: PureState
    coefficients: Mapping[tuple[int, int], tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        p = schmidt_profile(self.base)
        coeffs = {(int(k), int(l)): (float(a), float(b)) for (k, l), (a, b) in dict(self.coefficients).items()}
        for k, l in coeffs:
            if not (0 <= k < p.size and 0 <= l < p.size):
                raise NonvanishingCoefficient(f"index ({k}, {l}) out of range")
            if abs(p[k]) > SCHMIDT_FORM_TOL or abs(p[l]) > SCHMIDT_FORM_TOL:
                raise NonvanishingCoefficient(f"p_{k} or p_{l} does not vanish")
        if not any(a or b for a, b in coeffs.values()):
            raise LUGeomError("all direction coefficients vanish")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def weight(self) -> float:
        """sum of a^2 + b^2."""
        return float(sum(a * a + b * b for a, b in self.coefficients.values()))

    def vector(self) -> np.ndarray:
        n = self.base.dims[0]
        out = np.zeros((n, n), dtype=complex)
        for (k, l), (a, b) in self.coefficients.items():
            out[k, l] = a + 1j * b
        return out.reshape(-1)


def random_direction(base: PureState, rng: np.random.Generator) -> SDirection:
    p = schmidt_profile(base)
    zero = np.flatnonzero(np.abs(p) <= SCHMIDT_FORM_TOL)
    coeffs = {(int(k), int(l)): tuple(rng.standard_normal(2)) for k in zero for l in zero}
    return SDirection(base, coeffs)


def s_generator(v: PureState, k: int, l: int) -> tuple[TangentVector, TangentVector]:
    """Tangent vectors generated by iY_1k (x) X_1l and iY_1k (x) Y_1l.

    They equal p_1 e_k (x) f_l and i p_1 e_k (x) f_l respectively.
    """
    p = schmidt_profile(v)
    n = p.size
    if abs(p[k]) > SCHMIDT_FORM_TOL or abs(p[l]) > SCHMIDT_FORM_TOL:
        raise NonvanishingCoefficient(f"p_{k} or p_{l} does not vanish")
    if p[0] <= SCHMIDT_FORM_TOL:
        raise NonvanishingCoefficient("leading Schmidt coefficient vanishes")
    _, yk = hermitian_pair(n, 0, k)
    xl, yl = hermitian_pair(n, 0, l)
    amps = v.amplitudes
    real_dir = 1j * np.kron(yk, xl) @ amps
    imag_dir = 1j * np.kron(yk, yl) @ amps
    return TangentVector.horizontal(v, real_dir), TangentVector.horizontal(v, imag_dir)


def direction_generator(direction: SDirection) -> np.ndarray:
    """B = (1/p_1) sum (a_kl iY_1k (x) X_1l + b_kl iY_1k (x) Y_1l), anti-Hermitian with Bv = sum (a + ib) e_k (x) f_l."""
    p = schmidt_profile(direction.base)
    n = p.size
    b_mat = np.zeros((n * n, n * n), dtype=complex)
    for (k, l), (a, b) in direction.coefficients.items():
        _, yk = hermitian_pair(n, 0, k)
        xl, yl = hermitian_pair(n, 0, l)
        b_mat += a * 1j * np.kron(yk, xl) + b * 1j * np.kron(yk, yl)
    return b_mat / p[0]


@dataclass(frozen=True)
class ObstructionResult:
    analytic: float
    finite_difference: float
    alpha: float
    weight: float
    truncation_estimate: float
    first_derivative: float

    @property
    def closed_form(self) -> float:
        """alpha * sum (a^2 + b^2), the value the double-commutator formula reduces to."""
        return self.alpha * self.weight

    @property
    def target_value(self) -> float:
        """-2 alpha sum (a^2 + b^2), the value the obstruction was expected to take."""
        return -2.0 * self.alpha * self.weight


def _mu(xi: np.ndarray, w: np.ndarray) -> float:
    return float((0.5j * np.vdot(w, xi @ w) / np.vdot(w, w)).real)


def obstruction(v: PureState, direction: SDirection, h: float = 1e-3) -> ObstructionResult:
    """Second derivative of mu_{I (x) A} along t -> [exp(tB) v] at t = 0.

    analytic uses (i/2) <v, [[I (x) A, B], B] v>; the finite-difference value
    is a Richardson-extrapolated central second difference.
    """
    if not 1e-5 <= h <= 1e-2:
        raise StepOutOfRange(f"step {h} outside [1e-5, 1e-2]")
    if direction.base is not v and not np.allclose(direction.base.amplitudes, v.amplitudes, atol=1e-14):
        raise LUGeomError("direction is based at a different state")
    p = schmidt_profile(v)
    n = p.size
    m0 = group_multiplicities(p)[0]
    a_mat = appendix_a_matrix(n, m0)
    xi = np.kron(np.eye(n), a_mat)
    b_mat = direction_generator(direction)
    amps = v.amplitudes
    analytic = float((0.5j * np.vdot(amps, commutator(commutator(xi, b_mat), b_mat) @ amps)).real)
    first = float((0.5j * np.vdot(amps, commutator(xi, b_mat) @ amps)).real)

    def g(t):
        return _mu(xi, expm(t * b_mat) @ amps)

    def second(step):
        return (g(step) - 2 * g(0.0) + g(-step)) / step**2

    d1, d2 = second(h), second(h / 2)
    fd = (4 * d2 - d1) / 3
    return ObstructionResult(analytic, fd, n / m0, direction.weight, abs(d2 - d1), first)


def pauli_word(word: Sequence[str]) -> np.ndarray:
    mats = []
    for label in word:
        key = str(label).lower()
        if key == "i":
            key = "0"
        if key not in PAULI:
            raise BadWord(f"unknown Pauli label {label!r}")
        mats.append(PAULI[key])
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@dataclass(frozen=True)
class GhzFiberReport:
    L: int
    word: tuple[str, ...]
    precondition: bool
    failing_generator: tuple[int, str] | None
    max_residual: float
    max_moment_norm: float
    passed: bool


def ghz_fiber_report(
    n_parties: int, word: Sequence[str], t_samples: Sequence[float] = DEFAULT_T_SAMPLES, tol: float = 1e-10
) -> GhzFiberReport:
    if n_parties < 3:
        raise BadArity("the GHZ fiber check needs L >= 3")
    word = tuple(str(w).lower().replace("i", "0") for w in word)
    if len(word) != n_parties:
        raise BadWord(f"word of length {len(word)} for L = {n_parties}")
    if all(w == "0" for w in word):
        raise BadWord("the identity word does not generate a direction")
    b_mat = 1j * pauli_word(word)
    v = ghz(n_parties)
    amps = v.amplitudes
    dims = [2] * n_parties
    gens = [(k, beta, embed(LocalGenerator.single(k, 1j * PAULI[beta]), dims))
            for k in range(n_parties) for beta in "xyz"]
    failing = None
    for k, beta, a_mat in gens:
        if abs(np.vdot(commutator(a_mat, b_mat) @ amps, amps)) > tol:
            failing = (k, beta)
            break
    residual, mom = 0.0, 0.0
    if failing is None:
        for t in t_samples:
            # exp(tB) = cos t + sin t B since B^2 = -1
            u = np.cos(t) * np.eye(amps.size) + np.sin(t) * b_mat
            w = u @ amps
            for _, _, a_mat in gens:
                residual = max(residual, abs(np.vdot(amps, u.conj().T @ a_mat @ w)))
            mom = max(mom, moment_image(PureState(v.dims, w)).norm())
    passed = failing is None and residual <= tol
    return GhzFiberReport(n_parties, word, failing is None, failing, float(residual), float(mom), bool(passed))


def ghz_fiber_check(n_parties: int, word: Sequence[str], t_samples: Sequence[float] = DEFAULT_T_SAMPLES) -> bool:
    """True iff B's direction is omega-orthogonal to the orbit and exp(tB) GHZ_L stays in the zero fiber."""
    return ghz_fiber_report(n_parties, word, t_samples).passed


def fiber_words(n_parties: int) -> list[tuple[str, ...]]:
    """All non-identity Pauli words passing the fiber check at the sampled times."""
    import itertools

    out = []
    for word in itertools.product("0xyz", repeat=n_parties):
        if all(w == "0" for w in word):
            continue
        if ghz_fiber_report(n_parties, word).passed:
            out.append(word)
    return out
