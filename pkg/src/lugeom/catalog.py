"""The six Schmidt patterns of two qutrits with their orbit invariants."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .orbits import MultiplicityProfile, OrbitReport, bipartite_dims, classify
from .state import PureState, make_state

S2 = 1 / np.sqrt(2)
S3 = 1 / np.sqrt(3)


@dataclass(frozen=True)
class CatalogCase:
    number: int
    description: str
    coefficients: tuple[float, float, float]
    dim_orbit: int
    dim_coadjoint: int
    degeneracy: int
    classification: str
    dim_orthocomplement: int

    @property
    def state(self) -> PureState:
        return qutrit_state(self.coefficients)

    @property
    def m0(self) -> int:
        return sum(1 for p in self.coefficients if p == 0)

    @property
    def coisotropic(self) -> bool:
        return self.classification in ("coisotropic_strict", "lagrangian")


def qutrit_state(p) -> PureState:
    """p_1|00> + p_2|11> + p_3|22>, normalized."""
    amps = np.zeros(9, dtype=complex)
    for k, c in enumerate(p):
        amps[4 * k] = c
    return make_state([3, 3], amps)


CASES = (
    CatalogCase(1, "p1 = 1, p2 = p3 = 0 (separable)", (1.0, 0.0, 0.0), 8, 8, 0, "symplectic", 8),
    CatalogCase(2, "p1 = p2 = p3 (maximally entangled)", (S3, S3, S3), 8, 0, 8, "lagrangian", 8),
    CatalogCase(3, "p1 > p2 > p3 > 0 (generic)", (0.7, 0.6, float(np.sqrt(1 - 0.85))), 14, 12, 2, "coisotropic_strict", 2),
    CatalogCase(4, "p1 = p2 > p3 > 0", (0.6, 0.6, float(np.sqrt(1 - 0.72))), 12, 8, 4, "coisotropic_strict", 4),
    CatalogCase(5, "p1 = p2, p3 = 0", (S2, S2, 0.0), 11, 8, 3, "none", 5),
    CatalogCase(6, "p1 > p2 > 0, p3 = 0", (0.8, 0.6, 0.0), 13, 12, 1, "none", 3),
)


def case(number: int) -> CatalogCase:
    return CASES[number - 1]


def profile_of(c: CatalogCase) -> MultiplicityProfile:
    from .state import schmidt

    return MultiplicityProfile.from_multiplicities(schmidt(c.state).multiplicities)


def check_case(c: CatalogCase, tol: float = 1e-7) -> tuple[OrbitReport, tuple[int, int, int, int], bool]:
    """Numerical report, closed-form dims and whether both match the expected values."""
    rep = classify(c.state, tol)
    closed = bipartite_dims(profile_of(c))
    ok = (
        (rep.dim_orbit, rep.dim_coadjoint, rep.degeneracy, rep.classification)
        == (c.dim_orbit, c.dim_coadjoint, c.degeneracy, c.classification)
        and closed == (c.dim_orbit, c.dim_coadjoint, c.dim_orthocomplement, c.degeneracy)
        and rep.dim_orthocomplement == c.dim_orthocomplement
    )
    return rep, closed, ok
