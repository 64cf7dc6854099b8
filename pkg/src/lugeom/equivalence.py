"""Decision procedures for local unitary equivalence of pure states."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import AllSpectraDegenerate, BadArity, DegenerateSpectrum, DimensionMismatch, NotBipartite
from .moment import SortedTraceForm, moment_image, sorted_trace_form, spectra
from .oracle import DEFAULT_BUDGET, DEFAULT_STARTS, optimizer_oracle
from .phases import PhaseSystem, wrap
from .state import DEFAULT_TOL, PureState, apply_local, make_state, projective_distance, schmidt
from .verdict import (
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    WITNESS_TOL,
    Certificate,
    EquivalenceVerdict,
)

GAP = 1e-6
ANGLE_TOL = 1e-7
# amplitudes of a sorted form are reproducible only to roughly this accuracy,
# so modulus comparisons never use a tighter tolerance
MODULUS_FLOOR = 1e-8
SUPPORT_REL = 1e-6


def _check_dims(x: PureState, y: PureState):
    if x.dims != y.dims:
        raise DimensionMismatch(f"dims {x.dims} vs {y.dims}")


def spectra_certificate(x: PureState, y: PureState, tol: float = DEFAULT_TOL) -> Certificate | None:
    _check_dims(x, y)
    for k, (a, b) in enumerate(zip(spectra(x), spectra(y))):
        gap = float(np.max(np.abs(a - b)))
        if gap > tol:
            return Certificate("spectra-mismatch", {"subsystem": k, "x": a.tolist(), "y": b.tolist(), "gap": gap})
    return None


def spectra_match(x: PureState, y: PureState, tol: float = DEFAULT_TOL) -> bool:
    return spectra_certificate(x, y, tol) is None


def _witnessed(x, y, unitaries, method) -> EquivalenceVerdict:
    dist = projective_distance(apply_local(unitaries, x), y)
    if dist <= WITNESS_TOL:
        return EquivalenceVerdict(EQUIVALENT, method, witness=tuple(unitaries), residual=dist)
    return EquivalenceVerdict(INCONCLUSIVE, method, reason=f"witness reconstruction error {dist:.3e}", residual=dist)


def phase_system(xs: SortedTraceForm, ys: SortedTraceForm, tol: float = DEFAULT_TOL):
    """Build the mod-2pi system for matching ys.state to xs.state by diagonal phases.

    Returns (system, None) or (None, modulus certificate).
    """
    a = xs.state.amplitudes
    b = ys.state.amplitudes
    dims = xs.state.dims
    mod_tol = max(tol, MODULUS_FLOOR)
    diff = np.abs(np.abs(a) - np.abs(b))
    bad = int(np.argmax(diff))
    if diff[bad] > mod_tol:
        idx = np.unravel_index(bad, dims)
        return None, Certificate(
            "modulus-mismatch",
            {"index": [int(i) for i in idx], "x": float(abs(a[bad])), "y": float(abs(b[bad]))},
        )
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    support = np.flatnonzero(np.maximum(np.abs(a), np.abs(b)) > SUPPORT_REL * scale)
    idx = [np.unravel_index(i, dims) for i in support]
    rhs = wrap(np.angle(b[support]) - np.angle(a[support]))
    size = np.minimum(np.abs(a[support]), np.abs(b[support]))
    tau = ANGLE_TOL + mod_tol / size
    return PhaseSystem.build(dims, idx, rhs, tau), None


def diagonal_phase_match(
    xs: SortedTraceForm, ys: SortedTraceForm, tol: float = DEFAULT_TOL, gap: float = GAP
) -> EquivalenceVerdict:
    """Decide equivalence of two sorted forms whose spectra are all nondegenerate.

    The stabilizer of such a moment image is the diagonal torus, so the states
    are equivalent iff diagonal phases carry one sorted form to the other.
    """
    method = "diagonal-phase"
    _check_dims(xs.state, ys.state)
    if not (all(xs.nondegenerate(gap)) and all(ys.nondegenerate(gap))):
        raise DegenerateSpectrum("diagonal phase matching needs nondegenerate spectra on every factor")
    for k, (a, b) in enumerate(zip(xs.spectra, ys.spectra)):
        if np.max(np.abs(a - b)) > tol:
            return EquivalenceVerdict(
                NOT_EQUIVALENT, method,
                Certificate("spectra-mismatch", {"subsystem": k, "x": a.tolist(), "y": b.tolist()}),
            )
    system, cert = phase_system(xs, ys, tol)
    if cert is not None:
        return EquivalenceVerdict(NOT_EQUIVALENT, method, cert)
    sol = system.solve()
    if not sol.consistent:
        z = sol.violated_cycle
        used = np.flatnonzero(z)
        data = {
            "cycle": [[list(system.support[i]), int(z[i])] for i in used],
            "residual": sol.residual,
            "allowance": system.cycle_allowance(z),
        }
        return EquivalenceVerdict(NOT_EQUIVALENT, method, Certificate("phase-system-inconsistent", data))
    witness = [
        wy.conj().T @ np.diag(np.exp(1j * th)) @ wx
        for wx, wy, th in zip(xs.witnesses, ys.witnesses, sol.theta)
    ]
    return _witnessed(
        apply_local([w.conj().T for w in xs.witnesses], xs.state),
        apply_local([w.conj().T for w in ys.witnesses], ys.state),
        witness, method,
    )


def bipartite_equiv(x: PureState, y: PureState, tol: float = DEFAULT_TOL) -> EquivalenceVerdict:
    """Two-party test: equivalent iff the Schmidt coefficients agree."""
    method = "bipartite-schmidt"
    if x.n_parties != 2 or y.n_parties != 2:
        raise NotBipartite("bipartite_equiv needs two subsystems")
    _check_dims(x, y)
    sx, sy = schmidt(x, tol), schmidt(y, tol)
    gap = float(np.max(np.abs(sx.coefficients - sy.coefficients)))
    if gap > tol:
        cert = Certificate(
            "spectra-mismatch",
            {"subsystem": 0, "x": (sx.coefficients ** 2).tolist(), "y": (sy.coefficients ** 2).tolist(), "gap": gap},
        )
        return EquivalenceVerdict(NOT_EQUIVALENT, method, cert)
    u1 = sy.left_basis @ sx.left_basis.conj().T
    u2 = sy.right_basis @ sx.right_basis.conj().T
    return _witnessed(x, y, [u1, u2], method)


def _is_three_qubits(v: PureState) -> bool:
    return v.dims == (2, 2, 2)


def _branches(v: PureState):
    """First-factor diagonal form |0> a + |1> b; returns weights and normalized branches."""
    rho = v.tensor.reshape(2, 4) @ v.tensor.reshape(2, 4).conj().T
    evals, evecs = np.linalg.eigh(rho)
    w = evecs[:, ::-1].conj().T
    t = (w @ v.tensor.reshape(2, 4)).reshape(2, 2, 2)
    weights = np.linalg.norm(t.reshape(2, 4), axis=1)
    return w, weights, t


def _branch_schmidt(t: np.ndarray, weight: float) -> np.ndarray:
    # squared coefficients: sqrt would blow rounding noise up to ~1e-8 near product branches
    return schmidt(make_state([2, 2], t)).coefficients ** 2 if weight > 0 else np.zeros(2)


def three_qubit_equiv(
    x: PureState,
    y: PureState,
    tol: float = DEFAULT_TOL,
    gap: float = GAP,
    witness: bool = False,
    seed: int = 0,
) -> EquivalenceVerdict:
    """Three-qubit criterion via the branch states of a nondegenerate factor.

    With factor 1 diagonal, x = p11 |0> Psi_1 + p12 |1> Psi_2 and likewise y
    with Phi_1, Phi_2. The verdict compares the Schmidt coefficients of
    (Psi_1, Phi_1) and of (Psi_2, Phi_2). No witness is built unless asked
    for, in which case the optimizer is seeded with the first-factor rotation.
    """
    method = "three-qubit"
    _check_dims(x, y)
    if not _is_three_qubits(x):
        raise DimensionMismatch("three_qubit_equiv needs dims (2, 2, 2)")
    specs = spectra(x)
    pick = next((k for k, s in enumerate(specs) if s[0] - s[1] > gap), None)
    if pick is None:
        raise AllSpectraDegenerate("no subsystem has a nondegenerate reduced spectrum")
    cert = spectra_certificate(x, y, tol)
    if cert is not None:
        return EquivalenceVerdict(NOT_EQUIVALENT, method, cert)
    order = [pick] + [k for k in range(3) if k != pick]
    xp = PureState(x.dims, np.transpose(x.tensor, order))
    yp = PureState(y.dims, np.transpose(y.tensor, order))
    wx, px, tx = _branches(xp)
    wy, py, ty = _branches(yp)
    floor = max(tol, MODULUS_FLOOR)
    for branch in (0, 1):
        if branch == 1 and max(px[1], py[1]) <= floor:
            break
        cx = _branch_schmidt(tx[branch], px[branch])
        cy = _branch_schmidt(ty[branch], py[branch])
        diff = float(np.max(np.abs(cx - cy)))
        if diff > floor:
            data = {"subsystem": pick, "branch": branch, "x": cx.tolist(), "y": cy.tolist(), "gap": diff}
            return EquivalenceVerdict(NOT_EQUIVALENT, method, Certificate("branch-schmidt-mismatch", data))
    if not witness:
        return EquivalenceVerdict(EQUIVALENT, method, reason="branch Schmidt coefficients agree")
    start = [np.eye(2, dtype=complex) for _ in range(3)]
    start[pick] = wy.conj().T @ wx
    refined = optimizer_oracle(x, y, seed=seed, initial=start)
    if refined.status == EQUIVALENT:
        return EquivalenceVerdict(EQUIVALENT, method, witness=refined.witness, residual=refined.residual)
    return EquivalenceVerdict(EQUIVALENT, method, reason="witness refinement did not converge")


def zero_moment_equiv(x: PureState, y: PureState, tol: float = DEFAULT_TOL) -> EquivalenceVerdict:
    """Three qubits: all states with vanishing moment map form the GHZ orbit."""
    method = "zero-moment"
    _check_dims(x, y)
    if not _is_three_qubits(x):
        raise BadArity("zero_moment_equiv needs three qubits")
    nx, ny = moment_image(x).norm(), moment_image(y).norm()
    zx, zy = nx <= tol, ny <= tol
    if zx and zy:
        return EquivalenceVerdict(EQUIVALENT, method, reason="both moment images vanish")
    if zx != zy:
        cert = Certificate("spectra-mismatch", {"moment_norm_x": nx, "moment_norm_y": ny})
        return EquivalenceVerdict(NOT_EQUIVALENT, method, cert)
    return EquivalenceVerdict(INCONCLUSIVE, method, reason="not zero-moment")


def decide(
    x: PureState,
    y: PureState,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    starts: int = DEFAULT_STARTS,
    gap: float = GAP,
) -> EquivalenceVerdict:
    """Dispatch to the cheapest procedure that applies."""
    _check_dims(x, y)
    cert = spectra_certificate(x, y, tol)
    if cert is not None:
        return EquivalenceVerdict(NOT_EQUIVALENT, "spectra", cert)
    if x.n_parties == 2 and x.dims[0] == x.dims[1]:
        return bipartite_equiv(x, y, tol)
    specs = spectra(x)
    nondeg = [bool(np.all(-np.diff(s) > gap)) for s in specs]
    if all(nondeg):
        return diagonal_phase_match(sorted_trace_form(x, tol), sorted_trace_form(y, tol), tol, gap)
    if _is_three_qubits(x):
        if moment_image(x).norm() <= tol and moment_image(y).norm() <= tol:
            return zero_moment_equiv(x, y, tol)
        if any(nondeg):
            return three_qubit_equiv(x, y, tol, gap)
    return optimizer_oracle(x, y, budget=budget, seed=seed, starts=starts)


def recheck_certificate(x: PureState, y: PureState, verdict: EquivalenceVerdict, tol: float = DEFAULT_TOL) -> bool:
    """Independently re-verify the certificate attached to a NotEquivalent verdict."""
    cert = verdict.certificate
    if verdict.status != NOT_EQUIVALENT or cert is None:
        return False
    if cert.kind == "spectra-mismatch":
        if "moment_norm_x" in cert.data:
            return (moment_image(x).norm() <= tol) != (moment_image(y).norm() <= tol)
        k = cert.data["subsystem"]
        if verdict.method == "bipartite-schmidt":
            return bool(np.max(np.abs(schmidt(x).coefficients - schmidt(y).coefficients)) > tol)
        return bool(np.max(np.abs(spectra(x)[k] - spectra(y)[k])) > tol)
    if cert.kind == "modulus-mismatch":
        xs, ys = sorted_trace_form(x, tol), sorted_trace_form(y, tol)
        i = tuple(cert.data["index"])
        return abs(abs(xs.state.tensor[i]) - abs(ys.state.tensor[i])) > max(tol, MODULUS_FLOOR)
    if cert.kind == "phase-system-inconsistent":
        xs, ys = sorted_trace_form(x, tol), sorted_trace_form(y, tol)
        a, b = xs.state.tensor, ys.state.tensor
        total, allowance = 0.0, 0.0
        for idx, coeff in cert.data["cycle"]:
            idx = tuple(idx)
            total += coeff * float(np.angle(b[idx]) - np.angle(a[idx]))
            size = min(abs(a[idx]), abs(b[idx]))
            allowance += abs(coeff) * (ANGLE_TOL + max(tol, MODULUS_FLOOR) / size)
        return float(abs(wrap(total))) > allowance
    if cert.kind == "branch-schmidt-mismatch":
        return three_qubit_equiv(x, y, tol).status == NOT_EQUIVALENT
    return False


def witness_error(x: PureState, y: PureState, unitaries: Sequence[np.ndarray]) -> float:
    return projective_distance(apply_local(unitaries, x), y)
