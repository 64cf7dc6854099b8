"""Multi-start local optimization over local unitaries.

Minimizes f = 1 - |<y, (U_1 x ... x U_L) x>|^2 with U_k = exp(X_k(theta)) U0_k,
X_k in su(N_k) expanded in the su_basis coordinates and U0_k the start point.
The gradient is exact: the Frechet derivative of exp at an anti-Hermitian
matrix is diagonal in its eigenbasis with divided differences of exp.
The oracle can only confirm equivalence; failing to reach the threshold is
reported as Inconclusive.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionMismatch
from .lie import su_basis
from .state import PureState, apply_local, haar_unitary, projective_distance
from .verdict import EQUIVALENT, INCONCLUSIVE, WITNESS_TOL, EquivalenceVerdict

DEFAULT_STARTS = 20
DEFAULT_BUDGET = 500


class _Objective:
    def __init__(self, x: PureState, y: PureState, starts: Sequence[np.ndarray]):
        self.dims = x.dims
        self.x = x.tensor
        self.ybar = y.tensor.conj()
        self.bases = [np.array(su_basis(d)) if d > 1 else np.zeros((0, 1, 1)) for d in self.dims]
        self.sizes = [b.shape[0] for b in self.bases]
        self.u0 = [np.asarray(u, dtype=complex) for u in starts]

    def unpack(self, theta):
        out, pos = [], 0
        for b, n in zip(self.bases, self.sizes):
            out.append(np.tensordot(theta[pos:pos + n], b, axes=1) if n else np.zeros((1, 1), complex))
            pos += n
        return out

    def _exp(self, gen):
        # gen anti-Hermitian: gen = V diag(i lam) V^dagger
        lam, vec = np.linalg.eigh(-1j * gen)
        d = 1j * lam
        ed = np.exp(d)
        diff = d[:, None] - d[None, :]
        same = np.abs(diff) < 1e-12
        phi = np.where(same, ed[:, None], (ed[:, None] - ed[None, :]) / np.where(same, 1.0, diff))
        return vec @ np.diag(ed) @ vec.conj().T, vec, phi

    def unitaries(self, theta):
        return [self._exp(g)[0] @ u0 for g, u0 in zip(self.unpack(theta), self.u0)]

    def __call__(self, theta):
        gens = self.unpack(theta)
        parts = [self._exp(g) for g in gens]
        us = [e @ u0 for (e, _, _), u0 in zip(parts, self.u0)]
        t = self.x
        for k, u in enumerate(us):
            t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
        c = np.vdot(self.ybar.conj(), t)
        f = 1.0 - abs(c) ** 2
        grad = []
        for k, ((_, vec, phi), u, u0, b) in enumerate(zip(parts, us, self.u0, self.bases)):
            if b.shape[0] == 0:
                continue
            # environment: c = sum_ab U_k[a, b] env[a, b]
            xt = np.tensordot(np.linalg.inv(u), t, axes=([1], [k]))
            xt = np.moveaxis(xt, 0, k)
            yk = np.moveaxis(self.ybar, k, 0).reshape(self.dims[k], -1)
            xk = np.moveaxis(xt, k, 0).reshape(self.dims[k], -1)
            env = yk @ xk.T
            m = vec.conj().T @ u0 @ env.T @ vec
            w = phi * m.T
            kmat = vec @ w.T @ vec.conj().T
            dc = np.einsum("ab,nba->n", kmat, b)
            grad.append(-2.0 * (np.conj(c) * dc).real)
        return f, np.concatenate(grad) if grad else np.zeros(0)


class _Done(Exception):
    pass


def _run(obj: _Objective, budget: int, target: float):
    n = sum(obj.sizes)
    best = {"f": np.inf, "theta": np.zeros(n)}

    def fun(theta):
        f, g = obj(theta)
        if f < best["f"]:
            best["f"], best["theta"] = f, theta.copy()
        return f, g

    def stop(intermediate_result):
        if best["f"] < target:
            raise StopIteration

    minimize(
        fun, np.zeros(n), jac=True, method="L-BFGS-B", callback=stop,
        options={"maxfun": budget, "maxiter": budget, "ftol": 1e-16, "gtol": 1e-12},
    )
    return best["f"], best["theta"]


def optimizer_oracle(
    x: PureState,
    y: PureState,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    starts: int = DEFAULT_STARTS,
    initial: Sequence[np.ndarray] | None = None,
    target: float = 1e-10,
) -> EquivalenceVerdict:
    """Search for local unitaries with (U_1 x ... x U_L) x = y up to phase.

    budget bounds function evaluations per start. The first start is the
    identity (or ``initial`` when given), the rest are Haar random.
    """
    if x.dims != y.dims:
        raise DimensionMismatch(f"dims {x.dims} vs {y.dims}")
    rng = np.random.default_rng(seed)
    best_f, best_u = np.inf, None
    for s in range(max(1, starts)):
        if s == 0:
            u0 = list(initial) if initial is not None else [np.eye(d, dtype=complex) for d in x.dims]
        else:
            u0 = [haar_unitary(d, rng) if d > 1 else np.eye(1, dtype=complex) for d in x.dims]
        obj = _Objective(x, y, u0)
        f, theta = _run(obj, budget, target)
        if f < best_f:
            best_f, best_u = f, obj.unitaries(theta)
        if best_f < target:
            break
    dist = projective_distance(apply_local(best_u, x), y)
    if dist <= WITNESS_TOL:
        return EquivalenceVerdict(EQUIVALENT, "oracle", witness=tuple(best_u), residual=dist)
    return EquivalenceVerdict(
        INCONCLUSIVE, "oracle", reason=f"best objective {best_f:.3e} above {WITNESS_TOL:g}", residual=dist
    )
