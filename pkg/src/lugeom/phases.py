"""Diagonal phase matching as a linear system modulo 2*pi.

Unknowns are one phase per (subsystem, level) plus a global phase. Each
supported multi-index K contributes the row
``sum_j theta[j, K_j] + gamma = rhs_K (mod 2 pi)``. Solvability modulo 2*pi
is decided exactly: an integer basis of the left kernel of the 0/1 incidence
matrix is computed by integer row reduction, and every kernel vector z must
satisfy ``z . rhs = 0 (mod 2 pi)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


def wrap(angle):
    """Map angles to (-pi, pi]."""
    a = np.mod(np.asarray(angle, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(a <= -np.pi, a + 2 * np.pi, a)


def integer_row_reduce(mat: np.ndarray) -> tuple[list[list[int]], list[list[int]], list[list[int]], int]:
    """Integer echelon form H = U M with U unimodular.

    Returns (H, U, U^-1, rank) as nested lists of Python ints so intermediate
    values never overflow. Rows of U past the rank span the integer left
    kernel of M.
    """
    h = [[int(x) for x in row] for row in np.asarray(mat)]
    n = len(h)
    ncols = len(h[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    uinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(i, j):
        h[i], h[j] = h[j], h[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def addrow(i, j, q):
        # row_i -= q * row_j ; inverse column op: col_j += q * col_i
        h[i] = [a - q * b for a, b in zip(h[i], h[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]
        for row in uinv:
            row[j] += q * row[i]

    pivot = 0
    for c in range(ncols):
        if pivot >= n:
            break
        while True:
            nz = [i for i in range(pivot, n) if h[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(h[i][c]))
            if best != pivot:
                swap(best, pivot)
            done = True
            for i in range(pivot + 1, n):
                if h[i][c]:
                    addrow(i, pivot, h[i][c] // h[pivot][c])
                    if h[i][c]:
                        done = False
            if done:
                break
        if any(h[i][c] for i in range(pivot, n)):
            pivot += 1
    return h, u, uinv, pivot


def integer_left_kernel(mat: np.ndarray) -> np.ndarray:
    """Integer lattice basis (rows) of {z : z^T M = 0}."""
    _, u, _, rank = integer_row_reduce(mat)
    return np.array(u[rank:], dtype=np.int64).reshape(-1, np.asarray(mat).shape[0])


@dataclass(frozen=True, eq=False)
class PhaseSolution:
    consistent: bool
    theta: list[np.ndarray] | None
    gamma: float | None
    violated_cycle: np.ndarray | None
    residual: float


@dataclass(frozen=True, eq=False)
class PhaseSystem:
    """Rows: supported multi-indices. Columns: per-(subsystem, level) phases, then the global phase."""

    dims: tuple[int, ...]
    support: tuple[tuple[int, ...], ...]
    incidence: np.ndarray
    rhs: np.ndarray
    tau: np.ndarray

    @classmethod
    def build(cls, dims: Sequence[int], support, rhs, tau=None) -> PhaseSystem:
        dims = tuple(int(d) for d in dims)
        offsets = np.concatenate([[0], np.cumsum(dims)])
        support = tuple(tuple(int(i) for i in k) for k in support)
        inc = np.zeros((len(support), int(offsets[-1]) + 1), dtype=np.int64)
        for row, idx in enumerate(support):
            for j, level in enumerate(idx):
                inc[row, offsets[j] + level] = 1
            inc[row, -1] = 1
        rhs = wrap(np.asarray(rhs, dtype=float))
        tau = np.full(len(support), 1e-7) if tau is None else np.asarray(tau, dtype=float)
        return cls(dims, support, inc, rhs, tau)

    def kernel(self) -> np.ndarray:
        return integer_left_kernel(self.incidence)

    def cycle_residual(self, z: np.ndarray) -> float:
        return float(abs(wrap(np.dot(z, self.rhs))))

    def cycle_allowance(self, z: np.ndarray) -> float:
        return float(np.dot(np.abs(z), self.tau))

    def solve(self) -> PhaseSolution:
        _, u, uinv, rank = integer_row_reduce(self.incidence)
        z = np.array(u[rank:], dtype=float).reshape(-1, len(self.support))
        worst = 0.0
        for row in z:
            res = self.cycle_residual(row)
            worst = max(worst, res)
            if res > self.cycle_allowance(row):
                return PhaseSolution(False, None, None, row.astype(np.int64), res)
        # pick integer k with z . (rhs + 2 pi k) = 0 for every kernel vector
        winding = np.rint(z @ self.rhs / (2 * np.pi)).astype(np.int64)
        tail = np.array([r[rank:] for r in uinv], dtype=float).reshape(len(self.support), -1)
        k = tail @ (-winding) if tail.size else np.zeros(len(self.support))
        target = self.rhs + 2 * np.pi * k
        sol, *_ = np.linalg.lstsq(self.incidence.astype(float), target, rcond=None)
        offsets = np.concatenate([[0], np.cumsum(self.dims)])
        theta = [sol[offsets[j]:offsets[j + 1]] for j in range(len(self.dims))]
        return PhaseSolution(True, theta, float(sol[-1]), None, worst)
