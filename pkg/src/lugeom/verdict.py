"""Result types shared by the equivalence procedures and the oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
INCONCLUSIVE = "Inconclusive"

EXIT_CODES = {EQUIVALENT: 0, NOT_EQUIVALENT: 1, INCONCLUSIVE: 2}

WITNESS_TOL = 1e-8


@dataclass(frozen=True)
class Certificate:
    """Re-checkable reason for a NotEquivalent verdict.

    kind is one of spectra-mismatch, modulus-mismatch,
    phase-system-inconsistent or branch-schmidt-mismatch.
    """

    kind: str
    data: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class EquivalenceVerdict:
    status: str
    method: str
    certificate: Certificate | None = None
    witness: tuple[np.ndarray, ...] | None = None
    reason: str = ""
    residual: float | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def as_dict(self) -> dict:
        out: dict[str, Any] = {"status": self.status, "method": self.method}
        if self.certificate is not None:
            out["certificate"] = {"kind": self.certificate.kind, **_jsonable(self.certificate.data)}
        if self.witness is not None:
            out["witness"] = [_complex_matrix(u) for u in self.witness]
        if self.reason:
            out["reason"] = self.reason
        if self.residual is not None:
            out["residual"] = float(self.residual)
        return out


def _complex_matrix(u: np.ndarray) -> list:
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in np.asarray(u)]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj
