"""Command-line front end.

State files are JSON objects ``{"dims": [...], "amplitudes": [{"re": .., "im": ..}, ...],
"label": optional}`` with amplitudes in row-major order, first subsystem slowest.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from typing import Sequence

import numpy as np

from . import catalog
from .equivalence import decide
from .errors import LUGeomError, ParseError, ZeroVector
from .moment import moment_image, sorted_trace_form, spectra
from .oracle import DEFAULT_BUDGET, DEFAULT_STARTS
from .orbits import RANK_TOL, classify
from .state import DEFAULT_TOL, PureState, ghz, make_state, random_state, schmidt
from .verdict import EXIT_CODES
from .verifiers import ghz_fiber_report, obstruction, random_direction

EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66

DIMORT_NOTE = "orthocomplement dimension is 2*m0^2 + sum(m_n^2) - 1, i.e. dim P(H) - dim O"
APPENDIX_A_NOTE = (
    "second derivative along S-directions evaluates to +alpha*sum(a^2+b^2); "
    "target_value = -2*alpha*sum(a^2+b^2) is reported for comparison and does not match"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def state_to_json(v: PureState, label: str | None = None) -> dict:
    out = {
        "dims": list(v.dims),
        "amplitudes": [{"re": float(z.real), "im": float(z.imag)} for z in v.amplitudes],
    }
    if label is not None:
        out["label"] = label
    return out


def state_from_json(data) -> PureState:
    if not isinstance(data, dict) or "dims" not in data or "amplitudes" not in data:
        raise ParseError("state file needs 'dims' and 'amplitudes'")
    try:
        dims = [int(d) for d in data["dims"]]
        amps = np.array([complex(float(a["re"]), float(a.get("im", 0.0))) for a in data["amplitudes"]])
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise ParseError(f"malformed state file: {exc}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ParseError(f"bad dims {dims}")
    if amps.size != int(np.prod(dims)):
        raise ParseError(f"{amps.size} amplitudes for dims {dims}")
    norm = float(np.linalg.norm(amps))
    if norm < 1e-14:
        raise ZeroVector("all amplitudes vanish")
    if abs(norm - 1.0) > 1e-6:
        warnings.warn(f"input norm {norm:.6g} differs from 1; state normalized", stacklevel=2)
    return make_state(dims, amps)


def parse_state(path: str) -> PureState:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_json(data)


def _matrix(m: np.ndarray) -> list:
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in np.asarray(m)]


def analyze_report(v: PureState, tol: float, rank_tol: float) -> dict:
    rep = classify(v, rank_tol)
    mom = moment_image(v)
    out = {
        "dims": list(v.dims),
        "spectra": [s.tolist() for s in spectra(v)],
        "moment_norms": [float(np.linalg.norm(c)) for c in mom.components],
        "orbit": rep.as_dict(),
        "tolerances": {"tol": tol, "rank_tol": rank_tol},
        "notes": [],
    }
    if v.n_parties == 2 and v.dims[0] == v.dims[1]:
        s = schmidt(v, tol)
        out["schmidt"] = {"coefficients": s.coefficients.tolist(), "multiplicities": list(s.multiplicities)}
        out["notes"].append(DIMORT_NOTE)
    return out


def _print(report: dict, as_json: bool):
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    for key in sorted(report):
        print(f"{key}: {report[key]}")


def _cmd_analyze(args) -> int:
    v = parse_state(args.state)
    start = time.perf_counter()
    report = analyze_report(v, args.tol, args.rank_tol)
    report["timing"] = time.perf_counter() - start
    if args.json:
        _print(report, True)
    else:
        orb = report["orbit"]
        print(f"dims: {report['dims']}")
        for k, s in enumerate(report["spectra"]):
            print(f"spectrum[{k}]: {np.round(s, 12).tolist()}")
        print(f"moment norms: {[round(x, 12) for x in report['moment_norms']]}")
        print(f"dim orbit: {orb['dim_orbit']}  dim coadjoint: {orb['dim_coadjoint']}  degeneracy: {orb['degeneracy']}")
        print(f"dim orthocomplement: {orb['dim_orthocomplement']} of {orb['dim_projective']}")
        print(f"classification: {orb['classification']}")
        for note in report["notes"]:
            print(f"note: {note}")
    return 0


def _cmd_equiv(args) -> int:
    x, y = parse_state(args.state1), parse_state(args.state2)
    start = time.perf_counter()
    verdict = decide(x, y, tol=args.tol, budget=args.budget, seed=args.seed, starts=args.starts)
    report = verdict.as_dict()
    report["tolerances"] = {"tol": args.tol}
    report["timing"] = time.perf_counter() - start
    if args.json:
        _print(report, True)
    else:
        print(f"status: {verdict.status}")
        print(f"method: {verdict.method}")
        if verdict.certificate is not None:
            print(f"certificate: {verdict.certificate.kind} {verdict.certificate.data}")
        if verdict.reason:
            print(f"reason: {verdict.reason}")
        if verdict.residual is not None:
            print(f"witness residual: {verdict.residual:.3e}")
    return EXIT_CODES[verdict.status]


def _cmd_sorted_form(args) -> int:
    v = parse_state(args.state)
    form = sorted_trace_form(v, args.tol)
    report = {
        "state": state_to_json(form.state, "sorted-trace-form"),
        "witnesses": [_matrix(u) for u in form.witnesses],
        "spectra": [s.tolist() for s in form.spectra],
        "profiles": [list(p) for p in form.profiles],
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def _emit_state(v: PureState, label: str) -> int:
    print(json.dumps(state_to_json(v, label), sort_keys=True, indent=2))
    return 0


def _cmd_ghz(args) -> int:
    return _emit_state(ghz(args.L), f"GHZ_{args.L}")


def _cmd_random(args) -> int:
    try:
        dims = [int(d) for d in args.dims.replace("x", ",").split(",") if d]
    except ValueError as exc:
        raise ParseError(f"bad dims {args.dims!r}") from exc
    return _emit_state(random_state(dims, args.seed), f"random seed={args.seed}")


def _verify_catalog(args) -> tuple[dict, bool]:
    rows, ok_all = [], True
    for c in catalog.CASES:
        rep, closed, ok = catalog.check_case(c, args.rank_tol)
        ok_all &= ok
        rows.append({
            "case": c.number,
            "description": c.description,
            "numerical": rep.as_dict(),
            "closed_form": {"dim_orbit": closed[0], "dim_coadjoint": closed[1],
                            "dim_orthocomplement": closed[2], "degeneracy": closed[3]},
            "ok": ok,
        })
    return {"catalog": rows, "notes": [DIMORT_NOTE]}, ok_all


def _verify_appendix_a(args) -> tuple[dict, bool]:
    rng = np.random.default_rng(args.seed)
    rows, ok_all = [], True
    for number in (1, 5, 6):
        v = catalog.case(number).state
        d = random_direction(v, rng)
        r = obstruction(v, d)
        ok = abs(r.analytic - r.finite_difference) <= 1e-5 * max(1.0, abs(r.analytic)) and r.analytic != 0
        ok_all &= ok
        rows.append({
            "case": number, "alpha": r.alpha, "analytic": r.analytic,
            "finite_difference": r.finite_difference, "closed_form": r.closed_form,
            "target_value": r.target_value, "ok": ok,
        })
    return {"appendix_a": rows, "notes": [APPENDIX_A_NOTE]}, ok_all


def _verify_ghz_fiber(args) -> tuple[dict, bool]:
    rows, ok_all = [], True
    for n, word, expect in ((3, "xx0", True), (4, "xxxx", True), (5, "xxxxx", True), (3, "yxx", False)):
        r = ghz_fiber_report(n, word)
        ok = r.passed == expect
        ok_all &= ok
        rows.append({"L": n, "word": "".join(r.word), "precondition": r.precondition,
                     "max_residual": r.max_residual, "passed": r.passed, "ok": ok})
    return {"ghz_fiber": rows}, ok_all


def _cmd_verify(args) -> int:
    suites = {"catalog": _verify_catalog, "appendix-a": _verify_appendix_a, "ghz-fiber": _verify_ghz_fiber}
    report, ok = suites[args.suite](args)
    report["ok"] = ok
    if args.json:
        _print(report, True)
    else:
        for key, rows in report.items():
            if isinstance(rows, list) and rows and isinstance(rows[0], dict):
                for row in rows:
                    print(f"{key}: {row}")
            elif key == "notes":
                for note in rows:
                    print(f"note: {note}")
        print("ok" if ok else "FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="spectral / matching tolerance")
    common.add_argument("--rank-tol", type=float, default=RANK_TOL, help="relative singular value cutoff")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle evaluations per start")
    common.add_argument("--starts", type=int, default=DEFAULT_STARTS, help="oracle restarts")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output with sorted keys")

    parser = _Parser(prog="lugeom", description="Local unitary equivalence and orbit geometry of pure states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("analyze", parents=[common], help="spectra, moment image and orbit report")
    p.add_argument("state")
    p.set_defaults(func=_cmd_analyze)
    p = sub.add_parser("equiv", parents=[common], help="decide local unitary equivalence")
    p.add_argument("state1")
    p.add_argument("state2")
    p.set_defaults(func=_cmd_equiv)
    p = sub.add_parser("sorted-form", parents=[common], help="sorted trace form and witnesses")
    p.add_argument("state")
    p.set_defaults(func=_cmd_sorted_form)
    p = sub.add_parser("ghz", parents=[common], help="emit the GHZ state on L qubits")
    p.add_argument("L", type=int)
    p.set_defaults(func=_cmd_ghz)
    p = sub.add_parser("random", parents=[common], help="emit a seeded random state, dims like 2,2,2")
    p.add_argument("dims")
    p.set_defaults(func=_cmd_random)
    p = sub.add_parser("verify", parents=[common], help="run a built-in verification suite")
    p.add_argument("suite", choices=["appendix-a", "ghz-fiber", "catalog"])
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"lugeom: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except ParseError as exc:
        print(f"lugeom: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except LUGeomError as exc:
        print(f"lugeom: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATAERR


def run(argv: Sequence[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
