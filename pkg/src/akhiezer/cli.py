"""Command-line front end: ``solve``, ``certify`` and ``ladder``.

stdout carries the payload only; logs (level from AKHIEZER_LOG) and error
reports go to stderr.  Exit codes: 0 success, 2 invalid input, 3 numerical
failure, 4 certification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import warnings

import numpy as np

from .errors import AkhiezerError, CertificationError, DomainError
from .frame import BetaLadder, TwoIntervalSet, beta_ladder, build_frame
from .functional import transfinite_diameter
from .oracle import OracleConfig, certify
from .solver import solve
from .synthesis import PELL_TOL

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_CERT = 0, 2, 3, 4

log = logging.getLogger("akhiezer")


# ---------------------------------------------------------------- output


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits (lossless round trip)."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _floats(a):
    return [float(v) for v in a]


def solve_response(sol, s: TwoIntervalSet, tau: float) -> dict:
    case = sol.case
    out = {
        "alpha": s.alpha,
        "beta": s.beta,
        "degree": sol.degree,
        "coefficients": _floats(sol.f.coeffs),
        "zeros": _floats(sol.zeros),
        "case": {"branch": case.branch.value, "p": case.p, "sigma_over_K": case.sigma_over_K},
        "minimal_value": sol.minimal_value,
        "tau": tau,
        "diagnostics": {
            "pell_equation": sol.pell.equation if sol.pell else None,
            "pell_excess": sol.pell.excess if sol.pell else None,
            "max_moment_residual": sol.max_moment_residual,
        },
    }
    if sol.family is not None:
        fam = sol.family
        out["degenerate_family"] = {
            "gamma": fam.gamma,
            "Bcoef": fam.Bcoef,
            "family_value": 4.0 * fam.Bcoef * (2 * fam.m + 2),
            "endpoint_roots": [_floats(g.zeros) for g in fam.endpoint_solutions],
        }
    elif sol.even is not None and sol.even.alternates:
        out["degenerate_family"] = {
            "gamma": None,
            "endpoint_roots": [_floats(sol.zeros)] + [_floats(g.zeros) for g in sol.even.alternates],
        }
    if sol.notes:
        out["notes"] = list(sol.notes)
    return out


def _csv(resp: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "index", "value"])
    for i, c in enumerate(resp["coefficients"]):
        w.writerow(["coefficient", i, _fmt_float(c)])
    for i, z in enumerate(resp["zeros"]):
        w.writerow(["zero", i, _fmt_float(z)])
    return buf.getvalue()


def _text(resp: dict) -> str:
    lines = [
        f"E = [-1, {resp['alpha']:.12g}] U [{resp['beta']:.12g}, 1], degree {resp['degree']}",
        f"case: {resp['case']['branch']} (p = {resp['case']['p']}, sigma/K = {resp['case']['sigma_over_K']:.6g})",
        f"minimal L1 value: {resp['minimal_value']:.15g}",
        f"transfinite diameter: {resp['tau']:.15g}",
        "zeros: " + ", ".join(f"{z:.12g}" for z in resp["zeros"]),
        "coefficients: " + ", ".join(f"{c:.12g}" for c in resp["coefficients"]),
    ]
    d = resp["diagnostics"]
    if d.get("pell_excess") is not None:
        lines.append(f"Pell {d['pell_equation']} excess: {d['pell_excess']:.3g}")
    lines.append(f"max moment residual: {d['max_moment_residual']:.3g}")
    if "oracle_gap" in d:
        lines.append(f"oracle relative gap: {d['oracle_gap']:.3g}")
    if "degenerate_family" in resp and resp["degenerate_family"].get("gamma") is not None:
        lines.append(f"degenerate family, gamma = {resp['degenerate_family']['gamma']:.15g}")
    return "\n".join(lines) + "\n"


def _emit(resp: dict, fmt: str):
    if fmt == "json":
        sys.stdout.write(dumps(resp) + "\n")
    elif fmt == "csv":
        sys.stdout.write(_csv(resp))
    else:
        sys.stdout.write(_text(resp))


def _write_curve(path, sol, s: TwoIntervalSet, points: int = 512):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "f"])
        for lo, hi in s.intervals:
            xs = np.linspace(lo, hi, points)
            for x, y in zip(xs, sol.f(xs)):
                w.writerow([_fmt_float(x), _fmt_float(y)])


# -------------------------------------------------------------- commands


def _set_from(args) -> TwoIntervalSet:
    if args.degree is not None and args.degree < 1:
        raise DomainError("--degree must be >= 1")
    return TwoIntervalSet(args.alpha, args.beta)


def _oracle_cfg(args) -> OracleConfig:
    return OracleConfig(grid_size=args.grid)


def cmd_solve(args) -> int:
    s = _set_from(args)
    sol = solve(s, n=args.degree, tol_pell=args.tol_pell)
    if sol.pell is not None and sol.pell.excess > args.tol_pell:
        raise AkhiezerError(f"Pell excess {sol.pell.excess:.3g} exceeds {args.tol_pell:.3g}")
    resp = solve_response(sol, s, transfinite_diameter(build_frame(s)))
    if args.with_oracle:
        rep = certify(sol, s, _oracle_cfg(args), tol_value=args.tol_cert, raise_on_fail=False)
        resp["diagnostics"]["oracle_gap"] = rep.relative_value_gap
        resp["diagnostics"]["oracle_root_distance"] = rep.root_distance
    if args.curve:
        _write_curve(args.curve, sol, s)
    _emit(resp, args.format)
    return EXIT_OK


def cmd_certify(args) -> int:
    s = _set_from(args)
    sol = solve(s, n=args.degree, tol_pell=args.tol_pell)
    rep = certify(sol, s, _oracle_cfg(args), tol_value=args.tol_cert, raise_on_fail=False)
    out = rep.to_dict()
    out.update({"alpha": s.alpha, "beta": s.beta, "oracle_certified_gap": rep.oracle.certified_gap})
    if args.format == "json":
        sys.stdout.write(dumps(out) + "\n")
    else:
        for k, v in out.items():
            sys.stdout.write(f"{k}: {v}\n")
    if not rep.passed:
        details = {**out, "analytic": sol.f.to_list(), "oracle": rep.oracle.coeffs.to_list()}
        _error(CertificationError("certification failed", details), EXIT_CERT)
        return EXIT_CERT
    return EXIT_OK


def ladder_response(ladder: BetaLadder) -> dict:
    rungs = [
        {"p": p, "beta": b, "k": k} for p, b, k in zip(ladder.indices, ladder.betas, ladder.moduli)
    ]
    # skipped rungs all sit at beta ~ 1, so the top band starts at p = len(skipped)
    edges = [(len(ladder.skipped), 1.0)] + list(zip(ladder.indices, ladder.betas)) + [(None, ladder.alpha)]
    bands = [
        {"beta_low": b_lo, "beta_high": b_hi, "p": p, "branch": BetaLadder.band_branch(p).value}
        for (p, b_hi), (_, b_lo) in zip(edges[:-1], edges[1:])
    ]
    return {
        "alpha": ladder.alpha,
        "m": ladder.m,
        "degree": 2 * ladder.m + 1,
        "rungs": rungs,
        "skipped": list(ladder.skipped),
        "bands": bands,
    }


def cmd_ladder(args) -> int:
    if not -1.0 < args.alpha < 1.0:
        raise DomainError("--alpha must lie in (-1, 1)")
    if args.m is None:
        if args.degree is None or args.degree % 2 == 0:
            raise DomainError("ladder needs --m or an odd --degree")
        args.m = (args.degree - 1) // 2
    if args.m < 0:
        raise DomainError("--m must be >= 0")
    resp = ladder_response(beta_ladder(args.alpha, args.m))
    if args.format == "json":
        sys.stdout.write(dumps(resp) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "beta", "k"])
        for r in resp["rungs"]:
            w.writerow([r["p"], _fmt_float(r["beta"]), _fmt_float(r["k"])])
        sys.stdout.write(buf.getvalue())
    else:
        for r in resp["rungs"]:
            sys.stdout.write(f"p={r['p']:3d}  beta={r['beta']:.15g}  k={r['k']:.15g}\n")
        for b in resp["bands"]:
            sys.stdout.write(f"({b['beta_low']:.12g}, {b['beta_high']:.12g}): {b['branch']}\n")
    return EXIT_OK


# ------------------------------------------------------------------ main


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _error(DomainError(message), EXIT_INVALID)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="akhiezer", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, degree_required=True):
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--beta", type=float, required=degree_required)
        sp.add_argument("--degree", type=int, required=degree_required)
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--grid", type=int, default=OracleConfig.grid_size, help="oracle nodes per interval")
        sp.add_argument("--tol-pell", type=float, default=PELL_TOL)
        sp.add_argument("--tol-cert", type=float, default=1e-4)

    sp = sub.add_parser("solve", help="closed-form minimizer")
    common(sp)
    sp.add_argument("--with-oracle", action="store_true", help="attach the oracle comparison")
    sp.add_argument("--curve", metavar="PATH", help="write f sampled on E as CSV")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("certify", help="compare with the brute-force oracle (degree <= 12)")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("ladder", help="beta values where the minimizer is not unique")
    common(sp, degree_required=False)
    sp.add_argument("--m", type=int, default=None)
    sp.set_defaults(func=cmd_ladder)
    return p


def _error(exc: Exception, code: int):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    extra = getattr(exc, "payload", None)
    if extra:
        payload["details"] = extra
    sys.stderr.write(dumps(payload) + "\n")


def _setup_logging():
    level = os.environ.get("AKHIEZER_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except CertificationError as exc:
        _error(exc, EXIT_CERT)
        return EXIT_CERT
    except DomainError as exc:
        _error(exc, EXIT_INVALID)
        return EXIT_INVALID
    except (AkhiezerError, ArithmeticError, ValueError) as exc:
        _error(exc, EXIT_NUMERICAL)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
