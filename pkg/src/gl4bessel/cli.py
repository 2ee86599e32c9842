"""``gl4bessel`` command line: eval, verify, decomp, interchange, table.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 numerical failure. Errors are reported as a JSON object on stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field

from .errors import BesselError, DomainError, TruncationWarning
from .weyl import RELEVANT_NAMES, SpectralParams, WeylElement, YPoint, free_coordinates

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
METHODS = ("series", "mellin-barnes", "both")
SUITE_NAMES = ("gamma", "hyp", "series", "diffops", "decomp")


class InvalidRequest(ValueError):
    pass


def thread_cap():
    """Worker count: GL4_BESSEL_THREADS if set, else the CPU count."""
    cap = os.cpu_count() or 1
    env = os.environ.get("GL4_BESSEL_THREADS")
    if env:
        try:
            cap = max(1, min(cap, int(env)))
        except ValueError:
            raise InvalidRequest(f"GL4_BESSEL_THREADS must be an integer, got {env!r}") from None
    return cap


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _finite(obj):
    """Replace non-finite floats by None so the output stays strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def emit(obj, stream=None):
    # repr-based float output round-trips exactly (at most 17 significant digits)
    (stream or sys.stdout).write(json.dumps(_finite(obj), sort_keys=True) + "\n")


# ------------------------------------------------------------------ eval


@dataclass
class EvalRequest:
    weyl: str
    y: tuple
    params: SpectralParams
    method: str = "series"
    order: int = 12
    contour: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data, order=12):
        if not isinstance(data, dict):
            raise InvalidRequest("request must be a JSON object")
        unknown = set(data) - {"weyl", "y", "mu", "delta", "method", "order", "contour"}
        if unknown:
            raise InvalidRequest(f"unknown fields: {sorted(unknown)}")
        weyl = str(data.get("weyl", ""))
        if weyl not in RELEVANT_NAMES:
            raise InvalidRequest(f"weyl must be one of {RELEVANT_NAMES}, got {weyl!r}")
        try:
            mu = tuple(complex(float(p[0]), float(p[1])) for p in data["mu"])
            delta = tuple(int(d) for d in data.get("delta", (0, 0, 0, 0)))
            y = tuple(float(v) for v in data.get("y", ()))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidRequest(f"malformed y/mu/delta: {exc}") from None
        if len(mu) != 4 or len(delta) != 4:
            raise InvalidRequest("mu needs four [re, im] pairs and delta four integers")
        try:
            params = SpectralParams(mu, delta)
        except DomainError as exc:
            raise InvalidRequest(str(exc)) from None
        method = data.get("method", "series")
        if method not in METHODS:
            raise InvalidRequest(f"method must be one of {METHODS}")
        contour = data.get("contour", {})
        if not isinstance(contour, dict):
            raise InvalidRequest("contour overrides must be an object")
        return cls(weyl, y, params, method, int(data.get("order", order)), contour)

    def point(self, w: WeylElement):
        """The YPoint; ``y`` may list all three coordinates or only the free ones."""
        if w.name == "4":
            return None
        free = free_coordinates(w)
        try:
            if len(self.y) == 3:
                point = YPoint(self.y)
                if not point.in_Y(w):
                    raise InvalidRequest(f"fixed coordinates of Y_{w.name} must be 1")
                return point
            if len(self.y) == len(free):
                return YPoint.on(w, self.y)
        except DomainError as exc:
            raise InvalidRequest(str(exc)) from None
        raise InvalidRequest(f"y needs 3 or {len(free)} entries for w{w.name}")


def _series_value(w, y, params, order):
    """K_w by the coset sum, with |K(order) - K(order - 1)| as the error."""
    from .mellin_barnes import kernel_K
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        value = kernel_K(w, y, params, order=order)
        coarse = kernel_K(w, y, params, order=max(order - 1, 0))
    return complex(value), float(abs(value - coarse))


def evaluate(request: EvalRequest, tol=1e-6, t0=None):
    from .mellin_barnes import ContourConfig, mb_eval
    w = WeylElement.from_name(request.weyl)
    out = {"weyl": request.weyl, "mu": [_pair(m) for m in request.params.mu],
           "delta": list(request.params.delta), "method": request.method}
    if w.name == "4":
        for key in ("series", "mellin_barnes"):
            out[key] = {"value": [1.0, 0.0], "error": 0.0}
        out["discrepancy"] = 0.0
        return out
    y = request.point(w)
    out["y"] = list(y.y)
    if request.method in ("series", "both"):
        value, err = _series_value(w, y, request.params, request.order)
        out["series"] = {"value": _pair(value), "error": err, "order": request.order}
    if request.method in ("mellin-barnes", "both"):
        overrides = {"rtol": tol, **request.contour}
        if t0 is not None:
            overrides["T0"] = t0
        if "abscissae" in overrides:
            overrides["abscissae"] = tuple(overrides["abscissae"])
        try:
            cfg = ContourConfig.default(w, **overrides)
        except TypeError as exc:
            raise InvalidRequest(f"bad contour override: {exc}") from None
        result = mb_eval(w, y, request.params, cfg)
        out["mellin_barnes"] = {"value": _pair(result.value), "error": result.error,
                                "evaluations": result.evaluations}
    if request.method == "both":
        s = complex(*out["series"]["value"])
        m = complex(*out["mellin_barnes"]["value"])
        out["discrepancy"] = abs(s - m) / abs(s) if s else abs(m)
    return out


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidRequest(f"cannot read JSON from {path}: {exc}") from None


def cmd_eval(args):
    request = EvalRequest.from_dict(_read_json(args.request), order=args.order)
    if args.method:
        request.method = args.method
    emit(evaluate(request, tol=args.tol, t0=args.t0))
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args):
    from .suites import DEFAULT_SAMPLES, run_suite
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    report = []
    for name in names:
        samples = args.samples if args.samples is not None else DEFAULT_SAMPLES[name]
        for check in run_suite(name, seed=args.seed, samples=samples):
            report.append((name, check))
    ok = all(c.passed for _, c in report)
    if args.json:
        emit({"seed": args.seed, "passed": ok,
              "checks": [{"suite": n, **c.to_dict()} for n, c in report]})
    else:
        for name, check in report:
            print(f"[{name}] {check.line()}")
        print("all checks passed" if ok else "SOME CHECKS FAILED")
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------- decomp


def cmd_decomp(args):
    from .decompositions import sweep
    from .weyl import KERNEL_NAMES
    names = [args.weyl] if args.weyl else list(KERNEL_NAMES)
    rows, ok = [], True
    for name in names:
        if name not in KERNEL_NAMES:
            raise InvalidRequest(f"no decompositions recorded for w{name}")
        iw, br = sweep(WeylElement.from_name(name), samples=args.samples, seed=args.seed)
        passed = iw <= 1e-11 and br <= 1e-10
        ok &= passed
        rows.append({"weyl": name, "iwasawa": iw, "bruhat": br, "passed": passed})
    if args.json:
        emit({"seed": args.seed, "samples": args.samples, "results": rows})
    else:
        for r in rows:
            verdict = "PASS" if r["passed"] else "FAIL"
            print(f"{verdict} w{r['weyl']}: iwasawa {r['iwasawa']:.3e}  bruhat {r['bruhat']:.3e}")
    return EXIT_OK if ok else EXIT_FAILED


# ----------------------------------------------------------- interchange


def cmd_interchange(args):
    from .interchange import Phase, builtin_phase, enumerate_cases
    if bool(args.weyl) == bool(args.phase_file):
        raise InvalidRequest("give exactly one of --weyl or --phase-file")
    if args.phase_file:
        try:
            phase = Phase.from_dict(_read_json(args.phase_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidRequest(f"bad phase file: {exc}") from None
    else:
        phase = builtin_phase(args.weyl)
    report = enumerate_cases(phase, workers=thread_cap())
    if args.json:
        emit({**report.to_dict(), "families": report.family_lines()})
        return EXIT_OK
    print(f"phase {phase.name}: {len(report.entries)} non-trivial case(s)")
    for line in report.lines():
        print("  " + line)
    print("families:")
    for line in report.family_lines() or ["(none)"]:
        print("  " + line)
    return EXIT_OK


# ----------------------------------------------------------------- table


TABLE_COLUMNS = (["weyl", "y1", "y2", "y3"]
                 + [f"mu{i}_{part}" for i in range(1, 5) for part in ("re", "im")]
                 + [f"delta{i}" for i in range(1, 5)] + ["re", "im", "err"])


def cmd_table(args):
    data = _read_json(args.requests)
    if not isinstance(data, list):
        raise InvalidRequest("table input must be a JSON list of eval requests")
    requests = [EvalRequest.from_dict(d, order=args.order) for d in data]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(TABLE_COLUMNS)
        for req in requests:
            if req.method == "both":
                req.method = "series"
            result = evaluate(req, tol=args.tol, t0=args.t0)
            key = "series" if req.method == "series" else "mellin_barnes"
            y = result.get("y", [1.0, 1.0, 1.0])
            mu = [x for m in result["mu"] for x in m]
            re_, im = result[key]["value"]
            numbers = [*y, *mu, re_, im, result[key]["error"]]
            cells = [repr(float(x)) for x in numbers]
            writer.writerow([req.weyl, *cells[:3], *cells[3:11], *result["delta"], *cells[11:]])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ------------------------------------------------------------------ main


def build_parser():
    parser = argparse.ArgumentParser(prog="gl4bessel", description=__doc__.splitlines()[0])
    parser.add_argument("--order", type=int, default=12, help="series truncation order")
    parser.add_argument("--tol", type=float, default=1e-6, help="Mellin-Barnes relative tolerance")
    parser.add_argument("--t0", type=float, default=None, help="height where contour tails bend")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate K_w from a JSON request")
    p.add_argument("request", nargs="?", default="-", help="request file, '-' for stdin")
    p.add_argument("--method", choices=METHODS, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run identity suites")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decomp", help="check Iwasawa and Bruhat decompositions")
    p.add_argument("--weyl", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decomp)

    p = sub.add_parser("interchange", help="run the interchange-of-integrals case analysis")
    p.add_argument("--weyl", default=None)
    p.add_argument("--phase-file", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_interchange)

    p = sub.add_parser("table", help="tabulate a list of eval requests to CSV")
    p.add_argument("requests", help="JSON list of requests, '-' for stdin")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidRequest, DomainError) as exc:
        emit({"error": {"kind": "invalid", "type": type(exc).__name__, "message": str(exc)}})
        return EXIT_INVALID
    except (BesselError, ArithmeticError) as exc:
        emit({"error": {"kind": "numerical", "type": type(exc).__name__, "message": str(exc)}})
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
