"""``hgperiods`` command-line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 invalid configuration
(including violated parameter hypotheses), 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import continuation as cont
from . import fixtures as fx
from .core import HGSeriesSpec, eval_pFq, pow_lambda_minus_one
from .errors import HGError, HypothesisError
from .functions import G_prefactor, eval_f1, eval_f2, eval_f3
from .params import HGParams
from .period_reg import (
    check_regulator_congruence,
    eval_P_m,
    eval_Q_m,
    period_matrix,
    regulator_recursion,
)
from .thetadata import derive_ab
from .verify import SCALES, SUITES, run_checks

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
CSV_HEADER = ["check_id", "lambda_re", "lambda_im", "value_re", "value_im", "residual", "pass"]
FUNCTIONS = ("F_mu", "G_mu", "H_mu", "f1", "f2", "f3", "P_m", "Q_m")


class ConfigError(Exception):
    pass


@dataclass
class TableRow:
    check_id: str
    lam: complex | None
    value: complex | None
    residual: float | None
    passed: bool

    def to_dict(self) -> dict:
        pair = lambda z: None if z is None else [z.real, z.imag]
        return {
            "check_id": self.check_id,
            "lambda": pair(self.lam),
            "value": pair(self.value),
            "residual": self.residual,
            "pass": self.passed,
        }


@dataclass
class Result:
    payload: dict
    rows: list = field(default_factory=list)
    passed: bool = True


# --- parsing helpers ------------------------------------------------------------------------


def parse_fraction(text: str) -> Fraction:
    """Exact fraction such as ``7/2`` or ``-3``; decimals are refused."""
    t = str(text).strip()
    if any(c in t for c in ".eE") and not t.lstrip("+-").isdigit():
        raise ConfigError(f"parameters must be exact fractions like 7/2, got {text!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a fraction: {text!r}") from None


def parse_complex(text: str) -> complex:
    t = str(text).strip().replace(" ", "").replace("i", "j")
    if t.startswith("(") and t.endswith(")") and "," in t:
        re_, im_ = t[1:-1].split(",")
        return complex(float(re_), float(im_))
    try:
        return complex(t)
    except ValueError:
        raise ConfigError(f"not a complex number: {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    """``a;b;c`` lists points; ``line:start:end:n`` and ``circle:center:radius:n`` are ranges."""
    t = text.strip()
    if t.startswith("line:"):
        _, a, b, n = t.split(":")
        return np.linspace(parse_complex(a), parse_complex(b), int(n))
    if t.startswith("circle:"):
        _, c, r, n = t.split(":")
        k = np.arange(int(n))
        return parse_complex(c) + float(r) * np.exp(2j * np.pi * k / int(n))
    return np.array([parse_complex(x) for x in t.replace(",", ";").split(";") if x])


def parse_poly(text: str) -> list[Fraction]:
    return [parse_fraction(c) for c in text.split(",") if c.strip()] if text.strip() else []


def read_config(path: str) -> tuple[str | None, list[str]]:
    """``key = value`` lines mirroring the flags; ``command = eval`` picks the subcommand."""
    command, tokens = None, []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "command":
            command = value
        elif value.lower() in ("true", "yes", "on"):
            tokens.append(f"--{key}")
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            # --key=value keeps negative numbers from reading as flags
            for v in shlex.split(value) if key == "check" else [value]:
                tokens.append(f"--{key}={v}")
    return command, tokens


# --- argument parser ---------------------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_argument_group("parameters (exact fractions)")
    g.add_argument("--alpha", required=required)
    g.add_argument("--beta", required=required)
    g.add_argument("--mu", required=False)
    g.add_argument("--l", type=int, help="denominator l of mu = m/l (default: denominator of mu)")


def _add_theta(p: argparse.ArgumentParser):
    g = p.add_argument_group("theta = p0 + p1 d/dt (coefficients low degree first)")
    g.add_argument("--p0", default="1")
    g.add_argument("--p1", default="0,1,-1")


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgperiods", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a function at one point or on a grid")
    e.add_argument("--fn", choices=FUNCTIONS, required=True)
    _add_params(e)
    _add_theta(e)
    e.add_argument("--m", type=int, help="index m of P_m / Q_m (default: mu * l)")
    e.add_argument("--shift", type=int, default=0, help="evaluate at mu + shift")
    grp = e.add_mutually_exclusive_group(required=True)
    grp.add_argument("--lambda", dest="lam")
    grp.add_argument("--lambda-grid", dest="grid")
    _add_output(e)

    v = sub.add_parser("verify", help="run the check registry")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--scale", choices=tuple(SCALES), default="full")
    v.add_argument("--workers", type=int, default=4)
    v.add_argument("--check", action="append", help="run only this check id (repeatable)")
    _add_output(v)

    pm = sub.add_parser("period-matrix", help="period matrix and inner block at a point")
    _add_params(pm)
    _add_theta(pm)
    pm.add_argument("--m", type=int)
    pm.add_argument("--lambda", dest="lam", default="0.5")
    _add_output(pm)

    r = sub.add_parser("regulator", help="regulator recursion and its congruence test")
    _add_params(r)
    _add_theta(r)
    r.add_argument("--m", type=int)
    r.add_argument("--n", type=int, default=0, help="recursion depth (exponent of lambda - 1)")
    r.add_argument("--variant", choices=("phi1", "phi2"), default="phi1")
    r.add_argument("--lambda-grid", dest="grid", help="sample points with |1 - lambda| > 1")
    _add_output(r)

    mo = sub.add_parser("monodromy", help="local monodromy matrices of (F_mu, G_mu)")
    _add_params(mo)
    mo.add_argument("--loop", choices=("zero", "one", "infinity", "all"), default="all")
    mo.add_argument("--tol", type=float, default=1e-12)
    _add_output(mo)

    rep = sub.add_parser("report", help="verify everything and print a summary table")
    rep.add_argument("--seed", type=int, default=42)
    rep.add_argument("--scale", choices=tuple(SCALES), default="full")
    rep.add_argument("--workers", type=int, default=4)
    rep.add_argument("--output", help="also write the JSON report here")

    f = sub.add_parser("fixtures", help="regenerate the oracle fixtures")
    f.add_argument("--output", default=str(fx.DEFAULT_PATH))
    f.add_argument("--check", action="store_true", help="compare with the stored file instead of writing")
    return parser


# --- commands ----------------------------------------------------------------------------------


def _params(args) -> HGParams:
    alpha, beta = parse_fraction(args.alpha), parse_fraction(args.beta)
    if args.mu is None:
        raise ConfigError("--mu is required")
    mu = parse_fraction(args.mu)
    l = args.l if args.l is not None else mu.denominator
    return HGParams(alpha, beta, mu, l)


def _theta(args):
    return derive_ab(parse_poly(args.p0), parse_poly(args.p1))


def _series_eval(fn: str, args, lam: complex):
    """Value with the truncation estimate of the underlying series."""
    if fn in ("f1", "f2", "f3"):
        a, b = parse_fraction(args.alpha), parse_fraction(args.beta)
        value = {"f1": eval_f1, "f2": eval_f2, "f3": eval_f3}[fn](a, b, lam)
        if fn == "f1":
            spec, x, pref = HGSeriesSpec((a, b), (a + b,)), lam, 1.0
        elif fn == "f2":
            spec, x, pref = HGSeriesSpec((a, b), (1,)), 1 - lam, 1.0
        else:
            spec, x, pref = HGSeriesSpec((1 - a, 1 - b), (2 - a - b,)), lam, abs(value) or 1.0
        _, err, used = eval_pFq(spec, x)
        if fn == "f3":
            err *= pref / max(abs(eval_pFq(spec, x)[0]), 1e-300)
        return complex(value), float(err), int(used)
    p = _params(args)
    a, b, nu = p.alpha, p.beta, p.mu + args.shift
    if fn in ("P_m", "Q_m"):
        m = args.m if args.m is not None else p.m
        ev = eval_P_m if fn == "P_m" else eval_Q_m
        return complex(ev(p, _theta(args), m, lam)), None, None
    if fn == "F_mu":
        spec, x = HGSeriesSpec((a, b), (nu + 1,)), 1 - lam
        pref = pow_lambda_minus_one(lam, float(nu)) / float(nu)
    elif fn == "G_mu":
        spec, x = HGSeriesSpec((a - nu, b - nu), (a + b - nu,)), lam
        pref = G_prefactor(p, args.shift)
    else:
        spec, x = HGSeriesSpec((1, 1, 1 - nu), (2 - a, 2 - b)), 1 / (1 - lam)
        pref = pow_lambda_minus_one(lam, float(nu - 1)) / float((1 - a) * (1 - b))
    from .functions import eval_F_mu, eval_G_mu, eval_H_mu

    value = {"F_mu": eval_F_mu, "G_mu": eval_G_mu, "H_mu": eval_H_mu}[fn](p, lam, args.shift)
    _, err, used = eval_pFq(spec, x)
    return complex(value), float(abs(pref) * err), int(used)


def cmd_eval(args) -> Result:
    points = [parse_complex(args.lam)] if args.lam is not None else list(parse_grid(args.grid))
    records, rows = [], []
    for lam in points:
        value, err, used = _series_eval(args.fn, args, lam)
        records.append(
            {
                "lambda_re": lam.real,
                "lambda_im": lam.imag,
                "value_re": value.real,
                "value_im": value.imag,
                "est_error": err,
                "terms_used": used,
            }
        )
        rows.append(TableRow(f"eval.{args.fn}", lam, value, err, True))
    payload = dict(records[0]) if args.lam is not None else {"fn": args.fn, "points": records}
    return Result(payload, rows)


def cmd_verify(args) -> Result:
    try:
        records = run_checks(args.suite, args.seed, args.scale, args.workers, args.check)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    rows = []
    for rec in records:
        if rec.rows:
            for r in rec.rows:
                rows.append(TableRow(rec.check_id, r.lam, r.value, r.residual, rec.passed))
        else:
            rows.append(TableRow(rec.check_id, None, None, rec.residual, rec.passed))
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "scale": args.scale,
        "passed": sum(r.passed for r in records),
        "failed": sum(not r.passed for r in records),
        "records": [r.to_dict(rows=True) for r in records],
    }
    return Result(payload, rows, all(r.passed for r in records))


def cmd_period_matrix(args) -> Result:
    p = _params(args)
    td = _theta(args)
    m = args.m if args.m is not None else (p.m if p.m > p.l else p.admissible_m(1)[0])
    lam = parse_complex(args.lam)
    res = period_matrix(p, td, m)
    W = res.inner_block(lam)
    M = res.matrix(lam)
    rel = res.relative_det(lam)
    ok = rel > 1e-10
    pair = lambda z: [complex(z).real, complex(z).imag]
    payload = res.to_dict() | {
        "lambda": pair(lam),
        "inner_block": [[pair(z) for z in row] for row in W],
        "inner_det": pair(res.inner_det(lam)),
        "relative_det": rel,
        "matrix": [[pair(z) for z in row] for row in M],
        "nondegenerate": ok,
    }
    rows = [TableRow(f"period_matrix.W{i}{j}", lam, complex(W[i, j]), None, ok) for i in range(2) for j in range(2)]
    rows += [TableRow(f"period_matrix.M{i}{j}", lam, complex(M[i, j]), None, ok) for i in range(2) for j in range(2)]
    rows.append(TableRow("period_matrix.det", lam, complex(res.inner_det(lam)), rel, ok))
    return Result(payload, rows, ok)


def cmd_regulator(args) -> Result:
    p = _params(args)
    td = _theta(args)
    m = args.m if args.m is not None else p.m
    state = regulator_recursion(p, td, args.n, m)
    sample = parse_grid(args.grid) if args.grid else None
    rep = check_regulator_congruence(p, td, m, sample, n=args.n, variant=args.variant)
    ok = bool(rep.fit_residual < 1e-5)
    payload = {
        "params": p.to_dict(),
        "theta": td.to_dict(),
        "state": state.to_dict(),
        "C": {str(i): state.C_at(i).pretty() for i in sorted(state.C)},
        "D": {str(i): state.D_at(i).pretty() for i in sorted(state.D)},
        "congruence": rep.to_dict(),
        "pass": ok,
    }
    rows = [TableRow(f"regulator.{args.variant}", None, rep.C_estimate, rep.fit_residual, ok)]
    return Result(payload, rows, ok)


def _eig_error(got, want) -> float:
    g = list(got)
    return float(min(max(abs(g[0] - want[0]), abs(g[1] - want[1])), max(abs(g[0] - want[1]), abs(g[1] - want[0]))))


def cmd_monodromy(args) -> Result:
    p = _params(args)
    loops = ("zero", "one", "infinity") if args.loop == "all" else (args.loop,)
    e = lambda x: complex(np.exp(2j * np.pi * float(x)))
    xi = e((p.mu - p.alpha - p.beta) % 1)
    evaluate = {"zero": cont.monodromy_at_zero, "one": cont.monodromy_at_one, "infinity": cont.monodromy_at_infinity}
    mats, rows, ok = {}, [], True
    for name in loops:
        M = evaluate[name](p, args.tol)
        mats[name] = M
        if name == "zero":
            err = float(np.max(np.abs(M.entries - np.array([[xi, 0], [1 - xi, 1]]))))
        elif name == "one":
            err = _eig_error(M.eigenvalues(), [1.0, e(p.mu)])
        else:
            err = _eig_error(M.eigenvalues(), [e(p.alpha - p.mu), e(p.beta - p.mu)])
        passed = err < 1e-6
        ok &= passed
        for i in range(2):
            for j in range(2):
                rows.append(TableRow(f"monodromy.{name}.{i}{j}", None, complex(M.entries[i, j]), err, passed))
    payload = {"params": p.to_dict(), "xi": [xi.real, xi.imag], "loops": {}}
    for name, M in mats.items():
        payload["loops"][name] = M.to_dict() | {
            "eigenvalues": [[complex(z).real, complex(z).imag] for z in M.eigenvalues()],
            "det": [M.det.real, M.det.imag],
        }
    if len(mats) == 3:
        P = mats["infinity"].entries @ mats["one"].entries @ mats["zero"].entries
        err = float(np.max(np.abs(P - np.eye(2))))
        payload["product_error"] = err
        ok &= err < 1e-5
        rows.append(TableRow("monodromy.product", None, complex(np.linalg.det(P)), err, err < 1e-5))
    payload["pass"] = bool(ok)
    return Result(payload, rows, bool(ok))


def cmd_report(args) -> Result:
    records = run_checks("all", args.seed, args.scale, args.workers)
    width = max(len(r.check_id) for r in records)
    lines = [f"{'check':<{width}}  result  residual     threshold"]
    for r in records:
        lines.append(
            f"{r.check_id:<{width}}  {'PASS' if r.passed else 'FAIL'}    {r.residual:<11.3e}  {r.comparison} {r.threshold:.0e}"
        )
    lines.append(f"{sum(r.passed for r in records)}/{len(records)} checks passed")
    payload = {"seed": args.seed, "scale": args.scale, "records": [r.to_dict() for r in records]}
    return Result(payload | {"text": "\n".join(lines)}, [], all(r.passed for r in records))


def cmd_fixtures(args) -> Result:
    fresh = fx.generate()
    if args.check:
        bad = fx.compare(fx.load(args.output), fresh)
        return Result({"path": args.output, "mismatched": bad, "pass": not bad}, [], not bad)
    Path(args.output).parent.mkdir(parents=True, exist_ok=True)
    Path(args.output).write_text(json.dumps(fresh, indent=1, ensure_ascii=False) + "\n")
    return Result({"path": args.output, "count": len(fresh["fixtures"])}, [], True)


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "period-matrix": cmd_period_matrix,
    "regulator": cmd_regulator,
    "monodromy": cmd_monodromy,
    "report": cmd_report,
    "fixtures": cmd_fixtures,
}


# --- output ------------------------------------------------------------------------------------


def _g(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        lam = (None, None) if r.lam is None else (r.lam.real, r.lam.imag)
        val = (None, None) if r.value is None else (r.value.real, r.value.imag)
        w.writerow([r.check_id, _g(lam[0]), _g(lam[1]), _g(val[0]), _g(val[1]), _g(r.residual), str(r.passed).lower()])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _finite(o):
    if isinstance(o, float) and not math.isfinite(o):
        return None
    if isinstance(o, dict):
        return {k: _finite(v) for k, v in o.items()}
    if isinstance(o, list):
        return [_finite(v) for v in o]
    return o


def render(result: Result, fmt: str, command: str) -> str:
    if command == "report":
        return result.payload["text"] + "\n"
    if fmt == "csv":
        return to_csv(result.rows)
    payload = dict(result.payload)
    if command not in ("eval", "verify", "fixtures") or (command == "eval" and "points" in payload):
        payload["rows"] = [r.to_dict() for r in result.rows]
    return json.dumps(_finite(json.loads(json.dumps(payload, default=_json_default))), indent=1, ensure_ascii=False) + "\n"


# --- entry point ---------------------------------------------------------------------------------


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    out, path, i = [], None, 0
    while i < len(argv):
        a = argv[i]
        if a == "--config":
            if i + 1 >= len(argv):
                raise ConfigError("--config needs a path")
            path, i = argv[i + 1], i + 2
            continue
        if a.startswith("--config="):
            path = a.split("=", 1)[1]
        else:
            out.append(a)
        i += 1
    command, tokens = read_config(path)
    has_command = bool(out) and out[0] in COMMANDS
    if not has_command:
        if command is None:
            raise ConfigError("no command given on the command line or in the config file")
        out.insert(0, command)
    # flags from the file first, so explicit flags win
    return [out[0]] + tokens + out[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
    except ConfigError as exc:
        print(f"hgperiods: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"hgperiods: {exc}", file=sys.stderr)
        return EXIT_IO
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
        text = render(result, getattr(args, "format", "json"), args.command)
        out_path = getattr(args, "output", None)
        if out_path and args.command not in ("fixtures",):
            if args.command == "report":
                Path(out_path).write_text(json.dumps(_finite(result.payload), indent=1) + "\n")
                sys.stdout.write(text)
            else:
                Path(out_path).write_text(text)
        else:
            sys.stdout.write(text)
    except HypothesisError as exc:
        print("hgperiods: invalid configuration: hypothesis violated: " + "; ".join(exc.violations), file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, HGError, ValueError) as exc:
        print(f"hgperiods: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"hgperiods: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
