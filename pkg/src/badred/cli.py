"""Command-line front end.

Every subcommand writes one JSON document (UTF-8, fixed key order, trailing
newline) to stdout or ``--out``.  The run configuration, seed included, is
embedded in the report so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

from . import bounds
from .arith import factor
from .bounds import SquareFactorError, certificate_dict, certify_hypersurface
from .corpus import random_cycles, random_hyperplanes, random_hypersurfaces
from .cycles import CYCLE_PMAX, cycle_report, parse_cycle
from .heights import DEFAULT_SAMPLES, height_report
from .modp import DEFAULT_PMAX, oracle_bad_primes
from .polycore import ParseError, parse_poly, to_string
from .resultant import derivation_resultants, sylvester_resultant

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_HYPOTHESIS = 0, 1, 2, 3


class InputError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple = ()
    p_max: int | None = None
    samples: int = DEFAULT_SAMPLES
    grid: int | None = None
    seed: int = 0
    precision: int = 128
    out: str | None = None
    jobs: int = 1
    nvars: int | None = None

    def record(self) -> dict:
        d = asdict(self)
        d["inputs"] = list(self.inputs)
        d.pop("out")
        d.pop("jobs")  # results never depend on the worker count
        return d


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _strip_comments(text: str) -> list[str]:
    lines = (ln.split("#", 1)[0].strip() for ln in text.splitlines())
    return [ln for ln in lines if ln]


def _polys(cfg: RunConfig, text: str):
    lines = _strip_comments(text)
    if not lines:
        raise InputError("no polynomial given", EXIT_PARSE)
    try:
        return [parse_poly(ln, cfg.nvars) for ln in lines]
    except ParseError as e:
        raise InputError(f"parse error: {e}", EXIT_PARSE) from None


def _one_poly(cfg: RunConfig):
    text = _read(cfg.inputs[0])
    lines = _strip_comments(text)
    try:
        f = parse_poly(" ".join(lines), cfg.nvars)
    except ParseError as e:
        raise InputError(f"parse error: {e}", EXIT_PARSE) from None
    if f.is_zero:
        raise InputError("the zero polynomial does not define a hypersurface", EXIT_HYPOTHESIS)
    return f


def cmd_analyze(cfg: RunConfig):
    f = _one_poly(cfg)
    if not f.is_homogeneous:
        raise InputError("certification needs a homogeneous polynomial", EXIT_HYPOTHESIS)
    if f.nvars < 2:
        raise InputError("need at least two variables (a hypersurface in P^n, n >= 1)", EXIT_HYPOTHESIS)
    try:
        cert, verdict = certify_hypersurface(f, cfg.p_max or DEFAULT_PMAX, cfg.jobs)
    except SquareFactorError as e:
        raise InputError(str(e), EXIT_HYPOTHESIS) from None
    return certificate_dict(cert, verdict), EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_heights(cfg: RunConfig):
    f = _one_poly(cfg)
    rep = height_report(f, cfg.samples, cfg.seed, cfg.grid).as_dict()
    rep = {"input": to_string(f), **rep}
    ok = all(q["pass"] for q in rep["inequalities"])
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_cycle(cfg: RunConfig):
    try:
        c = parse_cycle(_read(cfg.inputs[0]))
    except ValueError as e:
        raise InputError(f"parse error: {e}", EXIT_PARSE) from None
    if c.ambient_n < 1:
        raise InputError("points must lie in P^n with n >= 1", EXIT_HYPOTHESIS)
    rep = cycle_report(c, cfg.p_max or CYCLE_PMAX, cfg.jobs)
    ok = all(rep.get("pass", {}).values())
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_resultant(cfg: RunConfig, var: int, degrees):
    polys = _polys(cfg, _read(cfg.inputs[0]))
    nv = max(p.nvars for p in polys)
    polys = [parse_poly(to_string(p), nv) if p.nvars != nv else p for p in polys]
    if any(p.is_zero for p in polys):
        raise InputError("zero polynomial", EXIT_HYPOTHESIS)
    if var is None:
        var = nv - 1
    try:
        if len(polys) == 1:
            f = polys[0]
            res = derivation_resultants(f, var)
            m, n = f.degree(var), f.degree(var) - 1
            g_text = None
        elif len(polys) == 2:
            f, g = polys
            m, n = degrees or (f.degree(var), g.degree(var))
            res = sylvester_resultant(f, g, var, m, n)
            g_text = to_string(g)
        else:
            raise InputError("give one polynomial (derivation) or two", EXIT_PARSE)
    except (ValueError, IndexError) as e:
        raise InputError(str(e), EXIT_HYPOTHESIS) from None
    rep = {
        "f": to_string(polys[0]),
        "g": g_text,
        "var": var,
        "m": m,
        "n": n,
        "det": to_string(res.det),
        "content": res.content,
        "content_factorization": [[p, e] for p, e in factor(res.content).items()],
        "zero_ideal": res.is_zero_ideal,
    }
    return rep, EXIT_OK


def cmd_oracle(cfg: RunConfig):
    f = _one_poly(cfg)
    p_max = cfg.p_max or DEFAULT_PMAX
    try:
        primes = oracle_bad_primes(f, p_max, jobs=cfg.jobs)
    except ValueError as e:
        raise InputError(str(e), EXIT_HYPOTHESIS) from None
    return {"input": to_string(f), "p_max": p_max, "bad_primes": primes}, EXIT_OK


def cmd_corpus(cfg: RunConfig, kind: str, count: int):
    rows = []
    failures = 0
    if kind in ("hypersurface", "hyperplane"):
        gen = random_hypersurfaces if kind == "hypersurface" else random_hyperplanes
        p_max = cfg.p_max or DEFAULT_PMAX
        min_margin = None
        for f in gen(count, cfg.seed):
            cert, v = certify_hypersurface(f, p_max, cfg.jobs)
            margin = v.bound_log - v.product_log
            min_margin = margin if min_margin is None else min(min_margin, margin)
            failures += not v.ok
            rows.append({"input": to_string(f), "superset": v.certified_superset,
                         "oracle": v.oracle_primes, "margin_log": margin, "pass": dict(v.passed)})
        summary = {
            "containment": sum(r["pass"]["containment"] for r in rows),
            "product": sum(r["pass"]["product"] for r in rows),
            "count": sum(r["pass"]["count"] for r in rows),
            "passed": count - failures,
            "min_margin_log": min_margin,
        }
    elif kind == "cycle":
        p_max = cfg.p_max or CYCLE_PMAX
        min_margin = None
        for c in random_cycles(count, cfg.seed):
            rep = cycle_report(c, p_max, cfg.jobs)
            ok = all(rep["pass"].values())
            margin = rep["bound_log"] - rep["product_log"]
            min_margin = margin if min_margin is None else min(min_margin, margin)
            failures += not ok
            rows.append({"points": rep["points"], "bad_primes": rep["bad_primes"],
                         "margin_log": margin, "pass": ok})
        summary = {"passed": count - failures, "min_margin_log": min_margin}
    else:
        raise InputError(f"unknown corpus kind {kind!r}", EXIT_PARSE)
    rep = {"kind": kind, "count": count, "p_max": p_max, "summary": summary, "instances": rows}
    return rep, EXIT_OK if failures == 0 else EXIT_FAIL


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pmax", type=int, default=None, help="largest prime scanned by the oracle")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo sample count")
    common.add_argument("--grid", type=int, default=None, help="base torus grid size per variable")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", type=int, default=128, help="bits for bound arithmetic")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for prime scans")
    common.add_argument("--nvars", type=int, default=None, help="number of variables (default: inferred)")

    ap = argparse.ArgumentParser(prog="badred", description="Bad reduction primes of hypersurfaces and point cycles.")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name, help_ in [("analyze", "certify the bad primes of a hypersurface"),
                        ("heights", "height report with inequality table"),
                        ("cycle", "Cayley form, bad primes and bound for a point cycle"),
                        ("oracle", "bad primes up to --pmax by direct reduction")]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("input", help="input file, or - for stdin")
    sp = sub.add_parser("resultant", parents=[common], help="Sylvester resultant of one or two polynomials")
    sp.add_argument("input")
    sp.add_argument("--var", type=int, default=None, help="eliminated variable index (default: last)")
    sp.add_argument("--degrees", type=int, nargs=2, metavar=("M", "N"), default=None)
    sp = sub.add_parser("corpus", parents=[common], help="run a seeded random corpus")
    sp.add_argument("--kind", choices=["hypersurface", "hyperplane", "cycle"], default="hypersurface")
    sp.add_argument("--count", type=int, default=200)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand,
        inputs=(args.input,) if hasattr(args, "input") else (),
        p_max=args.pmax,
        samples=args.samples,
        grid=args.grid,
        seed=args.seed,
        precision=args.precision,
        out=args.out,
        jobs=max(1, args.jobs),
        nvars=args.nvars,
    )
    bounds.PREC = cfg.precision
    try:
        if cfg.subcommand == "analyze":
            rep, code = cmd_analyze(cfg)
        elif cfg.subcommand == "heights":
            rep, code = cmd_heights(cfg)
        elif cfg.subcommand == "cycle":
            rep, code = cmd_cycle(cfg)
        elif cfg.subcommand == "resultant":
            rep, code = cmd_resultant(cfg, args.var, args.degrees)
        elif cfg.subcommand == "oracle":
            rep, code = cmd_oracle(cfg)
        else:
            rep, code = cmd_corpus(cfg, args.kind, args.count)
            rep = {"config": {**cfg.record(), "kind": args.kind, "count": args.count}, **rep}
    except InputError as e:
        print(f"badred: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"badred: {e}", file=sys.stderr)
        return EXIT_PARSE
    if "config" not in rep:
        rep = {"config": cfg.record(), **rep}
    text = dumps(rep)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
