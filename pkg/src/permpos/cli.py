"""Command line interface: ``permpos {propc,cyclic,check,apply,sweep}``.

Exit codes: 0 ok, 1 a witness of non-positivity was found under
``--expect-positive``, 2 usage or input error, 3 oracle disagreement in
``sweep``.
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
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .cyclic import CyclicPairSpec, cyclic_has_property_c, enumerate_cyclic, lemma41_literal
from .dmap import apply_map, build_pair_d, load_d, load_hermitian, hermitian_to_json
from .linalg import min_eigenvalue_hermitian
from .numcheck import (
    NotPositive,
    PositiveByCriterion,
    SearchConfig,
    Unknown,
    lemma31_functional,
    maximize_functional,
    psd_sample_verify,
)
from .permutations import format_permutation, parse_permutation
from .property_c import PermPair, has_property_c, has_property_c_bruteforce

log = logging.getLogger("permpos")

SCHEMA = 1
CYCLIC_COLUMNS = ["n", "p", "q", "q_minus_p", "has_property_c", "rule", "positivity"]
SWEEP_COLUMNS = [
    "n", "p", "q", "closed_form", "brute_force", "agree", "literal_lemma", "literal_agrees",
]
SWEEP_GUARD = 12


class UsageError(Exception):
    pass


def max_workers() -> int:
    raw = os.environ.get("PERMPOS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring PERMPOS_THREADS=%r", raw)
    return min(8, os.cpu_count() or 1)


def _search_config(args) -> SearchConfig:
    try:
        return SearchConfig(args.starts, args.iters, args.tol, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _num(x):
    # JSON has no NaN or infinity
    if math.isnan(x):
        return None
    return x if math.isfinite(x) else "inf"


def _verdict_dict(verdict) -> dict:
    out = {"kind": verdict.kind}
    if isinstance(verdict, PositiveByCriterion):
        out["reason"] = verdict.reason
    elif isinstance(verdict, NotPositive):
        out["witness"] = list(verdict.witness)
        out["value"] = _num(verdict.value)
        out["min_eigenvalue"] = verdict.min_eigenvalue
    else:
        out["max_found"] = _num(verdict.max_found)
        out["starts"] = verdict.starts
        out["iterations"] = verdict.iterations
    return out


def _numeric(d, cfg: SearchConfig, trials: int) -> tuple[object, dict]:
    search = maximize_functional(d, cfg)
    samples = psd_sample_verify(d, trials, tol=1e-8, seed=cfg.seed)
    verdict = search.verdict
    evidence = search.evidence()
    if not isinstance(verdict, NotPositive) and samples.violations:
        x, eig = min(samples.violations, key=lambda v: v[1])
        t = np.abs(x) ** 2
        t /= t.sum()
        verdict = NotPositive(tuple(float(v) for v in t), lemma31_functional(d, t), eig)
        evidence["verdict"] = verdict.kind
    if isinstance(verdict, NotPositive):
        evidence["witness"] = list(verdict.witness)
    evidence["psd_samples"] = samples.to_dict()
    return verdict, evidence


def _emit(report: dict, fmt: str, text: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
    else:
        out.write(text)


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def cmd_propc(args, out) -> int:
    try:
        pi1 = parse_permutation(args.perm1)
        pi2 = parse_permutation(args.perm2)
        pair = PermPair(pi1, pi2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report_c = has_property_c(pair)
    n = pair.n
    evidence = None
    if report_c.holds and n >= 3:
        verdict = PositiveByCriterion("pair has property (C)")
    else:
        verdict = Unknown(float("nan"), 0, 0)
    if n >= 3 and (args.numeric or not report_c.holds):
        d = build_pair_d(n, pi1, pi2)
        num_verdict, evidence = _numeric(d, _search_config(args), args.trials)
        if isinstance(num_verdict, NotPositive):
            if report_c.holds:
                log.error("numeric witness contradicts the property (C) criterion")
            verdict = num_verdict
        elif not report_c.holds:
            verdict = num_verdict
    report = {
        "schema": SCHEMA,
        "command": "propc",
        "inputs": {"perm1": format_permutation(pi1), "perm2": format_permutation(pi2), "n": n},
        "orbits": [sorted(o) for o in pair.orbits],
        "property_c": report_c.to_dict(),
        "numeric": evidence,
        "verdict": _verdict_dict(verdict),
    }
    lines = [
        f"propc  perm1={format_permutation(pi1)}  perm2={format_permutation(pi2)}  n={n}",
        "orbits: " + " ".join(_fmt_set(o) for o in pair.orbits),
    ]
    for r in report_c.per_orbit:
        line = f"  orbit {_fmt_set(r.orbit)}: {'holds' if r.holds else 'fails'} ({r.method})"
        if r.condition1 is not None:
            line += f"  cond1={r.condition1.holds}"
        if r.condition2 is not None:
            line += f"  cond2={r.condition2.holds}"
        if not r.holds:
            line += f"  failing i={r.failing_index}"
            if r.hall is not None:
                line += f"  hall left={_fmt_set(r.hall.left)} targets={_fmt_set(r.hall.targets)}"
        lines.append(line)
    lines.append(f"property (C): {'holds' if report_c.holds else 'fails'}")
    if evidence is not None:
        lines.append(f"numeric: max F found = {evidence['max_found']}  "
                     f"psd min eig = {evidence['psd_samples']['min_eig_seen']:.6g}")
    lines.append(_verdict_line(verdict))
    _emit(report, args.format, "\n".join(lines) + "\n", out)
    return 1 if args.expect_positive and isinstance(verdict, NotPositive) else 0


def _verdict_line(verdict) -> str:
    if isinstance(verdict, PositiveByCriterion):
        return f"verdict: PositiveByCriterion ({verdict.reason})"
    if isinstance(verdict, NotPositive):
        w = ",".join(f"{v:.6g}" for v in verdict.witness)
        return f"verdict: NotPositive  witness t=({w})  min eig={verdict.min_eigenvalue:.6g}"
    if np.isnan(verdict.max_found):
        return "verdict: Unknown"
    return f"verdict: Unknown  max F found={verdict.max_found:.12g}"


def _cyclic_text(rows) -> str:
    lines = []
    by_diff: dict[int, list] = {}
    for v in rows:
        by_diff.setdefault(v.spec.q - v.spec.p, []).append(v)
    for diff in sorted(by_diff):
        group = by_diff[diff]
        yes = [v.spec.p for v in group if v.has_property_c]
        no = [v.spec.p for v in group if not v.has_property_c]
        line = f"q-p={diff:<3d} property (C) for p in {_fmt_set(yes)}"
        if no:
            line += f"; fails for p in {_fmt_set(no)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_cyclic(args, out) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if args.all:
        try:
            rows = enumerate_cyclic(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.p is None or args.q is None:
            raise UsageError("give --p and --q, or --all")
        try:
            spec = CyclicPairSpec(args.n, args.p, args.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.strict_lemma and spec.q >= spec.n:
            raise UsageError("--strict-lemma needs q < n")
        rows = [cyclic_has_property_c(spec)]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, CYCLIC_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for v in rows:
            row = v.row()
            row["has_property_c"] = str(row["has_property_c"]).lower()
            writer.writerow(row)
        out.write(buf.getvalue())
    elif args.format == "json":
        report = {"schema": SCHEMA, "command": "cyclic", "inputs": {"n": args.n},
                  "rows": [v.row() for v in rows]}
        out.write(json.dumps(report, indent=2) + "\n")
    elif args.all:
        out.write(f"cyclic n={args.n}\n" + _cyclic_text(rows))
    else:
        v = rows[0]
        out.write(
            f"cyclic n={v.spec.n} p={v.spec.p} q={v.spec.q}: "
            f"property (C) {'holds' if v.has_property_c else 'fails'}  rule={v.rule_text}  "
            f"positivity={v.positivity.value}\n"
        )
    return 0


def cmd_check(args, out) -> int:
    try:
        d = load_d(args.d_file)
    except (OSError, ValueError) as exc:
        raise UsageError(f"{args.d_file}: {exc}") from None
    verdict, evidence = _numeric(d, _search_config(args), args.trials)
    report = {
        "schema": SCHEMA,
        "command": "check",
        "inputs": {"d_file": str(args.d_file), "n": d.shape[0]},
        "numeric": evidence,
        "verdict": _verdict_dict(verdict),
    }
    text = (
        f"check {args.d_file}  n={d.shape[0]}\n"
        f"max F found: {evidence['max_found']}\n"
        f"psd samples: {args.trials}, min eig {evidence['psd_samples']['min_eig_seen']:.6g}, "
        f"violations {evidence['psd_samples']['violation_count']}\n"
        f"{_verdict_line(verdict)}\n"
    )
    _emit(report, args.format, text, out)
    return 1 if args.expect_positive and isinstance(verdict, NotPositive) else 0


def cmd_apply(args, out) -> int:
    try:
        d = load_d(args.d_file)
        a = load_hermitian(args.matrix_file)
        image = apply_map(d, a)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    result = hermitian_to_json(image)
    result["min_eigenvalue"] = min_eigenvalue_hermitian(image)
    out.write(json.dumps(result) + "\n")
    return 0


def _sweep_rows(n: int) -> list[dict]:
    rows = []
    for p in range(1, n):
        for q in range(p + 1, n + 1):
            spec = CyclicPairSpec(n, p, q)
            closed = cyclic_has_property_c(spec).has_property_c
            brute = has_property_c_bruteforce(PermPair(*spec.pair())).holds
            literal = lemma41_literal(spec)
            rows.append({
                "n": n, "p": p, "q": q,
                "closed_form": closed, "brute_force": brute, "agree": closed == brute,
                "literal_lemma": literal, "literal_agrees": literal == brute,
            })
    return rows


def cmd_sweep(args, out) -> int:
    if args.n_max < 3:
        raise UsageError("--n-max must be at least 3")
    if args.n_max > SWEEP_GUARD and not args.force:
        raise UsageError(f"--n-max above {SWEEP_GUARD} needs --force")
    with ThreadPoolExecutor(max_workers()) as pool:
        chunks = list(pool.map(_sweep_rows, range(3, args.n_max + 1)))
    rows = [r for chunk in chunks for r in chunk]
    bad = [r for r in rows if not r["agree"]]
    literal_bad = [r for r in rows if not r["literal_agrees"]]
    if args.format == "json":
        out.write(json.dumps({"schema": SCHEMA, "command": "sweep",
                              "inputs": {"n_max": args.n_max}, "rows": rows,
                              "disagreements": len(bad),
                              "literal_disagreements": len(literal_bad)}, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})
        out.write(buf.getvalue())
    print(f"sweep 3..{args.n_max}: {len(rows)} rows, {len(bad)} disagreements "
          f"(integer-reading alignment rule: {len(literal_bad)} disagreements)", file=sys.stderr)
    for r in bad:
        print(f"DISAGREE n={r['n']} p={r['p']} q={r['q']} closed={r['closed_form']} "
              f"brute={r['brute_force']}", file=sys.stderr)
    return 3 if bad else 0


def _add_common(p: argparse.ArgumentParser, fmt: str = "text") -> None:
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--format", choices=["text", "json", "csv"], default=fmt)
    p.add_argument("--expect-positive", action="store_true")
    p.add_argument("--timing", action="store_true", help="report wall time on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permpos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propc", help="property (C) of a permutation pair")
    _add_common(p)
    p.add_argument("--perm1", required=True)
    p.add_argument("--perm2", required=True)
    p.add_argument("--numeric", action="store_true", help="also run the numeric check")
    p.set_defaults(func=cmd_propc)

    p = sub.add_parser("cyclic", help="closed form for shift powers")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--strict-lemma", action="store_true", help="reject q = n")
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("check", help="numeric positivity check of a D matrix")
    _add_common(p)
    p.add_argument("--d-file", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("apply", help="apply a D-type map to a matrix")
    _add_common(p)
    p.add_argument("--d-file", required=True)
    p.add_argument("--matrix-file", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("sweep", help="closed form vs brute force")
    _add_common(p, "csv")
    p.add_argument("--n-max", type=int, default=SWEEP_GUARD)
    p.add_argument("--force", action="store_true", help=f"allow --n-max above {SWEEP_GUARD}")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    start = time.perf_counter()
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"permpos {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        print(f"wall time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
