"""Command-line front end: `qrdet verify`, `qrdet eval`, `qrdet explore`.

Reports go to stdout (json lines, csv, or text); progress goes to stderr.
Exit codes: 0 all pass, 1 at least one FAIL, 2 usage error, 3 engine error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from mpmath import mp

from . import __version__, conjectures, exactlin, ntheory, qmatrix, quadfield, realhp, verify
from .errors import ConsistencyError, PrecisionError, ResourceLimitError
from .qmatrix import Family, IndexRange, MatrixSpec


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# Result cache (append-only JSON lines)


def _cache_key(kind: str, p, params) -> str:
    return json.dumps([kind, p, params, __version__], sort_keys=True, default=str)


def _load_cache(path):
    cache = {}
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                cache[rec["key"]] = rec["report"]
    return cache


def _append_cache(path, key, report_dict) -> None:
    with open(path, "a", encoding="utf-8") as f:
        f.write(json.dumps({"key": key, "report": report_dict}, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Output formatting


def _emit_reports(reports, fmt: str) -> None:
    if fmt == "json":
        for r in reports:
            print(json.dumps(r.to_json_dict(), sort_keys=True))
    elif fmt == "csv":
        w = csv.writer(sys.stdout, quoting=csv.QUOTE_ALL)
        w.writerow(["check_id", "p", "params", "status", "lhs", "rhs", "elapsed_ms"])
        for r in reports:
            w.writerow([r.check_id, r.p, json.dumps(r.params, sort_keys=True),
                        r.status, json.dumps(r.lhs), json.dumps(r.rhs), r.elapsed_ms])
    else:
        for r in reports:
            ps = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            extra = f"  [{r.note}]" if r.note else ""
            print(f"{r.status:<7} {r.check_id:<18} p={r.p:<5} {ps:<24} ({r.elapsed_ms} ms){extra}")


def _exit_code(reports) -> int:
    statuses = {r.status for r in reports}
    if "ERROR" in statuses:
        return 3
    if "FAIL" in statuses:
        return 1
    return 0


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_verify(args) -> int:
    check_ids = "all" if args.check in ("all", "ALL") else [c.strip() for c in args.check.split(",")]
    if args.jobs > 1 and not args.cache:
        reports = verify.run_suite(args.pmin, args.pmax, check_ids, jobs=args.jobs)
        _emit_reports(reports, args.format)
        s = verify.summarize(reports)
        _log(f"checks: {s['total']} total, {s['PASS']} pass, {s['FAIL']} fail, "
             f"{s['SKIPPED']} skipped, {s['ERROR']} error")
        return _exit_code(reports)
    cache = _load_cache(args.cache)
    tasks = verify._expand_tasks(args.pmin, args.pmax, check_ids)
    reports = []
    fresh = 0
    for i, (cid, p) in enumerate(tasks):
        for params in verify.REGISTRY[cid].params_for(p):
            key = _cache_key(cid, p, params)
            if key in cache:
                reports.append(verify.CheckReport.from_json_dict(cache[key]))
                continue
            rep = verify.run_check(cid, p, params)
            reports.append(rep)
            fresh += 1
            if args.cache:
                _append_cache(args.cache, key, rep.to_json_dict())
        if args.progress:
            _log(f"[{i + 1}/{len(tasks)}] {cid} p={p}")
    reports.sort(key=lambda r: (r.p, r.check_id, json.dumps(r.params, sort_keys=True, default=str)))
    _emit_reports(reports, args.format)
    s = verify.summarize(reports)
    _log(f"checks: {s['total']} total, {s['PASS']} pass, {s['FAIL']} fail, "
         f"{s['SKIPPED']} skipped, {s['ERROR']} error ({fresh} computed)")
    return _exit_code(reports)


def _near_int(v) -> bool:
    return abs(v - mp.nint(v)) < mp.mpf("1e-12") * max(1, abs(v))


def _cmd_eval(args) -> int:
    obj = args.object
    p = args.p
    out: dict = {"object": obj, "p": p}
    if obj in ("T0", "T1", "C", "barT", "barC"):
        h = realhp.family_det(obj, p, args.a, args.b, args.x, args.precision_bits)
        v = h.value
        out.update(a=args.a, b=args.b, x=args.x,
                   value=str(int(mp.nint(v))) if _near_int(v) else mp.nstr(v, 30),
                   err=mp.nstr(h.err_bound, 6))
    elif obj in ("S", "T", "Sbar", "tail"):
        rng = {"S": IndexRange.POS, "Sbar": IndexRange.POS,
               "T": IndexRange.FULL, "tail": IndexRange.TAIL}[obj]
        spec = MatrixSpec(Family.LEGENDRE, p, d=args.d, rng=rng, bar=obj == "Sbar")
        out.update(d=args.d, value=str(exactlin.det_exact(qmatrix.build(spec))))
    elif obj in ("Sn", "Tn"):
        rng = IndexRange.POS if obj == "Sn" else IndexRange.FULL
        spec = MatrixSpec(Family.POWER, p, d=args.d, exponent=args.n, rng=rng)
        out.update(d=args.d, n=args.n, value=str(exactlin.det_exact(qmatrix.build(spec))))
    elif obj == "recip":
        spec = MatrixSpec(Family.RECIP, p, d=args.d)
        out.update(d=args.d, value=str(exactlin.det_mod(qmatrix.build(spec, ring="mod"))),
                   modulus=p)
    elif obj == "eps":
        u = quadfield.fundamental_unit(p)
        out.update(u=str(u.u), v=str(u.v), norm=u.norm)
    elif obj == "eps_h":
        u = quadfield.eps_h_power(p)
        out.update(u=str(u.u), v=str(u.v), norm=u.norm)
    elif obj == "h":
        out.update(value=quadfield.class_number_real(p))
    elif obj == "h_imag":
        out.update(value=quadfield.class_number_imag(p))
    elif obj == "tp":
        out.update(conjectures.extract_tp(p).to_json_dict())
    elif obj == "delta":
        out.update(d=args.d, value=ntheory.delta_sign(args.d, p))
    elif obj == "sp":
        out.update(a=args.a, value=ntheory.sp_sign(args.a, p))
    elif obj == "jacobsthal":
        out.update(d=args.d, value=ntheory.jacobsthal_sum(args.d, p))
    else:
        raise ValueError(f"unknown eval object {obj!r}")
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print(out.get("value", json.dumps(out, sort_keys=True)))
    return 0


def _cmd_explore(args) -> int:
    cache = _load_cache(args.cache)
    reports = []

    def cached(kind, p, params, compute):
        key = _cache_key(kind, p, params)
        if key in cache:
            return cache[key], False
        rec = compute()
        if args.cache:
            _append_cache(args.cache, key, rec)
        return rec, True

    if args.target == "em":
        rec, _ = cached("em", 0, {"m": args.m, "pmax": args.pmax},
                        lambda: conjectures.scan_Em(args.m, args.pmax).to_json_dict())
        print(json.dumps(rec, sort_keys=True))
        return 0
    if args.target == "tp":
        code = 0
        for p in ntheory.odd_primes_in(args.pmin, args.pmax, mod4=1):
            rec, _ = cached("tp", p, {}, lambda p=p: conjectures.extract_tp(p).to_json_dict())
            print(json.dumps(rec, sort_keys=True))
            if rec["tp"] is None or not rec["symbol_ok"]:
                code = 1
        return code
    if args.target == "p2":
        for p in ntheory.odd_primes_in(args.pmin, args.pmax, mod4=1):
            d = args.d if args.d is not None else ntheory.smallest_nonresidue(p)
            rec, _ = cached("p2", p, {"d": d},
                            lambda p=p, d=d: conjectures.check_conj_p2(p, d).to_json_dict())
            reports.append(verify.CheckReport.from_json_dict(rec))
    elif args.target == "dm":
        for p in ntheory.odd_primes_in(args.pmin, args.pmax, mod4=1):
            rec, _ = cached("dm", p, {"m": args.m},
                            lambda p=p: conjectures.dm_symbol(p, args.m).to_json_dict())
            reports.append(verify.CheckReport.from_json_dict(rec))
    else:
        raise ValueError(f"unknown explore target {args.target!r}")
    _emit_reports(reports, args.format)
    return _exit_code(reports)


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrdet",
                                 description="verify and explore quadratic-residue determinant identities")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run registered statement checks over a prime range")
    v.add_argument("--check", default="all", help="comma-separated check ids, or 'all'")
    v.add_argument("--pmin", type=int, default=5)
    v.add_argument("--pmax", type=int, default=31)
    v.add_argument("--jobs", type=int, default=max(1, os.cpu_count() or 1))
    v.add_argument("--format", choices=("json", "csv", "text"), default="text")
    v.add_argument("--cache", default=None, help="append-only JSONL result cache path")
    v.add_argument("--precision-bits", type=int, default=None)
    v.add_argument("--progress", action="store_true")
    v.set_defaults(fn=_cmd_verify)

    e = sub.add_parser("eval", help="evaluate one determinant or invariant")
    e.add_argument("--object", required=True,
                   help="S|T|Sbar|tail|Sn|Tn|recip|T0|T1|C|barT|barC|eps|eps_h|h|h_imag|tp|delta|sp|jacobsthal")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--d", type=int, default=1)
    e.add_argument("--a", type=int, default=1)
    e.add_argument("--b", type=int, default=1)
    e.add_argument("--x", type=int, default=0)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--precision-bits", type=int, default=None)
    e.add_argument("--format", choices=("json", "text"), default="text")
    e.set_defaults(fn=_cmd_eval)

    x = sub.add_parser("explore", help="run conjecture extractions and scans")
    x.add_argument("target", choices=("em", "tp", "p2", "dm"))
    x.add_argument("--m", type=int, default=1)
    x.add_argument("--d", type=int, default=None)
    x.add_argument("--pmin", type=int, default=5)
    x.add_argument("--pmax", type=int, default=97)
    x.add_argument("--format", choices=("json", "csv", "text"), default="json")
    x.add_argument("--cache", default=None)
    x.add_argument("--precision-bits", type=int, default=None)
    x.set_defaults(fn=_cmd_explore)
    return ap


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "precision_bits", None):
        os.environ["QRDET_PRECISION_BITS"] = str(args.precision_bits)
    try:
        return args.fn(args)
    except (ResourceLimitError, PrecisionError, ConsistencyError, MemoryError) as exc:
        _log(f"engine error: {exc}")
        return 3
    except (ValueError, KeyError) as exc:
        _log(f"usage error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
