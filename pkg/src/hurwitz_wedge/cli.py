"""Command-line interface.

    hurwitz-wedge correlator --mu 2,2
    hurwitz-wedge hurwitz --mu 2,1 --g 0..3
    hurwitz-wedge coeffs --mu 3,2
    hurwitz-wedge tables 2
    hurwitz-wedge oracle --mu 2,1 --g 0
    hurwitz-wedge monotone --mu 2,2 --g 0..20 --fit
    hurwitz-wedge check oracle

Results of the computing subcommands are cached as JSON under
$HURWITZ_CACHE_DIR when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from math import comb, factorial, prod
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .correlator import InvalidWord, OperatorWord, ScoreViolation, connected, connected_traced, disconnected
from .exactalg import LaurentPoly, expand, format_rational, parse_qproducts
from .hurwitz import (
    HurwitzQuery,
    InvalidQuery,
    asymptotic_report,
    check_gap_conjecture,
    disconnected_by_set_partitions,
    normalisation,
    partitions_of,
    set_partitions,
    structure_coefficients,
    hurwitz_number,
)

# ---------------------------------------------------------------------------
# argument helpers


def parse_mu(text: str) -> Tuple[int, ...]:
    """"3,2,1" or "321" (single-digit parts) -> (3, 2, 1)."""
    text = text.strip()
    try:
        parts = [int(x) for x in text.split(",")] if "," in text else [int(c) for c in text]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad partition {text!r}")
    if not parts or any(p <= 0 for p in parts):
        raise argparse.ArgumentTypeError(f"partition parts must be positive: {text!r}")
    return tuple(sorted(parts, reverse=True))


def parse_range(text: str) -> List[int]:
    """"3" -> [3]; "0..3" -> [0, 1, 2, 3]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def mu_str(mu: Sequence[int]) -> str:
    return ",".join(map(str, mu))


def decimal_str(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


# ---------------------------------------------------------------------------
# cache


class ResultCache:
    """One JSON file per key; writes go through a temp file and os.replace."""

    def __init__(self, root: Optional[str]):
        self.root = root
        if root:
            os.makedirs(root, exist_ok=True)

    @staticmethod
    def key(parts: dict) -> str:
        blob = json.dumps({"version": __version__, **parts}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.root, key + ".json")

    def get(self, key: str):
        if not self.root:
            return None
        try:
            with open(self._path(key)) as fh:
                doc = json.load(fh)
            payload = doc["payload"]
            digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
            if doc.get("key") != key or doc.get("digest") != digest:
                return None
            return payload
        except (OSError, ValueError, KeyError, TypeError):
            return None  # missing or corrupt: recompute

    def put(self, key: str, payload):
        if not self.root:
            return
        digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"key": key, "digest": digest, "payload": payload}, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def cached(self, parts: dict, compute: Callable[[], object]):
        k = self.key(parts)
        hit = self.get(k)
        if hit is not None:
            return hit
        val = compute()
        self.put(k, val)
        return val


# ---------------------------------------------------------------------------
# output


def render(rows: List[dict], fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1)
    if not rows:
        return ""
    cols = list(rows[0])
    for r in rows[1:]:
        for c in r:
            if c not in cols:
                cols.append(c)
    cell = lambda v: json.dumps(v) if isinstance(v, (dict, list)) else ("" if v is None else str(v))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([cell(r.get(c)) for c in cols])
        return buf.getvalue().rstrip("\n")
    if fmt == "markdown":
        out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for r in rows:
            out.append("| " + " | ".join(cell(r.get(c)) for c in cols) + " |")
        return "\n".join(out)
    widths = {c: max(len(c), *(len(cell(r.get(c))) for r in rows)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols).rstrip()]
    for r in rows:
        lines.append("  ".join(cell(r.get(c)).ljust(widths[c]) for c in cols).rstrip())
    return "\n".join(([title] if title else []) + lines)


def pmap(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# commands


def _correlator_rows(word: OperatorWord) -> List[dict]:
    res = connected(word)
    lp = res.laurent if res.value.is_polynomial() else None
    return [{
        "word": str(word),
        "qproducts": res.pretty(),
        "laurent": lp.pretty() if lp is not None else str(res.value),
    }]


def cmd_correlator(args, cache: ResultCache) -> Tuple[List[dict], bool]:
    if args.word:
        word = OperatorWord.parse(args.word)
    elif args.mu:
        word = OperatorWord.hurwitz(args.mu, args.r)
    else:
        raise SystemExit("correlator: give --mu or --word")
    rows = cache.cached({"cmd": "correlator", "word": str(word)}, lambda: _correlator_rows(word))
    return rows, True


def _hurwitz_row(mu, g, r, connected_flag, precision):
    q = HurwitzQuery(mu, g, r, connected_flag)
    val = hurwitz_number(q)
    row = {"mu": mu_str(q.mu), "g": g, "r": r, "k": q.k, "value": format_rational(val)}
    if precision:
        row["decimal"] = decimal_str(val, precision)
    return row


def cmd_hurwitz(args, cache: ResultCache):
    gs = args.g or [0]
    connected_flag = not args.disconnected

    def compute():
        rows = [_hurwitz_row(args.mu, g, args.r, connected_flag, args.precision) for g in gs]
        if connected_flag:
            rows[0]["closed_form"] = structure_coefficients(args.mu, args.r).closed_form()
        return rows

    key = {"cmd": "hurwitz", "mu": list(args.mu), "g": gs, "r": args.r,
           "connected": connected_flag, "precision": args.precision}
    return cache.cached(key, compute), True


def cmd_coeffs(args, cache: ResultCache):
    def compute():
        t = structure_coefficients(args.mu, args.r)
        return [{"mu": mu_str(t.mu), "r": t.r, "m": m, "C": c} for m, c in t.C.items()] or [
            {"mu": mu_str(t.mu), "r": t.r, "m": None, "C": 0}]

    return cache.cached({"cmd": "coeffs", "mu": list(args.mu), "r": args.r}, compute), True


def _golden(name: str) -> dict:
    return json.loads(resources.files("hurwitz_wedge").joinpath(f"data/{name}").read_text())["rows"]


def _mu_key(key: str) -> Tuple[int, ...]:
    return tuple(int(c) for c in key)


def table1_rows() -> List[dict]:
    rows = []
    for key, expr in _golden("table1.json").items():
        mu = _mu_key(key)
        res = connected(OperatorWord.hurwitz(mu))
        ok = res.laurent == expand(parse_qproducts(expr))
        rows.append({"mu": key, "computed": res.pretty(), "golden": expr, "match": ok})
    return rows


def table2_rows() -> List[dict]:
    rows = []
    for key, golden in _golden("table2.json").items():
        mu = _mu_key(key)
        t = structure_coefficients(mu)
        gold = {int(m): c for m, c in golden.items()}
        ms = range(1, comb(sum(mu), 2) + 1)
        ok = all(t.coefficient(m) == gold.get(m, 0) for m in ms) and set(t.C) <= set(ms)
        rows.append({"mu": key, **{str(m): t.coefficient(m) for m in ms}, "match": ok})
    return rows


def table3_rows(g_max: int = 20) -> List[dict]:
    from .monotone import golden_table3, verify_conjecture

    rows = []
    for mu, gold in golden_table3().items():
        rep = verify_conjecture(mu, g_max, check_bridge=True)
        ok = rep.all_pass and rep.model.same_as(gold)
        rows.append({"mu": "".join(map(str, mu)), "model": rep.model.pretty(), "match": ok})
    return rows


def cmd_tables(args, cache: ResultCache):
    fn = {1: table1_rows, 2: table2_rows, 3: table3_rows}[args.which]
    rows = cache.cached({"cmd": "tables", "which": args.which}, fn)
    return rows, all(r["match"] for r in rows)


def cmd_oracle(args, cache: ResultCache):
    from . import oracle

    mu, d = args.mu, sum(args.mu)
    n = len(mu)
    r = args.r
    if args.k is not None:
        ks = [args.k]
    else:
        ks = [d // r + 2 * g - 2 + n for g in (args.g or [0])]

    def compute():
        rows = []
        for k in ks:
            if k < 0:
                continue
            q = oracle.FactorizationQuery(d, mu, k, transitive=not args.disconnected,
                                          monotone=args.monotone, orbifold_r=r if r > 1 else None)
            res = oracle.evaluate(q, budget=args.budget)
            rows.append({"mu": mu_str(mu), "k": k, "r": r, "count": str(res.count),
                         "weighted": format_rational(res.weighted), "method": res.method})
        return rows

    key = {"cmd": "oracle", "mu": list(mu), "ks": ks, "r": r, "disconnected": args.disconnected,
           "monotone": args.monotone, "budget": args.budget}
    return cache.cached(key, compute), True


def cmd_monotone(args, cache: ResultCache):
    from .monotone import verify_conjecture, monotone_hurwitz, k_of

    gs = args.g or [0]
    if args.fit:
        def compute():
            rep = verify_conjecture(args.mu, max(gs), args.normalisation)
            return [rep.to_json()]

        rows = cache.cached({"cmd": "monotone-fit", "mu": list(args.mu), "g_max": max(gs),
                             "norm": args.normalisation}, compute)
        return rows, all(r["all_pass"] for r in rows)

    def compute():
        return [{"mu": mu_str(args.mu), "g": g, "k": k_of(args.mu, g),
                 "value": format_rational(monotone_hurwitz(args.mu, g, args.normalisation))} for g in gs]

    key = {"cmd": "monotone", "mu": list(args.mu), "g": gs, "norm": args.normalisation}
    return cache.cached(key, compute), True


# ---------------------------------------------------------------------------
# check suites; each returns rows with an "ok" column


def _all_mu(lo: int, hi: int) -> List[Tuple[int, ...]]:
    return [mu for d in range(lo, hi + 1) for mu in partitions_of(d)]


def _score_one(mu):
    try:
        res = connected_traced(OperatorWord.hurwitz(mu))
    except ScoreViolation as exc:
        return {"mu": mu_str(mu), "max_score": None, "expected": None, "ok": False, "detail": str(exc)}
    d = sum(mu)
    return {"mu": mu_str(mu), "max_score": res.trace.max_score, "expected": d * (d - 1),
            "ok": res.trace.max_score == d * (d - 1)}


def check_score(jobs: int = 1) -> List[dict]:
    return pmap(_score_one, _all_mu(2, 5), jobs)


def _commutation_block(a1: int) -> dict:
    from .wedge import Partition, check_commutation

    lams = [Partition(p) for p in _all_mu(0, 6)]
    cases = bad = 0
    for a2 in range(-4, 5):
        for b1 in range(4):
            for b2 in range(4):
                if (a1, b1) == (0, 0) or (a2, b2) == (0, 0):
                    continue
                for lam in lams:
                    cases += 1
                    bad += not check_commutation(a1, b1, a2, b2, lam)
    return {"a1": a1, "cases": cases, "failures": bad, "ok": bad == 0}


def check_commutation_suite(jobs: int = 1) -> List[dict]:
    return pmap(_commutation_block, range(-4, 5), jobs)


def _inclusion_exclusion_one(mu) -> dict:
    """Disconnected correlator against the set-partition sum of connected ones."""
    d = sum(mu)
    lhs = disconnected(OperatorWord.hurwitz(mu)).to_laurent()
    rhs = LaurentPoly()
    for blocks in set_partitions(len(mu)):
        sizes = [sum(mu[i] for i in blk) for blk in blocks]
        term = LaurentPoly.const(factorial(d) // prod(factorial(s) for s in sizes))
        for blk in blocks:
            term = term * connected(OperatorWord.hurwitz(tuple(mu[i] for i in blk))).laurent
        rhs = rhs + term
    ok = lhs == rhs and lhs == disconnected_by_set_partitions(mu) * normalisation(mu)
    return {"mu": mu_str(mu), "ok": ok}


def check_inclusion_exclusion(jobs: int = 1) -> List[dict]:
    return pmap(_inclusion_exclusion_one, _all_mu(1, 5), jobs)


def _gap_one(mu) -> dict:
    rep = check_gap_conjecture(mu)
    top = structure_coefficients(mu).top_coefficient()
    return {"mu": mu_str(mu), "window": f"{rep.window[0]}..{rep.window[-1]}" if rep.window else "",
            "top": top, "ok": rep.holds and top == 1}


def check_gap(jobs: int = 1) -> List[dict]:
    return pmap(_gap_one, _all_mu(2, 6), jobs)


def truncate_sig(x: Fraction, digits: int) -> str:
    """First ``digits`` significant digits of x > 0, truncated, as a decimal string."""
    with localcontext() as ctx:
        ctx.prec = digits + 30
        s = Decimal(x.numerator) / Decimal(x.denominator)
    t = s.quantize(Decimal(1).scaleb(s.adjusted() - digits + 1), rounding="ROUND_DOWN")
    return f"{t:f}" if abs(s.adjusted()) < 6 else f"{t:E}"


def check_asymptotics(jobs: int = 1) -> List[dict]:
    rows = []
    q3 = asymptotic_report(HurwitzQuery((3, 2), 3)).estimate_over_exact
    shown = decimal_str(q3, 8)
    rows.append({"case": "(3,2) g=3 estimate/exact", "value": shown,
                 "ok": shown in ("1.0023778", "1.0023779")})
    q20 = asymptotic_report(HurwitzQuery((3, 2), 20)).estimate_over_exact
    dev = abs(q20 - 1)
    shown = decimal_str(dev, 5)
    rows.append({"case": "(3,2) g=20 |estimate/exact - 1|", "value": shown,
                 "ok": truncate_sig(dev, 5) == "1.1369E-13"})
    return rows


def _oracle_one(mu) -> dict:
    from . import oracle

    d, n = sum(mu), len(mu)
    ok = True
    for g in (0, 1):
        k = d + 2 * g - 2 + n
        if k < 0:
            continue
        wedge = hurwitz_number(HurwitzQuery(mu, g))
        ok &= wedge == oracle.connected_count(d, mu, k)
        if d <= 4 and k <= 6:
            q = oracle.FactorizationQuery(d, mu, k, transitive=True)
            aut = prod(factorial(mu.count(x)) for x in set(mu))
            ok &= wedge == Fraction(oracle.count_factorizations(q) * aut, factorial(d))
    return {"mu": mu_str(mu), "ok": ok}


def check_oracle(jobs: int = 1) -> List[dict]:
    return pmap(_oracle_one, _all_mu(1, 5), jobs)


SUITES: Dict[str, Callable[[int], List[dict]]] = {
    "score": check_score,
    "commutation": check_commutation_suite,
    "inclusion-exclusion": check_inclusion_exclusion,
    "gap": check_gap,
    "asymptotics": check_asymptotics,
    "oracle": check_oracle,
}


def cmd_check(args, cache: ResultCache):
    rows = SUITES[args.suite](args.jobs)
    return rows, all(r["ok"] for r in rows)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hurwitz-wedge", description="Hurwitz numbers via infinite-wedge correlators")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "markdown", "text"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--budget", type=int, default=10**8, help="max tuples for exhaustive counts")

    s = sub.add_parser("correlator", parents=[common], help="connected correlator of a word")
    s.add_argument("--mu", type=parse_mu)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--word", help='e.g. "1:1,1:1,-2:0"')
    s.set_defaults(func=cmd_correlator)

    s = sub.add_parser("hurwitz", parents=[common], help="Hurwitz numbers for a range of genera")
    s.add_argument("--mu", type=parse_mu, required=True)
    s.add_argument("--g", type=parse_range)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--disconnected", action="store_true")
    s.add_argument("--precision", type=int, default=0, help="also print a decimal to this many digits")
    s.set_defaults(func=cmd_hurwitz)

    s = sub.add_parser("coeffs", parents=[common], help="structure coefficients C(mu, m)")
    s.add_argument("--mu", type=parse_mu, required=True)
    s.add_argument("--r", type=int, default=1)
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("tables", parents=[common], help="regenerate a reference table and compare")
    s.add_argument("which", type=int, choices=[1, 2, 3])
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("oracle", parents=[common], help="brute-force permutation count")
    s.add_argument("--mu", type=parse_mu, required=True)
    s.add_argument("--g", type=parse_range)
    s.add_argument("--k", type=int)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--monotone", action="store_true")
    s.add_argument("--disconnected", action="store_true")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("monotone", parents=[common], help="monotone Hurwitz numbers")
    s.add_argument("--mu", type=parse_mu, required=True)
    s.add_argument("--g", type=parse_range)
    s.add_argument("--normalisation", choices=["fixed-target", "definition"], default="fixed-target")
    s.add_argument("--fit", action="store_true", help="fit the exponential-plus-linear model and validate")
    s.set_defaults(func=cmd_monotone)

    s = sub.add_parser("check", parents=[common], help="run an invariant suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cache = ResultCache(os.environ.get("HURWITZ_CACHE_DIR"))
    t0 = time.perf_counter()
    try:
        rows, ok = args.func(args, cache)
    except (InvalidWord, InvalidQuery, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # BudgetExceeded and friends
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(render(rows, args.format))
    if args.command in ("check", "tables"):
        print(f"{'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
