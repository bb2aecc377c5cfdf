"""Command-line entry point: alpha tables, beta certificates, and basis dumps.

Exit codes: 0 success, 1 usage error, 2 a computed result contradicts a
predicted one (cross-check mismatch, missing or non-verifying certificate),
3 precision or saturation failure in the infrastructure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .chromatic import (
    MRWIndex,
    alpha_group,
    alpha_infinity,
    beta_search,
    certificate_from_json,
    certificate_to_json,
    mrw_enumerate,
    rigidity_check,
    verify_certificate,
)
from .errors import (
    CrossCheckMismatch,
    InsufficientPrecision,
    NonIntegralWeightRatio,
    NotFound,
    SpanDeficient,
    UnsaturatedSpace,
)
from .level1 import basis
from .level_ell import SUPPORTED_LEVELS, _spanning, build_space, dimension, set_cache_dir, sturm
from .numtheory import PrimeContext, alpha_order, is_prime, is_topological_generator, topological_generators

CACHE_ENV = "MODBETA_CACHE_DIR"

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_INFRA = 0, 1, 2, 3

ALPHA_COLUMNS = ["t", "order", "generator", "bernoulli_order", "agrees", "finite_orders"]
ENUM_COLUMNS = ["i", "j", "k", "degree", "weight", "t", "rational_exponents"]
SEARCH_COLUMNS = ["i", "j", "k", "degree", "weight", "status", "verified_levels", "detail"]
VERIFY_COLUMNS = ["ell", "passed", "failed_condition", "detail"]
BASIS_COLUMNS = ["name", "coefficients"]

CSV_HELP = f"""CSV columns:
  alpha-table      {",".join(ALPHA_COLUMNS)}
  beta enumerate   {",".join(ENUM_COLUMNS)}
  beta search      {",".join(SEARCH_COLUMNS)}
  beta verify      {",".join(VERIFY_COLUMNS)}
  beta rigidity    {",".join(VERIFY_COLUMNS)}
  basis            {",".join(BASIS_COLUMNS)}
List-valued cells are joined with ';'.

exit codes: 0 ok, 1 usage error, 2 theorem-level violation, 3 precision/saturation failure.
The cache directory falls back to ${CACHE_ENV} when --cache-dir is absent."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    p: int
    ells: tuple
    tmax: int
    kmax: int
    degree_max: int
    precision: int | None
    fmt: str
    cache_dir: str | None
    jobs: int

    @property
    def ctx(self) -> PrimeContext:
        return PrimeContext(self.p, self.ells[0], tuple(self.ells[1:]))


def _int_list(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(parser):
    parser.add_argument("--p", type=int, help="prime p >= 5 (default 5, or the certificate's p)")
    parser.add_argument("--ells", type=_int_list, help="levels, comma-separated; the first is the working level")
    parser.add_argument("--tmax", type=int, default=40, help="largest weight t for alpha tables")
    parser.add_argument("--kmax", type=int, default=2, help="largest power k (or j for alpha tables)")
    parser.add_argument("--degree-max", type=int, default=300, help="largest stem degree for beta indices")
    parser.add_argument("--precision", type=int, help="q-adic precision override for basis dumps")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    parser.add_argument("--cache-dir", help=f"cache for level-ell spaces (default ${CACHE_ENV})")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="modbeta",
        description="Alpha and beta families as congruences of modular forms.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    raw = argparse.RawDescriptionHelpFormatter

    a = sub.add_parser("alpha-table", help="orders of the alpha groups by weight", epilog=CSV_HELP, formatter_class=raw)
    _common(a)

    b = sub.add_parser("beta", help="beta-family indices and certificates", epilog=CSV_HELP, formatter_class=raw)
    _common(b)
    b.add_argument("action", choices=("enumerate", "search", "verify", "rigidity"))
    b.add_argument("--i", type=int, dest="i_only", help="restrict search to this i")
    b.add_argument("--cert", help="certificate JSON for verify/rigidity")
    b.add_argument("--out", help="directory for certificate files written by search")

    c = sub.add_parser("basis", help="dump a basis of M_w (level 1) or M_w(Gamma0(ell))", epilog=CSV_HELP, formatter_class=raw)
    _common(c)
    c.add_argument("--weight", type=int, required=True)
    c.add_argument("--level", type=int, default=1)
    return parser


def _config(args) -> RunConfig:
    p = 5 if args.p is None else args.p
    if p < 5 or not is_prime(p):
        raise UsageError(f"--p must be a prime >= 5, got {p}")
    ells = args.ells
    if ells is None:
        ells = tuple(topological_generators(p, SUPPORTED_LEVELS, 2))
    if not ells:
        raise UsageError("--ells is empty")
    for q in ells:
        if q not in SUPPORTED_LEVELS:
            raise UsageError(f"level {q} is not one of {SUPPORTED_LEVELS}")
        if not is_topological_generator(q, p):
            raise UsageError(f"{q} is not a topological generator of Z_{p}^x")
    for name in ("tmax", "kmax", "degree_max", "jobs"):
        if getattr(args, name) <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if args.precision is not None and args.precision <= 0:
        raise UsageError("--precision must be positive")
    cache = args.cache_dir or os.environ.get(CACHE_ENV) or None
    return RunConfig(p, tuple(ells), args.tmax, args.kmax, args.degree_max, args.precision, args.fmt, cache, args.jobs)


# -- output ----------------------------------------------------------------------------


def _cell(x):
    if isinstance(x, (list, tuple)):
        return ";".join(str(y) for y in x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return "" if x is None else str(x)


def _render(rows, columns, fmt, doc=None, text=None) -> str:
    if fmt == "json":
        return json.dumps(doc if doc is not None else rows, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        return buf.getvalue()
    return text(rows) if text else "".join(" ".join(f"{c}={_cell(r.get(c))}" for c in columns) + "\n" for r in rows)


def _qexp_text(coeffs, modulus=None, terms=8) -> str:
    out = ""
    for n, c in enumerate(coeffs[:terms]):
        if c == 0:
            continue
        mono = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
        mag = str(abs(c))
        if n and "/" in mag:
            mag = f"({mag})"
        term = mag + mono if (abs(c) != 1 or n == 0) else mono
        if out:
            out += (" - " if c < 0 else " + ") + term
        else:
            out = ("-" if c < 0 else "") + term
    out = out or "0"
    out += f" + O(q^{len(coeffs)})" if len(coeffs) <= terms else " + ..."
    return out + (f"  (mod {modulus})" if modulus else "")


# -- commands --------------------------------------------------------------------------


def cmd_alpha_table(cfg: RunConfig):
    ctx = cfg.ctx
    p = cfg.p
    rows = []
    violation = False
    for t in range(4, cfg.tmax + 1, 2):
        if t % (p - 1):
            continue
        try:
            res = alpha_infinity(t, ctx)
            finite = [alpha_group(t, j, ctx).order for j in range(1, cfg.kmax + 1)]
            agrees = True
        except CrossCheckMismatch:
            res, finite, agrees = None, [], False
            violation = True
        bern = alpha_order(t, p)
        rows.append(
            {
                "t": t,
                "order": res.order if res else None,
                "generator": f"E{t}",
                "bernoulli_order": bern,
                "agrees": agrees,
                "finite_orders": finite,
            }
        )

    def text(rs):
        head = f"alpha groups at p={p}, ell={ctx.ell}: t, order, generator, Bernoulli p-part, orders mod p^1..p^{cfg.kmax}\n"
        return head + "".join(
            f"{r['t']:>5}  {_cell(r['order']):>8}  {r['generator']:<6} {r['bernoulli_order']:>8}  "
            f"{'ok' if r['agrees'] else 'MISMATCH':<8} {_cell(r['finite_orders'])}\n"
            for r in rs
        )

    doc = {"p": p, "ell": ctx.ell, "rows": rows}
    return _render(rows, ALPHA_COLUMNS, cfg.fmt, doc, text), EXIT_VIOLATION if violation else EXIT_OK


def _index_row(x: MRWIndex):
    n = x.n
    return {
        "i": x.i,
        "j": x.j,
        "k": x.k,
        "degree": x.degree,
        "weight": x.weight,
        "t": x.t,
        "rational_exponents": n > 0 and n - x.k - 1 < 0,
    }


def cmd_beta_enumerate(cfg: RunConfig):
    idx = [x for x in mrw_enumerate(cfg.p, cfg.degree_max) if x.k <= cfg.kmax]
    rows = [_index_row(x) for x in idx]

    def text(rs):
        out = f"admissible (i, j, k) at p={cfg.p}, degree <= {cfg.degree_max}, k <= {cfg.kmax}\n"
        for r in rs:
            flag = "  [p^m with m < 0 read as 1/p^-m]" if r["rational_exponents"] else ""
            out += f"({r['i']},{r['j']},{r['k']})  deg {r['degree']}  weight {r['weight']}  t {r['t']}{flag}\n"
        return out

    doc = {"p": cfg.p, "degree_max": cfg.degree_max, "indices": rows}
    return _render(rows, ENUM_COLUMNS, cfg.fmt, doc, text), EXIT_OK


def _search_one(args):
    """Worker: search one index at the first level, verify at all levels."""
    p, ells, triple = args
    ctx = PrimeContext(p, ells[0], tuple(ells[1:]))
    x = MRWIndex(p, *triple)
    row = _index_row(x)
    try:
        cert = beta_search(x, ctx)
    except NotFound as exc:
        return {**row, "status": "not-found", "verified_levels": [], "detail": str(exc)}, None, EXIT_VIOLATION
    except (InsufficientPrecision, UnsaturatedSpace, SpanDeficient) as exc:
        return {**row, "status": "infrastructure", "verified_levels": [], "detail": str(exc)}, None, EXIT_INFRA
    report = rigidity_check(cert, ells)
    bad = [f"ell={r.ell}: condition {r.failed} ({r.detail})" for r in report.violations]
    status = "pass" if report.passed else "violation"
    row = {**row, "status": status, "verified_levels": sorted(cert.verified_levels), "detail": "; ".join(bad)}
    return row, certificate_to_json(cert), EXIT_OK if report.passed else EXIT_VIOLATION


def _map(fn, tasks, jobs, cache_dir):
    if jobs == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs, initializer=set_cache_dir, initargs=(cache_dir,)) as pool:
        return list(pool.map(fn, tasks))


def certificate_filename(p, i, j, k) -> str:
    return f"beta_p{p}_i{i}_j{j}_k{k}.json"


def cmd_beta_search(cfg: RunConfig, i_only=None, out_dir=None):
    idx = [x for x in mrw_enumerate(cfg.p, cfg.degree_max) if x.k <= cfg.kmax]
    if i_only is not None:
        if i_only <= 0:
            raise UsageError("--i must be positive")
        if i_only * (cfg.p**2 - 1) * 2 > cfg.degree_max:
            idx = mrw_enumerate(cfg.p, 2 * i_only * (cfg.p**2 - 1))
        idx = [x for x in idx if x.i == i_only and x.k <= cfg.kmax]
    tasks = [(cfg.p, cfg.ells, x.as_tuple()) for x in idx]
    results = _map(_search_one, tasks, cfg.jobs, cfg.cache_dir)
    rows = [r for r, _, _ in results]
    certs = [json.loads(c) if c else None for _, c, _ in results]
    code = max((c for _, _, c in results), default=EXIT_OK)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        for r, (_, text, _) in zip(rows, results):
            if text:
                with open(os.path.join(out_dir, certificate_filename(cfg.p, r["i"], r["j"], r["k"])), "w") as fh:
                    fh.write(text)

    def text(rs):
        out = f"beta certificates at p={cfg.p}, search level {cfg.ells[0]}, checked at {_cell(cfg.ells)}\n"
        for r, c in zip(rs, certs):
            out += f"({r['i']},{r['j']},{r['k']})  deg {r['degree']}  weight {r['weight']}  {r['status']}"
            if c:
                coeffs = [int(v) for v in c["coefficients"]]
                out += f"\n    f = {_qexp_text(coeffs, int(c['modulus']))}"
            if r["detail"]:
                out += f"\n    {r['detail']}"
            out += "\n"
        return out

    doc = {
        "p": cfg.p,
        "ells": list(cfg.ells),
        "results": [{**r, "certificate": c} for r, c in zip(rows, certs)],
    }
    return _render(rows, SEARCH_COLUMNS, cfg.fmt, doc, text), code


def _load_cert(path):
    if not path:
        raise UsageError("--cert is required for verify and rigidity")
    try:
        with open(path) as fh:
            return certificate_from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read certificate: {exc}")
    except (ValueError, KeyError) as exc:
        raise UsageError(f"malformed certificate: {exc}")


def cmd_beta_verify(cfg: RunConfig, cert, rigidity: bool):
    ells = cfg.ells
    if rigidity:
        reports = rigidity_check(cert, ells).reports
    else:
        reports = [verify_certificate(cert, q) for q in ells]
    rows = [{"ell": r.ell, "passed": r.passed, "failed_condition": r.failed, "detail": r.detail} for r in reports]
    ok = all(r.passed for r in reports)
    idx = cert.index.as_tuple() if isinstance(cert.index, MRWIndex) else tuple(cert.index)

    def text(rs):
        kind = "rigidity" if rigidity else "verification"
        out = f"{kind} of ({idx[0]},{idx[1]},{idx[2]}) at p={cert.p}, weight {cert.weight}: {'pass' if ok else 'FAIL'}\n"
        for r in rs:
            out += f"  ell={r['ell']}: " + ("pass" if r["passed"] else f"fails condition {r['failed_condition']}: {r['detail']}") + "\n"
        return out

    doc = {"p": cert.p, "index": list(idx), "passed": ok, "reports": rows}
    return _render(rows, VERIFY_COLUMNS, cfg.fmt, doc, text), EXIT_OK if ok else EXIT_VIOLATION


def cmd_basis(cfg: RunConfig, weight: int, level: int):
    if weight < 0:
        raise UsageError("--weight must be non-negative")
    if level != 1 and level not in SUPPORTED_LEVELS:
        raise UsageError(f"--level must be 1 or one of {SUPPORTED_LEVELS}")
    if level == cfg.p:
        raise UsageError("the level must differ from p")
    need = sturm(weight, level)
    N = cfg.precision or need
    if N < need:
        raise InsufficientPrecision(N, need, f"basis of weight {weight}, level {level}")
    rows, cert = [], None
    if weight % 2 == 0 and dimension(weight, level):
        if level == 1:
            for e in basis(weight, 0, cfg.p, N).elements:
                rows.append({"name": e.name, "coefficients": [str(e.qexp[n]) for n in range(N)]})
        else:
            names, forms = _spanning(weight, level, N, 0)
            for name, f in zip(names, forms):
                rows.append({"name": name, "coefficients": [str(f[n]) for n in range(N)]})
            space = build_space(weight, level, cfg.p, N, cfg.cache_dir)
            cert = {
                "dimension": space.rank_certificate["dimension"],
                "rank": space.dim,
                "rank_mod_p": space.rank_certificate["rank_mod_p"],
                "saturated_at": cfg.p,
                "saturated": space.saturated,
                "p_adic_digits": space.adic_precision,
                "sturm_bound": space.sturm_bound,
                "precision": space.precision,
            }
    note = None if rows else f"M_{weight}" + ("" if level == 1 else f"(Gamma0({level}))") + " = 0"

    def text(rs):
        head = f"M_{weight}" + ("" if level == 1 else f"(Gamma0({level}))") + f", precision {N}\n"
        if note:
            return head + f"empty: {note}\n"
        out = head + "".join(f"  {r['name']} = {_qexp_text([Fraction(c) for c in r['coefficients']])}\n" for r in rs)
        if cert:
            out += (
                f"certified rank {cert['rank']} (dimension {cert['dimension']}), rank mod {cfg.p} = "
                f"{cert['rank_mod_p']}, saturated at {cfg.p}, Sturm bound {cert['sturm_bound']}\n"
            )
        return out

    doc = {"weight": weight, "level": level, "precision": N, "basis": rows, "certificate": cert, "note": note}
    return _render(rows, BASIS_COLUMNS, cfg.fmt, doc, text), EXIT_OK


def run(argv=None):
    """Parse, dispatch, and return (output text, exit code)."""
    args = build_parser().parse_args(argv)
    cert = None
    if args.command == "beta" and args.action in ("verify", "rigidity"):
        cert = _load_cert(args.cert)
        if args.p is not None and args.p != cert.p:
            raise UsageError(f"certificate is for p={cert.p}, not {args.p}")
        args.p = cert.p
    cfg = _config(args)
    set_cache_dir(cfg.cache_dir)
    if args.command == "alpha-table":
        return cmd_alpha_table(cfg)
    if args.command == "basis":
        return cmd_basis(cfg, args.weight, args.level)
    if args.action == "enumerate":
        return cmd_beta_enumerate(cfg)
    if args.action == "search":
        return cmd_beta_search(cfg, args.i_only, args.out)
    return cmd_beta_verify(cfg, cert, args.action == "rigidity")


def main(argv=None) -> int:
    try:
        text, code = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"modbeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpanDeficient, InsufficientPrecision, UnsaturatedSpace) as exc:
        print(f"modbeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFRA
    except (CrossCheckMismatch, NonIntegralWeightRatio) as exc:
        print(f"modbeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
