"""Command-line interface: polynomial file I/O and the user-facing commands.

File grammar: the first non-comment line is `Fq <q>` or `ZZ`; every
following non-comment line is `<coeff> <exponent>` in decimal.  `#`
starts a comment.  Parsing normalizes (merges duplicate exponents, drops
zeros); emission is sorted ascending, so a parse/emit round trip is
byte-stable.

Exit codes: 0 success (or divisible / verified), 1 not divisible or
verification failed, 2 not applicable, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .divtest import divides as divides_fn
from .errors import (
    BudgetExceeded,
    DivisionFailure,
    NonExactIntegerStep,
    ParseError,
    SparseDivError,
)
from .ff import IntegerRing, PrimeFieldCtx, ZZ
from .generate import random_exact_instance
from .interp_div import _serial_map, exact_division, verify_product
from .sparse_poly import SparsePoly, classic_divrem, normalize
from .zdiv import exact_division_z


def parse_poly(text: str) -> SparsePoly:
    """Parse the polynomial file grammar into a normalized SparsePoly."""
    ring = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if ring is None:
            parts = body.split()
            if parts[0] == "ZZ" and len(parts) == 1:
                ring = ZZ
            elif parts[0] == "Fq" and len(parts) == 2:
                try:
                    q = int(parts[1])
                except ValueError:
                    raise ParseError(f"bad modulus {parts[1]!r}", lineno)
                try:
                    ring = PrimeFieldCtx(q)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno)
            else:
                raise ParseError(f"bad header {body!r} (want 'Fq <q>' or 'ZZ')", lineno)
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<coeff> <exponent>', got {body!r}", lineno)
        try:
            c, e = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad integers in {body!r}", lineno)
        if e < 0:
            raise ParseError("exponents must be nonnegative", lineno)
        raw.append((e, c if isinstance(ring, IntegerRing) else ring.from_int(c)))
    if ring is None:
        raise ParseError("empty file: missing ring header")
    return normalize(ring, raw)


def emit_poly(poly: SparsePoly) -> str:
    """Canonical text form of a polynomial (inverse of parse_poly)."""
    ring = poly.ring
    head = "ZZ" if isinstance(ring, IntegerRing) else f"Fq {ring.q}"
    lines = [head]
    lines.extend(f"{c} {e}" for e, c in poly.terms)
    return "\n".join(lines) + "\n"


def _load(path: str) -> SparsePoly:
    return parse_poly(Path(path).read_text())


def _parse_ring(spec: str):
    if spec == "ZZ":
        return ZZ
    if spec.startswith("Fq:"):
        return PrimeFieldCtx(int(spec[3:]))
    raise ValueError(f"bad ring spec {spec!r} (want 'ZZ' or 'Fq:<prime>')")


def _make_map_fn(threads: int):
    if threads <= 0:
        return _serial_map
    pool = ThreadPoolExecutor(max_workers=threads)
    return lambda fn, items: list(pool.map(fn, items))


def _cmd_div(args) -> int:
    f = _load(args.dividend)
    g = _load(args.divisor)
    rng = random.Random(args.seed)
    map_fn = _make_map_fn(args.threads)
    if isinstance(f.ring, IntegerRing):
        q = exact_division_z(f, g, args.epsilon, rng, map_fn=map_fn)
    else:
        q = exact_division(f, g, args.epsilon, rng, map_fn=map_fn)
    out = emit_poly(q)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_verify(args) -> int:
    f = _load(args.dividend)
    g = _load(args.divisor)
    q = _load(args.quotient)
    rng = random.Random(args.seed)
    ok = verify_product(f, g, q, args.epsilon, rng)
    print("true" if ok else "false")
    return 0 if ok else 1


def _cmd_divides(args) -> int:
    f = _load(args.dividend)
    g = _load(args.divisor)
    verdict = divides_fn(f, g, budget=args.budget)
    if verdict is None and args.force_oracle:
        try:
            _, r = classic_divrem(f, g)
            verdict = r.is_zero
        except NonExactIntegerStep:
            verdict = False
    if verdict is None:
        print("not-applicable")
        return 2
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_oracle_div(args) -> int:
    f = _load(args.dividend)
    g = _load(args.divisor)
    q, r = classic_divrem(f, g, term_budget=args.budget)
    sys.stdout.write("# quotient\n")
    sys.stdout.write(emit_poly(q))
    sys.stdout.write("# remainder\n")
    sys.stdout.write(emit_poly(r))
    return 0


def _cmd_gen(args) -> int:
    ring = _parse_ring(args.ring)
    rng = random.Random(args.seed)
    f, g, q = random_exact_instance(
        ring, rng, args.terms, args.degree, coeff_height=args.height
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "F.sp").write_text(emit_poly(f))
    (out / "G.sp").write_text(emit_poly(g))
    (out / "Q.sp").write_text(emit_poly(q))
    print(f"wrote {out / 'F.sp'}, {out / 'G.sp'}, {out / 'Q.sp'}")
    return 0


def _cmd_bench(args) -> int:
    ring = _parse_ring(args.ring)
    map_fn = _make_map_fn(args.threads)
    print("T,logD,ring,algorithm,wall_ns,verified")
    for t in args.terms:
        for logd in args.logd:
            for rep in range(args.reps):
                rng = random.Random((args.seed, t, logd, rep).__hash__())
                f, g, q = random_exact_instance(ring, rng, t, 1 << logd)
                if isinstance(ring, IntegerRing):
                    algo = "integers"
                elif ring.q > f.degree:
                    algo = "large-char"
                else:
                    algo = "small-char"
                start = time.perf_counter_ns()
                try:
                    if isinstance(ring, IntegerRing):
                        got = exact_division_z(f, g, args.epsilon, rng, map_fn=map_fn)
                    else:
                        got = exact_division(f, g, args.epsilon, rng, map_fn=map_fn)
                    verified = got == q
                except (DivisionFailure, BudgetExceeded):
                    verified = False
                wall = time.perf_counter_ns() - start
                ring_name = "ZZ" if isinstance(ring, IntegerRing) else f"Fq{ring.q}"
                print(f"{t},{logd},{ring_name},{algo},{wall},{verified}")
    return 0


def _int_list(text: str) -> list:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sparsediv",
        description="Exact division and divisibility testing for sparse polynomials",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_eps=True):
        if with_eps:
            p.add_argument("--epsilon", type=float, default=1e-3)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=0, help="0 = sequential")

    p = sub.add_parser("div", help="exact quotient of two polynomial files")
    p.add_argument("--dividend", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--output", default=None)
    common(p)
    p.set_defaults(fn=_cmd_div)

    p = sub.add_parser("verify", help="randomized check that F = G*Q")
    p.add_argument("--dividend", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--quotient", required=True)
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("divides", help="divisibility verdict: true/false/not-applicable")
    p.add_argument("--dividend", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--force-oracle", action="store_true")
    p.set_defaults(fn=_cmd_divides)

    p = sub.add_parser("oracle-div", help="classic heap division (quotient, remainder)")
    p.add_argument("--dividend", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=_cmd_oracle_div)

    p = sub.add_parser("gen", help="generate a random exact-division instance")
    p.add_argument("--ring", required=True, help="'Fq:<prime>' or 'ZZ'")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--height", type=int, default=100, help="coefficient bound over ZZ")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("bench", help="timing grid over T and log2(D), CSV output")
    p.add_argument("--ring", required=True)
    p.add_argument("--terms", type=_int_list, required=True, help="comma list of T")
    p.add_argument("--logd", type=_int_list, required=True, help="comma list of log2 D")
    p.add_argument("--reps", type=int, default=1)
    common(p)
    p.set_defaults(fn=_cmd_bench)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DivisionFailure, SparseDivError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
