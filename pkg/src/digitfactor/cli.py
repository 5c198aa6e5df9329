"""Command-line interface: factor, nu, prime-char, verify and bench.

Every command can emit a JSON run record (``--json``) with the fields
command, inputs, outcome, counters and wall_time_ms.

Exit codes: 0 success, 2 invalid input, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass

from . import digitpoly, engine, nu, primality
from .ntcore import FactorLeak, perfect_power
from .polyring import ModPoly, OpCounter, SubproductTree, product_tree, schoolbook_only

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BREACH = 3

DEFAULT_LADDER = (256, 512, 1024, 2048)
BENCH_MODULUS = (1 << 61) - 1


class InputError(Exception):
    pass


@dataclass
class RunRecord:
    command: str
    inputs: dict
    outcome: dict
    counters: dict
    wall_time_ms: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


def parse_int(text: str) -> int:
    """Decimal, or hex with a 0x prefix; no size limit."""
    s = text.strip().replace("_", "")
    try:
        v = int(s, 16) if s.lower().startswith("0x") else int(s, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer: {text!r}")
    return v


def parse_int_list(text: str) -> list[int]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return [parse_int(p) for p in parts]


def _signed_int_list(text: str) -> list[int]:
    try:
        return [int(p, 0) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient list: {text!r}")


def _pair(text: str) -> tuple[int, int]:
    v = parse_int_list(text)
    if len(v) != 2:
        raise argparse.ArgumentTypeError("expected p,q")
    return v[0], v[1]


def _triple(text: str) -> tuple[int, int, int]:
    v = parse_int_list(text)
    if len(v) != 3:
        raise argparse.ArgumentTypeError("expected m,r,b")
    return v[0], v[1], v[2]


# -- commands --------------------------------------------------------------
# Each returns (exit code, outcome dict, text lines).


def _format_factorization(N: int, fac: list[tuple[int, int]]) -> str:
    if not fac:
        return f"{N} = 1"
    return f"{N} = " + " · ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in fac)


def _describe_outcome(o: dict) -> str:
    if o["kind"] == engine.FACTOR:
        j, i = o["indices"]
        where = f"j={j}" if i is None else f"j={j}, i={i}"
        return f"[{o['parametrization']}] d={o['d']}: factor {o['factor']} at step {o['step']} ({where})"
    if o.get("kind") == "FactorLeak":
        return f"[{o['parametrization']}] factor leak {o['factor']}"
    return f"[{o['parametrization']}] d={o['d']}: {o['error_label']}"


def _single_param(N: int, a) -> engine.Parametrization:
    if a.hint is not None:
        return engine.hint_param(N, *a.hint)
    if a.multifactor is not None:
        return engine.multifactor_param(N, a.multifactor)
    if a.d_override is not None:
        return engine._override_param(N, a.d_override)
    return engine.strassen_param(N)


def cmd_factor(a):
    N = a.N
    if N < 1:
        raise InputError("N must be at least 1")
    if a.single:
        if N < 2:
            raise InputError("--single needs N >= 2")
        try:
            P = _single_param(N, a)
            out = engine.run_algorithm1(N, P, block_size=a.block_size)
        except FactorLeak as leak:
            return EXIT_OK, {"kind": "FactorLeak", "factor": leak.factor}, [f"factor leak: {leak.factor}"]
        except ValueError as e:
            raise InputError(str(e))
        o = out.to_dict()
        if out.kind == engine.FACTOR:
            line = f"{N} = {out.factor} · {out.cofactor}  ({_describe_outcome(o)})"
        else:
            line = f"{out.error_label}  ([{P.label}] d={P.d})"
        code = EXIT_OK
        if out.kind == engine.EXHAUSTED and P.label == "strassen":
            code = EXIT_BREACH
        return code, o, [line]
    # a hint is about N itself, so small factors must not be stripped first
    trial = a.trial_bound if a.trial_bound is not None else (1 if a.hint else 1000)
    cfg = engine.FactorConfig(
        trial_bound=trial,
        block_size=a.block_size,
        hint=a.hint,
        multifactor_m=a.multifactor,
        d_override=a.d_override,
    )
    log: list = []
    try:
        fac = engine.factorize(N, cfg, log=log)
    except engine.InvariantBreach as e:
        return EXIT_BREACH, {"error": str(e), "runs": log}, [f"invariant breach: {e}"]
    lines = [_format_factorization(N, fac)]
    if len(fac) == 1 and fac[0][1] == 1:
        lines[0] += "  (prime)"
    lines += ["  " + _describe_outcome(o) for o in log]
    outcome = {
        "factors": [[p, e] for p, e in fac],
        "prime": len(fac) == 1 and fac[0][1] == 1,
        "runs": log,
    }
    return EXIT_OK, outcome, lines


def _nu_polys(a) -> tuple[list[ModPoly], dict]:
    N = a.N
    chosen = [x is not None for x in (a.poly, a.linear_bases, a.quad_base)]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --poly, --linear-bases, --quad-base")
    if a.poly is not None:
        return [ModPoly(a.poly, N)], {}
    if a.linear_bases is not None:
        return [ModPoly((-b, 1), N) for b in a.linear_bases], {}
    try:
        fam = digitpoly.quad_family(N, a.quad_base, a.quad_d)
    except digitpoly.FamilyRejected as e:
        raise InputError(f"family rejected: {e}")
    except FactorLeak as leak:
        raise InputError(f"family rejected, factor leak {leak.factor}: {leak.context}")
    extra = {"family": {"bases": list(fam.bases), "companion_bases": list(fam.companion_bases), "D": fam.D}}
    return [f.mod(N) for f in fam.polys], extra


def cmd_nu(a):
    N = a.N
    if N < 2 or N > a.bound:
        raise InputError(f"N must lie in [2, {a.bound}]")
    polys, extra = _nu_polys(a)
    g = ModPoly.constant(1, N)
    for f in polys:
        g = g * f
    rep = nu.nu_bruteforce(g, N, bound=a.bound)
    if len(polys) > 1:
        rep.vanishing_count = len(nu.vanishing_points(polys, N, bound=a.bound))
    if a.factors is not None:
        p, q = sorted(a.factors)
        if p * q != N or p == q:
            raise InputError("--factors must be distinct p,q with p*q = N")
        rep.roots_mod_p = nu.count_roots_mod(g, p)
        rep.roots_mod_q = nu.count_roots_mod(g, q)
        rep.formula_value = nu.nu_formula(rep.roots_mod_p, rep.roots_mod_q, p, q)
        deg = g.degree
        if deg >= 1 and 2 * deg < p:
            rep.bound_value = nu.nu_bound(int(deg), p, q)
    outcome = rep.to_dict() | extra
    line = f"N={N} suitable={rep.suitable_count}"
    if rep.vanishing_count is not None:
        line += f" vanishes={rep.vanishing_count}"
    if rep.formula_value is not None:
        line += f" formula={rep.formula_value} " + ("match" if rep.formula_match else "MISMATCH")
    if rep.bound_value is not None:
        line += f" bound={rep.bound_value}"
    code = EXIT_BREACH if rep.formula_match is False else EXIT_OK
    return code, outcome, [line]


def cmd_prime_char(a):
    N = a.N
    if N < 3 or N % 2 == 0:
        raise InputError("N must be odd and at least 3")
    if N > a.bound:
        raise InputError(f"N exceeds the exhaustive bound {a.bound}")
    pp = perfect_power(N)
    if pp is not None:
        raise InputError(f"rejected: perfect power {pp[0]}^{pp[1]}")
    if a.base is None:
        f = digitpoly.DigitPoly((0, 1), N, N)
    else:
        try:
            f = digitpoly.badic_digit_poly(N, a.base)
        except ValueError as e:
            raise InputError(str(e))
    v = primality.exhaustive_characterization(N, f, a.mode, bound=a.bound)
    if v.is_composite:
        line = f"{N}: composite, witness {v.witness} ({a.mode}, f = {f})"
    else:
        line = f"{N}: prime-consistent, checked {v.checked} ({a.mode}, f = {f})"
    if v.factor_leak:
        line += f"; factor leak {v.factor_leak}"
    return EXIT_OK, v.to_dict(), [line]


def cmd_verify(a):
    if a.kind == "survey":
        s = digitpoly.digit_condition_survey(a.N)
        rate = "n/a" if s["rate"] is None else f"{s['rate']:.3f}"
        line = (
            f"N={a.N} bases {s['range'][0]}..{s['range'][1]}: "
            f"{s['digit_condition_holds']}/{s['bases']} satisfy n1 <= n0 + 1 (rate {rate})"
        )
        return EXIT_OK, s, [line]
    if a.factors is None:
        raise InputError("--factors p,q is required")
    p, q = sorted(a.factors)
    N = a.N
    if p * q != N or p == q:
        raise InputError("--factors must be distinct p,q with p*q = N")
    if N > a.bound:
        raise InputError(f"N exceeds the exhaustive bound {a.bound}")
    if a.kind == "linear":
        if a.bases is None:
            raise InputError("--bases is required")
        rep = nu.verify_linear_product_theorem(N, p, q, a.bases, bound=a.bound)
        if not rep.hypotheses_ok:
            line = f"hypothesis failure: {rep.failed_hypothesis}"
            if rep.factor_leak:
                line += f" (factor leak {rep.factor_leak})"
            return EXIT_OK, rep.to_dict(), [line]
        line = (
            f"N={N} d={len(rep.bases)} brute={rep.brute_force} formula={rep.formula} "
            f"vanishes={rep.vanishing_count} " + ("holds" if rep.holds else "VIOLATED")
        )
        return (EXIT_OK if rep.holds else EXIT_BREACH), rep.to_dict(), [line]
    if a.base is None:
        raise InputError("--base is required")
    try:
        rep = nu.verify_quadratic_product_theorem(N, p, q, (a.base, a.d), bound=a.bound)
    except digitpoly.FamilyRejected as e:
        return EXIT_OK, {"rejected": str(e), "condition": e.condition, "base": e.base}, [f"rejected: {e}"]
    except FactorLeak as leak:
        return EXIT_OK, {"rejected": leak.context, "factor_leak": leak.factor}, [
            f"rejected: {leak.context} (factor leak {leak.factor})"
        ]
    line = (
        f"N={N} bases={rep.bases} companions={rep.companion_bases} D={rep.D} "
        f"brute={rep.brute_force} formula={rep.formula} " + ("holds" if rep.holds else "VIOLATED")
    )
    return (EXIT_OK if rep.holds else EXIT_BREACH), rep.to_dict(), [line]


def bench_counts(sizes, *, schoolbook: bool = False, modulus: int = BENCH_MODULUS, seed: int = 1):
    """Rows of (d, coefficient multiplications, wall ms) for tree build + evaluation."""
    rows = []
    for d in sizes:
        rng = random.Random(seed * 1000003 + d)
        bases = [rng.randrange(modulus) for _ in range(d)]
        points = [rng.randrange(modulus) for _ in range(d)]
        leaves = [ModPoly((-b, 1), modulus) for b in bases]
        t0 = time.perf_counter()
        with OpCounter() as ops:
            if schoolbook:
                with schoolbook_only():
                    SubproductTree(points, modulus).evaluate(product_tree(leaves).root)
            else:
                SubproductTree(points, modulus).evaluate(product_tree(leaves).root)
        rows.append({"d": d, "coeff_mul": ops.mul, "wall_ms": (time.perf_counter() - t0) * 1e3})
    for prev, row in zip(rows, rows[1:]):
        if row["d"] == 2 * prev["d"]:
            row["ratio"] = row["coeff_mul"] / prev["coeff_mul"]
    return rows


def cmd_bench(a):
    sizes = a.sizes or list(DEFAULT_LADDER)
    if any(d < 1 for d in sizes):
        raise InputError("sizes must be positive")
    rows = bench_counts(sizes, schoolbook=a.schoolbook, modulus=a.modulus, seed=a.seed)
    lines = [f"{'d':>8} {'coeff_mul':>14} {'ratio':>7} {'ms':>10}"]
    for r in rows:
        ratio = f"{r['ratio']:.3f}" if "ratio" in r else "-"
        lines.append(f"{r['d']:>8} {r['coeff_mul']:>14} {ratio:>7} {r['wall_ms']:>10.1f}")
    return EXIT_OK, {"rows": rows, "schoolbook": a.schoolbook, "modulus": a.modulus}, lines


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="digitfactor", description="Digit-polynomial factoring toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser(
        "factor",
        help="factor N completely, or run Algorithm 1 once",
        epilog="The hint method assumes a prime factor p < b with b <= N/5; "
        "factors between N/5 and sqrt(N) are not covered by it.",
    )
    f.add_argument("N", type=parse_int)
    f.add_argument("--single", action="store_true", help="one Algorithm 1 run; prints 'Error A'/'Error B'")
    f.add_argument("--hint", type=_triple, metavar="M,R,B", help="hint p = R mod M with p < B")
    f.add_argument("--multifactor", type=int, metavar="M", help="use d = floor(N^(1/(2M)))")
    f.add_argument("--d-override", type=int, metavar="D", help="Strassen-shaped grid of size D")
    f.add_argument("--block-size", type=int, default=engine.DEFAULT_BLOCK)
    f.add_argument("--trial-bound", type=int, default=None, help="default 1000, or 1 with --hint")
    f.set_defaults(func=cmd_factor)

    n = sub.add_parser("nu", help="count suitable x for a polynomial over Z_N")
    n.add_argument("N", type=parse_int)
    n.add_argument("--poly", type=_signed_int_list, metavar="C0,C1,...", help="coefficients, ascending")
    n.add_argument("--linear-bases", type=parse_int_list, metavar="B1,B2,...", help="product of X - b_i")
    n.add_argument("--quad-base", type=parse_int, metavar="B", help="quadratic family starting at B")
    n.add_argument("--quad-d", type=int, default=1, metavar="D")
    n.add_argument("--factors", type=_pair, metavar="P,Q")
    n.add_argument("--bound", type=parse_int, default=nu.DEFAULT_BOUND)
    n.set_defaults(func=cmd_nu)

    p = sub.add_parser("prime-char", help="exhaustive primality characterization")
    p.add_argument("N", type=parse_int)
    p.add_argument("--base", type=parse_int, help="use the base-B digit polynomial instead of f = X")
    p.add_argument("--mode", choices=primality.MODES, default="fermat")
    p.add_argument("--bound", type=parse_int, default=primality.DEFAULT_BOUND)
    p.set_defaults(func=cmd_prime_char)

    v = sub.add_parser("verify", help="check the counting theorems by brute force")
    v.add_argument("kind", choices=("linear", "quad", "survey"))
    v.add_argument("N", type=parse_int)
    v.add_argument("--factors", type=_pair, metavar="P,Q")
    v.add_argument("--bases", type=parse_int_list, metavar="B1,B2,...")
    v.add_argument("--base", type=parse_int, metavar="B")
    v.add_argument("--d", type=int, default=1)
    v.add_argument("--bound", type=parse_int, default=nu.DEFAULT_BOUND)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="coefficient-multiplication counts for tree build + evaluation")
    b.add_argument("sizes", type=int, nargs="*")
    b.add_argument("--schoolbook", action="store_true", help="quadratic negative control")
    b.add_argument("--modulus", type=parse_int, default=BENCH_MODULUS)
    b.add_argument("--seed", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    for sp in (f, n, p, v, b):
        sp.add_argument("--json", action="store_true", help="print a JSON run record")
    return ap


def _inputs(a) -> dict:
    skip = {"func", "json", "command"}
    out = {}
    for k, val in vars(a).items():
        if k in skip:
            continue
        out[k] = list(val) if isinstance(val, tuple) else val
    return out


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    t0 = time.perf_counter()
    with OpCounter() as ops:
        try:
            code, outcome, lines = a.func(a)
        except InputError as e:
            print(f"digitfactor {a.command}: {e}", file=sys.stderr)
            return EXIT_INPUT
    rec = RunRecord(
        command=a.command,
        inputs=_inputs(a),
        outcome=outcome,
        counters=ops.as_dict(),
        wall_time_ms=round((time.perf_counter() - t0) * 1e3, 3),
    )
    if a.json:
        print(rec.to_json())
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
