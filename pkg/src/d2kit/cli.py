"""Command-line front end: JSON in, JSON out.

Exit codes: 0 ok, 1 input error, 2 mathematical precondition failure,
3 verification failure.  ``WF_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from math import gcd

from . import __version__
from .certificates import (
    KINDS,
    make_chain_map,
    make_ext3,
    make_factorization,
    make_ideals,
    make_iso_witness,
    make_reduction,
    make_snf,
    make_swan,
    mutate,
    sample_certificate,
    verify_certificate,
)
from .complexes import (
    Presentation,
    build_complex,
    ext3_class,
    fox_derivative,
    parse_word,
    realize_unit,
    stabilize_complex,
)
from .errors import (
    CertificateError,
    D2KitError,
    DimensionMismatch,
    ParseError,
    UnknownGenerator,
)
from .ideals import enumerate_candidates
from .matlin import Matrix, factor_det_one, reduce_to_alpha_block, snf_fp
from .modclass import (
    IsoWitness,
    Reduced,
    build_m_module,
    build_swan_module,
    decide_scalar_stable_equiv,
    find_s_unit,
    verify_iso_witness,
    verify_swan_freeness_witness,
)
from .rings import GroupRing, LaurentRing, QuotientRing, is_prime

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3

_INPUT_ERRORS = (ParseError, CertificateError, DimensionMismatch, UnknownGenerator, json.JSONDecodeError, OSError)


class Fail(Exception):
    """Carries an exit code and a message up to main()."""

    def __init__(self, code: int, message: str, data: dict | None = None):
        super().__init__(message)
        self.code = code
        self.data = data


# I/O helpers ------------------------------------------------------------------

def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _json_arg(value: str):
    """A file path, '-' for stdin, or inline JSON."""
    if value == "-" or os.path.exists(value):
        return _read_json(value)
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{value!r} is neither a file nor JSON") from exc


def _text_arg(value: str) -> str:
    if os.path.exists(value):
        with open(value, encoding="utf-8") as fh:
            return fh.read().strip()
    return value


def _matrix(value: str, ring) -> Matrix:
    data = _json_arg(value)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a JSON array of arrays")
    return Matrix.from_strings(data, ring)


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _modulus(n: int) -> int:
    if n < 2:
        raise ParseError("--n must be >= 2")
    return n


# commands ------------------------------------------------------------------------

def cmd_factor_sl(args) -> int:
    ring = LaurentRing(_modulus(args.n))
    e = _matrix(args.matrix, ring)
    try:
        word = factor_det_one(e)
    except ArithmeticError as exc:
        raise Fail(EXIT_PRECONDITION, str(exc))
    _emit(make_factorization(e, word), args.out)
    return EXIT_OK


def cmd_snf(args) -> int:
    if not is_prime(args.p):
        raise ParseError(f"--p {args.p} is not prime")
    a = _matrix(args.matrix, LaurentRing(args.p))
    _emit(make_snf(a, snf_fp(a)), args.out)
    return EXIT_OK


def cmd_reduce_alpha(args) -> int:
    ring = LaurentRing(_modulus(args.n))
    b = _matrix(args.matrix, ring)
    alpha = ring.parse(args.alpha)
    try:
        left, right = reduce_to_alpha_block(b, alpha)
    except ArithmeticError as exc:
        raise Fail(EXIT_PRECONDITION, str(exc))
    _emit(make_reduction(alpha, b, Reduced(left, right, b)), args.out)
    return EXIT_OK


def cmd_module_build(args) -> int:
    ring = LaurentRing(_modulus(args.n))
    m = build_m_module(_matrix(args.matrix, ring))
    problems = m.check_invariants()
    _emit({
        "n": m.n,
        "k": m.k,
        "A_class": m.A_class.to_strings(),
        "A_lift": m.A_lift.to_strings(),
        "gen_matrix": m.gen_matrix.to_strings(),
        "invariants_ok": not problems,
    }, args.out)
    return EXIT_OK if not problems else EXIT_VERIFY


def cmd_module_iso_verify(args) -> int:
    n = _modulus(args.n)
    ring = LaurentRing(n)
    a, b = _matrix(args.a, ring), _matrix(args.b, ring)
    w = _json_arg(args.witness)
    qs = QuotientRing(n)
    try:
        wit = IsoWitness(
            Matrix.from_strings(w["C_lift"], LaurentRing(0)),
            Matrix.from_strings(w["D_lift"], qs),
            Matrix.from_strings(w["D_inverse"], qs) if "D_inverse" in w else None,
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"witness needs C_lift and D_lift: {exc}") from exc
    rep = verify_iso_witness(a, b, wit)
    if not rep.ok:
        raise Fail(EXIT_VERIFY, "iso witness rejected", {"ok": False, "failed": rep.failed})
    _emit(make_iso_witness(a, b, wit), args.out)
    return EXIT_OK


def cmd_module_stable_decide(args) -> int:
    ring = LaurentRing(_modulus(args.n))
    b = _matrix(args.matrix, ring)
    alpha = ring.parse(args.alpha)
    if alpha.is_zero():
        raise Fail(EXIT_PRECONDITION, "alpha must be nonzero")
    verdict = decide_scalar_stable_equiv(alpha, b, span=args.span, box=args.box)
    if isinstance(verdict, Reduced):
        _emit(make_reduction(alpha, b, verdict), args.out)
    else:
        _emit({"verdict": "Obstructed", "reason": verdict.reason, "det": str(verdict.det)}, args.out)
    return EXIT_OK


def cmd_swan_build(args) -> int:
    n = _modulus(args.n)
    a = _matrix(args.matrix, LaurentRing(n))
    m = build_swan_module(n, a.shape[0], a)
    _emit({
        "n": n,
        "k": m.k,
        "A_class": m.A_class.to_strings(),
        "gen_matrix": m.gen_matrix.to_strings(),
        "invariants_ok": not m.check_invariants(),
    }, args.out)
    return EXIT_OK


def cmd_swan_verify(args) -> int:
    n = _modulus(args.n)
    a = _matrix(args.matrix, LaurentRing(n))
    m = build_swan_module(n, a.shape[0], a)
    qs = QuotientRing(n)
    if args.d is not None:
        d = _matrix(args.d, qs)
        d_inv = _matrix(args.d_inverse, qs) if args.d_inverse else None
    else:
        if m.k != 1:
            raise ParseError("--d is required when k > 1")
        r = m.A_class.rows[0][0].coeff(0)
        hit = find_s_unit(n, frozenset({r % n}), args.span, args.box)
        if hit is None:
            raise Fail(EXIT_VERIFY, f"no unit of S_Z with augmentation {r} mod {n} in the search box")
        d, d_inv = Matrix([[hit[0]]], qs), Matrix([[hit[1]]], qs)
    rep = verify_swan_freeness_witness(m, d, d_inv)
    if not rep.ok:
        raise Fail(EXIT_VERIFY, "swan witness rejected", {"ok": False, "failed": rep.failed})
    _emit(make_swan(n, m.A_class, d, d_inv), args.out)
    return EXIT_OK


def _presentation(args) -> Presentation:
    return Presentation.parse(_text_arg(args.presentation))


def cmd_fox(args) -> int:
    pres = _presentation(args)
    word = parse_word(args.word, pres.generators)
    gens = [args.gen] if args.gen else list(pres.generators)
    _emit({g: str(fox_derivative(word, g, pres)) for g in gens}, args.out)
    return EXIT_OK


def _complex_json(cx) -> dict:
    return {
        "presentation": cx.presentation.to_text(),
        "n": cx.n,
        "d2": cx.d2.to_strings(),
        "d1": cx.d1.to_strings(),
    }


def cmd_complex_build(args) -> int:
    pres = _presentation(args)
    try:
        cx = build_complex(pres)
    except D2KitError as exc:
        raise Fail(EXIT_PRECONDITION, str(exc))
    if args.stabilize:
        cx = stabilize_complex(cx, args.stabilize)
    _emit(_complex_json(cx), args.out)
    return EXIT_OK


def cmd_complex_verify(args) -> int:
    data = _json_arg(args.file)
    try:
        pres = Presentation.parse(data["presentation"])
        zg = GroupRing(pres.n)
        d2 = Matrix.from_strings(data["d2"], zg)
        d1 = Matrix.from_strings(data["d1"], zg)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"complex file needs presentation, d2, d1: {exc}") from exc
    try:
        rebuilt = build_complex(pres)
    except D2KitError as exc:
        raise Fail(EXIT_VERIFY, str(exc), {"ok": False, "failed": [str(exc)]})
    failed = []
    if d2 != rebuilt.d2:
        failed.append("d2 differs from the Fox matrix of the presentation")
    if d1 != rebuilt.d1:
        failed.append("d1 differs from the generator images")
    if d1.shape[1] != d2.shape[0] or not (d1 * d2).is_zero():
        failed.append("d1 * d2 != 0")
    result = {"ok": not failed, "failed": failed}
    if failed:
        raise Fail(EXIT_VERIFY, "complex rejected", result)
    _emit(result, args.out)
    return EXIT_OK


def cmd_ext3(args) -> int:
    if args.cocycle:
        data = _json_arg(args.cocycle)
        try:
            n, a_text, b_text = int(data["n"]), data["a"], data["b"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"cocycle file needs n, a, b: {exc}") from exc
    else:
        if args.n is None or args.a is None or args.b is None:
            raise ParseError("give --cocycle FILE or all of --n, --a, --b")
        n, a_text, b_text = args.n, args.a, args.b
    zg = GroupRing(_modulus(n))
    a, b = zg.parse(a_text), zg.parse(b_text)
    try:
        cls = ext3_class(a, b)
    except D2KitError as exc:
        raise Fail(EXIT_PRECONDITION, str(exc))
    _emit(make_ext3(a, b, cls.value), args.out)
    return EXIT_OK


def cmd_realize(args) -> int:
    n = _modulus(args.n)
    if gcd(args.w, n) != 1:
        raise Fail(EXIT_PRECONDITION, f"w={args.w} is not a unit mod {n}")
    r = realize_unit(n, args.w)
    if not r.report.ok:
        raise Fail(EXIT_VERIFY, "chain map failed to verify", {"details": r.report.details})
    cert = make_chain_map(r.witness, r.w, r.v)
    summary = {"presentation": r.presentation.to_text(), "v": r.v, "class": r.ext3.value}
    if args.emit_witness:
        _emit(cert, args.emit_witness)
        _emit(summary, args.out)
    else:
        cert["summary"] = summary
        _emit(cert, args.out)
    return EXIT_OK


def cmd_ideals(args) -> int:
    n = _modulus(args.n)
    if args.certificate:
        _emit(make_ideals(n, args.seed), args.out)
    else:
        _emit([c.to_json() for c in enumerate_candidates(n, args.seed)], args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    env = _json_arg(args.file)
    res = verify_certificate(env)
    _emit(res.to_json(), args.out)
    return EXIT_OK if res.ok else EXIT_VERIFY


# selftest -------------------------------------------------------------------------

def _selftest_case(seed: int, mutants: int) -> tuple[dict, list[str]]:
    """One certificate of every kind plus its mutants, all drawn from ``seed``."""
    rng = random.Random(seed)
    counts = {kind: [0, 0] for kind in KINDS}  # verified, mutants rejected
    failures = []
    for kind in KINDS:
        cert = sample_certificate(kind, rng)
        if verify_certificate(cert).ok:
            counts[kind][0] += 1
        else:
            failures.append(f"{kind}: valid certificate rejected (case seed {seed})")
        for _ in range(mutants):
            bad, path = mutate(cert, rng)
            if verify_certificate(bad).ok:
                failures.append(f"{kind}: mutant at {list(path)} accepted (case seed {seed})")
            else:
                counts[kind][1] += 1
    return counts, failures


def cmd_selftest(args) -> int:
    # per-case seeds make the report independent of --jobs
    rng = random.Random(args.seed)
    seeds = [rng.randrange(2**32) for _ in range(args.cases)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_selftest_case, seeds, [args.mutants] * len(seeds)))
    else:
        results = [_selftest_case(seed, args.mutants) for seed in seeds]
    counts = {kind: [0, 0] for kind in KINDS}
    failures = []
    for case_counts, case_failures in results:
        for kind, (ok, rejected) in case_counts.items():
            counts[kind][0] += ok
            counts[kind][1] += rejected
        failures.extend(case_failures)
    report = {
        "seed": args.seed,
        "verified": {k: v[0] for k, v in counts.items()},
        "mutants_rejected": {k: v[1] for k, v in counts.items()},
        "failures": failures,
    }
    _emit(report, args.out)
    return EXIT_OK if not failures else EXIT_VERIFY


# parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (WF_SEED overrides)")
    common.add_argument("--out", help="write JSON here instead of stdout")

    ap = argparse.ArgumentParser(prog="d2kit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"d2kit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor-sl", parents=[common], help="factor a det-1 matrix over Z_n[t,t^-1]")
    p.add_argument("--matrix", required=True, help="JSON file, '-' or inline JSON")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_factor_sl)

    p = sub.add_parser("snf", parents=[common], help="Smith form over F_p[t,t^-1]")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("reduce-alpha", parents=[common], help="reduce B to alpha (+) I")
    p.add_argument("--matrix", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_reduce_alpha)

    mod = sub.add_parser("module", help="M(A) module calculus").add_subparsers(dest="action", required=True)
    p = mod.add_parser("build", parents=[common])
    p.add_argument("--matrix", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_module_build)
    p = mod.add_parser("iso-verify", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--witness", required=True, help="JSON with C_lift, D_lift[, D_inverse]")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_module_iso_verify)
    p = mod.add_parser("stable-decide", parents=[common])
    p.add_argument("--matrix", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--span", type=int, default=4)
    p.add_argument("--box", type=int, default=4)
    p.set_defaults(func=cmd_module_stable_decide)

    sw = sub.add_parser("swan", help="Swan modules over C_n").add_subparsers(dest="action", required=True)
    p = sw.add_parser("build", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_swan_build)
    p = sw.add_parser("verify", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--d", help="witness matrix over S_Z; searched for when omitted (k = 1)")
    p.add_argument("--d-inverse")
    p.add_argument("--span", type=int, default=4)
    p.add_argument("--box", type=int, default=4)
    p.set_defaults(func=cmd_swan_verify)

    p = sub.add_parser("fox", parents=[common], help="Fox derivatives of a word")
    p.add_argument("--presentation", required=True, help="presentation text or a file holding it")
    p.add_argument("--word", required=True)
    p.add_argument("--gen")
    p.set_defaults(func=cmd_fox)

    cx = sub.add_parser("complex", help="algebraic 2-complexes").add_subparsers(dest="action", required=True)
    p = cx.add_parser("build", parents=[common])
    p.add_argument("--presentation", required=True)
    p.add_argument("--stabilize", type=int, default=0, metavar="M", help="add M trivial relators")
    p.set_defaults(func=cmd_complex_build)
    p = cx.add_parser("verify", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_complex_verify)

    p = sub.add_parser("ext3", parents=[common], help="Ext^3 class of a cocycle")
    p.add_argument("--cocycle", help="JSON with n, a, b")
    p.add_argument("--n", type=int)
    p.add_argument("--a")
    p.add_argument("--b")
    p.set_defaults(func=cmd_ext3)

    p = sub.add_parser("realize", parents=[common], help="realize a unit w mod n by G(v)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--emit-witness", metavar="FILE")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("ideals", parents=[common], help="candidate maximal ideals (p, omega)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--certificate", action="store_true", help="emit a certificate envelope")
    p.set_defaults(func=cmd_ideals)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", parents=[common], help="random closed-loop certificate check")
    p.add_argument("--cases", type=int, default=3)
    p.add_argument("--mutants", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent cases")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    env_seed = os.environ.get("WF_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"error: WF_SEED={env_seed!r} is not an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.data is not None:
            _emit(exc.data)
        return exc.code
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
