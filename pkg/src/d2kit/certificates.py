"""JSON certificate envelopes and an independent verifier.

An envelope is ``{"kind", "claim", "payload", "version"}``.  The verifier
re-derives the claim from the payload alone (it multiplies words out,
rebuilds complexes from presentation text, recomputes classes) and never
trusts any cached result.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field
from typing import Callable

from . import __version__, sampling
from .complexes import (
    ChainMapWitness,
    Presentation,
    build_complex,
    cocycle_from_alphas,
    cocycle_of_endomorphism,
    ext3_class,
    realize_unit,
    verify_chain_map,
)
from .errors import CertificateError, D2KitError, ParseError
from .ideals import (
    degree,
    expand_factorization,
    factor_xn_minus_1,
    format_poly,
    is_irreducible,
    trim,
    xn_minus_1,
)
from .matlin import (
    ElementaryWord,
    Matrix,
    WhiteheadBlock,
    direct_sum_identity,
    divisibility_chain_holds,
    factor_det_one,
    snf_fp,
)
from .modclass import (
    IsoWitness,
    build_swan_module,
    decide_scalar_stable_equiv,
    find_s_unit,
    verify_iso_witness,
    verify_swan_freeness_witness,
)
from .rings import (
    GroupRing,
    GroupRingElem,
    Laurent,
    LaurentRing,
    QuotientRing,
    eps_hat_S,
    factorize,
    format_terms,
    parse_terms,
)

KINDS = ("factorization", "snf", "reduction", "iso-witness", "chain-map", "ext3", "swan", "ideals")

# payload keys whose string values are not ring elements
_TEXT_KEYS = {"kind", "side", "source", "target", "presentation"}


def envelope(kind: str, claim: str, payload: dict) -> dict:
    return {"kind": kind, "claim": claim, "payload": payload, "version": f"d2kit {__version__}"}


# producers -------------------------------------------------------------------

def make_factorization(matrix: Matrix, word: ElementaryWord) -> dict:
    return envelope(
        "factorization",
        "the product of the elementary ops equals the matrix; every op has det 1",
        {"n": matrix.ring.modulus, "matrix": matrix.to_strings(), "word": word.to_json()},
    )


def make_snf(a: Matrix, res) -> dict:
    return envelope(
        "snf",
        "left * A * right = Diag(diag) over F_p[t,t^-1] with a divisibility chain",
        {
            "p": a.ring.modulus,
            "matrix": a.to_strings(),
            "left": res.left.to_json(),
            "right": res.right.to_json(),
            "diag": [str(d) for d in res.diag],
        },
    )


def _witness_json(w: IsoWitness) -> dict:
    out = {"C_lift": w.C_lift.to_strings(), "D_lift": w.D_lift.to_strings()}
    if w.D_inverse is not None:
        out["D_inverse"] = w.D_inverse.to_strings()
    return out


def make_reduction(alpha, b: Matrix, verdict) -> dict:
    payload = {
        "n": b.ring.modulus,
        "alpha": str(alpha),
        "B": b.to_strings(),
        "B_new": verdict.B_new.to_strings(),
        "left": verdict.left.to_json(),
        "right": verdict.right.to_json(),
    }
    if verdict.normalizer is not None:
        payload["normalizer"] = _witness_json(verdict.normalizer)
    return envelope("reduction", "left * B_new * right = alpha (+) I, with B_new = C B D for a checked witness", payload)


def make_iso_witness(a: Matrix, b: Matrix, w: IsoWitness) -> dict:
    payload = {"n": a.ring.modulus, "A": a.to_strings(), "B": b.to_strings()}
    payload.update(_witness_json(w))
    return envelope("iso-witness", "C A D = B with C in GL_k(R) and D invertible over S", payload)


def make_chain_map(wit: ChainMapWitness, w: int | None = None, v: int | None = None) -> dict:
    payload = {
        "n": wit.source.n,
        "source": wit.source.presentation.to_text(),
        "target": wit.target.presentation.to_text(),
        "f3": str(wit.f3),
        "f2": wit.f2.to_strings(),
        "f1": wit.f1.to_strings(),
    }
    if w is not None:
        payload["w"] = w
        payload["v"] = v
    return envelope("chain-map", "all squares commute; the Ext^3 class of f3 is w", payload)


def make_ext3(a: GroupRingElem, b: GroupRingElem, value: int) -> dict:
    return envelope(
        "ext3",
        "(a b) is a cocycle and eps(a / (x-1)) = value mod n",
        {"n": a.n, "a": str(a), "b": str(b), "value": value},
    )


def make_swan(n: int, a: Matrix, d_lift: Matrix, d_inverse: Matrix | None = None) -> dict:
    payload = {"n": n, "k": a.shape[0], "A": a.to_strings(), "D_lift": d_lift.to_strings()}
    if d_inverse is not None:
        payload["D_inverse"] = d_inverse.to_strings()
    return envelope("swan", "D over S_Z is invertible with eps(D) = A, so M(A) is free", payload)


def make_ideals(n: int, seed: int = 0) -> dict:
    facs = {}
    cands = []
    for p, _ in factorize(n):
        fs = factor_xn_minus_1(n, p, seed)
        facs[str(p)] = [[format_poly(g, p), m] for g, m in fs]
        cands.extend({"p": p, "omega": format_poly(g, p)} for g, _ in fs)
    return envelope(
        "ideals",
        "x^n - 1 = prod omega^m over F_p for each p | n, each omega irreducible; candidates are the distinct omega",
        {"n": n, "factorizations": facs, "candidates": cands},
    )


# verification -------------------------------------------------------------------

@dataclass
class Verification:
    ok: bool
    discrepancies: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "discrepancies": self.discrepancies}


def _need(payload: dict, *keys):
    try:
        return [payload[k] for k in keys]
    except KeyError as exc:
        raise CertificateError(f"payload is missing {exc}") from None


def _check_factorization(p: dict) -> list[str]:
    n, mat, word = _need(p, "n", "matrix", "word")
    ring = LaurentRing(int(n))
    e = Matrix.from_strings(mat, ring)
    w = ElementaryWord.from_json(word, ring)
    out = []
    for idx, op in enumerate(w.ops):
        if isinstance(op, WhiteheadBlock) and not (op.unit.element * op.unit.inverse).is_one():
            out.append(f"op {idx}: Whitehead unit times inverse is not 1")
    if w.k != e.shape[0] or not e.is_square:
        return out + ["word size does not match the matrix"]
    if w.evaluate_by_products() != e:
        out.append("product of ops != matrix")
    if not e.det().is_one():
        out.append("det(matrix) != 1")
    return out


def _poly_to_fp(text: str, p: int):
    terms = parse_terms(text, "x")
    if not terms:
        return ()
    top = max(a for a, _ in terms)
    return trim(terms.get((i, 0), 0) % p for i in range(top + 1))


def _check_snf(p: dict) -> list[str]:
    prime, mat, left, right, diag = _need(p, "p", "matrix", "left", "right", "diag")
    ring = LaurentRing(int(prime))
    a = Matrix.from_strings(mat, ring)
    lw = ElementaryWord.from_json(left, ring)
    rw = ElementaryWord.from_json(right, ring)
    dg = [ring.parse(s) for s in diag]
    r, c = a.shape
    if lw.k != r or rw.k != c or len(dg) != min(r, c):
        return ["sizes do not match"]
    target = Matrix.zeros(r, c, ring)
    for i, d in enumerate(dg):
        target.rows[i][i] = d
    out = []
    if lw.evaluate_by_products() * a * rw.evaluate_by_products() != target:
        out.append("left * A * right != Diag(diag)")
    if not divisibility_chain_holds(dg, either_order=True):
        out.append("divisibility chain fails")
    return out


def _parse_witness(p: dict, n: int) -> IsoWitness:
    c, d = _need(p, "C_lift", "D_lift")
    qs = QuotientRing(n)
    inv = Matrix.from_strings(p["D_inverse"], qs) if "D_inverse" in p else None
    return IsoWitness(Matrix.from_strings(c, LaurentRing(0)), Matrix.from_strings(d, qs), inv)


def _check_reduction(p: dict) -> list[str]:
    n, alpha, b, b_new, left, right = _need(p, "n", "alpha", "B", "B_new", "left", "right")
    n = int(n)
    ring = LaurentRing(n)
    bm = Matrix.from_strings(b, ring)
    bn = Matrix.from_strings(b_new, ring)
    al = ring.parse(alpha)
    k = bm.shape[0]
    lw = ElementaryWord.from_json(left, ring, k)
    rw = ElementaryWord.from_json(right, ring, k)
    out = []
    target = direct_sum_identity(Matrix([[al]], ring), k - 1)
    if lw.evaluate_by_products() * bn * rw.evaluate_by_products() != target:
        out.append("left * B_new * right != alpha (+) I")
    if "normalizer" in p:
        out.extend(verify_iso_witness(bm, bn, _parse_witness(p["normalizer"], n)).failed)
    elif bn != bm:
        out.append("B_new != B but no normalizer is given")
    return out


def _check_iso(p: dict) -> list[str]:
    n, a, b = _need(p, "n", "A", "B")
    n = int(n)
    ring = LaurentRing(n)
    return verify_iso_witness(
        Matrix.from_strings(a, ring), Matrix.from_strings(b, ring), _parse_witness(p, n)
    ).failed


def _check_chain_map(p: dict) -> list[str]:
    n, src, tgt, f3, f2, f1 = _need(p, "n", "source", "target", "f3", "f2", "f1")
    n = int(n)
    zg = GroupRing(n)
    source = build_complex(Presentation.parse(src))
    target = build_complex(Presentation.parse(tgt))
    if source.n != n or target.n != n:
        return ["presentations are not over the stated n"]
    wit = ChainMapWitness(
        zg.parse(f3), Matrix.from_strings(f2, zg), Matrix.from_strings(f1, zg), source, target
    )
    rep = verify_chain_map(wit)
    out = [f"square {rep.failed_square}: {d}" for d in rep.details]
    if "w" in p:
        w, v = int(p["w"]), int(p["v"])
        if (v * w) % n != 1 % n:
            out.append("v * w != 1 mod n")
        if target.presentation.assignment[0] != (v % n, 0):
            out.append("target generator is not x^v")
        if not out:
            cls = ext3_class(*cocycle_of_endomorphism(wit.f3))
            if cls.value != w % n:
                out.append(f"Ext^3 class of f3 is {cls.value}, claimed {w % n}")
    return out


def _check_ext3(p: dict) -> list[str]:
    n, a, b, value = _need(p, "n", "a", "b", "value")
    zg = GroupRing(int(n))
    cls = ext3_class(zg.parse(a), zg.parse(b))
    if cls.value != int(value) % int(n):
        return [f"class is {cls.value}, claimed {value}"]
    return []


def _check_swan(p: dict) -> list[str]:
    n, k, a, d = _need(p, "n", "k", "A", "D_lift")
    n, k = int(n), int(k)
    am = Matrix.from_strings(a, LaurentRing(n))
    qs = QuotientRing(n)
    inv = Matrix.from_strings(p["D_inverse"], qs) if "D_inverse" in p else None
    m = build_swan_module(n, k, am)
    return m.check_invariants() + verify_swan_freeness_witness(m, Matrix.from_strings(d, qs), inv).failed


def _check_ideals(p: dict) -> list[str]:
    n, facs, cands = _need(p, "n", "factorizations", "candidates")
    n = int(n)
    out = []
    primes = sorted(q for q, _ in factorize(n))
    if sorted(int(q) for q in facs) != primes:
        out.append(f"primes listed {sorted(facs)} are not the prime divisors {primes}")
    expected = set()
    for q, fs in facs.items():
        q = int(q)
        polys = [(_poly_to_fp(g, q), int(m)) for g, m in fs]
        if expand_factorization(polys, q) != xn_minus_1(n, q):
            out.append(f"factors mod {q} do not multiply to x^{n}-1")
        for g, _ in polys:
            if not (degree(g) >= 1 and g[-1] == 1 and is_irreducible(g, q)):
                out.append(f"factor {format_poly(g, q)} mod {q} is not monic irreducible")
            expected.add((q, g))
        if len({g for g, _ in polys}) != len(polys):
            out.append(f"repeated factor mod {q}")
    got = [(int(c["p"]), _poly_to_fp(c["omega"], int(c["p"]))) for c in cands]
    if len(set(got)) != len(got):
        out.append("candidate list has duplicates")
    if set(got) != expected:
        out.append("candidates differ from the distinct irreducible factors")
    return out


_CHECKS: dict[str, Callable[[dict], list[str]]] = {
    "factorization": _check_factorization,
    "snf": _check_snf,
    "reduction": _check_reduction,
    "iso-witness": _check_iso,
    "chain-map": _check_chain_map,
    "ext3": _check_ext3,
    "swan": _check_swan,
    "ideals": _check_ideals,
}


def verify_certificate(env: dict) -> Verification:
    """Recompute the claim.  Malformed envelopes raise CertificateError/ParseError."""
    if not isinstance(env, dict) or "kind" not in env or "payload" not in env:
        raise CertificateError("not a certificate envelope")
    kind = env["kind"]
    if kind not in _CHECKS:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    if not isinstance(env["payload"], dict):
        raise CertificateError("payload must be an object")
    try:
        problems = _CHECKS[kind](env["payload"])
    except (ParseError, CertificateError):
        raise
    except D2KitError as exc:
        problems = [f"{type(exc).__name__}: {exc}"]
    except (TypeError, ValueError, KeyError) as exc:
        raise CertificateError(f"malformed {kind} payload: {exc}") from exc
    return Verification(not problems, problems)


# mutation testing ---------------------------------------------------------------

def _poly_slots(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k in _TEXT_KEYS:
                continue
            yield from _poly_slots(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _poly_slots(v, path + (i,))
    elif isinstance(obj, str):
        yield path


def bump_coefficient(text: str, rng: random.Random) -> str:
    """Add 1 to one coefficient (a new constant term if the polynomial is 0)."""
    terms = parse_terms(text, "xt")
    key = rng.choice(sorted(terms)) if terms else (0, 0)
    terms[key] = terms.get(key, 0) + 1
    return format_terms({k: c for k, c in terms.items() if c})


def mutate(env: dict, rng: random.Random) -> tuple[dict, tuple]:
    """Copy of ``env`` with one polynomial coefficient in the payload bumped by 1."""
    out = copy.deepcopy(env)
    slots = list(_poly_slots(out["payload"]))
    if not slots:
        raise ValueError("certificate has no polynomial to mutate")
    path = rng.choice(slots)
    holder = out["payload"]
    for step in path[:-1]:
        holder = holder[step]
    holder[path[-1]] = bump_coefficient(holder[path[-1]], rng)
    return out, path


# random certificates ------------------------------------------------------------

def sample_certificate(kind: str, rng: random.Random) -> dict:
    """One random valid certificate of the given kind."""
    n = rng.choice([4, 5, 6, 8, 9, 12])
    k = rng.choice([2, 3])
    rn, qs = LaurentRing(n), QuotientRing(n)
    if kind == "factorization":
        e = sampling.random_sl_matrix(rng, k, n)
        return make_factorization(e, factor_det_one(e))
    if kind == "snf":
        p = rng.choice([2, 3, 5])
        while True:
            a = sampling.random_matrix(rng, k, k, p, span=2)
            if not a.det().is_zero():
                return make_snf(a, snf_fp(a))
    if kind == "reduction":
        alpha, b = sampling.random_alpha_instance(rng, n, k)
        return make_reduction(alpha, b, decide_scalar_stable_equiv(alpha, b))
    if kind == "chain-map":
        r = realize_unit(n, sampling.random_unit_mod(rng, n))
        return make_chain_map(r.witness, r.w, r.v)
    if kind == "ext3":
        alpha1 = sampling.random_group_elem(rng, n)
        alpha2 = GroupRingElem.from_laurent(sampling.random_laurent(rng, 0, 2), n)
        c = cocycle_from_alphas(alpha1, alpha2)
        return make_ext3(*c, ext3_class(*c).value)
    if kind == "iso-witness":
        # C = +-t^j over R, D = a unit of S_Z found by search
        a = Matrix([[sampling.random_unit_rn(rng, n)]], rn)
        c = Matrix([[Laurent.monomial(rng.choice((1, -1)), rng.randint(-3, 3))]], LaurentRing(0))
        hit = find_s_unit(n, frozenset({sampling.random_unit_mod(rng, n)})) or (qs.one(), qs.one())
        d, d_inv = Matrix([[hit[0]]], qs), Matrix([[hit[1]]], qs)
        b = c.map(lambda v: v.reduce(n), rn) * a * d.map(eps_hat_S, rn)
        return make_iso_witness(a, b, IsoWitness(c, d, d_inv))
    if kind == "swan":
        while True:
            sn = rng.choice([5, 7, 8, 9])
            r = sampling.random_unit_mod(rng, sn)
            hit = find_s_unit(sn, frozenset({r}))
            if hit is not None:
                sq = QuotientRing(sn)
                return make_swan(
                    sn, Matrix([[Laurent.const(r, sn)]], LaurentRing(sn)),
                    Matrix([[hit[0]]], sq), Matrix([[hit[1]]], sq),
                )
    if kind == "ideals":
        return make_ideals(rng.randint(2, 30))
    raise CertificateError(f"unknown certificate kind {kind!r}")
