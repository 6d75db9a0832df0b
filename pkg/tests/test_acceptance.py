"""Acceptance criteria.  Every check is exact; each test prints one PASS/FAIL line."""

import json
import random
from math import gcd

import pytest

from d2kit.certificates import KINDS, mutate, sample_certificate, verify_certificate
from d2kit.complexes import (
    build_complex,
    check_cinf_squared,
    coboundary,
    cocycle_from_alphas,
    ext3_class,
    gv_presentation,
    realize_unit,
    standard_presentation,
    tau,
)
from d2kit.ideals import enumerate_candidates, expand_factorization, factor_xn_minus_1, xn_minus_1
from d2kit.matlin import (
    Matrix,
    check_snf,
    direct_sum_identity,
    divisibility_chain_holds,
    euclid_divide,
    factor_det_one,
    snf_fp,
)
from d2kit.modclass import Obstructed, Reduced, decide_scalar_stable_equiv
from d2kit.rings import GroupRingElem, Laurent, LaurentRing, ModulusDecomp, augment_eps, invert_unit_rn, is_unit_rn
from d2kit.errors import NotAUnit
from d2kit.sampling import (
    random_alpha_instance,
    random_aug_elem,
    random_group_elem,
    random_laurent,
    random_matrix,
    random_nonunit_rn,
    random_presentation,
    random_unit_rn,
    random_word,
)


@pytest.mark.acceptance(1, "elementary factorization round-trip")
def test_c01_factorization(criterion):
    rng = random.Random(1)
    for n in (2, 3, 4, 5, 6, 8, 9, 12):
        for k in (2, 3):
            for _ in range(50):
                e = random_word(rng, k, n, length=rng.randint(0, 12), span=3).evaluate()
                word = factor_det_one(e)
                assert word.evaluate() == e
                assert all(op.matrix(k, e.ring).det().is_one() for op in word.ops)


@pytest.mark.acceptance(2, "realization of every unit w mod n, n <= 12")
def test_c02_realization(criterion):
    cases = 0
    for n in range(2, 13):
        for w in range(1, n):
            if gcd(w, n) != 1:
                continue
            r = realize_unit(n, w)
            assert r.report.ok, (n, w, r.report.details)
            assert r.ext3.value == w % n
            assert augment_eps(r.witness.f3) % n == w % n
            cases += 1
    assert cases == 45


@pytest.mark.acceptance(3, "Ext^3 classifier: coboundaries, known alpha_1, additivity")
def test_c03_ext3(criterion):
    rng = random.Random(3)
    for n in (3, 5, 8, 12):
        for _ in range(100):
            assert ext3_class(*coboundary(random_aug_elem(rng, n), random_aug_elem(rng, n))).value == 0
        for _ in range(100):
            alpha1 = random_group_elem(rng, n)
            alpha2 = GroupRingElem.from_laurent(random_laurent(rng, 0, 2), n)
            assert ext3_class(*cocycle_from_alphas(alpha1, alpha2)).value == augment_eps(alpha1) % n
        for _ in range(100):
            c1 = cocycle_from_alphas(random_group_elem(rng, n), GroupRingElem.from_laurent(random_laurent(rng, 0, 2), n))
            c2 = cocycle_from_alphas(random_group_elem(rng, n), GroupRingElem.from_laurent(random_laurent(rng, 0, 2), n))
            total = ext3_class(c1[0] + c2[0], c1[1] + c2[1]).value
            assert total == (ext3_class(*c1).value + ext3_class(*c2).value) % n


@pytest.mark.acceptance(4, "Fox calculus reproduces the displayed boundary maps")
def test_c04_fox(criterion):
    cx = build_complex(standard_presentation(5))
    assert json.dumps(cx.d2.to_strings()) == '[["-t+1", "x^4+x^3+x^2+x+1"], ["x-1", "0"]]'
    assert json.dumps(cx.d1.to_strings()) == '[["x-1", "t-1"]]'
    gv = build_complex(gv_presentation(5, 2))
    assert json.dumps(gv.d2.to_strings()) == '[["-t+1", "x^4+x^3+x^2+x+1"], ["x^2-1", "0"]]'
    assert json.dumps(gv.d1.to_strings()) == '[["x^2-1", "t-1"]]'
    rng = random.Random(4)
    for _ in range(200):
        c = build_complex(random_presentation(rng, rng.randint(2, 9)))
        assert (c.d1 * c.d2).is_zero()


@pytest.mark.acceptance(5, "scalar stable equivalence: 100 reduced, 20 obstructed")
def test_c05_reduction(criterion):
    rng = random.Random(5)
    for i in range(100):
        n, k = (4, 6, 9)[i % 3], (2, 3)[i % 2]
        alpha, b = random_alpha_instance(rng, n, k)
        v = decide_scalar_stable_equiv(alpha, b)
        assert isinstance(v, Reduced)
        target = direct_sum_identity(Matrix([[alpha]], b.ring), k - 1)
        assert v.left.evaluate() * v.B_new * v.right.evaluate() == target
        if v.normalizer is None:
            assert v.left.evaluate() * b * v.right.evaluate() == target
    for i in range(20):
        n, k = (4, 6, 9)[i % 3], (2, 3)[i % 2]
        if i % 2:
            # det(B) = alpha (t - 1): the ratio is not a unit
            alpha = random_unit_rn(rng, n)
            _, b = random_alpha_instance(rng, n, k, alpha * Laurent.parse("t-1", n))
        else:
            # Diag(1+t, 1+t) mod 2 has Smith form [1+t, 1+t], not [1, det]
            core = Matrix.from_strings([["1+t", "0"], ["0", "1+t"]], LaurentRing(4))
            b = random_word(rng, 2, 4, side="R").apply(random_word(rng, 2, 4, side="L").apply(core))
            alpha = b.det()
        assert isinstance(decide_scalar_stable_equiv(alpha, b), Obstructed)


def _unit_multiple(a: Laurent, b: Laurent) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    q, r = euclid_divide(a, b)
    return r.is_zero() and len(q.terms) == 1


@pytest.mark.acceptance(6, "Smith normal form over F_p[t,t^-1]")
def test_c06_snf(criterion):
    rng = random.Random(6)
    for i in range(200):
        p = (2, 3, 5)[i % 3]
        k = rng.randint(1, 4)
        a = random_matrix(rng, k, k, p, span=2)
        res = snf_fp(a)
        assert check_snf(a, res) == []
        assert divisibility_chain_holds(res.diag)
        prod = Laurent.const(1, p)
        for d in res.diag:
            prod = prod * d
        assert _unit_multiple(prod, a.det())


@pytest.mark.acceptance(7, "unit inversion in Z_n[t,t^-1]")
def test_c07_units(criterion):
    rng = random.Random(7)
    for n in (4, 8, 9, 12):
        d = ModulusDecomp.of(n)
        for _ in range(200):
            u = random_unit_rn(rng, n)
            assert (u * invert_unit_rn(u, d).inverse).is_one()
        for _ in range(50):
            v = random_nonunit_rn(rng, n)
            assert not is_unit_rn(v, d)
            with pytest.raises(NotAUnit):
                invert_unit_rn(v, d)


@pytest.mark.acceptance(8, "candidate maximal ideals and x^n - 1 reconstruction")
def test_c08_ideals(criterion):
    assert {(c.p, c.omega_text) for c in enumerate_candidates(6)} == {
        (2, "x+1"), (2, "x^2+x+1"), (3, "x-1"), (3, "x+1"),
    }
    assert len(enumerate_candidates(6)) == 4
    assert [(c.p, c.omega_text) for c in enumerate_candidates(4)] == [(2, "x+1")]
    for n in range(1, 31):
        for p in (2, 3, 5, 7):
            assert expand_factorization(factor_xn_minus_1(n, p), p) == xn_minus_1(n, p)


@pytest.mark.acceptance(9, "tau identity for n <= 12")
def test_c09_tau(criterion):
    for n in range(2, 13):
        x = GroupRingElem.x(n)
        for v in range(1, n):
            if gcd(v, n) != 1:
                continue
            t = tau(n, v)
            assert (1 - x**v) * t == 1 - x
            assert (augment_eps(t) * v) % n == 1


@pytest.mark.acceptance(10, "certificate soundness: verify passes, 50 mutants per kind rejected")
def test_c10_certificates(criterion):
    rng = random.Random(10)
    for kind in KINDS:
        certs = [sample_certificate(kind, rng) for _ in range(5)]
        for env in certs:
            assert verify_certificate(json.loads(json.dumps(env))).ok
        for i in range(50):
            bad, path = mutate(certs[i % len(certs)], rng)
            assert not verify_certificate(bad).ok, (kind, path)


@pytest.mark.acceptance(11, "C_inf x C_inf smoke check")
def test_c11_cinf(criterion):
    assert check_cinf_squared() is True
