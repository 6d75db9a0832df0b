import cmath
import random

import pytest

from d2kit.complexes import build_complex, standard_presentation
from d2kit.matlin import Matrix, direct_sum_identity
from d2kit.modclass import (
    IsoWitness,
    Obstructed,
    Reduced,
    build_m_module,
    build_swan_module,
    check_reduced,
    decide_scalar_stable_equiv,
    ext1_class,
    find_s_unit,
    pi2_dual_module,
    s_unit_inverse,
    stable_witness_pad,
    verify_iso_witness,
    verify_swan_freeness_witness,
)
from d2kit.rings import (
    GroupRing,
    GroupRingElem,
    Laurent,
    LaurentRing,
    QuotientRing,
    SElem,
    augment_x,
    divide_by_x_minus_1,
)
from d2kit.sampling import random_alpha_instance, random_group_elem, random_matrix, random_unit_rn


def L(text, m=0):
    return Laurent.parse(text, m)


def Rn(rows, n):
    return Matrix.from_strings(rows, LaurentRing(n))


# M(A)

def test_m_of_t_minus_1_is_the_pi2_dual():
    m = build_m_module(Matrix.from_strings([["t-1"]], LaurentRing(0)), n=5)
    assert m.gen_matrix.to_strings() == [["t-1", "x^4+x^3+x^2+x+1"], ["x-1", "0"]]
    assert m.check_invariants() == []
    # with the lift 1-t the generator matrix is the standard d2 verbatim
    assert pi2_dual_module(5).gen_matrix == build_complex(standard_presentation(5)).d2


def test_canonical_lift_over_rn():
    m = build_m_module(Rn([["t-1"]], 5))
    assert m.A_lift.to_strings() == [["t+4"]]
    assert m.A_class == Rn([["t-1"]], 5)
    assert m.check_invariants() == []


def test_free_and_zero_cases():
    m = build_m_module(Matrix.identity(2, LaurentRing(4)))
    assert m.gen_matrix.to_strings() == [
        ["1", "0", "x^3+x^2+x+1", "0"],
        ["0", "1", "0", "x^3+x^2+x+1"],
        ["x-1", "0", "0", "0"],
        ["0", "x-1", "0", "0"],
    ]
    z = build_m_module(Rn([["0"]], 3))
    assert z.gen_matrix.to_strings() == [["0", "x^2+x+1"], ["x-1", "0"]]


def test_m_module_invariants_random():
    rng = random.Random(30)
    for _ in range(60):
        n = rng.randint(2, 12)
        k = rng.randint(1, 3)
        m = build_m_module(random_matrix(rng, k, k, n))
        assert m.check_invariants() == []
        # class depends only on the lift mod n
        shifted = m.A_lift.map(lambda v: v + GroupRingElem.const(n, n), GroupRing(n))
        assert build_m_module(shifted).A_class == m.A_class


def test_check_invariants_catches_tampering():
    m = build_m_module(Rn([["t+2"]], 5))
    rows = m.gen_matrix.copy_rows()
    rows[1][0] = rows[1][0] + 1
    bad = type(m)(m.n, m.k, m.A_lift, m.A_class, Matrix._raw(rows, GroupRing(5)))
    assert bad.check_invariants()


# Ext^1 classes

def test_ext1_examples():
    qs = QuotientRing(4)
    f = Matrix.from_strings([["x*t-t", "x^2-1"], ["0", "3*x-3"]], qs)
    assert ext1_class(f).is_zero()
    g = Matrix.from_strings([["t-1", "0"], ["0", "t-1"]], qs)
    assert ext1_class(g) == Rn([["t-1", "0"], ["0", "t-1"]], 4)


def test_ext1_additive_and_kernel():
    rng = random.Random(31)
    for _ in range(100):
        n = rng.randint(2, 8)
        qs = QuotientRing(n)
        f = Matrix([[SElem.from_group(random_group_elem(rng, n)) for _ in range(2)] for _ in range(2)], qs)
        g = Matrix([[SElem.from_group(random_group_elem(rng, n)) for _ in range(2)] for _ in range(2)], qs)
        assert ext1_class(f + g) == ext1_class(f) + ext1_class(g)
        # kernel: eps_hat(s) = 0 iff lift - q*N is divisible by (x-1) for q = augment_x(lift)/n
        for row in f.rows:
            for s in row:
                lift = s.lift()
                ax = augment_x(lift)
                zero = ext1_class(Matrix([[s]], qs)).is_zero()
                assert zero == all(c % n == 0 for c in ax.terms.values())
                if zero:
                    q = GroupRingElem.from_laurent(Laurent({j: c // n for j, c in ax.terms.items()}, 0), n)
                    rest = lift - q * GroupRingElem.norm(n)
                    assert divide_by_x_minus_1(rest) * (GroupRingElem.x(n) - 1) == rest


# isomorphism witnesses

def _witness(c_rows, d_rows, n):
    return IsoWitness(
        Matrix.from_strings(c_rows, LaurentRing(0)),
        Matrix.from_strings(d_rows, QuotientRing(n)),
    )


def test_iso_witness_examples():
    n = 7
    a = Rn([["t-1"]], n)
    assert verify_iso_witness(a, a, _witness([["1"]], [["1"]], n)).ok
    b = Rn([["t-1"]], n) * Rn([["-t^3"]], n)
    assert verify_iso_witness(a, b, _witness([["-t^3"]], [["1"]], n)).ok
    rep = verify_iso_witness(Rn([["1"]], n), Rn([["t-1"]], n), _witness([["1"]], [["1"]], n))
    assert not rep.ok and rep.failed == ["CAD != B"]


def test_iso_witness_rejects_non_units():
    n = 5
    a = Rn([["1"]], n)
    rep = verify_iso_witness(a, Rn([["2"]], n), _witness([["2"]], [["1"]], n))
    assert not rep.ok and any("C_lift" in f for f in rep.failed)
    rep = verify_iso_witness(a, Rn([["t-1"]], n), _witness([["1"]], [["t-1"]], n))
    assert any("eps_hat_S" in f for f in rep.failed)


def test_stable_pad():
    a = Rn([["t-1"]], 5)
    assert stable_witness_pad(a, 0) == a
    assert stable_witness_pad(a, 2) == Rn([["t-1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], 5)
    b = random_matrix(random.Random(3), 2, 2, 6)
    assert stable_witness_pad(b, 3).det() == b.det()


# scalar stable equivalence

def test_decide_trivial():
    alpha = L("1+2*t", 4)
    b = direct_sum_identity(Matrix([[alpha]], LaurentRing(4)), 2)
    v = decide_scalar_stable_equiv(alpha, b)
    assert isinstance(v, Reduced) and len(v.left) == 0 and len(v.right) == 0


@pytest.mark.parametrize("n", [4, 6, 9])
def test_decide_constructed(n):
    rng = random.Random(40 + n)
    for _ in range(15):
        alpha, b = random_alpha_instance(rng, n, rng.choice([2, 3]))
        v = decide_scalar_stable_equiv(alpha, b)
        assert isinstance(v, Reduced)
        assert check_reduced(alpha, b, v) == []


def test_decide_obstructed():
    v = decide_scalar_stable_equiv(L("1", 5), Rn([["t-1"]], 5))
    assert isinstance(v, Obstructed) and v.det == L("t-1", 5)
    b = Rn([["1+t", "0"], ["0", "1+t"]], 4)
    v = decide_scalar_stable_equiv(b.det(), b)
    assert isinstance(v, Obstructed) and "mod 2" in v.reason


def test_decide_with_normalizer():
    alpha = L("1", 5)
    b = Rn([["2*t^3"]], 5)
    v = decide_scalar_stable_equiv(alpha, b)
    assert isinstance(v, Reduced)
    assert v.normalizer is not None
    assert check_reduced(alpha, b, v) == []


# S_Z units and Swan modules

def _cyclotomic_norm(s: SElem) -> complex:
    # for prime n, S_Z = Z[zeta_n] and the field norm is the product over the nontrivial roots
    n = s.n
    out = 1
    for k in range(1, n):
        z = cmath.exp(2j * cmath.pi * k / n)
        out *= sum(c * z**a for (a, _), c in s.terms.items())
    return out


def test_s_unit_search_against_norm_oracle():
    # a unit of Z[C_p]/(N) = Z[zeta_p] has norm +-1; check both directions on a box
    rng = random.Random(50)
    p = 5
    fixed = [SElem.parse(t, p) for t in ("1+x", "-x^2-x-1", "2", "x-1", "x^3")]
    units = 0
    for s in fixed + [SElem(p, {(i, 0): rng.randint(-3, 3) for i in range(p - 1)}) for _ in range(300)]:
        if s.is_zero():
            continue
        norm = _cyclotomic_norm(s)
        unit = abs(abs(norm.real) - 1) < 1e-6 and abs(norm.imag) < 1e-6
        inv = s_unit_inverse(s)
        assert (inv is not None) == unit
        if inv is not None:
            units += 1
            assert s * inv == SElem.const(p, 1)
    assert units >= 3


def test_find_s_unit():
    s, s_inv = find_s_unit(5, frozenset({2}))
    assert sum(s.terms.values()) % 5 == 2
    assert s * s_inv == SElem.const(5, 1)
    assert find_s_unit(5, frozenset({2}), span=0, box=4) is None


def test_swan_free_examples():
    m = build_swan_module(5, 1, Rn([["1"]], 5))
    assert m.check_invariants() == []
    assert verify_swan_freeness_witness(m, Matrix([[SElem.const(5, 1)]], QuotientRing(5))).ok
    m2 = build_swan_module(5, 2, Matrix.identity(2, LaurentRing(5)))
    assert verify_swan_freeness_witness(m2, Matrix.identity(2, QuotientRing(5))).ok
    neg = build_swan_module(5, 1, Rn([["-1"]], 5))
    assert verify_swan_freeness_witness(neg, Matrix([[L("-1")]], LaurentRing(0))).ok


def test_swan_layout():
    m = build_swan_module(5, 1, Rn([["2"]], 5))
    assert m.gen_matrix.shape == (6, 2)
    assert m.gen_matrix.to_strings()[0] == ["2", "x^4+x^3+x^2+x+1"]
    assert m.gen_matrix.to_strings()[2] == ["x-1", "0"]
    assert m.check_invariants() == []


def test_swan_two_mod_five():
    m = build_swan_module(5, 1, Rn([["2"]], 5))
    s, s_inv = find_s_unit(5, frozenset({2}), span=3, box=3)
    qs = QuotientRing(5)
    assert verify_swan_freeness_witness(m, Matrix([[s]], qs), Matrix([[s_inv]], qs)).ok
    assert verify_swan_freeness_witness(m, Matrix([[s]], qs)).ok
    bad = verify_swan_freeness_witness(m, Matrix([[SElem.const(5, 2)]], qs))
    assert not bad.ok and "unit" in bad.failed[0]
    wrong = verify_swan_freeness_witness(m, Matrix([[SElem.const(5, 1)]], qs))
    assert not wrong.ok and "eps" in wrong.failed[0]


def test_swan_rejects_t():
    m = build_swan_module(5, 1, Rn([["1"]], 5))
    rep = verify_swan_freeness_witness(m, Matrix([[SElem.parse("t", 5)]], QuotientRing(5)))
    assert not rep.ok


def test_random_units_are_iso_witnesses():
    rng = random.Random(52)
    for _ in range(20):
        n = rng.choice([5, 7, 8])
        a = Matrix([[random_unit_rn(rng, n)]], LaurentRing(n))
        hit = find_s_unit(n, frozenset({rng.choice([1, 2, 3]) % n}))
        if hit is None:
            continue
        d = Matrix([[hit[0]]], QuotientRing(n))
        c = Matrix([[L("-t^2")]], LaurentRing(0))
        b = c.map(lambda v: v.reduce(n), LaurentRing(n)) * a * ext1_class(d)
        assert verify_iso_witness(a, b, IsoWitness(c, d)).ok
