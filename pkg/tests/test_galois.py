import itertools
import random

import pytest

from lrctower import galois
from lrctower.errors import (
    DivideByZero,
    NoSquareRoot,
    NotAdmissible,
    NotDivisor,
    NotPrime,
    SpecMismatch,
    TooLarge,
)


def idx_set(elements):
    return {e.index for e in elements}


def test_prime_field_is_plain_modular_arithmetic():
    f2 = galois.field_create(2, 1)
    assert f2.modulus == (0, 1)
    assert (f2.one() + f2.one()).is_zero()


def test_gf9_modulus_matches_enumeration_oracle():
    # oracle: first monic quadratic over Z_3 without a root, coefficients
    # enumerated low-degree-first
    def has_root(c0, c1):
        return any((x * x + c1 * x + c0) % 3 == 0 for x in range(3))

    expected = next(
        (c0, c1, 1)
        for c0, c1 in itertools.product(range(3), repeat=2)
        if not has_root(c0, c1)
    )
    f9 = galois.field_create(3, 2)
    assert f9.modulus == expected
    assert f9.modulus == (1, 0, 1)  # x^2 + 1, so x^2 = -1


def test_field_create_rejects_composite_characteristic():
    with pytest.raises(NotPrime):
        galois.field_create(4, 1)


def test_field_create_size_guard():
    with pytest.raises(TooLarge):
        galois.field_create(2, 21)


def test_field_create_is_deterministic():
    a = galois.field_create(5, 4)
    b = galois.field_create(5, 4)
    assert a.modulus == b.modulus
    assert a is b  # cached


def test_moduli_are_irreducible_by_exhaustive_factor_scan():
    for p, w in [(2, 4), (3, 3), (5, 2), (7, 2)]:
        f = galois.field_create(p, w)
        # no monic factor of degree 1..w-1 divides the modulus
        for d in range(1, w):
            for tail in itertools.product(range(p), repeat=d):
                den = list(tail) + [1]
                assert any(galois._poly_mod(list(f.modulus), den, p))


@pytest.mark.parametrize("p,w", [(2, 2), (3, 2), (2, 4), (5, 2), (2, 6)])
def test_field_axioms_on_random_triples(p, w):
    f = galois.field_create(p, w)
    rng = random.Random(1234 + f.q)
    elems = list(f.elements())
    for _ in range(10_000):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + (-a)).is_zero()
        if not a.is_zero():
            assert a * a.inverse() == f.one()


def test_additive_and_multiplicative_orders():
    f9 = galois.field_create(3, 2)
    for x in f9.elements():
        assert (x + (-x)).is_zero()
        if not x.is_zero():
            assert x ** (f9.q - 1) == f9.one()


def _euclid_inverse(f, a):
    # extended Euclid on polynomials over Z_p, independent of pow-based inverse
    p = f.p

    def degree(poly):
        for i in range(len(poly) - 1, -1, -1):
            if poly[i] % p:
                return i
        return -1

    def polydiv(num, den):
        num = [c % p for c in num]
        dd = degree(den)
        lead_inv = pow(den[dd], p - 2, p)
        quot = [0] * (max(len(num) - dd, 1))
        for i in range(degree(num), dd - 1, -1):
            c = num[i] % p
            if c:
                factor = (c * lead_inv) % p
                quot[i - dd] = factor
                for j in range(dd + 1):
                    num[i - dd + j] = (num[i - dd + j] - factor * den[j]) % p
        return quot, num

    r0, r1 = list(f.modulus), list(a.coeffs)
    t0, t1 = [0], [1]
    while degree(r1) > 0:
        q, rem = polydiv(r0, r1)
        r0, r1 = r1, rem
        # t0 - q*t1
        prod = [0] * (len(q) + len(t1))
        for i, qc in enumerate(q):
            for j, tc in enumerate(t1):
                prod[i + j] = (prod[i + j] + qc * tc) % p
        new_t = [(x - y) % p for x, y in zip(t0 + [0] * len(prod), prod + [0] * len(t0))]
        t0, t1 = t1, new_t
    c_inv = pow(r1[degree(r1)], p - 2, p)
    coeffs = [(c_inv * t) % p for t in t1]
    coeffs = (coeffs + [0] * f.w)[: f.w]
    return f.element(coeffs)


def test_inverse_against_extended_euclid_oracle():
    f9 = galois.field_create(3, 2)
    rng = random.Random(99)
    elems = [e for e in f9.elements() if not e.is_zero()]
    for _ in range(1000):
        a = rng.choice(elems)
        assert a.inverse() == _euclid_inverse(f9, a)
        assert a.inverse() * a == f9.one()


def test_inverse_of_zero_raises():
    f9 = galois.field_create(3, 2)
    with pytest.raises(DivideByZero):
        f9.zero().inverse()


def test_mixed_field_operands_rejected():
    a = galois.field_create(3, 2).one()
    b = galois.field_create(2, 2).one()
    with pytest.raises(SpecMismatch):
        a + b


def test_field_arith_dispatch():
    f9 = galois.field_create(3, 2)
    x = f9.from_index(5)
    assert galois.field_arith("add", x, galois.field_arith("neg", x)).is_zero()
    assert galois.field_arith("pow", x, f9.q - 1) == f9.one()
    assert galois.field_arith("mul", galois.field_arith("inv", x), x) == f9.one()
    assert galois.field_arith("sub", x, x).is_zero()


def test_artin_schreier_kernel_small_fields():
    f4 = galois.field_create(2, 2)
    assert idx_set(galois.artin_schreier_kernel(f4)) == {0, 1}

    f9 = galois.field_create(3, 2)
    kernel = galois.artin_schreier_kernel(f9)
    # exhaustive oracle
    expected = [a for a in f9.elements() if (a**3 + a).is_zero()]
    assert kernel == expected
    assert len(kernel) == 3
    beta = f9.element([0, 1])
    assert idx_set(kernel) == {0, beta.index, (-beta).index}
    assert beta * beta == -f9.one()

    f16 = galois.field_create(2, 4)
    assert len(galois.artin_schreier_kernel(f16)) == 4


@pytest.mark.parametrize("p,w", [(2, 2), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6)])
def test_kernel_size_is_ell(p, w):
    f = galois.field_create(p, w)
    assert len(galois.artin_schreier_kernel(f)) == f.ell


def test_kernel_requires_even_degree():
    with pytest.raises(NoSquareRoot):
        galois.artin_schreier_kernel(galois.field_create(3, 3))


def test_unit_subgroup_examples():
    f9 = galois.field_create(3, 2)
    assert idx_set(galois.unit_subgroup(f9, 2)) == {1, 2}  # {1, -1}
    assert idx_set(galois.unit_subgroup(f9, 1)) == {1}

    f64 = galois.field_create(2, 6)
    h = galois.unit_subgroup(f64, 7)
    assert len(h) == 7
    for x in h:
        assert x**7 == f64.one()
        assert x**8 == x  # inside F_8


def test_unit_subgroup_rejects_non_divisor():
    f9 = galois.field_create(3, 2)
    with pytest.raises(NotDivisor):
        galois.unit_subgroup(f9, 3)


def test_subgroup_exponent():
    assert galois.subgroup_exponent(1, 2) == 1
    assert galois.subgroup_exponent(3, 2) == 2  # 3 | 2^2 - 1
    assert galois.subgroup_exponent(7, 2) == 3
    assert galois.subgroup_exponent(2, 5) == 1


def test_repair_subspace_examples():
    f9 = galois.field_create(3, 2)
    w_full = galois.repair_subspace(f9, 1, 1)
    assert w_full == galois.artin_schreier_kernel(f9)

    assert idx_set(galois.repair_subspace(f9, 2, 0)) == {0}

    f16 = galois.field_create(2, 4)
    w = galois.repair_subspace(f16, 1, 2)
    assert len(w) == 4
    assert set(w) == set(galois.artin_schreier_kernel(f16))


def test_repair_subspace_closure():
    # closed under addition and multiplication by the unit subgroup
    for (p, w, u, v) in [(3, 2, 2, 1), (2, 4, 3, 2), (2, 6, 7, 3), (5, 2, 4, 1)]:
        f = galois.field_create(p, w)
        W = set(galois.repair_subspace(f, u, v))
        H = galois.unit_subgroup(f, u)
        for a in W:
            for b in W:
                assert a + b in W
            for c in H:
                assert c * a in W


def test_repair_subspace_rejects_bad_params():
    f9 = galois.field_create(3, 2)
    with pytest.raises(NotAdmissible):
        galois.repair_subspace(f9, 2, 2)  # v exceeds w/2
    f64 = galois.field_create(2, 6)
    with pytest.raises(NotAdmissible):
        galois.repair_subspace(f64, 7, 1)  # 7 does not divide 2^1 - 1


def test_serialization_round_trip():
    f9 = galois.field_create(3, 2)
    again = galois.field_from_json(f9.to_json())
    assert again is f9
    x = f9.from_index(7)
    assert f9.element(x.to_json()) == x
    with pytest.raises(SpecMismatch):
        galois.field_from_json({"p": 3, "w": 2, "modulus": [2, 0, 1]})


def test_canonical_index_round_trip():
    f = galois.field_create(5, 2)
    for i in range(f.q):
        assert f.from_index(i).index == i
