"""Exact arithmetic in GF(p^w) with a deterministic modulus.

Elements are coefficient vectors over Z_p in the polynomial basis, low
degree first.  The modulus is the lexicographically smallest monic
irreducible polynomial of degree w over Z_p (coefficients compared low
degree first), so two runs always build the same field.

For even w the field carries ell = p^(w/2) = sqrt(q) and the subfield
F_ell is characterized as the fixed set of the ell-power map.  On top of
that live the additive kernel {a : a^ell + a = 0}, the unit subgroups
H <= F_ell^* and the repair subspaces W used by the tower constructions.
"""

from __future__ import annotations

import itertools
from math import gcd
from typing import Iterator, Sequence

from .errors import (
    DivideByZero,
    NoSquareRoot,
    NotAdmissible,
    NotDivisor,
    NotPrime,
    SpecMismatch,
    TooLarge,
)

SIZE_GUARD = 1 << 20  # largest field order for exhaustive routines

_FIELD_CACHE: dict[tuple[int, int], "FieldSpec"] = {}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num by monic den, coefficients low degree first."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - c * dj) % p
    return [c % p for c in num[:dd]] or [0]


def _irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by all monic polynomials of degree <= deg/2."""
    w = len(poly) - 1
    if w == 1:
        return True
    for d in range(1, w // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            den = list(tail) + [1]
            if not any(_poly_mod(list(poly), den, p)):
                return False
    return True


class FieldSpec:
    """The finite field GF(p^w); construct via :func:`field_create`."""

    def __init__(self, p: int, w: int, modulus: tuple[int, ...]):
        self.p = p
        self.w = w
        self.q = p**w
        self.modulus = modulus
        self.ell = p ** (w // 2) if w % 2 == 0 else None
        # x^w .. x^(2w-2) reduced mod modulus, for products of two elements
        self._xpow: list[tuple[int, ...]] = []
        power = [0] * w
        power[-1] = 1  # x^(w-1)
        for _ in range(w - 1 if w > 1 else 0):
            shifted = [0] + power
            reduced = _poly_mod(shifted, modulus, p)
            reduced += [0] * (w - len(reduced))
            self._xpow.append(tuple(reduced))
            power = reduced
        self._zero = FieldElement(self, (0,) * w)
        self._one = FieldElement(self, tuple([1] + [0] * (w - 1)))
        self._add_table = None
        self._mul_table = None
        self._inv_table = None

    # -- element access ------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) != self.w:
            raise SpecMismatch(
                f"expected {self.w} coefficients, got {len(coeffs)}"
            )
        return FieldElement(self, tuple(c % self.p for c in coeffs))

    def from_index(self, i: int) -> "FieldElement":
        """Element with canonical index i = sum coeffs[k] * p^k."""
        if not 0 <= i < self.q:
            raise SpecMismatch(f"index {i} outside [0, {self.q})")
        coeffs = []
        for _ in range(self.w):
            coeffs.append(i % self.p)
            i //= self.p
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return self._zero

    def one(self) -> "FieldElement":
        return self._one

    def scalar(self, c: int) -> "FieldElement":
        return FieldElement(self, tuple([c % self.p] + [0] * (self.w - 1)))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in canonical index order."""
        for i in range(self.q):
            yield self.from_index(i)

    # -- lazy lookup tables (used by the brute-force code scans) --------

    def tables(self):
        """(add, mul, inv) numpy index tables; built lazily, q <= 4096 only."""
        if self._add_table is None:
            if self.q > 4096:
                raise TooLarge(f"lookup tables limited to q <= 4096, got q={self.q}")
            import numpy as np

            q = self.q
            add = np.empty((q, q), dtype=np.int32)
            mul = np.empty((q, q), dtype=np.int32)
            inv = np.zeros(q, dtype=np.int32)
            elems = list(self.elements())
            for i, a in enumerate(elems):
                for j in range(i, q):
                    b = elems[j]
                    s = (a + b).index
                    m = (a * b).index
                    add[i, j] = add[j, i] = s
                    mul[i, j] = mul[j, i] = m
                if i:
                    inv[i] = a.inverse().index
            self._add_table = add
            self._mul_table = mul
            self._inv_table = inv
        return self._add_table, self._mul_table, self._inv_table

    # -- misc ------------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "w": self.w, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.w, self.modulus) == (other.p, other.w, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.w, self.modulus))

    def __repr__(self):
        return f"FieldSpec(GF({self.p}^{self.w}), modulus={list(self.modulus)})"


class FieldElement:
    """Immutable element of a :class:`FieldSpec`, a length-w coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def index(self) -> int:
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.field.p + c
        return i

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "FieldElement"):
        if self.field is not other.field and self.field != other.field:
            raise SpecMismatch("operands from different fields")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field,
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field,
            tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        self._check(other)
        f = self.field
        p, w = f.p, f.w
        if w == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % p,))
        conv = [0] * (2 * w - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = [c % p for c in conv[:w]]
        for k, c in enumerate(conv[w:]):
            c %= p
            if c:
                red = f._xpow[k]
                for j in range(w):
                    out[j] = (out[j] + c * red[j]) % p
        return FieldElement(f, tuple(out))

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivideByZero("inverse of zero")
        return self ** (self.field.q - 2)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        """Canonical order: by index."""
        self._check(other)
        return self.index < other.index

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self):
        return f"<{self.index}:GF({self.field.p}^{self.field.w})>"


def field_create(p: int, w: int) -> FieldSpec:
    """Build (or fetch the cached) GF(p^w) with the deterministic modulus.

    The modulus is the first monic irreducible degree-w polynomial in the
    lexicographic order on coefficient tuples (c0, c1, ..., c_{w-1}); for
    w = 1 this is X itself, i.e. plain Z_p arithmetic.
    """
    if w < 1:
        raise NotAdmissible(f"exponent must be >= 1, got {w}")
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**w > SIZE_GUARD:
        raise TooLarge(f"p^w = {p**w} exceeds the guard {SIZE_GUARD}")
    key = (p, w)
    if key not in _FIELD_CACHE:
        modulus = None
        for tail in itertools.product(range(p), repeat=w):
            cand = list(tail) + [1]
            if _irreducible(cand, p):
                modulus = tuple(cand)
                break
        assert modulus is not None  # degree-w irreducibles always exist
        _FIELD_CACHE[key] = FieldSpec(p, w, modulus)
    return _FIELD_CACHE[key]


def field_from_json(data: dict) -> FieldSpec:
    """Rebuild a field from {p, w, modulus}, enforcing the deterministic modulus."""
    spec = field_create(int(data["p"]), int(data["w"]))
    if list(spec.modulus) != [int(c) for c in data["modulus"]]:
        raise SpecMismatch(
            f"serialized modulus {data['modulus']} differs from the "
            f"deterministic one {list(spec.modulus)}"
        )
    return spec


_ARITH_OPS = {"add", "sub", "mul", "inv", "pow", "neg"}


def field_arith(op: str, a: FieldElement, b=None) -> FieldElement:
    """Dispatch one field operation; `b` is an element or, for pow, an int."""
    if op not in _ARITH_OPS:
        raise ValueError(f"unknown op {op!r}")
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    return a * b


def _require_square(spec: FieldSpec) -> int:
    if spec.ell is None:
        raise NoSquareRoot(f"GF({spec.p}^{spec.w}) has odd degree, no ell")
    return spec.ell


def artin_schreier_kernel(spec: FieldSpec) -> list[FieldElement]:
    """All a in GF(q) with a^ell + a = 0, in canonical order (size ell)."""
    ell = _require_square(spec)
    kernel = [a for a in spec.elements() if (a**ell + a).is_zero()]
    if len(kernel) != ell:
        raise SpecMismatch(
            f"kernel size {len(kernel)} != ell = {ell}"
        )  # pragma: no cover - structural
    return kernel


def unit_subgroup(spec: FieldSpec, u: int) -> list[FieldElement]:
    """The unique subgroup of F_ell^* of order u, as a canonical-order list."""
    ell = _require_square(spec)
    if u < 1 or (ell - 1) % u != 0:
        raise NotDivisor(f"u = {u} does not divide ell - 1 = {ell - 1}")
    group = [
        x
        for x in spec.elements()
        if not x.is_zero() and (x**u) == spec.one() and x**ell == x
    ]
    if len(group) != u:  # pragma: no cover - structural
        raise SpecMismatch(f"subgroup size {len(group)} != u = {u}")
    return group


def subgroup_exponent(u: int, p: int) -> int:
    """h = min{t > 0 : u | p^t - 1}; the field F_p(H) is F_{p^h}."""
    if u == 1:
        return 1
    if gcd(u, p) != 1:
        raise NotDivisor(f"u = {u} shares a factor with p = {p}")
    t, pw = 1, p % u
    while pw != 1:
        t += 1
        pw = (pw * p) % u
    return t


def check_admissible(spec: FieldSpec, u: int, v: int) -> None:
    """Raise NotAdmissible unless (u, v) satisfies the subgroup conditions."""
    ell = _require_square(spec)
    wp = spec.w // 2
    if not 0 <= v <= wp:
        raise NotAdmissible(f"v = {v} outside [0, {wp}]")
    if u < 1:
        raise NotAdmissible(f"u must be positive, got {u}")
    # v = 0 convention: gcd(p^0 - 1, ell - 1) = gcd(0, ell - 1) = ell - 1
    g = ell - 1 if v == 0 else gcd(spec.p**v - 1, ell - 1)
    if g % u != 0:
        raise NotAdmissible(
            f"u = {u} does not divide gcd(p^v - 1, ell - 1) = {g}"
        )


def repair_subspace(spec: FieldSpec, u: int, v: int) -> list[FieldElement]:
    """The F_{p^h}-subspace W of the additive kernel with |W| = p^v.

    Deterministic: span of the first v/h independent kernel elements in
    canonical order, where h = subgroup_exponent(u, p).
    """
    check_admissible(spec, u, v)
    p = spec.p
    h = subgroup_exponent(u, p)
    if v % h != 0:
        raise NotAdmissible(f"h = {h} does not divide v = {v}")
    dim = v // h
    kernel = artin_schreier_kernel(spec)
    if dim == 0:
        return [spec.zero()]
    ph = p**h
    subfield = [x for x in spec.elements() if x**ph == x]
    span = {spec.zero()}
    basis = 0
    for cand in kernel:
        if cand in span:
            continue
        span = {s + c * cand for s in span for c in subfield}
        basis += 1
        if basis == dim:
            break
    if len(span) != p**v:  # pragma: no cover - structural
        raise NotAdmissible(f"|W| = {len(span)} != p^v = {p ** v}")
    return sorted(span)
