"""Dense univariate polynomials over a finite field, with factorization.

Coefficients are stored as packed field values, little-endian, trailing zeros
trimmed.  Factorization is square-free split + distinct-degree + equal-degree
(Cantor-Zassenhaus), deterministic for a given seed.
"""

from __future__ import annotations

import random
from typing import Iterable

from .errors import ValidationError
from .field import FFElement, FiniteField, embedding, prime_factors


class Poly:
    """Polynomial over a FiniteField; immutable by convention."""

    __slots__ = ("field", "c")

    def __init__(self, field: FiniteField, coeffs: Iterable):
        packed = []
        for x in coeffs:
            if isinstance(x, FFElement):
                if x.field != field:
                    raise ValueError("coefficient from a different field")
                packed.append(x.val)
            else:
                packed.append(int(x) % field.p)
        while packed and packed[-1] == 0:
            packed.pop()
        self.field = field
        self.c = tuple(packed)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_packed(cls, field: FiniteField, packed: Iterable[int]) -> "Poly":
        p = cls.__new__(cls)
        vals = list(packed)
        while vals and vals[-1] == 0:
            vals.pop()
        p.field = field
        p.c = tuple(int(v) for v in vals)
        return p

    @classmethod
    def zero(cls, field: FiniteField) -> "Poly":
        return cls.from_packed(field, [])

    @classmethod
    def one(cls, field: FiniteField) -> "Poly":
        return cls.from_packed(field, [1])

    @classmethod
    def x(cls, field: FiniteField) -> "Poly":
        return cls.from_packed(field, [0, 1])

    # -- basic structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def coeff(self, i: int) -> int:
        return self.c[i] if i < len(self.c) else 0

    def coeff_element(self, i: int) -> FFElement:
        return FFElement(self.field, self.coeff(i))

    def lead(self) -> int:
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.c))

    def sort_key(self):
        return (self.degree, tuple(self.field.sort_key(v) for v in self.c))

    def __repr__(self):
        if not self.c:
            return "0"
        F = self.field
        parts = []
        for i in range(self.degree, -1, -1):
            v = self.coeff(i)
            if v == 0:
                continue
            if i == 0:
                parts.append(str(list(F.coeffs(v))) if F.degree > 1 else str(v))
            else:
                t = "t" if i == 1 else f"t^{i}"
                if v == 1:
                    parts.append(t)
                else:
                    cv = str(list(F.coeffs(v))) if F.degree > 1 else str(v)
                    parts.append(f"{cv}*{t}")
        return " + ".join(parts)

    # -- ring operations ---------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.field != other.field:
            raise ValueError("mixed fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        n = max(len(self.c), len(other.c))
        out = [F.add_s(self.coeff(i), other.coeff(i)) for i in range(n)]
        return Poly.from_packed(F, out)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly.from_packed(F, [F.neg_s(v) for v in self.c])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        if not self.c or not other.c:
            return Poly.zero(F)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        out[i + j] = F.add_s(out[i + j], F.mul_s(a, b))
        return Poly.from_packed(F, out)

    def scale(self, s: int) -> "Poly":
        """Multiply by a packed scalar."""
        F = self.field
        return Poly.from_packed(F, [F.mul_s(s, v) for v in self.c])

    def __divmod__(self, other: "Poly"):
        self._check(other)
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        db = other.degree
        inv_lead = F.inv_s(other.lead())
        quo = [0] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            c = F.mul_s(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            if c:
                quo[shift] = c
                for i, b in enumerate(other.c):
                    rem[shift + i] = F.sub_s(rem[shift + i], F.mul_s(c, b))
            rem.pop()
        return Poly.from_packed(F, quo), Poly.from_packed(F, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero() or self.c[-1] == 1:
            return self
        return self.scale(self.field.inv_s(self.lead()))

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i in range(1, len(self.c)):
            # i acts through the prime field
            out.append(F.mul_s(i % F.p, self.c[i]))
        return Poly.from_packed(F, out)

    def eval_packed(self, a: int) -> int:
        F = self.field
        acc = 0
        for v in reversed(self.c):
            acc = F.add_s(F.mul_s(acc, a), v)
        return acc

    def __call__(self, a) -> FFElement:
        v = a.val if isinstance(a, FFElement) else int(a) % self.field.p
        return FFElement(self.field, self.eval_packed(v))

    def pth_root(self) -> "Poly":
        """For f with f' = 0, the unique g with g^p = f."""
        F = self.field
        p = F.p
        out = []
        for i in range(0, len(self.c), p):
            out.append(F.pth_root_s(self.c[i]))
        return Poly.from_packed(F, out)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(a: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(a.field) % mod
    base = a % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def is_irreducible(f: Poly) -> bool:
    """Rabin's irreducibility test over the coefficient field."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    q = f.field.order
    x = Poly.x(f.field)
    if poly_powmod(x, q**n, f) != x % f:
        return False
    for ell in prime_factors(n):
        h = poly_powmod(x, q ** (n // ell), f) - x
        if poly_gcd(h, f).degree != 0:
            return False
    return True


def _random_poly(field: FiniteField, max_deg: int, rng: random.Random) -> Poly:
    return Poly.from_packed(
        field, [field.random_packed(rng) for _ in range(max_deg + 1)]
    )


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Split a monic squarefree product of degree-d irreducibles."""
    if f.degree == d:
        return [f]
    F = f.field
    q = F.order
    while True:
        r = _random_poly(F, f.degree - 1, rng)
        if q % 2 == 1:
            s = poly_powmod(r, (q**d - 1) // 2, f)
            g = poly_gcd(s - Poly.one(F), f)
        else:
            # char 2: additive trace map of r over GF(2)
            k = F.degree * d
            acc = r % f
            tr = acc
            for _ in range(k - 1):
                acc = poly_powmod(acc, 2, f)
                tr = tr + acc
            g = poly_gcd(tr, f)
        if 0 < g.degree < f.degree:
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic squarefree f into (product of irreducibles of degree d, d)."""
    F = f.field
    q = F.order
    out = []
    x = Poly.x(F)
    h = x % f
    d = 0
    while f.degree > 0:
        d += 1
        if 2 * d > f.degree:
            out.append((f, f.degree))
            break
        h = poly_powmod(h, q, f)
        g = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    return out


def factor_poly(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Full factorization into monic irreducibles with multiplicities.

    The result is sorted canonically; prod(g^m) equals f.monic().  Raises on
    the zero polynomial.
    """
    if f.is_zero():
        raise ValidationError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    factors: dict[Poly, int] = {}
    _factor_into(f.monic(), factors, 1, rng)
    out = sorted(factors.items(), key=lambda t: t[0].sort_key())
    return out


def _factor_into(f: Poly, acc: dict[Poly, int], outer_mult: int, rng: random.Random):
    if f.degree < 1:
        return
    deriv = f.derivative()
    if deriv.is_zero():
        # f = g^p with g obtained by p-th roots of coefficients
        _factor_into(f.pth_root(), acc, outer_mult * f.field.p, rng)
        return
    w = (f // poly_gcd(f, deriv)).monic()  # squarefree part
    for part, d in _distinct_degree(w):
        for g in _equal_degree_split(part, d, rng):
            g = g.monic()
            mult = 0
            while True:
                quo, rem = divmod(f, g)
                if not rem.is_zero():
                    break
                f = quo
                mult += 1
            acc[g] = acc.get(g, 0) + mult * outer_mult
    # what remains has only multiplicities divisible by p
    if f.degree > 0:
        _factor_into(f.pth_root(), acc, outer_mult * f.field.p, rng)


def min_poly_over_subfield(x: FFElement, sub: FiniteField) -> Poly:
    """Monic minimal polynomial over `sub` of an element of a larger field."""
    E = x.field
    if not sub.is_subfield_of(E):
        raise ValidationError(f"{sub!r} is not a subfield of {E!r}")
    emb = embedding(sub, E)
    qsub = sub.order
    orbit = [x.val]
    y = E.pow_s(x.val, qsub)
    while y != x.val:
        orbit.append(y)
        y = E.pow_s(y, qsub)
    # product of (t - o) over the orbit, computed over E
    f = Poly.one(E)
    for o in orbit:
        f = f * Poly.from_packed(E, [E.neg_s(o), 1])
    pulled = []
    for v in f.c:
        s = emb.section_s(v)
        if s is None:
            raise RuntimeError("minimal polynomial coefficient off the subfield")
        pulled.append(s)
    return Poly.from_packed(sub, pulled)
