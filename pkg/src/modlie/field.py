"""Exact arithmetic in finite fields GF(p^n) and their tower embeddings.

Fields are created through the cached factory :func:`GF`.  An element of
GF(p^n) is stored *packed* as the integer ``c0 + c1*p + ... + c_{n-1}*p^(n-1)``
encoding its coefficient vector with respect to the power basis of the class
of ``t`` modulo the defining polynomial.  The defining polynomial is the
lexicographically least monic irreducible of the requested degree (coefficient
tuples compared low-degree-first), so construction is reproducible across runs
and platforms without external polynomial tables.

Scalar work goes through :class:`FFElement`; bulk linear algebra uses the
vectorised ndarray methods on :class:`FiniteField`, which operate on int64
arrays of packed values.  Multiplication is table driven (discrete log /
antilog against a fixed multiplicative generator); addition is XOR for p = 2
and digit-wise otherwise.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceededError, ValidationError

DEFAULT_FIELD_CAP = 2**20

# Below this order the antilog table is built by plain iteration; above it a
# baby-step/giant-step batch build keeps the pure-Python work at O(sqrt(q)).
_SEQUENTIAL_EXP_LIMIT = 1 << 12


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m, ascending."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Bootstrap polynomial arithmetic over GF(p).  Coefficient lists are
# little-endian ints reduced mod p; used only to pick defining polynomials,
# before any field tables exist.
# ---------------------------------------------------------------------------

def _pf_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pf_mod(f: list[int], g: list[int], p: int) -> list[int]:
    # g monic
    f = f[:]
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        c = f[-1]
        if c:
            shift = len(f) - 1 - dg
            for i, gi in enumerate(g):
                f[shift + i] = (f[shift + i] - c * gi) % p
        f.pop()
    return _pf_trim(f)


def _pf_mulmod(a: list[int], b: list[int], g: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_mod(out, g, p)


def _pf_powmod(a: list[int], e: int, g: list[int], p: int) -> list[int]:
    result = [1]
    base = _pf_mod(a[:], g, p)
    while e:
        if e & 1:
            result = _pf_mulmod(result, base, g, p)
        base = _pf_mulmod(base, base, g, p)
        e >>= 1
    return result


def _pf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        # make b monic before reducing
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _pf_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _pf_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    f = list(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _pf_powmod(x, p**n, f, p) != _pf_mod(x[:], f, p):
        return False
    for ell in prime_factors(n):
        h = _pf_powmod(x, p ** (n // ell), f, p)
        # h - x must be coprime to f
        diff = h[:] + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        diff = _pf_trim(diff)
        if len(_pf_gcd(diff, f, p)) != 1:
            return False
    return True


def canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over GF(p).

    Coefficient tuples (c0, ..., c_{n-1}) are compared left to right; the
    returned tuple is little-endian of length n + 1 with leading 1.
    """
    if n == 1:
        return (0, 1)
    # c0 = 0 makes t a factor, so the scan starts at c0 = 1.
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=n - 1):
            cand = [c0, *rest, 1]
            if _pf_is_irreducible(cand, p):
                return tuple(cand)
    raise RuntimeError(f"no irreducible of degree {n} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------
# Field type
# ---------------------------------------------------------------------------

class _Tables:
    __slots__ = ("exp", "log", "frob", "proot", "neg")

    def __init__(self, exp, log, frob, proot, neg):
        self.exp = exp
        self.log = log
        self.frob = frob
        self.proot = proot
        self.neg = neg


class FiniteField:
    """The field GF(p^degree) with a fixed canonical defining polynomial.

    Obtain instances through :func:`GF`; they are cached, so two fields with
    the same (p, degree) are the same object.
    """

    def __init__(self, p: int, degree: int, _token=None):
        if _token is not _GF_TOKEN:
            raise TypeError("use GF(p, degree) to create fields")
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.modulus = canonical_modulus(p, degree)
        self._weights = tuple(p**i for i in range(degree))
        self._tables: _Tables | None = None
        self._embeddings: dict[tuple[int, int], FieldEmbedding] = {}

    # -- identity -----------------------------------------------------------

    def __repr__(self):
        if self.degree == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.degree == other.degree
        )

    def __hash__(self):
        return hash((self.p, self.degree))

    def is_subfield_of(self, other: "FiniteField") -> bool:
        return self.p == other.p and other.degree % self.degree == 0

    # -- packed representation ----------------------------------------------

    def pack(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.degree:
            raise ValueError("coefficient vector too long")
        return sum((int(c) % self.p) * w for c, w in zip(coeffs, self._weights))

    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def sort_key(self, a: int) -> tuple[int, ...]:
        """Canonical ordering key: the coefficient tuple, low degree first."""
        return self.coeffs(a)

    def unpack_array(self, a: np.ndarray) -> np.ndarray:
        """(...,) packed -> (..., degree) digit array."""
        a = np.asarray(a, dtype=np.int64)
        digits = np.empty(a.shape + (self.degree,), dtype=np.int64)
        for i in range(self.degree):
            a, r = np.divmod(a, self.p)
            digits[..., i] = r
        return digits

    def pack_array(self, digits: np.ndarray) -> np.ndarray:
        w = np.array(self._weights, dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) % self.p) @ w

    # -- table construction --------------------------------------------------

    def _mul_packed_slow(self, a: int, b: int) -> int:
        """Schoolbook product of packed values; used only to bootstrap tables."""
        p, k = self.p, self.degree
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce degrees >= k using the monic modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(k):
                    prod[d - k + i] = (prod[d - k + i] - c * self.modulus[i]) % p
        return sum(prod[i] * self._weights[i] for i in range(k))

    def _pow_packed_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_packed_slow(result, a)
            a = self._mul_packed_slow(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        fac = prime_factors(q1)
        for g in range(2, self.order):
            if all(self._pow_packed_slow(g, q1 // ell) != 1 for ell in fac):
                return g
        raise RuntimeError("no multiplicative generator found")  # unreachable

    def _build_exp(self, g: int) -> np.ndarray:
        q1 = self.order - 1
        if self.order <= _SEQUENTIAL_EXP_LIMIT:
            exp = np.empty(2 * q1, dtype=np.int64)
            v = 1
            for i in range(q1):
                exp[i] = v
                v = self._mul_packed_slow(v, g)
            exp[q1:] = exp[:q1]
            return exp
        return self._build_exp_bsgs(g)

    def _build_exp_bsgs(self, g: int) -> np.ndarray:
        """Antilog table via baby-step/giant-step so only O(sqrt q) slow products run."""
        p, k = self.p, self.degree
        q1 = self.order - 1
        s = int(q1**0.5) + 1
        baby = np.empty(s, dtype=np.int64)
        v = 1
        for i in range(s):
            baby[i] = v
            v = self._mul_packed_slow(v, g)
        gs = self._pow_packed_slow(g, s)
        giant = np.empty(s + 1, dtype=np.int64)
        v = 1
        for i in range(s + 1):
            giant[i] = v
            v = self._mul_packed_slow(v, gs)
        # residues of t^(k+j) modulo the defining polynomial, as digit rows
        red = np.zeros((k - 1, k), dtype=np.int64)
        r = [(-m) % p for m in self.modulus[:k]]
        for j in range(k - 1):
            red[j] = r[:k]
            # multiply the residue by t and reduce once more
            lead = r[-1]
            r = [0] + r[:-1]
            if lead:
                for i in range(k):
                    r[i] = (r[i] - lead * self.modulus[i]) % p
        bd = self.unpack_array(baby)  # (s, k)
        exp = np.empty(2 * q1, dtype=np.int64)
        chunk = max(1, (1 << 22) // (s * (2 * k)))
        for lo in range(0, s + 1, chunk):
            hi = min(lo + chunk, s + 1)
            gd = self.unpack_array(giant[lo:hi])  # (C, k)
            conv = np.zeros((hi - lo, s, 2 * k - 1), dtype=np.int64)
            for i in range(k):
                conv[:, :, i : i + k] += gd[:, None, i : i + 1] * bd[None, :, :]
            low = conv[:, :, :k] + np.einsum("csj,jd->csd", conv[:, :, k:], red)
            packed = self.pack_array(low)  # (C, s)
            base = lo * s
            flat = packed.reshape(-1)
            take = min(len(flat), q1 - base)
            if take > 0:
                exp[base : base + take] = flat[:take]
        exp[q1:] = exp[:q1]
        return exp

    def _get_tables(self) -> _Tables:
        if self._tables is None:
            q = self.order
            q1 = q - 1
            g = self._find_generator()
            exp = self._build_exp(g)
            log = np.zeros(q, dtype=np.int64)
            log[exp[:q1]] = np.arange(q1, dtype=np.int64)
            all_vals = np.arange(q, dtype=np.int64)
            frob = exp[(log * self.p) % q1]
            frob[0] = 0
            proot = np.zeros(q, dtype=np.int64)
            proot[frob] = all_vals
            if self.p == 2:
                neg = all_vals
            else:
                neg = self.pack_array((-self.unpack_array(all_vals)) % self.p)
            self._tables = _Tables(exp, log, frob, proot, neg)
        return self._tables

    # -- vectorised arithmetic on packed int64 arrays -------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        p = self.p
        for w in self._weights:
            out += w * ((a // w + b // w) % p)
        return out

    def neg(self, a):
        if self.p == 2:
            return np.asarray(a, dtype=np.int64)
        return self._get_tables().neg[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        t = self._get_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = t.exp[t.log[a] + t.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inversion of 0")
        t = self._get_tables()
        q1 = self.order - 1
        return t.exp[(q1 - t.log[a]) % q1]

    def pow_int(self, a, e: int):
        """Componentwise a**e for e >= 0 (0**0 == 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        t = self._get_tables()
        q1 = self.order - 1
        out = t.exp[(t.log[a] * (e % q1 if q1 > 1 else 0)) % q1]
        return np.where(a == 0, 0, out)

    def frobenius_map(self, a):
        return self._get_tables().frob[np.asarray(a, dtype=np.int64)]

    def pth_root_map(self, a):
        return self._get_tables().proot[np.asarray(a, dtype=np.int64)]

    def sum(self, a, axis=None):
        """Field sum of an array along an axis (None sums everything)."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        digits = self.unpack_array(a)
        ax = tuple(range(a.ndim)) if axis is None else axis
        s = digits.sum(axis=ax) % self.p
        return self.pack_array(s)

    def dot(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix product of 2-D packed arrays."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        m, n = A.shape
        n2, r = B.shape
        if n != n2:
            raise ValueError("shape mismatch")
        if n == 0 or m == 0 or r == 0:
            return np.zeros((m, r), dtype=np.int64)
        if self.p == 2:
            acc = np.zeros((m, r), dtype=np.int64)
            for l in range(n):
                acc ^= self.mul(A[:, l : l + 1], B[l : l + 1, :])
            return acc
        acc = np.zeros((m, r, self.degree), dtype=np.int64)
        for l in range(n):
            acc += self.unpack_array(self.mul(A[:, l : l + 1], B[l : l + 1, :]))
        return self.pack_array(acc % self.p)

    def mat_vec(self, A: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.dot(A, np.asarray(v, dtype=np.int64).reshape(-1, 1))[:, 0]

    # -- scalar arithmetic on packed ints -------------------------------------

    def add_s(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        for w in self._weights:
            out += w * ((a // w + b // w) % p)
        return out

    def neg_s(self, a: int) -> int:
        if self.p == 2:
            return a
        return int(self._get_tables().neg[a])

    def sub_s(self, a: int, b: int) -> int:
        return self.add_s(a, self.neg_s(b))

    def mul_s(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        t = self._get_tables()
        return int(t.exp[int(t.log[a]) + int(t.log[b])])

    def inv_s(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of 0")
        t = self._get_tables()
        q1 = self.order - 1
        return int(t.exp[(q1 - int(t.log[a])) % q1])

    def div_s(self, a: int, b: int) -> int:
        return self.mul_s(a, self.inv_s(b))

    def pow_s(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_s(self.inv_s(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        t = self._get_tables()
        q1 = self.order - 1
        return int(t.exp[(int(t.log[a]) * (e % q1 if q1 > 1 else 0)) % q1])

    def frob_s(self, a: int) -> int:
        return int(self._get_tables().frob[a])

    def pth_root_s(self, a: int) -> int:
        return int(self._get_tables().proot[a])

    # -- elements --------------------------------------------------------------

    @property
    def zero(self) -> "FFElement":
        return FFElement(self, 0)

    @property
    def one(self) -> "FFElement":
        return FFElement(self, 1)

    @property
    def gen(self) -> "FFElement":
        """The class of t (a root of the defining polynomial)."""
        if self.degree == 1:
            return FFElement(self, 1)
        return FFElement(self, self.p)

    def element(self, value) -> "FFElement":
        """Coerce an int (image of the integer), coefficient list, or element."""
        if isinstance(value, FFElement):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FFElement(self, int(value) % self.p)
        return FFElement(self, self.pack(list(value)))

    def from_packed(self, v: int) -> "FFElement":
        if not 0 <= v < self.order:
            raise ValueError("packed value out of range")
        return FFElement(self, int(v))

    def elements(self) -> Iterator["FFElement"]:
        for v in range(self.order):
            yield FFElement(self, v)

    def random_packed(self, rng) -> int:
        return rng.randrange(self.order)


class FFElement:
    """A single field element; immutable, hashable, with operator overloads."""

    __slots__ = ("field", "val")

    def __init__(self, field: FiniteField, val: int):
        self.field = field
        self.val = val

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.val)

    def __repr__(self):
        return f"{self.field!r}:{list(self.coeffs)}"

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field == other.field and self.val == other.val
        if isinstance(other, (int, np.integer)):
            return self.val == int(other) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.val))

    def __bool__(self):
        return self.val != 0

    def _coerce(self, other) -> int:
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise ValueError("mixed fields; embed explicitly")
            return other.val
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FFElement(self.field, self.field.add_s(self.val, v))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field.neg_s(self.val))

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FFElement(self.field, self.field.sub_s(self.val, v))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FFElement(self.field, self.field.mul_s(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FFElement(self.field, self.field.div_s(self.val, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        return FFElement(self.field, self.field.div_s(v, self.val))

    def __pow__(self, e: int):
        return FFElement(self.field, self.field.pow_s(self.val, e))

    def inverse(self) -> "FFElement":
        return FFElement(self.field, self.field.inv_s(self.val))

    def frobenius(self) -> "FFElement":
        """x -> x^p."""
        return FFElement(self.field, self.field.frob_s(self.val))

    def pth_root(self) -> "FFElement":
        """The unique y with y^p = x."""
        return FFElement(self.field, self.field.pth_root_s(self.val))


# ---------------------------------------------------------------------------
# Factory
# ---------------------------------------------------------------------------

_GF_TOKEN = object()
_FIELD_CACHE: dict[tuple[int, int], FiniteField] = {}


def GF(p: int, degree: int = 1, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    """The finite field GF(p^degree) with the canonical defining polynomial."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if degree < 1:
        raise ValidationError("degree must be >= 1")
    key = (p, degree)
    got = _FIELD_CACHE.get(key)
    if got is not None:
        return got
    if p**degree > cap:
        raise CapExceededError(
            f"field order {p}^{degree} exceeds the cap {cap}"
        )
    fld = FiniteField(p, degree, _token=_GF_TOKEN)
    _FIELD_CACHE[key] = fld
    return fld


# ---------------------------------------------------------------------------
# Tower embeddings
# ---------------------------------------------------------------------------

class FieldEmbedding:
    """The canonical ring embedding GF(p^k) -> GF(p^m) for k | m.

    The source generator is sent to the least root (coefficient-tuple order)
    of the source defining polynomial inside the target, which makes the map
    deterministic.  ``section`` inverts the map on its image.
    """

    def __init__(self, src: FiniteField, dst: FiniteField, root: int):
        self.src = src
        self.dst = dst
        self.root = root
        powers = [1]
        for _ in range(src.degree - 1):
            powers.append(dst.mul_s(powers[-1], root))
        self._powers = powers
        # GF(p)-matrix of the embedding and data to invert it on the image
        p = src.p
        M = np.zeros((dst.degree, src.degree), dtype=np.int64)
        for i, pw in enumerate(powers):
            M[:, i] = dst.coeffs(pw)
        self._sec_matrix, self._sec_pivots = _modp_rref_augmented(M, p)

    def apply_s(self, a: int) -> int:
        out = 0
        for c, pw in zip(self.src.coeffs(a), self._powers):
            if c:
                out = self.dst.add_s(out, self.dst.mul_s(c, pw))
        return out

    def apply(self, a: np.ndarray) -> np.ndarray:
        """Vectorised embedding of an array of packed source values."""
        a = np.asarray(a, dtype=np.int64)
        digits = self.src.unpack_array(a)
        out = np.zeros(a.shape, dtype=np.int64)
        for i, pw in enumerate(self._powers):
            term = self.dst.mul(digits[..., i], np.int64(pw))
            out = self.dst.add(out, term)
        return out

    def section_s(self, b: int) -> int | None:
        """Packed source value mapping to b, or None if b is off the image."""
        y = np.array(self.dst.coeffs(b), dtype=np.int64)
        sol, ok = _modp_solve_from_rref(self._sec_matrix, self._sec_pivots, y, self.src.p)
        if not ok:
            return None
        return int(sum(int(sol[i]) * self.src._weights[i] for i in range(self.src.degree)))


def _modp_rref_augmented(M: np.ndarray, p: int):
    """RREF of [M | I] over GF(p); returns (reduced array, pivot columns of M)."""
    rows, cols = M.shape
    A = np.concatenate([M % p, np.eye(rows, dtype=np.int64)], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            A[mask] = (A[mask] - np.outer(col[mask], A[r])) % p
        pivots.append(c)
        r += 1
    return A, tuple(pivots)


def _modp_solve_from_rref(A: np.ndarray, pivots: tuple[int, ...], y: np.ndarray, p: int):
    """Solve Mx = y given the precomputed RREF [R | T] of [M | I] (so R = TM)."""
    rows = A.shape[0]
    cols = A.shape[1] - rows
    rhs = (A[:, cols:] @ (y % p)) % p
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = rhs[r]
    # with free variables at 0, Rx = rhs iff the non-pivot rows of rhs vanish
    if np.any(rhs[len(pivots):]):
        return x, False
    return x, True


def embedding(src: FiniteField, dst: FiniteField) -> FieldEmbedding:
    """Cached canonical embedding; requires src.degree | dst.degree."""
    if src.p != dst.p:
        raise ValidationError("characteristic mismatch")
    if dst.degree % src.degree != 0:
        raise ValidationError(
            f"degree {src.degree} does not divide {dst.degree}: no embedding"
        )
    key = (src.p, src.degree)
    got = dst._embeddings.get(key)
    if got is not None:
        return got
    if src == dst:
        emb = FieldEmbedding(src, dst, root=src.gen.val)
    else:
        from .poly import Poly, factor_poly

        lifted = Poly(dst, [int(c) for c in src.modulus])
        roots = []
        for fac, _mult in factor_poly(lifted, seed=0):
            if fac.degree == 1:
                # monic t + a has root -a
                roots.append(dst.neg_s(fac.coeff(0)))
        if len(roots) != src.degree:
            raise RuntimeError("embedding root count mismatch")  # unreachable
        roots.sort(key=dst.sort_key)
        emb = FieldEmbedding(src, dst, root=roots[0])
    dst._embeddings[key] = emb
    return emb


def embed_element(x: FFElement, target: FiniteField) -> FFElement:
    """Image of x under the canonical embedding into target."""
    emb = embedding(x.field, target)
    return FFElement(target, emb.apply_s(x.val))
