"""Matrix representations of a Lie algebra over its base field or an extension.

A Representation stores one matrix per defining basis element of the algebra;
the coefficient field may sit above the algebra's base field in the canonical
tower, in which case algebra coordinates are embedded on the fly.  This module
provides the Norton-criterion irreducibility test, composition series that
always peel a minimal-dimension irreducible submodule, tensor products, scalar
restriction/extension, hom spaces, and the character/cluster machinery driven
by the scalar action of x^p - x^[p].
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    MeataxeInconclusiveError,
    NonScalarActionError,
    CapExceededError,
    ValidationError,
    VerificationError,
)
from .field import FiniteField, GF, embedding
from .liealg import LieAlgebra, spin_vectors
from .linalg import Matrix, Subspace, evaluate_poly, kernel_array
from .poly import factor_poly
from .util import derive_seed

MEATAXE_MAX_ITER = 200
CLUSTER_DEGREE_CAP = 12


class Representation:
    """A module for a Lie algebra, as matrices acting on column vectors."""

    __slots__ = ("algebra", "field", "mats")

    def __init__(self, algebra: LieAlgebra, field: FiniteField, mats):
        self.algebra = algebra
        self.field = field
        arr = np.asarray(mats, dtype=np.int64)
        if arr.ndim != 3:
            raise ValidationError("expected one square matrix per basis element")
        if arr.shape[0] != algebra.dim or arr.shape[1] != arr.shape[2]:
            raise ValidationError("representation matrices have wrong shape")
        if not algebra.field.is_subfield_of(field):
            raise ValidationError("coefficient field is not an extension of the base")
        self.mats = arr

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def __repr__(self):
        return f"Representation(dim={self.dim}, field={self.field!r}, n={self.algebra.dim})"

    @classmethod
    def trivial(cls, algebra: LieAlgebra, dim: int = 1) -> "Representation":
        return cls(
            algebra,
            algebra.field,
            np.zeros((algebra.dim, dim, dim), dtype=np.int64),
        )

    # -- action ------------------------------------------------------------------

    def _embed_coords(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.field == self.algebra.field:
            return x
        return embedding(self.algebra.field, self.field).apply(x)

    def action(self, x) -> np.ndarray:
        """Matrix of an algebra element given by base-field coordinates."""
        K = self.field
        coeffs = self._embed_coords(x)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in enumerate(coeffs):
            if c:
                out = K.add(out, K.mul(self.mats[i], np.int64(int(c))))
        return out

    def validate(self) -> str | None:
        """None when the matrices satisfy the bracket relations."""
        K = self.field
        L = self.algebra
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                lhs = self.action(L.c[i, j])
                comm = K.sub(
                    K.dot(self.mats[i], self.mats[j]),
                    K.dot(self.mats[j], self.mats[i]),
                )
                if not np.array_equal(lhs, comm):
                    return f"bracket relation fails on basis pair ({i}, {j})"
        return None

    def require_valid(self):
        report = self.validate()
        if report is not None:
            raise ValidationError(f"not a representation: {report}")

    # -- submodule machinery -------------------------------------------------------

    def spin(self, vectors) -> Subspace:
        """Smallest invariant subspace containing the given vectors."""
        return spin_vectors(self.field, self.mats, list(vectors))

    def restrict(self, S: Subspace) -> "Representation":
        """The action on an invariant subspace, in its RREF basis coordinates."""
        mats = (
            np.stack([S.restrict_matrix(g) for g in self.mats])
            if self.algebra.dim
            else np.zeros((0, S.dim, S.dim), dtype=np.int64)
        )
        return Representation(self.algebra, self.field, mats)

    def quotient(self, S: Subspace) -> "Representation":
        """The action on V/S in the canonical complement coordinates."""
        K = self.field
        free = S.complement_indices()
        d = len(free)
        mats = np.zeros((self.algebra.dim, d, d), dtype=np.int64)
        for gi, g in enumerate(self.mats):
            for col, j in enumerate(free):
                w = S.reduce_vector(g[:, j])
                mats[gi][:, col] = w[list(free)]
        return Representation(self.algebra, self.field, mats)

    # -- irreducibility (Norton's criterion) ------------------------------------------

    def _random_algebra_element(self, rng: random.Random, iteration: int) -> np.ndarray:
        K = self.field
        n = self.mats.shape[0]
        m = self.dim
        if n == 0:
            return np.zeros((m, m), dtype=np.int64)
        if iteration < n:
            return self.mats[iteration]
        A = np.zeros((m, m), dtype=np.int64)
        for _ in range(rng.randint(1, 2 + n)):
            W = self.mats[rng.randrange(n)]
            for _ in range(rng.randint(1, 3) - 1):
                W = K.dot(W, self.mats[rng.randrange(n)])
            coeff = K.random_packed(rng)
            if coeff:
                A = K.add(A, K.mul(W, np.int64(coeff)))
        return A

    def is_irreducible(self, seed: int = 0, max_iter: int = MEATAXE_MAX_ITER):
        """(True, witness) or (False, {"submodule": proper invariant Subspace}).

        Raises MeataxeInconclusiveError after max_iter random elements.
        """
        rng = random.Random(seed)
        return self._is_irreducible_rng(rng, max_iter)

    def _is_irreducible_rng(self, rng: random.Random, max_iter: int = MEATAXE_MAX_ITER):
        m = self.dim
        if m == 0:
            raise ValidationError("zero module has no irreducibility status")
        if m == 1:
            return True, {"method": "dimension-1"}
        K = self.field
        transposed = None
        for iteration in range(max_iter):
            A = self._random_algebra_element(rng, iteration)
            f = Matrix(K, A).min_poly()
            factors = factor_poly(f, seed=rng.randrange(2**31))
            for g, _mult in factors:
                gA = evaluate_poly(g, Matrix(K, A))
                N = gA.kernel()
                if N.rows == 0:
                    continue
                S = self.spin([N.a[0]])
                if 0 < S.dim < m:
                    return False, {"submodule": S}
                if N.rows == g.degree:
                    # nullity equals the factor degree: Norton's two-sided test
                    if transposed is None:
                        transposed = np.stack([g.T for g in self.mats]) if len(self.mats) else self.mats
                    Nd = gA.T.kernel()
                    D = spin_vectors(K, transposed, [Nd.a[0]])
                    if D.dim < m:
                        U = D.perp()
                        return False, {"submodule": U}
                    return True, {
                        "method": "norton",
                        "factor": g,
                        "iteration": iteration,
                    }
                for r in range(1, N.rows):
                    S = self.spin([N.a[r]])
                    if 0 < S.dim < m:
                        return False, {"submodule": S}
        raise MeataxeInconclusiveError(
            f"no decision after {max_iter} random algebra elements"
        )

    # -- composition series ------------------------------------------------------------

    def _chop(self, rng: random.Random) -> list["Representation"]:
        if self.dim == 0:
            return []
        ok, cert = self._is_irreducible_rng(rng)
        if ok:
            return [self]
        S = cert["submodule"]
        return self.restrict(S)._chop(rng) + self.quotient(S)._chop(rng)

    def _minimal_submodule(self, rng: random.Random) -> Subspace:
        """A minimal submodule, chosen canonically (min dimension, least basis)."""
        inventory = self._chop(rng)
        types: list[Representation] = []
        for W in inventory:
            if not any(
                W.dim == T.dim and hom_space(W, T) for T in types
            ):
                types.append(W)
        types.sort(key=lambda W: W.dim)
        best = None
        best_dim = None
        for W in types:
            if best_dim is not None and W.dim > best_dim:
                break
            for T in hom_space(W, self):
                S = Subspace(self.field, self.dim, T.a.T)
                if S.dim != W.dim:
                    raise VerificationError("hom image from an irreducible degenerated")
                key = S.sort_key()
                if best is None or key < best[0]:
                    best = (key, S)
                    best_dim = W.dim
        if best is None:
            raise VerificationError("module with no minimal submodule found")
        return best[1]

    def composition_series(self, seed: int = 0) -> list["Representation"]:
        """Composition factors bottom-up, peeling a minimal-dimension
        irreducible submodule (canonical tie-break) at every step."""
        rng = random.Random(seed)
        out = []
        current = self
        while current.dim > 0:
            ok, _ = current._is_irreducible_rng(rng)
            if ok:
                out.append(current)
                break
            S = current._minimal_submodule(rng)
            out.append(current.restrict(S))
            current = current.quotient(S)
        return out

    # -- functorial constructions ----------------------------------------------------

    def tensor(self, other: "Representation") -> "Representation":
        """Tensor product module: x.(v (x) w) = xv (x) w + v (x) xw."""
        if self.field != other.field:
            raise ValidationError("tensor factors must share a coefficient field")
        if self.algebra is not other.algebra and not (
            self.algebra.dim == other.algebra.dim
            and np.array_equal(self.algebra.c, other.algebra.c)
        ):
            raise ValidationError("tensor factors must share the algebra")
        K = self.field
        m, r = self.dim, other.dim
        I_m = np.eye(m, dtype=np.int64)
        I_r = np.eye(r, dtype=np.int64)
        mats = np.zeros((self.algebra.dim, m * r, m * r), dtype=np.int64)
        for i in range(self.algebra.dim):
            a = _kron(K, self.mats[i], I_r)
            b = _kron(K, I_m, other.mats[i])
            mats[i] = K.add(a, b)
        return Representation(self.algebra, K, mats)

    def extend_scalars(self, E: FiniteField) -> "Representation":
        emb = embedding(self.field, E)
        return Representation(self.algebra, E, emb.apply(self.mats))

    def restrict_scalars(self) -> "Representation":
        """View a module over an extension E as a module over the base field."""
        F = self.algebra.field
        K = self.field
        if K == F:
            return Representation(self.algebra, F, self.mats.copy())
        tower = _scalar_tower(F, K)
        l = tower.degree
        m = self.dim
        mats = np.zeros((self.algebra.dim, m * l, m * l), dtype=np.int64)
        for gi in range(self.algebra.dim):
            # base-field coordinates of the generators stay in F, so each
            # entry expands to its multiplication block over F
            src = self.mats[gi]
            for a in range(m):
                for b in range(m):
                    v = int(src[a, b])
                    if v:
                        mats[gi][a * l : (a + 1) * l, b * l : (b + 1) * l] = tower.mult_block(v)
        return Representation(self.algebra, F, mats)

    def direct_sum(self, other: "Representation") -> "Representation":
        if self.field != other.field:
            raise ValidationError("direct sum requires one coefficient field")
        m, r = self.dim, other.dim
        mats = np.zeros((self.algebra.dim, m + r, m + r), dtype=np.int64)
        for i in range(self.algebra.dim):
            mats[i][:m, :m] = self.mats[i]
            mats[i][m:, m:] = other.mats[i]
        return Representation(self.algebra, self.field, mats)

    # -- kernels and triviality ---------------------------------------------------------

    def acts_trivially(self, S: Subspace) -> bool:
        """True iff every element of the subspace of the algebra acts as zero."""
        return all(not self.action(row).any() for row in S.basis)

    def kernel_ideal(self) -> Subspace:
        """{x in L : x acts as zero}, an ideal of the algebra."""
        F = self.algebra.field
        n = self.algebra.dim
        if n == 0:
            return Subspace.zero(F, 0)
        if self.field == F:
            A = self.mats.reshape(n, -1).T.copy()
        else:
            tower = _scalar_tower(F, self.field)
            rows = []
            for i in range(n):
                flat = self.mats[i].reshape(-1)
                rows.append(np.concatenate([tower.coords(int(v)) for v in flat]))
            A = np.stack(rows).T.copy()
        ker = Subspace(F, n, kernel_array(F, A))
        return ker


def _kron(K: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    m, n = A.shape
    r, s = B.shape
    left = np.repeat(np.repeat(A, r, axis=0), s, axis=1)
    right = np.tile(B, (m, n))
    return K.mul(left, right)


class _ScalarTower:
    """F-linear coordinates on an extension K, basis 1, g, ..., g^(l-1)."""

    def __init__(self, F: FiniteField, K: FiniteField):
        self.F = F
        self.K = K
        self.degree = K.degree // F.degree
        l = self.degree
        emb = embedding(F, K)
        gamma = K.gen.val
        powers = [1]
        for _ in range(l - 1):
            powers.append(K.mul_s(powers[-1], gamma))
        self._powers = powers
        p = F.p
        B = np.zeros((K.degree, K.degree), dtype=np.int64)
        alpha_pows = [1]
        for _ in range(F.degree - 1):
            alpha_pows.append(F.mul_s(alpha_pows[-1], F.gen.val))
        for i in range(l):
            for j in range(F.degree):
                val = K.mul_s(powers[i], emb.apply_s(alpha_pows[j]))
                B[:, i * F.degree + j] = K.coeffs(val)
        from .field import _modp_rref_augmented

        R, piv = _modp_rref_augmented(B, p)
        if len(piv) != K.degree:
            raise VerificationError("scalar tower basis is singular")
        self._Binv = R[:, K.degree :]
        self._cache: dict[int, np.ndarray] = {}
        self._block_cache: dict[int, np.ndarray] = {}

    def coords(self, e: int) -> np.ndarray:
        """F-packed coordinate vector (length degree) of a K element."""
        got = self._cache.get(e)
        if got is not None:
            return got
        p = self.F.p
        y = np.array(self.K.coeffs(e), dtype=np.int64)
        sol = (self._Binv @ y) % p
        kF = self.F.degree
        out = np.array(
            [self.F.pack(sol[i * kF : (i + 1) * kF]) for i in range(self.degree)],
            dtype=np.int64,
        )
        self._cache[e] = out
        return out

    def mult_block(self, e: int) -> np.ndarray:
        """Matrix over F of multiplication by a K element, in the power basis."""
        got = self._block_cache.get(e)
        if got is not None:
            return got
        l = self.degree
        out = np.zeros((l, l), dtype=np.int64)
        for i, pw in enumerate(self._powers):
            out[:, i] = self.coords(self.K.mul_s(e, pw))
        self._block_cache[e] = out
        return out


_TOWER_CACHE: dict[tuple[int, int, int], _ScalarTower] = {}


def _scalar_tower(F: FiniteField, K: FiniteField) -> _ScalarTower:
    key = (F.p, F.degree, K.degree)
    got = _TOWER_CACHE.get(key)
    if got is None:
        got = _ScalarTower(F, K)
        _TOWER_CACHE[key] = got
    return got


def adjoint_representation(L: LieAlgebra) -> Representation:
    return Representation(L, L.field, L._ads().copy())


def hom_space(V: Representation, W: Representation) -> list[Matrix]:
    """Basis of {T : T rho_V(x) = rho_W(x) T}, i.e. module maps V -> W.

    Matrices have shape (W.dim, V.dim) and act on column vectors.
    """
    if V.field != W.field:
        raise ValidationError("hom space requires one coefficient field")
    K = V.field
    n = V.algebra.dim
    mv, mw = V.dim, W.dim
    N = mv * mw
    if N == 0:
        return []
    if n == 0:
        ker = np.eye(N, dtype=np.int64)
    else:
        blocks = []
        I_v = np.eye(mv, dtype=np.int64)
        I_w = np.eye(mw, dtype=np.int64)
        for i in range(n):
            a = _kron(K, W.mats[i], I_v)
            b = _kron(K, I_w, V.mats[i].T.copy())
            blocks.append(K.sub(a, b))
        ker = kernel_array(K, np.concatenate(blocks, axis=0))
    return [Matrix(K, ker[r].reshape(mw, mv).copy()) for r in range(ker.shape[0])]


def irreducibles_isomorphic(V: Representation, W: Representation) -> bool:
    """Isomorphism test valid when both modules are irreducible (Schur)."""
    return V.dim == W.dim and bool(hom_space(V, W))


def modules_isomorphic(
    V: Representation, W: Representation, seed: int = 0, enum_cap: int = 4096
) -> bool:
    """Full isomorphism test: search the hom space for an invertible element.

    Falls back to projective enumeration when feasible; raises
    CapExceededError instead of guessing when the search space is too big.
    """
    if V.dim != W.dim or V.field != W.field:
        return False
    if V.dim == 0:
        return True
    homs = hom_space(V, W)
    if not homs:
        return False
    for T in homs:
        if T.is_invertible():
            return True
    K = V.field
    h = len(homs)
    count = (K.order**h - 1) // (K.order - 1)
    if count <= enum_cap:
        from .liealg import _projective_points

        for lam in _projective_points(K.order, h):
            T = np.zeros((V.dim, V.dim), dtype=np.int64)
            for lv, H in zip(lam, homs):
                if lv:
                    T = K.add(T, K.mul(H.a, np.int64(int(lv))))
            if Matrix(K, T).is_invertible():
                return True
        return False
    rng = random.Random(seed)
    for _ in range(256):
        T = np.zeros((V.dim, V.dim), dtype=np.int64)
        for H in homs:
            c = K.random_packed(rng)
            if c:
                T = K.add(T, K.mul(H.a, np.int64(c)))
        if Matrix(K, T).is_invertible():
            return True
    raise CapExceededError("module isomorphism test inconclusive at this size")


# ---------------------------------------------------------------------------
# Characters and clusters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """A linear form on the algebra with values in an extension field."""

    algebra: LieAlgebra
    field: FiniteField
    values: tuple[int, ...]  # packed, one per basis element

    def __post_init__(self):
        if len(self.values) != self.algebra.dim:
            raise ValidationError("character needs one value per basis element")

    def value(self, x) -> int:
        """Packed value on an element given by base-field coordinates."""
        E = self.field
        coeffs = (
            np.asarray(x, dtype=np.int64)
            if E == self.algebra.field
            else embedding(self.algebra.field, E).apply(np.asarray(x, dtype=np.int64))
        )
        out = 0
        for c, v in zip(coeffs, self.values):
            if c and v:
                out = E.add_s(out, E.mul_s(int(c), v))
        return out

    def is_zero(self) -> bool:
        return not any(self.values)

    def conjugate(self) -> "Character":
        """Componentwise |F|-power Frobenius over the algebra's base field."""
        E = self.field
        e = self.algebra.field.order
        return Character(
            self.algebra, E, tuple(E.pow_s(v, e) for v in self.values)
        )

    def frobenius_orbit(self) -> list["Character"]:
        orbit = [self]
        c = self.conjugate()
        while c.values != self.values:
            orbit.append(c)
            c = c.conjugate()
        return orbit

    def embed_into(self, E2: FiniteField) -> "Character":
        emb = embedding(self.field, E2)
        return Character(self.algebra, E2, tuple(emb.apply_s(v) for v in self.values))

    def vanishes_on(self, S: Subspace) -> bool:
        return all(self.value(row) == 0 for row in S.basis)


@dataclass(frozen=True)
class Cluster:
    """A set of characters over one value field, conjugation-closed."""

    algebra: LieAlgebra
    field: FiniteField
    chars: tuple[tuple[int, ...], ...]  # sorted, deduplicated packed value rows

    @classmethod
    def from_characters(cls, algebra, field, characters) -> "Cluster":
        vals = sorted(
            {tuple(c.values) for c in characters},
            key=lambda row: tuple(field.sort_key(v) for v in row),
        )
        return cls(algebra, field, tuple(vals))

    def members(self) -> list[Character]:
        return [Character(self.algebra, self.field, v) for v in self.chars]

    def is_closed_under_conjugation(self) -> bool:
        have = set(self.chars)
        return all(tuple(c.conjugate().values) in have for c in self.members())

    def is_simple(self) -> bool:
        """True when the cluster is a single conjugation orbit."""
        if not self.chars:
            return False
        orbit = {tuple(c.values) for c in self.members()[0].frobenius_orbit()}
        return orbit == set(self.chars)

    def contains(self, c: Character) -> bool:
        E2 = _common_field(self.field, c.field)
        mine = {tuple(ch.embed_into(E2).values) for ch in self.members()}
        return tuple(c.embed_into(E2).values) in mine

    def subset_of_orbit(self, c: Character) -> bool:
        """True when every member is a conjugate of c."""
        E2 = _common_field(self.field, c.field)
        orbit = {
            tuple(x.embed_into(E2).values) for x in c.frobenius_orbit()
        }
        mine = {tuple(ch.embed_into(E2).values) for ch in self.members()}
        return mine <= orbit


def _common_field(E1: FiniteField, E2: FiniteField) -> FiniteField:
    if E1.p != E2.p:
        raise ValidationError("characteristic mismatch")
    import math

    return GF(E1.p, math.lcm(E1.degree, E2.degree))


def character_of_irreducible(V: Representation, pmap) -> Character:
    """The character of an absolutely irreducible module.

    x^p - x^[p] must act as a scalar for every basis element; the character
    value is the p-th root of that scalar.  Raises NonScalarActionError when
    the coefficient field is too small (or V is not absolutely irreducible).
    """
    K = V.field
    L = V.algebra
    p = K.p
    values = []
    ident = np.eye(V.dim, dtype=np.int64)
    for i in range(L.dim):
        P = np.asarray(Matrix(K, V.mats[i]).__pow__(p).a)
        B = K.sub(P, V.action(pmap.values[i]))
        s = int(B[0, 0])
        if not np.array_equal(B, K.mul(ident, np.int64(s))):
            raise NonScalarActionError(
                f"x^p - x^[p] is not scalar on basis element {i}"
            )
        values.append(K.pth_root_s(s))
    c = Character(L, K, tuple(values))
    rng = random.Random(derive_seed(0, "character-consistency"))
    for _ in range(20):
        x = np.array([L.field.random_packed(rng) for _ in range(L.dim)], dtype=np.int64)
        P = np.asarray(Matrix(K, V.action(x)).__pow__(p).a)
        B = K.sub(P, V.action(pmap.eval(x)))
        want = K.mul(ident, np.int64(K.pow_s(c.value(x), p)))
        if not np.array_equal(B, want):
            raise VerificationError("character consistency check failed")
    return c


def cluster_of_module(
    V: Representation,
    pmap,
    seed: int = 0,
    degree_cap: int = CLUSTER_DEGREE_CAP,
    field_cap: int | None = None,
) -> Cluster:
    """Characters of all composition factors after a full scalar extension.

    Tries extensions of the base field of growing degree until every factor
    is absolutely irreducible (the scalar check passes everywhere).
    """
    F = V.algebra.field
    if V.field != F:
        raise ValidationError("cluster computation starts from a base-field module")
    last_error = None
    for d in range(1, degree_cap + 1):
        kwargs = {} if field_cap is None else {"cap": field_cap}
        try:
            E = GF(F.p, F.degree * d, **kwargs)
        except CapExceededError as exc:
            last_error = exc
            break
        VE = V.extend_scalars(E)
        try:
            factors = VE.composition_series(seed=derive_seed(seed, f"cluster-deg{d}"))
            chars = [character_of_irreducible(W, pmap) for W in factors]
        except NonScalarActionError as exc:
            last_error = exc
            continue
        return Cluster.from_characters(V.algebra, E, chars)
    raise CapExceededError(
        f"no extension of degree <= {degree_cap} splits the module: {last_error}"
    )
