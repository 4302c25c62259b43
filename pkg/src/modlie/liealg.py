"""Lie algebras over finite fields, presented by structure constants.

The bracket tensor c[i, j, :] holds the coordinates of [b_i, b_j].  Ideal
machinery (centre, derived subalgebra, minimal ideals, abelian socle,
isomorphism classes of abelian minimal ideals and their diagonals) lives
here.  Subspaces are canonical RREF row spaces, so every set-valued result
can be sorted deterministically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, ValidationError, VerificationError
from .field import FFElement, FiniteField
from .linalg import Matrix, Subspace, kernel_array, rref_array
from .util import derive_seed

# Exhaustive vector-spinning is used up to this many vectors; past it the
# enumeration goes through hom spaces from the composition factors.
EXHAUSTIVE_VECTOR_CAP = 2**16
# Cap on the number of projective points enumerated (diagonals, hom images).
DEFAULT_ENUM_CAP = 2**16


class LieAlgebra:
    """Finite-dimensional Lie algebra given by its structure constants."""

    __slots__ = ("field", "dim", "c", "_ad_cache")

    def __init__(self, field: FiniteField, constants):
        self.field = field
        arr = np.asarray(constants, dtype=np.int64)
        n = arr.shape[0] if arr.ndim == 3 else 0
        if arr.ndim != 3 or arr.shape != (n, n, n):
            if arr.size == 0:
                arr = np.zeros((0, 0, 0), dtype=np.int64)
                n = 0
            else:
                raise ValidationError("structure constants must form an n*n*n array")
        self.dim = n
        self.c = arr
        self._ad_cache: np.ndarray | None = None

    @classmethod
    def zero_algebra(cls, field: FiniteField) -> "LieAlgebra":
        return cls(field, np.zeros((0, 0, 0), dtype=np.int64))

    @classmethod
    def abelian(cls, field: FiniteField, n: int) -> "LieAlgebra":
        return cls(field, np.zeros((n, n, n), dtype=np.int64))

    @classmethod
    def from_sparse_brackets(cls, field: FiniteField, dim: int, entries) -> "LieAlgebra":
        """Build from (i, j, k, packed coefficient) entries with i < j.

        The antisymmetric counterparts are filled in automatically.
        """
        c = np.zeros((dim, dim, dim), dtype=np.int64)
        for i, j, k, v in entries:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ValidationError(f"bracket index out of range: {(i, j, k)}")
            if i >= j:
                raise ValidationError("sparse bracket entries must have i < j")
            v = int(v)
            c[i, j, k] = field.add_s(int(c[i, j, k]), v)
            c[j, i, k] = field.neg_s(int(c[i, j, k]))
        return cls(field, c)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, field={self.field!r})"

    # -- basic operations ---------------------------------------------------

    def bracket(self, x, y) -> np.ndarray:
        F = self.field
        n = self.dim
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if n == 0:
            return np.zeros(0, dtype=np.int64)
        z = F.dot(x.reshape(1, n), self.c.reshape(n, n * n)).reshape(n, n)
        return F.dot(y.reshape(1, n), z)[0]

    def _ads(self) -> np.ndarray:
        """Stack of adjoint matrices of the basis elements, shape (n, n, n)."""
        if self._ad_cache is None:
            n = self.dim
            out = np.empty((n, n, n), dtype=np.int64)
            for i in range(n):
                # ad(b_i)[k, j] = c[i, j, k]
                out[i] = self.c[i].T
            self._ad_cache = out
        return self._ad_cache

    def ad(self, x) -> Matrix:
        """Matrix of y -> [x, y] on the defining basis."""
        F = self.field
        n = self.dim
        x = np.asarray(x, dtype=np.int64)
        if n == 0:
            return Matrix.zeros(F, 0, 0)
        z = F.dot(x.reshape(1, n), self.c.reshape(n, n * n)).reshape(n, n)
        return Matrix(F, z.T.copy())

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def subspace(self, rows) -> Subspace:
        return Subspace(self.field, self.dim, rows)

    # -- validation -----------------------------------------------------------

    def validate(self) -> str | None:
        """None when the bracket is a Lie bracket; otherwise a report string."""
        F = self.field
        n = self.dim
        for i in range(n):
            if self.c[i, i].any():
                return f"[b{i}, b{i}] != 0"
        for i in range(n):
            for j in range(i + 1, n):
                if not np.array_equal(self.c[j, i], F.neg(self.c[i, j])):
                    return f"antisymmetry fails at ({i}, {j})"
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    s = self.bracket(self.c[i, j], self.basis_vector(k))
                    s = F.add(s, self.bracket(self.c[j, k], self.basis_vector(i)))
                    s = F.add(s, self.bracket(self.c[k, i], self.basis_vector(j)))
                    if s.any():
                        return f"Jacobi fails on triple ({i}, {j}, {k})"
        return None

    def require_valid(self):
        report = self.validate()
        if report is not None:
            raise ValidationError(f"not a Lie algebra: {report}")

    # -- classical subspaces ----------------------------------------------------

    def center(self) -> Subspace:
        n = self.dim
        if n == 0:
            return Subspace.zero(self.field, 0)
        A = np.empty((n * n, n), dtype=np.int64)
        for i in range(n):
            A[:, i] = self._ads()[i].reshape(-1)
        return Subspace(self.field, n, kernel_array(self.field, A))

    def derived_subalgebra(self) -> Subspace:
        n = self.dim
        rows = [self.c[i, j] for i in range(n) for j in range(i + 1, n)]
        if not rows:
            return Subspace.zero(self.field, n)
        return Subspace(self.field, n, np.vstack(rows))

    def is_ideal(self, S: Subspace) -> bool:
        for s in S.basis:
            for i in range(self.dim):
                if not S.contains_vector(self.bracket(self.basis_vector(i), s)):
                    return False
        return True

    def is_abelian_subspace(self, S: Subspace) -> bool:
        d = S.dim
        for a in range(d):
            for b in range(a + 1, d):
                if self.bracket(S.basis[a], S.basis[b]).any():
                    return False
        return True

    def is_abelian(self) -> bool:
        return not self.c.any()

    def subalgebra_on(self, S: Subspace) -> "LieAlgebra":
        """The Lie algebra structure induced on a subalgebra S (in its basis)."""
        d = S.dim
        c = np.zeros((d, d, d), dtype=np.int64)
        for a in range(d):
            for b in range(d):
                w = self.bracket(S.basis[a], S.basis[b])
                if not S.contains_vector(w):
                    raise ValidationError("subspace is not a subalgebra")
                c[a, b] = S.coords(w)
        return LieAlgebra(self.field, c)


def spin_vectors(F: FiniteField, mats: np.ndarray, seeds) -> Subspace:
    """Smallest subspace containing the seeds and invariant under the matrices."""
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[2] if mats.size else len(seeds[0]) if len(seeds) else 0
    if mats.size == 0 and len(seeds) and mats.shape[0] == 0:
        n = len(np.asarray(seeds[0]))
    pivot_rows: dict[int, np.ndarray] = {}

    def reduce(v):
        v = np.asarray(v, dtype=np.int64).copy()
        for c in sorted(pivot_rows):
            if v[c]:
                v = F.sub(v, F.mul(np.int64(int(v[c])), pivot_rows[c]))
        return v

    queue = []
    for s in seeds:
        w = reduce(s)
        if w.any():
            piv = int(np.nonzero(w)[0][0])
            w = F.mul(w, np.int64(F.inv_s(int(w[piv]))))
            pivot_rows[piv] = w
            queue.append(w)
    while queue:
        v = queue.pop()
        for g in mats:
            w = reduce(F.mat_vec(g, v))
            if w.any():
                piv = int(np.nonzero(w)[0][0])
                w = F.mul(w, np.int64(F.inv_s(int(w[piv]))))
                pivot_rows[piv] = w
                queue.append(w)
    if not pivot_rows:
        return Subspace.zero(F, n)
    return Subspace(F, n, np.vstack([pivot_rows[c] for c in sorted(pivot_rows)]))


def ideal_closure(L: LieAlgebra, seeds) -> Subspace:
    """Smallest ideal of L containing the seed vectors."""
    return spin_vectors(L.field, L._ads(), seeds)


def _iter_vectors(q: int, n: int):
    """All coordinate vectors over a field of order q, packed values 0..q-1."""
    for tup in itertools.product(range(q), repeat=n):
        yield np.array(tup, dtype=np.int64)


def minimal_ideals(L: LieAlgebra, enum_cap: int = DEFAULT_ENUM_CAP) -> list[Subspace]:
    """Complete, duplicate-free, canonically sorted list of minimal ideals."""
    n = L.dim
    if n == 0:
        return []
    q = L.field.order
    if q**n <= EXHAUSTIVE_VECTOR_CAP:
        found = _minimal_ideals_exhaustive(L)
    else:
        found = _minimal_ideals_via_homs(L, enum_cap)
    return sorted(found, key=lambda S: S.sort_key())


def _minimal_ideals_exhaustive(L: LieAlgebra) -> list[Subspace]:
    F = L.field
    q = F.order
    spins: dict[bytes, Subspace] = {}
    for v in _iter_vectors(q, L.dim):
        nz = np.nonzero(v)[0]
        if nz.size == 0 or v[nz[0]] != 1:
            continue  # one spin per projective class
        S = ideal_closure(L, [v])
        spins.setdefault(S.basis.tobytes(), S)
    candidates = sorted(spins.values(), key=lambda S: (S.dim, S.sort_key()))
    out: list[Subspace] = []
    for S in candidates:
        if not any(S.contains(T) for T in out):
            out.append(S)
    return out


def _minimal_ideals_via_homs(L: LieAlgebra, enum_cap: int) -> list[Subspace]:
    # Everything minimal is the image of a nonzero hom from one of the
    # composition factor types of the adjoint module.
    from .rep import adjoint_representation, hom_space, modules_isomorphic

    seed = derive_seed(0, "minimal-ideals")
    adj = adjoint_representation(L)
    factors = adj.composition_series(seed=seed)
    types = []
    for W in factors:
        if not any(modules_isomorphic(W, T, seed=seed) for T in types):
            types.append(W)
    F = L.field
    q = F.order
    found: dict[bytes, Subspace] = {}
    for W in types:
        homs = hom_space(W, adj)
        h = len(homs)
        if h == 0:
            continue
        count = (q**h - 1) // (q - 1)
        if count > enum_cap:
            raise CapExceededError(
                f"{count} hom images to enumerate exceeds the cap {enum_cap}"
            )
        for lam in _projective_points(q, h):
            T = np.zeros(homs[0].shape, dtype=np.int64)
            for lv, H in zip(lam, homs):
                if lv:
                    T = F.add(T, F.mul(np.int64(int(lv)), H.a))
            S = Subspace(F, L.dim, T.T)
            if S.dim != W.dim:
                raise VerificationError("hom from an irreducible was not injective")
            found.setdefault(S.basis.tobytes(), S)
    return list(found.values())


def _projective_points(q: int, r: int):
    """Normalized nonzero vectors (first nonzero coordinate 1), packed values."""
    for lead in range(r):
        for rest in itertools.product(range(q), repeat=r - 1 - lead):
            yield (0,) * lead + (1,) + rest


def abelian_socle(L: LieAlgebra, enum_cap: int = DEFAULT_ENUM_CAP) -> Subspace:
    """Sum of the abelian minimal ideals."""
    total = Subspace.zero(L.field, L.dim)
    for S in minimal_ideals(L, enum_cap):
        if L.is_abelian_subspace(S):
            total = total.add(S)
    return total


@dataclass
class IsoClass:
    """One isomorphism type of abelian minimal ideal.

    members are a maximal direct family A_1, ..., A_r of ideals of the type;
    phis[i] is an intertwiner A_1 -> A_i in basis coordinates (phis[0] = id);
    isotypic is the sum of all minimal ideals of the type.
    """

    representative: Subspace
    members: list[Subspace]
    phis: list[Matrix]
    isotypic: Subspace
    module: "object"  # Representation of L on the representative

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @property
    def block_dim(self) -> int:
        return self.representative.dim


def ideal_module(L: LieAlgebra, S: Subspace):
    """The adjoint action of L restricted to an ideal S, as a representation."""
    from .rep import Representation

    mats = np.stack(
        [S.restrict_matrix(L._ads()[i]) for i in range(L.dim)]
    ) if L.dim else np.zeros((0, S.dim, S.dim), dtype=np.int64)
    return Representation(L, L.field, mats)


def iso_classes(L: LieAlgebra, enum_cap: int = DEFAULT_ENUM_CAP) -> list[IsoClass]:
    """Partition of the abelian minimal ideals into isomorphism types."""
    from .rep import hom_space, modules_isomorphic

    ideals = [
        S for S in minimal_ideals(L, enum_cap) if L.is_abelian_subspace(S)
    ]
    groups: list[list[Subspace]] = []
    reps = []
    for S in ideals:
        mod = ideal_module(L, S)
        for g, (gmod, _) in zip(groups, reps):
            if S.dim == gmod.dim and modules_isomorphic(gmod, mod, seed=0):
                g.append(S)
                break
        else:
            groups.append([S])
            reps.append((mod, S))
    out = []
    for group, (rep_mod, rep_S) in zip(groups, reps):
        members = []
        total = Subspace.zero(L.field, L.dim)
        isotypic = Subspace.zero(L.field, L.dim)
        for S in group:
            isotypic = isotypic.add(S)
            cand = total.add(S)
            if cand.dim == total.dim + S.dim:
                members.append(S)
                total = cand
        phis = []
        for i, A in enumerate(members):
            if i == 0:
                phis.append(Matrix.identity(L.field, rep_S.dim))
                continue
            homs = hom_space(rep_mod, ideal_module(L, A))
            if not homs:
                raise VerificationError("isomorphic ideals with empty hom space")
            phi = homs[0]
            if not phi.is_invertible():
                raise VerificationError("nonzero hom between irreducibles not invertible")
            phis.append(phi)
        if members[0] != group[0]:
            raise VerificationError("greedy selection lost the representative")
        if total.dim != isotypic.dim:
            raise VerificationError("direct family does not span the isotypic component")
        out.append(
            IsoClass(
                representative=members[0],
                members=members,
                phis=phis,
                isotypic=isotypic,
                module=rep_mod,
            )
        )
    return out


@dataclass
class DiagonalSpec:
    """A minimal ideal {sum_i lam_i phi_i(a) : a in A_1} inside an isotypic block."""

    iso_class: IsoClass
    lam: tuple[int, ...]
    subspace: Subspace

    @property
    def is_diagonal(self) -> bool:
        return sum(1 for v in self.lam if v) > 1


def diagonal_subspace(cls: IsoClass, lam) -> Subspace:
    """The subspace attached to a coefficient vector lam over the members."""
    L_field = cls.representative.field
    d = cls.block_dim
    ambient = cls.representative.ambient_dim
    rows = np.zeros((d, ambient), dtype=np.int64)
    for a in range(d):
        acc = np.zeros(ambient, dtype=np.int64)
        for lv, phi, member in zip(lam, cls.phis, cls.members):
            if lv:
                img = phi.a[:, a]  # phi(e_a) in member coordinates
                vec = member.lift(img)
                acc = L_field.add(acc, L_field.mul(np.int64(int(lv)), vec))
        rows[a] = acc
    return Subspace(L_field, ambient, rows)


def enumerate_diagonals(
    L: LieAlgebra, cls: IsoClass, enum_cap: int = DEFAULT_ENUM_CAP
) -> list[DiagonalSpec]:
    """All normalized lam vectors over the members, each verified minimal."""
    from .rep import Representation

    q = L.field.order
    r = cls.multiplicity
    count = (q**r - 1) // (q - 1)
    if count > enum_cap:
        raise CapExceededError(
            f"{count} projective points exceeds the enumeration cap {enum_cap}"
        )
    out = []
    for lam in _projective_points(q, r):
        S = diagonal_subspace(cls, lam)
        if S.dim != cls.block_dim or not L.is_ideal(S):
            raise VerificationError("diagonal subspace is not an ideal of the right size")
        if not ideal_module(L, S).is_irreducible(seed=derive_seed(0, "diag"))[0]:
            raise VerificationError("diagonal subspace is not a minimal ideal")
        out.append(DiagonalSpec(iso_class=cls, lam=lam, subspace=S))
    return out


def derivations(L: LieAlgebra) -> list[Matrix]:
    """Basis of the derivation algebra, as matrices on the defining basis."""
    F = L.field
    n = L.dim
    if n == 0:
        return []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    A = np.zeros((len(pairs) * n, n * n), dtype=np.int64)
    for row_block, (i, j) in enumerate(pairs):
        cij = L.c[i, j]
        for k in range(n):
            row = row_block * n + k
            # D applied to [b_i, b_j]: sum_l c_ij[l] * D[k, l]
            for l in range(n):
                if cij[l]:
                    A[row, k * n + l] = F.add_s(int(A[row, k * n + l]), int(cij[l]))
            # minus [D b_i, b_j]: sum_m D[m, i] c[m, j, k]
            for m in range(n):
                v = int(L.c[m, j, k])
                if v:
                    A[row, m * n + i] = F.sub_s(int(A[row, m * n + i]), v)
            # minus [b_i, D b_j]: sum_m D[m, j] c[i, m, k]
            for m in range(n):
                v = int(L.c[i, m, k])
                if v:
                    A[row, m * n + j] = F.sub_s(int(A[row, m * n + j]), v)
    ker = kernel_array(F, A)
    return [Matrix(F, ker[r].reshape(n, n).copy()) for r in range(ker.shape[0])]
