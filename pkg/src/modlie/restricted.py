"""Restricted structure: p-maps, their evaluation, normalization, p-envelopes.

A p-map is stored by its values on the defining basis; evaluation on general
elements runs through Jacobson's summation rule, realised as exact matrix
polynomial expansion of ad(t*u + v)^(p-1) applied to u.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import CapExceededError, ValidationError, VerificationError
from .field import FiniteField, embedding
from .liealg import LieAlgebra, abelian_socle
from .linalg import Matrix, Subspace, rref_array
from .util import derive_seed

DEFAULT_P_CAP = 7
DEFAULT_ENVELOPE_DIM_CAP = 64


def jacobson_terms(L: LieAlgebra, u, v, p_cap: int = DEFAULT_P_CAP) -> list[np.ndarray]:
    """The correction terms s_1, ..., s_(p-1) of Jacobson's formula.

    Defined by sum_i i * s_i(u, v) t^(i-1) = ad(t*u + v)^(p-1) (u), read off
    by expanding the matrix polynomial in t.
    """
    F = L.field
    p = F.p
    if p > p_cap:
        raise CapExceededError(f"characteristic {p} exceeds the cap {p_cap}")
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    adu = L.ad(u).a
    adv = L.ad(v).a
    # coefficient vectors of the t-polynomial, degree grows by one per step
    coeffs = [u]
    for _ in range(p - 1):
        nxt = [np.zeros(L.dim, dtype=np.int64) for _ in range(len(coeffs) + 1)]
        for j, vec in enumerate(coeffs):
            nxt[j + 1] = F.add(nxt[j + 1], F.mat_vec(adu, vec))
            nxt[j] = F.add(nxt[j], F.mat_vec(adv, vec))
        coeffs = nxt
    out = []
    for i in range(1, p):
        inv_i = pow(i, p - 2, p) if p > 2 else 1
        out.append(F.mul(coeffs[i - 1], np.int64(inv_i)))
    return out


class PMap:
    """A p-operation given by its values on the defining basis."""

    __slots__ = ("algebra", "values")

    def __init__(self, algebra: LieAlgebra, values):
        arr = np.asarray(values, dtype=np.int64)
        if arr.shape != (algebra.dim, algebra.dim):
            raise ValidationError("p-map needs one value vector per basis element")
        self.algebra = algebra
        self.values = arr

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "PMap":
        return cls(algebra, np.zeros((algebra.dim, algebra.dim), dtype=np.int64))

    def eval(self, x) -> np.ndarray:
        """x^[p] for an arbitrary element, via the summation rule."""
        L = self.algebra
        F = L.field
        p = F.p
        x = np.asarray(x, dtype=np.int64)
        terms = [(i, int(x[i])) for i in range(L.dim) if x[i]]
        result = np.zeros(L.dim, dtype=np.int64)
        for idx, (i, a) in enumerate(terms):
            result = F.add(result, F.mul(self.values[i], np.int64(F.pow_s(a, p))))
            rest = np.zeros(L.dim, dtype=np.int64)
            for j, b in terms[idx + 1 :]:
                rest[j] = b
            if rest.any():
                head = np.zeros(L.dim, dtype=np.int64)
                head[i] = a
                for s in jacobson_terms(L, head, rest):
                    result = F.add(result, s)
        return result


class RestrictedLieAlgebra:
    """A Lie algebra together with a validated-on-demand p-map."""

    __slots__ = ("lie", "pmap")

    def __init__(self, lie: LieAlgebra, pmap: PMap):
        if pmap.algebra is not lie and not np.array_equal(pmap.algebra.c, lie.c):
            raise ValidationError("p-map belongs to a different algebra")
        self.lie = lie
        self.pmap = pmap

    def __repr__(self):
        return f"RestrictedLieAlgebra(dim={self.lie.dim}, field={self.lie.field!r})"

    def extend_scalars(self, E: FiniteField) -> "RestrictedLieAlgebra":
        F = self.lie.field
        if E == F:
            return self
        emb = embedding(F, E)
        lie_E = LieAlgebra(E, emb.apply(self.lie.c))
        pmap_E = PMap(lie_E, emb.apply(self.pmap.values))
        return RestrictedLieAlgebra(lie_E, pmap_E)


def pmap_validate(R: RestrictedLieAlgebra, samples: int = 100, seed: int = 0) -> str | None:
    """None when the p-map satisfies its defining identities, else a report."""
    L = R.lie
    F = L.field
    p = F.p
    for i in range(L.dim):
        lhs = L.ad(R.pmap.values[i]).a
        rhs = (L.ad(L.basis_vector(i)) ** p).a
        if not np.array_equal(lhs, rhs):
            return f"ad(b{i}^[p]) != ad(b{i})^p"
    rng = random.Random(derive_seed(seed, "pmap-validate"))
    for _ in range(samples):
        x = np.array([F.random_packed(rng) for _ in range(L.dim)], dtype=np.int64)
        vx = R.pmap.eval(x)
        if not np.array_equal(L.ad(vx).a, (L.ad(x) ** p).a):
            return f"ad(x^[p]) != ad(x)^p at x={x.tolist()}"
        a = F.random_packed(rng)
        lhs = R.pmap.eval(F.mul(x, np.int64(a)))
        rhs = F.mul(vx, np.int64(F.pow_s(a, p)))
        if not np.array_equal(lhs, rhs):
            return f"(a*x)^[p] != a^p * x^[p] at x={x.tolist()}"
    return None


def require_valid_pmap(R: RestrictedLieAlgebra, samples: int = 100, seed: int = 0):
    report = pmap_validate(R, samples=samples, seed=seed)
    if report is not None:
        raise ValidationError(f"invalid p-map: {report}")


def normalize_pmap_on_asoc(
    R: RestrictedLieAlgebra, enum_cap: int = 2**16
) -> RestrictedLieAlgebra:
    """A p-map on the same algebra that vanishes on the abelian socle.

    Subtracts the p-semilinear map agreeing with [p] on an adapted basis of
    the socle and vanishing on the canonical complement; the difference takes
    values in the centre, so the result is again a p-map.
    """
    L = R.lie
    F = L.field
    n = L.dim
    if n == 0:
        return R
    asoc = abelian_socle(L, enum_cap)
    if asoc.dim == 0:
        return R
    centre = L.center()
    for row in asoc.basis:
        if not centre.contains_vector(R.pmap.eval(row)):
            raise ValidationError(
                "p-th power of a socle element misses the centre; "
                "cannot normalize this p-map"
            )
    # adapted basis: socle rows, then canonical unit-vector complement
    comp = asoc.complement_indices()
    rows = [asoc.basis[i] for i in range(asoc.dim)]
    fvals = [R.pmap.eval(r) for r in rows]
    for j in comp:
        rows.append(np.eye(n, dtype=np.int64)[j])
        fvals.append(np.zeros(n, dtype=np.int64))
    C = Matrix(F, np.stack(rows))
    X = C.T.inverse().a  # column m = coordinates of e_m in the adapted basis
    new_vals = np.zeros((n, n), dtype=np.int64)
    for m in range(n):
        f_m = np.zeros(n, dtype=np.int64)
        for t_idx in range(n):
            g = int(X[t_idx, m])
            if g:
                f_m = F.add(f_m, F.mul(fvals[t_idx], np.int64(F.pow_s(g, F.p))))
        new_vals[m] = F.sub(R.pmap.eval(L.basis_vector(m)), f_m)
    out = RestrictedLieAlgebra(L, PMap(L, new_vals))
    report = pmap_validate(out, samples=25, seed=derive_seed(0, "normalize"))
    if report is not None:
        raise VerificationError(f"normalized p-map failed validation: {report}")
    for row in asoc.basis:
        if out.pmap.eval(row).any():
            raise VerificationError("normalized p-map does not vanish on the socle")
    return out


def p_envelope(
    L: LieAlgebra, dim_cap: int = DEFAULT_ENVELOPE_DIM_CAP
) -> tuple[RestrictedLieAlgebra, Matrix]:
    """A restricted algebra containing L as an ideal and p-generated by it.

    Works inside gl of the faithful module F + L with x.(t, y) = (0, t*x + [x,y]);
    the span of the image is closed under matrix p-th powers by iteration.
    Returns (G, rows) where row i gives the image of b_i in G coordinates.
    Minimality of the envelope is not promised.
    """
    F = L.field
    n = L.dim
    if n == 0:
        G = LieAlgebra.zero_algebra(F)
        return RestrictedLieAlgebra(G, PMap.zero(G)), Matrix.zeros(F, 0, 0)
    m = n + 1
    gens = []
    for i in range(n):
        M = np.zeros((m, m), dtype=np.int64)
        M[1:, 0] = L.basis_vector(i)
        M[1:, 1:] = L.ad(L.basis_vector(i)).a
        gens.append(M.reshape(-1))
    span = Subspace(F, m * m, np.stack(gens))
    while True:
        new_rows = [
            (Matrix(F, row.reshape(m, m).copy()) ** F.p).a.reshape(-1)
            for row in span.basis
        ]
        grown = span.add(Subspace(F, m * m, np.stack(new_rows)))
        if grown.dim == span.dim:
            break
        span = grown
        if span.dim > dim_cap:
            raise CapExceededError(
                f"p-envelope dimension exceeded the cap {dim_cap}"
            )
    d = span.dim
    basis_mats = [span.basis[k].reshape(m, m) for k in range(d)]
    constants = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            Ma, Mb = basis_mats[a], basis_mats[b]
            br = F.sub(F.dot(Ma, Mb), F.dot(Mb, Ma)).reshape(-1)
            if not span.contains_vector(br):
                raise VerificationError("matrix span is not bracket closed")
            constants[a, b] = span.coords(br)
    G = LieAlgebra(F, constants)
    pvals = np.zeros((d, d), dtype=np.int64)
    for a in range(d):
        Pa = (Matrix(F, basis_mats[a].copy()) ** F.p).a.reshape(-1)
        if not span.contains_vector(Pa):
            raise VerificationError("matrix span is not closed under p-th powers")
        pvals[a] = span.coords(Pa)
    R = RestrictedLieAlgebra(G, PMap(G, pvals))
    require_valid_pmap(R, samples=50)
    emb_rows = np.stack([span.coords(g) for g in gens])
    image = Subspace(F, d, emb_rows)
    if image.dim != n:
        raise VerificationError("algebra does not embed into its envelope")
    for a in range(d):
        for row in image.basis:
            if not image.contains_vector(G.bracket(G.basis_vector(a), row)):
                raise VerificationError("embedded algebra is not an ideal of the envelope")
    return R, Matrix(F, emb_rows)
