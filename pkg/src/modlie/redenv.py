"""Reduced enveloping algebras by PBW monomials and straightening.

For a restricted algebra over E and a character chi over E, the algebra on
the monomial basis b_1^(e_1) ... b_n^(e_n), 0 <= e_i < p, with the relations
b_i b_j - b_j b_i = [b_i, b_j] and b_i^p = b_i^[p] + chi(b_i)^p has dimension
p^n; its regular module realises every irreducible module with the given
character, which is how irreducible modules with a prescribed cluster are
constructed.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import CapExceededError, ValidationError, VerificationError
from .field import FiniteField
from .liealg import LieAlgebra
from .linalg import Matrix
from .poly import Poly, min_poly_over_subfield
from .rep import Character, Representation, cluster_of_module
from .restricted import RestrictedLieAlgebra
from .util import derive_seed

DEFAULT_ENV_CAP = 2**13


class ReducedEnvAlgebra:
    """A character-reduced enveloping algebra on its PBW monomial basis."""

    __slots__ = ("restricted", "chi", "monomials", "index", "left_mult", "_memo")

    def __init__(self, restricted: RestrictedLieAlgebra, chi: Character, env_cap: int = DEFAULT_ENV_CAP):
        L = restricted.lie
        E = L.field
        if chi.field != E:
            raise ValidationError("character must live over the algebra's field")
        n = L.dim
        p = E.p
        dim = p**n
        if dim > env_cap:
            raise CapExceededError(
                f"regular module dimension {p}^{n} exceeds the cap {env_cap}"
            )
        self.restricted = restricted
        self.chi = chi
        self.monomials = list(itertools.product(range(p), repeat=n))
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self._memo: dict[tuple[int, tuple[int, ...]], dict[tuple[int, ...], int]] = {}
        mats = np.zeros((n, dim, dim), dtype=np.int64)
        for i in range(n):
            for col, mono in enumerate(self.monomials):
                for mono2, coeff in self._mul_gen(i, mono).items():
                    mats[i][self.index[mono2], col] = coeff
        self.left_mult = mats
        self._memo.clear()
        self._self_check()

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def field(self) -> FiniteField:
        return self.restricted.lie.field

    def _mul_gen(self, i: int, mono: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        """Straighten b_i * mono into the monomial basis; {monomial: coeff}."""
        key = (i, mono)
        got = self._memo.get(key)
        if got is not None:
            return got
        L = self.restricted.lie
        E = L.field
        p = E.p
        j = next((k for k, e in enumerate(mono) if e), None)
        if j is None or i < j:
            out = {_inc(mono, i): 1}
        elif i == j and mono[i] < p - 1:
            out = {_inc(mono, i): 1}
        elif i == j:
            # exponent overflow: b_i^p = b_i^[p] + chi(b_i)^p
            rest = _set0(mono, i)
            out: dict[tuple[int, ...], int] = {}
            for k, w in enumerate(self.restricted.pmap.values[i]):
                if w:
                    _accumulate(E, out, self._mul_gen(k, rest), int(w))
            cp = E.pow_s(self.chi.values[i], p)
            if cp:
                out[rest] = E.add_s(out.get(rest, 0), cp)
                if not out[rest]:
                    del out[rest]
        else:
            # commute past the leading generator: b_i b_j = b_j b_i + [b_i, b_j]
            m2 = _dec(mono, j)
            out = {}
            for mono2, coeff in self._mul_gen(i, m2).items():
                _accumulate(E, out, self._mul_gen(j, mono2), coeff)
            for k, ck in enumerate(L.c[i, j]):
                if ck:
                    _accumulate(E, out, self._mul_gen(k, m2), int(ck))
        self._memo[key] = out
        return out

    def regular_representation(self, algebra: LieAlgebra | None = None) -> Representation:
        """The regular module, viewed as a representation of `algebra`.

        By default the representation is over the extended algebra itself;
        passing the original base-field algebra gives the module the
        construction actually feeds downstream.
        """
        target = algebra if algebra is not None else self.restricted.lie
        return Representation(target, self.field, self.left_mult.copy())

    def left_mult_matrix(self, vec: np.ndarray) -> np.ndarray:
        """Left multiplication by an arbitrary algebra element (basis coords)."""
        E = self.field
        dim = self.dim
        out = np.zeros((dim, dim), dtype=np.int64)
        n = self.restricted.lie.dim
        for idx, coeff in enumerate(np.asarray(vec, dtype=np.int64)):
            if not coeff:
                continue
            M = np.eye(dim, dtype=np.int64)
            # leftmost generator factor is applied last
            for gi in range(n - 1, -1, -1):
                for _ in range(self.monomials[idx][gi]):
                    M = E.dot(self.left_mult[gi], M)
            out = E.add(out, E.mul(M, np.int64(int(coeff))))
        return out

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of two elements given on the monomial basis."""
        return self.field.mat_vec(self.left_mult_matrix(a), b)

    def one_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index[tuple([0] * self.restricted.lie.dim)]] = 1
        return v

    def _self_check(self):
        E = self.field
        L = self.restricted.lie
        p = E.p
        rep = self.regular_representation()
        report = rep.validate()
        if report is not None:
            raise VerificationError(f"regular module broke: {report}")
        ident = np.eye(self.dim, dtype=np.int64)
        for i in range(L.dim):
            lhs = np.asarray((Matrix(E, self.left_mult[i]) ** p).a)
            lhs = E.sub(lhs, rep.action(self.restricted.pmap.values[i]))
            want = E.mul(ident, np.int64(E.pow_s(self.chi.values[i], p)))
            if not np.array_equal(lhs, want):
                raise VerificationError(
                    f"p-relation fails on basis element {i} of the reduced algebra"
                )


def _inc(mono: tuple[int, ...], i: int) -> tuple[int, ...]:
    return mono[:i] + (mono[i] + 1,) + mono[i + 1 :]


def _dec(mono: tuple[int, ...], i: int) -> tuple[int, ...]:
    return mono[:i] + (mono[i] - 1,) + mono[i + 1 :]


def _set0(mono: tuple[int, ...], i: int) -> tuple[int, ...]:
    return mono[:i] + (0,) + mono[i + 1 :]


def _accumulate(E: FiniteField, out: dict, terms: dict, scalar: int):
    for mono, coeff in terms.items():
        v = E.add_s(out.get(mono, 0), E.mul_s(scalar, coeff))
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)


def build_reduced_env(
    R: RestrictedLieAlgebra, chi: Character, env_cap: int = DEFAULT_ENV_CAP
) -> ReducedEnvAlgebra:
    """Construct the chi-reduced enveloping algebra of a restricted algebra."""
    return ReducedEnvAlgebra(R, chi, env_cap=env_cap)


def m_x_poly(chi: Character, x, F: FiniteField) -> Poly:
    """Minimal polynomial over F of chi(x)^p; conjugation invariant."""
    E = chi.field
    val = chi.value(np.asarray(x, dtype=np.int64))
    return min_poly_over_subfield(
        E.from_packed(E.pow_s(val, E.p)), F
    )


def irreducible_with_cluster(
    L: LieAlgebra,
    pmap,
    c: Character,
    seed: int = 0,
    env_cap: int = DEFAULT_ENV_CAP,
    degree_cap: int = 12,
) -> Representation:
    """A base-field irreducible module whose cluster is the orbit of c.

    Chops the regular module of the reduced enveloping algebra over c's field,
    restricts scalars, chops again, and verifies the cluster before returning.
    """
    E = c.field
    R = RestrictedLieAlgebra(L, pmap).extend_scalars(E)
    c_ext = Character(R.lie, E, c.values)
    u = ReducedEnvAlgebra(R, c_ext, env_cap=env_cap)
    regular = Representation(L, E, u.left_mult.copy())
    W = regular.composition_series(seed=derive_seed(seed, "env-chop-E"))[0]
    VF = W.restrict_scalars()
    V = VF.composition_series(seed=derive_seed(seed, "env-chop-F"))[0]
    cl = cluster_of_module(V, pmap, seed=derive_seed(seed, "env-cluster"), degree_cap=degree_cap)
    if not cl.subset_of_orbit(c):
        raise VerificationError(
            "constructed module's cluster escaped the conjugation orbit of the character"
        )
    return V
