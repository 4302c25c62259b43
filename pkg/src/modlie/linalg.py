"""Dense exact linear algebra over a finite field.

Matrices wrap a 2-D int64 ndarray of packed field values and act on column
vectors.  Row reduction is fully reduced (RREF), so echelon bases are
canonical and subspace equality is plain array equality.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FFElement, FiniteField
from .poly import Poly


def rref_array(F: FiniteField, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of a packed array; returns (R, pivot columns)."""
    M = np.array(a, dtype=np.int64)
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        pv = int(M[r, c])
        if pv != 1:
            M[r] = F.mul(M[r], np.int64(F.inv_s(pv)))
        col = M[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            M[mask] = F.sub(M[mask], F.mul(col[mask, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M, tuple(pivots)


def kernel_array(F: FiniteField, a: np.ndarray) -> np.ndarray:
    """Rows spanning {x : a @ x = 0}, returned in RREF."""
    R, pivots = rref_array(F, a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for r, pc in enumerate(pivots):
            out[i, pc] = F.neg_s(int(R[r, fc]))
    R2, _ = rref_array(F, out)
    return R2


def solve_array(F: FiniteField, a: np.ndarray, b: np.ndarray):
    """One solution of a @ x = b, or None if inconsistent."""
    rows, cols = a.shape
    aug = np.concatenate([a, np.asarray(b, dtype=np.int64).reshape(rows, 1)], axis=1)
    R, pivots = rref_array(F, aug)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, cols]
    return x


class Matrix:
    """Matrix over a finite field; entries are packed ints internally."""

    __slots__ = ("field", "a")

    def __init__(self, field: FiniteField, data):
        self.field = field
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("matrix data must be 2-D")
        self.a = arr

    @classmethod
    def zeros(cls, field: FiniteField, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FiniteField, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_elements(cls, field: FiniteField, rows: Sequence[Sequence]) -> "Matrix":
        data = [[field.element(x).val for x in row] for row in rows]
        if not data:
            return cls.zeros(field, 0, 0)
        return cls(field, np.array(data, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __getitem__(self, idx) -> FFElement:
        i, j = idx
        return FFElement(self.field, int(self.a[i, j]))

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.a.tolist()})"

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.a.copy())

    def is_zero(self) -> bool:
        return not self.a.any()

    def sort_key(self):
        F = self.field
        return (
            self.a.shape,
            tuple(F.sort_key(int(v)) for v in self.a.reshape(-1)),
        )

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError("mixed fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.sub(self.a, other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.neg(self.a))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            return Matrix(self.field, self.field.dot(self.a, other.a))
        if isinstance(other, FFElement):
            return self.scale(other.val)
        return NotImplemented

    __matmul__ = __mul__

    def scale(self, s: int) -> "Matrix":
        return Matrix(self.field, self.field.mul(self.a, np.int64(s)))

    def __pow__(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy())

    def mat_vec(self, v: np.ndarray) -> np.ndarray:
        return self.field.mat_vec(self.a, v)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product."""
        self._check(other)
        F = self.field
        m, n = self.shape
        r, s = other.shape
        left = np.repeat(np.repeat(self.a, r, axis=0), s, axis=1)
        right = np.tile(other.a, (m, n))
        return Matrix(F, F.mul(left, right))

    # -- elimination --------------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...], int]:
        R, pivots = rref_array(self.field, self.a)
        return Matrix(self.field, R), pivots, len(pivots)

    def rank(self) -> int:
        return self.rref()[2]

    def kernel(self) -> "Matrix":
        """Rows spanning the right null space, in RREF."""
        return Matrix(self.field, kernel_array(self.field, self.a))

    def solve(self, b):
        return solve_array(self.field, self.a, np.asarray(b, dtype=np.int64))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self.a, np.eye(n, dtype=np.int64)], axis=1)
        R, pivots = rref_array(self.field, aug)
        if len(pivots) < n or any(p >= n for p in pivots):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, R[:, n:])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    # -- characteristic / minimal polynomials ----------------------------------------

    def char_poly(self) -> Poly:
        """Characteristic polynomial det(tI - M) via Hessenberg reduction."""
        if self.rows != self.cols:
            raise ValueError("characteristic polynomial of a non-square matrix")
        F = self.field
        n = self.rows
        if n == 0:
            return Poly.one(F)
        H = self.a.copy()
        for m in range(1, n - 1):
            nz = np.nonzero(H[m:, m - 1])[0]
            if nz.size == 0:
                continue
            i = m + int(nz[0])
            if i != m:
                H[[m, i]] = H[[i, m]]
                H[:, [m, i]] = H[:, [i, m]]
            t = int(H[m, m - 1])
            tinv = F.inv_s(t)
            col = H[m + 1 :, m - 1].copy()
            mask = col != 0
            if mask.any():
                u = F.mul(col[mask], np.int64(tinv))
                rows_idx = np.arange(m + 1, n)[mask]
                H[rows_idx] = F.sub(H[rows_idx], F.mul(u[:, None], H[m][None, :]))
                H[:, m] = F.add(H[:, m], F.sum(F.mul(u[None, :], H[:, rows_idx]), axis=1) if len(rows_idx) > 1 else F.mul(H[:, rows_idx[0]], np.int64(int(u[0]))))
        # recurrence on leading principal Hessenberg blocks
        polys = [Poly.one(F)]
        for m in range(1, n + 1):
            f = polys[m - 1] * Poly.from_packed(F, [F.neg_s(int(H[m - 1, m - 1])), 1])
            beta = 1
            for i in range(1, m):
                beta = F.mul_s(beta, int(H[m - i, m - i - 1]))
                coef = F.mul_s(int(H[m - 1 - i, m - 1]), beta)
                if coef:
                    f = f - polys[m - 1 - i].scale(coef)
            polys.append(f)
        return polys[n]

    def min_poly(self) -> Poly:
        """Minimal polynomial via Krylov sequences and lcm accumulation."""
        if self.rows != self.cols:
            raise ValueError("minimal polynomial of a non-square matrix")
        F = self.field
        n = self.rows
        if n == 0:
            return Poly.one(F)
        result = Poly.one(F)
        processed = np.zeros((0, n), dtype=np.int64)
        for s in range(n):
            if result.degree == n:
                break
            e = np.zeros(n, dtype=np.int64)
            e[s] = 1
            if processed.shape[0]:
                stacked = np.vstack([processed, e])
                if len(rref_array(F, stacked)[1]) == processed.shape[0]:
                    continue
            # Krylov chain from e until dependence; relation gives a local divisor
            chain = [e]
            while True:
                nxt = F.mat_vec(self.a, chain[-1])
                M = np.vstack(chain + [nxt]).T  # columns are the chain
                coeffs = solve_array(F, M[:, :-1], nxt)
                if coeffs is not None:
                    local = Poly.from_packed(
                        F, [F.neg_s(int(c)) for c in coeffs] + [1]
                    )
                    break
                chain.append(nxt)
            result = poly_lcm(result, local)
            processed = rref_array(F, np.vstack([processed] + chain))[0]
            processed = processed[~np.all(processed == 0, axis=1)]
        return result


def poly_lcm(a: Poly, b: Poly) -> Poly:
    from .poly import poly_gcd

    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    return ((a * b) // poly_gcd(a, b)).monic()


def evaluate_poly(f: Poly, M: Matrix) -> Matrix:
    """f(M) by Horner's rule."""
    F = M.field
    n = M.rows
    acc = Matrix.zeros(F, n, n)
    ident = Matrix.identity(F, n)
    for v in reversed(f.c):
        acc = acc * M + ident.scale(int(v))
    return acc


class Subspace:
    """Row space of a canonical RREF basis inside F^ambient_dim.

    Equality of subspaces is equality of basis arrays; sort_key gives a
    deterministic total order used for canonical output.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: FiniteField, ambient_dim: int, rows=None):
        self.field = field
        self.ambient_dim = ambient_dim
        if rows is None or (hasattr(rows, "__len__") and len(rows) == 0):
            self.basis = np.zeros((0, ambient_dim), dtype=np.int64)
            self.pivots = ()
        else:
            arr = np.asarray(rows, dtype=np.int64).reshape(-1, ambient_dim)
            R, piv = rref_array(field, arr)
            R = R[: len(piv)]
            self.basis = R
            self.pivots = piv

    @classmethod
    def zero(cls, field: FiniteField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim)

    @classmethod
    def full(cls, field: FiniteField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def sort_key(self):
        # rows compare as little-endian coordinate words, so the span of e_0
        # precedes the span of e_1; this fixes all canonical output orders
        return (
            self.dim,
            tuple(tuple(int(v) for v in row[::-1]) for row in self.basis),
        )

    def contains_vector(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).copy()
        F = self.field
        for r, c in enumerate(self.pivots):
            if v[c]:
                v = F.sub(v, F.mul(np.int64(int(v[c])), self.basis[r]))
        return not v.any()

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(row) for row in other.basis)

    def coords(self, v) -> np.ndarray:
        """Coordinates of a member vector w.r.t. the RREF basis."""
        v = np.asarray(v, dtype=np.int64)
        out = v[list(self.pivots)].copy() if self.pivots else np.zeros(0, dtype=np.int64)
        return out

    def lift(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if self.dim == 0:
            return np.zeros(self.ambient_dim, dtype=np.int64)
        return self.field.dot(coords.reshape(1, -1), self.basis)[0]

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace(
            self.field, self.ambient_dim, np.vstack([self.basis, other.basis])
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        # rows of the kernel of [A^T | B^T] give coefficients; use the A part
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        stacked = np.concatenate([self.basis.T, other.basis.T], axis=1)
        ker = kernel_array(self.field, stacked)
        if ker.shape[0] == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        coeffs = ker[:, : self.dim]
        vecs = self.field.dot(coeffs, self.basis)
        return Subspace(self.field, self.ambient_dim, vecs)

    def complement_indices(self) -> tuple[int, ...]:
        """Canonical unit vectors extending the basis to the full space."""
        return tuple(
            j for j in range(self.ambient_dim) if j not in self.pivots
        )

    def perp(self) -> "Subspace":
        """Vectors orthogonal to this row space under the standard bilinear form."""
        return Subspace(
            self.field, self.ambient_dim, kernel_array(self.field, self.basis)
        )

    def restrict_matrix(self, M: np.ndarray) -> np.ndarray:
        """For M with M(self) <= self, the matrix of M in basis coordinates."""
        F = self.field
        img = F.dot(np.asarray(M, dtype=np.int64), self.basis.T)  # (n, d)
        return img[list(self.pivots), :] if self.pivots else np.zeros((0, 0), dtype=np.int64)

    def reduce_vector(self, v) -> np.ndarray:
        """v minus its projection: zeroes the pivot coordinates."""
        v = np.asarray(v, dtype=np.int64).copy()
        F = self.field
        for r, c in enumerate(self.pivots):
            if v[c]:
                v = F.sub(v, F.mul(np.int64(int(v[c])), self.basis[r]))
        return v
