"""Dense exact linear algebra over GF(p^k).

Matrices are numpy arrays of field encodings (see :mod:`kuelsh.field`).
Vectors are rows; a subspace is stored as its canonical reduced row echelon
basis, so two spans of the same space compare equal as arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadTwist, DegenerateForm, DimensionMismatch, NotASubspace
from .field import FieldDesc


def rref(F: FieldDesc, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = np.array(m, dtype=F.dtype, copy=True)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = F.vscale(F.inv(lead), a[r])
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if len(others):
            factors = a[others, c][:, None]
            a[others] = F.vsub(a[others], F.vmul(factors, a[r][None, :]))
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(F: FieldDesc, m) -> int:
    """Rank by forward elimination; touches only rows below each pivot."""
    a = np.array(m, dtype=F.dtype, copy=True)
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r, c:] = F.vscale(F.inv(lead), a[r, c:])
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if len(below):
            a[below, c:] = F.vsub(a[below, c:], F.vmul(a[below, c][:, None], a[r, c:][None, :]))
        r += 1
    return r


def _nullspace_rows(F: FieldDesc, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=F.dtype)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(ncols, dtype=F.dtype)
    r, pivots = rref(F, m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = F.zeros((len(free), ncols))
    for i, f in enumerate(free):
        out[i, f] = 1
        for row, pc in enumerate(pivots):
            out[i, pc] = F.neg(int(r[row, f]))
    return out


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F^d held as a canonical RREF basis."""

    field: FieldDesc
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...] = dc_field(default=())

    @classmethod
    def span(cls, F: FieldDesc, ambient: int, vectors) -> "Subspace":
        vecs = np.asarray(vectors, dtype=F.dtype)
        if vecs.size == 0:
            return cls.zero(F, ambient)
        vecs = vecs.reshape(-1, ambient) if vecs.ndim == 1 else vecs
        if vecs.shape[1] != ambient:
            raise DimensionMismatch(f"vectors of length {vecs.shape[1]} in F^{ambient}")
        r, piv = rref(F, vecs)
        return cls(F, ambient, r, tuple(piv))

    @classmethod
    def zero(cls, F: FieldDesc, ambient: int) -> "Subspace":
        return cls(F, ambient, F.zeros((0, ambient)), ())

    @classmethod
    def full(cls, F: FieldDesc, ambient: int) -> "Subspace":
        return cls(F, ambient, np.eye(ambient, dtype=F.dtype), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient or self.field != other.field:
            raise DimensionMismatch(
                f"subspaces of F^{self.ambient} and F^{other.ambient} (or different fields)"
            )

    def reduce(self, v) -> np.ndarray:
        """Remainder of v modulo the subspace (zero iff v is a member)."""
        F = self.field
        v = np.array(v, dtype=F.dtype, copy=True)
        for row, pc in zip(self.basis, self.pivots):
            c = int(v[pc])
            if c:
                v = F.vsub(v, F.vscale(c, row))
        return v

    def contains(self, v) -> bool:
        if isinstance(v, Subspace):
            self._check(v)
            return all(self.contains(row) for row in v.basis)
        v = np.asarray(v)
        if v.shape[-1] != self.ambient:
            raise DimensionMismatch(f"vector of length {v.shape[-1]} in F^{self.ambient}")
        return not np.any(self.reduce(v) != 0)

    __contains__ = contains

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.field == other.field
            and self.basis.shape == other.basis.shape
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis.tobytes()))

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient, np.vstack([self.basis, other.basis]))

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: rref of [[A, A], [B, 0]]; zero-left rows span A ∩ B."""
        self._check(other)
        F, d = self.field, self.ambient
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(F, d)
        top = np.hstack([self.basis, self.basis])
        bottom = np.hstack([other.basis, F.zeros(other.basis.shape)])
        r, _ = rref(F, np.vstack([top, bottom]))
        left_zero = ~np.any(r[:, :d] != 0, axis=1)
        return Subspace.span(F, d, r[left_zero][:, d:])

    __and__ = intersect

    def quotient_dim(self, sub: "Subspace") -> int:
        """dim(self / sub); sub must lie inside self."""
        self._check(sub)
        if not self.contains(sub):
            raise NotASubspace("quotient_dim requires the second space to lie in the first")
        return self.dim - sub.dim

    def map_rows(self, fn) -> "Subspace":
        return Subspace.span(self.field, self.ambient, fn(self.basis))

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field!r})"


def kernel(F: FieldDesc, m) -> Subspace:
    """{v : m @ v = 0}."""
    m = np.asarray(m, dtype=F.dtype)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return Subspace.span(F, m.shape[1], _nullspace_rows(F, m))


def image(F: FieldDesc, m) -> Subspace:
    """Column span of m."""
    m = np.asarray(m, dtype=F.dtype)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return Subspace.span(F, m.shape[0], m.T)


def subspace_ops(a: Subspace, b: Subspace, op: str):
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "contains":
        return a.contains(b)
    if op == "quotient_dim":
        return a.quotient_dim(b)
    raise ValueError(f"unknown subspace operation {op!r}")


def solve(F: FieldDesc, a, b) -> np.ndarray:
    """Solve a @ x = b for square invertible a."""
    a = np.asarray(a, dtype=F.dtype)
    b = np.asarray(b, dtype=F.dtype)
    n = a.shape[0]
    r, piv = rref(F, np.hstack([a, b.reshape(n, -1)]))
    if piv[:n] != list(range(n)) or len(piv) > n:
        raise DegenerateForm("matrix is singular")
    x = r[:n, n:]
    return x.reshape(b.shape)


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Gram matrix G with G[i, j] = (b_i, b_j)."""

    field: FieldDesc
    gram: np.ndarray

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def is_symmetric(self) -> bool:
        return bool(np.all(self.gram == self.gram.T))

    def is_nondegenerate(self) -> bool:
        return rank(self.field, self.gram) == self.dim

    def pair(self, x, y) -> int:
        F = self.field
        return F.dot(F.matmul(np.asarray(x)[None, :], self.gram)[0], np.asarray(y))


def orthogonal_complement(m: Subspace, form: BilinearForm) -> Subspace:
    """{y : (y, x) = 0 for all x in m}."""
    F = m.field
    if form.dim != m.ambient:
        raise DimensionMismatch("form and subspace have different ambient dimensions")
    if not form.is_nondegenerate():
        raise DegenerateForm("orthogonal complement needs a nondegenerate form")
    if m.dim == 0:
        return Subspace.full(F, m.ambient)
    # (y, x) = y^T G x, so y must be killed by the rows (G x)^T = x^T G^T
    return kernel(F, F.matmul(m.basis, form.gram.T))


def _twist_exponent(F: FieldDesc, twist: int) -> int:
    if twist < 1:
        raise BadTwist(f"twist must be a power of {F.p}, got {twist}")
    n, t = 0, twist
    while t % F.p == 0:
        t //= F.p
        n += 1
    if t != 1:
        raise BadTwist(f"twist must be a power of {F.p}, got {twist}")
    return n


def semilinear_kernel(F: FieldDesc, vectors, twist: int, ambient: int | None = None) -> Subspace:
    """Coefficient vectors c with sum_i c_i^twist * vectors[i] = 0.

    Solve for d_i = c_i^twist linearly, then take twist-th roots
    coordinatewise; Frobenius is additive and bijective, so the roots of a
    subspace form a subspace.
    """
    n = _twist_exponent(F, twist)
    vecs = np.asarray(vectors, dtype=F.dtype)
    if vecs.size == 0:
        return Subspace.full(F, ambient if ambient is not None else len(vecs))
    lin = kernel(F, vecs.T)
    if n % F.k == 0:
        return lin
    return lin.map_rows(lambda rows: F.vfrob_inv(rows, n))
