"""Hochschild cohomology dimensions in degrees 0, 1, 2.

Two cochain complexes are available:

``relative``
    The reduced bar complex relative to the semisimple subalgebra E spanned
    by the vertex idempotents.  An n-cochain assigns to each composable
    n-tuple of radical basis paths an element of A parallel to it.
``bar``
    The normalized bar complex over the ground field (arguments range over
    a complement of the unit).  Exponentially larger; kept as an oracle for
    small algebras.

Both use the differential

    (δf)(a1..a_{n+1}) = a1 f(a2..) + Σ (-1)^i f(..a_i a_{i+1}..) + (-1)^{n+1} f(..a_n) a_{n+1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComplexError, DegreeUnsupported, OracleTooLarge
from .field import FieldDesc
from .linalg import rank
from .rewrite import AlgebraTable

MAX_DEGREE = 2
BAR_LIMIT = 16


@dataclass
class _Complex:
    field: FieldDesc
    mul: np.ndarray  # structure constants in the working basis
    src: list
    tgt: list
    vertices: list
    letters: list  # working-basis indices that may appear as arguments

    def __post_init__(self):
        self.letter_set = set(self.letters)
        self.letters_from = {v: [a for a in self.letters if self.src[a] == v] for v in self.vertices}
        self.parallel = {}
        for b in range(len(self.src)):
            self.parallel.setdefault((self.src[b], self.tgt[b]), []).append(b)
        self._tuples = {}
        self._bases = {}

    def tuples(self, n: int) -> list:
        """Composable n-tuples in lexicographic order; degree 0 has one empty tuple per vertex."""
        if n in self._tuples:
            return self._tuples[n]
        if n == 0:
            out = [("e", v) for v in self.vertices]
        elif n == 1:
            out = [(a,) for a in self.letters]
        else:
            out = [t + (a,) for t in self.tuples(n - 1) for a in self.letters_from[self.tgt[t[-1]]]]
        self._tuples[n] = out
        return out

    def ends(self, t) -> tuple:
        if t[0] == "e":
            return (t[1], t[1])
        return (self.src[t[0]], self.tgt[t[-1]])

    def basis(self, n: int) -> tuple[list, dict]:
        if n not in self._bases:
            cols = [(t, b) for t in self.tuples(n) for b in self.parallel.get(self.ends(t), [])]
            self._bases[n] = (cols, {c: i for i, c in enumerate(cols)})
        return self._bases[n]

    def dim(self, n: int) -> int:
        return len(self.basis(n)[0])

    def differential(self, n: int) -> np.ndarray:
        """Matrix of δ^n : C^n -> C^{n+1} (rows index C^{n+1})."""
        F, C = self.field, self.mul
        rows, _ = self.basis(n + 1)
        _, col_index = self.basis(n)
        row_index = {r: i for i, r in enumerate(rows)}
        acc: dict = {}

        def put(r, c, val):
            if val:
                key = (r, c)
                acc[key] = F.add(acc.get(key, 0), val)

        for T in self.tuples(n + 1):
            s, e = self.ends(T)
            out_rows = self.parallel.get((s, e), [])
            if not out_rows:
                continue
            a1, an = T[0], T[-1]
            head = T[1:] if n else ("e", self.tgt[a1])
            tail = T[:-1] if n else ("e", self.src[a1])
            # a1 * f(head)
            for b in self.parallel.get(self.ends(head), []):
                c = col_index[(head, b)]
                for k in np.flatnonzero(C[a1, b]):
                    put(row_index[(T, int(k))], c, int(C[a1, b, k]))
            # inner contractions
            for i in range(1, n + 1):
                sign = i % 2
                prod = C[T[i - 1], T[i]]
                for r in np.flatnonzero(prod):
                    r = int(r)
                    if r not in self.letter_set:
                        continue  # component along E (or the unit) is killed by normalization
                    v = int(prod[r])
                    if sign:
                        v = F.neg(v)
                    S = T[: i - 1] + (r,) + T[i + 1 :]
                    for b in out_rows:
                        put(row_index[(T, b)], col_index[(S, b)], v)
            # (-1)^(n+1) f(tail) * an
            odd = (n + 1) % 2
            for b in self.parallel.get(self.ends(tail), []):
                c = col_index[(tail, b)]
                for k in np.flatnonzero(C[b, an]):
                    v = int(C[b, an, k])
                    put(row_index[(T, int(k))], c, F.neg(v) if odd else v)
        m = F.zeros((len(rows), len(col_index)))
        for (r, c), v in acc.items():
            m[r, c] = v
        return m


def _relative_complex(t: AlgebraTable) -> _Complex:
    rad = [i for i, g in enumerate(t.grading) if g >= 1]
    return _Complex(t.field, t.mul, list(t.sources), list(t.targets), list(range(t.vertex_count)), rad)


def _bar_complex(t: AlgebraTable) -> _Complex:
    """Normalized bar complex over the ground field.

    Working basis: 1 in place of the first idempotent, other basis
    elements unchanged; arguments range over everything except 1.
    """
    F, d = t.field, t.dim
    i0 = t.idempotents[0]
    others = [i for i in t.idempotents if i != i0]
    P = np.eye(d, dtype=F.dtype)
    P[i0] = t.one()
    C = t.mul.reshape(d, d * d)
    W = F.zeros((d, d, d))
    for a in range(d):
        # row j of Ca: P_a * b_j in old coordinates
        Ca = F.matmul(P[a][None, :], C)[0].reshape(d, d)
        W[a] = F.matmul(P, Ca)
    # old -> working coordinates: 1 takes the coefficient of e_{i0}, and
    # the other idempotents shed it
    if others:
        W[..., others] = F.vsub(W[..., others], W[..., [i0]])
    letters = [i for i in range(d) if i != i0]
    return _Complex(F, W, [0] * d, [0] * d, [0], letters)


def _complex(t: AlgebraTable, method: str) -> _Complex:
    if method == "relative":
        return _relative_complex(t)
    if method == "bar":
        if t.dim > BAR_LIMIT:
            raise OracleTooLarge(f"bar-complex oracle limited to dim <= {BAR_LIMIT}, got {t.dim}", dim=t.dim)
        return _bar_complex(t)
    raise ValueError(f"unknown method {method!r}")


def _check_degree(n: int) -> None:
    if not 0 <= n <= MAX_DEGREE:
        raise DegreeUnsupported(f"Hochschild degrees 0..{MAX_DEGREE} are supported, got {n}", degree=n)


def hh_differential(t: AlgebraTable, n: int, method: str = "relative") -> np.ndarray:
    _check_degree(n)
    return _complex(t, method).differential(n)


@dataclass
class HHResult:
    degree: int
    dim: int
    method: str
    cochain_dims: list
    ranks: dict

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.dim,
            "method": self.method,
            "cochain_dims": self.cochain_dims,
            "rank_data": {f"delta{k}": v for k, v in sorted(self.ranks.items())},
        }


def _assert_complex(F: FieldDesc, upper: np.ndarray, lower: np.ndarray, n: int) -> None:
    if upper.size and lower.size and np.any(F.matmul(upper, lower) != 0):
        raise ComplexError(f"delta^{n} o delta^{n - 1} is not zero")


def hh_compute(t: AlgebraTable, n: int, method: str = "relative", check: bool = True) -> HHResult:
    _check_degree(n)
    cx = _complex(t, method)
    F = t.field
    dn = cx.differential(n)
    ranks = {n: rank(F, dn)}
    if n > 0:
        dprev = cx.differential(n - 1)
        ranks[n - 1] = rank(F, dprev)
        if check:
            _assert_complex(F, dn, dprev, n)
    dim = cx.dim(n) - ranks[n] - ranks.get(n - 1, 0)
    dims = [cx.dim(k) for k in range(n + 2)]
    return HHResult(n, dim, method, dims, ranks)


def hh_dim(t: AlgebraTable, n: int, method: str = "relative") -> int:
    return hh_compute(t, n, method).dim


def hh_dims(t: AlgebraTable, degrees=(0, 1, 2), method: str = "relative") -> dict:
    """Several degrees sharing one complex (each differential built once)."""
    for n in degrees:
        _check_degree(n)
    cx = _complex(t, method)
    F = t.field
    top = max(degrees)
    diffs = [cx.differential(k) for k in range(top + 1)]
    ranks = [rank(F, m) for m in diffs]
    for k in range(1, top + 1):
        _assert_complex(F, diffs[k], diffs[k - 1], k)
    return {n: cx.dim(n) - ranks[n] - (ranks[n - 1] if n else 0) for n in degrees}
