"""Path rewriting, monomial bases and structure constants.

The ideal of relations is completed by linear algebra on truncated path
spaces: for a truncation length ``N`` we close the span of the relations
under left and right multiplication by arrows, discarding paths of length
``>= N``, and echelonise with respect to a multiplicative monomial order.
The leading monomials form a monomial ideal; the remaining (standard) paths
are a basis of ``kQ / (I + J^N)``.  Once the arrow ideal of that quotient is
nilpotent of index ``< N``, Nakayama's lemma gives ``J^m ⊆ I`` and the
quotient is the algebra itself.  Minimal leading monomials give the
rewrite rules of a confluent system.

Internal paths are tuples ``(source_vertex, a1, a2, ...)`` of integer
indices; a trivial path is ``(v,)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AssociativityFailure, BoundExceeded, InconsistentPresentation
from .field import FieldDesc
from .presentation import PathExpr, Presentation

Path = tuple[int, ...]
Poly = dict  # Path -> nonzero field encoding

DEFAULT_BOUND = 8
MAX_BOUND = 256
# paths stored in the truncated closure before giving up
PATH_BUDGET = 400_000
FULL_ASSOC_LIMIT = 64
ASSOC_SAMPLES = 100_000
ASSOC_SEED = 0


@dataclass(frozen=True)
class MonomialOrder:
    """Weight, then length, then lexicographic by arrow precedence.

    With ``local=True`` heavier (and longer) paths are *smaller*; rewriting
    then trades short paths for long ones, which is what reproduces bases
    written in terms of the longest nonzero paths.
    """

    precedence: tuple[int, ...]  # rank of each arrow index
    weights: tuple[int, ...]
    local: bool = False

    @classmethod
    def for_presentation(cls, pres: Presentation) -> "MonomialOrder":
        arrows = pres.quiver.arrows
        w = dict(pres.order.weights)
        return cls(
            precedence=tuple(range(len(arrows))),
            weights=tuple(w.get(a.name, 1) for a in arrows),
            local=pres.order.kind == "local",
        )

    def key(self, path: Path):
        arrows = path[1:]
        weight = sum(self.weights[a] for a in arrows)
        lex = tuple(self.precedence[a] for a in arrows)
        if self.local:
            return (-weight, -len(arrows), lex, path[0])
        return (weight, len(arrows), lex, path[0])

    def describe(self) -> str:
        return "local" if self.local else "deglex"


class _Quiver:
    """Integer view of a presentation's quiver."""

    def __init__(self, pres: Presentation):
        q = pres.quiver
        self.vertices = q.vertices
        self.arrow_names = tuple(a.name for a in q.arrows)
        self.src = tuple(q.vertex_index(a.source) for a in q.arrows)
        self.tgt = tuple(q.vertex_index(a.target) for a in q.arrows)
        self.out = [[] for _ in q.vertices]
        self.inc = [[] for _ in q.vertices]
        for i, (s, t) in enumerate(zip(self.src, self.tgt)):
            self.out[s].append(i)
            self.inc[t].append(i)

    def target(self, path: Path) -> int:
        return self.tgt[path[-1]] if len(path) > 1 else path[0]

    def concat(self, a: Path, b: Path) -> Path | None:
        if self.target(a) != b[0]:
            return None
        return a + b[1:]

    def from_expr(self, expr: PathExpr) -> Path:
        if not expr.arrows:
            return (self.vertices.index(expr.vertex),)
        idx = [self.arrow_names.index(n) for n in expr.arrows]
        return (self.src[idx[0]], *idx)

    def name(self, path: Path) -> str:
        if len(path) == 1:
            return f"e_{self.vertices[path[0]]}"
        return ".".join(self.arrow_names[a] for a in path[1:])

    def pretty(self, path: Path) -> str:
        """Compact name with powers, e.g. alpha^2.gamma."""
        if len(path) == 1:
            return f"e_{self.vertices[path[0]]}"
        out = []
        for a in path[1:]:
            n = self.arrow_names[a]
            if out and out[-1][0] == n:
                out[-1][1] += 1
            else:
                out.append([n, 1])
        return ".".join(n if k == 1 else f"{n}^{k}" for n, k in out)


def _poly_add_scaled(F: FieldDesc, target: dict, src: dict, c: int) -> None:
    """target += c * src (in place)."""
    for m, v in src.items():
        nv = F.add(target.get(m, 0), F.mul(c, v))
        if nv:
            target[m] = nv
        else:
            target.pop(m, None)


@dataclass
class RewriteSystem:
    """Confluent rewriting system for one presentation.

    ``rules`` maps a minimal non-standard path to its normal form; every
    path of length ``>= bound`` is zero.
    """

    presentation: Presentation
    order: MonomialOrder
    bound: int
    standard: list  # standard paths, sorted by order key
    rules: dict
    _rows: dict
    _quiver: _Quiver

    @property
    def field(self) -> FieldDesc:
        return self.presentation.field

    @property
    def quiver(self) -> _Quiver:
        return self._quiver

    @cached_property
    def _standard_set(self) -> frozenset:
        return frozenset(self.standard)

    @cached_property
    def _nf_cache(self) -> dict:
        return {}

    def nf_path(self, path: Path) -> dict:
        """Normal form of a single path (memoised)."""
        cache = self._nf_cache
        hit = cache.get(path)
        if hit is not None:
            return hit
        if len(path) - 1 >= self.bound:
            out = {}
        elif path in self._standard_set:
            out = {path: 1}
        else:
            F = self.field
            row = self._rows[path]
            out = {}
            for m, c in row.items():
                if m != path:
                    _poly_add_scaled(F, out, self.nf_path(m), F.neg(c))
        cache[path] = out
        return out

    def normal_form(self, poly: dict, strategy: str = "table") -> dict:
        """Reduce a path polynomial {path: coeff} to standard paths.

        ``strategy`` is ``table`` (direct lookup), or ``leftmost`` /
        ``rightmost`` rule application; all three agree by confluence.
        """
        F = self.field
        if strategy == "table":
            out: dict = {}
            for m, c in poly.items():
                if c:
                    _poly_add_scaled(F, out, self.nf_path(m), c)
            return out
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown strategy {strategy!r}")
        max_lhs = max((len(k) for k in self.rules), default=0)
        work = {m: c for m, c in poly.items() if c}
        out = {}
        while work:
            m = next(iter(work))
            c = work.pop(m)
            if len(m) - 1 >= self.bound:
                continue
            hit = self._find_redex(m, max_lhs, strategy == "leftmost")
            if hit is None:
                nv = F.add(out.get(m, 0), c)
                if nv:
                    out[m] = nv
                else:
                    out.pop(m, None)
                continue
            i, j, rhs = hit
            prefix = m[: 1 + i]
            suffix = m[1 + j :]
            for r, rc in rhs.items():
                new = prefix + r[1:] + suffix
                _poly_add_scaled(F, work, {new: rc}, c)
        return out

    def _find_redex(self, path: Path, max_lhs: int, leftmost: bool):
        arrows = path[1:]
        n = len(arrows)
        q = self._quiver
        starts = range(n) if leftmost else range(n - 1, -1, -1)
        for i in starts:
            lengths = range(1, min(max_lhs, n - i) + 1)
            for L in lengths if leftmost else reversed(lengths):
                sub = (q.src[arrows[i]],) + arrows[i : i + L]
                rhs = self.rules.get(sub)
                if rhs is not None:
                    return i, i + L, rhs
        return None

    def path_of(self, expr) -> Path:
        if isinstance(expr, str):
            expr = _parse_path_text(self.presentation, expr)
        return self._quiver.from_expr(expr)


def _parse_path_text(pres: Presentation, text: str) -> PathExpr:
    text = text.strip()
    if text.startswith("e_") and text[2:] in pres.quiver.vertices:
        return PathExpr((), text[2:])
    if text in pres.quiver.vertices:
        return PathExpr((), text)
    arrows = []
    for piece in text.split("."):
        name, _, power = piece.strip().partition("^")
        pres.quiver.arrow(name)
        arrows.extend([name] * int(power or 1))
    expr = PathExpr(tuple(arrows))
    expr.endpoints(pres.quiver)
    return expr


def _closure(pres: Presentation, quiver: _Quiver, order: MonomialOrder, N: int):
    """Echelon basis (pivot -> normalised row) of (I + J^N)/J^N."""
    F = pres.field
    key = order.key
    rows: dict = {}
    queue = deque()
    for rel in pres.relations:
        v = {}
        for c, expr in rel.terms:
            path = quiver.from_expr(expr)
            if len(path) - 1 < N:
                _poly_add_scaled(F, v, {path: 1}, c.value)
        if v:
            queue.append(v)
    while queue:
        v = queue.popleft()
        while v:
            lm = max(v, key=key)
            row = rows.get(lm)
            if row is None:
                break
            _poly_add_scaled(F, v, row, F.neg(v[lm]))
        if not v:
            continue
        inv = F.inv(v[lm])
        v = {m: F.mul(inv, c) for m, c in v.items()}
        rows[lm] = v
        if len(rows) > PATH_BUDGET:
            raise BoundExceeded(
                f"truncated closure at length {N} exceeded {PATH_BUDGET} paths",
                bound=N,
            )
        src = lm[0]
        tgt = quiver.target(lm)
        for a in quiver.inc[src]:
            left = {}
            for m, c in v.items():
                if len(m) < N:
                    left[(quiver.src[a], a) + m[1:]] = c
            if left:
                queue.append(left)
        for a in quiver.out[tgt]:
            right = {}
            for m, c in v.items():
                if len(m) < N:
                    right[m + (a,)] = c
            if right:
                queue.append(right)
    return rows


def _standard_paths(quiver: _Quiver, rows: dict, N: int) -> list:
    out = []
    stack = [(v,) for v in range(len(quiver.vertices))]
    while stack:
        path = stack.pop()
        if path in rows:
            if len(path) == 1:
                raise InconsistentPresentation(
                    f"the idempotent {quiver.name(path)} lies in the ideal of relations"
                )
            continue
        out.append(path)
        if len(path) - 1 + 1 < N:
            for a in quiver.out[quiver.target(path)]:
                stack.append(path + (a,))
    return out


def complete(pres: Presentation, order: MonomialOrder | None = None, bound: int | None = None) -> RewriteSystem:
    """Complete the relations into a confluent rewriting system.

    Starts at truncation length ``bound`` (default 8) and doubles up to 256
    until the quotient's radical is nilpotent below the truncation.
    """
    if order is None:
        order = MonomialOrder.for_presentation(pres)
    N = DEFAULT_BOUND if bound is None else bound
    if N < 2:
        raise ValueError("bound must be >= 2")
    quiver = _Quiver(pres)
    while True:
        rows = _closure(pres, quiver, order, N)
        standard = _standard_paths(quiver, rows, N)
        sys = RewriteSystem(pres, order, N, sorted(standard, key=order.key), {}, rows, quiver)
        loewy = _loewy_length(sys)
        if loewy < N:
            break
        if N >= MAX_BOUND:
            raise BoundExceeded(
                f"radical still nonzero at truncation length {N}; "
                f"{len(standard)} irreducible paths so far",
                bound=N,
                irreducible=len(standard),
            )
        N = min(2 * N, MAX_BOUND)
    # minimal non-standard paths become rules
    std = set(standard)
    rules = {}
    for s in standard:
        for a in quiver.out[quiver.target(s)]:
            w = s + (a,)
            if w in std:
                continue
            suffix = (quiver.src[w[2]],) + w[2:] if len(w) > 2 else (quiver.target(w),)
            if suffix in std:
                rules[w] = sys.nf_path(w)
    sys.rules = rules
    return sys


def _loewy_length(sys: RewriteSystem) -> int:
    """Smallest m with J^m = 0 in the truncated quotient."""
    q = sys.quiver
    F = sys.field
    layer = []
    for a in range(len(q.arrow_names)):
        nf = sys.nf_path((q.src[a], a))
        if nf:
            layer.append(nf)
    m = 1
    while layer:
        if m >= sys.bound:
            return m
        nxt: list = []
        seen_basis: dict = {}
        for vec in layer:
            for a in range(len(q.arrow_names)):
                prod = {}
                for path, c in vec.items():
                    if q.target(path) == q.src[a]:
                        _poly_add_scaled(F, prod, sys.nf_path(path + (a,)), c)
                if prod:
                    _insert_independent(F, seen_basis, prod, sys.order.key, nxt)
        layer = nxt
        m += 1
    return m


def _insert_independent(F, basis: dict, vec: dict, key, out: list) -> None:
    v = dict(vec)
    while v:
        lm = max(v, key=key)
        row = basis.get(lm)
        if row is None:
            inv = F.inv(v[lm])
            v = {m: F.mul(inv, c) for m, c in v.items()}
            basis[lm] = v
            out.append(v)
            return
        _poly_add_scaled(F, v, row, F.neg(v[lm]))


# ----------------------------------------------------------------------
# structure constants


def _basis_sort_key(path: Path):
    return (len(path) > 1, len(path), path[1:], path[0])


@dataclass(eq=False)
class AlgebraTable:
    """Monomial basis and exact structure constants of a bound quiver algebra."""

    field: FieldDesc
    basis: list  # internal paths
    names: list  # printable paths
    mul: np.ndarray  # mul[i, j, k]: coefficient of basis k in b_i * b_j
    sources: list
    targets: list
    vertex_count: int
    system: RewriteSystem | None = None
    vertex_names: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def grading(self) -> list[int]:
        return [len(b) - 1 for b in self.basis]

    @cached_property
    def idempotents(self) -> list[int]:
        return [i for i, b in enumerate(self.basis) if len(b) == 1]

    @cached_property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}

    def one(self) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[self.idempotents] = 1
        return v

    def unit_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def element(self, text: str) -> np.ndarray:
        """Coordinates of a path (e.g. ``"beta.alpha.gamma"``) in the basis."""
        if self.system is None:
            if text in self.names:
                return self.unit_vector(self.names.index(text))
            raise KeyError(text)
        sys = self.system
        return self.vector(sys.nf_path(sys.path_of(text)))

    def vector(self, poly: dict) -> np.ndarray:
        v = self.field.zeros(self.dim)
        for m, c in poly.items():
            v[self.index[m]] = c
        return v

    def multiply(self, x, y) -> np.ndarray:
        """Product of two coordinate vectors."""
        F = self.field
        x = np.asarray(x, dtype=F.dtype)
        y = np.asarray(y, dtype=F.dtype)
        # sum_ij x_i y_j mul[i, j, :]
        xm = _contract(F, x, self.mul.reshape(self.dim, -1)).reshape(self.dim, self.dim)
        return _contract(F, y, xm)

    def power(self, x, e: int) -> np.ndarray:
        result = self.one()
        base = np.asarray(x, dtype=self.field.dtype)
        while e:
            if e & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            e >>= 1
        return result

    def left_mult_matrix(self, x) -> np.ndarray:
        """M with M @ y = x * y."""
        F = self.field
        xm = _contract(F, np.asarray(x, dtype=F.dtype), self.mul.reshape(self.dim, -1))
        return xm.reshape(self.dim, self.dim).T.copy()

    def right_mult_matrix(self, x) -> np.ndarray:
        """M with M @ y = y * x."""
        F = self.field
        t = self.mul.transpose(1, 0, 2).reshape(self.dim, -1)
        xm = _contract(F, np.asarray(x, dtype=F.dtype), t)
        return xm.reshape(self.dim, self.dim).T.copy()

    def format_vector(self, v) -> str:
        F = self.field
        terms = []
        for i, c in enumerate(np.asarray(v).tolist()):
            if c:
                s = F.format(c)
                if "+" in s:
                    s = f"({s})"
                terms.append(self.names[i] if c == 1 else f"{s}*{self.names[i]}")
        return " + ".join(terms) if terms else "0"


def _contract(F: FieldDesc, x: np.ndarray, m: np.ndarray) -> np.ndarray:
    """sum_i x_i * m[i, :]."""
    return F.matmul(x[None, :], m)[0]


def build_table(sys: RewriteSystem, check: bool = True) -> AlgebraTable:
    """Structure constants of the completed algebra, with associativity check."""
    F = sys.field
    q = sys.quiver
    basis = sorted(sys.standard, key=_basis_sort_key)
    index = {b: i for i, b in enumerate(basis)}
    d = len(basis)
    mul = F.zeros((d, d, d))
    for i, a in enumerate(basis):
        ta = q.target(a)
        for j, b in enumerate(basis):
            if b[0] != ta:
                continue
            prod = a + b[1:] if len(b) > 1 else a
            for m, c in sys.nf_path(prod).items():
                mul[i, j, index[m]] = c
    table = AlgebraTable(
        field=F,
        basis=basis,
        names=[q.pretty(b) for b in basis],
        mul=mul,
        sources=[b[0] for b in basis],
        targets=[q.target(b) for b in basis],
        vertex_count=len(q.vertices),
        system=sys,
        vertex_names=tuple(q.vertices),
    )
    if check:
        check_associativity(table)
    return table


def check_associativity(t: AlgebraTable, full_limit: int = FULL_ASSOC_LIMIT, samples: int = ASSOC_SAMPLES, seed: int = ASSOC_SEED) -> None:
    F, d, C = t.field, t.dim, t.mul
    if d == 0:
        return
    if d <= full_limit:
        flat = C.reshape(d * d, d)
        # ((b_i b_j) b_k)_n indexed [(i, j), (k, n)]
        left = F.matmul(flat, C.reshape(d, d * d))
        # (b_i (b_j b_k))_n = sum_m C[j,k,m] C[i,m,n], indexed [(j, k), (i, n)]
        right = F.matmul(flat, C.transpose(1, 0, 2).reshape(d, d * d))
        left = left.reshape(d, d, d, d)  # i j k n
        right = right.reshape(d, d, d, d).transpose(2, 0, 1, 3)  # j k i n -> i j k n
        bad = np.argwhere(left != right)
        if len(bad):
            i, j, k, _ = bad[0]
            raise AssociativityFailure(
                f"({t.names[i]}*{t.names[j]})*{t.names[k]} != {t.names[i]}*({t.names[j]}*{t.names[k]})"
            )
        return
    rng = random.Random(seed)
    for _ in range(samples):
        i, j, k = rng.randrange(d), rng.randrange(d), rng.randrange(d)
        ij = C[i, j]
        jk = C[j, k]
        left = F.matmul(ij[None, :], C[:, k, :])[0]
        right = F.matmul(jk[None, :], C[i, :, :])[0]
        if np.any(left != right):
            raise AssociativityFailure(
                f"({t.names[i]}*{t.names[j]})*{t.names[k]} != {t.names[i]}*({t.names[j]}*{t.names[k]})"
            )


def algebra_from_presentation(pres: Presentation, bound: int | None = None, check: bool = True) -> AlgebraTable:
    return build_table(complete(pres, bound=bound), check=check)


def dim_and_cartan(t: AlgebraTable) -> tuple[int, list[list[int]]]:
    n = t.vertex_count
    cartan = [[0] * n for _ in range(n)]
    for s, e in zip(t.sources, t.targets):
        cartan[s][e] += 1
    return t.dim, cartan
