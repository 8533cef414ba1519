import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kuelsh.errors import BadTwist, DegenerateForm, DimensionMismatch, NotASubspace
from kuelsh.field import field_make
from kuelsh.invariants import center, commutator_subspace, resolve_form
from kuelsh.linalg import (
    BilinearForm,
    Subspace,
    image,
    kernel,
    orthogonal_complement,
    rank,
    rref,
    semilinear_kernel,
    solve,
    subspace_ops,
)

from conftest import loaded, span, table

FIELDS = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p, k = draw(st.sampled_from(FIELDS))
    F = field_make(p, k)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, F.q - 1), min_size=r * c, max_size=r * c))
    return F, np.array(vals, dtype=F.dtype).reshape(r, c)


def naive_rank(F, m):
    """Textbook elimination with scalar field calls."""
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        r += 1
    return r


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_and_rank_nullity(fm):
    F, m = fm
    r = naive_rank(F, m)
    assert rank(F, m) == r
    if m.shape[0]:
        K = kernel(F, m)
        assert K.dim == m.shape[1] - r
        if K.dim:
            assert not F.matmul(m, K.basis.T).any()
        assert image(F, m).dim == r


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_canonical(fm):
    F, m = fm
    if not m.shape[0]:
        return
    r, piv = rref(F, m)
    assert list(piv) == sorted(set(piv))
    for i, c in enumerate(piv):
        col = r[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    # another spanning set of the same space gives the same matrix
    rng = np.random.default_rng(0)
    combo = np.array(rng.integers(0, F.q, size=(m.shape[0] + 2, m.shape[0])), dtype=F.dtype)
    mixed = np.vstack([F.matmul(combo, m), m])
    assert Subspace.span(F, m.shape[1], mixed) == Subspace.span(F, m.shape[1], m)


def test_trivial_examples():
    F = field_make(2, 2)
    eye = np.eye(4, dtype=F.dtype)
    assert kernel(F, eye).dim == 0 and image(F, eye).dim == 4
    z = F.zeros((3, 4))
    assert kernel(F, z).dim == 4 and image(F, z).dim == 0
    V = Subspace.span(F, 4, [[1, 2, 0, 3]])
    assert V.intersect(V) == V and V + Subspace.zero(F, 4) == V


def test_random_rank3_over_f4():
    F = field_make(2, 2)
    rng = np.random.default_rng(3)
    a = np.array(rng.integers(0, 4, size=(6, 3)), dtype=F.dtype)
    b = np.array(rng.integers(0, 4, size=(3, 4)), dtype=F.dtype)
    m = F.matmul(a, b)
    r = naive_rank(F, m)
    assert r <= 3
    assert kernel(F, m).dim == 4 - r


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_grassmann_and_ops(fm, data):
    F, m = fm
    d = m.shape[1]
    vals = data.draw(st.lists(st.integers(0, F.q - 1), min_size=3 * d, max_size=3 * d))
    a = Subspace.span(F, d, m)
    b = Subspace.span(F, d, np.array(vals, dtype=F.dtype).reshape(3, d))
    s, i = a + b, a & b
    assert a.dim + b.dim == s.dim + i.dim
    assert s.contains(a) and s.contains(b) and a.contains(i) and b.contains(i)
    assert subspace_ops(s, a, "quotient_dim") == s.dim - a.dim
    assert subspace_ops(a, b, "sum") == s and subspace_ops(a, b, "intersect") == i
    assert subspace_ops(s, b, "contains")


def test_errors():
    F = field_make(3)
    a = Subspace.span(F, 3, [[1, 0, 0]])
    b = Subspace.span(F, 3, [[0, 1, 0]])
    with pytest.raises(NotASubspace):
        a.quotient_dim(b)
    with pytest.raises(DimensionMismatch):
        a + Subspace.zero(F, 4)
    with pytest.raises(DimensionMismatch):
        kernel(F, np.zeros(3, dtype=F.dtype))
    with pytest.raises(BadTwist):
        semilinear_kernel(F, [[1, 2]], 2)
    with pytest.raises(DegenerateForm):
        orthogonal_complement(a, BilinearForm(F, np.zeros((3, 3), dtype=F.dtype)))
    with pytest.raises(DegenerateForm):
        solve(F, np.zeros((2, 2), dtype=F.dtype), np.array([1, 0], dtype=F.dtype))


def test_semilinear_examples():
    F2, F4 = field_make(2), field_make(2, 2)
    m = np.array([[1, 1], [0, 1], [1, 0]], dtype=F2.dtype)
    assert semilinear_kernel(F2, m, 1) == kernel(F2, m.T)
    assert semilinear_kernel(F2, m, 2) == kernel(F2, m.T)
    assert semilinear_kernel(F4, [[F4.parse("g")]], 2).dim == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3)]), st.integers(1, 2), st.data())
def test_semilinear_kernel_brute_force(pk, n, data):
    F = field_make(*pk)
    twist = F.p**n
    rows = data.draw(st.integers(1, 4 if F.q <= 4 else 3))
    cols = data.draw(st.integers(1, 4))
    vals = data.draw(st.lists(st.integers(0, F.q - 1), min_size=rows * cols, max_size=rows * cols))
    vecs = np.array(vals, dtype=F.dtype).reshape(rows, cols)
    got = semilinear_kernel(F, vecs, twist)
    sols = []
    for c in itertools.product(range(F.q), repeat=rows):
        acc = F.zeros(cols)
        for ci, v in zip(c, vecs):
            acc = F.vadd(acc, F.vscale(F.pow(ci, twist), v))
        if not acc.any():
            sols.append(c)
    assert len(sols) == F.q**got.dim
    for c in sols:
        assert got.contains(np.array(c, dtype=F.dtype))
    assert semilinear_kernel(F, vecs, 1) == kernel(F, vecs.T)


@pytest.mark.parametrize("inst", [("Lambda5", None), ("Lambda2p", None), ("A4", None), ("Lambda3p", "g")])
def test_double_complement_on_tables(inst):
    name, lam = inst
    p = 3 if name == "Lambda2p" else None
    t = table(name, lam, p)
    form = resolve_form(t, loaded(name, lam, p).pres)
    rng = np.random.default_rng(5)
    F = t.field
    for _ in range(25):
        k = int(rng.integers(0, t.dim + 1))
        M = Subspace.span(F, t.dim, np.array(rng.integers(0, F.q, size=(k, t.dim)), dtype=F.dtype))
        perp = orthogonal_complement(M, form.gram)
        assert perp.dim + M.dim == t.dim
        assert orthogonal_complement(perp, form.gram) == M
    assert orthogonal_complement(Subspace.zero(F, t.dim), form.gram).dim == t.dim
    assert orthogonal_complement(Subspace.full(F, t.dim), form.gram).dim == 0
    assert orthogonal_complement(commutator_subspace(t), form.gram) == center(t)


def test_complement_of_t1_in_lambda5p():
    from kuelsh.invariants import t_space

    t = table("Lambda5p")
    form = resolve_form(t, loaded("Lambda5p").pres)
    perp = orthogonal_complement(t_space(t, 1), form.gram)
    assert perp == span(t, ["alpha^3", "sigma.delta", "beta.alpha.gamma"])


def test_solve_roundtrip():
    F = field_make(3, 2)
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = np.array(rng.integers(0, F.q, size=(4, 4)), dtype=F.dtype)
        if rank(F, a) < 4:
            continue
        x = np.array(rng.integers(0, F.q, size=4), dtype=F.dtype)
        b = F.matmul(a, x[:, None])[:, 0]
        assert np.array_equal(solve(F, a, b), x)
