import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kuelsh.errors import DegreeUnsupported, OracleTooLarge
from kuelsh.hochschild import BAR_LIMIT, _relative_complex, hh_compute, hh_differential, hh_dim, hh_dims
from kuelsh.invariants import center
from kuelsh.linalg import Subspace, kernel, rank
from kuelsh.presentation import parse_presentation
from kuelsh.rewrite import algebra_from_presentation

from conftest import INSTANCES, UPPER, X2, X3_F3, inst_id, small, table


def _p(name):
    return 3 if name.startswith("Lambda2") else None


def T(name, lam=None):
    return table(name, lam, _p(name))


def truncated(n, p, k=1):
    return algebra_from_presentation(parse_presentation(f"field {p} {k}\nvertices 1\narrow x: 1 -> 1\nrel x^{n}\n"))


def naive_hh(t, degrees=(0, 1, 2)):
    """Unnormalized bar complex Hom(A^{(x)n}, A) with cochains stored densely.

    Built from scratch with scalar arithmetic; only viable for tiny algebras.
    """
    F, d = t.field, t.dim
    mul = t.mul

    def prod(x, y):
        return [int(v) for v in mul[x, y]]

    def delta(n):
        cols = list(itertools.product(range(d), repeat=n))
        rows = list(itertools.product(range(d), repeat=n + 1))
        ci = {c: i for i, c in enumerate(cols)}
        # a cochain is indexed by (tuple, output basis index)
        m = F.zeros((len(rows) * d, len(cols) * d))
        for r, T_ in enumerate(rows):
            for out in range(d):
                R = r * d + out
                # a1 * f(a2..)
                for b in range(d):
                    c = prod(T_[0], b)[out]
                    if c:
                        C = ci[T_[1:]] * d + b
                        m[R, C] = F.add(int(m[R, C]), c)
                # inner terms
                for i in range(1, n + 1):
                    ab = prod(T_[i - 1], T_[i])
                    for s, c in enumerate(ab):
                        if not c:
                            continue
                        if i % 2:
                            c = F.neg(c)
                        C = ci[T_[: i - 1] + (s,) + T_[i + 1 :]] * d + out
                        m[R, C] = F.add(int(m[R, C]), c)
                # (-1)^(n+1) f(a1..an) * a_{n+1}
                for b in range(d):
                    c = prod(b, T_[-1])[out]
                    if c:
                        if (n + 1) % 2:
                            c = F.neg(c)
                        C = ci[T_[:-1]] * d + b
                        m[R, C] = F.add(int(m[R, C]), c)
        return m

    top = max(degrees)
    ds = [delta(n) for n in range(top + 1)]
    for n in range(1, top + 1):
        assert not F.matmul(ds[n], ds[n - 1]).any()
    rk = [rank(F, m) for m in ds]
    return {n: d ** (n + 1) - rk[n] - (rk[n - 1] if n else 0) for n in degrees}


@pytest.mark.parametrize("text", [X2, X3_F3, UPPER], ids=["x^2", "x^3/F3", "upper"])
def test_unnormalized_oracle_on_fixtures(text):
    t = small(text)
    expect = naive_hh(t)
    assert hh_dims(t) == expect
    assert hh_dims(t, method="bar") == expect


@pytest.mark.parametrize("n,p,k", [(2, 2, 2), (3, 2, 1), (4, 2, 1), (2, 3, 1), (4, 3, 1)])
def test_unnormalized_oracle_truncated(n, p, k):
    t = truncated(n, p, k)
    assert hh_dims(t) == naive_hh(t)


def test_fixture_values(x2, upper):
    assert hh_dims(x2) == {0: 2, 1: 2, 2: 2}
    assert hh_dims(upper) == {0: 1, 1: 0, 2: 0}


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 9), st.sampled_from([2, 3, 5, 7]))
def test_truncated_polynomial_closed_form(n, p):
    t = truncated(n, p)
    # periodic resolution: HH^1 = ker(n x^{n-1}), HH^2 = coker(n x^{n-1})
    odd = n if n % p == 0 else n - 1
    assert hh_dims(t) == {0: n, 1: odd, 2: odd}


BAR_INSTANCES = [i for i in INSTANCES if T(*i).dim <= BAR_LIMIT]


@pytest.mark.parametrize("inst", BAR_INSTANCES + [("Lambda3", "g+1"), ("Lambda3p", "g+1")], ids=inst_id)
def test_bar_matches_relative(inst):
    t = T(*inst)
    assert hh_dims(t, method="bar") == hh_dims(t)


@pytest.mark.parametrize("inst", INSTANCES, ids=inst_id)
def test_complex_and_hh0(inst):
    t = T(*inst)
    F = t.field
    d0, d1 = hh_differential(t, 0), hh_differential(t, 1)
    assert not F.matmul(d1, d0).any()
    assert hh_dim(t, 0) == center(t).dim


@pytest.mark.parametrize("inst", [("Lambda2", None), ("Lambda5p", None), ("T333", None)], ids=inst_id)
def test_delta0_kernel_is_center(inst):
    t = T(*inst)
    F = t.field
    cx = _relative_complex(t)
    cols, _ = cx.basis(0)
    K = kernel(F, hh_differential(t, 0))
    vecs = []
    for row in K.basis:
        v = F.zeros(t.dim)
        for (_, b), c in zip(cols, row):
            v[b] = F.add(int(v[b]), int(c))
        vecs.append(v)
    assert Subspace.span(F, t.dim, np.array(vecs, dtype=F.dtype)) == center(t)


def test_lambda9_pair():
    assert hh_dims(T("Lambda9p")) == {0: 5, 1: 2, 2: 3}
    assert hh_dims(T("Lambda9")) == {0: 5, 1: 1, 2: 2}


def test_result_record():
    r = hh_compute(T("Lambda5"), 2)
    d = r.to_dict()
    assert d["dim"] == 2 and d["degree"] == 2 and d["method"] == "relative"
    assert set(d["rank_data"]) == {"delta1", "delta2"}
    assert len(d["cochain_dims"]) == 4


def test_errors(x2):
    with pytest.raises(DegreeUnsupported):
        hh_dim(x2, 3)
    with pytest.raises(DegreeUnsupported):
        hh_dim(x2, -1)
    with pytest.raises(OracleTooLarge):
        hh_dim(T("A4"), 1, method="bar")
