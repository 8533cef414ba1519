import re
from functools import lru_cache

import numpy as np
import pytest

from kuelsh.catalog import CATALOG
from kuelsh.cli import default_field, load_catalog
from kuelsh.linalg import Subspace
from kuelsh.presentation import parse_presentation
from kuelsh.rewrite import algebra_from_presentation

# catalog instances used throughout: (name, lambda or None); lambda = g lives in F4
INSTANCES = [(name, "g" if e.param else None) for name, e in CATALOG.items()]
SYMMETRIC = [inst for inst in INSTANCES if inst[0] != "Lambda9"]


@lru_cache(maxsize=None)
def loaded(name, lam=None, p=None):
    return load_catalog(name, p, None, {"lambda": lam} if lam else None)


def table(name, lam=None, p=None):
    return loaded(name, lam, p).table


def inst_id(inst):
    name, lam = inst
    return f"{name}[{lam}]" if lam else name


X2 = """
field 2 1
vertices 1
arrow x: 1 -> 1
rel x^2
"""

X3_F3 = """
field 3 1
vertices 1
arrow x: 1 -> 1
rel x^3
"""

# kQ for 1 -> 2: the 2x2 upper-triangular matrices, not selfinjective
UPPER = """
field 2 1
vertices 1 2
arrow a: 1 -> 2
"""


@lru_cache(maxsize=None)
def small(text):
    return algebra_from_presentation(parse_presentation(text))


def vec(t, expr):
    """Coordinates of an expression such as ``beta.alpha.gamma - alpha.gamma.beta``."""
    F = t.field
    toks = re.split(r"\s+([+-])\s+", expr.strip())
    terms = [("+", toks[0])] + [(toks[i], toks[i + 1]) for i in range(1, len(toks), 2)]
    v = F.zeros(t.dim)
    for sign, term in terms:
        c = 1
        if "*" in term:
            cs, term = term.split("*")
            c = F.parse(cs)
        w = F.vscale(c, t.element(term))
        v = F.vadd(v, w) if sign == "+" else F.vsub(v, w)
    return v


def span(t, exprs):
    return Subspace.span(t.field, t.dim, np.array([vec(t, e) for e in exprs], dtype=t.field.dtype))


@pytest.fixture
def x2():
    return small(X2)


@pytest.fixture
def upper():
    return small(UPPER)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abc")), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
