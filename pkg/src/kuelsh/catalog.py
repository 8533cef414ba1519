"""Built-in presentations of the nondomestic symmetric algebras of polynomial growth.

Each entry is DSL text with a ``{field}`` placeholder and, where the family
is parametrised, a ``lambda`` parameter bound at lookup time.  Entries with
an explicit symmetrizing form carry ``form`` lines; their monomial orders
are chosen so the computed basis is exactly the printed list of nonzero
paths the form refers to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CharacteristicMismatch,
    MissingParam,
    ParamForbiddenValue,
    UnknownName,
)
from .field import FieldDesc, FieldElem
from .presentation import Presentation, parse_presentation


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    title: str
    source: str
    characteristic: int | None = None  # required char, or None for any
    param: str | None = None  # parameter that must avoid {0, 1}
    standard: bool = True
    simples: int = 0
    tubular_type: str = ""


_LAMBDA2 = """
vertices 1 2
arrow alpha: 1 -> 1
arrow gamma: 1 -> 2
arrow beta: 2 -> 1
order local
rel alpha^2.gamma
rel beta.alpha^2
rel gamma.beta.gamma
rel beta.gamma.beta
rel beta.gamma - beta.alpha.gamma
rel alpha^3 - gamma.beta
form alpha^4 = 1
form beta.alpha.gamma = 1
form alpha^3 = 1
"""

_LAMBDA2P = """
vertices 1 2
arrow alpha: 1 -> 1
arrow gamma: 1 -> 2
arrow beta: 2 -> 1
order local
rel alpha^3 - gamma.beta
rel beta.gamma
rel beta.alpha^2
rel alpha^2.gamma
form alpha^4 = 1
form beta.alpha.gamma = 1
"""

# sigma.gamma, gamma.sigma, beta.gamma and sigma.beta must lead their
# relations for the printed basis; the weights force that
_LAMBDA3 = """
vertices 1 2
arrow alpha: 1 -> 1
arrow sigma: 1 -> 2
arrow beta: 2 -> 2
arrow gamma: 2 -> 1
order local alpha:4 sigma:2 beta:3 gamma:2
rel alpha^4
rel gamma.alpha^2
rel alpha^2.sigma
rel alpha^2 - sigma.gamma - alpha^3
rel lambda*beta^2 - gamma.sigma
rel gamma.alpha - beta.gamma
rel sigma.beta - alpha.sigma
form alpha^3 = 1
form alpha^2 = 1
form beta^3 = lambda^-1
"""

_LAMBDA3P = """
vertices 1 2
arrow alpha: 1 -> 1
arrow sigma: 1 -> 2
arrow beta: 2 -> 2
arrow gamma: 2 -> 1
order local alpha:4 sigma:2 beta:3 gamma:2
rel alpha^2 - sigma.gamma
rel lambda*beta^2 - gamma.sigma
rel gamma.alpha - beta.gamma
rel sigma.beta - alpha.sigma
form alpha^3 = 1
form beta^3 = lambda^-1
"""

_LAMBDA5 = """
vertices 1 2 3
arrow alpha: 2 -> 2
arrow beta: 1 -> 2
arrow gamma: 2 -> 1
arrow delta: 2 -> 3
arrow sigma: 3 -> 2
order local
rel alpha^2 - gamma.beta
rel alpha^3 - delta.sigma
rel beta.delta
rel sigma.gamma
rel alpha.delta
rel sigma.alpha
rel gamma.beta.gamma
rel beta.gamma.beta
rel beta.gamma - beta.alpha.gamma
form alpha^3 = 1
form beta.alpha.gamma = 1
form sigma.delta = 1
form alpha^2 = 1
"""

_LAMBDA5P = """
vertices 1 2 3
arrow alpha: 2 -> 2
arrow beta: 1 -> 2
arrow gamma: 2 -> 1
arrow delta: 2 -> 3
arrow sigma: 3 -> 2
order local
rel alpha^2 - gamma.beta
rel beta.delta
rel beta.gamma
rel sigma.gamma
rel alpha.delta
rel sigma.alpha
rel alpha^3 - delta.sigma
form alpha^3 = 1
form beta.alpha.gamma = 1
form sigma.delta = 1
"""

# vertices: 1 top, 2 centre, 3 bottom left, 4 bottom right
_D4_QUIVER = """
vertices 1 2 3 4
arrow alpha: 3 -> 2
arrow beta: 2 -> 3
arrow gamma: 1 -> 2
arrow delta: 2 -> 1
arrow eps: 2 -> 4
arrow xi: 4 -> 2
"""

_LAMBDA9 = _D4_QUIVER + """
rel beta.alpha + delta.gamma + eps.xi
rel gamma.delta
rel xi.eps
rel alpha.beta.alpha
rel beta.alpha.beta
rel alpha.beta - alpha.delta.gamma.beta
"""

_LAMBDA9P = _D4_QUIVER + """
rel beta.alpha + delta.gamma + eps.xi
rel alpha.beta
rel xi.eps
rel gamma.delta
"""

_A4 = _D4_QUIVER + """
rel beta.alpha + delta.gamma + eps.xi
rel alpha.beta
rel gamma.eps
rel xi.delta
"""

_A1 = """
vertices 1 2 3
arrow alpha: 1 -> 2
arrow gamma: 2 -> 1
arrow sigma: 2 -> 3
arrow beta: 3 -> 2
rel alpha.gamma.alpha - alpha.sigma.beta
rel beta.gamma.alpha - lambda*beta.sigma.beta
rel gamma.alpha.gamma - sigma.beta.gamma
rel gamma.alpha.sigma - lambda*sigma.beta.sigma
"""

# trivial extensions of canonical algebras: L is the sink of the arms,
# R their common source; eta and xi run L -> R
_T2222 = """
vertices L R a b c s
arrow alpha1: R -> a
arrow alpha2: a -> L
arrow beta1: R -> b
arrow beta2: b -> L
arrow gamma1: R -> c
arrow gamma2: c -> L
arrow sigma1: R -> s
arrow sigma2: s -> L
arrow eta: L -> R
arrow xi: L -> R
rel alpha1.alpha2 + beta1.beta2 + gamma1.gamma2
rel alpha1.alpha2 + lambda*beta1.beta2 + sigma1.sigma2
rel eta.alpha1
rel alpha2.eta
rel xi.beta1
rel beta2.xi
rel eta.gamma1 - xi.gamma1
rel gamma2.eta - gamma2.xi
rel eta.sigma1 - lambda*xi.sigma1
rel sigma2.eta - lambda*sigma2.xi
"""

_T333 = """
vertices L R a1 a2 b1 b2 c1 c2
arrow alpha1: R -> a1
arrow alpha2: a1 -> a2
arrow alpha3: a2 -> L
arrow beta1: R -> b1
arrow beta2: b1 -> b2
arrow beta3: b2 -> L
arrow gamma1: R -> c1
arrow gamma2: c1 -> c2
arrow gamma3: c2 -> L
arrow eta: L -> R
arrow xi: L -> R
rel alpha1.alpha2.alpha3 + beta1.beta2.beta3 + gamma1.gamma2.gamma3
rel eta.alpha1
rel alpha3.eta
rel xi.beta1
rel beta3.xi
rel eta.gamma1 - xi.gamma1
rel gamma3.eta - gamma3.xi
rel alpha2.alpha3.xi.alpha1.alpha2
rel beta2.beta3.eta.beta1.beta2
rel gamma2.gamma3.eta.gamma1.gamma2
"""

_T244 = """
vertices L R a1 b1 b2 b3 c1 c2 c3
arrow alpha1: R -> a1
arrow alpha2: a1 -> L
arrow beta1: R -> b1
arrow beta2: b1 -> b2
arrow beta3: b2 -> b3
arrow beta4: b3 -> L
arrow gamma1: R -> c1
arrow gamma2: c1 -> c2
arrow gamma3: c2 -> c3
arrow gamma4: c3 -> L
arrow eta: L -> R
arrow xi: L -> R
rel alpha1.alpha2 + beta1.beta2.beta3.beta4 + gamma1.gamma2.gamma3.gamma4
rel eta.alpha1
rel alpha2.eta
rel xi.beta1
rel beta4.xi
rel eta.gamma1 - xi.gamma1
rel gamma4.eta - gamma4.xi
rel beta2.beta3.beta4.eta.beta1.beta2
rel beta3.beta4.eta.beta1.beta2.beta3
rel gamma2.gamma3.gamma4.eta.gamma1.gamma2
rel gamma3.gamma4.eta.gamma1.gamma2.gamma3
"""

_T236 = """
vertices L R a1 b1 b2 c1 c2 c3 c4 c5
arrow alpha1: R -> a1
arrow alpha2: a1 -> L
arrow beta1: R -> b1
arrow beta2: b1 -> b2
arrow beta3: b2 -> L
arrow gamma1: R -> c1
arrow gamma2: c1 -> c2
arrow gamma3: c2 -> c3
arrow gamma4: c3 -> c4
arrow gamma5: c4 -> c5
arrow gamma6: c5 -> L
arrow eta: L -> R
arrow xi: L -> R
rel alpha1.alpha2 + beta1.beta2.beta3 + gamma1.gamma2.gamma3.gamma4.gamma5.gamma6
rel eta.alpha1
rel alpha2.eta
rel xi.beta1
rel beta3.xi
rel eta.gamma1 - xi.gamma1
rel gamma6.eta - gamma6.xi
rel beta2.beta3.eta.beta1.beta2
rel gamma2.gamma3.gamma4.gamma5.gamma6.eta.gamma1.gamma2
rel gamma3.gamma4.gamma5.gamma6.eta.gamma1.gamma2.gamma3
rel gamma4.gamma5.gamma6.eta.gamma1.gamma2.gamma3.gamma4
rel gamma5.gamma6.eta.gamma1.gamma2.gamma3.gamma4.gamma5
"""

CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("Lambda2", "nonstandard, tubular type (3,3,3)", _LAMBDA2, 3, None, False, 2, "(3,3,3)"),
        CatalogEntry("Lambda2p", "standard, tubular type (3,3,3)", _LAMBDA2P, None, None, True, 2, "(3,3,3)"),
        CatalogEntry("Lambda3", "nonstandard, tubular type (2,2,2,2)", _LAMBDA3, 2, "lambda", False, 2, "(2,2,2,2)"),
        CatalogEntry("Lambda3p", "standard, tubular type (2,2,2,2)", _LAMBDA3P, None, "lambda", True, 2, "(2,2,2,2)"),
        CatalogEntry("Lambda5", "nonstandard, tubular type (2,4,4)", _LAMBDA5, 2, None, False, 3, "(2,4,4)"),
        CatalogEntry("Lambda5p", "standard, tubular type (2,4,4)", _LAMBDA5P, None, None, True, 3, "(2,4,4)"),
        CatalogEntry("Lambda9", "nonstandard, tubular type (3,3,3)", _LAMBDA9, 2, None, False, 4, "(3,3,3)"),
        CatalogEntry("Lambda9p", "standard, preprojective of type D4", _LAMBDA9P, 2, None, True, 4, "(3,3,3)"),
        CatalogEntry("A1", "standard, tubular type (2,2,2,2)", _A1, None, "lambda", True, 3, "(2,2,2,2)"),
        CatalogEntry("A4", "standard, tubular type (3,3,3)", _A4, None, None, True, 4, "(3,3,3)"),
        CatalogEntry("T2222", "trivial extension of C(2,2,2,2,lambda)", _T2222, None, "lambda", True, 6, "(2,2,2,2)"),
        CatalogEntry("T333", "trivial extension of C(3,3,3)", _T333, None, None, True, 8, "(3,3,3)"),
        CatalogEntry("T244", "trivial extension of C(2,4,4)", _T244, None, None, True, 9, "(2,4,4)"),
        CatalogEntry("T236", "trivial extension of C(2,3,6)", _T236, None, None, True, 10, "(2,3,6)"),
    ]
}

# standard counterpart of each nonstandard algebra, in the order of the
# four separations
PAIRS = [("Lambda2", "Lambda2p", 3), ("Lambda3", "Lambda3p", 2), ("Lambda5", "Lambda5p", 2), ("Lambda9", "Lambda9p", 2)]


def catalog_names() -> list[str]:
    return list(CATALOG)


def catalog_source(name: str, field: FieldDesc, params: dict | None = None) -> str:
    """DSL text of an entry, with field and parameter lines filled in."""
    entry = _entry(name)
    params = dict(params or {})
    _check(entry, field, params)
    head = [f"name {name}", f"field {field.p} {field.k}"]
    if entry.param:
        val = params[entry.param]
        head.append(f"param {entry.param} = {val}")
    return "\n".join(head) + entry.source


def _entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownName(f"unknown catalog algebra {name!r}; known: {', '.join(CATALOG)}") from None


def _check(entry: CatalogEntry, field: FieldDesc, params: dict) -> None:
    if entry.characteristic is not None and field.p != entry.characteristic:
        raise CharacteristicMismatch(
            f"{entry.name} is only considered in characteristic {entry.characteristic}, got {field.p}",
            required=entry.characteristic,
            got=field.p,
        )
    extra = set(params) - ({entry.param} if entry.param else set())
    if extra:
        raise MissingParam(f"{entry.name} takes no parameter(s) {sorted(extra)}")
    if entry.param:
        if entry.param not in params:
            raise MissingParam(f"{entry.name} needs a value for {entry.param}")
        val = params[entry.param]
        if not isinstance(val, FieldElem):
            val = field.elem(val)
            params[entry.param] = val
        if val.desc != field:
            raise ParamForbiddenValue(f"{entry.param} lies in a different field")
        if val.value in (0, 1):
            raise ParamForbiddenValue(f"{entry.param} must avoid 0 and 1, got {val}")


def catalog_lookup(name: str, field: FieldDesc, params: dict | None = None) -> Presentation:
    return parse_presentation(catalog_source(name, field, params))


def generic_params(name: str, field: FieldDesc) -> list[dict]:
    """All admissible parameter bindings of an entry over a field."""
    entry = _entry(name)
    if not entry.param:
        return [{}]
    return [{entry.param: FieldElem(field, v)} for v in range(2, field.q)]
