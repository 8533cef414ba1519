"""Bound quiver presentations: data model, DSL parser/formatter, validation.

Paths compose left to right: ``a.b`` traverses ``a`` first, then ``b``.
Relations are stored as polynomials equal to zero.

DSL (one directive per line, ``#`` starts a comment)::

    name Lambda2
    field 3 1
    param lambda = g+1
    vertices 1 2
    arrow alpha: 1 -> 1
    order local alpha:2 beta:1
    rel alpha.alpha.alpha - gamma.beta
    rel beta.gamma = beta.alpha.gamma
    form alpha^4 = 1

Coefficients are products of integers, ``g`` powers, parameter names and
parenthesised field elements, each optionally raised to an integer power
(``lambda^-1``).  ``alpha^3`` abbreviates ``alpha.alpha.alpha``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import (
    BadForm,
    BadParam,
    ElementSyntaxError,
    NonAdmissibleRelation,
    NonComposablePath,
    NonParallelRelation,
    PresentationSyntaxError,
    UnknownArrow,
    UnknownVertex,
)
from .field import FieldDesc, FieldElem, field_make, parse_element

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_NAME_RE = re.compile(rf"^{_NAME}$")
_VERTEX_RE = re.compile(r"^[A-Za-z0-9_']+$")
_FACTOR_RE = re.compile(rf"^(?P<base>\(.*\)|{_NAME}|\d+)\s*(?:\^\s*(?P<exp>-?\d+))?$")


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise UnknownArrow(f"unknown arrow {name!r}")

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise UnknownArrow(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class PathExpr:
    """A nonempty arrow sequence, or the trivial path at ``vertex``."""

    arrows: tuple[str, ...] = ()
    vertex: str | None = None

    def __post_init__(self):
        if not self.arrows and self.vertex is None:
            raise ValueError("a trivial path needs its vertex")

    @property
    def length(self) -> int:
        return len(self.arrows)

    def endpoints(self, quiver: Quiver) -> tuple[str, str]:
        """(source, target), checking composability."""
        if not self.arrows:
            quiver.vertex_index(self.vertex)
            return self.vertex, self.vertex
        arrows = [quiver.arrow(n) for n in self.arrows]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise NonComposablePath(
                    f"{a.name} ends at {a.target} but {b.name} starts at {b.source}"
                )
        return arrows[0].source, arrows[-1].target

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.vertex}"
        return ".".join(self.arrows)


@dataclass(frozen=True)
class RelationPoly:
    terms: tuple[tuple[FieldElem, PathExpr], ...]

    def __str__(self) -> str:
        return _format_poly(self.terms)


@dataclass(frozen=True)
class OrderSpec:
    """Monomial order requested by a presentation.

    ``local`` orders heavier paths *below* lighter ones so that rewriting
    moves towards longer paths; weights default to 1 per arrow.
    """

    kind: str = "deglex"
    weights: tuple[tuple[str, int], ...] = ()

    def __str__(self) -> str:
        parts = [self.kind] + [f"{n}:{w}" for n, w in self.weights]
        return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    field: FieldDesc
    quiver: Quiver
    relations: tuple[RelationPoly, ...]
    params: tuple[tuple[str, FieldElem], ...] = ()
    form: tuple[tuple[PathExpr, FieldElem], ...] | None = None
    order: OrderSpec = dc_field(default_factory=OrderSpec)
    name: str | None = None

    @property
    def param_dict(self) -> dict[str, FieldElem]:
        return dict(self.params)


# ----------------------------------------------------------------------
# formatting


def _format_coeff(c: FieldElem) -> str:
    s = str(c)
    return f"({s})" if "+" in s else s


def _format_poly(terms) -> str:
    out = []
    for i, (c, path) in enumerate(terms):
        body = str(path) if c == 1 else f"{_format_coeff(c)}*{path}"
        out.append(body if i == 0 else f"+ {body}")
    return " ".join(out) if out else "0"


def format_presentation(p: Presentation) -> str:
    lines = []
    if p.name:
        lines.append(f"name {p.name}")
    lines.append(f"field {p.field.p} {p.field.k}")
    for name, val in p.params:
        lines.append(f"param {name} = {val}")
    lines.append("vertices " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
    if p.order != OrderSpec():
        lines.append(f"order {p.order}")
    for r in p.relations:
        lines.append(f"rel {r}")
    if p.form is not None:
        for path, val in p.form:
            path_txt = path.vertex if not path.arrows else str(path)
            lines.append(f"form {path_txt} = {_format_coeff(val)}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# parsing


def _split_top(text: str, seps: str):
    """Split at top-level separator characters, keeping them; yields (sep, chunk, offset)."""
    depth = 0
    start = 0
    sep = "+"
    out = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0:
            # a sign right after '^' belongs to an exponent
            prev = text[:i].rstrip()
            if prev.endswith("^"):
                continue
            out.append((sep, text[start:i], start))
            sep = ch
            start = i + 1
    out.append((sep, text[start:], start))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.field: FieldDesc | None = None
        self.params: dict[str, FieldElem] = {}
        self.vertices: list[str] = []
        self.arrows: list[Arrow] = []
        self.order = OrderSpec()
        self.raw_rels: list[tuple[int, int, str]] = []
        self.raw_form: list[tuple[int, int, str, str]] = []
        self.form_seen = False
        self.name: str | None = None

    def err(self, msg, line, col=None):
        return PresentationSyntaxError(msg, line, col)

    def run(self) -> Presentation:
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            col = len(line) - len(line.lstrip()) + 1
            line = line.strip()
            keyword, _, rest = line.partition(" ")
            rest = rest.strip()
            rest_col = col + len(keyword) + 1
            handler = getattr(self, f"_do_{keyword}", None)
            if handler is None:
                raise self.err(f"unknown directive {keyword!r}", lineno, col)
            handler(rest, lineno, rest_col)
        if self.field is None:
            raise self.err("missing 'field p k' directive", None)
        quiver = Quiver(tuple(self.vertices), tuple(self.arrows))
        _validate_quiver(quiver)
        rels = []
        for lineno, col, text in self.raw_rels:
            rels.append(self._parse_relation(text, quiver, lineno, col))
        form = None
        if self.form_seen:
            form = []
            for lineno, col, lhs, rhs in self.raw_form:
                path = self._parse_path(lhs.strip(), quiver, lineno, col)
                try:
                    path.endpoints(quiver)
                except NonComposablePath as e:
                    raise NonComposablePath(f"line {lineno}: {e}") from None
                val = self._coeff(rhs.strip(), lineno, col)
                form.append((path, val))
            form = tuple(form)
        pres = Presentation(
            field=self.field,
            quiver=quiver,
            relations=tuple(rels),
            params=tuple(self.params.items()),
            form=form,
            order=self.order,
            name=self.name,
        )
        validate_presentation(pres)
        return pres

    # directives -------------------------------------------------------

    def _do_name(self, rest, lineno, col):
        if not rest:
            raise self.err("name expects a value", lineno, col)
        self.name = rest

    def _do_field(self, rest, lineno, col):
        if self.field is not None:
            raise self.err("field declared twice", lineno, col)
        parts = rest.split()
        if len(parts) not in (1, 2) or not all(x.isdigit() for x in parts):
            raise self.err("expected 'field p k'", lineno, col)
        p = int(parts[0])
        k = int(parts[1]) if len(parts) == 2 else 1
        self.field = field_make(p, k)

    def _need_field(self, lineno, col):
        if self.field is None:
            raise self.err("'field' must come first", lineno, col)

    def _do_param(self, rest, lineno, col):
        self._need_field(lineno, col)
        name, eq, val = rest.partition("=")
        name = name.strip()
        if not eq or not _NAME_RE.match(name):
            raise self.err("expected 'param name = value'", lineno, col)
        if name in self.params:
            raise BadParam(f"line {lineno}: parameter {name!r} bound twice")
        if name == "g":
            raise BadParam(f"line {lineno}: 'g' is reserved")
        try:
            self.params[name] = self._coeff(val.strip(), lineno, col)
        except ElementSyntaxError as e:
            raise BadParam(f"line {lineno}: {e}") from None

    def _do_vertices(self, rest, lineno, col):
        names = rest.split()
        if not names:
            raise self.err("vertices expects names", lineno, col)
        for v in names:
            if not _VERTEX_RE.match(v):
                raise self.err(f"bad vertex name {v!r}", lineno, col)
            if v in self.vertices:
                raise self.err(f"duplicate vertex {v!r}", lineno, col)
            self.vertices.append(v)

    def _do_arrow(self, rest, lineno, col):
        m = re.match(rf"^({_NAME})\s*:\s*([A-Za-z0-9_']+)\s*->\s*([A-Za-z0-9_']+)$", rest)
        if not m:
            raise self.err("expected 'arrow name: src -> tgt'", lineno, col)
        name, src, tgt = m.groups()
        if any(a.name == name for a in self.arrows):
            raise self.err(f"duplicate arrow {name!r}", lineno, col)
        for v in (src, tgt):
            if v not in self.vertices:
                raise UnknownVertex(f"line {lineno}: arrow {name} uses undeclared vertex {v!r}")
        self.arrows.append(Arrow(name, src, tgt))

    def _do_order(self, rest, lineno, col):
        parts = rest.split()
        if not parts or parts[0] not in ("deglex", "local"):
            raise self.err("expected 'order deglex|local [arrow:weight ...]'", lineno, col)
        weights = []
        for item in parts[1:]:
            m = re.match(rf"^({_NAME}):(\d+)$", item)
            if not m or int(m.group(2)) < 1:
                raise self.err(f"bad weight {item!r}", lineno, col)
            weights.append((m.group(1), int(m.group(2))))
        self.order = OrderSpec(parts[0], tuple(weights))

    def _do_rel(self, rest, lineno, col):
        self._need_field(lineno, col)
        if not rest:
            raise self.err("empty relation", lineno, col)
        self.raw_rels.append((lineno, col, rest))

    def _do_form(self, rest, lineno, col):
        self._need_field(lineno, col)
        self.form_seen = True
        lhs, eq, rhs = rest.partition("=")
        if not eq or not lhs.strip() or not rhs.strip():
            raise self.err("expected 'form path = value'", lineno, col)
        self.raw_form.append((lineno, col, lhs, rhs))

    # pieces -----------------------------------------------------------

    def _factor(self, tok: str, lineno, col) -> FieldElem:
        m = _FACTOR_RE.match(tok.strip())
        if not m:
            raise self.err(f"bad coefficient {tok!r}", lineno, col)
        base, exp = m.group("base"), int(m.group("exp") or 1)
        if base.startswith("("):
            val = self._coeff_sum(base[1:-1], lineno, col)
        elif base in self.params:
            val = self.params[base]
        elif base.isdigit() or base == "g":
            try:
                val = parse_element(self.field, base)
            except ElementSyntaxError as e:
                raise self.err(str(e), lineno, col) from None
        else:
            raise self.err(f"unknown coefficient {base!r}", lineno, col)
        try:
            return val**exp
        except ZeroDivisionError:
            raise self.err(f"{tok!r} inverts zero", lineno, col) from None

    def _coeff_sum(self, text: str, lineno, col) -> FieldElem:
        F = self.field
        total = F.elem(0)
        for sep, chunk, off in _split_top(text, "+-"):
            chunk = chunk.strip()
            if not chunk:
                if sep == "-" or off == 0:
                    continue
                raise self.err(f"dangling operator in {text!r}", lineno, col)
            val = self._coeff(chunk, lineno, col + off)
            total = total - val if sep == "-" else total + val
        return total

    def _coeff(self, text: str, lineno, col) -> FieldElem:
        text = text.strip()
        if any(s in text for s in "+-") and not _only_in_parens_or_exp(text):
            return self._coeff_sum(text, lineno, col)
        val = self.field.elem(1)
        for tok in _split_star(text):
            val = val * self._factor(tok, lineno, col)
        return val

    def _parse_path(self, text: str, quiver: Quiver, lineno, col) -> PathExpr:
        text = text.strip()
        if text in quiver.vertices:
            return PathExpr((), text)
        if text.startswith("e_") and text[2:] in quiver.vertices:
            return PathExpr((), text[2:])
        arrows = []
        for piece in text.split("."):
            piece = piece.strip()
            m = re.match(rf"^({_NAME})(?:\^(\d+))?$", piece)
            if not m:
                raise self.err(f"bad path {text!r}", lineno, col)
            name, power = m.group(1), int(m.group(2) or 1)
            if name not in [a.name for a in quiver.arrows]:
                raise UnknownArrow(f"line {lineno}: unknown arrow {name!r}")
            if power < 1:
                raise self.err(f"bad power in {piece!r}", lineno, col)
            arrows.extend([name] * power)
        return PathExpr(tuple(arrows))

    def _parse_side(self, text: str, quiver: Quiver, lineno, col) -> dict[PathExpr, FieldElem]:
        out: dict[PathExpr, FieldElem] = {}
        for sep, chunk, off in _split_top(text, "+-"):
            chunk = chunk.strip()
            if not chunk:
                if off == 0 or sep == "-":
                    continue
                raise self.err("dangling operator", lineno, col + off)
            if chunk == "0":
                continue
            factors = _split_star(chunk)
            path = self._parse_path(factors[-1], quiver, lineno, col + off)
            coeff = self.field.elem(1)
            for tok in factors[:-1]:
                coeff = coeff * self._factor(tok, lineno, col + off)
            if sep == "-":
                coeff = -coeff
            out[path] = out.get(path, self.field.elem(0)) + coeff
        return out

    def _parse_relation(self, text: str, quiver: Quiver, lineno, col) -> RelationPoly:
        lhs, eq, rhs = text.partition("=")
        poly = self._parse_side(lhs, quiver, lineno, col)
        if eq:
            for path, c in self._parse_side(rhs, quiver, lineno, col + len(lhs) + 1).items():
                poly[path] = poly.get(path, self.field.elem(0)) - c
        terms = tuple((c, p) for p, c in poly.items() if c)
        if not terms:
            raise NonAdmissibleRelation(f"line {lineno}: relation is identically zero")
        rel = RelationPoly(terms)
        try:
            _validate_relation(rel, quiver)
        except (NonComposablePath, NonParallelRelation, NonAdmissibleRelation) as e:
            raise type(e)(f"line {lineno}: {e}") from None
        return rel


def _only_in_parens_or_exp(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and not text[:i].rstrip().endswith("^"):
            return False
    return True


def _split_star(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_presentation(text: str) -> Presentation:
    """Parse and validate DSL source."""
    return _Parser(text).run()


# ----------------------------------------------------------------------
# validation


def _validate_quiver(q: Quiver) -> None:
    if not q.vertices:
        raise UnknownVertex("presentation declares no vertices")
    if len(set(q.vertices)) != len(q.vertices):
        raise PresentationSyntaxError("duplicate vertex names")
    names = [a.name for a in q.arrows]
    if len(set(names)) != len(names):
        raise PresentationSyntaxError("duplicate arrow names")
    for a in q.arrows:
        for v in (a.source, a.target):
            if v not in q.vertices:
                raise UnknownVertex(f"arrow {a.name} uses undeclared vertex {v!r}")


def _validate_relation(rel: RelationPoly, quiver: Quiver) -> tuple[str, str]:
    ends = None
    for c, path in rel.terms:
        e = path.endpoints(quiver)
        if path.length < 2:
            raise NonAdmissibleRelation(
                f"term {path} has length {path.length}; relations must lie in the square of the arrow ideal"
            )
        if ends is None:
            ends = e
        elif e != ends:
            raise NonParallelRelation(f"term {path} runs {e[0]}->{e[1]}, expected {ends[0]}->{ends[1]}")
    return ends


def validate_presentation(p: Presentation) -> dict:
    """Re-check every structural invariant; returns a summary report."""
    _validate_quiver(p.quiver)
    for rel in p.relations:
        if not rel.terms:
            raise NonAdmissibleRelation("empty relation")
        for c, _ in rel.terms:
            if c.desc != p.field:
                raise BadParam("relation coefficient from a different field")
        _validate_relation(rel, p.quiver)
    for name, val in p.params:
        if not _NAME_RE.match(name) or val.desc != p.field:
            raise BadParam(f"bad parameter binding {name!r}")
    arrow_names = {a.name for a in p.quiver.arrows}
    for name, w in p.order.weights:
        if name not in arrow_names:
            raise UnknownArrow(f"order weight for unknown arrow {name!r}")
    if p.order.kind not in ("deglex", "local"):
        raise BadParam(f"unknown order kind {p.order.kind!r}")
    if p.form is not None:
        seen = set()
        for path, val in p.form:
            path.endpoints(p.quiver)
            if path in seen:
                raise BadForm(f"form value for {path} given twice")
            seen.add(path)
    return {
        "ok": True,
        "vertices": len(p.quiver.vertices),
        "arrows": len(p.quiver.arrows),
        "relations": len(p.relations),
        "field": [p.field.p, p.field.k],
        "has_form": p.form is not None,
    }
