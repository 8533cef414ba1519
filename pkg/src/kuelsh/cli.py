"""Command-line front end ``kuelsh``.

Every command prints one JSON report on stdout::

    {schema, tool, version, command, input: {digest, source}, result, timing}

Errors go to stderr as ``{"error": {code, message, details}}`` with exit
status 2 (bad input), 3 (not symmetric) or 4 (internal consistency).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass

from . import __version__
from .catalog import CATALOG, PAIRS, catalog_source, generic_params
from .errors import (
    CharacteristicMismatch,
    KuelshError,
    MixedFields,
    NotSymmetricAlgebra,
    ReproductionFailure,
    ValidationError,
)
from .field import field_make
from .hochschild import hh_compute
from .invariants import (
    DEFAULT_N_MAX,
    center,
    commutator_subspace,
    compare_fingerprints,
    fingerprint,
    form_from_presentation,
    form_validate,
    kuelshammer_sequence,
    resolve_form,
    socle,
)
from .presentation import Presentation, parse_presentation, validate_presentation
from .rewrite import AlgebraTable, algebra_from_presentation, dim_and_cartan

SCHEMA = 1
TOOL = "kuelsh"


class InputError(ValidationError):
    code = "InputError"


# ----------------------------------------------------------------------
# loading inputs


@dataclass
class Loaded:
    text: str
    pres: Presentation
    source: str
    digest: str
    _table: AlgebraTable | None = None

    @property
    def table(self) -> AlgebraTable:
        if self._table is None:
            self._table = algebra_from_presentation(self.pres)
        return self._table

    @property
    def label(self) -> str:
        return self.pres.name or self.source


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"--param expects name=value, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def default_field(name: str, p: int | None, k: int | None):
    entry = CATALOG[name] if name in CATALOG else None
    if p is None:
        p = entry.characteristic if entry and entry.characteristic else 2
    if k is None:
        k = 2 if entry and entry.param and p == 2 else 1
    return field_make(p, k)


def load_catalog(name: str, p: int | None = None, k: int | None = None, params: dict | None = None) -> Loaded:
    F = default_field(name, p, k)
    text = catalog_source(name, F, params)
    key = f"catalog:{name};p={F.p};k={F.k};" + ";".join(f"{a}={b}" for a, b in sorted((params or {}).items()))
    return Loaded(text, parse_presentation(text), key, _sha(key))


def load_file(path: str) -> Loaded:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=path) from None
    return Loaded(text, parse_presentation(text), "stdin" if path == "-" else path, _sha(text))


def load_input(path: str | None, catalog: str | None, p, k, params) -> Loaded:
    if catalog and path:
        raise InputError("give either an input file or --catalog, not both")
    if catalog:
        return load_catalog(catalog, p, k, _parse_params(params))
    if path:
        if params or p is not None or k is not None:
            raise InputError("--p, --k and --param only apply with --catalog")
        return load_file(path)
    raise InputError("no input: give a presentation file, '-' for stdin, or --catalog NAME")


def _form_for(loaded: Loaded, choice: str, seed=None):
    t = loaded.table
    if choice in ("auto", "search"):
        return resolve_form(t, loaded.pres, choice, seed)
    try:
        with open(choice, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read form file {choice}: {exc.strerror}", path=choice) from None
    kept = [ln for ln in loaded.text.splitlines() if not ln.strip().startswith("form ")]
    extra = []
    for ln in lines:
        s = ln.split("#", 1)[0].strip()
        if s:
            extra.append(s if s.startswith("form ") else f"form {s}")
    pres = parse_presentation("\n".join(kept + extra) + "\n")
    return form_validate(t, form_from_presentation(t, pres), origin=choice)


def _symmetric_or_none(loaded: Loaded, seed=None):
    try:
        return resolve_form(loaded.table, loaded.pres, "auto", seed)
    except NotSymmetricAlgebra:
        return None


# ----------------------------------------------------------------------
# commands; each returns (result payload, human summary)


def cmd_catalog(args):
    rows = []
    for e in CATALOG.values():
        rows.append(
            {
                "name": e.name,
                "title": e.title,
                "characteristic": e.characteristic,
                "param": e.param,
                "standard": e.standard,
                "simples": e.simples,
                "tubular_type": e.tubular_type,
            }
        )
    result = {"entries": rows}
    if args.show:
        loaded = load_catalog(args.show, args.p, args.k, _parse_params(args.param))
        result["source"] = loaded.text
    summary = "\n".join(f"{r['name']:<10} {r['title']}" for r in rows)
    return result, summary


def cmd_validate(args):
    loaded = load_input(args.input, args.catalog, args.p, args.k, args.param)
    report = validate_presentation(loaded.pres)
    report["name"] = loaded.pres.name
    return report, f"{loaded.label}: valid presentation"


def _basis_payload(t: AlgebraTable) -> dict:
    dim, cartan = dim_and_cartan(t)
    vn = list(t.vertex_names) or [str(i) for i in range(t.vertex_count)]
    return {
        "dim": dim,
        "cartan": cartan,
        "vertices": vn,
        "basis": [
            {"path": t.names[i], "source": vn[t.sources[i]], "target": vn[t.targets[i]], "length": t.grading[i]}
            for i in range(dim)
        ],
    }


def table_json(t: AlgebraTable) -> dict:
    F = t.field
    mul = [[int(i), int(j), int(k), int(t.mul[i, j, k])] for i, j, k in zip(*t.mul.nonzero())]
    return {
        "field": {"p": F.p, "k": F.k, "modulus": list(F.modulus)},
        "names": list(t.names),
        "sources": [int(s) for s in t.sources],
        "targets": [int(s) for s in t.targets],
        "mul": mul,
    }


def cmd_basis(args):
    loaded = load_input(args.input, args.catalog, args.p, args.k, args.param)
    t = loaded.table
    result = _basis_payload(t)
    if args.emit_table:
        with open(args.emit_table, "w", encoding="utf-8") as fh:
            json.dump(table_json(t), fh, sort_keys=True, indent=1)
            fh.write("\n")
        result["table_file"] = args.emit_table
    return result, f"{loaded.label}: dim {t.dim}, cartan {result['cartan']}"


def cmd_invariants(args):
    loaded = load_input(args.input, args.catalog, args.p, args.k, args.param)
    t = loaded.table
    form = _form_for(loaded, args.form)
    ks = kuelshammer_sequence(t, form, args.n_max)
    dim, cartan = dim_and_cartan(t)
    result = {
        "dim": dim,
        "dimZ": center(t).dim,
        "dimK": commutator_subspace(t).dim,
        "dimSoc": socle(t).dim,
        "cartan": cartan,
        "kuelshammer": ks.to_dict(),
        "form_used": form.to_dict(t),
    }
    summary = (
        f"{loaded.label}: dim {dim}, dim Z {result['dimZ']}, dim K {result['dimK']}, "
        f"dim soc {result['dimSoc']}, T_n^perp dims {ks.dims}, codims {ks.codims}"
    )
    return result, summary


def cmd_hh(args):
    loaded = load_input(args.input, args.catalog, args.p, args.k, args.param)
    res = hh_compute(loaded.table, args.degree, args.method)
    return res.to_dict(), f"{loaded.label}: dim HH^{res.degree} = {res.dim} ({res.method})"


def _fingerprint(loaded: Loaded, n_max: int, hh: bool) -> dict:
    form = _symmetric_or_none(loaded)
    return fingerprint(loaded.table, form, n_max, (0, 1, 2) if hh else ())


def compare_loaded(a: Loaded, b: Loaded, n_max: int = DEFAULT_N_MAX, hh: bool = False) -> dict:
    if a.pres.field != b.pres.field:
        raise MixedFields(f"cannot compare algebras over {a.pres.field!r} and {b.pres.field!r}")
    fa, fb = _fingerprint(a, n_max, hh), _fingerprint(b, n_max, hh)
    cmp = compare_fingerprints(fa, fb)
    return {"a": {"label": a.label, "fingerprint": fa}, "b": {"label": b.label, "fingerprint": fb}, **cmp}


def cmd_compare(args):
    a = load_input(args.a, args.catalog, args.p, args.k, args.param)
    if args.catalog2:
        p2 = args.p if args.p is not None else None
        b = load_input(args.b, args.catalog2, p2, args.k, args.param2 if args.param2 is not None else args.param)
    else:
        b = load_input(args.b, None, None, None, None)
    result = compare_loaded(a, b, args.n_max, args.hh)
    lines = [f"{a.label} vs {b.label}: {result['verdict']}"]
    lines += [f"  {d['invariant']}: {d['a']} vs {d['b']}" for d in result["differ"]]
    return result, "\n".join(lines)


def _category(witness: str | None) -> str | None:
    if witness == "kuelshammer_codims":
        return "kuelshammer"
    if witness == "hh2_dim":
        return "hh2"
    return witness


def _row_fields(name_a: str, own_p: int, p: int | None):
    p = own_p if p is None else p
    return p, 2 if CATALOG[name_a].param and p == 2 else 1


def reproduce_rows(p: int | None = None) -> list[dict]:
    rows = []
    for idx, (na, nb, own_p) in enumerate(PAIRS, start=1):
        rp, rk = _row_fields(na, own_p, p)
        hh = idx == len(PAIRS)  # the last pair is only separated in Hochschild cohomology
        row = {"row": idx, "a": na, "b": nb, "p": rp, "k": rk, "pairs": []}
        try:
            F = field_make(rp, rk)
            # fail fast on a wrong characteristic
            for name in (na, nb):
                catalog_source(name, F, (generic_params(name, F) or [{}])[0])
            cache: dict = {}

            def get(name, params):
                key = (name, tuple(sorted((k, v.value) for k, v in params.items())))
                if key not in cache:
                    cache[key] = load_catalog(name, rp, rk, params)
                return cache[key]

            for pa in generic_params(na, F):
                for pb in generic_params(nb, F):
                    cmp = compare_loaded(get(na, pa), get(nb, pb), hh=hh)
                    w = cmp["witness"]
                    diff = next((d for d in cmp["differ"] if d["invariant"] == w), None)
                    row["pairs"].append(
                        {
                            "params_a": {k: str(v) for k, v in pa.items()},
                            "params_b": {k: str(v) for k, v in pb.items()},
                            "witness": w,
                            "values": [diff["a"], diff["b"]] if diff else None,
                        }
                    )
            witnesses = {pr["witness"] for pr in row["pairs"]}
            separated = all(pr["witness"] for pr in row["pairs"])
            row["witness"] = witnesses.pop() if len(witnesses) == 1 else sorted(map(str, witnesses))
            row["category"] = _category(row["witness"]) if isinstance(row["witness"], str) else None
            row["values"] = row["pairs"][0]["values"]
            row["separated"] = separated
            row["status"] = "separated" if separated else "not separated"
        except KuelshError as exc:
            row.update(witness=None, category=None, values=None, separated=False, status="error", error=exc.to_dict())
        rows.append(row)
    return rows


def cmd_reproduce(args):
    rows = reproduce_rows(args.p)
    ok = sum(r["separated"] for r in rows)
    counts: dict = {}
    for r in rows:
        if r["category"]:
            counts[r["category"]] = counts.get(r["category"], 0) + 1
    result = {"separations": f"{ok}/{len(rows)}", "all_separated": ok == len(rows), "witness_counts": counts, "rows": rows}
    lines = []
    for r in rows:
        if r["status"] == "error":
            lines.append(f"({r['row']}) {r['a']} / {r['b']}  p={r['p']}: {r['error']['code']}: {r['error']['message']}")
        else:
            lines.append(f"({r['row']}) {r['a']} / {r['b']}  p={r['p']}: {r['status']}, witness {r['witness']} {r['values']}")
    lines.append(f"{ok}/{len(rows)} separations")
    summary = "\n".join(lines)
    if ok == len(rows):
        return result, summary
    failing = [r for r in rows if not r["separated"]]
    if all(r.get("error", {}).get("code") == CharacteristicMismatch.code for r in failing):
        exc = CharacteristicMismatch(
            f"rows {[r['row'] for r in failing]} need a different characteristic", rows=[r["row"] for r in failing]
        )
    else:
        exc = ReproductionFailure(f"rows {[r['row'] for r in failing]} were not separated", rows=[r["row"] for r in failing])
    exc.partial = (result, summary)
    raise exc


# ----------------------------------------------------------------------
# argument parsing


def _add_input(sp, positional=True):
    if positional:
        sp.add_argument("input", nargs="?", help="presentation file, or '-' for stdin")
    sp.add_argument("--catalog", metavar="NAME", help="built-in algebra instead of a file")
    sp.add_argument("--p", type=int, help="characteristic (catalog input)")
    sp.add_argument("--k", type=int, help="field degree (catalog input)")
    sp.add_argument("--param", action="append", metavar="NAME=VALUE", help="catalog parameter, e.g. lambda=g")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog=TOOL, description="Derived-equivalence invariants of bound quiver algebras.")
    ap.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    ap.add_argument("--quiet", action="store_true", help="no human summary on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("catalog", help="list built-in algebras")
    sp.add_argument("--show", metavar="NAME", help="include the DSL source of one entry")
    sp.add_argument("--p", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--param", action="append", metavar="NAME=VALUE")

    _add_input(sub.add_parser("validate", help="parse and check a presentation"))

    sp = sub.add_parser("basis", help="normal-form basis and Cartan matrix")
    _add_input(sp)
    sp.add_argument("--emit-table", metavar="FILE", help="write structure constants as JSON")

    sp = sub.add_parser("invariants", help="center, commutators, Külshammer ideals")
    _add_input(sp)
    sp.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    sp.add_argument("--form", default="auto", help="auto, search, or a file of 'path = coeff' lines")

    sp = sub.add_parser("hh", help="Hochschild cohomology dimension")
    _add_input(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--method", choices=["relative", "bar"], default="relative")

    sp = sub.add_parser("compare", help="compare two algebras by derived invariants")
    sp.add_argument("a", nargs="?")
    sp.add_argument("b", nargs="?")
    _add_input(sp, positional=False)
    sp.add_argument("--catalog2", metavar="NAME")
    sp.add_argument("--param2", action="append", metavar="NAME=VALUE")
    sp.add_argument("--hh", action="store_true", help="include HH^0..2 dimensions")
    sp.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)

    sp = sub.add_parser("reproduce", help="run the four separations")
    sp.add_argument("--p", type=int, help="force one characteristic for every row")
    return ap


COMMANDS = {
    "catalog": cmd_catalog,
    "validate": cmd_validate,
    "basis": cmd_basis,
    "invariants": cmd_invariants,
    "hh": cmd_hh,
    "compare": cmd_compare,
    "reproduce": cmd_reproduce,
}


def _input_descriptor(args) -> dict:
    parts = {k: v for k, v in sorted(vars(args).items()) if k not in ("quiet",) and v is not None}
    files = [parts[k] for k in ("input", "a", "b") if k in parts and parts[k] != "-"]
    blob = json.dumps(parts, sort_keys=True)
    for f in files:
        try:
            with open(f, "rb") as fh:
                blob += hashlib.sha256(fh.read()).hexdigest()
        except OSError:
            pass
    source = parts.get("catalog") or parts.get("input") or parts.get("a") or args.command
    if parts.get("catalog2") or parts.get("b"):
        source = f"{source} vs {parts.get('catalog2') or parts.get('b')}"
    return {"digest": hashlib.sha256(blob.encode()).hexdigest(), "source": source}


def _emit(args, result, started, out=None) -> None:
    out = out or sys.stdout
    report = {
        "schema": SCHEMA,
        "tool": TOOL,
        "version": __version__,
        "command": args.command,
        "input": _input_descriptor(args),
        "result": result,
        "timing": {"seconds": round(time.perf_counter() - started, 3)},
    }
    json.dump(report, out, sort_keys=True, ensure_ascii=False, default=str)
    out.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        result, summary = COMMANDS[args.command](args)
    except KuelshError as exc:
        partial = getattr(exc, "partial", None)
        if partial:
            _emit(args, partial[0], started)
            if not args.quiet:
                print(partial[1], file=sys.stderr)
        json.dump({"error": exc.to_dict()}, sys.stderr, sort_keys=True, default=str)
        sys.stderr.write("\n")
        return exc.exit_code
    _emit(args, result, started)
    if not args.quiet and summary:
        print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
