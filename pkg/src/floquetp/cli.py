"""Command-line interface.

Exit codes: 0 success, 2 when the question has an empty answer (no periodic
solution on ``solve``/``descend``), 1 for invalid input or internal disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

import flint

from .field_tower import (
    FieldElement,
    FieldError,
    build_field,
    format_element,
    is_prime,
    minimal_subfield_degree,
    parse_element,
    poly_roots,
    restrict,
)
from .fragmentation import (
    Edge,
    FragmentationError,
    VoltageGraph,
    fragment_operator,
    fragmentation_map,
    max_abelian_cover,
    voltage_operator,
)
from .group_algebra import GroupAlgebraElement, GroupAlgebraError
from .lattice_quotient import (
    LatticeError,
    NotPSaturatedError,
    Sublattice,
    TorusPoint,
    format_sublattice,
    index,
    parse_sublattice,
)
from .matrix_spectral import (
    MatrixOperator,
    OperatorError,
    generalized_eigenspace,
    jordan_basis,
    multipliers,
    periodic_solutions,
)
from .oracle import build_quotient_matrix, nullity, oracle_spectrum
from .trace_descent import DescentError, DescentRequest, descend_kernel, gf_q_kernel_basis

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2


class InputError(Exception):
    """Invalid input; ``code`` names the kind of problem."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


# --- parsing ---------------------------------------------------------------------------------


def _field_from_header(doc: dict):
    """Return ``(ctx, convert)`` where ``convert`` parses a literal into the canonical field."""
    try:
        p = int(doc["p"])
    except (KeyError, TypeError, ValueError):
        raise InputError("E_SCHEMA", "header needs an integer 'p'") from None
    if not is_prime(p):
        raise InputError("E_PRIME", f"p={p} is not prime")
    m = int(doc.get("degree", 1))
    if m < 1:
        raise InputError("E_SCHEMA", "field degree must be positive")
    ctx = build_field(p, m)
    modulus = doc.get("modulus")
    if modulus is None or tuple(int(c) % p for c in modulus) == ctx.modulus:
        return ctx, lambda text: parse_element(str(text), ctx)
    # user modulus: map its generator to the smallest matching root in the canonical field
    modulus = [int(c) % p for c in modulus]
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise InputError("E_FIELD", "modulus must be monic of the declared degree (low coefficient first)")
    if not flint.fmpz_mod_poly_ctx(p)(modulus).is_irreducible():
        raise InputError("E_FIELD", "modulus is not irreducible")
    gamma = min(poly_roots([ctx(c) for c in modulus], ctx), key=FieldElement.sort_key)

    def convert(text):
        s = str(text).strip()
        if s == "g":
            return gamma
        if s.startswith("g^") or s.startswith("-g^"):
            y = gamma ** int(s.split("^", 1)[1])
            return -y if s.startswith("-") else y
        if s.startswith("["):
            coeffs = parse_element(s, build_field(p, m)).coeffs
            acc, y = ctx.zero, ctx.one
            for c in coeffs:
                acc = acc + y * c
                y = y * gamma
            return acc
        return parse_element(s, ctx)

    return ctx, convert


def _terms(ctx, convert, rank, terms, where: str) -> GroupAlgebraElement:
    seen = set()
    items = []
    for t in terms:
        try:
            lam = tuple(int(x) for x in t["lambda"])
            coeff = convert(t["coeff"])
        except FieldError as exc:
            raise InputError("E_COEFF", f"{where}: {exc}") from None
        except (KeyError, TypeError, ValueError):
            raise InputError("E_SCHEMA", f"{where}: terms need 'lambda' and 'coeff'") from None
        if len(lam) != rank:
            raise InputError("E_SCHEMA", f"{where}: exponent {list(lam)} does not have length {rank}")
        if lam in seen:
            raise InputError("E_DUPLICATE", f"{where}: duplicate exponent {list(lam)}")
        seen.add(lam)
        items.append((lam, coeff))
    return GroupAlgebraElement(ctx, rank, items)


def _parse_operator(doc, ctx, convert) -> MatrixOperator:
    rank = int(doc.get("rank", 1))
    n = int(doc.get("size", 1))
    if n < 1 or rank < 0:
        raise InputError("E_SCHEMA", "size must be positive and rank nonnegative")
    cells = [[None] * n for _ in range(n)]
    for k, e in enumerate(doc.get("entries", [])):
        try:
            i, j = int(e["i"]), int(e["j"])
        except (KeyError, TypeError, ValueError):
            raise InputError("E_SCHEMA", f"entry {k}: needs integer 'i' and 'j'") from None
        if not (0 <= i < n and 0 <= j < n):
            raise InputError("E_RANGE", f"entry {k}: index ({i}, {j}) out of range for size {n}")
        if cells[i][j] is not None:
            raise InputError("E_DUPLICATE", f"entry {k}: cell ({i}, {j}) given twice")
        cells[i][j] = _terms(ctx, convert, rank, e.get("terms", []), f"entry ({i}, {j})")
    zero = GroupAlgebraElement.zero(ctx, rank)
    return MatrixOperator(ctx, rank, [[c if c is not None else zero for c in row] for row in cells])


def _parse_voltage(doc, ctx, convert) -> VoltageGraph:
    rank = int(doc.get("rank", 1))
    edges = []
    for k, e in enumerate(doc.get("edges", [])):
        try:
            edge = Edge(int(e["tail"]), int(e["head"]), tuple(int(x) for x in e.get("label", [0] * rank)),
                        convert(e.get("weight", "1")))
        except FieldError as exc:
            raise InputError("E_COEFF", f"edge {k}: {exc}") from None
        except (KeyError, TypeError, ValueError):
            raise InputError("E_SCHEMA", f"edge {k}: needs 'tail' and 'head'") from None
        edges.append(edge)
    try:
        return VoltageGraph(ctx, int(doc["vertices"]), rank, tuple(edges))
    except FragmentationError as exc:
        raise InputError("E_RANGE", str(exc)) from None
    except KeyError:
        raise InputError("E_SCHEMA", "voltage graph needs 'vertices'") from None


def parse_operator_file(text: str):
    """Parse a JSON document into a MatrixOperator, VoltageGraph or fragmentation pair."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("E_SYNTAX", f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("E_SCHEMA", "top level must be an object")
    kind = doc.get("kind", "operator")
    ctx, convert = _field_from_header(doc)
    if kind == "operator":
        return _parse_operator(doc, ctx, convert)
    if kind == "voltage_graph":
        return _parse_voltage(doc, ctx, convert)
    if kind == "fragmentation":
        rank = int(doc.get("rank", 1))
        a = _terms(ctx, convert, rank, doc.get("terms", []), "fragmentation")
        try:
            sub = parse_sublattice(doc["sub"], rank)
        except KeyError:
            raise InputError("E_SCHEMA", "fragmentation needs 'sub'") from None
        return a, sub
    if kind == "graph":
        return ctx, int(doc["vertices"]), [tuple(int(x) for x in e) for e in doc.get("edges", [])]
    raise InputError("E_SCHEMA", f"unknown kind {kind!r}")


def load_operator(path: str, laplace: bool = False) -> MatrixOperator:
    obj = parse_operator_file(_read(path))
    if isinstance(obj, MatrixOperator):
        return obj
    if isinstance(obj, VoltageGraph):
        return voltage_operator(obj, laplace=laplace)
    if isinstance(obj, tuple) and len(obj) == 2:
        a, sub = obj
        return fragment_operator(a, fragmentation_map(sub))
    raise InputError("E_SCHEMA", "file does not describe an operator")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("E_IO", f"cannot read {path}: {exc.strerror}") from None


# --- serialisation -----------------------------------------------------------------------


def element_json(x: FieldElement) -> dict:
    d = minimal_subfield_degree(x)
    return {"value": format_element(x), "subfield_degree": d,
            "subfield_value": format_element(restrict(x, build_field(x.ctx.p, d)))}


def element_text(x: FieldElement) -> str:
    d = minimal_subfield_degree(x)
    small = format_element(restrict(x, build_field(x.ctx.p, d)))
    return small if d == 1 else f"{small}@GF({x.ctx.p}^{d})"


def point_json(z: TorusPoint) -> dict:
    return {"label": list(z.label) if z.label is not None else None,
            "coords": [format_element(c) for c in z.coords], "order": z.order}


def point_text(z: TorusPoint) -> str:
    lab = "" if z.label is None else f"k={list(z.label)} "
    return f"{lab}z=({', '.join(format_element(c) for c in z.coords)}) order {z.order}"


def operator_json(A: MatrixOperator) -> dict:
    entries = []
    for i, row in enumerate(A.entries):
        for j, a in enumerate(row):
            if not a.is_zero():
                entries.append({"i": i, "j": j, "terms": a.to_terms()})
    doc = {"kind": "operator", "p": A.ctx.p, "rank": A.rank, "size": A.n, "entries": entries}
    if A.ctx.m > 1:
        doc["degree"] = A.ctx.m
    return doc


def _vec(v) -> list[str]:
    return [format_element(x) for x in v]


# --- commands ---------------------------------------------------------------------------------


def _period(args, A: MatrixOperator) -> Sublattice:
    if args.period is None:
        raise InputError("E_USAGE", "--period is required")
    try:
        return parse_sublattice(args.period, A.rank)
    except LatticeError as exc:
        raise InputError("E_PERIOD", str(exc)) from None


def cmd_solve(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    sols = periodic_solutions(A, sub)
    doc = {"command": "solve", "period": format_sublattice(sub), "index": index(sub),
           "dimension": len(sols),
           "solutions": [{"character": point_json(s.z), "vector": _vec(s.u),
                          "values": [_vec(v) if isinstance(v, tuple) else _vec([v])
                                     for v in s.render(sub).on_residues()]} for s in sols]}
    lines = [f"period {format_sublattice(sub)} (index {index(sub)}): kernel dimension {len(sols)}"]
    for s in sols:
        lines.append(f"  {point_text(s.z)}  u=({', '.join(_vec(s.u))})")
    if not sols:
        lines = ["kernel is zero"]
    return doc, lines, EXIT_OK if sols else EXIT_EMPTY


def cmd_spectrum(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    if args.level is not None:
        try:
            mu = parse_element(args.level, A.ctx)
        except FieldError as exc:
            raise InputError("E_COEFF", str(exc)) from None
        basis = generalized_eigenspace(A, mu, sub)
        doc = {"command": "spectrum", "period": format_sublattice(sub), "level": element_json(mu),
               "dimension": len(basis),
               "basis": [{"character": point_json(b.z), "vector": _vec(b.u), "depth": b.depth} for b in basis]}
        lines = [f"level {element_text(mu)}: dimension {len(basis)}"]
        lines += [f"  {point_text(b.z)}  u=({', '.join(_vec(b.u))}) depth {b.depth}" for b in basis]
        return doc, lines, EXIT_OK
    rep = jordan_basis(A, sub)
    dims = rep.dimensions()
    blocks = rep.block_multisets()
    levels = [{"mu": element_json(mu), "dimension": dims[mu], "blocks": blocks[mu]} for mu in rep.eigenvalues()]
    doc = {"command": "spectrum", "period": format_sublattice(sub), "field": repr(rep.field),
           "total": sum(dims.values()), "levels": levels}
    lines = [f"period {format_sublattice(sub)}, ambient {rep.field!r}, total dimension {sum(dims.values())}"]
    lines += [f"  mu={element_text(mu)}: dim {dims[mu]}, blocks {blocks[mu]}" for mu in rep.eigenvalues()]
    return doc, lines, EXIT_OK


def cmd_jordan(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    rep = jordan_basis(A, sub)
    pts = []
    lines = [f"period {format_sublattice(sub)}, ambient {rep.field!r}"]
    for pt in rep.points:
        eig = []
        lines.append(f"  {point_text(pt.z)}")
        for e in pt.eigen:
            eig.append({"mu": element_json(e.mu), "blocks": e.blocks,
                        "chains": [[_vec(v) for v in c] for c in e.chains]})
            lines.append(f"    mu={element_text(e.mu)} blocks {e.blocks}")
            for c in e.chains:
                lines.append("      chain " + " -> ".join("(" + ", ".join(_vec(v)) + ")" for v in c))
        pts.append({"character": point_json(pt.z), "eigen": eig})
    doc = {"command": "jordan", "period": format_sublattice(sub), "field": repr(rep.field), "points": pts}
    return doc, lines, EXIT_OK


def cmd_multipliers(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    zs = multipliers(A, sub)
    doc = {"command": "multipliers", "period": format_sublattice(sub), "count": len(zs),
           "multipliers": [point_json(z) for z in zs]}
    lines = [f"{len(zs)} multipliers"] + [f"  {point_text(z)}" for z in zs]
    return doc, lines, EXIT_OK


def cmd_count(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    c = len(multipliers(A, sub))
    return {"command": "count", "period": format_sublattice(sub), "count": c}, [str(c)], EXIT_OK


def cmd_descend(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    q = args.target_q if args.target_q is not None else A.ctx.p
    try:
        req = DescentRequest(A, q, sub)
    except (DescentError, FieldError) as exc:
        raise InputError("E_DESCENT", str(exc)) from None
    f = descend_kernel(req)
    if f is None:
        doc = {"command": "descend", "period": format_sublattice(sub), "q": q, "solution": None, "basis": []}
        return doc, ["kernel is zero"], EXIT_EMPTY
    basis = gf_q_kernel_basis(req)

    def values(g):
        return [format_element(x) if g.n == 1 else _vec(x) for x in g.on_residues()]

    doc = {"command": "descend", "period": format_sublattice(sub), "q": q, "solution": values(f),
           "basis": [values(b) for b in basis]}
    lines = [f"GF({q})-valued solution on residues of {format_sublattice(sub)}: {values(f)}",
             f"GF({q}) basis dimension {len(basis)}"]
    lines += [f"  {values(b)}" for b in basis]
    return doc, lines, EXIT_OK


def cmd_fragment(args, out):
    obj = parse_operator_file(_read(args.file))
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], GroupAlgebraElement):
        a, sub = obj
        if args.sub is not None:
            sub = parse_sublattice(args.sub, a.rank)
    elif isinstance(obj, MatrixOperator) and obj.n == 1:
        a = obj.entries[0][0]
        if args.sub is None:
            raise InputError("E_USAGE", "--sub is required")
        sub = parse_sublattice(args.sub, a.rank)
    else:
        raise InputError("E_SCHEMA", "fragment needs a scalar operator")
    B = fragment_operator(a, fragmentation_map(sub))
    doc = operator_json(B)
    lines = [json.dumps(doc, indent=2)]
    return doc, lines, EXIT_OK


def cmd_cover(args, out):
    obj = parse_operator_file(_read(args.file))
    if not (isinstance(obj, tuple) and len(obj) == 3):
        raise InputError("E_SCHEMA", "cover needs a file of kind 'graph'")
    ctx, nv, edges = obj
    vg = max_abelian_cover(nv, edges, ctx)
    doc = {"kind": "voltage_graph", "p": ctx.p, "vertices": vg.vertices, "rank": vg.rank,
           "edges": [{"tail": e.tail, "head": e.head, "label": list(e.label),
                      "weight": format_element(e.weight)} for e in vg.edges]}
    if ctx.m > 1:
        doc["degree"] = ctx.m
    return doc, [json.dumps(doc, indent=2)], EXIT_OK


def cmd_oracle_check(args, out):
    A = load_operator(args.file, args.laplace)
    sub = _period(args, A)
    dim_char = len(periodic_solutions(A, sub))
    M = build_quotient_matrix(A, sub)
    dim_oracle = nullity(M)
    rep = jordan_basis(A, sub)
    orc = oracle_spectrum(M, rep.field)
    spec_ok = orc.field is rep.field and orc.dimensions == rep.dimensions() and orc.blocks == rep.block_multisets()
    agree = dim_char == dim_oracle and spec_ok
    doc = {"command": "oracle-check", "period": format_sublattice(sub), "agree": agree,
           "character_dimension": dim_char, "oracle_dimension": dim_oracle, "spectrum_agrees": spec_ok}
    if agree:
        lines = [f"character method and oracle agree: dim {dim_char}"]
    else:
        lines = [f"DISAGREEMENT: character method dim {dim_char}, oracle dim {dim_oracle}, spectrum agrees: {spec_ok}"]
    return doc, lines, EXIT_OK if agree else EXIT_ERROR


COMMANDS = {
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "jordan": cmd_jordan,
    "multipliers": cmd_multipliers,
    "count": cmd_count,
    "descend": cmd_descend,
    "fragment": cmd_fragment,
    "cover": cmd_cover,
    "oracle-check": cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floquetp", description="Periodic solutions of convolution equations over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file")
        sp.add_argument("--period", help="period sublattice, e.g. '3' or '2,0;0,2'")
        sp.add_argument("--level", help="eigenvalue literal (in the operator's field) for 'spectrum'")
        sp.add_argument("--target-q", type=int, dest="target_q", help="target field size for 'descend'")
        sp.add_argument("--sub", help="fragmentation sublattice for 'fragment'")
        sp.add_argument("--laplace", action="store_true", help="use the Laplace variant for voltage graphs")
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        doc, lines, code = COMMANDS[args.command](args, out)
    except InputError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except NotPSaturatedError as exc:
        print(f"error[E_SATURATION]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (LatticeError, FieldError, GroupAlgebraError, OperatorError, FragmentationError, DescentError) as exc:
        print(f"error[E_INPUT]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
