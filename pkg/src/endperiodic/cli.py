"""Command-line interface.

Subcommands:

* ``construct`` -- run the whole pipeline on a matrix (from a file, an
  inline integer, or a block lift of a file matrix), write the JSON
  record, optionally render figures and re-verify the fresh record.
* ``verify`` -- re-run every section of a stored record and diff.
* ``render`` -- produce one or more SVG figures for an input.
* ``spectral`` -- print exact characteristic data and Perron eigendata.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
The ``ENDPERIODIC_OUT`` environment variable sets the default output
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import (
    ConvergenceError,
    InvalidInputError,
    PreconditionError,
    VerificationError,
)
from .record import build_record, load_record, verify_record
from .render import DIAGRAM_KINDS, DiagramSpec, render
from .spectral import (
    DEFAULT_TOL,
    IntMatrix,
    block_lift,
    char_poly,
    determinant,
    graph_period,
    is_irreducible,
    is_primitive,
    parse_matrix_text,
    perron_eigendata,
    spectral_radius_exact,
)

_FIG_ALIASES = {
    "piecemap": "PieceMap",
    "digraphs": "Digraphs",
    "orbits": "Orbits",
    "rectangles": "ExpandedRectangles",
    "expanded": "ExpandedRectangles",
    "complex": "Complex2D",
}


def _fig_kind(name: str) -> str:
    if name in DIAGRAM_KINDS:
        return name
    key = name.lower()
    if key in _FIG_ALIASES:
        return _FIG_ALIASES[key]
    raise InvalidInputError(
        f"unknown figure kind {name!r}; choose from "
        + ", ".join(sorted(set(_FIG_ALIASES.values())))
    )


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("ENDPERIODIC_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_matrix(args) -> tuple[IntMatrix, str]:
    if getattr(args, "integer", None) is not None:
        if args.integer < 2:
            raise InvalidInputError("--integer requires d >= 2")
        return IntMatrix.from_rows([[args.integer]]), f"integer-{args.integer}"
    text = Path(args.matrix).read_text(encoding="utf-8")
    M = parse_matrix_text(text)
    stem = Path(args.matrix).stem
    if getattr(args, "lift", None):
        M = block_lift(M, args.lift)
        stem = f"{stem}-lift{args.lift}"
    return M, stem


def _add_input_options(sub, with_flags=True):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--matrix", help="path to a matrix file (text or JSON)")
    group.add_argument("--integer", type=int, help="inline integer case d >= 2")
    sub.add_argument("--lift", type=int, default=None, metavar="K",
                     help="replace the matrix by its k-th block lift")
    if with_flags:
        sub.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sub.add_argument("--depth", type=int, default=None,
                         help="identification depth cap (default: N + 3m)")
        sub.add_argument("--corner-selection",
                         action=argparse.BooleanOptionalAction, default=True,
                         help="choose the permutations that make a corner periodic")
        sub.add_argument("--insert-genus", action="store_true")
        sub.add_argument("--weak-perron-k", type=int, default=None,
                         help="record the boundary-ray regluing for a k-lift input")
    sub.add_argument("--out", default=None, help="output directory")


def _build(args):
    M, stem = _load_matrix(args)
    weak_k = args.weak_perron_k
    if weak_k is None and args.lift:
        weak_k = args.lift
    record, result = build_record(
        M,
        tol=args.tol,
        depth_cap=args.depth,
        use_corner_selection=args.corner_selection,
        insert_genus=args.insert_genus,
        weak_perron_k=weak_k,
    )
    return M, stem, record, result


def _cmd_construct(args) -> int:
    M, stem, record, result = _build(args)
    out = _out_dir(args)
    record_path = out / f"{stem}.record.json"
    record_path.write_text(record.to_json(), encoding="utf-8")
    surface = result.surface
    print(f"matrix: {M.to_lists()}")
    print(f"lambda: {result.eigen.lam:.12g} (residual {result.eigen.residual:.3g})")
    print(f"stretch factor: {surface.stretch_factor:.12g}")
    print(f"incidence spectral radius: {result.incidence.spectral_radius:.12g} "
          f"(relative error {result.incidence.relative_error:.3g})")
    print(f"ends: {[(e.sign, len(e.strip_orbits)) for e in surface.ends]}")
    print(f"connected: {surface.connected}  infinite type: {surface.infinite_type}")
    print(f"record: {record_path}")
    for fig in args.fig or []:
        kind = _fig_kind(fig)
        doc = render(DiagramSpec(kind=kind, result=result))
        fig_path = out / f"{stem}.{kind}.svg"
        fig_path.write_text(doc, encoding="utf-8")
        print(f"figure: {fig_path}")
    if args.verify:
        results = verify_record(load_record(record_path.read_text("utf-8")))
        for name, ok, detail in results:
            print(f"verify {name}: {'pass' if ok else 'FAIL (' + detail + ')'}")
    return 0


def _cmd_verify(args) -> int:
    data = load_record(Path(args.record).read_text(encoding="utf-8"))
    for name, ok, detail in verify_record(data):
        print(f"{name}: {'pass' if ok else 'FAIL (' + detail + ')'}")
    print("record verified")
    return 0


def _cmd_render(args) -> int:
    args.verify = False
    M, stem, record, result = _build(args)
    out = _out_dir(args)
    for fig in args.fig:
        kind = _fig_kind(fig)
        doc = render(DiagramSpec(kind=kind, result=result))
        fig_path = out / f"{stem}.{kind}.svg"
        fig_path.write_text(doc, encoding="utf-8")
        print(f"figure: {fig_path}")
    return 0


def _cmd_spectral(args) -> int:
    M, _ = _load_matrix(args)
    poly = char_poly(M)
    print(f"matrix: {M.to_lists()}")
    print(f"char_poly: {poly.pretty()}")
    print(f"determinant: {determinant(M)}")
    irr = is_irreducible(M)
    print(f"irreducible: {irr}")
    if irr:
        print(f"graph period: {graph_period(M)}")
        print(f"primitive: {is_primitive(M)}")
        eigen = perron_eigendata(M, tol=args.tol)
        print(f"lambda: {eigen.lam:.15g} (residual {eigen.residual:.3g})")
        print(f"eta: {[float('%.10g' % v) for v in eigen.eta]}")
        print(f"omega: {[float('%.10g' % v) for v in eigen.omega]}")
    else:
        print(f"spectral radius: {spectral_radius_exact(M):.15g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endperiodic",
        description="Build and verify end-periodic maps from integer matrices.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    construct = subs.add_parser("construct", help="run the full pipeline")
    _add_input_options(construct)
    construct.add_argument("--fig", action="append", default=None,
                           metavar="KIND", help="also render a figure kind")
    construct.add_argument("--verify", action="store_true",
                           help="re-verify the freshly written record")
    construct.set_defaults(func=_cmd_construct)

    verify = subs.add_parser("verify", help="verify a stored record")
    verify.add_argument("record", help="path to a record JSON file")
    verify.set_defaults(func=_cmd_verify)

    rend = subs.add_parser("render", help="render figures for an input")
    _add_input_options(rend)
    rend.add_argument("--fig", action="append", required=True, metavar="KIND")
    rend.set_defaults(func=_cmd_render)

    spectral = subs.add_parser("spectral", help="print exact spectral data")
    _add_input_options(spectral, with_flags=False)
    spectral.add_argument("--tol", type=float, default=DEFAULT_TOL)
    spectral.set_defaults(func=_cmd_spectral)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (InvalidInputError, PreconditionError, ConvergenceError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
