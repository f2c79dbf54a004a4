"""Command-line front door.

Exit codes: 0 verified / success, 1 refuted (a witness is in the emitted
certificate), 2 bad input or usage, 3 budget exceeded.  All output is
deterministic for fixed inputs: randomized commands take --seed with a
fixed default, and parallel commands merge worker results in a
schedule-independent way.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from time import perf_counter
from typing import Optional, Sequence

from .arrangement import defines_cell, empty_cell_census
from .constructions import (
    ClusterSpec,
    build_cup_cap_free,
    build_no_empty_cells,
    build_no_ncell_basic,
    build_no_ncell_doubled,
    build_regular_polygon_lines,
    random_family,
    search_no_empty_4cell,
)
from .core import GeometryError, Line, LineFamily, PointR
from .familyio import (
    Certificate,
    FamilyFile,
    dump_family,
    family_from_dict,
    family_hash,
    format_rational,
    load_family,
    parse_rational,
)
from .pseudolines import WiringDiagram, enumerate_wiring_diagrams, wd_spans_n_cell
from .render import render_svg
from .search import BudgetExceeded, FoundNCell, certify_lower_bound, max_convex_position
from .variants import (
    HalfPlane,
    Infeasible,
    check_transversals,
    exact_crossing_cell,
    halfplane_select,
    mixed_polygon,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path: str) -> FamilyFile:
    return load_family(_read(path))


def _emit_cert(args, cert: Certificate, t0: float) -> None:
    cert.seconds = round(perf_counter() - t0, 6)
    _write(args.out, cert.to_json())


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args) -> int:
    t0 = perf_counter()
    ff = _load(args.input)
    census = empty_cell_census(ff.family)

    def enc(d: Optional[dict]) -> Optional[dict]:
        return None if d is None else {str(k): v for k, v in sorted(d.items())}

    doc = {
        "input_hash": family_hash(ff),
        "lines": len(ff.family),
        "census": {
            "total": enc(census.total),
            "bounded": enc(census.bounded),
            "mono_total": enc(census.mono_total),
            "mono_bounded": enc(census.mono_bounded),
        },
        "seconds": round(perf_counter() - t0, 6),
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return 0


def _cmd_construct(args) -> int:
    kind = args.kind
    if kind == "thm-lower":
        fam = build_no_ncell_doubled(args.n)
    elif kind == "prop-lower":
        fam = build_no_ncell_basic(args.n)
    elif kind == "no-empty":
        fam = build_no_empty_cells(args.count, colored=args.colored)
    elif kind == "ngon":
        fam = build_regular_polygon_lines(args.n)
    elif kind == "cupcap-free":
        fam = build_cup_cap_free(args.k, args.l)
    else:  # random
        import random

        fam = random_family(args.count, random.Random(args.seed))
    _write(args.out, dump_family(fam))
    return 0


def _cmd_search(args) -> int:
    t0 = perf_counter()
    if args.kind == "max-convex":
        ff = _load(args.input)
        r = max_convex_position(ff.family, cap=args.cap, budget=args.budget)
        cert = Certificate(
            command=f"search max-convex cap={args.cap}",
            input_hash=family_hash(ff),
            verdict=f"max convex position {r.max_k}",
            witness=r.witness,
            exhaustive=r.exhaustive,
            counts={"lines": len(ff.family)},
        )
        _emit_cert(args, cert, t0)
        return 0
    # no-empty-4cell
    fam = search_no_empty_4cell(args.lines, seed=args.seed, attempts=args.attempts)
    if fam is None:
        print(
            f"no {args.lines}-line family without empty 4-cells in {args.attempts} attempts",
            file=sys.stderr,
        )
        return 1
    _write(args.out, dump_family(fam))
    return 0


def _cmd_verify(args) -> int:
    t0 = perf_counter()
    if args.kind == "lower-bound":
        ff = _load(args.input)
        try:
            cert = certify_lower_bound(ff.family, args.n, budget=args.budget, jobs=args.jobs)
        except FoundNCell as e:
            cert = Certificate(
                command=f"lower-bound n={args.n}",
                input_hash=family_hash(ff),
                verdict=f"found {args.n}-cell",
                witness=e.witness,
            )
            _emit_cert(args, cert, t0)
            return 1
        _emit_cert(args, cert, t0)
        return 0
    # esl-upper: one wiring diagram per input line
    text = _read(args.input)
    digest = hashlib.sha256(text.encode()).hexdigest()
    checked = 0
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw:
            continue
        doc = json.loads(raw)
        wd = WiringDiagram(doc["wires"], tuple(doc["swaps"]))
        checked += 1
        if not wd_spans_n_cell(wd, args.n):
            cert = Certificate(
                command=f"esl-upper n={args.n}",
                input_hash=digest,
                verdict=f"diagram without a {args.n}-cell",
                witness=tuple(wd.swaps),
                counts={"diagrams": checked},
            )
            _emit_cert(args, cert, t0)
            return 1
    if checked == 0:
        print("no diagrams on input", file=sys.stderr)
        return 2
    cert = Certificate(
        command=f"esl-upper n={args.n}",
        input_hash=digest,
        verdict=f"all diagrams span a {args.n}-cell",
        exhaustive=True,
        counts={"diagrams": checked},
    )
    _emit_cert(args, cert, t0)
    return 0


def _cmd_enumerate(args) -> int:
    out = []
    for wd in enumerate_wiring_diagrams(args.wires, up_to_symmetry=not args.full):
        out.append(json.dumps({"swaps": list(wd.swaps), "wires": wd.n}, sort_keys=True))
    _write(args.out, "\n".join(out) + "\n")
    return 0


def _cmd_variant(args) -> int:
    t0 = perf_counter()
    kind = args.kind
    if kind == "exact-cross":
        ff = _load(args.input)
        try:
            g, face = exact_crossing_cell(ff.family, args.n)
        except Infeasible as e:
            cert = Certificate(
                command=f"exact-cross n={args.n}",
                input_hash=family_hash(ff),
                verdict=f"infeasible: {e}",
            )
            _emit_cert(args, cert, t0)
            return 1
        cert = Certificate(
            command=f"exact-cross n={args.n}",
            input_hash=family_hash(ff),
            verdict=f"cell crossed by exactly {args.n} lines",
            witness=(tuple(g), tuple(face.signs)),
            counts={"cell_lines": len(g), "crossing": args.n},
        )
        _emit_cert(args, cert, t0)
        return 0
    if kind == "mixed":
        ff = _load(args.input)
        pts = ff.points
        if args.points:
            pts = tuple(
                PointR(parse_rational(x), parse_rational(y))
                for x, y in json.loads(_read(args.points))["points"]
            )
        if not pts:
            raise ValueError("mixed needs a points list (in the family file or --points)")
        mp = mixed_polygon(ff.family, pts, args.n)
        doc = {
            "translation": [format_rational(mp.translation.x), format_rational(mp.translation.y)],
            "vertices": [[format_rational(v.x), format_rational(v.y)] for v in mp.vertices],
            "edge_lines": list(mp.edge_lines),
            "point_vertices": list(mp.point_vertices),
        }
        _write(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
        return 0
    if kind == "halfplanes":
        doc = json.loads(_read(args.input))
        ff = family_from_dict(doc)
        sides = doc.get("sides")
        if not isinstance(sides, list) or len(sides) != len(doc["lines"]):
            raise ValueError('halfplane files need a "sides" list aligned with "lines"')
        hs = [
            HalfPlane(Line(parse_rational(m), parse_rational(c)), side)
            for (m, c), side in zip(doc["lines"], sides)
        ]
        try:
            chosen, mode = halfplane_select(hs, args.n)
        except Infeasible as e:
            cert = Certificate(
                command=f"halfplanes n={args.n}",
                input_hash=family_hash(ff),
                verdict=f"infeasible: {e}",
            )
            _emit_cert(args, cert, t0)
            return 1
        cert = Certificate(
            command=f"halfplanes n={args.n}",
            input_hash=family_hash(ff),
            verdict=mode,
            witness=chosen,
            counts={"halfplanes": len(hs)},
        )
        _emit_cert(args, cert, t0)
        return 0
    # transversals: one group per color class
    ff = _load(args.input)
    fam = ff.family
    if not fam.colors:
        raise ValueError("transversal files name groups through line colors")
    labels = sorted(set(fam.colors))
    groups = [
        fam.subfamily([i for i, c in enumerate(fam.colors) if c == lab]) for lab in labels
    ]
    n = len(labels)
    total = 1
    for g in groups:
        total *= len(g)
    ok, wit = check_transversals(groups, n, budget=args.budget, jobs=args.jobs)
    if ok:
        cert = Certificate(
            command="transversals",
            input_hash=family_hash(ff),
            verdict=f"every transversal defines a {n}-cell",
            exhaustive=True,
            counts={"groups": n, "transversals": total},
        )
        _emit_cert(args, cert, t0)
        return 0
    cert = Certificate(
        command="transversals",
        input_hash=family_hash(ff),
        verdict=f"transversal without a {n}-cell",
        witness=wit,
        counts={"groups": n, "transversals": total},
    )
    _emit_cert(args, cert, t0)
    return 1


def _cmd_render(args) -> int:
    ff = _load(args.input)
    fam = ff.family
    highlights = []
    for spec in args.cell or ():
        idx = tuple(int(tok) for tok in spec.split(","))
        face = defines_cell(fam.subfamily(idx))
        if face is None:
            raise ValueError(f"lines {idx} do not define a cell")
        highlights.append((idx, face.signs))
    if args.max_cell:
        r = max_convex_position(fam, cap=args.cap, budget=args.budget)
        face = defines_cell(fam.subfamily(r.witness))
        assert face is not None
        highlights.append((r.witness, face.signs))
    _write(args.out, render_svg(fam, highlights))
    return 0


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linecells", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def io(sp, inp=True, out=True):
        if inp:
            sp.add_argument("--input", "-i", default="-", help="family file (default stdin)")
        if out:
            sp.add_argument("--out", "-o", default="-", help="output file (default stdout)")

    sp = sub.add_parser("analyze", help="census of empty cells in a family")
    sp.add_argument("--census", action="store_true", help="emit the empty-cell census (default)")
    io(sp)
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("construct", help="emit a named family")
    sp.add_argument(
        "kind",
        choices=["thm-lower", "prop-lower", "no-empty", "ngon", "cupcap-free", "random"],
    )
    sp.add_argument("--n", type=int, default=5, help="cell size / polygon sides")
    sp.add_argument("--count", type=int, default=10, help="number of lines")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--l", type=int, default=3)
    sp.add_argument("--colored", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    io(sp, inp=False)
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("search", help="search a family or the space of families")
    sp.add_argument("kind", choices=["max-convex", "no-empty-4cell"])
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--lines", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--attempts", type=int, default=200)
    io(sp)
    sp.set_defaults(func=_cmd_search)

    sp = sub.add_parser("verify", help="certify a family or diagram stream")
    sp.add_argument("kind", choices=["lower-bound", "esl-upper"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    io(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("enumerate", help="stream all simple wiring diagrams")
    sp.add_argument("--wires", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="do not fold symmetric diagrams")
    io(sp, inp=False)
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("variant", help="derived constructions")
    sp.add_argument("kind", choices=["exact-cross", "mixed", "halfplanes", "transversals"])
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--points", default=None, help="points file for mixed (else family file points)")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    io(sp)
    sp.set_defaults(func=_cmd_variant)

    sp = sub.add_parser("render", help="draw a family as SVG")
    sp.add_argument("--cell", action="append", help="comma-separated line indices to highlight")
    sp.add_argument("--max-cell", action="store_true", help="highlight a maximum convex-position cell")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    io(sp)
    sp.set_defaults(func=_cmd_render)

    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3
    except (GeometryError, ValueError, KeyError, IndexError, json.JSONDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
