"""Exact-rational interchange files and verification certificates.

Every coefficient travels as a ``"p/q"`` string, so a file round-trips
bit-for-bit and two runs that agree mathematically agree byte-wise.  The
SVG renderer is the only place approximation is allowed; nothing here ever
touches floats.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import Line, LineFamily, PointR, check_general_position

FORMAT_VERSION = 1


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(str(s))


@dataclass(frozen=True)
class FamilyFile:
    """A line family plus the optional extras the file format carries."""

    family: LineFamily
    points: tuple[PointR, ...] = ()


def family_to_dict(f: Union[LineFamily, FamilyFile]) -> dict:
    points: Sequence[PointR] = ()
    if isinstance(f, FamilyFile):
        f, points = f.family, f.points
    doc: dict = {
        "version": FORMAT_VERSION,
        "lines": [[format_rational(l.m), format_rational(l.c)] for l in f.lines],
    }
    if f.colors:
        doc["colors"] = list(f.colors)
    if points:
        doc["points"] = [[format_rational(p.x), format_rational(p.y)] for p in points]
    return doc


def dump_family(f: Union[LineFamily, FamilyFile]) -> str:
    return json.dumps(family_to_dict(f), sort_keys=True, indent=1) + "\n"


def family_from_dict(doc: dict) -> FamilyFile:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported family file version {doc.get('version')!r}")
    lines = [Line(parse_rational(m), parse_rational(c)) for m, c in doc["lines"]]
    colors = doc.get("colors")
    fam = check_general_position(lines, colors)
    points = tuple(
        PointR(parse_rational(x), parse_rational(y)) for x, y in doc.get("points", ())
    )
    return FamilyFile(fam, points)


def load_family(text: str) -> FamilyFile:
    return family_from_dict(json.loads(text))


def family_hash(f: Union[LineFamily, FamilyFile]) -> str:
    """Content hash of the canonical serialization."""
    return hashlib.sha256(dump_family(f).encode()).hexdigest()


@dataclass
class Certificate:
    """Re-checkable record of a verification run.

    The verdict and witness are schedule-independent; only `seconds`
    varies between runs.
    """

    command: str
    input_hash: str
    verdict: str
    witness: Optional[tuple] = None
    exhaustive: bool = False
    counts: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> str:
        doc = asdict(self)
        if doc["witness"] is not None:
            doc["witness"] = list(doc["witness"])
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
