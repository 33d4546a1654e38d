"""Plain-text point-set files.

    p=5 e=1
    0,0
    1,2

For e > 1 each coordinate is its coefficient list, constant term first,
joined by ``;`` (``1;2,0;1`` is the point (1 + 2t, t)).  Whitespace is
ignored everywhere; blank lines and lines starting with ``#`` are skipped.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .field import make_field
from .plane import PointSet

_HEADER = re.compile(r"^p=(\d+)e=(\d+)$")


def parse_points(text: str) -> PointSet:
    lines = [re.sub(r"\s+", "", ln) for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty point file")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParseError(f"bad header {lines[0]!r}; expected 'p=<p> e=<e>'")
    ctx = make_field(int(m.group(1)), int(m.group(2)))
    pts = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise ParseError(f"bad point line {ln!r}")
        try:
            if ctx.e == 1:
                coords = [int(c) for c in parts]
                if not all(0 <= c < ctx.p for c in coords):
                    raise ParseError(f"coordinate out of range in {ln!r}")
            else:
                coords = []
                for c in parts:
                    cs = [int(t) for t in c.split(";")]
                    if len(cs) != ctx.e or not all(0 <= t < ctx.p for t in cs):
                        raise ParseError(f"bad coefficient list {c!r}")
                    coords.append(ctx.from_coeffs(cs))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        pts.append(tuple(coords))
    return PointSet(ctx, pts)


def format_points(E: PointSet) -> str:
    ctx = E.ctx

    def coord(a):
        if ctx.e == 1:
            return str(a)
        return ";".join(str(c) for c in ctx.coeffs(a))

    out = [f"p={ctx.p} e={ctx.e}"]
    out += [f"{coord(x)},{coord(y)}" for x, y in E]
    return "\n".join(out) + "\n"


def read_points(path) -> PointSet:
    with open(path) as fh:
        return parse_points(fh.read())


def write_points(E: PointSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_points(E))
