"""Sparse SDPA export of a flag SDP, and a parser for the same files.

Dual form  min c^T x  s.t.  sum_i F_i x_i - F_0 >= 0.  Variable 1 is lambda,
then one variable per upper-triangular entry of each Q block.  One PSD block
per type and a final diagonal block holding, for each admissible graph G,

    L_G * (lambda - obj(G) - sum <Q, M(G)>) >= 0,

where L_G is the least common denominator of that row, so every number in
the file is an integer and the export is bit-exact.  Graph and block
metadata ride along in ``*`` comment lines, which SDPA readers skip.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path

from ..errors import FormatError
from .sdp import SDPInstance


@dataclass
class SDPAData:
    m: int
    block_struct: list  # PSD dims, then -n for the diagonal block
    c: list  # Fraction per variable
    entries: dict = field(default_factory=dict)  # (mat, block, i, j) -> Fraction, 1-based
    graphs: list = field(default_factory=list)  # labels, one per diagonal row
    types: list = field(default_factory=list)  # type labels, one per PSD block
    row_scale: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, SDPAData):
            return NotImplemented
        return (self.m, self.block_struct, self.c, self.entries, self.graphs, self.types,
                self.row_scale) == (other.m, other.block_struct, other.c, other.entries,
                                    other.graphs, other.types, other.row_scale)


def variable_map(instance: SDPInstance) -> dict:
    """(block, i, j) -> 1-based variable number; lambda is variable 1."""
    out = {}
    nxt = 2
    for b, block in enumerate(instance.blocks):
        for i in range(block.dim):
            for j in range(i, block.dim):
                out[(b, i, j)] = nxt
                nxt += 1
    return out


def to_sdpa(instance: SDPInstance) -> SDPAData:
    vmap = variable_map(instance)
    nb = len(instance.blocks)
    lp = nb + 1
    ng = len(instance.graphs)
    entries: dict = {}
    scales = []
    for g in range(ng):
        coeffs = {}
        for b in range(nb):
            for (i, j), v in instance.densities[g][b].items():
                coeffs[vmap[(b, i, j)]] = v if i == j else 2 * v
        obj = instance.objective_values[g]
        den = lcm(obj.denominator, *(v.denominator for v in coeffs.values()))
        scales.append(den)
        row = g + 1
        entries[(1, lp, row, row)] = Fraction(den)
        if obj:
            entries[(0, lp, row, row)] = obj * den
        for var, v in coeffs.items():
            entries[(var, lp, row, row)] = -v * den
    for (b, i, j), var in vmap.items():
        entries[(var, b + 1, i + 1, j + 1)] = Fraction(1)
    m = 1 + len(vmap)
    c = [Fraction(1)] + [Fraction(0)] * (m - 1)
    struct = [blk.dim for blk in instance.blocks] + [-ng]
    return SDPAData(m, struct, c, dict(sorted(entries.items())),
                    [str(gr) for gr in instance.graphs],
                    [blk.type_label() for blk in instance.blocks], scales)


def _num(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    # exact decimal if the denominator is 2^a 5^b, else p/q (not expected from to_sdpa)
    d = q.denominator
    a = b = 0
    while d % 2 == 0:
        d //= 2
        a += 1
    while d % 5 == 0:
        d //= 5
        b += 1
    if d == 1:
        places = max(a, b)
        scaled = q * 10 ** places
        s = str(abs(scaled.numerator)).rjust(places + 1, "0")
        sign = "-" if q < 0 else ""
        return f"{sign}{s[:-places]}.{s[-places:]}".rstrip("0")
    return f"{q.numerator}/{q.denominator}"


def format_sdpa(data: SDPAData, title: str = "") -> str:
    lines = []
    if title:
        lines.append(f'"{title}"')
    for k, lbl in enumerate(data.types, start=1):
        lines.append(f"* type {k} {lbl}")
    for k, (lbl, sc) in enumerate(zip(data.graphs, data.row_scale), start=1):
        lines.append(f"* graph {k} {lbl} scale {sc}")
    lines.append(str(data.m))
    lines.append(str(len(data.block_struct)))
    lines.append(" ".join(str(v) for v in data.block_struct))
    lines.append(" ".join(_num(v) for v in data.c))
    for (mat, blk, i, j), v in sorted(data.entries.items()):
        lines.append(f"{mat} {blk} {i} {j} {_num(v)}")
    return "\n".join(lines) + "\n"


def export_sdpa(instance: SDPInstance, destination) -> SDPAData:
    data = to_sdpa(instance)
    text = format_sdpa(data, title=instance.problem.name or "flag sdp")
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write SDPA file {path}: {exc}") from exc
    return data


def _parse_num(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad number {tok!r}", lineno) from exc


def parse_sdpa(text: str, source=None) -> SDPAData:
    types, graphs, scales = [], [], []
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('"'):
            continue
        if line.startswith("*"):
            parts = line[1:].split()
            if len(parts) >= 3 and parts[0] == "type":
                types.append(parts[2])
            elif len(parts) >= 5 and parts[0] == "graph" and parts[3] == "scale":
                graphs.append(parts[2])
                scales.append(int(parts[4]))
            continue
        body.append((lineno, line))
    if len(body) < 4:
        raise FormatError("truncated SDPA file", None, source)
    for ch in "{}(),":
        body = [(n, ln.replace(ch, " ")) for n, ln in body]
    try:
        m = int(body[0][1].split()[0])
        nblocks = int(body[1][1].split()[0])
        struct = [int(v) for v in body[2][1].split()]
    except (ValueError, IndexError) as exc:
        raise FormatError("bad SDPA header", body[0][0], source) from exc
    if len(struct) != nblocks:
        raise FormatError(f"expected {nblocks} block sizes", body[2][0], source)
    c = [_parse_num(tok, body[3][0]) for tok in body[3][1].split()]
    if len(c) != m:
        raise FormatError(f"expected {m} objective coefficients, got {len(c)}", body[3][0], source)
    entries = {}
    for lineno, line in body[4:]:
        toks = line.split()
        if len(toks) != 5:
            raise FormatError("expected 'mat block i j value'", lineno, source)
        try:
            key = tuple(int(t) for t in toks[:4])
        except ValueError as exc:
            raise FormatError("non-integer index", lineno, source) from exc
        mat, blk, i, j = key
        if not 0 <= mat <= m or not 1 <= blk <= nblocks:
            raise FormatError(f"index out of range: {line}", lineno, source)
        dim = abs(struct[blk - 1])
        if not (1 <= i <= dim and 1 <= j <= dim) or i > j:
            raise FormatError(f"entry position out of range: {line}", lineno, source)
        if struct[blk - 1] < 0 and i != j:
            raise FormatError("off-diagonal entry in a diagonal block", lineno, source)
        if key in entries:
            raise FormatError(f"duplicate entry {key}", lineno, source)
        entries[key] = _parse_num(toks[4], lineno)
    return SDPAData(m, struct, c, dict(sorted(entries.items())), graphs, types, scales)


def read_sdpa(path) -> SDPAData:
    return parse_sdpa(Path(path).read_text(), source=str(path))


def constraint_rows(data: SDPAData) -> list:
    """Undo row scaling: per graph ``(obj, {var: coefficient})`` as in the instance."""
    lp = len(data.block_struct)
    ng = -data.block_struct[-1]
    rows = [[Fraction(0), {}] for _ in range(ng)]
    scale = [Fraction(0)] * ng
    for (mat, blk, i, _), v in data.entries.items():
        if blk == lp and mat == 1:
            scale[i - 1] = v
    for (mat, blk, i, _), v in data.entries.items():
        if blk != lp or mat == 1:
            continue
        if mat == 0:
            rows[i - 1][0] = v / scale[i - 1]
        else:
            rows[i - 1][1][mat] = -v / scale[i - 1]
    return [(obj, coeffs) for obj, coeffs in rows]
