"""Line-oriented text formats: graphs, matrices, pattern families, cluster configs, weightings.

All formats ignore blank lines and ``#`` comments, and write rationals as
``p/q``.  Parse errors raise :class:`FormatError` with the offending line.

    graph       n <count>            then  <i> <j> <p>/<q>
    matrix      m <dim>              then  <dim> rows of <dim> rationals
    family      [r_max <k>]          then blocks  pattern r=<r> / <i> <j> <p>/<q>
    config      t <t> / p <p>        then  <i> <j> <p>/<q>   (omitted pair = unusable)
    weighting   [tail constant|turan]  then  <r> <p>/<q>
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator

from .blowup import ForbiddenFamily, make_alphabet
from .embedding import ClusterConfig
from .errors import DomainError, FormatError
from .lagrangian import sym_matrix
from .rational import fmt, parse_fraction
from .weighted_graph import CliqueWeighting, WeightedCliquePattern, WeightedGraph


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _rat(tok: str, lineno: int, source) -> Fraction:
    try:
        return parse_fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {tok!r}", lineno, source) from exc


def _int(tok: str, lineno: int, source, what: str) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise FormatError(f"bad {what} {tok!r}", lineno, source) from exc


def _header(it, key: str, source) -> int:
    for lineno, toks in it:
        if toks[0] != key or len(toks) != 2:
            raise FormatError(f"expected '{key} <count>' header", lineno, source)
        val = _int(toks[1], lineno, source, key)
        if val < 0:
            raise FormatError(f"{key} must be nonnegative", lineno, source)
        return val
    raise FormatError(f"missing '{key}' header", None, source)


def _edge_lines(it, limit: int, source, *, allow_one: bool = True):
    """Yield ``((i, j), value)`` from ``i j p/q`` lines, checked for range and duplicates."""
    seen = set()
    for lineno, toks in it:
        if len(toks) != 3:
            raise FormatError("expected '<i> <j> <p>/<q>'", lineno, source)
        i = _int(toks[0], lineno, source, "vertex")
        j = _int(toks[1], lineno, source, "vertex")
        if i == j:
            raise FormatError(f"self-loop at {i}", lineno, source)
        if not (0 <= i < limit and 0 <= j < limit):
            raise FormatError(f"vertex out of range 0..{limit - 1}", lineno, source)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"duplicate pair {key}", lineno, source)
        seen.add(key)
        w = _rat(toks[2], lineno, source)
        if not (0 <= w <= 1) or (w == 1 and not allow_one):
            bound = "[0, 1]" if allow_one else "[0, 1)"
            raise FormatError(f"value {fmt(w)} outside {bound}", lineno, source)
        yield lineno, key, w


# ---------------------------------------------------------------- graphs

def parse_graph(text: str, source=None) -> WeightedGraph:
    it = _lines(text)
    n = _header(it, "n", source)
    weights = {key: w for _, key, w in _edge_lines(it, n, source)}
    return WeightedGraph(n, weights)


def format_graph(g: WeightedGraph) -> str:
    out = [f"n {g.n}"]
    out += [f"{i} {j} {fmt(w)}" for (i, j), w in g.weights.items()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- matrices

def parse_matrix(text: str, source=None) -> list[list[Fraction]]:
    it = _lines(text)
    m = _header(it, "m", source)
    rows = []
    last = None
    for lineno, toks in it:
        if len(rows) == m:
            raise FormatError(f"more than {m} rows", lineno, source)
        if len(toks) != m:
            raise FormatError(f"row has {len(toks)} entries, expected {m}", lineno, source)
        rows.append([_rat(t, lineno, source) for t in toks])
        last = lineno
    if len(rows) != m:
        raise FormatError(f"expected {m} rows, got {len(rows)}", last, source)
    try:
        return sym_matrix(rows)
    except DomainError as exc:
        raise FormatError(str(exc), None, source) from exc


def format_matrix(a) -> str:
    out = [f"m {len(a)}"]
    out += [" ".join(fmt(v) for v in row) for row in a]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- families

def parse_family(text: str, source=None) -> ForbiddenFamily:
    r_max = None
    pats: list[WeightedCliquePattern] = []
    cur = None  # (r, dict, lineno)
    seen: set = set()

    def close():
        if cur is not None:
            try:
                pats.append(WeightedCliquePattern(cur[0], cur[1]))
            except DomainError as exc:
                raise FormatError(str(exc), cur[2], source) from exc

    for lineno, toks in _lines(text):
        if toks[0] == "r_max":
            if cur is not None or r_max is not None or len(toks) != 2:
                raise FormatError("'r_max <k>' must appear once, before the patterns", lineno, source)
            r_max = _int(toks[1], lineno, source, "r_max")
            continue
        if toks[0] == "pattern":
            if len(toks) != 2 or not toks[1].startswith("r="):
                raise FormatError("expected 'pattern r=<r>'", lineno, source)
            close()
            r = _int(toks[1][2:], lineno, source, "pattern order")
            if r < 1:
                raise FormatError("pattern order must be >= 1", lineno, source)
            cur = (r, {}, lineno)
            seen = set()
            continue
        if cur is None:
            raise FormatError("threshold line before any 'pattern' header", lineno, source)
        for ln, key, a in _edge_lines(iter([(lineno, toks)]), cur[0], source):
            if key in seen:
                raise FormatError(f"duplicate pair {key}", ln, source)
            seen.add(key)
            cur[1][key] = a
    close()
    if not pats:
        raise FormatError("family has no patterns", None, source)
    try:
        return ForbiddenFamily(tuple(pats), r_max)
    except DomainError as exc:
        raise FormatError(str(exc), None, source) from exc


def format_family(family: ForbiddenFamily, explicit_r_max: bool = True) -> str:
    out = [f"r_max {family.r_max}"] if explicit_r_max else []
    for pat in family.patterns:
        out.append(f"pattern r={pat.r}")
        out += [f"{i} {j} {fmt(a)}" for (i, j), a in pat.f.items() if a != 0]
    return "\n".join(out) + "\n"


def parse_alphabet(text: str) -> tuple[Fraction, ...]:
    toks = [t for t in text.split(",") if t.strip()]
    try:
        return make_alphabet(parse_fraction(t) for t in toks)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad alphabet {text!r}: {exc}", None, "--alphabet") from exc


# ---------------------------------------------------------------- cluster configurations

def parse_config(text: str, source=None) -> ClusterConfig:
    it = _lines(text)
    t = _header(it, "t", source)
    if t < 1:
        raise FormatError("need at least one cluster", None, source)
    p = _header(it, "p", source)
    if p < 1:
        raise FormatError("p must be >= 1", None, source)
    th = {key: a for _, key, a in _edge_lines(it, t, source, allow_one=False)}
    return ClusterConfig(t, th, p)


def format_config(config: ClusterConfig) -> str:
    out = [f"t {config.t}", f"p {config.p}"]
    out += [f"{i} {j} {fmt(a)}" for (i, j), a in config.thresholds.items()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- clique weightings

def parse_weighting(text: str, source=None) -> CliqueWeighting:
    tail = None
    values: dict = {}
    for lineno, toks in _lines(text):
        if toks[0] == "tail":
            if tail is not None or len(toks) != 2 or toks[1] not in ("constant", "turan"):
                raise FormatError("expected one 'tail constant|turan' line", lineno, source)
            tail = toks[1]
            continue
        if len(toks) != 2:
            raise FormatError("expected '<r> <p>/<q>'", lineno, source)
        r = _int(toks[0], lineno, source, "clique order")
        if r < 2:
            raise FormatError("clique order must be >= 2", lineno, source)
        if r in values:
            raise FormatError(f"duplicate clique order {r}", lineno, source)
        w = _rat(toks[1], lineno, source)
        if not 0 <= w <= 1:
            raise FormatError(f"weight {fmt(w)} outside [0, 1]", lineno, source)
        values[r] = w
    try:
        return CliqueWeighting(values, tail=tail or "constant")
    except DomainError as exc:
        raise FormatError(str(exc), None, source) from exc


def format_weighting(cw: CliqueWeighting) -> str:
    out = [f"tail {cw.tail}"]
    out += [f"{r} {fmt(w)}" for r, w in cw.values.items()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- files

def read_file(path, parser: Callable):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", None, str(p)) from exc
    return parser(text, source=str(p))
