"""Rational certificates for flag SDP bounds: checking, rounding, file format."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import DomainError, FormatError
from ..rational import fmt, ldl_psd
from .sdp import DensityProblem, SDPInstance, build_sdp


@dataclass
class Certificate:
    bound: Fraction
    blocks: list  # full symmetric Fraction matrices, one per type block

    def __eq__(self, other):
        if not isinstance(other, Certificate):
            return NotImplemented
        return self.bound == other.bound and self.blocks == other.blocks


@dataclass
class Verdict:
    accepted: bool
    bound: Fraction | None = None
    reason: str = ""
    graph: object = None  # ColoredGraph violating its constraint
    block: int | None = None  # block failing the PSD test
    slack: Fraction | None = None

    def __bool__(self):
        return self.accepted


def _check_shapes(instance: SDPInstance, blocks) -> None:
    if len(blocks) != len(instance.blocks):
        raise DomainError(f"certificate has {len(blocks)} blocks, instance has {len(instance.blocks)}")
    for b, (q, blk) in enumerate(zip(blocks, instance.blocks)):
        if len(q) != blk.dim or any(len(row) != blk.dim for row in q):
            raise DomainError(f"block {b} must be {blk.dim}x{blk.dim}")


def verify_certificate(target, cert: Certificate) -> Verdict:
    """Exact check: every block PSD, and lambda dominates every graph constraint.

    ``target`` is an :class:`SDPInstance` or a :class:`DensityProblem` (built
    on the fly).  Shape mismatches raise ``DomainError``.
    """
    instance = build_sdp(target) if isinstance(target, DensityProblem) else target
    _check_shapes(instance, cert.blocks)
    for b, q in enumerate(cert.blocks):
        try:
            ok, info = ldl_psd(q)
        except ValueError as exc:
            return Verdict(False, reason=f"block {b}: {exc}", block=b)
        if not ok:
            where = info.get("entry")
            detail = (f"zero pivot with nonzero entry at {where[:2]}" if where
                      else f"negative pivot {fmt(info['pivot'])} at index {info['index']}")
            return Verdict(False, reason=f"block {b} is not PSD: {detail}", block=b)
    lam = Fraction(cert.bound)
    for g in range(len(instance.graphs)):
        slack = lam - instance.constraint_value(g, cert.blocks)
        if slack < 0:
            gr = instance.graphs[g]
            return Verdict(False, reason=f"graph {gr} violates the bound by {fmt(-slack)}",
                           graph=gr, slack=slack)
    return Verdict(True, bound=lam, reason="accepted")


def _to_fraction(v, limit: int) -> Fraction:
    if isinstance(v, Fraction):
        return v.limit_denominator(limit)
    return Fraction(float(v)).limit_denominator(limit)


def round_solution(instance: SDPInstance, qs: Sequence, denominator_limit: int = 10 ** 6) -> Certificate:
    """Rationalise numeric blocks into a self-consistent certificate.

    Exact input whose denominators are within the limit is kept as is.
    Anything else is snapped to the grid (1/D)Z with D the limit; a shared
    denominator keeps the exact PSD test and the constraint sums cheap.  Each
    block is then made PSD by the smallest grid diagonal shift found, and
    lambda is recomputed as the exact maximum of the graph constraints.
    """
    if denominator_limit < 1:
        raise DomainError("denominator limit must be positive")
    _check_shapes(instance, qs)
    big_d = int(denominator_limit)
    blocks = []
    for q in qs:
        dim = len(q)
        exact = all(isinstance(v, (Fraction, int)) for row in q for v in row)
        if exact and all(Fraction(v).denominator <= big_d for row in q for v in row):
            r = [[(Fraction(q[i][j]) + Fraction(q[j][i])) / 2 for j in range(dim)] for i in range(dim)]
            if any(v.denominator > big_d for row in r for v in row):
                r = _snap(r, big_d)
        else:
            r = _snap(q, big_d)
        blocks.append(_repair_psd(r, big_d))
    if instance.graphs:
        lam = max(instance.constraint_value(g, blocks) for g in range(len(instance.graphs)))
    else:
        lam = Fraction(0)
    return Certificate(lam, blocks)


def _snap(q, big_d: int) -> list:
    dim = len(q)
    qf = np.array([[float(v) for v in row] for row in q], dtype=float).reshape(dim, dim)
    qf = (qf + qf.T) / 2
    ints = np.rint(qf * big_d).astype(object)
    return [[Fraction(int(ints[i][j]), big_d) for j in range(dim)] for i in range(dim)]


def _repair_psd(r: list, big_d: int) -> list:
    dim = len(r)
    if dim == 0 or ldl_psd(r)[0]:
        return r
    mu = float(np.linalg.eigvalsh(np.array([[float(v) for v in row] for row in r])).min())
    steps = max(1, int(np.ceil(max(-mu, 0.0) * big_d)))
    while True:
        shift = Fraction(steps, big_d)
        cand = [[r[i][j] + (shift if i == j else 0) for j in range(dim)] for i in range(dim)]
        if ldl_psd(cand)[0]:
            return cand
        steps *= 2


def zero_blocks(instance: SDPInstance) -> list:
    return [[[Fraction(0)] * b.dim for _ in range(b.dim)] for b in instance.blocks]


def perturb(cert: Certificate, delta: Fraction) -> Certificate:
    return Certificate(cert.bound - delta, [[list(r) for r in q] for q in cert.blocks])


# ---------------------------------------------------------------- file format

def format_certificate(cert: Certificate) -> str:
    lines = [f"lambda {fmt(cert.bound)}"]
    for b, q in enumerate(cert.blocks):
        lines.append(f"block {b} {len(q)}")
        for row in q:
            lines.append(" ".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, source=None, numeric: bool = False) -> Certificate:
    """Certificate file: ``lambda p/q``, then ``block <id> <dim>`` with row-major rows.

    With ``numeric=True`` the lambda line is optional and entries may be
    decimals (parsed exactly); this is the numeric solution format.
    """
    lam = None
    blocks: dict = {}
    cur = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "lambda":
            if lam is not None or len(toks) != 2:
                raise FormatError("duplicate or malformed lambda line", lineno, source)
            lam = _value(toks[1], lineno, source, numeric)
            continue
        if toks[0] == "block":
            if len(toks) != 3:
                raise FormatError("expected 'block <id> <dim>'", lineno, source)
            try:
                bid, dim = int(toks[1]), int(toks[2])
            except ValueError as exc:
                raise FormatError("non-integer block header", lineno, source) from exc
            if bid in blocks:
                raise FormatError(f"duplicate block {bid}", lineno, source)
            if dim < 0:
                raise FormatError("negative block dimension", lineno, source)
            cur = (bid, dim)
            blocks[bid] = []
            continue
        if cur is None:
            raise FormatError("matrix row before any block header", lineno, source)
        bid, dim = cur
        if len(blocks[bid]) >= dim:
            raise FormatError(f"too many rows in block {bid}", lineno, source)
        row = [_value(tok, lineno, source, numeric) for tok in toks]
        if len(row) != dim:
            raise FormatError(f"row has {len(row)} entries, block {bid} has dimension {dim}", lineno,
                              source)
        blocks[bid].append(row)
    if lam is None and not numeric:
        raise FormatError("missing lambda line", None, source)
    ids = sorted(blocks)
    if ids != list(range(len(ids))):
        raise FormatError("block ids must be 0..B-1", None, source)
    out = []
    for bid in ids:
        q = blocks[bid]
        dim = len(q[0]) if q else 0
        if len(q) != dim and not (dim == 0 and not q):
            raise FormatError(f"block {bid} is incomplete", None, source)
        out.append(q)
    return Certificate(lam if lam is not None else Fraction(0), out)


def _value(tok: str, lineno, source, numeric: bool) -> Fraction:
    if not numeric and any(ch in tok for ch in ".eE"):
        raise FormatError(f"certificate entries must be exact rationals, got {tok!r}", lineno, source)
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad number {tok!r}", lineno, source) from exc


def read_certificate(path, numeric: bool = False) -> Certificate:
    return parse_certificate(Path(path).read_text(), source=str(path), numeric=numeric)


def write_certificate(cert: Certificate, path) -> None:
    Path(path).write_text(format_certificate(cert))
