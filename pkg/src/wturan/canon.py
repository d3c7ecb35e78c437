"""Canonical forms of edge-coloured complete graphs.

A colouring of K_n is a symmetric integer matrix (diagonal ignored).  Its code
under a vertex order is the sequence of colours in colex pair order
(0,1), (0,2), (1,2), (0,3), ...; the canonical code is the lexicographic
minimum over all n! orders.  Colex order makes the code of the first m
vertices a prefix of the whole code, which is what orderly generation needs:
deleting the last vertex of a canonical labelling leaves a canonical labelling.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

Code = tuple[int, ...]


@lru_cache(maxsize=None)
def colex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for j in range(1, n) for i in range(j))


def code_of(c: Sequence[Sequence[int]], order: Sequence[int] | None = None) -> Code:
    n = len(c)
    if order is None:
        order = range(n)
    o = list(order)
    return tuple(c[o[i]][o[j]] for i, j in colex_pairs(n))


def canonical(c: Sequence[Sequence[int]], fixed: int = 0) -> tuple[Code, list[tuple[int, ...]]]:
    """Minimal code and every vertex order attaining it.

    The first ``fixed`` vertices stay in place (labelled vertices of a flag);
    only the remaining ones are permuted.
    """
    n = len(c)
    if n == 0:
        return (), [()]
    partial = [tuple(range(fixed))] if fixed else [(v,) for v in range(n)]
    start = fixed if fixed else 1
    code: list[int] = []
    if fixed:
        for j in range(1, fixed):
            code.extend(c[i][j] for i in range(j))
    for d in range(start, n):
        best = None
        nxt = []
        for perm in partial:
            used = set(perm)
            for v in range(n):
                if v in used:
                    continue
                col = tuple(c[perm[i]][v] for i in range(d))
                if best is None or col < best:
                    best = col
                    nxt = [perm + (v,)]
                elif col == best:
                    nxt.append(perm + (v,))
        code.extend(best)
        partial = nxt
    return tuple(code), partial


def canonical_code(c: Sequence[Sequence[int]], fixed: int = 0) -> Code:
    return canonical(c, fixed)[0]


def is_canonical(c: Sequence[Sequence[int]]) -> bool:
    """True iff the identity order already gives the minimal code.

    Bails out as soon as some partial order beats the identity prefix.
    """
    n = len(c)
    ident = code_of(c)
    partial = [(v,) for v in range(n)]
    pos = 0
    for d in range(1, n):
        target = ident[pos:pos + d]
        pos += d
        nxt = []
        for perm in partial:
            used = set(perm)
            for v in range(n):
                if v in used:
                    continue
                col = tuple(c[perm[i]][v] for i in range(d))
                if col < target:
                    return False
                if col == target:
                    nxt.append(perm + (v,))
        partial = nxt
    return True


def matrix_from_code(code: Code, n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for (i, j), col in zip(colex_pairs(n), code):
        c[i][j] = c[j][i] = col
    return c


def order_from_code_length(length: int) -> int:
    n = 1
    while n * (n - 1) // 2 < length:
        n += 1
    if n * (n - 1) // 2 != length:
        raise ValueError(f"{length} is not a triangular number")
    return n


@lru_cache(maxsize=None)
def _pair_perms(n: int) -> np.ndarray:
    """Row per vertex order: where each colex position reads from in the original code."""
    pos = {pr: k for k, pr in enumerate(colex_pairs(n))}
    if not pos:
        return np.zeros((1, 0), dtype=np.intp)
    return np.array([[pos[(min(o[i], o[j]), max(o[i], o[j]))] for i, j in colex_pairs(n)]
                     for o in permutations(range(n))], dtype=np.intp).reshape(-1, len(pos))


def canonical_keys(codes: np.ndarray, n: int, base: int) -> np.ndarray:
    """Canonical codes of many colourings at once, as base-``base`` integers.

    ``codes`` holds one colex code per row with colours below ``base``.  Codes
    have fixed length, so the integer order agrees with the lexicographic one
    and the minimum over all vertex orders is the canonical code.
    """
    if base ** (n * (n - 1) // 2) >= 2 ** 63:
        raise ValueError("codes too long for 64-bit keys")
    weights = base ** np.arange(n * (n - 1) // 2 - 1, -1, -1, dtype=np.int64)
    best = None
    for idx in _pair_perms(n):
        key = codes[:, idx] @ weights
        best = key if best is None else np.minimum(best, key)
    return best if best is not None else np.zeros(len(codes), dtype=np.int64)


def code_from_key(key: int, n: int, base: int) -> Code:
    digits = []
    for _ in range(n * (n - 1) // 2):
        key, d = divmod(key, base)
        digits.append(d)
    return tuple(reversed(digits))
