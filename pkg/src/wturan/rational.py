"""Exact rational helpers: parsing, formatting and small linear algebra."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Rational = Fraction


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: every quantity here is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    # Fraction accepts '1/3', '2', '0.25' but also '1e3' and whitespace inside; keep it strict
    if any(c in text for c in "eE_ ") or text.count("/") > 1:
        raise ValueError(f"malformed rational {text!r}")
    return Fraction(text)


def fmt(q: Fraction) -> str:
    """``p/q`` without a denominator of 1."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_approx(q: Fraction, places: int = 6) -> str:
    """``p/q (≈ 0.526316)`` as printed by the CLI."""
    return f"{fmt(q)} (≈ {float(q):.{places}f})"


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a square system exactly by Gauss-Jordan elimination.

    Returns the solution list, or None if the matrix is singular.
    """
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        if inv != 1:
            for j in range(col, n + 1):
                prow[j] *= inv
        for r in range(n):
            if r == col:
                continue
            factor = aug[r][col]
            if factor:
                row = aug[r]
                for j in range(col, n + 1):
                    if prow[j]:
                        row[j] -= factor * prow[j]
    return [aug[i][n] for i in range(n)]


_BAREISS_SCALE_BITS = 512


def ldl_psd(matrix: Sequence[Sequence[Fraction]]):
    """Exact PSD test by LDL^T with symmetric (largest-diagonal) pivoting.

    Returns ``(True, None)`` for PSD input, otherwise ``(False, info)`` where
    ``info`` is a dict naming the offending pivot: either a negative pivot
    value, or a nonzero entry left in a row whose pivot vanished.

    The matrix is scaled to integers and eliminated fraction-free (Bareiss):
    after step k every working entry equals the Schur-complement entry times
    the previous (positive) pivot, so signs are read off directly.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    scale = 1
    for row in rows:
        for x in row:
            scale = lcm(scale, x.denominator)
            if scale.bit_length() > _BAREISS_SCALE_BITS:
                return _ldl_psd_fractions(rows)
    a = [[x.numerator * (scale // x.denominator) for x in row] for row in rows]
    order = list(range(n))  # order[k] = original index of the working row k
    prev = 1
    for k in range(n):
        p = max(range(k, n), key=lambda i: a[i][i])
        if p != k:
            a[k], a[p] = a[p], a[k]
            for row in a:
                row[k], row[p] = row[p], row[k]
            order[k], order[p] = order[p], order[k]
        d = a[k][k]
        if d < 0:
            return False, {"step": k, "index": order[k], "pivot": Fraction(d, prev * scale)}
        if d == 0:
            # all remaining diagonals are <= 0 here, hence 0; PSD forces the rest to vanish
            for i in range(k, n):
                for j in range(k, n):
                    if a[i][j] != 0:
                        return False, {"step": k, "index": order[i], "pivot": Fraction(0),
                                       "entry": (order[i], order[j], Fraction(a[i][j], prev * scale))}
            return True, None
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            lik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (d * ri[j] - lik * rk[j]) // prev
        prev = d
    return True, None


def _ldl_psd_fractions(a: list):
    """Same test in Fraction arithmetic, for inputs without a small common denominator."""
    a = [list(row) for row in a]
    n = len(a)
    order = list(range(n))
    for k in range(n):
        p = max(range(k, n), key=lambda i: a[i][i])
        if p != k:
            a[k], a[p] = a[p], a[k]
            for row in a:
                row[k], row[p] = row[p], row[k]
            order[k], order[p] = order[p], order[k]
        d = a[k][k]
        if d < 0:
            return False, {"step": k, "index": order[k], "pivot": d}
        if d == 0:
            for i in range(k, n):
                for j in range(k, n):
                    if a[i][j] != 0:
                        return False, {"step": k, "index": order[i], "pivot": Fraction(0),
                                       "entry": (order[i], order[j], a[i][j])}
            return True, None
        rk = a[k]
        for i in range(k + 1, n):
            lik = a[i][k] / d
            if lik:
                ri = a[i]
                for j in range(k + 1, n):
                    if rk[j]:
                        ri[j] -= lik * rk[j]
    return True, None
