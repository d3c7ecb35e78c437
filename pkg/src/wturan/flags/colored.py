"""Edge-coloured complete graphs in canonical form, and their enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from ..canon import canonical_code, code_of, colex_pairs, is_canonical, matrix_from_code
from ..errors import CapacityError, DomainError

MAX_ORDER = 5
MAX_COLORS = 8


@dataclass(frozen=True, order=True)
class ColoredGraph:
    """Colouring of K_n (colours are positive integers) stored by canonical code."""

    n: int
    code: tuple[int, ...]

    @classmethod
    def from_matrix(cls, c: Sequence[Sequence[int]]) -> "ColoredGraph":
        return cls(len(c), canonical_code(c))

    @classmethod
    def from_pairs(cls, n: int, colors: Mapping[tuple[int, int], int]) -> "ColoredGraph":
        c = [[0] * n for _ in range(n)]
        for (i, j), col in colors.items():
            c[i][j] = c[j][i] = col
        for i, j in colex_pairs(n):
            if c[i][j] == 0:
                raise DomainError(f"pair {(i, j)} has no colour")
        return cls.from_matrix(c)

    @classmethod
    def monochromatic(cls, n: int, color: int) -> "ColoredGraph":
        return cls(n, (color,) * (n * (n - 1) // 2))

    def matrix(self) -> list[list[int]]:
        return matrix_from_code(self.code, self.n)

    def color_counts(self, k: int) -> list[int]:
        counts = [0] * (k + 1)
        for col in self.code:
            counts[col] += 1
        return counts

    def label(self) -> str:
        """Compact text form ``n:c01c02c12...`` used in files and messages."""
        return f"{self.n}:" + "".join(str(c) for c in self.code)

    @classmethod
    def parse(cls, text: str) -> "ColoredGraph":
        n_txt, _, codes = text.partition(":")
        try:
            n = int(n_txt)
            code = tuple(int(ch) for ch in codes)
        except ValueError as exc:
            raise DomainError(f"malformed coloured graph {text!r}") from exc
        if len(code) != n * (n - 1) // 2:
            raise DomainError(f"coloured graph {text!r} has the wrong number of pairs")
        return cls.from_matrix(matrix_from_code(code, n))

    def __str__(self):
        return self.label()


class ForbiddenIndex:
    """Lookup of forbidden patterns by order; containment means an induced copy.

    Patterns are colourings of complete graphs, so a sub-assignment via an
    injection is exactly an isomorphic induced sub-colouring.
    """

    def __init__(self, forbidden: Iterable[ColoredGraph]):
        self.by_order: dict[int, set] = {}
        for g in forbidden:
            self.by_order.setdefault(g.n, set()).add(g.code)

    def sizes(self):
        return sorted(self.by_order)

    def hits(self, c: Sequence[Sequence[int]], must_include: int | None = None) -> bool:
        n = len(c)
        for s, codes in self.by_order.items():
            if s > n:
                continue
            if must_include is None:
                subsets = combinations(range(n), s)
            else:
                others = [v for v in range(n) if v != must_include]
                subsets = (tuple(sorted(sub + (must_include,)))
                           for sub in combinations(others, s - 1))
            for sub in subsets:
                sc = [[c[i][j] for j in sub] for i in sub]
                if canonical_code(sc) in codes:
                    return True
        return False

    def admits(self, g: ColoredGraph) -> bool:
        return not self.hits(g.matrix())


def enumerate_colored(n: int, k: int, forbidden: Iterable[ColoredGraph] = ()) -> list[ColoredGraph]:
    """All k-colourings of K_n up to isomorphism containing no forbidden pattern.

    Orderly generation: grow canonical labellings one vertex at a time and
    keep only extensions that are again canonical.
    """
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    if n > MAX_ORDER or k > MAX_COLORS:
        raise CapacityError(f"enumeration limited to n <= {MAX_ORDER}, k <= {MAX_COLORS}")
    index = forbidden if isinstance(forbidden, ForbiddenIndex) else ForbiddenIndex(forbidden)
    level = [[[0]]]
    if index.hits([[0]]):
        return []
    for v in range(1, n):
        nxt = []
        for c in level:
            for row in product(range(1, k + 1), repeat=v):
                m = [r + [row[i]] for i, r in enumerate(c)]
                m.append(list(row) + [0])
                if not is_canonical(m):
                    continue
                if index.hits(m, must_include=v):
                    continue
                nxt.append(m)
        level = nxt
    return sorted(ColoredGraph(n, code_of(m)) for m in level)


def enumerate_colored_bruteforce(n: int, k: int, forbidden: Iterable[ColoredGraph] = ()) -> list[ColoredGraph]:
    """Reference enumeration: every colouring, deduplicated by full permutation minimum.

    Forbidden containment does not use canonical forms: every relabelling of
    every pattern is listed, and each vertex subset of the colouring is
    compared in its natural order against that list.
    """
    from itertools import permutations

    labelled: dict[int, set] = {}
    for f in forbidden:
        if f.n > n:
            continue
        pm = f.matrix()
        fp = colex_pairs(f.n)
        labelled.setdefault(f.n, set()).update(
            tuple(pm[o[i]][o[j]] for i, j in fp) for o in permutations(range(f.n)))
    pairs = colex_pairs(n)
    perms = list(permutations(range(n)))
    seen = set()
    for combo in product(range(1, k + 1), repeat=len(pairs)):
        c = matrix_from_code(combo, n)
        best = min(tuple(c[o[i]][o[j]] for i, j in pairs) for o in perms)
        if best in seen:
            continue
        bad = any(tuple(c[sub[i]][sub[j]] for i, j in colex_pairs(s)) in codes
                  for s, codes in labelled.items() for sub in combinations(range(n), s))
        if not bad:
            seen.add(best)
    return sorted(ColoredGraph(n, code) for code in seen)


def color_densities(g: ColoredGraph, k: int) -> list[Fraction]:
    total = len(g.code)
    counts = g.color_counts(k)
    return [Fraction(counts[c], total) for c in range(1, k + 1)]


def obj_value(g: ColoredGraph, u: Sequence[Fraction]) -> Fraction:
    """Sum over colours of ``u[c-1]`` times the density of colour c."""
    total = len(g.code)
    if total == 0:
        return Fraction(0)
    acc = Fraction(0)
    for col in g.code:
        if not 1 <= col <= len(u):
            raise DomainError(f"colour {col} outside 1..{len(u)}")
        acc += u[col - 1]
    return acc / total
