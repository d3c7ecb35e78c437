"""Weighted graphs, clique weightings and weighted-clique patterns.

Weights are exact ``Fraction`` values in [0, 1]; an absent pair has weight 0
and is not an edge.  The scaled total weight of a graph on ``n`` vertices is
``2/n^2`` times the sum of its edge weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .errors import CapacityError, DomainError
from .rational import as_fraction

Pair = tuple[int, int]

DEFAULT_CLIQUE_GUARD = 60


def _pair(i: int, j: int) -> Pair:
    if i == j:
        raise DomainError(f"self-pair ({i}, {i})")
    return (i, j) if i < j else (j, i)


def _check_unit(w: Fraction, what: str) -> None:
    if not 0 <= w <= 1:
        raise DomainError(f"{what} {w} outside [0, 1]")


@dataclass(frozen=True)
class WeightedGraph:
    """Graph on vertices ``0..n-1`` with rational edge weights.

    ``weights`` only stores positive weights; zero entries passed to the
    constructor are dropped so that equality is structural.
    """

    n: int
    weights: Mapping[Pair, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise DomainError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        clean = {}
        for (i, j), w in dict(self.weights).items():
            p = _pair(i, j)
            if not (0 <= p[0] and p[1] < self.n):
                raise DomainError(f"pair {p} out of range for n={self.n}")
            if p in clean:
                raise DomainError(f"duplicate pair {p}")
            w = as_fraction(w)
            _check_unit(w, f"weight of {p}")
            if w > 0:
                clean[p] = w
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    def weight(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        return self.weights.get(_pair(i, j), Fraction(0))

    def edges(self) -> list[Pair]:
        return list(self.weights)

    def neighbour_masks(self) -> list[int]:
        masks = [0] * self.n
        for i, j in self.weights:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def matrix(self) -> list[list[Fraction]]:
        a = [[Fraction(0)] * self.n for _ in range(self.n)]
        for (i, j), w in self.weights.items():
            a[i][j] = a[j][i] = w
        return a

    def relabel(self, perm: list[int]) -> "WeightedGraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        return WeightedGraph(self.n, {(perm[i], perm[j]): w for (i, j), w in self.weights.items()})

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.weights == other.weights

    def __hash__(self):
        return hash((self.n, tuple(self.weights.items())))


class CliqueWeighting:
    """Map from clique order ``r >= 2`` to a weight in [0, 1].

    Orders beyond the largest specified one reuse its value (``tail="constant"``),
    or follow the Turán weights (``tail="turan"``).  ``CliqueWeighting.turan()``
    is the pure Turán weighting.
    """

    def __init__(self, values: Mapping[int, object] | None = None, tail: str = "constant"):
        if tail not in ("constant", "turan"):
            raise DomainError(f"unknown tail rule {tail!r}")
        vals = {}
        for r, w in (values or {}).items():
            if r < 2:
                raise DomainError(f"clique order {r} < 2")
            w = as_fraction(w)
            _check_unit(w, f"clique weight w({r})")
            vals[int(r)] = w
        if not vals and tail == "constant":
            raise DomainError("a constant-tail weighting needs at least one value")
        self.values = dict(sorted(vals.items()))
        self.tail = tail

    @classmethod
    def turan(cls) -> "CliqueWeighting":
        return cls({}, tail="turan")

    def __call__(self, r: int) -> Fraction:
        if r < 2:
            raise DomainError(f"clique order {r} < 2")
        if r in self.values:
            return self.values[r]
        if self.tail == "turan":
            return turan_weight(r)
        below = [k for k in self.values if k <= r]
        # orders smaller than the first key fall back to the first value
        key = below[-1] if below else next(iter(self.values))
        return self.values[key]

    def __eq__(self, other):
        if not isinstance(other, CliqueWeighting):
            return NotImplemented
        return self.values == other.values and self.tail == other.tail

    def __repr__(self):
        return f"CliqueWeighting({self.values!r}, tail={self.tail!r})"


@dataclass(frozen=True)
class WeightedCliquePattern:
    """Forbidden template ``(r, f)``: an r-clique whose edge weights strictly exceed f.

    Pairs missing from ``f`` have threshold 0, so they still demand an edge.
    """

    r: int
    f: Mapping[Pair, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 1:
            raise DomainError(f"pattern order must be >= 1, got {self.r}")
        full = {}
        given = {}
        for (i, j), a in dict(self.f).items():
            p = _pair(i, j)
            if not (0 <= p[0] and p[1] < self.r):
                raise DomainError(f"pattern pair {p} out of range for r={self.r}")
            if p in given:
                raise DomainError(f"duplicate pattern pair {p}")
            a = as_fraction(a)
            _check_unit(a, f"threshold of {p}")
            given[p] = a
        for p in combinations(range(self.r), 2):
            full[p] = given.get(p, Fraction(0))
        object.__setattr__(self, "f", full)

    @classmethod
    def uniform(cls, r: int, a) -> "WeightedCliquePattern":
        """``K_r^a``: every threshold equal to ``a``."""
        a = as_fraction(a)
        return cls(r, {p: a for p in combinations(range(r), 2)})

    def threshold(self, i: int, j: int) -> Fraction:
        return self.f[_pair(i, j)]

    def is_all_zero(self) -> bool:
        return all(a == 0 for a in self.f.values())

    def never_matches(self) -> bool:
        return any(a >= 1 for a in self.f.values())


def K(r: int, a=0) -> WeightedCliquePattern:
    return WeightedCliquePattern.uniform(r, a)


@dataclass(frozen=True)
class BlowupSpec:
    """Complete t-partite weighted graph template with part proportions ``x``."""

    t: int
    f: Mapping[Pair, Fraction]
    x: tuple[Fraction, ...]

    def __post_init__(self):
        if self.t < 1:
            raise DomainError("a blow-up needs at least one part")
        x = tuple(as_fraction(v) for v in self.x)
        if len(x) != self.t:
            raise DomainError(f"expected {self.t} proportions, got {len(x)}")
        if any(v <= 0 for v in x) or sum(x) != 1:
            raise DomainError("proportions must be positive and sum to 1")
        f = {}
        for (i, j), w in dict(self.f).items():
            p = _pair(i, j)
            if p[1] >= self.t:
                raise DomainError(f"pair {p} out of range for t={self.t}")
            w = as_fraction(w)
            _check_unit(w, f"weight of {p}")
            f[p] = w
        for p in combinations(range(self.t), 2):
            f.setdefault(p, Fraction(0))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "f", dict(sorted(f.items())))

    def matrix(self) -> list[list[Fraction]]:
        a = [[Fraction(0)] * self.t for _ in range(self.t)]
        for (i, j), w in self.f.items():
            a[i][j] = a[j][i] = w
        return a

    def limit_density(self) -> Fraction:
        """``x^T A x``: the scaled weight of the blow-up as n grows."""
        return sum((2 * w * self.x[i] * self.x[j] for (i, j), w in self.f.items()), Fraction(0))


def total_weight(g: WeightedGraph) -> Fraction:
    if g.n == 0:
        return Fraction(0)
    return Fraction(2, g.n * g.n) * sum(g.weights.values(), Fraction(0))


def turan_weight(r: int) -> Fraction:
    if r < 2:
        raise DomainError(f"Turán weight needs r >= 2, got {r}")
    return Fraction(r, 2 * (r - 1))


def rescale(cw: CliqueWeighting, r: int) -> Fraction:
    """Ratio of ``cw(r)`` to the Turán weight of order r."""
    if r < 2:
        raise DomainError(f"rescaling needs r >= 2, got {r}")
    return Fraction(2 * (r - 1), r) * cw(r)


def maximal_cliques(masks: list[int]) -> Iterable[int]:
    """Bron–Kerbosch with Tomita pivoting over bitmask adjacency; yields clique masks."""
    n = len(masks)
    stack = [(0, (1 << n) - 1, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                yield r
            continue
        px = p | x
        # pivot: vertex of P u X with most neighbours in P
        best, pivot = -1, 0
        m = px
        while m:
            low = m & -m
            u = low.bit_length() - 1
            c = bin(masks[u] & p).count("1")
            if c > best:
                best, pivot = c, u
            m ^= low
        cand = p & ~masks[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            stack.append((r | low, p & masks[v], x & masks[v]))
            p &= ~low
            x |= low
            cand ^= low


def edge_clique_orders(g: WeightedGraph, guard: int = DEFAULT_CLIQUE_GUARD) -> dict[Pair, int]:
    """Order of a largest clique containing each edge of the support of ``g``."""
    if g.n > guard:
        raise CapacityError(f"n={g.n} exceeds the exact max-clique guard {guard}")
    masks = g.neighbour_masks()
    orders = {e: 2 for e in g.weights}
    for clique in maximal_cliques(masks):
        size = bin(clique).count("1")
        if size <= 2:
            continue
        verts = [v for v in range(g.n) if clique >> v & 1]
        for p in combinations(verts, 2):
            if orders[p] < size:
                orders[p] = size
    return orders


def assign_clique_weights(g: WeightedGraph, cw: CliqueWeighting,
                          guard: int = DEFAULT_CLIQUE_GUARD) -> WeightedGraph:
    """Reweight each support edge by ``cw`` of the largest clique containing it."""
    orders = edge_clique_orders(g, guard)
    return WeightedGraph(g.n, {e: cw(r) for e, r in orders.items()})


def contains_pattern(g: WeightedGraph, pat: WeightedCliquePattern) -> tuple[int, ...] | None:
    """Injection ``[r] -> V(g)`` with every pair weight strictly above its threshold.

    Backtracking that always extends the pattern vertex with the fewest
    remaining candidates.
    """
    r = pat.r
    if r > g.n:
        return None
    if pat.never_matches():
        return None
    cand = [set(range(g.n)) for _ in range(r)]
    phi: dict[int, int] = {}

    def search() -> bool:
        if len(phi) == r:
            return True
        free = [i for i in range(r) if i not in phi]
        i = min(free, key=lambda k: (len(cand[k]), k))
        for v in sorted(cand[i]):
            phi[i] = v
            saved = []
            ok = True
            for k in free:
                if k == i:
                    continue
                a = pat.threshold(i, k)
                keep = {u for u in cand[k] if u != v and g.weight(v, u) > a}
                saved.append((k, cand[k]))
                cand[k] = keep
                if not keep:
                    ok = False
                    break
            if ok and search():
                return True
            for k, s in saved:
                cand[k] = s
            del phi[i]
        return False

    if search():
        return tuple(phi[i] for i in range(r))
    return None


def part_sizes(x: tuple[Fraction, ...], n: int) -> list[int]:
    """Floors for all parts but the last, which takes the remainder."""
    sizes = [int(v * n) for v in x[:-1]]  # Fraction * int -> floor via int() for positives
    sizes.append(n - sum(sizes))
    return sizes


def make_blowup(spec: BlowupSpec, n: int) -> WeightedGraph:
    if n < spec.t:
        raise DomainError(f"n={n} smaller than the number of parts {spec.t}")
    sizes = part_sizes(spec.x, n)
    starts = [sum(sizes[:i]) for i in range(spec.t)]
    weights = {}
    for (i, j), w in spec.f.items():
        if w == 0:
            continue
        for u in range(starts[i], starts[i] + sizes[i]):
            for v in range(starts[j], starts[j] + sizes[j]):
                weights[(u, v)] = w
    return WeightedGraph(n, weights)


def make_turan_graph(n: int, k: int) -> WeightedGraph:
    """Balanced complete k-partite graph with unit weights."""
    if k < 1 or n < k:
        raise DomainError(f"Turán graph needs 1 <= k <= n, got n={n}, k={k}")
    part = [v % k for v in range(n)]
    return WeightedGraph(n, {(u, v): Fraction(1) for u, v in combinations(range(n), 2)
                             if part[u] != part[v]})


def unweighted(n: int, edges: Iterable[Pair]) -> WeightedGraph:
    return WeightedGraph(n, {e: Fraction(1) for e in edges})
