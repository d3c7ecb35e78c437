"""Clique embedding in cluster graphs and the forbidden configurations it yields.

A cluster configuration lists, for some pairs of clusters, a density lower
bound ``a`` (the actual density is strictly larger).  Every cluster holds a
K_p.  Embedding proceeds cluster by cluster: cluster i starts from p
vertices and, for each later cluster j in some order, keeps the vertices that
still have a linear common neighbourhood in j.  In the limit of vanishing
regularity error, density just above ``a`` lets ``floor(s*a) + 1`` of ``s``
vertices survive.  Pairs without a bound cannot both be used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import floor

import numpy as np

from .canon import canonical_keys, code_from_key, colex_pairs
from .errors import CapacityError, DomainError
from .flags.colored import ColoredGraph, ForbiddenIndex, enumerate_colored
from .rational import as_fraction
from .weighted_graph import BlowupSpec

EMBED_GUARD = 7


def survivors(s: int, a) -> int:
    """How many of ``s`` vertices keep a common neighbourhood across density > a."""
    a = as_fraction(a)
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    if not 0 <= a < 1:
        raise DomainError(f"threshold {a} outside [0, 1)")
    return floor(s * a) + 1


@dataclass(frozen=True)
class ClusterConfig:
    t: int
    thresholds: dict
    p: int

    def __post_init__(self):
        if self.t < 1:
            raise DomainError("need at least one cluster")
        if self.p < 1:
            raise DomainError("p must be >= 1")
        th = {}
        for (i, j), a in dict(self.thresholds).items():
            if i == j:
                raise DomainError(f"self-pair ({i}, {i})")
            key = (min(i, j), max(i, j))
            if key[0] < 0 or key[1] >= self.t:
                raise DomainError(f"pair {key} out of range for t={self.t}")
            if key in th:
                raise DomainError(f"duplicate pair {key}")
            a = as_fraction(a)
            if not 0 <= a < 1:
                raise DomainError(f"threshold {a} of {key} outside [0, 1)")
            th[key] = a
        object.__setattr__(self, "thresholds", dict(sorted(th.items())))

    def threshold(self, i: int, j: int):
        return self.thresholds.get((min(i, j), max(i, j)))

    def relabel(self, perm) -> "ClusterConfig":
        """Cluster ``i`` becomes ``perm[i]``."""
        return ClusterConfig(self.t, {(perm[i], perm[j]): a for (i, j), a in self.thresholds.items()},
                             self.p)

    def with_p(self, p: int) -> "ClusterConfig":
        return ClusterConfig(self.t, self.thresholds, p)


@dataclass(frozen=True)
class Embedding:
    size: int
    order: tuple[int, ...]
    later_orders: dict = field(default_factory=dict)
    contributions: tuple[int, ...] = ()


def _chain(config: ClusterConfig, i: int, later: tuple[int, ...]) -> int:
    s = config.p
    for j in later:
        s = survivors(s, config.threshold(i, j))
    return s


def max_embeddable(config: ClusterConfig, guard: int = EMBED_GUARD) -> Embedding:
    """Largest clique guaranteed by some cluster order and per-cluster survivor orders.

    Searches every set of pairwise-usable clusters, every order of it and,
    for each cluster, every order of the clusters after it.  Ties prefer using
    more clusters, then the lexicographically smallest orders.
    """
    t = config.t
    if t > guard:
        raise CapacityError(f"t={t} exceeds the embedding search guard {guard}")

    @lru_cache(maxsize=None)
    def best_chain(i: int, later: frozenset):
        best = None
        for pi in permutations(sorted(later)):
            s = _chain(config, i, pi)
            if best is None or s > best[0]:
                best = (s, pi)
        return best if best is not None else (config.p, ())

    usable = [[i != j and config.threshold(i, j) is not None for j in range(t)] for i in range(t)]
    best = None
    for k in range(t, 0, -1):
        for subset in combinations(range(t), k):
            if any(not usable[i][j] for i, j in combinations(subset, 2)):
                continue
            for order in permutations(subset):
                total = 0
                pis = {}
                contrib = [0] * t
                for pos, i in enumerate(order):
                    s, pi = best_chain(i, frozenset(order[pos + 1:]))
                    total += s
                    pis[i] = pi
                    contrib[i] = s
                key = (total, k)
                if best is None or key > best[0]:
                    best = (key, Embedding(total, order, pis, tuple(contrib)))
    return best[1]


def embed_in_order(config: ClusterConfig, order) -> Embedding:
    """Best survivor orders for one fixed cluster order (all pairs must be usable)."""
    order = tuple(order)
    for i, j in combinations(order, 2):
        if config.threshold(i, j) is None:
            raise DomainError(f"clusters {i} and {j} cannot both be used")
    contrib = [0] * config.t
    pis = {}
    for pos, i in enumerate(order):
        best = None
        for pi in permutations(sorted(order[pos + 1:])):
            s = _chain(config, i, pi)
            if best is None or s > best[0]:
                best = (s, pi)
        contrib[i], pis[i] = best
    return Embedding(sum(contrib), order, pis, tuple(contrib))


def is_forbidden(config: ClusterConfig, q: int) -> bool:
    return max_embeddable(config).size >= q


# ---------------------------------------------------------------- discretisations

@dataclass(frozen=True)
class ClassRow:
    color: int
    lower: Fraction
    upper: Fraction
    rule: str


@dataclass(frozen=True)
class DiscretizationTable:
    case: str
    rows: tuple[ClassRow, ...]
    cap: Fraction = Fraction(1)

    @property
    def k(self) -> int:
        return len(self.rows)

    def objective(self) -> tuple[Fraction, ...]:
        """Per-colour weights: each class counts at its upper bound."""
        return tuple(r.upper for r in self.rows)

    def color_of(self, w) -> int:
        """Class whose (lower, upper] contains ``w``; colour 1 for weight 0."""
        w = as_fraction(w)
        if w == 0:
            return 1
        for row in self.rows[1:]:
            if row.lower < w <= row.upper:
                return row.color
        raise DomainError(f"weight {w} not covered by the {self.case} table (cap {self.cap})")

    def lower(self, color: int) -> Fraction:
        return self.rows[color - 1].lower


def _table(case, bounds, rules, cap=Fraction(1)):
    rows = [ClassRow(1, Fraction(0), Fraction(0), "no embedding")]
    lows = [Fraction(0)] + list(bounds[:-1])
    for c, (lo, hi, rule) in enumerate(zip(lows, bounds, rules), start=2):
        rows.append(ClassRow(c, lo, hi, rule))
    return DiscretizationTable(case, tuple(rows), cap)


CASES = ("rho512", "rho614", "rho411", "p6")


def parse_case(text: str) -> tuple[str, int | None]:
    """``rho512`` or ``p6(10)`` / ``p6:10`` -> (case, p)."""
    text = text.strip()
    for sep in ("(", ":"):
        if sep in text:
            name, arg = text.split(sep, 1)
            arg = arg.rstrip(")")
            if name != "p6":
                raise DomainError(f"case {name!r} takes no parameter")
            try:
                return "p6", int(arg)
            except ValueError as exc:
                raise DomainError(f"bad p in {text!r}") from exc
    if text == "p6":
        raise DomainError("case p6 needs a parameter, e.g. p6(10)")
    if text not in CASES:
        raise DomainError(f"unknown case {text!r}; known: rho512, rho614, rho411, p6(p)")
    return text, None


def discretization(case: str, p: int | None = None) -> DiscretizationTable:
    if case.startswith("p6") and p is None:
        case, p = parse_case(case)
    F = Fraction
    if case == "rho512":
        return _table(case, [F(1, 5), F(1, 2), F(3, 5), F(4, 5), F(1)],
                      ["any 1 vertex", "some 2 vertices", "any 2 vertices or some 3 vertices",
                       "some 4 vertices", "any 5 vertices"])
    if case == "rho614":
        return _table(case, [F(k, 6) for k in range(1, 7)],
                      ["any 1 vertex", "some 2 vertices", "some 3 vertices",
                       "any 2 vertices or some 4 vertices", "some 5 vertices", "any 6 vertices"])
    if case == "rho411":
        return _table(case, [F(1, 4), F(1, 2), F(3, 4), F(1)],
                      ["any 1 vertex", "some 2 vertices", "any 2 vertices or some 3 vertices",
                       "any 4 vertices"])
    if case == "p6":
        if p is None or p < 6:
            raise DomainError("case p6 needs p >= 6")
        return _table(f"p6({p})", [F(k, p) for k in range(1, 6)],
                      ["any 1 vertex", "some 2 vertices", "some 3 vertices", "some 4 vertices",
                       "some 5 vertices"], cap=F(5, p))
    raise DomainError(f"unknown case {case!r}")


# ---------------------------------------------------------------- known configurations

@dataclass(frozen=True)
class NamedConfig:
    name: str
    config: ClusterConfig
    q: int
    labels: tuple[int, ...]  # vertices used per cluster in the hand-made embedding


_E = Fraction(0)  # "density bounded away from zero"


def _cfg(t, p, pairs):
    return ClusterConfig(t, {(i - 1, j - 1): a for (i, j), a in pairs.items()}, p)


def _eps_except(t, special):
    pairs = {(i, j): _E for i, j in combinations(range(1, t + 1), 2)}
    pairs.update(special)
    return pairs


def forbidden_configs(case: str, p: int | None = None) -> list[NamedConfig]:
    """Forbidden cluster configurations used for each case, with their hand-made labels."""
    if case.startswith("p6") and p is None:
        case, p = parse_case(case)
    F = Fraction
    out = []
    if case == "rho512":
        q, pp = 12, 5
        out = [
            ("a", _cfg(3, pp, {(1, 2): F(1, 2), (1, 3): F(1, 5), (2, 3): F(4, 5)}), (2, 5, 5)),
            ("b", _cfg(3, pp, {(1, 2): F(3, 5), (1, 3): F(1, 2), (2, 3): F(3, 5)}), (3, 4, 5)),
            ("c", _cfg(4, pp, _eps_except(4, {(3, 4): F(4, 5)})), (1, 1, 5, 5)),
            ("d", _cfg(4, pp, _eps_except(4, {(2, 3): F(1, 5), (2, 4): F(1, 2), (3, 4): F(3, 5)})),
             (1, 2, 4, 5)),
            ("e", _cfg(4, pp, {(1, 2): F(1, 2), (1, 3): F(1, 5), (1, 4): F(1, 2), (2, 3): F(1, 5),
                               (2, 4): F(1, 2), (3, 4): F(1, 2)}), (2, 2, 3, 5)),
        ]
    elif case == "rho614":
        q, pp = 14, 6
        out = [
            ("a", _cfg(3, pp, {(1, 2): F(1, 2), (1, 3): F(1, 6), (2, 3): F(5, 6)}), (2, 6, 6)),
            ("b", _cfg(3, pp, {(1, 2): F(2, 6), (1, 3): F(2, 6), (2, 3): F(5, 6)}), (2, 6, 6)),
            ("c", _cfg(4, pp, _eps_except(4, {(3, 4): F(5, 6)})), (1, 1, 6, 6)),
            ("d", _cfg(4, pp, _eps_except(4, {(2, 3): F(1, 6), (2, 4): F(1, 2), (3, 4): F(4, 6)})),
             (1, 2, 5, 6)),
            ("e", _cfg(4, pp, {(1, 2): F(1, 2), (1, 3): F(1, 6), (1, 4): F(1, 2), (2, 3): F(1, 6),
                               (2, 4): F(1, 2), (3, 4): F(3, 6)}), (2, 2, 4, 6)),
            ("f", _cfg(4, pp, {(1, 2): F(2, 6), (1, 3): F(2, 6), (1, 4): F(1, 2), (2, 3): F(2, 6),
                               (2, 4): F(2, 6), (3, 4): F(3, 6)}), (2, 2, 4, 6)),
        ]
    elif case == "rho411":
        q, pp = 11, 4
        out = [
            ("a", _cfg(3, pp, {(1, 2): F(3, 4), (1, 3): F(3, 4), (2, 3): F(1, 2)}), (4, 3, 4)),
            ("b", _cfg(4, pp, _eps_except(4, {(2, 3): F(1, 4), (2, 4): F(1, 2), (3, 4): F(3, 4)})),
             (1, 2, 4, 4)),
            ("c", _cfg(4, pp, {(1, 2): F(1, 4), (1, 3): F(1, 2), (1, 4): F(1, 2), (2, 3): F(1, 4),
                               (2, 4): F(1, 2), (3, 4): F(3, 4)}), (2, 2, 3, 4)),
            ("d", _cfg(5, pp, _eps_except(5, {(4, 5): F(3, 4)})), (1, 1, 1, 4, 4)),
            ("e", _cfg(5, pp, _eps_except(5, {(3, 4): F(1, 4), (3, 5): F(1, 2), (4, 5): F(1, 2)})),
             (1, 1, 2, 3, 4)),
        ]
    elif case == "p6":
        if p is None or p < 6:
            raise DomainError("case p6 needs p >= 6")
        q, pp = p + 6, p
        out = [
            ("a", _cfg(3, pp, _eps_except(3, {(2, 3): F(4, p)})), (1, 5, p)),
            ("b", _cfg(4, pp, _eps_except(4, {(3, 4): F(3, p)})), (1, 1, 4, p)),
            ("c", _cfg(5, pp, _eps_except(5, {(4, 5): F(2, p)})), (1, 1, 1, 3, p)),
        ]
        if p <= 12:
            out.append(("extra", tripartite_p6_config(p), (2, 4, p)))
        case = f"p6({p})"
    else:
        raise DomainError(f"unknown case {case!r}")
    return [NamedConfig(f"{case}_{tag}", cfg, q, labels) for tag, cfg, labels in out]


def tripartite_p6_config(p: int) -> ClusterConfig:
    """Three clusters pairwise above 3/p (the extra configuration, valid while p <= 12)."""
    a = Fraction(3, p)
    return ClusterConfig(3, {(0, 1): a, (0, 2): a, (1, 2): a}, p)


def case_parameters(case: str, p: int | None = None) -> tuple[int, int]:
    """(p, q) of a case."""
    if case == "rho512":
        return 5, 12
    if case == "rho614":
        return 6, 14
    if case == "rho411":
        return 4, 11
    if case == "p6" and p is not None:
        return p, p + 6
    raise DomainError(f"unknown case {case!r}")


def config_from_blowup(spec: BlowupSpec, table: DiscretizationTable, p: int) -> ClusterConfig:
    """Read a construction back as a configuration via class lower bounds."""
    th = {}
    for pair, w in spec.f.items():
        c = table.color_of(w)
        if c != 1:
            th[pair] = table.lower(c)
    return ClusterConfig(spec.t, th, p)


# ---------------------------------------------------------------- colour expansion

def expand_config(config: ClusterConfig, table: DiscretizationTable,
                  chunk: int = 1 << 16) -> set[ColoredGraph]:
    """Every colouring whose classes certify the configuration's thresholds.

    Colour c is admissible on a pair with threshold a iff c >= 2 and its class
    lower bound is at least a.  Pairs without a threshold may take any colour.
    The product of the per-pair choices is canonicalised in numpy batches.
    """
    t = config.t
    pairs = colex_pairs(t)
    options = []
    for pr in pairs:
        a = config.thresholds.get(pr)
        if a is None:
            options.append(np.arange(1, table.k + 1))
        else:
            options.append(np.array([r.color for r in table.rows[1:] if r.lower >= a], dtype=np.int64))
    radix = np.array([len(o) for o in options], dtype=np.int64)
    total = int(np.prod(radix))
    if total == 0:
        return set()
    stride = np.ones(len(pairs), dtype=np.int64)
    for m in range(len(pairs) - 2, -1, -1):
        stride[m] = stride[m + 1] * radix[m + 1]
    base = table.k + 1
    keys = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        codes = np.empty((idx.size, len(pairs)), dtype=np.int64)
        for m, opt in enumerate(options):
            codes[:, m] = opt[(idx // stride[m]) % radix[m]]
        keys.append(np.unique(canonical_keys(codes, t, base)))
    return {ColoredGraph(t, code_from_key(int(key), t, base))
            for key in np.unique(np.concatenate(keys))}


def colored_forbidden_set(case: str, p: int | None = None) -> list[ColoredGraph]:
    """Canonical, deduplicated colour patterns implied by the case's configurations."""
    if case.startswith("p6") and p is None:
        case, p = parse_case(case)
    table = discretization(case, p)
    out = set()
    for named in forbidden_configs(case, p):
        out |= expand_config(named.config, table)
    return sorted(out)


def config_from_coloring(g: ColoredGraph, table: DiscretizationTable, p: int) -> ClusterConfig:
    """Read a colouring as clusters: colour c >= 2 gives threshold lower(c), colour 1 no pair."""
    m = g.matrix()
    th = {(i, j): table.lower(m[i][j]) for i, j in combinations(range(g.n), 2) if m[i][j] >= 2}
    return ClusterConfig(g.n, th, p)


def complete_forbidden_set(case: str, p: int | None = None, max_order: int = 4) -> list[ColoredGraph]:
    """Minimal colourings on at most ``max_order`` vertices whose class lower bounds embed K_q.

    Unlike :func:`colored_forbidden_set` this does not start from the listed
    configurations: every colouring is read back as a configuration and
    tested.  Colourings containing a smaller forbidden one are left out.
    """
    if case.startswith("p6") and p is None:
        case, p = parse_case(case)
    table = discretization(case, p)
    p_in, q = case_parameters(case, p)
    found: list[ColoredGraph] = []
    for n in range(2, max_order + 1):
        index = ForbiddenIndex(found)
        fresh = [g for g in enumerate_colored(n, table.k, index)
                 if is_forbidden(config_from_coloring(g, table, p_in), q)]
        found.extend(fresh)
    return sorted(found)
