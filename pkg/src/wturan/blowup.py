"""Extremal values d(F) of weighted-clique families via clique blow-ups.

When a family forbids every r+1 clique, the extremal weighted graphs are
asymptotically blow-ups of a weighted t-clique with t <= r, and the optimal
part sizes solve the graph Lagrangian of that clique's weight matrix.  So
d(F) is the maximum Lagrangian over family-free weighted cliques, searched
here over a finite weight alphabet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .canon import colex_pairs, is_canonical
from .errors import CapacityError, DomainError
from .lagrangian import kkt_check, lagrangian_exact
from .rational import as_fraction
from .weighted_graph import (BlowupSpec, WeightedCliquePattern, WeightedGraph,
                             contains_pattern, make_blowup)

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class ForbiddenFamily:
    patterns: tuple[WeightedCliquePattern, ...]
    r_max: int = field(default=None)

    def __post_init__(self):
        pats = tuple(self.patterns)
        object.__setattr__(self, "patterns", pats)
        derived = derive_r_max(pats)
        r_max = self.r_max
        if r_max is None:
            if derived is None:
                raise DomainError("family forbids no all-zero clique; supply r_max explicitly")
            r_max = derived
        elif derived is not None and r_max > derived:
            r_max = derived
        if r_max < 0:
            raise DomainError("r_max must be nonnegative")
        object.__setattr__(self, "r_max", r_max)


def derive_r_max(patterns: Sequence[WeightedCliquePattern]) -> int | None:
    """``s - 1`` for the smallest all-zero-threshold pattern K_s^0, if any."""
    sizes = [p.r for p in patterns if p.is_all_zero()]
    return min(sizes) - 1 if sizes else None


def make_alphabet(values) -> tuple[Fraction, ...]:
    vals = sorted({as_fraction(v) for v in values})
    if not vals:
        raise DomainError("empty alphabet")
    if vals[0] < 0 or vals[-1] > 1:
        raise DomainError("alphabet values must lie in [0, 1]")
    return tuple(vals)


@dataclass(frozen=True)
class BlowupSolution:
    t: int
    f: dict
    x: tuple[Fraction, ...]
    density: Fraction
    lower_bound_only: bool = False
    nodes: int = 0

    def spec(self) -> BlowupSpec:
        return BlowupSpec(self.t, self.f, self.x)

    def matrix(self) -> list[list[Fraction]]:
        return self.spec().matrix()


def _graph(assign: dict, n: int) -> WeightedGraph:
    return WeightedGraph(n, {p: w for p, w in assign.items() if w > 0})


def _canonical_witness(t: int, f: dict, x: tuple) -> tuple[dict, tuple]:
    """Relabel to the lexicographically smallest weight sequence (colex order)."""
    pairs = colex_pairs(t)
    best = None
    for perm in permutations(range(t)):
        # new vertex k is old vertex perm[k]
        seq = tuple(f[tuple(sorted((perm[i], perm[j])))] for i, j in pairs)
        if best is None or seq < best[0]:
            best = (seq, perm)
    seq, perm = best
    return dict(zip(pairs, seq)), tuple(x[perm[k]] for k in range(t))


def _evaluate(assign: dict, n: int):
    a = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), w in assign.items():
        a[i][j] = a[j][i] = w
    res = lagrangian_exact(a)
    sup = res.support
    sub = {}
    for ii, jj in combinations(range(len(sup)), 2):
        sub[(ii, jj)] = a[sup[ii]][sup[jj]]
    f, x = _canonical_witness(len(sup), sub, res.x)
    return res.value, len(sup), f, x


def _family_free_with_last(assign: dict, n: int, patterns) -> bool:
    g = _graph(assign, n)
    for pat in patterns:
        if pat.r > n:
            continue
        if contains_pattern(g, pat) is not None:
            return False
    return True


def optimize_dF(family: ForbiddenFamily, alphabet, t_cap: int,
                node_budget: int = DEFAULT_NODE_BUDGET) -> BlowupSolution:
    """Best family-free weighted clique blow-up with at most ``min(t_cap, r_max)`` parts.

    Weighted cliques are generated orderly (one canonical representative per
    isomorphism class, grown one vertex at a time) and pruned as soon as a
    forbidden pattern embeds.  Each surviving clique is scored by its exact
    Lagrangian; the result is restricted to the optimal support.  Ties go to
    the lexicographically smallest ``(t, f)``.
    """
    letters = make_alphabet(alphabet)
    if t_cap < 1:
        raise DomainError("t_cap must be >= 1")
    top = min(t_cap, family.r_max)
    lower_only = t_cap < family.r_max
    patterns = [p for p in family.patterns if not p.never_matches()]
    index = {w: k for k, w in enumerate(letters)}

    best = (Fraction(0), 1, {}, (Fraction(1),))

    def better(cand, cur):
        dc, tc, fc, _ = cand
        dd, td, fd, _ = cur
        if dc != dd:
            return dc > dd
        kc = (tc, tuple(fc[p] for p in colex_pairs(tc)))
        kd = (td, tuple(fd[p] for p in colex_pairs(td)))
        return kc < kd

    nodes = 0
    if top >= 1 and any(p.r == 1 for p in patterns):
        top = 0  # even a single vertex is forbidden; only the degenerate answer remains

    def grow(assign: dict, n: int):
        nonlocal best, nodes
        if n >= 2:
            cand = _evaluate(assign, n)
            if better(cand, best):
                best = cand
        if n == top:
            return
        for row in product(range(len(letters)), repeat=n):
            nodes += 1
            if nodes > node_budget:
                d, t, f, x = best
                raise CapacityError(f"node budget {node_budget} exhausted",
                                    best=BlowupSolution(t, f, x, d, True, nodes))
            new = dict(assign)
            for i, k in enumerate(row):
                new[(i, n)] = letters[k]
            c = [[0] * (n + 1) for _ in range(n + 1)]
            for (i, j), w in new.items():
                c[i][j] = c[j][i] = index[w]
            if not is_canonical(c):
                continue
            if not _family_free_with_last(new, n + 1, patterns):
                continue
            grow(new, n + 1)

    if top >= 1:
        grow({}, 1)
    d, t, f, x = best
    return BlowupSolution(t, f, x, d, lower_only, nodes)


def solution_is_consistent(sol: BlowupSolution, family: ForbiddenFamily) -> bool:
    """Equal weighted degrees hold exactly and the weighted K_t is family-free."""
    from .lagrangian import LagrangianResult
    a = sol.matrix()
    res = LagrangianResult(sol.density, tuple(range(sol.t)), sol.x)
    if not kkt_check(a, res):
        return False
    g = WeightedGraph(sol.t, {p: w for p, w in sol.f.items() if w > 0})
    return all(contains_pattern(g, p) is None for p in family.patterns)


# ---------------------------------------------------------------- closed forms

def closed_form_heavy(a) -> tuple[Fraction, tuple[Fraction, Fraction, Fraction]]:
    """d and part proportions for forbidding K_3^a and K_4^0.

    The heavy part (joined to both others by weight 1) comes first.
    """
    a = as_fraction(a)
    if not 0 < a <= 1:
        raise DomainError(f"a={a} outside (0, 1]")
    d = Fraction(2) / (4 - a)
    assert d > Fraction(1, 2)
    return d, ((2 - a) / (4 - a), 1 / (4 - a), 1 / (4 - a))


def closed_form_chubby(q: int, r: int, a) -> Fraction:
    a = as_fraction(a)
    if not 2 <= q <= r:
        raise DomainError(f"need 2 <= q <= r, got q={q}, r={r}")
    if not 0 <= a <= 1:
        raise DomainError(f"a={a} outside [0, 1]")
    return max(1 - Fraction(1, q - 1), a * (1 - Fraction(1, r)))


def closed_form_matching(r: int, a) -> Fraction:
    a = as_fraction(a)
    if r < 2:
        raise DomainError(f"need r >= 2, got {r}")
    if not 0 <= a <= 1:
        raise DomainError(f"a={a} outside [0, 1]")
    if a <= Fraction(1, 2):
        return Fraction(1, 2)
    if r % 2 == 0:
        return a + (1 - 2 * a) / r
    return a * a * (r - 1) / (a * (r + 1) - 1)


def heavy_family(a) -> ForbiddenFamily:
    from .weighted_graph import K
    return ForbiddenFamily((K(3, a), K(4, 0)))


def chubby_family(q: int, r: int, a) -> ForbiddenFamily:
    from .weighted_graph import K
    return ForbiddenFamily((WeightedCliquePattern(q, {(0, 1): as_fraction(a)}), K(r + 1, 0)))


def matching_family(r: int, a) -> ForbiddenFamily:
    from .weighted_graph import K
    a = as_fraction(a)
    return ForbiddenFamily((WeightedCliquePattern(3, {(0, 1): a, (0, 2): a, (1, 2): 0}),
                            K(r + 1, 0)))


# ---------------------------------------------------------------- constructions

def _three_part(a, heavy_share) -> BlowupSpec:
    a = as_fraction(a)
    small = (1 - heavy_share) / 2
    return BlowupSpec(3, {(0, 1): a, (0, 2): 1, (1, 2): 1}, (small, small, heavy_share))


def conjecture_spec(p: int, t: int, r: int) -> BlowupSpec:
    """Parts V_0..V_t: density (r+1)/p between V_0 and V_1, 1 on every other pair.

    Proportions are the optimal Lagrangian vector of that weighted (t+1)-clique.
    """
    if p < 1 or t < 1 or not 0 <= r < p:
        raise DomainError(f"need p >= 1, t >= 1, 0 <= r < p; got p={p}, t={t}, r={r}")
    a = Fraction(r + 1, p)
    m = t + 1
    f = {(i, j): (a if (i, j) == (0, 1) else Fraction(1)) for i, j in combinations(range(m), 2)}
    mat = [[Fraction(0)] * m for _ in range(m)]
    for (i, j), w in f.items():
        mat[i][j] = mat[j][i] = w
    res = lagrangian_exact(mat)
    if len(res.support) != m:
        raise DomainError("degenerate conjecture parameters: optimum drops a part")
    return BlowupSpec(m, f, res.x)


def conjecture_value(p: int, t: int, r: int) -> Fraction:
    c = 2 * p - r - 1
    return Fraction((t - 1) * c + r + 1, t * c + r + 1)


NAMED = ("rho512", "rho614", "rho411", "conj_ptr", "bipartite_p6", "tripartite_p6")


def named_spec(name: str, **params) -> BlowupSpec:
    """Blow-up template of a named extremal construction.

    ``conj_ptr`` takes ``p, t, r``; the two ``*_p6`` shapes take ``p``.
    """
    if name == "rho512":
        return _three_part(Fraction(1, 5), Fraction(9, 19))
    if name == "rho614":
        return _three_part(Fraction(1, 6), Fraction(11, 23))
    if name == "rho411":
        return _three_part(Fraction(1, 2), Fraction(3, 7))
    if name == "conj_ptr":
        return conjecture_spec(params["p"], params["t"], params["r"])
    if name == "bipartite_p6":
        p = params["p"]
        if p < 5:
            raise DomainError("bipartite_p6 needs p >= 5")
        return BlowupSpec(2, {(0, 1): Fraction(5, p)}, (Fraction(1, 2), Fraction(1, 2)))
    if name == "tripartite_p6":
        p = params["p"]
        if p < 4:
            raise DomainError("tripartite_p6 needs p >= 4")
        w = Fraction(4, p)
        return BlowupSpec(3, {(0, 1): w, (0, 2): w, (1, 2): w}, (Fraction(1, 3),) * 3)
    raise DomainError(f"unknown construction {name!r}; known: {', '.join(NAMED)}")


def named_construction(name: str, n: int, **params) -> WeightedGraph:
    return make_blowup(named_spec(name, **params), n)


def parse_construction_name(text: str) -> tuple[str, dict]:
    """``conj_ptr(5,2,0)`` / ``bipartite_p6(10)`` / ``rho512`` -> (name, params)."""
    text = text.strip()
    if "(" not in text:
        return text, {}
    if not text.endswith(")"):
        raise DomainError(f"malformed construction name {text!r}")
    name, args = text[:-1].split("(", 1)
    try:
        vals = [int(v) for v in args.split(",") if v.strip()]
    except ValueError as exc:
        raise DomainError(f"non-integer parameter in {text!r}") from exc
    keys = {"conj_ptr": ("p", "t", "r"), "bipartite_p6": ("p",), "tripartite_p6": ("p",)}
    if name not in keys:
        raise DomainError(f"construction {name!r} takes no parameters")
    if len(vals) != len(keys[name]):
        raise DomainError(f"{name} expects {len(keys[name])} parameter(s)")
    return name, dict(zip(keys[name], vals))
