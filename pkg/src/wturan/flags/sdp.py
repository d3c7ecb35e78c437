"""Flag-algebra SDP for linear colour-density objectives.

For admissible N-vertex colourings G the certificate must satisfy

    lambda >= obj(G) + sum_tau <Q_tau, M_tau(G)>,   Q_tau PSD,

where M_tau(G)[F1, F2] is the probability that a random injective labelling
of a type tau in G, together with a random split of the remaining vertices,
induces tau and the flags F1 and F2.  Averaged over any colour-limit object
the second term is a sum of squares, so lambda bounds the objective.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Sequence

from ..canon import canonical_code, code_of, colex_pairs
from ..errors import DomainError
from ..rational import as_fraction
from .colored import ColoredGraph, ForbiddenIndex, enumerate_colored, obj_value


@dataclass(frozen=True)
class DensityProblem:
    k: int
    objective: tuple[Fraction, ...]
    forbidden: tuple[ColoredGraph, ...]
    N: int
    name: str = ""

    def __post_init__(self):
        obj = tuple(as_fraction(v) for v in self.objective)
        if len(obj) != self.k:
            raise DomainError(f"objective has {len(obj)} coefficients for {self.k} colours")
        if obj and obj[0] != 0:
            raise DomainError("colour 1 must have coefficient 0")
        if self.N not in (3, 4, 5):
            raise DomainError(f"flag order N must be 3, 4 or 5, got {self.N}")
        forb = tuple(sorted(set(self.forbidden)))
        for g in forb:
            if g.n > self.N:
                raise DomainError(f"forbidden pattern {g} has more than N={self.N} vertices")
            if any(not 1 <= c <= self.k for c in g.code):
                raise DomainError(f"forbidden pattern {g} uses a colour outside 1..{self.k}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "forbidden", forb)


@dataclass
class TypeBlock:
    """One PSD block: a labelled type and its flags (codes with the type fixed first)."""

    size: int
    type_matrix: list
    flag_order: int
    flags: list  # canonical codes of flag colourings on flag_order vertices, labels first

    @property
    def dim(self) -> int:
        return len(self.flags)

    def type_label(self) -> str:
        return f"{self.size}:" + "".join(str(c) for c in code_of(self.type_matrix))


@dataclass
class SDPInstance:
    problem: DensityProblem
    graphs: list  # ColoredGraph, admissible on N vertices
    objective_values: list  # Fraction per graph
    blocks: list  # TypeBlock
    # densities[g][b] is a sparse dict {(i, j): Fraction} with i <= j
    densities: list = field(default_factory=list)

    @property
    def infeasible(self) -> bool:
        return not self.graphs

    def block_sizes(self) -> list[int]:
        return [b.dim for b in self.blocks]

    def pair_value(self, g: int, b: int, q) -> Fraction:
        """<Q_b, M_b(G_g)> for a full symmetric matrix ``q``."""
        acc = Fraction(0)
        for (i, j), v in self.densities[g][b].items():
            acc += v * q[i][j] if i == j else 2 * v * q[i][j]
        return acc

    def constraint_value(self, g: int, qs) -> Fraction:
        return self.objective_values[g] + sum(
            (self.pair_value(g, b, qs[b]) for b in range(len(self.blocks))), Fraction(0))


def type_sizes(N: int) -> list[int]:
    return [s for s in range(1, N - 1) if (N - s) % 2 == 0]


def _types(size: int, k: int, index: ForbiddenIndex) -> list:
    if size == 1:
        return [[[0]]]
    reps = enumerate_colored(size, k, index)
    return [g.matrix() for g in reps]


def _flags(tau: list, m: int, k: int, index: ForbiddenIndex) -> list:
    s = len(tau)
    free_pairs = [(i, j) for i, j in colex_pairs(m) if j >= s]
    seen = set()
    for combo in product(range(1, k + 1), repeat=len(free_pairs)):
        c = [[0] * m for _ in range(m)]
        for i in range(s):
            for j in range(s):
                c[i][j] = tau[i][j]
        for (i, j), col in zip(free_pairs, combo):
            c[i][j] = c[j][i] = col
        code = canonical_code(c, fixed=s)
        if code in seen:
            continue
        if index.hits(c):
            continue
        seen.add(code)
    return sorted(seen)


def _pair_densities(gm: list, block: TypeBlock, flag_index: dict) -> dict:
    N = len(gm)
    s, m = block.size, block.flag_order
    tau = block.type_matrix
    ext = m - s
    acc: dict = {}
    for theta in permutations(range(N), s):
        if any(gm[theta[i]][theta[j]] != tau[i][j] for i in range(s) for j in range(i + 1, s)):
            continue
        rest = [v for v in range(N) if v not in theta]
        for a_set in combinations(rest, ext):
            b_set = [v for v in rest if v not in a_set]
            fa = _flag_code(gm, theta, a_set)
            fb = _flag_code(gm, theta, b_set)
            i, j = flag_index[fa], flag_index[fb]
            key = (i, j) if i <= j else (j, i)
            # ordered split (A, B); off-diagonal mass is shared with (B, A) via symmetry
            acc[key] = acc.get(key, 0) + (1 if i == j else Fraction(1, 2))
    total = (factorial(N) // factorial(N - s)) * comb(N - s, ext)
    return {key: Fraction(v) / total for key, v in sorted(acc.items()) if v}


def _flag_code(gm, theta, extra):
    verts = list(theta) + list(extra)
    sub = [[gm[u][v] for v in verts] for u in verts]
    return canonical_code(sub, fixed=len(theta))


def build_sdp(problem: DensityProblem) -> SDPInstance:
    """Enumerate admissible graphs, types and flags, and all pair densities."""
    N, k = problem.N, problem.k
    index = ForbiddenIndex(problem.forbidden)
    graphs = enumerate_colored(N, k, index)
    if not graphs:
        return SDPInstance(problem, [], [], [], [])
    blocks = []
    for s in type_sizes(N):
        m = (N + s) // 2
        for tau in _types(s, k, index):
            flags = _flags(tau, m, k, index)
            if flags:
                blocks.append(TypeBlock(s, tau, m, flags))
    flag_maps = [{code: i for i, code in enumerate(b.flags)} for b in blocks]
    dens = []
    for g in graphs:
        gm = g.matrix()
        dens.append([_pair_densities(gm, b, fm) for b, fm in zip(blocks, flag_maps)])
    objs = [obj_value(g, problem.objective) for g in graphs]
    return SDPInstance(problem, graphs, objs, blocks, dens)


# ---------------------------------------------------------------- problems per case

def case_problem(case: str, p: int | None = None, N: int | None = None,
                 complete: bool = False) -> DensityProblem:
    """Colour-density problem of a case: class upper bounds as objective.

    Forbidden patterns larger than N are dropped (a weaker but still valid
    problem); the default N is the largest pattern order, capped at 5.  With
    ``complete`` the patterns are every minimal colouring on at most N
    vertices whose read-back configuration is forbidden, not only the
    expansions of the listed configurations.
    """
    from ..embedding import colored_forbidden_set, complete_forbidden_set, discretization, parse_case

    if case.startswith("p6") and p is None:
        case, p = parse_case(case)
    table = discretization(case, p)
    forb = colored_forbidden_set(case, p)
    if N is None:
        N = {"rho512": 4, "rho614": 4, "rho411": 5}.get(case, min(5, max(g.n for g in forb)))
    if complete:
        forb = complete_forbidden_set(case, p, max_order=N)
    forb = [g for g in forb if g.n <= N]
    name = table.case + ("-complete" if complete else "")
    return DensityProblem(table.k, table.objective(), tuple(forb), N, name)


def mantel_problem() -> DensityProblem:
    """Two colours, monochromatic colour-2 triangle forbidden, maximise colour 2."""
    return DensityProblem(2, (Fraction(0), Fraction(1)), (ColoredGraph.monochromatic(3, 2),), 3,
                          "mantel")


# ---------------------------------------------------------------- limit objects

def blowup_sample_distribution(colors: Sequence[Sequence[int]], x: Sequence[Fraction], N: int,
                               inner_color: int = 1) -> dict:
    """Distribution of N-vertex samples from a coloured blow-up limit.

    Vertices are drawn independently with part probabilities ``x``; two
    vertices in the same part get ``inner_color``.
    """
    t = len(x)
    dist: dict = {}
    for parts in product(range(t), repeat=N):
        prob = Fraction(1)
        for pi in parts:
            prob *= x[pi]
        if not prob:
            continue
        c = [[0] * N for _ in range(N)]
        for i, j in colex_pairs(N):
            col = inner_color if parts[i] == parts[j] else colors[parts[i]][parts[j]]
            c[i][j] = c[j][i] = col
        g = ColoredGraph.from_matrix(c)
        dist[g] = dist.get(g, Fraction(0)) + prob
    return dist
