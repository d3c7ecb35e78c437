"""Graph Lagrangians: maximise u^T A u over the standard simplex.

The exact solver relies on the structure of optimal vectors of dense
matrices: some maximiser has a support K on which every off-diagonal entry is
positive and every vertex of K has the same weighted degree, equal to the
optimum.  Enumerating those supports and solving the equal-degree system on
each gives the global maximum exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .rational import as_fraction, solve_linear

DEFAULT_EXACT_GUARD = 18

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class LagrangianResult:
    value: Fraction
    support: tuple[int, ...]
    x: tuple[Fraction, ...]
    kkt_verified: bool = False

    def vector(self, m: int) -> list[Fraction]:
        """Full length-m vector with zeros off the support."""
        u = [Fraction(0)] * m
        for i, xi in zip(self.support, self.x):
            u[i] = xi
        return u


def sym_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    """Validate and convert to an exact symmetric nonnegative zero-diagonal matrix."""
    a = [[as_fraction(v) for v in row] for row in rows]
    m = len(a)
    for i, row in enumerate(a):
        if len(row) != m:
            raise DomainError(f"row {i} has length {len(row)}, expected {m}")
        if row[i] != 0:
            raise DomainError(f"nonzero diagonal entry at {i}")
        for j, v in enumerate(row):
            if v < 0:
                raise DomainError(f"negative entry at ({i}, {j})")
            if v != a[j][i]:
                raise DomainError(f"matrix not symmetric at ({i}, {j})")
    return a


def quadratic_form(a: Matrix, u: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            total += ui * sum((a[i][j] * uj for j, uj in enumerate(u) if uj), Fraction(0))
    return total


def weighted_degrees(a: Matrix, u: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a[i][j] * u[j] for j in range(len(u)) if u[j] and j != i), Fraction(0))
            for i in range(len(a))]


def _positive_cliques(a: Matrix):
    """All nonempty index sets with strictly positive off-diagonal entries, as sorted tuples."""
    m = len(a)
    nbr = [{j for j in range(m) if j != i and a[i][j] > 0} for i in range(m)]
    out = []

    def extend(clique, cands):
        out.append(tuple(clique))
        for v in sorted(cands):
            if v > clique[-1]:
                extend(clique + [v], cands & nbr[v])

    for v in range(m):
        extend([v], nbr[v])
    return out


def _equal_degree_system(a: Matrix, support: tuple[int, ...]):
    """Rows: sum_{i!=j} a_ij x_i - g = 0 for j in K, and sum x = 1. Unknowns (x_K, g)."""
    k = len(support)
    rows = []
    for j in support:
        rows.append([a[i][j] for i in support] + [Fraction(-1)])
    rows.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    return rows, rhs


def _float_candidate(af: np.ndarray, support: tuple[int, ...]):
    k = len(support)
    sub = af[np.ix_(support, support)]
    mat = np.zeros((k + 1, k + 1))
    mat[:k, :k] = sub
    mat[:k, k] = -1.0
    mat[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        if np.linalg.cond(mat) > 1e10:
            return None
        sol = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError:
        return None
    return sol[:k], sol[k]


def lagrangian_exact(a: Sequence[Sequence[object]], guard: int = DEFAULT_EXACT_GUARD) -> LagrangianResult:
    """Global maximum of ``u^T A u`` over the simplex, exactly.

    Ties between maximising supports go to the lexicographically smallest one.
    A floating-point pre-solve discards supports that are clearly infeasible or
    clearly suboptimal; everything within 1e-9 of the incumbent is decided in
    exact arithmetic.
    """
    a = sym_matrix(a)
    m = len(a)
    if m == 0:
        raise DomainError("empty matrix")
    if m > guard:
        raise CapacityError(f"dimension {m} exceeds the exact Lagrangian guard {guard}; "
                            "use lagrangian_replicator")
    af = np.array([[float(v) for v in row] for row in a])
    best_val = Fraction(0)
    best = (0,)
    best_x = (Fraction(1),)
    for support in _positive_cliques(a):
        k = len(support)
        if k == 1:
            continue
        approx = _float_candidate(af, support)
        if approx is not None:
            xs, g = approx
            if xs.min() < -1e-9 or g < float(best_val) - 1e-9:
                continue
        rows, rhs = _equal_degree_system(a, support)
        sol = solve_linear(rows, rhs)
        if sol is None:
            # singular: a maximiser with this support also lives on a proper sub-support
            continue
        xs, g = sol[:k], sol[k]
        if any(v <= 0 for v in xs):
            continue
        if g > best_val or (g == best_val and support < best):
            best_val, best, best_x = g, support, tuple(xs)
    result = LagrangianResult(best_val, best, best_x)
    return LagrangianResult(best_val, best, best_x, kkt_verified=kkt_check(a, result))


def kkt_check(a: Sequence[Sequence[object]], result: LagrangianResult) -> bool:
    """Equal weighted degrees ``result.value`` on the support, at most that off it."""
    a = sym_matrix(a)
    m = len(a)
    if len(result.support) != len(result.x) or not result.support:
        return False
    if any(v <= 0 for v in result.x) or sum(result.x) != 1:
        return False
    if any(not 0 <= i < m for i in result.support):
        return False
    u = result.vector(m)
    deg = weighted_degrees(a, u)
    on = set(result.support)
    for i in range(m):
        if i in on:
            if deg[i] != result.value:
                return False
        elif deg[i] > result.value:
            return False
    return True


def lagrangian_replicator(a: Sequence[Sequence[object]], max_iter: int = 1_000_000,
                          tol: float = 1e-13, starts: int = 0, seed: int = 0):
    """Replicator dynamics ``x <- x * (Ax) / (x^T A x)`` from the uniform vector.

    A run stops when ``max_i (Ax)_i - x^T A x <= tol``, when the objective
    gained less than ``STALL_GAIN`` over the last ``STALL_WINDOW`` steps, or
    after ``max_iter`` steps.  ``starts`` extra seeded Dirichlet starts run
    alongside and the best value is returned as ``(value, vector)`` floats.
    """
    am = np.array([[float(v) for v in row] for row in a], dtype=float)
    if am.ndim != 2 or am.shape[0] != am.shape[1] or am.shape[0] == 0:
        raise DomainError("expected a nonempty square matrix")
    m = am.shape[0]
    if not am.any():
        return 0.0, np.full(m, 1.0 / m)
    rng = np.random.default_rng(seed)
    inits = [np.full(m, 1.0 / m)] + [rng.dirichlet(np.ones(m)) for _ in range(starts)]
    xs = _replicate(am, np.array(inits), max_iter, tol)
    vals = np.einsum("ij,jk,ik->i", xs, am, xs)
    k = int(np.argmax(vals))
    return float(vals[k]), xs[k]


STALL_WINDOW = 1000
STALL_GAIN = 1e-15
POLISH_EVERY = 500


def _polish(am: np.ndarray, x: np.ndarray, tol: float):
    """Solve the equal-degree system on the largest components of ``x``.

    Supports are tried from the numerical support downwards, dropping the
    smallest component each time, since components decaying towards zero are
    the usual cause of slow convergence.  Returns the first vector that is
    feasible and passes the KKT test within ``tol``, else None.  A feasible
    vector never overshoots g(A).
    """
    order = np.argsort(-x)
    k0 = int(np.count_nonzero(x > 1e-8 * x.max()))
    for k in range(k0, 0, -1):
        supp = order[:k]
        sys_m = np.zeros((k + 1, k + 1))
        sys_m[:k, :k] = am[np.ix_(supp, supp)]
        sys_m[:k, k] = -1.0
        sys_m[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        # least squares: on a face of optimal vectors the system is singular but consistent
        sol = np.linalg.lstsq(sys_m, rhs, rcond=None)[0]
        if np.abs(sys_m @ sol - rhs).max() > tol:
            continue
        if not np.all(np.isfinite(sol)) or np.any(sol[:k] <= 0):
            continue
        y = np.zeros_like(x)
        y[supp] = sol[:k]
        ay = am @ y
        if ay.max() - y @ ay <= tol:
            return y
    return None


def _replicate(am: np.ndarray, xs: np.ndarray, max_iter: int, tol: float) -> np.ndarray:
    """Iterate every row of ``xs`` until its own stopping rule fires."""
    xs = xs.copy()
    active = np.ones(len(xs), dtype=bool)
    mark = np.full(len(xs), -np.inf)
    for it in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        x = xs[idx]
        ax = x @ am
        val = np.einsum("ij,ij->i", x, ax)
        done = (val <= 0) | (ax.max(axis=1) - val <= tol)
        if it % STALL_WINDOW == 0:
            done |= val - mark[idx] < STALL_GAIN
            mark[idx] = val
        if it and it % POLISH_EVERY == 0:
            for r in np.flatnonzero(~done):
                y = _polish(am, x[r], tol)
                if y is not None and y @ am @ y >= val[r]:
                    xs[idx[r]] = y
                    done[r] = True
        upd = ~done
        if upd.any():
            nx = x[upd] * ax[upd] / val[upd, None]
            xs[idx[upd]] = nx / nx.sum(axis=1, keepdims=True)
        active[idx[done]] = False
    return xs
