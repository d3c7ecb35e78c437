from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from wturan import blowup as b
from wturan.errors import CapacityError, DomainError
from wturan.lagrangian import kkt_check, lagrangian_exact
from wturan.weighted_graph import K, WeightedCliquePattern, total_weight

HEAVY_GRID = [F(1, 10), F(1, 6), F(1, 5), F(1, 4), F(1, 3), F(2, 5), F(1, 2), F(2, 3), F(3, 4), F(1)]
AB_GRID = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]


def heavier_edges_form_matching(sol, a) -> bool:
    ends = [v for pair, w in sol.f.items() if w > a for v in pair]
    return len(ends) == len(set(ends))


def test_heavy_example_three_quarters():
    sol = b.optimize_dF(b.heavy_family(F(3, 4)), [F(3, 4), 1], t_cap=3)
    assert sol.density == F(8, 13)
    assert sol.t == 3
    assert sorted(sol.f.values()) == [F(3, 4), 1, 1]
    assert sorted(sol.x) == [F(4, 13), F(4, 13), F(5, 13)]
    assert not sol.lower_bound_only


def test_no_edges_family():
    sol = b.optimize_dF(b.ForbiddenFamily((K(2, 0),)), [F(1, 2), 1], t_cap=1)
    assert sol.density == 0
    assert sol.t == 1


@pytest.mark.parametrize("a", [F(1, 6), F(1, 5), F(1, 4), F(1, 2)])
def test_heavy_two_letter_alphabet(a):
    sol = b.optimize_dF(b.heavy_family(a), [a, 1], t_cap=3)
    assert sol.density == F(2) / (4 - a)


@pytest.mark.parametrize("a", HEAVY_GRID)
def test_heavy_matches_closed_form(a):
    sol = b.optimize_dF(b.heavy_family(a), [0, a, 1], t_cap=3)
    d, x = b.closed_form_heavy(a)
    assert sol.density == d
    assert sorted(sol.x) == sorted(x)
    assert b.solution_is_consistent(sol, b.heavy_family(a))


def test_closed_form_values():
    assert b.closed_form_heavy(F(1, 5))[0] == F(10, 19)
    assert b.closed_form_heavy(F(1, 6))[0] == F(12, 23)
    assert b.closed_form_heavy(F(1, 2))[0] == F(4, 7)
    assert b.closed_form_chubby(2, 3, F(1, 2)) == F(1, 3)
    assert b.closed_form_chubby(3, 4, 1) == F(3, 4)
    assert b.closed_form_chubby(4, 6, F(2, 3)) == F(2, 3)
    assert b.closed_form_matching(4, F(1, 3)) == F(1, 2)
    assert b.closed_form_matching(4, F(3, 4)) == F(5, 8)
    assert b.closed_form_matching(3, F(3, 4)) == F(9, 16)


@pytest.mark.parametrize("call", [
    lambda: b.closed_form_heavy(0),
    lambda: b.closed_form_heavy(F(3, 2)),
    lambda: b.closed_form_chubby(3, 2, F(1, 2)),
    lambda: b.closed_form_chubby(1, 2, F(1, 2)),
    lambda: b.closed_form_matching(1, F(1, 2)),
    lambda: b.optimize_dF(b.heavy_family(F(1, 2)), [], t_cap=3),
    lambda: b.optimize_dF(b.heavy_family(F(1, 2)), [2], t_cap=3),
    lambda: b.optimize_dF(b.heavy_family(F(1, 2)), [1], t_cap=0),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_chubby_cross_check_at_six():
    a = F(2, 3)
    sol = b.optimize_dF(b.chubby_family(4, 6, a), [a, 1], t_cap=6)
    assert sol.density == b.closed_form_chubby(4, 6, a)


@pytest.mark.parametrize("q,r", [(q, r) for q in range(2, 6) for r in range(q, 6)])
def test_chubby_grid(q, r):
    for a in AB_GRID:
        sol = b.optimize_dF(b.chubby_family(q, r, a), [0, a, 1], t_cap=r)
        assert sol.density == b.closed_form_chubby(q, r, a), (q, r, a)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_matching_grid(r):
    for a in AB_GRID:
        fam = b.matching_family(r, a)
        sol = b.optimize_dF(fam, [0, a, 1], t_cap=r)
        assert sol.density == b.closed_form_matching(r, a), (r, a)
        assert heavier_edges_form_matching(sol, a)
        assert b.solution_is_consistent(sol, fam)


def test_solutions_satisfy_equal_degrees():
    sol = b.optimize_dF(b.matching_family(4, F(3, 4)), [0, F(3, 4), 1], t_cap=4)
    res = lagrangian_exact(sol.matrix())
    assert res.value == sol.density
    assert kkt_check(sol.matrix(), res)


def test_lower_bound_flag():
    fam = b.ForbiddenFamily((K(3, F(1, 2)), K(6, 0)))
    sol = b.optimize_dF(fam, [F(1, 2), 1], t_cap=3)
    assert sol.lower_bound_only
    assert b.optimize_dF(fam, [F(1, 2), 1], t_cap=5).lower_bound_only is False


def test_r_max_derivation_and_errors():
    assert b.ForbiddenFamily((K(3, F(1, 2)), K(5, 0))).r_max == 4
    assert b.ForbiddenFamily((K(3, F(1, 2)),), r_max=7).r_max == 7
    with pytest.raises(DomainError):
        b.ForbiddenFamily((K(3, F(1, 2)),))


def test_node_budget():
    with pytest.raises(CapacityError) as exc:
        b.optimize_dF(b.matching_family(5, F(3, 4)), [0, F(3, 4), 1], t_cap=5, node_budget=50)
    best = exc.value.best
    assert best is not None and best.lower_bound_only


def _family(r, pairs):
    f = {pair: a for pair, a in zip([(0, 1), (0, 2), (1, 2)], pairs)}
    return b.ForbiddenFamily((WeightedCliquePattern(3, f), K(r + 1, 0)))


thresholds = st.sampled_from([F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)])


@settings(max_examples=25)
@given(st.tuples(thresholds, thresholds, thresholds), st.integers(2, 4),
       st.sampled_from([F(1, 4), F(1, 3), F(1, 2), F(2, 3)]))
def test_monotone_in_alphabet_and_cap(pattern, r, extra):
    fam = _family(r, pattern)
    small = b.optimize_dF(fam, [0, 1], t_cap=r - 1)
    wider = b.optimize_dF(fam, [0, extra, 1], t_cap=r - 1)
    taller = b.optimize_dF(fam, [0, extra, 1], t_cap=r)
    assert small.density <= wider.density <= taller.density
    assert b.solution_is_consistent(taller, fam)


# ---------------------------------------------------------------- constructions

def test_rho512_at_multiples_of_19():
    for k in (1, 2, 3):
        assert total_weight(b.named_construction("rho512", 19 * k)) == F(10, 19)


def test_p6_constructions():
    assert total_weight(b.named_construction("bipartite_p6", 20, p=10)) == F(1, 4)
    for m in (1, 2, 4):
        assert total_weight(b.named_construction("tripartite_p6", 3 * m, p=12)) == F(2, 9)


def test_named_limits():
    assert b.named_spec("rho512").limit_density() == F(10, 19)
    assert b.named_spec("rho614").limit_density() == F(12, 23)
    assert b.named_spec("rho411").limit_density() == F(4, 7)


@pytest.mark.parametrize("p,t,r", [(5, 2, 0), (6, 2, 1), (4, 3, 0), (7, 2, 2)])
def test_conjecture_shape_value(p, t, r):
    spec = b.named_spec("conj_ptr", p=p, t=t, r=r)
    assert spec.limit_density() == b.conjecture_value(p, t, r)


def test_construction_names():
    assert b.parse_construction_name("conj_ptr(5,2,0)") == ("conj_ptr", {"p": 5, "t": 2, "r": 0})
    assert b.parse_construction_name("bipartite_p6(10)") == ("bipartite_p6", {"p": 10})
    assert b.parse_construction_name(" rho512 ") == ("rho512", {})
    for bad in ("rho512(3)", "conj_ptr(5,2)", "conj_ptr(5,x,0)", "conj_ptr(5,2,0"):
        with pytest.raises(DomainError):
            b.parse_construction_name(bad)
    with pytest.raises(DomainError):
        b.named_spec("nope")
