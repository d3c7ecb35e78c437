import random
from fractions import Fraction as F
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from wturan.errors import CapacityError, DomainError
from wturan.weighted_graph import (BlowupSpec, CliqueWeighting, K, WeightedCliquePattern, WeightedGraph,
                                   assign_clique_weights, contains_pattern, edge_clique_orders, make_blowup,
                                   make_turan_graph, part_sizes, rescale, total_weight, turan_weight, unweighted)

THREE_PART = BlowupSpec(3, {(0, 1): F(1, 5), (0, 2): 1, (1, 2): 1}, (F(5, 19), F(5, 19), F(9, 19)))
WT = CliqueWeighting.turan()


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return unweighted(10, outer + spokes + inner)


def random_graph(rng, n, p):
    return unweighted(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def brute_edge_orders(g):
    """Largest clique through each edge by scanning all vertex subsets."""
    adj = {e for e in g.weights}
    best = {}
    for k in range(2, g.n + 1):
        for s in combinations(range(g.n), k):
            if all(e in adj for e in combinations(s, 2)):
                for e in combinations(s, 2):
                    best[e] = k
    return best


def brute_contains(g, pat):
    for phi in permutations(range(g.n), pat.r):
        if all(g.weight(phi[i], phi[j]) > a for (i, j), a in pat.f.items()):
            return True
    return False


def test_total_weight_examples():
    assert total_weight(WeightedGraph(7)) == 0
    assert total_weight(WeightedGraph(2, {(0, 1): 1})) == F(1, 2)
    g = make_blowup(THREE_PART, 19)
    assert part_sizes(THREE_PART.x, 19) == [5, 5, 9]
    assert total_weight(g) == F(190, 361) == F(10, 19)


def test_graph_validation():
    with pytest.raises(DomainError):
        WeightedGraph(3, {(1, 1): 1})
    with pytest.raises(DomainError):
        WeightedGraph(3, {(0, 1): F(3, 2)})
    with pytest.raises(DomainError):
        WeightedGraph(3, {(0, 1): 1, (1, 0): 1})
    with pytest.raises(DomainError):
        WeightedGraph(2, {(0, 2): 1})
    assert WeightedGraph(3, {(0, 1): 0}) == WeightedGraph(3)


def test_turan_weight_and_rescale():
    assert turan_weight(2) == 1
    assert turan_weight(3) == F(3, 4)
    assert turan_weight(4) == F(2, 3)
    with pytest.raises(DomainError):
        turan_weight(1)
    for r in range(2, 12):
        assert rescale(WT, r) == 1
    assert rescale(CliqueWeighting({3: F(3, 4)}), 3) == 1
    assert rescale(CliqueWeighting({4: F(1, 2)}), 4) == F(3, 4)
    with pytest.raises(DomainError):
        rescale(WT, 1)


def test_clique_weighting_tails():
    cw = CliqueWeighting({2: F(1, 2), 4: F(1, 3)})
    assert cw(3) == F(1, 2) and cw(4) == F(1, 3) and cw(9) == F(1, 3)
    mixed = CliqueWeighting({2: F(1, 2)}, tail="turan")
    assert mixed(3) == F(3, 4)


def test_assign_clique_weights_examples():
    t63 = assign_clique_weights(make_turan_graph(6, 3), WT)
    assert set(t63.weights.values()) == {F(3, 4)}
    assert total_weight(t63) == F(1, 2)
    k5 = assign_clique_weights(make_turan_graph(5, 5), WT)
    assert set(k5.weights.values()) == {F(5, 8)}
    pg = petersen()
    # oracle: no triangle by direct scan
    assert not any(all(e in pg.weights for e in combinations(s, 2)) for s in combinations(range(10), 3))
    pw = assign_clique_weights(pg, WT)
    assert set(pw.weights.values()) == {F(1)}
    assert total_weight(pw) == F(3, 10)


def test_clique_guard():
    with pytest.raises(CapacityError):
        edge_clique_orders(make_turan_graph(8, 2), guard=7)


@given(st.integers(0, 2 ** 32), st.integers(2, 9), st.floats(0.1, 0.9))
def test_edge_clique_orders_match_bruteforce(seed, n, p):
    g = random_graph(random.Random(seed), n, p)
    assert edge_clique_orders(g) == brute_edge_orders(g)


@given(st.integers(0, 2 ** 32), st.integers(2, 9))
def test_clique_weights_relabel_invariant(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n, 0.6)
    perm = list(range(n))
    rng.shuffle(perm)
    assert assign_clique_weights(g.relabel(perm), WT) == assign_clique_weights(g, WT).relabel(perm)


def test_contains_pattern_examples():
    g = make_blowup(THREE_PART, 19)
    assert contains_pattern(g, K(3, 1)) is None
    assert contains_pattern(g, K(3, F(1, 5))) is None
    pat = WeightedCliquePattern(3, {(0, 1): F(1, 10), (0, 2): F(1, 2), (1, 2): F(1, 2)})
    w = contains_pattern(g, pat)
    assert w is not None
    assert all(g.weight(w[i], w[j]) > a for (i, j), a in pat.f.items())
    assert contains_pattern(WeightedGraph(1), K(1)) == (0,)
    assert contains_pattern(WeightedGraph(0), K(1)) is None


weights = st.sampled_from([F(0), F(1, 5), F(1, 2), F(4, 5), F(1)])


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(weights, min_size=n * (n - 1) // 2,
                                                                           max_size=n * (n - 1) // 2))),
       st.integers(1, 4), st.lists(st.sampled_from([F(0), F(1, 5), F(1, 2)]), min_size=6, max_size=6),
       st.integers(0, 14))
def test_contains_pattern_matches_bruteforce_and_is_monotone(gn, r, ths, bump):
    n, ws = gn
    g = WeightedGraph(n, dict(zip(combinations(range(n), 2), ws)))
    pat = WeightedCliquePattern(r, dict(zip(combinations(range(r), 2), ths)))
    found = contains_pattern(g, pat)
    assert (found is not None) == brute_contains(g, pat)
    if found is not None and n >= 2:
        pairs = list(combinations(range(n), 2))
        e = pairs[bump % len(pairs)]
        up = dict(g.weights)
        up[e] = F(1)
        assert contains_pattern(WeightedGraph(n, up), pat) is not None


def test_blowup_examples():
    c4 = make_turan_graph(4, 2)
    assert sorted(c4.weights) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    rho614_spec = BlowupSpec(3, {(0, 1): F(1, 6), (0, 2): 1, (1, 2): 1}, (F(6, 23), F(6, 23), F(11, 23)))
    g = make_blowup(rho614_spec, 23)
    assert part_sizes(rho614_spec.x, 23) == [6, 6, 11]
    assert total_weight(g) == F(12, 23)
    bip = BlowupSpec(2, {(0, 1): F(5, 10)}, (F(1, 2), F(1, 2)))
    assert total_weight(make_blowup(bip, 20)) == F(1, 4)
    with pytest.raises(DomainError):
        BlowupSpec(2, {}, (F(1, 3), F(1, 3)))


def test_turan_graphs_are_extremal_for_turan_weights():
    for k in range(2, 7):
        for n in (k, 2 * k, 3 * k):
            assert total_weight(assign_clique_weights(make_turan_graph(n, k), WT)) == F(1, 2)


@given(st.integers(0, 2 ** 32), st.integers(1, 16), st.floats(0.05, 0.95))
def test_turan_weight_bound_on_random_graphs(seed, n, p):
    g = random_graph(random.Random(seed), n, p)
    assert total_weight(assign_clique_weights(g, WT)) <= F(1, 2)
