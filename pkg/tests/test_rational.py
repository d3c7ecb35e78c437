from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wturan.rational import _ldl_psd_fractions, as_fraction, fmt, fmt_approx, ldl_psd, parse_fraction, solve_linear

small = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def test_parse_and_format():
    assert parse_fraction(" 3/4 ") == F(3, 4)
    assert parse_fraction("-2") == F(-2)
    assert fmt(F(6, 3)) == "2"
    assert fmt(F(-1, 5)) == "-1/5"
    assert fmt_approx(F(10, 19)) == "10/19 (≈ 0.526316)"
    for bad in ["", "1e3", "1/2/3", "1 /2", "1_0", "x"]:
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_fraction(bad)


def test_as_fraction_rejects_floats():
    assert as_fraction("1/5") == F(1, 5)
    assert as_fraction(3) == F(3)
    with pytest.raises(TypeError):
        as_fraction(0.2)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_solve_linear():
    assert solve_linear([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)]) == [F(4, 5), F(7, 5)]
    assert solve_linear([[F(1), F(2)], [F(2), F(4)]], [F(1), F(2)]) is None


def test_ldl_examples():
    assert ldl_psd([[F(1, 2), F(-1, 2)], [F(-1, 2), F(1, 2)]]) == (True, None)
    ok, info = ldl_psd([[F(1), F(0)], [F(0), F(-1, 3)]])
    assert not ok and info["pivot"] == F(-1, 3) and info["index"] == 1
    ok, info = ldl_psd([[F(0), F(1)], [F(1), F(0)]])
    assert not ok and "entry" in info
    assert ldl_psd([]) == (True, None)
    with pytest.raises(ValueError):
        ldl_psd([[F(0), F(1)], [F(0), F(0)]])


def _rand_sym(draw_rows, n):
    a = [[F(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = draw_rows[k]
            k += 1
    return a


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(small, min_size=n * (n + 1) // 2,
                                                                           max_size=n * (n + 1) // 2))))
def test_ldl_matches_eigenvalues(arg):
    n, vals = arg
    a = _rand_sym(vals, n)
    ok, _ = ldl_psd(a)
    assert ok == _ldl_psd_fractions(a)[0]
    ev = np.linalg.eigvalsh(np.array(a, dtype=float)).min()
    if ev < -1e-9:
        assert not ok
    elif ev > 1e-9:
        assert ok


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=4)))
def test_gram_matrices_are_psd(vectors):
    # L L^T is PSD, including rank-deficient cases
    n = len(vectors[0])
    a = [[sum((v[i] * v[j] for v in vectors), F(0)) for j in range(n)] for i in range(n)]
    assert ldl_psd(a)[0]
    assert _ldl_psd_fractions(a)[0]
