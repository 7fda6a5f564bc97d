import warnings
from fractions import Fraction as F

import pytest

from wgcalc.exact import (
    SingularSystemError,
    clear_caches,
    reconstruct_rational,
    series,
    solve_aiii_table,
    solve_orthogonal_table,
    solve_unitary_table,
    wg_aiii,
    wg_aiii_class,
    wg_coe,
    wg_coe_class,
    wg_coe_direct,
    wg_orthogonal,
    wg_orthogonal_class,
    wg_orthogonal_pair,
    wg_symplectic_abs,
    wg_symplectic_abs_class,
    wg_unitary,
    wg_unitary_class,
)
from wgcalc.symcore import (
    PairPartition,
    Permutation,
    all_pair_partitions,
    all_permutations,
    parse_pair_partition,
    parse_permutation,
)


def test_unitary_closed_forms():
    for d in (2, 3, 5, 9):
        assert wg_unitary_class((1,), d) == F(1, d)
    for d in (3, 5, 9):
        assert wg_unitary_class((1, 1), d) == F(1, d * d - 1)
        assert wg_unitary_class((2,), d) == F(-1, d * (d * d - 1))
    assert wg_unitary_class((1, 1), 5) == F(1, 24)
    assert wg_unitary_class((2,), 3) == F(-1, 24)
    assert wg_unitary(parse_permutation("2,1"), 2) == F(-1, 6)
    assert wg_unitary(parse_permutation("2,3,1"), 3) == F(1, 60)


def test_orthogonal_closed_forms():
    for d in (3, 5, 8):
        assert wg_orthogonal_class((1,), d) == F(1, d)
        assert wg_orthogonal_class((1, 1), d) == F(d + 1, (d + 2) * d * (d - 1))
        assert wg_orthogonal_class((2,), d) == F(-1, (d + 2) * d * (d - 1))
    assert wg_orthogonal(parse_pair_partition("1,2|3,4"), 4) == F(5, 72)
    assert wg_orthogonal(parse_pair_partition("1,3|2,4"), 4) == F(-1, 72)


def test_coe_closed_forms():
    for d in (2, 3, 7):
        assert wg_coe_class((1,), d) == F(1, d + 1)
        assert wg_coe_class((1, 1), d) == F(d + 2, (d + 3) * (d + 1) * d)
    assert wg_coe(parse_pair_partition("1,2|3,4"), 3) == F(5, 72)


def test_symplectic_closed_forms():
    for d in (1, 2, 3):
        assert wg_symplectic_abs_class((1,), d) == F(1, 2 * d)
    for d in (2, 3):
        q = (2 * d - 2) * 2 * d * (2 * d + 1)
        assert wg_symplectic_abs_class((1, 1), d) == F(2 * d - 1, q)
    assert wg_symplectic_abs(parse_pair_partition("1,2|3,4"), 2) == F(3, 40)
    assert wg_symplectic_abs(parse_pair_partition("1,3|2,4"), 2) == F(1, 40)


def test_aiii_closed_forms():
    for d, dm in ((3, 1), (4, 2), (5, 0), (6, 6)):
        assert wg_aiii_class((1,), d, dm) == F(dm, d)
        assert wg_aiii_class((1, 1), d, dm) == F(dm * dm - 1, d * d - 1)
        assert wg_aiii_class((2,), d, dm) == F(d * d - dm * dm, d * (d * d - 1))
    assert wg_aiii(parse_permutation("2,1"), 4, 2) == F(1, 5)


def test_unitary_recurrence_residual_elementwise():
    # the recurrence that defined the solve must hold for raw elements, not
    # just the class representatives it was assembled from
    d = 7
    table = solve_unitary_table(4, d)
    for k in range(1, 5):
        for sigma in all_permutations(k):
            lhs = d * table.lookup(sigma)
            acc = F(0)
            for i in range(1, k):
                acc += table.lookup(sigma.swap_values(i, k))
            rhs = -acc
            if sigma.fixes_top():
                rhs += table.lookup(sigma.restrict_down())
            assert lhs == rhs, sigma


def test_orthogonal_recurrence_residual_elementwise():
    d = 5
    table = solve_orthogonal_table(3, d)
    for k in range(1, 4):
        for m in all_pair_partitions(k):
            lhs = d * table.lookup(m)
            acc = F(0)
            for i in range(1, 2 * k - 1):
                acc += table.lookup(m.swap_points(i, 2 * k - 1))
            rhs = -acc
            if m.has_top_block():
                rhs += table.lookup(m.pairing_down())
            assert lhs == rhs, m


def test_aiii_recurrence_residual_elementwise():
    d, dm = 5, 2
    table = solve_aiii_table(4, d, dm)
    for k in range(1, 5):
        for sigma in all_permutations(k):
            lhs = d * table.lookup(sigma)
            acc = F(0)
            for i in range(1, k):
                acc += table.lookup(sigma.swap_values(i, k))
            rhs = -acc
            if sigma.fixes_top():
                rhs += dm * table.lookup(sigma.restrict_down())
            elif sigma.top_in_two_cycle():
                rhs += table.lookup(sigma.flat())
            assert lhs == rhs, sigma


def test_coe_direct_matches_shifted_orthogonal():
    for d in (2, 3):
        for k in range(1, 4):
            for m in all_pair_partitions(k):
                assert wg_coe_direct(m, d) == wg_coe(m, d), (m, d)


def test_unitary_sign_law():
    # sign is (-1)^(absolute length) once d reaches the level
    from wgcalc.symcore import partitions

    for k in range(1, 6):
        for d in (k, k + 3):
            table = solve_unitary_table(k, d)
            for mu, val in table.values.items():
                n = sum(mu) - len(mu)
                assert val != 0
                assert (val > 0) == (n % 2 == 0), (mu, d)


def test_orthogonal_sign_law_spot():
    from wgcalc.symcore import partitions

    for k in range(1, 4):
        d = 2 * k
        table = solve_orthogonal_table(k, d)
        for mu, val in table.values.items():
            if not mu:
                continue
            n = sum(mu) - len(mu)
            assert val != 0
            assert (val > 0) == (n % 2 == 0), (mu, d)


def test_full_cycle_magnitude():
    # a k-cycle evaluates to a Catalan number over a rising product
    import math

    for k in range(1, 6):
        d = 7
        cat = math.comb(2 * (k - 1), k - 1) // k
        denom = 1
        for j in range(d - k + 1, d + k):
            denom *= j
        expected = F((-1) ** (k - 1) * cat, denom)
        assert wg_unitary_class((k,), d) == expected


def test_dimension_guards():
    with pytest.raises(ValueError):
        solve_unitary_table(3, 2)
    with pytest.raises(ValueError):
        wg_unitary_class((2, 1), 2)
    # forcing past the guard still detects true singularities exactly
    with pytest.raises(SingularSystemError) as info:
        wg_unitary_class((1, 1), 1, force=True)
    assert info.value.level == 2
    with pytest.raises(SingularSystemError):
        wg_unitary_class((1,), 0, force=True)
    assert wg_unitary_class((1, 1), 2, force=True) == F(1, 3)


def test_orthogonal_singular_dimension():
    with pytest.raises(SingularSystemError) as info:
        wg_orthogonal_class((1, 1), 1)
    assert info.value.family == "o"
    assert info.value.level == 2
    with pytest.raises(SingularSystemError):
        wg_symplectic_abs_class((1, 1), 1)
    with pytest.raises(ValueError):
        wg_symplectic_abs_class((1,), 0)


def test_aiii_signature_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        wg_aiii_class((1,), 3, 5)
    assert any("signature" in str(w.message) for w in caught)


def test_table_lookup():
    table = solve_unitary_table(3, 5)
    assert table.lookup(Permutation.identity(3)) == wg_unitary_class((1, 1, 1), 5)
    assert table.lookup(parse_permutation("2,3,1")) == wg_unitary_class((3,), 5)
    assert set(table.values) == {
        (),
        (1,),
        (1, 1),
        (2,),
        (1, 1, 1),
        (2, 1),
        (3,),
    }


def test_orthogonal_pair_reduction():
    m = parse_pair_partition("1,3|2,4")
    assert wg_orthogonal_pair(m, m, 5) == wg_orthogonal_class((1, 1), 5)
    triv = PairPartition.trivial(2)
    assert wg_orthogonal_pair(triv, m, 4) == F(-1, 72)
    with pytest.raises(ValueError):
        wg_orthogonal_pair(PairPartition.trivial(1), m, 4)


def test_series_unitary():
    t = parse_permutation("2,1")
    s = series("u", t, 3)
    assert s.leading_exponent == -3
    assert s.coefficients == (1, 1, 1, 1)
    # -1/(d^3 - d) is the geometric sum of exactly these terms
    assert s.evaluate(5) == -(F(1, 125) + F(1, 5**5) + F(1, 5**7) + F(1, 5**9))
    ident = Permutation.identity(2)
    s2 = series("u", ident, 2)
    assert s2.leading_exponent == -2
    assert s2.coefficients == (1, 1, 1)


def test_series_orthogonal_and_symplectic():
    m = parse_pair_partition("1,3|2,4")
    s = series("o", m, 2)
    assert s.leading_exponent == -3
    assert s.coefficients == (1, 1, 3)
    # truncation with alternating signs: -(1/d^3 - 1/d^4 + 3/d^5)
    assert s.evaluate(10) == -(F(1, 1000) - F(1, 10**4) + F(3, 10**5))
    one = PairPartition.trivial(1)
    sp = series("sp", one, 4)
    assert sp.leading_exponent == -1
    assert sp.coefficients == (1, 0, 0, 0, 0)
    assert sp.evaluate(3) == F(1, 6)


def test_series_aiii():
    t = parse_permutation("2,1")
    s = series("aiii", t, 2)
    assert s.leading_exponent == -1
    assert s.coefficients == ({0: 1}, {}, {0: 1, 2: -1})
    assert s.evaluate(5, 2) == F(1, 5) + F(1 - 4, 125)
    ident = Permutation.identity(2)
    s2 = series("aiii", ident, 0)
    assert s2.leading_exponent == -2
    assert s2.coefficients == ({0: -1, 2: 1},)
    with pytest.raises(ValueError):
        s2.evaluate(5)


def test_series_argument_checks():
    with pytest.raises(TypeError):
        series("u", PairPartition.trivial(2), 1)
    with pytest.raises(TypeError):
        series("o", Permutation.identity(2), 1)
    with pytest.raises(ValueError):
        series("coe", PairPartition.trivial(2), 1)
    with pytest.raises(ValueError):
        series("u", Permutation.identity(2), -1)


def test_reconstruct_closed_forms():
    rep = reconstruct_rational("u", parse_permutation("2,1"))
    assert rep.equivalent([-1], [0, -1, 0, 1])
    rep = reconstruct_rational("o", PairPartition.trivial(2))
    assert rep.equivalent([1, 1], [0, -2, 1, 1])
    rep = reconstruct_rational("coe", PairPartition.trivial(1))
    assert rep.equivalent([1], [1, 1])
    rep = reconstruct_rational("sp", PairPartition.trivial(1))
    assert rep.equivalent([1], [0, 2])
    rep = reconstruct_rational("aiii", parse_permutation("2,1"), dminus=1)
    assert rep.equivalent([1], [0, 1])
    rep = reconstruct_rational("aiii", parse_permutation("2,1"), dminus=0)
    assert rep.equivalent([0, 0, 1], [0, -1, 0, 1])
    with pytest.raises(ValueError):
        reconstruct_rational("aiii", parse_permutation("2,1"))
    with pytest.raises(ValueError):
        reconstruct_rational("x", parse_permutation("2,1"))


def test_series_matches_exact_at_large_dimension():
    # the truncation error must be governed by the first omitted term: between
    # half of it and twice it at dimensions comfortably past the level
    from wgcalc.graphs import GraphKind, count_paths

    t = parse_permutation("2,3,1")
    order = 4
    s = series("u", t, order)
    n = t.absolute_length()
    c_next = count_paths(GraphKind.UNITARY, t, n + 2 * (order + 1))
    for d in (9, 12):
        tail = abs(wg_unitary(t, d) - s.evaluate(d))
        exp = -s.leading_exponent + 2 * (order + 1)
        assert F(c_next, 2 * d**exp) < tail < F(2 * c_next, d**exp)
    m = parse_pair_partition("1,4|2,3|5,6")
    order = 5
    so = series("o", m, order)
    c_next = count_paths(GraphKind.ORTHOGONAL, m, m.absolute_length() + order + 1)
    for d in (9, 12):
        tail = abs(wg_orthogonal(m, d) - so.evaluate(d))
        exp = -so.leading_exponent + order + 1
        assert F(c_next, 2 * d**exp) < tail < F(2 * c_next, d**exp)


def test_clear_caches_roundtrip():
    v = wg_unitary_class((2, 1), 6)
    clear_caches()
    assert wg_unitary_class((2, 1), 6) == v
