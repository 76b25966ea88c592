import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qtatoms.diagrams import (
    Cell,
    DiagramError,
    GistolCapError,
    LatticeDiagram,
    Partition,
    arm_leg,
    bh_assignment,
    corner_data,
    d_ij_diagram,
    epsilon_words,
    f_lambda,
    format_word,
    gistol_canonical,
    gistol_equivalent,
    n_stat,
    parse_cell,
    parse_word,
    partitions,
    pred_ij,
    predecessors,
    rectangles,
    row_runs_matrix,
    shadow,
    t_weight,
)
from qtatoms.qtfield import ONE, q, qt_prod, t
from qtatoms.symfunc import T_of
from strategies import partition_cell_st, partitions_st


# partitions


def test_partition_validation():
    with pytest.raises(DiagramError):
        Partition([1, 2])
    with pytest.raises(DiagramError):
        Partition([2, 0])
    assert Partition([]) == ()
    assert Partition.parse("[3,2,1]") == (3, 2, 1)
    assert Partition.parse("[]") == ()
    assert str(Partition([3, 2, 1])) == "[3,2,1]"
    with pytest.raises(DiagramError):
        Partition.parse("3,2,1")


def test_partition_counts():
    assert [len(partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert partitions(3) == [(3,), (2, 1), (1, 1, 1)]


def test_membership_french():
    mu = Partition([3, 2, 1])
    assert (0, 2) in mu and (2, 0) in mu and (1, 1) in mu
    assert (1, 2) not in mu and (3, 0) not in mu


@given(partitions_st(max_n=10))
def test_conjugate_involution(mu):
    assert mu.conjugate().conjugate() == mu
    assert mu.conjugate().size == mu.size


@given(partitions_st(max_n=10))
def test_diagram_round_trip(mu):
    d = mu.diagram()
    assert list(d) == sorted(d)
    assert len(d) == mu.size
    assert LatticeDiagram(reversed(d)) == d


def test_lattice_diagram_rejects_duplicates():
    with pytest.raises(DiagramError):
        LatticeDiagram([(0, 0), (0, 0)])
    with pytest.raises(DiagramError):
        LatticeDiagram([(-1, 0)])


def test_cell_and_word_text():
    assert parse_cell("(1,0)") == Cell(1, 0)
    assert str(Cell(2, 3)) == "(2,3)"
    assert parse_word("101") == (1, 0, 1)
    assert format_word((0, 1, 1)) == "011"
    with pytest.raises(DiagramError):
        parse_word("12")
    with pytest.raises(DiagramError):
        parse_cell("1,0")


# predecessors and shadows


def test_predecessors_examples():
    assert predecessors(Partition([3, 2, 1])) == [(3, 2), (3, 1, 1), (2, 2, 1)]
    assert predecessors(Partition([5])) == [(4,)]
    assert predecessors(Partition([2, 2])) == [(2, 1)]


def test_corners_northwest_first():
    assert Partition([3, 2, 1]).corners() == [Cell(2, 0), Cell(1, 1), Cell(0, 2)]


def test_shadow_examples():
    fr = shadow(Partition([3, 2, 1]), (1, 0))
    assert fr.tau == (2, 1)
    assert set(fr.cells) == {Cell(1, 0), Cell(1, 1), Cell(2, 0)}
    assert fr.m == 2
    assert shadow(Partition([4]), (0, 0)).tau == (4,)
    fr = shadow(Partition([3, 2, 1]), (0, 2))
    assert fr.tau == (1,) and fr.m == 1
    with pytest.raises(DiagramError):
        shadow(Partition([2]), (1, 0))


def test_corner_data_examples():
    fr = corner_data(Partition([2, 1]))
    assert fr.x == (t, q)
    assert fr.u == (t / q, ONE, q / t)
    assert fr.x0 == ONE / (t * q)
    fr = corner_data(Partition([3, 2, 1]))
    assert fr.x == (t * t, t * q, q * q)
    assert fr.u == (t * t / q, t, q, q * q / t)
    fr = corner_data(Partition([1]))
    assert fr.x == (ONE,)
    assert fr.u == (ONE / q, ONE / t)


def test_pred_ij():
    assert pred_ij(Partition([3, 2, 1]), (1, 0)) == [(3, 2), (3, 1, 1)]


@settings(max_examples=150, deadline=None)
@given(partition_cell_st(max_n=10))
def test_shadow_invariants(mc):
    mu, c = mc
    fr = shadow(mu, c)
    a, l, _, _ = arm_leg(mu, c)
    assert fr.x0 * qt_prod(fr.x) == qt_prod(fr.u)
    for s in range(fr.m):
        assert fr.u[s + 1] == fr.x[s] / t ** fr.drops[s]
        if s + 1 < fr.m:
            assert fr.u[s + 1] == fr.x[s + 1] / q ** fr.widths[s + 1]
    assert sum(fr.widths) == a + 1
    assert sum(fr.drops) == l + 1
    assert fr.size == fr.tau.size


@settings(max_examples=100, deadline=None)
@given(partitions_st(max_n=10))
def test_corner_weight_times_predecessor(mu):
    fr = corner_data(mu)
    for x, nu in zip(fr.x, fr.pred):
        assert x * T_of(nu) == T_of(mu)


# statistics


def test_arm_leg_examples():
    assert arm_leg(Partition([3, 2, 1]), (0, 0)) == (2, 2, 0, 0)
    assert arm_leg(Partition([3, 2, 1]), (0, 2)) == (0, 0, 2, 0)
    assert arm_leg(Partition([1]), (0, 0)) == (0, 0, 0, 0)


def test_weights():
    assert t_weight(Partition([2, 1]).cells()) == q * t
    assert n_stat(Partition([2, 1])) == 1
    assert n_stat(Partition([7])) == 0


@given(partitions_st(max_n=10))
def test_n_stat_is_t_degree(mu):
    T = T_of(mu)
    assert T.numerator.terms() == {(sum(c.col for c in mu.cells()), n_stat(mu)): 1}


def test_f_lambda_examples():
    assert f_lambda(Partition([6])) == 1
    assert f_lambda(Partition([2, 1])) == 2
    assert f_lambda(Partition([2, 2])) == 2


@given(partitions_st(min_n=2, max_n=10))
def test_f_lambda_recursion(lam):
    assert f_lambda(lam) == sum(f_lambda(rho) for rho in predecessors(lam))


# slide construction


def test_d_ij_small():
    d = d_ij_diagram(Partition([3, 2, 1]), (0, 0), (1, 0, 1))
    assert set(d) == {(0, 0), (1, 0), (2, 0), (0, 1)}


@given(partition_cell_st(max_n=8))
def test_d_ij_all_ones_is_shadow(mc):
    mu, c = mc
    fr = shadow(mu, c)
    assert set(d_ij_diagram(mu, c, (1,) * fr.m)) == set(fr.cells)
    assert set(d_ij_diagram(mu, c, (1,) * fr.m, dual=True)) == set(fr.cells)


def test_d_ij_large_example():
    mu = Partition([15, 15, 11, 11, 6, 6, 6, 6, 3, 3, 2, 2])
    assert shadow(mu, (0, 0)).widths == (2, 1, 3, 5, 4)
    d = d_ij_diagram(mu, (0, 0), (0, 1, 1, 0, 1))
    heights = {}
    for i, j in d:
        heights[j] = heights.get(j, 0) + 1
    # kept widths 1, 3, 4 with heights 10, 8, 2
    assert heights == {0: 10, 1: 8, 2: 8, 3: 8, 4: 2, 5: 2, 6: 2, 7: 2}


def test_d_ij_length_mismatch():
    with pytest.raises(DiagramError):
        d_ij_diagram(Partition([3, 2, 1]), (0, 0), (1, 1))


# gistols


def test_gistol_chain():
    chain = ["1|0,1,1|3", "0,1,1|3|1", "0,2,1|3|1", "1|3|0,2,1"]
    forms = {gistol_canonical(row_runs_matrix(c)) for c in chain}
    assert len(forms) == 1


def test_gistol_distinct_sizes():
    assert not gistol_equivalent(((1,),), ((1, 1),))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.randoms(use_true_random=False))
def test_gistol_permutation_invariance(h, w, rnd):
    mat = [[rnd.randint(0, 1) for _ in range(w)] for _ in range(h)]
    rows = list(range(h))
    cols = list(range(w))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    perm = [[mat[r][c] for c in cols] for r in rows]
    can = gistol_canonical(mat)
    assert gistol_canonical(perm) == can
    assert gistol_canonical(can) == can


def test_gistol_cap():
    with pytest.raises(GistolCapError):
        gistol_canonical([[1] * 9])


# cell assignment


def test_bh_examples():
    mu = Partition([3, 2, 1])
    for mode in ("direct", "recursive"):
        bh = bh_assignment(mu, mode)
        assert bh[Cell(0, 0)] == frozenset(epsilon_words(3))
        assert bh[Cell(0, 2)] == frozenset({(1, 1, 1)})
        assert bh[Cell(2, 0)] == frozenset(e for e in epsilon_words(3) if e[0])


@pytest.mark.parametrize("n", range(1, 9))
def test_bh_modes_agree(n):
    for mu in partitions(n):
        assert bh_assignment(mu, "recursive") == bh_assignment(mu, "direct")


@given(partitions_st(max_n=8))
def test_bh_counts_match_shadow(mu):
    # the all-ones word sits on every cell
    bh = bh_assignment(mu)
    full = (1,) * len(mu.corners())
    assert all(full in v for v in bh.values())
    assert sum(len(v) for v in bh.values()) >= mu.size


def test_rectangles_share_shadow_corners():
    for n in range(1, 8):
        for mu in partitions(n):
            for cells in rectangles(mu).values():
                assert len({shadow(mu, c).corners for c in cells}) == 1
            assert sum(len(v) for v in rectangles(mu).values()) == n


def test_epsilon_words():
    assert epsilon_words(2) == [(0, 1), (1, 0), (1, 1)]
    assert len(epsilon_words(4)) == 15
