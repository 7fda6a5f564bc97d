import itertools
import random

import pytest

from wgcalc.graphs import (
    DASHED,
    SOLID,
    SQUIGGLED,
    GraphKind,
    MonotoneFactorization,
    Path,
    PathLimitExceeded,
    count_paths,
    count_paths_refined,
    dashed_target,
    enumerate_monotone_factorizations,
    enumerate_paths,
    factorization_to_path,
    format_path,
    path_to_factorization,
    solid_neighbors,
    squiggled_target,
)
from wgcalc.symcore import PairPartition, Permutation, all_pair_partitions

U = GraphKind.UNITARY
O = GraphKind.ORTHOGONAL
A3 = GraphKind.AIII

EXAMPLE_PERM = Permutation((4, 1, 5, 3, 2))
LOOPY = PairPartition(((1, 3), (2, 4)))


def test_solid_neighbors_unitary():
    steps = solid_neighbors(U, Permutation((2, 1)))
    assert [s.target for s in steps] == [Permutation((1, 2))]
    assert len(solid_neighbors(U, EXAMPLE_PERM)) == 4
    assert solid_neighbors(U, Permutation((1,))) == ()
    assert solid_neighbors(U, Permutation(())) == ()


def test_solid_neighbors_orthogonal_with_self_loop():
    steps = solid_neighbors(O, LOOPY)
    assert len(steps) == 2
    # index 1 is a genuine self-loop, index 2 exits to the trivial pairing
    assert steps[0].target == LOOPY
    assert steps[1].target == PairPartition.trivial(2)
    e2 = PairPartition.trivial(2)
    targets = [s.target for s in solid_neighbors(O, e2)]
    assert targets == [PairPartition(((1, 4), (2, 3))), LOOPY]
    assert solid_neighbors(O, PairPartition.trivial(1)) == ()


def test_dashed_targets():
    assert dashed_target(U, Permutation((2, 1, 3))) == Permutation((2, 1))
    assert dashed_target(U, Permutation((2, 1))) is None
    assert dashed_target(O, PairPartition.trivial(2)) == PairPartition.trivial(1)
    assert dashed_target(O, LOOPY) is None
    assert dashed_target(U, Permutation(())) is None


def test_squiggled_targets():
    assert squiggled_target(A3, Permutation((4, 5, 1, 3, 2))) == Permutation((3, 1, 2))
    assert squiggled_target(A3, Permutation((2, 3, 1))) is None
    with pytest.raises(ValueError):
        squiggled_target(U, Permutation((2, 1)))


def test_count_paths_unitary_small():
    s = Permutation((2, 1))
    assert [count_paths(U, s, l) for l in (1, 2, 3)] == [1, 0, 1]
    assert count_paths(U, Permutation.identity(1), 0) == 1
    assert count_paths(U, EXAMPLE_PERM, 4) == 14


def test_count_paths_orthogonal_small():
    assert [count_paths(O, LOOPY, l) for l in (1, 2, 3)] == [1, 1, 3]
    e2 = PairPartition.trivial(2)
    assert [count_paths(O, e2, l) for l in (1, 2)] == [0, 2]


def test_loop_then_exit_is_the_unique_two_step_path():
    paths = enumerate_paths(O, LOOPY, 2)
    assert len(paths) == 1
    (p,) = paths
    assert p.nodes()[1] == LOOPY  # first step traverses the self-loop
    assert p.solid_transpositions() == ((1, 3), (2, 3))


def test_enumeration_matches_counts():
    rng = random.Random(60)
    perms = [Permutation(p) for p in itertools.permutations(range(1, 5))]
    for _ in range(12):
        s = rng.choice(perms)
        l = rng.randrange(0, 6)
        assert len(enumerate_paths(U, s, l)) == count_paths(U, s, l)
    for m in all_pair_partitions(2):
        for l in range(5):
            assert len(enumerate_paths(O, m, l)) == count_paths(O, m, l)
    for s in [Permutation((2, 1)), Permutation((2, 3, 1)), Permutation((1, 3, 2))]:
        for l in range(5):
            assert len(enumerate_paths(A3, s, l)) == count_paths(A3, s, l)


def test_single_path_identity_level_one():
    paths = enumerate_paths(U, Permutation((1,)), 0)
    assert len(paths) == 1
    assert [s.kind for s in paths[0].steps] == [DASHED]


def test_path_limit():
    with pytest.raises(PathLimitExceeded):
        enumerate_paths(U, EXAMPLE_PERM, 4, limit=5)
    assert len(enumerate_paths(U, EXAMPLE_PERM, 4, limit=14)) == 14


def test_parity_unitary():
    # solid steps change the absolute length by one, dashed keep it, so
    # every count at the wrong parity vanishes
    for k in range(1, 6):
        for imgs in itertools.permutations(range(1, k + 1)):
            s = Permutation(imgs)
            n = s.absolute_length()
            for l in range(n + 7):
                if (l - n) % 2 == 1:
                    assert count_paths(U, s, l) == 0


def test_dashed_step_budget():
    for s in [EXAMPLE_PERM, Permutation((2, 1, 3))]:
        for p in enumerate_paths(U, s, s.absolute_length() + 2):
            assert p.count(DASHED) == s.level
    for m in all_pair_partitions(2):
        for l in range(4):
            for p in enumerate_paths(O, m, l):
                assert p.count(DASHED) == m.level
    for s in [Permutation((2, 1, 3)), Permutation((2, 3, 1)), Permutation((3, 2, 1))]:
        for l in range(5):
            for p in enumerate_paths(A3, s, l):
                assert p.count(DASHED) + 2 * p.count(SQUIGGLED) == s.level


def test_refined_counts_for_transposition():
    s = Permutation((2, 1))
    for l0 in range(6):
        for l1 in (0, 1, 2):
            expect = 0
            if l1 == 0 and l0 % 2 == 0:
                expect = 1  # even ping-pong then the squiggled exit
            if l1 == 2 and l0 % 2 == 1:
                expect = 1  # odd ping-pong then two dashed steps
            assert count_paths_refined(s, l0, l1) == expect


def test_length_profile_along_paths():
    for p in enumerate_paths(U, EXAMPLE_PERM, 6):
        nodes = p.nodes()
        for a, b, step in zip(nodes, nodes[1:], p.steps):
            if step.kind == SOLID:
                assert abs(b.absolute_length() - a.absolute_length()) == 1
            else:
                assert b.absolute_length() == a.absolute_length()
    for m in all_pair_partitions(3):
        for p in enumerate_paths(O, m, m.absolute_length() + 1):
            nodes = p.nodes()
            for a, b, step in zip(nodes, nodes[1:], p.steps):
                if step.kind == SOLID:
                    assert abs(b.absolute_length() - a.absolute_length()) <= 1


def test_known_factorization_of_five_cycle():
    f = MonotoneFactorization(U, 5, ((3, 5), (2, 5), (2, 4), (1, 2)))
    assert f.target() == EXAMPLE_PERM
    path = factorization_to_path(f)
    assert format_path(path) == (
        "4,1,5,3,2 -(3,5)-> 4,1,3,5,2 -(2,5)-> 4,1,3,2,5 => 4,1,3,2 "
        "-(2,4)-> 2,1,3,4 => 2,1,3 => 2,1 -(1,2)-> 1,2 => 1 => ∅"
    )
    assert path in enumerate_paths(U, EXAMPLE_PERM, 4)
    assert path_to_factorization(path) == f


def test_bijection_round_trip_unitary():
    perms = [Permutation(p) for p in itertools.permutations(range(1, 4))]
    for s in perms:
        for l in range(5):
            paths = enumerate_paths(U, s, l)
            facts = {path_to_factorization(p) for p in paths}
            assert len(facts) == len(paths)
            for f in facts:
                assert f.target() == s
                assert factorization_to_path(f) in paths
    # and the reverse count through brute force
    by_target = {}
    for l in range(5):
        for f in enumerate_monotone_factorizations(U, 3, l):
            by_target.setdefault((f.target(), l), set()).add(f)
    for s in perms:
        for l in range(5):
            assert len(by_target.get((s, l), set())) == count_paths(U, s, l)


def test_bijection_round_trip_orthogonal():
    for m in all_pair_partitions(2):
        for l in range(5):
            paths = enumerate_paths(O, m, l)
            facts = [path_to_factorization(p) for p in paths]
            assert len(set(facts)) == len(paths)
            for f, p in zip(facts, paths):
                assert f.target() == m
                assert factorization_to_path(f) == p
    by_target = {}
    for l in range(5):
        for f in enumerate_monotone_factorizations(O, 2, l):
            by_target.setdefault((f.target(), l), set()).add(f)
    for m in all_pair_partitions(2):
        for l in range(5):
            assert len(by_target.get((m, l), set())) == count_paths(O, m, l)


def test_factorization_validation():
    with pytest.raises(ValueError):
        MonotoneFactorization(U, 3, ((1, 2), (1, 3)))  # increasing tops
    with pytest.raises(ValueError):
        MonotoneFactorization(O, 2, ((1, 2),))  # even second component
    with pytest.raises(ValueError):
        MonotoneFactorization(A3, 3, ())
    with pytest.raises(ValueError):
        path_to_factorization(Path(A3, Permutation((1,)), ()))


def test_every_monotone_sequence_realizes_a_path():
    # factors only move points at or below their own top, so the rebuild
    # walk never gets stuck: each sequence is some path's annotation
    for l in range(4):
        for f in enumerate_monotone_factorizations(U, 3, l):
            p = factorization_to_path(f)
            assert p.start == f.target()
            assert path_to_factorization(p) == f


def test_orthogonal_duplicate_target_report():
    # whether distinct solid indices may share a non-loop target: record what
    # the small graphs actually do
    collisions = []
    for k in (2, 3):
        for m in all_pair_partitions(k):
            seen = {}
            for step in solid_neighbors(O, m):
                if step.target != m:
                    seen.setdefault(step.target, []).append(step.index)
            for target, idxs in seen.items():
                if len(idxs) > 1:
                    collisions.append((m, target, idxs))
    # observed on every level checked so far: non-loop targets are hit once
    assert collisions == []
