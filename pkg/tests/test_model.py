"""Partitions, pairing bijection, and operator representation basics."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndc.model import (
    CantorCoarsen,
    ExplicitOperator,
    FiniteMatrix,
    NormBound,
    OverlapError,
    Uniform,
    block_prefix,
    cantor_pair,
    cantor_unpair,
    entries_rect,
    entry_at,
)
from ndc.constructions import minf_sample


# --- Cantor pairing -------------------------------------------------------


def test_pairing_examples():
    assert [cantor_pair(0, j) for j in range(5)] == [0, 2, 5, 9, 14]
    assert [cantor_pair(1, j) for j in range(4)] == [1, 4, 8, 13]
    assert cantor_unpair(5) == (0, 2)


def test_pairing_matches_antidiagonal_enumeration():
    # brute-force oracle: walk anti-diagonals and number the pairs
    seen = {}
    z = 0
    for t in range(40):
        for j in range(t + 1):
            seen[(t - j, j)] = z
            z += 1
    for (i, j), expected in seen.items():
        assert cantor_pair(i, j) == expected
        assert cantor_unpair(expected) == (i, j)


@given(st.integers(min_value=0, max_value=10**12))
@settings(max_examples=60, deadline=None)
def test_pairing_bijection(z):
    i, j = cantor_unpair(z)
    assert cantor_pair(i, j) == z


# --- Partitions -----------------------------------------------------------


def test_uniform_examples():
    assert Uniform(2).block_of(5) == 2
    assert Uniform(1).block_of(7) == 7
    assert Uniform(2).index_in_block(1, 0) == 2
    assert Uniform(3).index_in_block(0, 2) == 2


def test_coarsen_examples():
    part = CantorCoarsen(Uniform(1))
    assert part.block_of(5) == 0
    assert [part.index_in_block(0, k) for k in range(4)] == [0, 2, 5, 9]
    assert [part.index_in_block(1, k) for k in range(4)] == [1, 4, 8, 13]
    assert part.block_size(0) is math.inf


PARTITIONS = [
    Uniform(1),
    Uniform(2),
    Uniform(3),
    Uniform(7),
    CantorCoarsen(Uniform(1)),
    CantorCoarsen(Uniform(3)),
]


@pytest.mark.parametrize("part", PARTITIONS, ids=str)
def test_partition_totality_round_trip(part):
    for n in range(10_000):
        b = part.block_of(n)
        k = part.ordinal_in_block(n)
        assert part.index_in_block(b, k) == n


def test_double_coarsen_round_trip():
    part = CantorCoarsen(CantorCoarsen(Uniform(1)))
    for n in range(1000):
        b = part.block_of(n)
        k = part.ordinal_in_block(n)
        assert part.index_in_block(b, k) == n


def test_double_coarsen_merge_is_increasing():
    part = CantorCoarsen(CantorCoarsen(Uniform(1)))
    for b in range(3):
        prefix = block_prefix(part, b, 40)
        assert list(prefix) == sorted(prefix)
        assert len(set(prefix)) == 40


@pytest.mark.parametrize("part", [CantorCoarsen(Uniform(1)), CantorCoarsen(Uniform(2))], ids=str)
def test_coarsening_coverage(part):
    seen = {}
    for b in range(100):
        for k in range(100):
            idx = part.index_in_block(b, k)
            assert idx not in seen, f"index {idx} claimed twice"
            seen[idx] = b
            assert part.block_of(idx) == b


def test_enumeration_strictly_increasing():
    for part in PARTITIONS:
        for b in range(5):
            size = part.block_size(b)
            top = 50 if size is math.inf else int(size)
            idx = [part.index_in_block(b, k) for k in range(top)]
            assert all(x < y for x, y in zip(idx, idx[1:]))


def test_out_of_range_ordinal():
    with pytest.raises(IndexError):
        Uniform(2).index_in_block(0, 2)
    with pytest.raises(IndexError):
        Uniform(3).index_in_block(1, 5)


def test_partition_structural_equality():
    assert Uniform(2) == Uniform(2)
    assert Uniform(2) != Uniform(3)
    assert CantorCoarsen(Uniform(1)) == CantorCoarsen(Uniform(1))
    assert CantorCoarsen(Uniform(1)) != Uniform(1)


# --- Operators ------------------------------------------------------------


def test_entry_at_examples():
    op = ExplicitOperator.from_entries([(0, 0, 3 + 4j)])
    assert entry_at(op, 0, 0) == 3 + 4j
    assert entry_at(op, 1, 1) == 0
    g = minf_sample("geometric", 0.5)
    assert entry_at(g, 1, 1) == 0.5


def test_entry_purity():
    g = minf_sample("geometric", 0.5)
    for r, c in [(0, 0), (3, 7), (12, 5)]:
        first = entry_at(g, r, c)
        second = entry_at(g, r, c)
        assert first == second
        # the vectorized grid agrees with the scalar oracle
        rect = entries_rect(g, [r], [c])
        assert rect[0, 0] == first


def test_from_entries_drops_zeros_and_rejects_duplicates():
    op = ExplicitOperator.from_entries([(0, 0, 0.0), (1, 2, 1.0)])
    assert op.entries == {(1, 2): 1 + 0j}
    with pytest.raises(OverlapError):
        ExplicitOperator.from_entries([(0, 0, 1.0), (0, 0, 2.0)])
    with pytest.raises(ValueError):
        ExplicitOperator.from_entries([(-1, 0, 1.0)])


def test_explicit_arithmetic_exact():
    a = ExplicitOperator.from_entries([(0, 1, 1 + 1j), (2, 2, 2.0)])
    b = ExplicitOperator.from_entries([(1, 3, 2.0), (2, 2, -2.0)])
    assert (a + b).entries == {(0, 1): 1 + 1j, (1, 3): 2 + 0j}
    assert (a @ b).entries == {(0, 3): (1 + 1j) * 2, (2, 2): -4 + 0j}
    assert a.adjoint().entries == {(1, 0): 1 - 1j, (2, 2): 2 + 0j}
    assert (2j * a).entries == {(0, 1): 2j * (1 + 1j), (2, 2): 4j}
    assert (a - a).entries == {}


def test_finite_matrix_validation():
    with pytest.raises(ValueError):
        FiniteMatrix(rows=(1, 0), cols=(0,), data=np.zeros((2, 1)))
    with pytest.raises(ValueError):
        FiniteMatrix(rows=(0,), cols=(0,), data=np.zeros((2, 2)))
    m = FiniteMatrix(rows=(0, 2), cols=(1,), data=np.ones((2, 1)))
    assert m.shape == (2, 1)


def test_norm_bound_validation():
    assert NormBound(1.0, None).upper is None
    assert NormBound(1.0, 2.0).known()
    with pytest.raises(ValueError):
        NormBound(-0.1, None)
    with pytest.raises(ValueError):
        NormBound(2.0, 1.0)
