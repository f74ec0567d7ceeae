"""Norm and positivity through increasing finite compressions."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import dense_of, dilation_norm_oracle, random_explicit

from ndc.compressions import (
    CompressionSchedule,
    NegativeWitness,
    NotHermitian,
    PositiveUpTo,
    compression,
    norm_via_compressions,
    positivity_via_compressions,
)
from ndc.constructions import minf_sample
from ndc.model import ExplicitOperator, Uniform

U1 = Uniform(1)
U2 = Uniform(2)


def test_schedule_validation():
    with pytest.raises(ValueError):
        CompressionSchedule(subsets=((0, 1), (0,)))
    with pytest.raises(ValueError):
        CompressionSchedule(subsets=())
    with pytest.raises(ValueError):
        CompressionSchedule(subsets=((),))
    sched = CompressionSchedule.prefixes(3)
    assert sched.subsets == ((0,), (0, 1), (0, 1, 2))


def test_compression_examples():
    ident = ExplicitOperator.from_entries([(i, i, 1.0) for i in range(4)])
    m = compression(ident, (0,), U2, 2)
    assert np.array_equal(m.data, np.eye(2, dtype=complex))

    single = ExplicitOperator.from_entries([(0, 3, 1.0)])
    zero_window = compression(single, (0,), U2, 2)
    assert not zero_window.data.any()

    both = compression(single, (0, 1), U2, 2)
    assert both.data[0, 3 - 0] == 1.0  # rows (0,1,2,3); entry at row 0, col 3


def test_norm_points_examples():
    diag = ExplicitOperator.from_entries([(0, 0, 2.0), (3, 3, 1.0)])
    points, estimate = norm_via_compressions(diag, U2, CompressionSchedule.prefixes(2))
    assert points == pytest.approx([2.0, 2.0], abs=1e-12)
    assert estimate.lower == pytest.approx(2.0, abs=1e-12)
    assert estimate.upper == pytest.approx(2.0, abs=1e-12)

    single = ExplicitOperator.from_entries([(0, 3, 1.0)])
    points, _ = norm_via_compressions(single, U2, CompressionSchedule.prefixes(2))
    assert points == pytest.approx([0.0, 1.0], abs=1e-12)


def test_norm_attainment_against_oracle():
    rng = np.random.default_rng(31)
    for _ in range(25):
        a = random_explicit(rng, max_index=15, entries=12)
        points, estimate = norm_via_compressions(a, U2, CompressionSchedule.prefixes(8))
        oracle = dilation_norm_oracle(dense_of(a, 16))
        assert abs(points[-1] - oracle) <= 1e-9
        assert estimate.upper == estimate.lower  # support covered


def test_norm_monotone_along_schedule():
    rng = np.random.default_rng(37)
    for _ in range(100):
        a = random_explicit(rng, max_index=15, entries=10)
        points, _ = norm_via_compressions(a, U2, CompressionSchedule.prefixes(8))
        for s, t in zip(points, points[1:]):
            assert s <= t + 2e-10


def test_norm_estimate_unknown_without_coverage_or_tail():
    single = ExplicitOperator.from_entries([(0, 9, 1.0)])
    _, estimate = norm_via_compressions(single, U2, CompressionSchedule.prefixes(2))
    assert estimate.upper is None

    inv = minf_sample("inverse_sum")  # no tail certificate
    _, estimate = norm_via_compressions(inv, U1, CompressionSchedule.prefixes(4))
    assert estimate.upper is None


def test_norm_estimate_with_tail():
    g = minf_sample("geometric", 0.5)
    points, estimate = norm_via_compressions(g, U1, CompressionSchedule.prefixes(24))
    assert estimate.upper is not None
    assert estimate.upper >= estimate.lower
    # the window keeps growing so the certified gap shrinks
    _, wider = norm_via_compressions(g, U1, CompressionSchedule.prefixes(40))
    assert wider.upper - wider.lower < estimate.upper - estimate.lower


def test_positivity_gram_positive():
    rng = np.random.default_rng(41)
    for _ in range(20):
        b = random_explicit(rng, max_index=9, entries=6)
        gram = b.adjoint() @ b
        verdict = positivity_via_compressions(gram, U2, CompressionSchedule.prefixes(5))
        assert isinstance(verdict, PositiveUpTo)
        assert verdict.worst_min_eig >= -1e-9


def test_positivity_negative_witness_examples():
    neg = ExplicitOperator.from_entries([(0, 0, 1.0), (1, 1, -0.5)])
    verdict = positivity_via_compressions(neg, U1, CompressionSchedule.prefixes(2))
    assert verdict == NegativeWitness(subset=(1,), min_eig=pytest.approx(-0.5, abs=1e-10))


def test_positivity_offdiagonal_witness_needs_two_blocks():
    # negativity only through coupling: the minimal witness keeps both blocks
    swap = ExplicitOperator.from_entries([(0, 1, 1.0), (1, 0, 1.0)])
    verdict = positivity_via_compressions(swap, U1, CompressionSchedule.prefixes(2))
    assert isinstance(verdict, NegativeWitness)
    assert verdict.subset == (0, 1)
    assert verdict.min_eig == pytest.approx(-1.0, abs=1e-10)


def test_positivity_not_hermitian_example():
    op = ExplicitOperator.from_entries([(0, 1, 1.0)])
    verdict = positivity_via_compressions(op, U1, CompressionSchedule.prefixes(2))
    assert verdict == NotHermitian(row=1, col=0)


def test_positivity_adjoint_symmetry():
    rng = np.random.default_rng(43)
    for _ in range(10):
        b = random_explicit(rng, max_index=9, entries=6)
        herm = b + b.adjoint()
        sched = CompressionSchedule.prefixes(5)
        first = positivity_via_compressions(herm, U2, sched)
        second = positivity_via_compressions(herm.adjoint(), U2, sched)
        assert type(first) is type(second)


def test_positivity_planted_negative_diagonal():
    rng = np.random.default_rng(47)
    for d in (0.5, 1.0, 2.0):
        b = random_explicit(rng, max_index=15, entries=10)
        gram = b.adjoint() @ b
        k = int(rng.integers(0, 16))
        planted = dict(gram.entries)
        planted[(k, k)] = complex(-d)
        op = ExplicitOperator(entries=planted)
        verdict = positivity_via_compressions(op, U2, CompressionSchedule.prefixes(8))
        assert isinstance(verdict, NegativeWitness)
        assert U2.block_of(k) in verdict.subset
        assert verdict.min_eig <= -d + 1e-9


def test_positivity_monotone_compressions():
    rng = np.random.default_rng(53)
    for _ in range(30):
        a = random_explicit(rng, max_index=15, entries=10)
        sched = CompressionSchedule.prefixes(8)
        norms = [
            float(np.linalg.norm(compression(a, s, U2, 64).data, ord=2))
            for s in sched.subsets
        ]
        for small, large in zip(norms, norms[1:]):
            assert small <= large + 2e-10
