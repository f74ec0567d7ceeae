"""Norm and positivity of an operator through increasing finite compressions.

For a finite block set S let p = sum of the corresponding projections.  The
compression pap, restricted to a truncation window, is a finite matrix; its
spectral norm never exceeds the operator norm and, along an increasing
schedule of subsets, recovers it in the limit.  Likewise a is positive iff
every such compression is, which at finite horizons gives sound negativity
witnesses and positive-so-far evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    BasisIndex,
    BlockId,
    ExplicitOperator,
    FiniteMatrix,
    GeneratedOperator,
    NormBound,
    OperatorRep,
    Partition,
    block_prefix,
    entries_rect,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    hermiticity_violation,
    min_eig_hermitian,
    spectral_norm,
)
from .decomposition import DEFAULT_DEPTH, _covering_depth, _realize


@dataclass(frozen=True)
class CompressionSchedule:
    """Increasing finite block subsets plus the per-block truncation depth."""

    subsets: tuple[tuple[BlockId, ...], ...]
    depth: int = DEFAULT_DEPTH

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError(f"depth must be positive, got {self.depth}")
        if not self.subsets:
            raise ValueError("schedule needs at least one subset")
        norm = tuple(tuple(sorted(set(s))) for s in self.subsets)
        object.__setattr__(self, "subsets", norm)
        for s in norm:
            if not s:
                raise ValueError("subsets must be non-empty")
            if s[0] < 0:
                raise ValueError(f"negative block id in subset {s}")
        for a, b in zip(norm, norm[1:]):
            if not set(a) < set(b):
                raise ValueError(f"subsets must be strictly increasing: {a} !< {b}")

    @staticmethod
    def prefixes(levels: int, depth: int = DEFAULT_DEPTH) -> "CompressionSchedule":
        """The default exhaustion {0}, {0,1}, ..., {0..levels-1}."""
        if levels < 1:
            raise ValueError(f"levels must be >= 1, got {levels}")
        return CompressionSchedule(
            subsets=tuple(tuple(range(n + 1)) for n in range(levels)), depth=depth
        )


@dataclass(frozen=True)
class NotHermitian:
    row: BasisIndex
    col: BasisIndex


@dataclass(frozen=True)
class NegativeWitness:
    subset: tuple[BlockId, ...]
    min_eig: float


@dataclass(frozen=True)
class PositiveUpTo:
    """Every scheduled compression was positive; evidence, not proof."""

    n_checked: int
    worst_min_eig: float


PositivityVerdict = NotHermitian | NegativeWitness | PositiveUpTo


def _window_indices(
    op: OperatorRep, part: Partition, subset: tuple[BlockId, ...], depth: int
) -> tuple[BasisIndex, ...]:
    idx: list[int] = []
    for b in subset:
        idx.extend(block_prefix(part, b, depth))
    return tuple(sorted(idx))


def compression(
    op: OperatorRep,
    subset: "tuple[BlockId, ...] | list[BlockId] | set[BlockId]",
    part: Partition,
    depth: int = DEFAULT_DEPTH,
) -> FiniteMatrix:
    """The compression pap over the first ``depth`` indices of each block in subset."""
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise ValueError("subset must be non-empty")
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    op = _realize(op)
    idx = _window_indices(op, part, subset, depth)
    data = entries_rect(op, idx, idx)
    return FiniteMatrix(rows=idx, cols=idx, data=data)


def _effective_schedule_depth(
    op: OperatorRep, part: Partition, sched: CompressionSchedule
) -> int:
    if isinstance(op, ExplicitOperator):
        return _covering_depth(op, part, sched.depth)
    return sched.depth


def _min_index_outside(window: tuple[BasisIndex, ...]) -> BasisIndex:
    inside = set(window)
    n = 0
    while n in inside:
        n += 1
    return n


def norm_via_compressions(
    op: OperatorRep,
    part: Partition,
    sched: CompressionSchedule,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> tuple[list[float], NormBound]:
    """Compression norms along the schedule plus a certified norm estimate.

    The points are nondecreasing up to kernel error.  The estimate's lower
    bound is the last point; the upper bound is the last point for an
    explicit operator whose support the final window covers, last point plus
    the tail bound when the operator carries one, and unknown otherwise.
    """
    op = _realize(op)
    depth = _effective_schedule_depth(op, part, sched)
    points: list[float] = []
    final_window: tuple[BasisIndex, ...] = ()
    for subset in sched.subsets:
        window = _window_indices(op, part, subset, depth)
        data = entries_rect(op, window, window)
        if not np.any(data):
            points.append(0.0)
        else:
            points.append(spectral_norm(FiniteMatrix(window, window, data), tol))
        final_window = window
    last = points[-1]
    upper: float | None = None
    if isinstance(op, ExplicitOperator):
        if op.support() <= set(final_window):
            upper = last
    elif op.tail is not None:
        upper = last + op.tail(_min_index_outside(final_window))
    if upper is not None and upper < last:
        upper = last
    return points, NormBound(lower=last, upper=upper)


def _shrink_witness(
    matrix: np.ndarray,
    window: tuple[BasisIndex, ...],
    part: Partition,
    subset: tuple[BlockId, ...],
    slack: float,
    tol: Tolerance,
) -> tuple[tuple[BlockId, ...], float]:
    """Greedily drop blocks while the compression stays negative.

    Returns an inclusion-minimal witness subset (within the schedule's
    failing subset) and its minimum eigenvalue.
    """
    positions = {b: [t for t, idx in enumerate(window) if part.block_of(idx) == b] for b in subset}

    def eig_of(blocks: tuple[BlockId, ...]) -> float:
        sel = sorted(t for b in blocks for t in positions[b])
        sub = matrix[np.ix_(sel, sel)]
        sub = 0.5 * (sub + sub.conj().T)
        return min_eig_hermitian(sub, tol)

    current = tuple(subset)
    current_eig = eig_of(current)
    changed = True
    while changed and len(current) > 1:
        changed = False
        for b in current:
            trial = tuple(x for x in current if x != b)
            trial_eig = eig_of(trial)
            if trial_eig < -slack:
                current, current_eig = trial, trial_eig
                changed = True
                break
    return current, current_eig


def positivity_via_compressions(
    op: OperatorRep,
    part: Partition,
    sched: CompressionSchedule,
    slack: float = 1e-9,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> PositivityVerdict:
    """Positivity screening along the compression schedule.

    NotHermitian reports the first conjugate-symmetry violation in the
    largest scheduled window.  NegativeWitness reports an inclusion-minimal
    block subset (shrunk from the first failing scheduled subset) whose
    compression has an eigenvalue below -slack.  PositiveUpTo is evidence
    only: positivity of infinitely supported operators needs every finite
    subset, which no finite run exhausts.
    """
    if slack <= 0:
        raise ValueError(f"slack must be positive, got {slack}")
    op = _realize(op)
    depth = _effective_schedule_depth(op, part, sched)
    final_subset = sched.subsets[-1]
    final_window = _window_indices(op, part, final_subset, depth)
    final_matrix = entries_rect(op, final_window, final_window)
    violation = hermiticity_violation(final_matrix, slack)
    if violation is not None:
        r, c, _ = violation
        return NotHermitian(row=final_window[r], col=final_window[c])

    pos_in_final = {idx: t for t, idx in enumerate(final_window)}
    worst = math.inf
    for subset in sched.subsets:
        window = _window_indices(op, part, subset, depth)
        sel = [pos_in_final[idx] for idx in window]
        sub = final_matrix[np.ix_(sel, sel)]
        sub = 0.5 * (sub + sub.conj().T)
        mu = min_eig_hermitian(sub, tol)
        worst = min(worst, mu)
        if mu < -slack:
            blocks, mu_min = _shrink_witness(
                final_matrix, final_window, part, subset, slack, tol
            )
            return NegativeWitness(subset=blocks, min_eig=mu_min)
    return PositiveUpTo(n_checked=len(sched.subsets), worst_min_eig=worst)
