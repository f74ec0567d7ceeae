"""Block extraction, hook norms, membership verdicts, and partial-sum gaps.

Fix a partition {B_i} of the basis indices.  The i-th *hook* (or strip) of an
operator a is the L-shaped border of the i-th square partial block sum:

    H_i = sum_{k<i} (a_ki + a_ik) + a_ii,

where a_kl is the (k, l) block of a.  Membership in the vanishing-hook set
requires ||H_i|| -> 0; the operations here compute certified lower/upper
bounds for hook norms at finite truncation and turn certificates carried by
generated operators into membership verdicts.

Truncation convention: ``depth`` caps the number of indices taken per block.
Explicit operators are always evaluated on windows extended to cover their
whole support, so their bounds are exact and depth-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    BasisIndex,
    BlockId,
    ExplicitOperator,
    FiniteMatrix,
    GeneratedOperator,
    NormBound,
    OperatorRep,
    OverlapError,
    Partition,
    as_explicit,
    block_prefix,
    entries_rect,
    entry_at,
)
from .numerics import DEFAULT_TOLERANCE, Tolerance, spectral_norm

DEFAULT_DEPTH = 64


def _realize(op: OperatorRep) -> OperatorRep:
    """Use the exact finite form when a generator is secretly finite."""
    exp = as_explicit(op)
    return op if exp is None else exp


@dataclass(frozen=True)
class HookPoint:
    """One point of the hook-norm sequence with its certified bound."""

    i: BlockId
    bound: NormBound
    depth: int


@dataclass(frozen=True)
class CertifiedIn:
    """Hooks provably tend to 0; beyond ``horizon`` they are below the cutoff."""

    horizon: BlockId
    tail_certificate: str


@dataclass(frozen=True)
class CertifiedOut:
    """An infinite family of hooks stays >= eps; sampled evidence attached."""

    eps: float
    witness: tuple[tuple[int, BasisIndex, BasisIndex, float], ...]


@dataclass(frozen=True)
class Empirical:
    """No certificate applied; reports the observed tail behaviour only."""

    status: str  # "in" | "out"
    horizon: BlockId
    max_tail_hook_lower: float


MembershipVerdict = CertifiedIn | CertifiedOut | Empirical


# ---------------------------------------------------------------------------
# Windows


def _covering_depth(op: ExplicitOperator, part: Partition, depth: int) -> int:
    d = depth
    for index in op.support():
        d = max(d, part.ordinal_in_block(index) + 1)
    return d


def _effective_depth(op: OperatorRep, part: Partition, depth: int) -> int:
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    if isinstance(op, ExplicitOperator):
        return _covering_depth(op, part, depth)
    return depth


def peirce_block(
    op: OperatorRep, part: Partition, i: BlockId, j: BlockId, depth: int
) -> FiniteMatrix:
    """The (i, j) block of ``op``, truncated to ``depth`` indices per block."""
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    op = _realize(op)
    rows = block_prefix(part, i, depth)
    cols = block_prefix(part, j, depth)
    data = entries_rect(op, rows, cols)
    return FiniteMatrix(rows=rows, cols=cols, data=data)


def reconstruct(
    blocks: list[tuple[BlockId, BlockId, FiniteMatrix]],
) -> ExplicitOperator:
    """Union of block matrices as an explicit operator.

    The block positions must be pairwise disjoint; zero entries inside the
    blocks are dropped, so decompose-then-reconstruct over a support-covering
    block set is the identity on explicit operators.
    """
    entries: dict[tuple[int, int], complex] = {}
    claimed: set[tuple[int, int]] = set()
    for _, _, mat in blocks:
        for a, r in enumerate(mat.rows):
            for b, c in enumerate(mat.cols):
                pos = (r, c)
                if pos in claimed:
                    raise OverlapError(f"blocks overlap at position {pos}")
                claimed.add(pos)
                v = complex(mat.data[a, b])
                if v != 0:
                    entries[pos] = v
    return ExplicitOperator(entries=entries)


def _strip_entries(
    op: OperatorRep, part: Partition, i: BlockId, depth: int
) -> dict[tuple[int, int], complex]:
    """Nonzero entries of the depth-truncated strip H_i."""
    if isinstance(op, ExplicitOperator):
        # Covering depth makes the truncated strip the exact strip.
        out = {}
        for (r, c), v in op.entries.items():
            if max(part.block_of(r), part.block_of(c)) == i:
                out[(r, c)] = v
        return out
    out = {}
    pref_i = block_prefix(part, i, depth)
    for k in range(i + 1):
        pref_k = block_prefix(part, k, depth)
        rect = entries_rect(op, pref_i, pref_k)  # block (i, k)
        for a, b in zip(*np.nonzero(rect)):
            out[(pref_i[a], pref_k[b])] = complex(rect[a, b])
        if k < i:
            rect = entries_rect(op, pref_k, pref_i)  # block (k, i)
            for a, b in zip(*np.nonzero(rect)):
                out[(pref_k[a], pref_i[b])] = complex(rect[a, b])
    return out


def _sparse_norm(
    entries: dict[tuple[int, int], complex], tol: Tolerance
) -> float:
    """Spectral norm of a sparse entry dict, densified over its used indices."""
    if not entries:
        return 0.0
    rows = sorted({r for r, _ in entries})
    cols = sorted({c for _, c in entries})
    rpos = {r: a for a, r in enumerate(rows)}
    cpos = {c: b for b, c in enumerate(cols)}
    data = np.zeros((len(rows), len(cols)), dtype=np.complex128)
    for (r, c), v in entries.items():
        data[rpos[r], cpos[c]] = v
    return spectral_norm(FiniteMatrix(tuple(rows), tuple(cols), data), tol)


def _min_uncovered_index(part: Partition, i: BlockId, depth: int) -> BasisIndex | None:
    """Smallest basis index of blocks 0..i outside the depth prefix, if any."""
    best: int | None = None
    for k in range(i + 1):
        size = part.block_size(k)
        if size is math.inf or size > depth:
            candidate = part.index_in_block(k, depth)
            if best is None or candidate < best:
                best = candidate
    return best


def _witness_for_hook(
    op: GeneratedOperator, part: Partition, i: BlockId
) -> tuple[int, int, float] | None:
    """Verified witness entry inside strip i, as (row, col, modulus), if any.

    The family is sampled in order until its (strictly increasing) hook
    indices pass i; each candidate is checked against the queried partition
    and the entry oracle, so families built for other partitions drop out.
    """
    fam = op.witness
    if fam is None:
        return None
    previous = -1
    for n in range(i + 2):
        hook_index, row, col = fam.member(n)
        if hook_index <= previous:
            return None  # malformed family; refuse to certify
        previous = hook_index
        if hook_index < i:
            continue
        if hook_index > i:
            return None
        if max(part.block_of(row), part.block_of(col)) != i:
            return None
        modulus = abs(entry_at(op, row, col))
        if modulus < fam.delta * (1.0 - 1e-12):
            return None
        return row, col, modulus
    return None


def _certified_bound(
    op: OperatorRep,
    part: Partition,
    i: BlockId,
    depth: int,
    trunc_lower: float,
) -> NormBound:
    """Combine the truncation norm with whatever certificates apply to hook i."""
    if isinstance(op, ExplicitOperator):
        return NormBound(lower=trunc_lower, upper=trunc_lower)
    lower = trunc_lower
    witness = _witness_for_hook(op, part, i)
    if witness is not None:
        lower = max(lower, witness[2])
    uppers: list[float] = []
    if op.strip is not None and op.strip.partition == part:
        uppers.append(op.strip(i))
    uncovered = _min_uncovered_index(part, i, depth)
    if uncovered is None:
        # every block of the strip fits inside the window: the strip is exact
        uppers.append(trunc_lower)
    elif op.tail is not None:
        uppers.append(trunc_lower + 2.0 * op.tail(uncovered))
    upper = min(uppers) if uppers else None
    if upper is not None and upper < lower:
        upper = lower  # certificates agree up to kernel error; clamp
    return NormBound(lower=lower, upper=upper)


def hook(
    op: OperatorRep,
    part: Partition,
    i: BlockId,
    depth: int = DEFAULT_DEPTH,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> HookPoint:
    """Certified bound for the i-th hook norm at the given truncation depth."""
    if i < 0:
        raise ValueError(f"hook index must be non-negative, got {i}")
    op = _realize(op)
    d = _effective_depth(op, part, depth)
    entries = _strip_entries(op, part, i, d)
    lower = _sparse_norm(entries, tol)
    bound = _certified_bound(op, part, i, d, lower)
    return HookPoint(i=i, bound=bound, depth=depth)


def hook_sequence(
    op: OperatorRep,
    part: Partition,
    horizon: BlockId,
    depth: int = DEFAULT_DEPTH,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> list[HookPoint]:
    """Hooks 0..horizon-1."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    return [hook(op, part, i, depth, tol) for i in range(horizon)]


def _square_window_entries(
    op: OperatorRep, part: Partition, n: BlockId, depth: int
) -> dict[tuple[int, int], complex]:
    """Entries of the square partial block sum over blocks 0..n, truncated."""
    if isinstance(op, ExplicitOperator):
        return {
            (r, c): v
            for (r, c), v in op.entries.items()
            if part.block_of(r) <= n and part.block_of(c) <= n
        }
    prefixes = [block_prefix(part, k, depth) for k in range(n + 1)]
    out: dict[tuple[int, int], complex] = {}
    for pk in prefixes:
        for pl in prefixes:
            rect = entries_rect(op, pk, pl)
            for a, b in zip(*np.nonzero(rect)):
                out[(pk[a], pl[b])] = complex(rect[a, b])
    return out


def partial_sum_gap(
    op: OperatorRep,
    part: Partition,
    n: BlockId,
    depth: int = DEFAULT_DEPTH,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> NormBound:
    """Bound on ||S_{n+1} - S_n|| for the square partial block sums S_n.

    The difference of consecutive square windows is exactly the (n+1)-th
    truncated strip, so this agrees with ``hook(n+1)`` up to kernel error;
    the routes stay separate so tests can check the identity.
    """
    if n < 0:
        raise ValueError(f"partial sum index must be non-negative, got {n}")
    op = _realize(op)
    d = _effective_depth(op, part, depth)
    small = _square_window_entries(op, part, n, d)
    big = _square_window_entries(op, part, n + 1, d)
    diff = dict(big)
    for pos, v in small.items():
        s = diff.get(pos, 0j) - v
        if s == 0:
            diff.pop(pos, None)
        else:
            diff[pos] = s
    lower = _sparse_norm(diff, tol)
    return _certified_bound(op, part, n + 1, d, lower)


# ---------------------------------------------------------------------------
# Membership


def _support_block_horizon(op: ExplicitOperator, part: Partition) -> BlockId:
    """First block id beyond the support; hooks vanish identically from there."""
    horizon = 0
    for index in op.support():
        horizon = max(horizon, part.block_of(index) + 1)
    return horizon


def _dominating_sequence(
    op: GeneratedOperator, part: Partition
) -> "tuple[str, Callable[[int], float]] | None":
    """A declared-decaying upper bound for the true hooks, if one applies.

    Preference order: a strip certificate for this exact partition, else the
    operator tail bound evaluated at the first index of each block (every
    strip entry has a coordinate at or beyond that index).
    """
    if op.strip is not None and op.strip.partition == part and op.strip.limit_zero:
        return op.strip.description, op.strip
    if op.tail is not None and op.tail.limit_zero:
        tail = op.tail
        return tail.description, lambda i: tail(part.index_in_block(i, 0))
    return None


def membership(
    op: OperatorRep,
    part: Partition,
    eps: float,
    horizon: BlockId = 32,
    depth: int = DEFAULT_DEPTH,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> MembershipVerdict:
    """Three-valued membership verdict for the vanishing-hook condition.

    Certified verdicts require evidence: an applicable decaying bound for
    CertifiedIn, a verified infinite witness family for CertifiedOut.
    Everything else is Empirical at the requested horizon.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    op = _realize(op)
    if isinstance(op, ExplicitOperator):
        b = _support_block_horizon(op, part)
        return CertifiedIn(
            horizon=b,
            tail_certificate=(
                f"finite support inside blocks 0..{b - 1}; hooks vanish identically beyond"
                if b
                else "zero operator; all hooks vanish"
            ),
        )

    # Certified-out route: sample and verify the witness family.
    if op.witness is not None:
        evidence: list[tuple[int, int, int, float]] = []
        verified = True
        previous = -1
        for n in range(min(horizon, 64)):
            hook_index, row, col = op.witness.member(n)
            if hook_index <= previous:
                verified = False
                break
            previous = hook_index
            if max(part.block_of(row), part.block_of(col)) != hook_index:
                verified = False
                break
            modulus = abs(entry_at(op, row, col))
            if modulus < op.witness.delta * (1.0 - 1e-12):
                verified = False
                break
            evidence.append((hook_index, row, col, modulus))
        if verified and evidence:
            return CertifiedOut(eps=op.witness.delta, witness=tuple(evidence))

    # Certified-in route: a decaying dominating sequence for the true hooks.
    dominating = _dominating_sequence(op, part)
    if dominating is not None:
        description, bound_fn = dominating
        values = [bound_fn(i) for i in range(horizon)]
        start = None
        worst = -math.inf
        for i in range(horizon - 1, -1, -1):
            worst = max(worst, values[i])
            if worst <= eps:
                start = i
            else:
                break
        if start is not None:
            slack = tol.rel * max(1.0, eps) + tol.abs
            computed_ok = all(
                hook(op, part, i, depth, tol).bound.lower <= eps + slack
                for i in range(start, horizon)
            )
            if computed_ok:
                return CertifiedIn(horizon=start, tail_certificate=description)

    points = hook_sequence(op, part, horizon, depth, tol)
    window = points[horizon // 2 :]
    max_tail = max(p.bound.lower for p in window)
    status = "in" if max_tail <= eps else "out"
    return Empirical(status=status, horizon=horizon, max_tail_hook_lower=max_tail)
