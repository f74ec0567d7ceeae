"""Runnable demo gallery and the randomized closure check.

Each demo returns a list of (label, passed, detail) triples so the CLI can
print one PASS/FAIL line per check and tests can assert on the outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constructions import (
    cantor_coarsen,
    coarse_projection,
    minf_geometric_product,
    minf_sample,
    row_isometry,
)
from .decomposition import CertifiedIn, CertifiedOut, hook, hook_sequence, membership
from .model import (
    ExplicitOperator,
    GeneratedOperator,
    OperatorRep,
    Partition,
    Uniform,
    entry_at,
)

GOLDEN_HOOK1 = (1.0 + math.sqrt(5.0)) / 4.0  # largest eigenvalue modulus of [[0,b],[b,b]], b=1/2


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str


def _row_restricted(op: GeneratedOperator, part: Partition, block: int) -> GeneratedOperator:
    """Left multiplication by the diagonal indicator of one block (exact)."""

    def oracle(r: int, c: int) -> complex:
        if part.block_of(r) != block:
            return 0j
        return op.entry_oracle(r, c)

    return GeneratedOperator(
        name=f"block{block}_times_{op.name}",
        params={"block": block, "inner": op.name},
        entry_oracle=oracle,
    )


def demo_not_ideal(
    lam: float = 0.75, eps: float = 1e-6, horizon: int = 32, depth: int = 64
) -> list[Check]:
    """A certified member times an ambient operator can leave the member set."""
    part = cantor_coarsen(Uniform(1))
    a = row_isometry(lam, part)
    q0 = coarse_projection(part, 0)
    qa = _row_restricted(a, part, 0)

    window = range(2 * depth)
    same = all(entry_at(qa, r, c) == entry_at(a, r, c) for r in window for c in window)
    positions = [(part.index_in_block(0, n), part.index_in_block(n, 0)) for n in range(depth)]
    same = same and all(entry_at(qa, r, c) == entry_at(a, r, c) for r, c in positions)
    checks = [
        Check(
            f"q0*a equals a entrywise at depth {depth}",
            same,
            "exact complex equality on the truncation window and the entry diagonal",
        )
    ]

    verdict_a = membership(a, part, eps=eps, horizon=horizon, depth=depth)
    ok_a = isinstance(verdict_a, CertifiedOut) and verdict_a.eps == lam
    checks.append(
        Check(
            f"membership(a) is CERTIFIED_OUT eps={lam:g}",
            ok_a,
            f"got {type(verdict_a).__name__}"
            + (f" eps={verdict_a.eps:g}" if isinstance(verdict_a, CertifiedOut) else ""),
        )
    )

    verdict_q = membership(q0, part, eps=eps, horizon=horizon, depth=depth)
    checks.append(
        Check(
            "membership(q0) is CERTIFIED_IN",
            isinstance(verdict_q, CertifiedIn),
            f"got {type(verdict_q).__name__}",
        )
    )
    return checks


def demo_partitions_differ(
    eps: float = 1e-6, horizon: int = 32, depth: int = 64
) -> list[Check]:
    """One projection, two partitions, opposite certified verdicts."""
    fine = Uniform(1)
    coarse = cantor_coarsen(fine)
    q0 = coarse_projection(coarse, 0)

    over_coarse = membership(q0, coarse, eps=eps, horizon=horizon, depth=depth)
    over_fine = membership(q0, fine, eps=eps, horizon=horizon, depth=depth)
    return [
        Check(
            "coarse_projection(0) certified in over the coarse partition",
            isinstance(over_coarse, CertifiedIn),
            f"got {type(over_coarse).__name__}",
        ),
        Check(
            "coarse_projection(0) certified out (eps=1) over the fine partition",
            isinstance(over_fine, CertifiedOut) and over_fine.eps == 1.0,
            f"got {type(over_fine).__name__}"
            + (f" eps={over_fine.eps:g}" if isinstance(over_fine, CertifiedOut) else ""),
        ),
    ]


def demo_minf(
    base: float = 0.5, eps: float = 1e-6, horizon: int = 32, depth: int = 64
) -> list[Check]:
    """The geometric scalar sample: certified member with decreasing hooks."""
    part = Uniform(1)
    op = minf_sample("geometric", base)

    verdict = membership(op, part, eps=eps, horizon=horizon, depth=depth)
    checks = [
        Check(
            f"geometric({base:g}) sample certified in",
            isinstance(verdict, CertifiedIn),
            f"got {type(verdict).__name__}",
        )
    ]

    h1 = hook(op, part, 1, depth).bound.lower
    checks.append(
        Check(
            "hook 1 lower bound matches the 2x2 eigenvalue",
            abs(h1 - GOLDEN_HOOK1) <= 1e-8,
            f"|{h1:.12g} - {GOLDEN_HOOK1:.12g}| <= 1e-8",
        )
    )

    points = hook_sequence(op, part, 9, depth)
    lowers = [p.bound.lower for p in points]
    strict = all(lowers[i] > lowers[i + 1] for i in range(1, 8))
    checks.append(
        Check(
            "hook lower bounds strictly decreasing for 1 <= i <= 8",
            strict,
            " > ".join(f"{v:.6g}" for v in lowers[1:9]),
        )
    )
    return checks


DEMOS = {
    "not-ideal": demo_not_ideal,
    "partitions-differ": demo_partitions_differ,
    "minf": demo_minf,
}


# ---------------------------------------------------------------------------
# Randomized closure check


def random_explicit(rng: np.random.Generator, max_index: int = 11, entries: int = 6) -> ExplicitOperator:
    out: dict[tuple[int, int], complex] = {}
    while len(out) < entries:
        r = int(rng.integers(0, max_index + 1))
        c = int(rng.integers(0, max_index + 1))
        v = complex(rng.standard_normal(), rng.standard_normal())
        out[(r, c)] = v
    return ExplicitOperator(entries=out)


def _certified_member(op: OperatorRep, part: Partition) -> bool:
    return isinstance(membership(op, part, eps=1e-9, horizon=8, depth=64), CertifiedIn)


def _vanishes_beyond_support(op: ExplicitOperator, part: Partition) -> bool:
    blocks = [part.block_of(i) for i in op.support()]
    b = 1 + max(blocks, default=-1)
    point = hook(op, part, b, depth=64)
    return point.bound.lower == 0.0 and point.bound.upper == 0.0


def closure_trial(rng: np.random.Generator, part: Partition) -> bool:
    """Sums, products and adjoints of finitely supported members stay members."""
    a = random_explicit(rng)
    b = random_explicit(rng)
    results = [a + b, a @ b, a.adjoint()]
    if not all(_certified_member(x, part) for x in results):
        return False
    if not all(_vanishes_beyond_support(x, part) for x in results if x.entries):
        return False
    # adjoint is multiplicative-reversing, exactly, on finite supports
    lhs = (a @ b).adjoint()
    rhs = b.adjoint() @ a.adjoint()
    return lhs.entries == rhs.entries


def run_closure(trials: int, seed: int) -> tuple[int, list[bool]]:
    part = Uniform(2)
    outcomes = []
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        outcomes.append(closure_trial(rng, part))
    return sum(outcomes), outcomes


def geometric_domination(
    b1: float = 0.5, b2: float = 0.6, horizon: int = 32, depth: int = 64
) -> tuple[list[tuple[int, float, float]], bool]:
    """Hooks of a product of geometric members against its decaying bound.

    Returns (rows, ok) where each row is (i, computed hook lower, bound).
    """
    part = Uniform(1)
    prod = minf_geometric_product(b1, b2)
    assert prod.tail is not None
    rows = []
    ok = True
    for i in range(horizon):
        lower = hook(prod, part, i, depth).bound.lower
        bound = prod.tail(part.index_in_block(i, 0))
        rows.append((i, lower, bound))
        if lower > bound + 1e-9:
            ok = False
    if rows[-1][2] >= rows[0][2] or rows[-1][2] > 1e-3:
        ok = False  # the printed sequence must actually decay
    return rows, ok
