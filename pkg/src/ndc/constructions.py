"""Generators for the constructive demo objects.

All generators are built against a concrete partition and carry whatever
certificates their structure supports: exact per-hook strip bounds, operator
tail bounds, or witness families of entries that keep hook norms away from
zero.  Entry oracles are pure, so the operators are safe to share.
"""

from __future__ import annotations

import math

import numpy as np

from .model import (
    BlockId,
    CantorCoarsen,
    ExplicitOperator,
    GeneratedOperator,
    Partition,
    StripCertificate,
    TailCertificate,
    Uniform,
    WitnessFamily,
    cantor_pair,
)


def cantor_coarsen(base: Partition) -> CantorCoarsen:
    """Group the base blocks into infinitely many infinite coarse blocks."""
    return CantorCoarsen(base=base)


def matrix_unit(
    part: CantorCoarsen, group: BlockId, i: int, j: int
) -> GeneratedOperator:
    """Partial isometry sending the j-th fine sub-block of ``group`` onto the i-th.

    With a width-1 base this is the single entry E[pair(group, i), pair(group, j)].
    The ordinal-matched pairing makes x x* and x* x the sub-block projections.
    """
    if not isinstance(part, CantorCoarsen):
        raise ValueError("matrix_unit requires a coarsened partition")
    if group < 0 or i < 0 or j < 0:
        raise ValueError("group and sub-block ordinals must be non-negative")
    base = part.base
    row_block = cantor_pair(group, i)
    col_block = cantor_pair(group, j)
    size = base.block_size(0)

    def oracle(r: int, c: int) -> complex:
        if base.block_of(r) != row_block or base.block_of(c) != col_block:
            return 0j
        return 1 + 0j if base.ordinal_in_block(r) == base.ordinal_in_block(c) else 0j

    finite = None
    tail = None
    if size is not math.inf:
        w = int(size)
        pairs = [
            (base.index_in_block(row_block, t), base.index_in_block(col_block, t), 1.0)
            for t in range(w)
        ]
        finite = ExplicitOperator.from_entries(pairs)
        max_index = max(max(r, c) for r, c, _ in pairs)
        tail = TailCertificate(
            fn=lambda n, m=max_index: 0.0 if n > m else 2.0,
            limit_zero=True,
            description=f"finite support below index {max_index + 1}",
        )
    return GeneratedOperator(
        name="matrix_unit",
        params={"group": group, "i": i, "j": j},
        entry_oracle=oracle,
        tail=tail,
        finite_support=finite,
    )


def row_isometry(lam: complex, part: CantorCoarsen) -> GeneratedOperator:
    """Scaled isometry with every row inside coarse block 0.

    Entry n sits at (r(n), c(n)) with r(n) the n-th index of coarse block 0
    and c(n) the first index of coarse block n, so the n-th hook strip holds
    exactly one entry of modulus |lam| and the hook norms never decay.
    Left-multiplying by the block-0 projection reproduces the operator,
    which is the point of the not-an-ideal demo.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if not isinstance(part, CantorCoarsen):
        raise ValueError("row_isometry requires a coarsened partition")
    mod = abs(lam)

    def oracle(r: int, c: int) -> complex:
        if part.block_of(r) != 0:
            return 0j
        n = part.ordinal_in_block(r)
        return lam if c == part.index_in_block(n, 0) else 0j

    def member(n: int) -> tuple[int, int, int]:
        return n, part.index_in_block(0, n), part.index_in_block(n, 0)

    return GeneratedOperator(
        name="row_isometry",
        params={"lam": lam},
        entry_oracle=oracle,
        tail=TailCertificate(
            fn=lambda n: 2.0 * mod,
            limit_zero=False,
            description="constant tail: a scaled partial isometry survives every cutoff",
        ),
        strip=StripCertificate(
            partition=part,
            fn=lambda i: mod,
            limit_zero=False,
            description="each strip holds exactly one entry of modulus |lam|",
        ),
        witness=WitnessFamily(
            delta=mod,
            member=member,
            description="one entry of modulus |lam| inside every strip",
        ),
    )


def _geometric_tail(b: float):
    x = b * b

    def fn(n: int) -> float:
        # 2 * Frobenius norm of the rows >= n corner, in closed form
        return 2.0 * b**n * math.sqrt((n + 1) - (n - 1) * x) / (1.0 - x)

    return fn


def _geometric_frobenius(b: float) -> float:
    x = b * b
    return math.sqrt(1.0 + x) / (1.0 - x)


def minf_sample(rule: str, base: float | None = None) -> GeneratedOperator:
    """Sample members of the scalar vanishing-hook family over width-1 blocks.

    ``geometric`` has entries base**max(i, j): certified by both a geometric
    operator tail bound and an exact strip Frobenius bound.  ``inverse_sum``
    has entries 1/(i + j + 2): bounded but with no decaying operator tail, so
    only the strip bound (which decays like i**-0.5) certifies membership.
    """
    fine = Uniform(1)
    if rule == "geometric":
        if base is None or not 0.0 < base < 1.0:
            raise ValueError(f"geometric rule needs base in (0, 1), got {base}")
        b = float(base)

        def oracle(i: int, j: int) -> complex:
            return complex(b ** float(max(i, j)))

        def grid(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
            return np.power(b, np.maximum.outer(rows, cols).astype(np.float64)).astype(
                np.complex128
            )

        return GeneratedOperator(
            name="minf_sample",
            params={"rule": "geometric", "base": b},
            entry_oracle=oracle,
            entry_grid=grid,
            tail=TailCertificate(
                fn=_geometric_tail(b),
                limit_zero=True,
                description=(
                    f"geometric operator tail 2*{b}^n*sqrt((n+1)-(n-1)*{b}^2)/(1-{b}^2)"
                ),
            ),
            strip=StripCertificate(
                partition=fine,
                fn=lambda i: b**i * math.sqrt(2 * i + 1),
                limit_zero=True,
                description=f"strip Frobenius bound {b}^i*sqrt(2i+1)",
            ),
        )
    if rule == "inverse_sum":
        if base is not None:
            raise ValueError("inverse_sum takes no base parameter")

        def oracle(i: int, j: int) -> complex:
            return complex(1.0 / (i + j + 2))

        def grid(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
            denom = rows[:, None] + cols[None, :] + 2
            return (1.0 / denom.astype(np.float64)).astype(np.complex128)

        def strip_fn(i: int) -> float:
            total = sum(2.0 / (k + i + 2) ** 2 for k in range(i))
            total += 1.0 / (2 * i + 2) ** 2
            return math.sqrt(total)

        return GeneratedOperator(
            name="minf_sample",
            params={"rule": "inverse_sum"},
            entry_oracle=oracle,
            entry_grid=grid,
            strip=StripCertificate(
                partition=fine,
                fn=strip_fn,
                limit_zero=True,
                description="strip Frobenius bound ~ i**-0.5 (no decaying operator tail)",
            ),
        )
    raise ValueError(f"unknown minf rule {rule!r}")


def minf_geometric_product(b1: float, b2: float) -> GeneratedOperator:
    """Exact product of two geometric samples, entries in closed form.

    Entry (i, j) is the absolutely convergent series
    sum_k b1**max(i,k) * b2**max(k,j), split into three geometric pieces.
    Carries the composed tail bound tail1 * ||b|| + ||a|| * tail2, which still
    decays geometrically, so products of these members stay certified.
    """
    for b in (b1, b2):
        if not 0.0 < b < 1.0:
            raise ValueError(f"geometric base must lie in (0, 1), got {b}")
    b1 = float(b1)
    b2 = float(b2)
    prod = b1 * b2

    def geo_range(x: float, lo: int, hi: int) -> float:
        # sum of x**k for k in [lo, hi], empty when hi < lo
        if hi < lo:
            return 0.0
        return (x**lo - x ** (hi + 1)) / (1.0 - x)

    def oracle(i: int, j: int) -> complex:
        lo, hi = (i, j) if i <= j else (j, i)
        head = (lo + 1) * b1**i * b2**j
        if i <= j:
            middle = b2**j * geo_range(b1, i + 1, j)
        else:
            middle = b1**i * geo_range(b2, j + 1, i)
        tail_part = prod ** (hi + 1) / (1.0 - prod)
        return complex(head + middle + tail_part)

    tail1 = _geometric_tail(b1)
    tail2 = _geometric_tail(b2)
    norm1 = _geometric_frobenius(b1)
    norm2 = _geometric_frobenius(b2)

    return GeneratedOperator(
        name="minf_geometric_product",
        params={"b1": b1, "b2": b2},
        entry_oracle=oracle,
        tail=TailCertificate(
            fn=lambda n: tail1(n) * norm2 + norm1 * tail2(n),
            limit_zero=True,
            description=(
                f"composed product tail tail_a(n)*{norm2:.6g} + {norm1:.6g}*tail_b(n)"
            ),
        ),
    )


def coarse_projection(part: CantorCoarsen, i: BlockId) -> GeneratedOperator:
    """Diagonal indicator of coarse block i.

    Over its own coarse partition the hooks are (1, 0, 0, ...), a certified
    member.  Over the fine base partition the diagonal keeps returning 1 on
    every fine block inside the group, an infinite witness family that
    certifies non-membership.  This single operator separates the two
    decompositions.
    """
    if not isinstance(part, CantorCoarsen):
        raise ValueError("coarse_projection requires a coarsened partition")
    if i < 0:
        raise ValueError(f"block id must be non-negative, got {i}")
    base = part.base

    def oracle(r: int, c: int) -> complex:
        if r != c:
            return 0j
        return 1 + 0j if part.block_of(r) == i else 0j

    def member(n: int) -> tuple[int, int, int]:
        fine_block = cantor_pair(i, n)
        idx = base.index_in_block(fine_block, 0)
        return fine_block, idx, idx

    return GeneratedOperator(
        name="coarse_projection",
        params={"block": i},
        entry_oracle=oracle,
        strip=StripCertificate(
            partition=part,
            fn=lambda k: 1.0 if k == i else 0.0,
            limit_zero=True,
            description=f"support is the single diagonal block ({i}, {i})",
        ),
        witness=WitnessFamily(
            delta=1.0,
            member=member,
            description="diagonal 1 at the first index of every fine block in the group",
        ),
    )
