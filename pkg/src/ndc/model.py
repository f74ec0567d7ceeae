"""Basis partitions, operator representations, and certified bound types.

The ambient space is l2(N) with its canonical orthonormal basis indexed by
0, 1, 2, ...  A :class:`Partition` assigns every basis index to a block;
each block models a diagonal projection, the family is orthogonal and its
join is the identity (the blocks cover N).  Operators come in two shapes:
finitely supported entry maps (:class:`ExplicitOperator`) and oracle-backed
infinite matrices (:class:`GeneratedOperator`) that may carry machine-checkable
decay certificates and witness families.

Everything in this module is immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from typing import Callable, Iterator, Mapping

import numpy as np

# Aliases for readability; both are plain non-negative ints.
BasisIndex = int
BlockId = int


def cantor_pair(i: int, j: int) -> int:
    """Bijection N x N -> N along anti-diagonals; (0,0)->0, (0,1)->2, (1,0)->1."""
    if i < 0 or j < 0:
        raise ValueError("cantor_pair arguments must be non-negative")
    return (i + j) * (i + j + 1) // 2 + j


def cantor_unpair(z: int) -> tuple[int, int]:
    """Inverse of :func:`cantor_pair`, exact for arbitrarily large ints."""
    if z < 0:
        raise ValueError("cantor_unpair argument must be non-negative")
    t = (math.isqrt(8 * z + 1) - 1) // 2
    j = z - t * (t + 1) // 2
    return t - j, j


class Partition:
    """A computable assignment of basis indices to blocks.

    Subclasses implement ``block_of``, ``index_in_block``, ``block_size`` and
    ``count_below``; the remaining queries are derived.  Within one partition
    every block has the same cardinality, and block minima increase with the
    block id (both hold for the two concrete kinds below and are relied on by
    the coarsening merge).
    """

    def block_of(self, index: BasisIndex) -> BlockId:
        raise NotImplementedError

    def index_in_block(self, block: BlockId, k: int) -> BasisIndex:
        """The k-th smallest basis index of ``block`` (k is 0-based)."""
        raise NotImplementedError

    def block_size(self, block: BlockId) -> int | float:
        """Cardinality of a block; ``math.inf`` for infinite blocks."""
        raise NotImplementedError

    def count_below(self, block: BlockId, bound: BasisIndex) -> int:
        """Number of indices of ``block`` strictly below ``bound``."""
        raise NotImplementedError

    def ordinal_in_block(self, index: BasisIndex) -> int:
        """Position of ``index`` inside its own block (inverse of index_in_block)."""
        return self.count_below(self.block_of(index), index)

    def iter_block(self, block: BlockId) -> Iterator[BasisIndex]:
        k = 0
        size = self.block_size(block)
        while k < size:
            yield self.index_in_block(block, k)
            k += 1

    def _validate_block(self, block: BlockId) -> None:
        if block < 0:
            raise ValueError(f"block id must be non-negative, got {block}")


@dataclass(frozen=True)
class Uniform(Partition):
    """Consecutive runs of ``width`` indices: block b = [b*width, (b+1)*width)."""

    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be positive, got {self.width}")

    def block_of(self, index: BasisIndex) -> BlockId:
        if index < 0:
            raise ValueError(f"basis index must be non-negative, got {index}")
        return index // self.width

    def index_in_block(self, block: BlockId, k: int) -> BasisIndex:
        self._validate_block(block)
        if not 0 <= k < self.width:
            raise IndexError(f"ordinal {k} out of range for block of size {self.width}")
        return block * self.width + k

    def block_size(self, block: BlockId) -> int:
        self._validate_block(block)
        return self.width

    def count_below(self, block: BlockId, bound: BasisIndex) -> int:
        self._validate_block(block)
        return max(0, min(bound - block * self.width, self.width))


@dataclass(frozen=True)
class CantorCoarsen(Partition):
    """Coarsening of ``base``: coarse block i absorbs base blocks pair(i, j), j >= 0.

    Every coarse block is infinite and contains infinitely many base blocks;
    the union is still all of N because the pairing is a bijection.
    """

    base: Partition

    def block_of(self, index: BasisIndex) -> BlockId:
        i, _ = cantor_unpair(self.base.block_of(index))
        return i

    def index_in_block(self, block: BlockId, k: int) -> BasisIndex:
        self._validate_block(block)
        if k < 0:
            raise IndexError(f"ordinal must be non-negative, got {k}")
        size = self.base.block_size(0)
        if size is not math.inf:
            j, r = divmod(k, int(size))
            return self.base.index_in_block(cantor_pair(block, j), r)
        return next(islice(self.iter_block(block), k, None))

    def block_size(self, block: BlockId) -> float:
        self._validate_block(block)
        return math.inf

    def count_below(self, block: BlockId, bound: BasisIndex) -> int:
        self._validate_block(block)
        total = 0
        j = 0
        while True:
            base_block = cantor_pair(block, j)
            if self.base.index_in_block(base_block, 0) >= bound:
                return total
            total += self.base.count_below(base_block, bound)
            j += 1

    def iter_block(self, block: BlockId) -> Iterator[BasisIndex]:
        self._validate_block(block)
        size = self.base.block_size(0)
        if size is not math.inf:
            j = 0
            while True:
                for r in range(int(size)):
                    yield self.base.index_in_block(cantor_pair(block, j), r)
                j += 1
        else:
            yield from self._iter_merge(block)

    def _iter_merge(self, block: BlockId) -> Iterator[BasisIndex]:
        # k-way merge of the (infinitely many) base-block streams; stream j is
        # activated lazily once its head could undercut the current minimum,
        # which is sound because base-block minima increase with the block id.
        first = self.base.iter_block(cantor_pair(block, 0))
        heap: list[tuple[int, int, Iterator[int]]] = [(next(first), 0, first)]
        next_j = 1
        while True:
            while True:
                head = self.base.index_in_block(cantor_pair(block, next_j), 0)
                if head > heap[0][0]:
                    break
                stream = self.base.iter_block(cantor_pair(block, next_j))
                heapq.heappush(heap, (next(stream), next_j, stream))
                next_j += 1
            value, j, stream = heapq.heappop(heap)
            yield value
            heapq.heappush(heap, (next(stream), j, stream))


@lru_cache(maxsize=16384)
def block_prefix(part: Partition, block: BlockId, depth: int) -> tuple[BasisIndex, ...]:
    """First ``depth`` indices of a block (all of them if the block is smaller)."""
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    size = part.block_size(block)
    n = depth if size is math.inf else min(depth, int(size))
    return tuple(islice(part.iter_block(block), n))


# ---------------------------------------------------------------------------
# Operators


class OverlapError(ValueError):
    """Two block matrices claimed the same (row, col) position."""


@dataclass(frozen=True, eq=False)
class ExplicitOperator:
    """Finitely supported operator; ``entries`` maps (row, col) -> nonzero value."""

    entries: Mapping[tuple[BasisIndex, BasisIndex], complex]

    @staticmethod
    def from_entries(
        items: "list[tuple[BasisIndex, BasisIndex, complex]] | Mapping",
    ) -> "ExplicitOperator":
        """Build from (row, col, value) triples; zeros are dropped, duplicates rejected."""
        if isinstance(items, Mapping):
            items = [(r, c, v) for (r, c), v in items.items()]
        out: dict[tuple[int, int], complex] = {}
        for row, col, value in items:
            if row < 0 or col < 0:
                raise ValueError(f"negative basis index in entry ({row}, {col})")
            value = complex(value)
            if value == 0:
                continue
            if (row, col) in out:
                raise OverlapError(f"duplicate entry at ({row}, {col})")
            out[(row, col)] = value
        return ExplicitOperator(entries=out)

    @staticmethod
    def zero() -> "ExplicitOperator":
        return ExplicitOperator(entries={})

    def support(self) -> set[BasisIndex]:
        idx: set[int] = set()
        for row, col in self.entries:
            idx.add(row)
            idx.add(col)
        return idx

    def adjoint(self) -> "ExplicitOperator":
        return ExplicitOperator(
            entries={(c, r): v.conjugate() for (r, c), v in self.entries.items()}
        )

    def __add__(self, other: "ExplicitOperator") -> "ExplicitOperator":
        merged = dict(self.entries)
        for pos, v in other.entries.items():
            s = merged.get(pos, 0j) + v
            if s == 0:
                merged.pop(pos, None)
            else:
                merged[pos] = s
        return ExplicitOperator(entries=merged)

    def __sub__(self, other: "ExplicitOperator") -> "ExplicitOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "ExplicitOperator":
        scalar = complex(scalar)
        if scalar == 0:
            return ExplicitOperator.zero()
        return ExplicitOperator(
            entries={pos: scalar * v for pos, v in self.entries.items()}
        )

    def __matmul__(self, other: "ExplicitOperator") -> "ExplicitOperator":
        by_row: dict[int, list[tuple[int, complex]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], complex] = {}
        for (r, k), va in self.entries.items():
            for c, vb in by_row.get(k, ()):
                pos = (r, c)
                s = acc.get(pos, 0j) + va * vb
                acc[pos] = s
        return ExplicitOperator(entries={p: v for p, v in acc.items() if v != 0})


@dataclass(frozen=True, eq=False)
class TailCertificate:
    """Upper bound fn(n) >= ||(1-P_n) a|| + ||a (1-P_n)||, P_n = indices < n.

    ``fn`` must be nonincreasing; ``limit_zero`` declares that the bound tends
    to 0 (a generator-level assertion, not checkable from finitely many
    samples).
    """

    fn: Callable[[int], float]
    limit_zero: bool
    description: str

    def __call__(self, n: int) -> float:
        value = float(self.fn(n))
        if value < 0 or math.isnan(value):
            raise ValueError(f"tail bound produced invalid value {value} at n={n}")
        return value


@dataclass(frozen=True, eq=False)
class StripCertificate:
    """Per-hook upper bound on the true (untruncated) strip norms.

    Valid only for the partition it was constructed against; consumers must
    ignore it when queried with a different partition.
    """

    partition: Partition
    fn: Callable[[int], float]
    limit_zero: bool
    description: str

    def __call__(self, i: int) -> float:
        value = float(self.fn(i))
        if value < 0 or math.isnan(value):
            raise ValueError(f"strip bound produced invalid value {value} at hook {i}")
        return value


@dataclass(frozen=True, eq=False)
class WitnessFamily:
    """An infinite family of strip entries, each of modulus >= delta.

    ``member(n)`` returns the n-th family member as (hook index, row, col);
    hook indices are strictly increasing in n and the family never ends.
    Consumers verify each sampled member against the entry oracle and the
    queried partition, so a family built for one partition is silently
    inapplicable to another.
    """

    delta: float
    member: Callable[[int], tuple[int, BasisIndex, BasisIndex]]
    description: str


@dataclass(frozen=True, eq=False)
class GeneratedOperator:
    """Oracle-backed infinite operator with optional certificates.

    ``entry_oracle`` must be pure and deterministic.  ``entry_grid``, when
    present, evaluates a whole rows x cols rectangle at once (a numpy
    fast path; it must agree with the scalar oracle bit for bit).
    ``finite_support`` marks generators that are secretly finite matrices.
    """

    name: str
    params: Mapping[str, object]
    entry_oracle: Callable[[BasisIndex, BasisIndex], complex]
    entry_grid: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    tail: TailCertificate | None = None
    strip: StripCertificate | None = None
    witness: WitnessFamily | None = None
    finite_support: ExplicitOperator | None = None


OperatorRep = ExplicitOperator | GeneratedOperator


def entry_at(op: OperatorRep, row: BasisIndex, col: BasisIndex) -> complex:
    """Single matrix entry; 0 for unset explicit positions."""
    if row < 0 or col < 0:
        raise ValueError(f"negative basis index ({row}, {col})")
    if isinstance(op, ExplicitOperator):
        return op.entries.get((row, col), 0j)
    return complex(op.entry_oracle(row, col))


def as_explicit(op: OperatorRep) -> ExplicitOperator | None:
    """The exact finite form of ``op`` when one is known, else None."""
    if isinstance(op, ExplicitOperator):
        return op
    return op.finite_support


def entries_rect(op: OperatorRep, rows, cols) -> np.ndarray:
    """Dense complex rectangle of entries over explicit row/col index lists."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if isinstance(op, ExplicitOperator):
        out = np.zeros((rows.size, cols.size), dtype=np.complex128)
        rpos = {int(r): i for i, r in enumerate(rows)}
        cpos = {int(c): j for j, c in enumerate(cols)}
        for (r, c), v in op.entries.items():
            i = rpos.get(r)
            j = cpos.get(c)
            if i is not None and j is not None:
                out[i, j] = v
        return out
    if op.entry_grid is not None:
        out = np.asarray(op.entry_grid(rows, cols), dtype=np.complex128)
        if out.shape != (rows.size, cols.size):
            raise ValueError(f"entry_grid returned shape {out.shape}")
        return out
    oracle = op.entry_oracle
    out = np.empty((rows.size, cols.size), dtype=np.complex128)
    for i, r in enumerate(rows):
        ri = int(r)
        for j, c in enumerate(cols):
            out[i, j] = oracle(ri, int(c))
    return out


# ---------------------------------------------------------------------------
# Truncation currency and certified bounds


@dataclass(frozen=True, eq=False)
class FiniteMatrix:
    """Dense complex matrix over explicit, strictly increasing index lists."""

    rows: tuple[BasisIndex, ...]
    cols: tuple[BasisIndex, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        rows = tuple(int(r) for r in self.rows)
        cols = tuple(int(c) for c in self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        for name, idx in (("rows", rows), ("cols", cols)):
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"{name} must be strictly increasing: {idx}")
            if idx and idx[0] < 0:
                raise ValueError(f"{name} contain a negative index: {idx}")
        data = np.asarray(self.data, dtype=np.complex128)
        if data.shape != (len(rows), len(cols)):
            raise ValueError(
                f"data shape {data.shape} does not match {len(rows)}x{len(cols)}"
            )
        object.__setattr__(self, "data", data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def is_empty(self) -> bool:
        return self.data.size == 0


@dataclass(frozen=True)
class NormBound:
    """Certified interval [lower, upper] for a norm quantity; upper=None is unknown."""

    lower: float
    upper: float | None

    def __post_init__(self) -> None:
        if self.lower < 0 or math.isnan(self.lower):
            raise ValueError(f"lower bound must be a non-negative real, got {self.lower}")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"upper {self.upper} below lower {self.lower}")

    def known(self) -> bool:
        return self.upper is not None
