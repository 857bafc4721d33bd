#!/usr/bin/env python3
"""
Block Partitions

Builds the nonincreasing weight sequence r that turns a divergent series into a
convergent one while the weighted ratio sequence keeps growing.

Case one (inf a_n > 0): split the indices into blocks (n_k, n_(k+1)] on which the
ratio sequence exceeds k, and give block k the constant weight
R_k = 1 / ((k+1)^2 * W_k), where W_k is the block's weight sum. Then every block
contributes exactly 1/(k+1)^2 to sum a_n r_n and at least k/(k+1)^2 to
sum a_n c_n r_n.

Case two (inf a_n = 0): first group the indices into minimal blocks of a-weight
at least one, take the minimum of c over each group, and run case one on the
groups.
"""

import bisect
import logging
import math
from enum import Enum
from typing import List, Optional, Sequence

from pydantic import BaseModel

from hardylab.csvio import atomic_write, render_csv
from hardylab.errors import BudgetExhaustedError, PartitionError
from hardylab.summation import CompensatedSum

logger = logging.getLogger(__name__)


class PartitionCase(str, Enum):
    CASE_ONE = "case_one"
    CASE_TWO = "case_two"


class BlockPartition(BaseModel):
    """
    Blocks (boundaries[j], boundaries[j+1]] over the original indices with their
    weight, the infimum of c on them and the constant r assigned to them.

    For case two the blocks are the weight-one groups; ``inner`` holds the case-one
    partition of the groups, whose blocks carry the R_k values.
    """

    case: PartitionCase
    N: int
    boundaries: List[int]
    block_weight: List[float]
    block_inf_c: List[float]
    r_block: List[float]
    truncation_conditional: bool = False
    inner: Optional["BlockPartition"] = None
    scanned_groups: Optional[int] = None

    @property
    def blocks(self) -> int:
        return len(self.boundaries) - 1

    @property
    def horizon(self) -> int:
        """Last index covered by a materialized block."""
        return self.boundaries[-1]

    def index_ranges(self) -> List[range]:
        """1-based index ranges of the R_k blocks in the original sequence."""
        if self.inner is None:
            cuts = self.boundaries
        else:
            cuts = [self.boundaries[j] for j in self.inner.boundaries]
        return [range(lo + 1, hi + 1) for lo, hi in zip(cuts, cuts[1:])]

    @property
    def r_values(self) -> List[float]:
        """R_k per case-one block (the inner blocks for case two)."""
        return self.inner.r_block if self.inner is not None else self.r_block

    def to_csv(self, path=None) -> str:
        rows = (
            (k, self.boundaries[k + 1], self.block_weight[k], self.block_inf_c[k], r)
            for k, r in enumerate(self.r_block)
        )
        text = render_csv(("k", "boundary", "weight", "inf_c", "r_block"), rows)
        if path is not None:
            atomic_write(path, text)
        return text


class RSequence(BaseModel):
    """Nonincreasing weights r_1..r_H; strictly decreasing once strictified."""

    values: List[float]
    base: List[float]
    strictified: bool

    @property
    def horizon(self) -> int:
        return len(self.values)

    def strictly_decreasing(self) -> bool:
        return all(x > y for x, y in zip(self.values, self.values[1:]))

    def nonincreasing(self) -> bool:
        return all(x >= y for x, y in zip(self.values, self.values[1:]))


def _suffix_minima(c: Sequence[float]) -> List[float]:
    out = list(c)
    for i in range(len(out) - 2, -1, -1):
        if out[i + 1] < out[i]:
            out[i] = out[i + 1]
    return out


def _is_nondecreasing(c: Sequence[float]) -> bool:
    return all(x <= y for x, y in zip(c, c[1:]))


def build_blocks_case1(
    c: Sequence[float],
    weights: Optional[Sequence[float]] = None,
    N: Optional[int] = None,
) -> BlockPartition:
    """
    Case-one partition of the indices 1..N driven by the ratio sequence c.

    n_k is the smallest index from which every scanned c_n exceeds k, pushed right
    until the gaps n_(k+1) - n_k are nondecreasing and the block weights W_k are
    nondecreasing (so R_k decreases). Only blocks ending at or before N are kept.

    Raises:
        PartitionError: c never exceeds 1 from some index on within 1..N
    """
    N = len(c) if N is None else N
    c = list(c[:N])
    if len(c) < N:
        raise ValueError(f"ratio sequence has {len(c)} terms, {N} needed")
    w = [1.0] * N if weights is None else [float(x) for x in weights[:N]]
    if len(w) < N:
        raise ValueError(f"weight sequence has {len(w)} terms, {N} needed")
    if any(not (x > 0 and math.isfinite(x)) for x in w):
        raise ValueError("block weights must be positive and finite")

    suffix_min = _suffix_minima(c)
    boundaries = [0]
    block_weight: List[float] = []
    k = 1
    while True:
        # first 0-based position whose suffix minimum exceeds k
        position = bisect.bisect_right(suffix_min, k)
        if position >= N:
            if k == 1:
                raise PartitionError(
                    f"ratio sequence does not stay above 1 within the first {N} terms "
                    f"(c_N = {c[-1]!r})"
                )
            break
        n_k = max(position + 1, boundaries[-1] + 1)
        if len(boundaries) >= 2:
            n_k = max(n_k, 2 * boundaries[-1] - boundaries[-2])
        start = boundaries[-1]
        if n_k > N:
            break
        acc = CompensatedSum()
        for index in range(start, n_k):
            acc.add(w[index])
        if block_weight:
            while not acc.at_least(block_weight[-1]) and n_k < N:
                acc.add(w[n_k])
                n_k += 1
            if not acc.at_least(block_weight[-1]):
                break
        boundaries.append(n_k)
        block_weight.append(math.fsum(w[start:n_k]))
        logger.debug("Block %d closed at %d (weight %.6g)", k - 1, n_k, acc.value)
        k += 1

    block_inf_c = [min(c[lo:hi]) for lo, hi in zip(boundaries, boundaries[1:])]
    r_block = [
        1.0 / ((index + 1) ** 2 * weight) for index, weight in enumerate(block_weight)
    ]
    conditional = not _is_nondecreasing(c)
    if len(block_weight) < 2:
        logger.warning("Only %d complete block(s) fit in N=%d", len(block_weight), N)
    if conditional:
        logger.warning(
            "c is not monotone on the prefix; boundaries are truncation-conditional"
        )
    logger.info("Case one: %d blocks up to index %d", len(block_weight), boundaries[-1])
    return BlockPartition(
        case=PartitionCase.CASE_ONE,
        N=N,
        boundaries=boundaries,
        block_weight=block_weight,
        block_inf_c=block_inf_c,
        r_block=r_block,
        truncation_conditional=conditional,
    )


def build_blocks_case2(
    a: Sequence[float], c: Sequence[float], N: Optional[int] = None
) -> BlockPartition:
    """
    Case-two partition: minimal groups of a-weight >= 1, then case one on the
    group minima of c weighted by the group weights.

    Raises:
        BudgetExhaustedError: no group reaches weight one within N terms
        PartitionError: the group minima never stay above 1
    """
    N = min(len(a), len(c)) if N is None else N
    if len(a) < N or len(c) < N:
        raise ValueError(f"need {N} terms of a and c")
    cuts = [0]
    weights: List[float] = []
    acc = CompensatedSum()
    for n in range(1, N + 1):
        value = a[n - 1]
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"a_{n} = {value!r} is not positive")
        acc.add(value)
        if acc.at_least(1.0):
            cuts.append(n)
            weights.append(acc.value)
            acc = CompensatedSum()
    if len(cuts) < 2:
        raise BudgetExhaustedError(
            f"the first group never reaches weight 1 within {N} terms "
            f"(partial sum {acc.value!r}); the series may converge"
        )
    if cuts[-1] < N:
        logger.debug("Dropping the open group (%d, %d]", cuts[-1], N)
    minima = [min(c[lo:hi]) for lo, hi in zip(cuts, cuts[1:])]
    inner = build_blocks_case1(minima, weights)

    covered = inner.boundaries[-1]
    r_group = []
    for k, (lo, hi) in enumerate(zip(inner.boundaries, inner.boundaries[1:])):
        r_group.extend([inner.r_block[k]] * (hi - lo))
    logger.info(
        "Case two: %d groups scanned, %d covered by %d blocks (horizon %d)",
        len(weights),
        covered,
        inner.blocks,
        cuts[covered],
    )
    return BlockPartition(
        case=PartitionCase.CASE_TWO,
        N=N,
        boundaries=cuts[: covered + 1],
        block_weight=weights[:covered],
        block_inf_c=minima[:covered],
        r_block=r_group,
        truncation_conditional=inner.truncation_conditional,
        inner=inner,
        scanned_groups=len(weights),
    )


def emit_r(
    p: BlockPartition, strictify: bool = True, N: Optional[int] = None
) -> RSequence:
    """
    Expand a partition into r_1..r_H, H = min(N, horizon).

    The base value on a block is its r_block entry; strictification multiplies
    r_n by (1 + 1/n), which makes r strictly decreasing and at most doubles it.
    """
    horizon = p.horizon if N is None else min(N, p.horizon)
    base: List[float] = []
    for r, lo, hi in zip(p.r_block, p.boundaries, p.boundaries[1:]):
        base.extend([r] * (min(hi, horizon) - lo))
        if hi >= horizon:
            break
    if strictify:
        values = [(1.0 + 1.0 / n) * r for n, r in enumerate(base, start=1)]
    else:
        values = list(base)
    return RSequence(values=values, base=base, strictified=strictify)


BlockPartition.model_rebuild()
