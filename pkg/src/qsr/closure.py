"""Algebraic closure of constraint networks, with storage and revision geared
to the calculus's actual algebraic properties.

The engine enforces strong 2-consistency (each cell intersected with the
converse of its opposite cell), then drives the triangle refinement

    C[i][j] <- C[i][j] & (C[i][k] . C[k][j])

to its greatest fixpoint with a PC-2 style worklist.  Two per-calculus
properties steer it:

* If the converse table is not an involutive permutation (``ra7_holds`` is
  false or unknown), opposite cells carry independent information, so the
  full matrix must be stored and both directions seeded (flag ``s``).
  Otherwise only i < j cells are authoritative and the opposite direction is
  reconstructed by converse on lookup.
* If converse does not distribute over composition (``ra9_holds`` false or
  unknown) or ``s`` is set, a revision must refine C[j][i] independently and
  cross-tighten each direction with the converse of the other; optimized
  reasoners that skip this produce wrong closures on such calculi.

Inconsistency (an empty cell) is an outcome, not an exception: the result
carries the offending pair.

``naive_closure`` is an independent reference: it iterates the refinement
rule over all ordered triples and both cell directions, together with the
2-consistency rule, until nothing changes.  Both algorithms compute the same
greatest fixpoint regardless of worklist discipline.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .network import FULL, ConstraintNetwork

FIFO = "fifo"
LIFO = "lifo"
SHUFFLED = "shuffled"


class ClosureStatus(Enum):
    CLOSED = "closed"
    INCONSISTENT = "inconsistent"


@dataclass
class ClosureOutcome:
    status: ClosureStatus
    network: ConstraintNetwork
    revisions: int
    queue_pops: int
    empty_pair: Optional[tuple[str, str]] = None

    @property
    def closed(self) -> bool:
        return self.status is ClosureStatus.CLOSED


@dataclass
class ReviseOutcome:
    updated: bool
    empty_pair: Optional[tuple[int, int]] = None

    @property
    def inconsistent(self) -> bool:
        return self.empty_pair is not None


def lookup(net: ConstraintNetwork, i: int, j: int, s: bool) -> int:
    """Retrieve the relation mask for (i, j) under storage flag ``s``.

    With full storage (``s`` true) or i < j the cell is read verbatim; in
    triangular storage the lower half is the converse of the mirror cell.
    """
    if i == j:
        raise ValueError("lookup is defined for off-diagonal pairs only")
    n = len(net.var_names)
    if s or i < j:
        return net.cells[i * n + j]
    return net.calculus.converse_mask(net.cells[j * n + i])


def _store(cells: list[int], n: int, conv, i: int, j: int, mask: int, s: bool) -> None:
    # dual of lookup: in triangular storage a write to the lower half lands
    # in the mirror cell as the converse
    if s or i < j:
        cells[i * n + j] = mask
    else:
        cells[j * n + i] = conv(mask)


def revise(net: ConstraintNetwork, i: int, j: int, k: int, s: Optional[bool] = None) -> ReviseOutcome:
    """Refine the pair (i, j) by composing through the third variable ``k``.

    Mutates ``net`` in place.  When the calculus fails converse-composition
    distributivity (or full storage is in use), C[j][i] is refined
    independently and both directions are cross-tightened with each other's
    converse.  Returns whether anything changed, plus the offending pair if a
    cell became empty (in which case the write is withheld).
    """
    if len({i, j, k}) != 3:
        raise ValueError("revise needs pairwise distinct i, j, k")
    calc = net.calculus
    if s is None:
        s = calc.flags.ra7_holds is not True
    ra9 = calc.flags.ra9_holds is True
    n = len(net.var_names)
    cells = net.cells
    conv = calc.converse_mask
    comp = calc.compose_masks

    old_ij = lookup(net, i, j, s)
    r = old_ij & comp(lookup(net, i, k, s), lookup(net, k, j, s))
    updated = False
    if not ra9 or s:
        old_ji = lookup(net, j, i, s)
        rp = old_ji & comp(lookup(net, j, k, s), lookup(net, k, i, s))
        r &= conv(rp)
        rp &= conv(r)
        if rp != old_ji:
            if rp == 0:
                return ReviseOutcome(updated=False, empty_pair=(j, i))
            updated = True
            _store(cells, n, conv, j, i, rp, s)
            old_ij = lookup(net, i, j, s)
    if r != old_ij:
        if r == 0:
            return ReviseOutcome(updated=updated, empty_pair=(i, j))
        updated = True
        _store(cells, n, conv, i, j, r, s)
    return ReviseOutcome(updated=updated)


def a_closure(
    net: ConstraintNetwork,
    queue_order: str = FIFO,
    rng: Optional[random.Random] = None,
    seed: Optional[int] = None,
) -> ClosureOutcome:
    """Close ``net`` under the triangle refinement rule; pure, input untouched.

    ``queue_order`` selects the worklist discipline (``fifo``, ``lifo`` or
    ``shuffled``); the fixpoint is the same for all of them.
    """
    if queue_order not in (FIFO, LIFO, SHUFFLED):
        raise ValueError(f"unknown queue order {queue_order!r}")
    if queue_order == SHUFFLED and rng is None:
        rng = random.Random(seed)

    calc = net.calculus
    work = net.to_full() if net.storage_mode != FULL else net.copy()
    n = len(work.var_names)
    cells = work.cells
    conv = calc.converse_mask
    comp = calc.compose_masks
    revisions = 0
    pops = 0

    mirror_stale = False

    def outcome(status: ClosureStatus, pair: Optional[tuple[int, int]]) -> ClosureOutcome:
        # under triangular discipline only i < j cells were written during the
        # queue phase; mirror them back so a full-mode result is coherent
        if mirror_stale:
            for a in range(n):
                for b in range(a + 1, n):
                    cells[b * n + a] = conv(cells[a * n + b])
        result = work if net.storage_mode == FULL else work.to_triangular()
        names = None
        if pair is not None:
            names = (work.var_names[pair[0]], work.var_names[pair[1]])
        return ClosureOutcome(status, result, revisions, pops, names)

    # pre-existing empty cells are already an inconsistency
    for i in range(n):
        for j in range(n):
            if i != j and cells[i * n + j] == 0:
                return outcome(ClosureStatus.INCONSISTENT, (i, j))

    # Strong 2-consistency: intersect each cell with the converse of its
    # mirror, repeated to fixpoint (a single sweep suffices only when the
    # converse is an involutive permutation).
    changed = True
    while changed:
        changed = False
        for i in range(n):
            base = i * n
            for j in range(n):
                if i == j:
                    continue
                tight = cells[base + j] & conv(cells[j * n + i])
                if tight != cells[base + j]:
                    if tight == 0:
                        return outcome(ClosureStatus.INCONSISTENT, (i, j))
                    cells[base + j] = tight
                    revisions += 1
                    changed = True

    s = calc.flags.ra7_holds is not True
    ra9 = calc.flags.ra9_holds is True
    mirror_stale = not s

    if s:
        seed_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        seed_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    queue: deque[tuple[int, int]] = deque(seed_pairs)
    in_queue = set(seed_pairs)

    def enqueue(i: int, j: int) -> None:
        if s:
            # conservative: an update refines both directions, requeue both
            for p in ((i, j), (j, i)):
                if p not in in_queue:
                    in_queue.add(p)
                    queue.append(p)
        else:
            p = (i, j) if i < j else (j, i)
            if p not in in_queue:
                in_queue.add(p)
                queue.append(p)

    def pop() -> tuple[int, int]:
        if queue_order == FIFO:
            p = queue.popleft()
        elif queue_order == LIFO:
            p = queue.pop()
        else:
            idx = rng.randrange(len(queue))
            queue.rotate(-idx)
            p = queue.popleft()
            queue.rotate(idx)
        in_queue.discard(p)
        return p

    # inlined revise(): the loop below is the hot path
    def do_revise(i: int, j: int, k: int) -> tuple[bool, Optional[tuple[int, int]]]:
        nonlocal revisions
        if s or i < j:
            old_ij = cells[i * n + j]
        else:
            old_ij = conv(cells[j * n + i])
        r = old_ij & comp(
            cells[i * n + k] if s or i < k else conv(cells[k * n + i]),
            cells[k * n + j] if s or k < j else conv(cells[j * n + k]),
        )
        updated = False
        if not ra9 or s:
            if s or j < i:
                old_ji = cells[j * n + i]
            else:
                old_ji = conv(cells[i * n + j])
            rp = old_ji & comp(
                cells[j * n + k] if s or j < k else conv(cells[k * n + j]),
                cells[k * n + i] if s or k < i else conv(cells[i * n + k]),
            )
            r &= conv(rp)
            rp &= conv(r)
            if rp != old_ji:
                if rp == 0:
                    return False, (j, i)
                updated = True
                revisions += 1
                _store(cells, n, conv, j, i, rp, s)
                old_ij = cells[i * n + j] if s or i < j else conv(cells[j * n + i])
        if r != old_ij:
            if r == 0:
                return updated, (i, j)
            updated = True
            revisions += 1
            _store(cells, n, conv, i, j, r, s)
        return updated, None

    while queue:
        i, j = pop()
        pops += 1
        for k in range(n):
            if k == i or k == j:
                continue
            updated, empty = do_revise(i, k, j)
            if empty is not None:
                return outcome(ClosureStatus.INCONSISTENT, empty)
            if updated:
                enqueue(i, k)
            updated, empty = do_revise(k, j, i)
            if empty is not None:
                return outcome(ClosureStatus.INCONSISTENT, empty)
            if updated:
                enqueue(k, j)

    return outcome(ClosureStatus.CLOSED, None)


def naive_closure(net: ConstraintNetwork) -> ClosureOutcome:
    """Reference closure: sweep all rules over the full matrix until stable.

    Kept deliberately free of worklists, storage tricks and the distributivity
    shortcut so it can serve as an independent check of :func:`a_closure`.
    """
    calc = net.calculus
    work = net.to_full()
    n = len(work.var_names)
    cells = work.cells
    conv = calc.converse_mask
    comp = calc.compose_masks
    revisions = 0

    def fail(i: int, j: int) -> ClosureOutcome:
        result = work if net.storage_mode == FULL else work.to_triangular()
        return ClosureOutcome(
            ClosureStatus.INCONSISTENT,
            result,
            revisions,
            0,
            (work.var_names[i], work.var_names[j]),
        )

    for i in range(n):
        for j in range(n):
            if i != j and cells[i * n + j] == 0:
                return fail(i, j)

    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                tight = cells[i * n + j] & conv(cells[j * n + i])
                if tight != cells[i * n + j]:
                    if tight == 0:
                        return fail(i, j)
                    cells[i * n + j] = tight
                    revisions += 1
                    changed = True
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                ij = i * n + j
                for k in range(n):
                    if k == i or k == j:
                        continue
                    tight = cells[ij] & comp(cells[i * n + k], cells[k * n + j])
                    if tight != cells[ij]:
                        if tight == 0:
                            return fail(i, j)
                        cells[ij] = tight
                        revisions += 1
                        changed = True

    result = work if net.storage_mode == FULL else work.to_triangular()
    return ClosureOutcome(ClosureStatus.CLOSED, result, revisions, 0)
