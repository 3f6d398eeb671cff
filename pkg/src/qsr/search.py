"""Consistency decision by refinement search.

Composite labels are split down to base relations in a depth-first search
with algebraic closure as the propagation step.  Closure alone is sound but
not complete: a closed atomic network proves consistency only for calculi
whose ``acl_decides_atomic`` flag says so.  With the flag unset or ``no``,
an atomic closed leaf yields the verdict ``closed_unknown``; an exhausted
search yields ``inconsistent`` regardless of the flag.

Branching picks the smallest non-singleton cell first (ties by lowest pair
index) and tries base relations in declaration order, so node counts are
reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .closure import a_closure
from .core import CalculusSpec
from .models import FiniteInterpretation, brute_force_solve
from .network import ConstraintNetwork, FULL


class Verdict(Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    CLOSED_UNKNOWN = "closed_unknown"


@dataclass
class Decision:
    verdict: Verdict
    witness: Optional[ConstraintNetwork]
    nodes_explored: int


_UNKNOWN_LEAF = object()


def _pick_cell(net: ConstraintNetwork) -> Optional[tuple[int, int]]:
    n = len(net.var_names)
    best: Optional[tuple[int, int]] = None
    best_size = 0
    for i in range(n):
        for j in range(i + 1, n):
            size = net.cells[i * n + j].bit_count()
            if size > 1 and (best is None or size < best_size):
                best, best_size = (i, j), size
    return best


def decide(net: ConstraintNetwork) -> Decision:
    """Depth-first refinement search over ``net``; the input is not modified."""
    calc = net.calculus
    atomic_decides = calc.flags.acl_decides_atomic == "yes"
    nodes = 0

    def search(current: ConstraintNetwork):
        nonlocal nodes
        nodes += 1
        out = a_closure(current)
        if not out.closed:
            return None
        closed = out.network.to_full() if out.network.storage_mode != FULL else out.network
        cell = _pick_cell(closed)
        if cell is None:
            return closed if atomic_decides else _UNKNOWN_LEAF
        i, j = cell
        n = len(closed.var_names)
        mask = closed.cells[i * n + j]
        conv = calc.converse_mask
        bit = 1
        while bit <= mask:
            if mask & bit:
                child = closed.copy()
                child.cells[i * n + j] = bit
                child.cells[j * n + i] = conv(bit)
                found = search(child)
                if found is not None:
                    return found
            bit <<= 1
        return None

    result = search(net.copy())
    if result is None:
        return Decision(Verdict.INCONSISTENT, None, nodes)
    if result is _UNKNOWN_LEAF:
        return Decision(Verdict.CLOSED_UNKNOWN, None, nodes)
    return Decision(Verdict.CONSISTENT, result, nodes)


def set_completeness(calculus: CalculusSpec, flag: str) -> None:
    """Record whether algebraic closure decides atomic networks of ``calculus``."""
    if flag not in ("yes", "no", "unknown"):
        raise ValueError("completeness flag must be 'yes', 'no' or 'unknown'")
    calculus.flags.acl_decides_atomic = flag


@dataclass
class CompletenessResult:
    flag: str  # "yes" or "no"
    networks_checked: int
    counterexample: Optional[ConstraintNetwork]


def derive_completeness(
    calculus: CalculusSpec,
    model: FiniteInterpretation,
    n_vars: int,
    budget: int = 2_000_000,
    apply: bool = False,
) -> CompletenessResult:
    """Check, exhaustively, whether every closed atomic ``n_vars``-variable
    network is satisfiable in ``model``.

    Enumerates all |Rel| ** (n_vars choose 2) atomic networks, closes each,
    and brute-forces the survivors against the model.  The answer is specific
    to the model and the variable count: a calculus complete over its usual
    infinite universe can fail over a small finite one.  With ``apply`` the
    derived flag is stored on the calculus.
    """
    n_syms = len(calculus.symbols)
    pairs = [(i, j) for i in range(n_vars) for j in range(i + 1, n_vars)]
    total = n_syms ** len(pairs)
    if total > budget:
        raise ValueError(f"{total} atomic networks exceed the budget of {budget}")

    names = [f"x{k}" for k in range(n_vars)]
    checked = 0
    counterexample = None
    for combo in itertools.product(range(n_syms), repeat=len(pairs)):
        net = ConstraintNetwork(calculus, names, storage_mode=FULL)
        n = n_vars
        for (i, j), sym_idx in zip(pairs, combo):
            bit = 1 << sym_idx
            net.cells[i * n + j] = bit
            net.cells[j * n + i] = calculus.converse_mask(bit)
        checked += 1
        out = a_closure(net)
        if not out.closed:
            continue
        if brute_force_solve(net, model, budget=budget) is None:
            counterexample = net
            break

    flag = "no" if counterexample is not None else "yes"
    if apply:
        set_completeness(calculus, flag)
    return CompletenessResult(flag, checked, counterexample)
