"""Qualitative constraint networks: construction, normalization, file I/O, random generation.

A network holds exactly one composite relation per ordered pair of variables;
"unconstrained" is the universal relation, never a missing cell.  Diagonal
cells are fixed to the calculus's identity relation when one is designated,
else to the universal relation, and are never revised (networks are treated
as 1-consistent).

Two storage modes exist.  In ``full`` mode every ordered pair is
authoritative.  In ``triangular`` mode only cells with i < j are
authoritative and the opposite direction is derived via converse on access;
this halves storage but is lossless only for calculi whose converse table is
an involutive permutation.

Network files are line oriented with ``#`` comments:

    network "chain"
    calculus pc1
    vars x0 x1 x2
    x0 (<) x1
    x1 (< =) x2

Duplicate pair lines are intersected, and a line for (y, x) constrains
(x, y) through its converse, exactly like :func:`normalize`.
"""

from __future__ import annotations

import random
import shlex
from typing import Iterable, Optional, Sequence

from .core import CalculusError, CalculusMismatchError, CalculusSpec, RelationSet

FULL = "full"
TRIANGULAR = "triangular"

# a valuation assigns one universe element to every variable
Valuation = dict[str, str]


class NetworkError(Exception):
    """Malformed network data or misuse of network operations."""


class ConstraintNetwork:
    """A qualitative CSP instance over one calculus."""

    __slots__ = ("calculus", "var_names", "cells", "storage_mode", "name", "_index")

    def __init__(
        self,
        calculus: CalculusSpec,
        var_names: Sequence[str],
        storage_mode: str = FULL,
        name: str = "",
    ) -> None:
        if len(set(var_names)) != len(var_names):
            raise NetworkError("variable names must be distinct")
        if len(var_names) < 1:
            raise NetworkError("a network needs at least one variable")
        if storage_mode not in (FULL, TRIANGULAR):
            raise NetworkError(f"unknown storage mode {storage_mode!r}")
        self.calculus = calculus
        self.var_names = tuple(var_names)
        self.storage_mode = storage_mode
        self.name = name
        self._index = {v: i for i, v in enumerate(self.var_names)}
        n = len(self.var_names)
        diag = calculus.identity_mask if calculus.identity_mask is not None else calculus.universal
        cells = [calculus.universal] * (n * n)
        for i in range(n):
            cells[i * n + i] = diag
        self.cells = cells

    # -- indexing ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.var_names)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise NetworkError(f"unknown variable {name!r}") from None

    def get_mask(self, i: int, j: int) -> int:
        n = len(self.var_names)
        if self.storage_mode == TRIANGULAR and i > j:
            return self.calculus.converse_mask(self.cells[j * n + i])
        return self.cells[i * n + j]

    def set_mask(self, i: int, j: int, mask: int) -> None:
        if i == j:
            raise NetworkError("diagonal cells are fixed and cannot be assigned")
        n = len(self.var_names)
        if self.storage_mode == TRIANGULAR and i > j:
            self.cells[j * n + i] = self.calculus.converse_mask(mask)
        else:
            self.cells[i * n + j] = mask

    def __getitem__(self, pair: tuple[str, str]) -> RelationSet:
        x, y = pair
        return self.calculus.from_mask(self.get_mask(self.var_index(x), self.var_index(y)))

    def __setitem__(self, pair: tuple[str, str], rel: RelationSet) -> None:
        if rel.calculus is not self.calculus:
            raise CalculusMismatchError("relation set belongs to a different calculus")
        x, y = pair
        self.set_mask(self.var_index(x), self.var_index(y), rel.bits)

    # -- structure ---------------------------------------------------------

    def copy(self) -> "ConstraintNetwork":
        dup = ConstraintNetwork.__new__(ConstraintNetwork)
        dup.calculus = self.calculus
        dup.var_names = self.var_names
        dup.cells = list(self.cells)
        dup.storage_mode = self.storage_mode
        dup.name = self.name
        dup._index = self._index
        return dup

    def to_full(self) -> "ConstraintNetwork":
        """Materialize both directions; derived cells are filled via converse."""
        dup = self.copy()
        if self.storage_mode == TRIANGULAR:
            n = len(self.var_names)
            conv = self.calculus.converse_mask
            for i in range(n):
                for j in range(i + 1, n):
                    dup.cells[j * n + i] = conv(dup.cells[i * n + j])
            dup.storage_mode = FULL
        return dup

    def to_triangular(self) -> "ConstraintNetwork":
        """Keep only i < j cells as authoritative.

        Lossless exactly when the lower triangle already mirrors the upper
        one through converse, which a calculus with an involutive converse
        guarantees for normalized networks.
        """
        dup = self.copy()
        dup.storage_mode = TRIANGULAR
        return dup

    def has_empty_cell(self) -> bool:
        n = len(self.var_names)
        return any(
            self.cells[i * n + j] == 0 for i in range(n) for j in range(n) if i != j
        )

    @property
    def is_trivially_inconsistent(self) -> bool:
        return self.has_empty_cell()

    def is_atomic(self) -> bool:
        """Every authoritative off-diagonal cell is a single base relation."""
        n = len(self.var_names)
        for i in range(n):
            for j in range(i + 1, n):
                if self.cells[i * n + j].bit_count() != 1:
                    return False
                if self.storage_mode == FULL and self.cells[j * n + i].bit_count() != 1:
                    return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstraintNetwork):
            return NotImplemented
        return (
            self.calculus is other.calculus
            and self.var_names == other.var_names
            and self.storage_mode == other.storage_mode
            and self.cells == other.cells
        )

    def __repr__(self) -> str:
        return (
            f"ConstraintNetwork({self.name or '<anon>'}, {self.calculus.name}, "
            f"{len(self.var_names)} vars, {self.storage_mode})"
        )

    # -- export -------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f'network "{self.name or "net"}"']
        lines.append(f"calculus {self.calculus.name}")
        lines.append("vars " + " ".join(self.var_names))
        n = len(self.var_names)
        fm = self.calculus.format_mask
        for i in range(n):
            for j in range(i + 1, n):
                mask = self.get_mask(i, j)
                if mask != self.calculus.universal:
                    lines.append(f"{self.var_names[i]} {fm(mask)} {self.var_names[j]}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        n = len(self.var_names)
        return {
            "name": self.name,
            "calculus": self.calculus.name,
            "vars": list(self.var_names),
            "storage_mode": self.storage_mode,
            "matrix": [
                [list(self.calculus.symbols_of(self.get_mask(i, j))) for j in range(n)]
                for i in range(n)
            ],
        }


def normalize(
    calculus: CalculusSpec,
    edges: Iterable[tuple[str, RelationSet, str]],
    var_names: Optional[Sequence[str]] = None,
    name: str = "",
) -> ConstraintNetwork:
    """Integrate a list of directed constraint edges into the unique normalized network.

    For every ordered pair the result is the intersection of all constraints
    given for that pair and the converses of all constraints given for the
    opposite direction; pairs without edges are universal.  When
    ``var_names`` is supplied, edges over undeclared variables are an error;
    otherwise variables are collected in order of first appearance.

    The result may contain empty cells (a trivially inconsistent network);
    normalization reports, it does not reject.
    """
    edges = list(edges)
    for x, rel, y in edges:
        if rel.calculus is not calculus:
            raise CalculusMismatchError(
                f"edge {x!r}-{y!r} uses a relation set of calculus {rel.calculus.name!r}"
            )
    if var_names is None:
        seen: list[str] = []
        for x, _, y in edges:
            if x not in seen:
                seen.append(x)
            if y not in seen:
                seen.append(y)
        var_names = seen
    net = ConstraintNetwork(calculus, var_names, storage_mode=FULL, name=name)
    n = len(net.var_names)
    for x, rel, y in edges:
        i, j = net.var_index(x), net.var_index(y)
        if i == j:
            raise NetworkError(f"self-loop constraint on variable {x!r}")
        net.cells[i * n + j] &= rel.bits
        net.cells[j * n + i] &= calculus.converse_mask(rel.bits)
    return net


def parse_network(text: str, calculus: Optional[CalculusSpec] = None) -> ConstraintNetwork:
    """Parse network-file text.

    ``calculus`` supplies the calculus to interpret symbols in; the file's
    ``calculus`` line must match its name.  Without an explicit calculus the
    name is resolved against the builtin registry.
    """
    from . import registry

    name = ""
    declared_calculus: Optional[str] = None
    var_names: Optional[list[str]] = None
    edges: list[tuple[str, str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        pos = raw.find("#")
        line = (raw if pos < 0 else raw[:pos]).strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "network":
            try:
                parts = shlex.split(line)
            except ValueError as exc:
                raise NetworkError(f"line {lineno}: {exc}") from None
            if len(parts) != 2:
                raise NetworkError(f'line {lineno}: expected: network "<name>"')
            name = parts[1]
        elif head == "calculus":
            if len(tokens) != 2:
                raise NetworkError(f"line {lineno}: expected: calculus <name>")
            declared_calculus = tokens[1]
        elif head == "vars":
            if var_names is not None:
                raise NetworkError(f"line {lineno}: duplicate vars clause")
            var_names = tokens[1:]
            if not var_names:
                raise NetworkError(f"line {lineno}: vars clause needs at least one name")
        else:
            if len(tokens) < 3:
                raise NetworkError(f"line {lineno}: expected: <var> (<sym>+) <var>")
            x, y = tokens[0], tokens[-1]
            group = " ".join(tokens[1:-1])
            if not (group.startswith("(") and group.endswith(")")):
                raise NetworkError(f"line {lineno}: constraint needs a (sym ...) group")
            edges.append((x, group[1:-1], y, lineno))

    if declared_calculus is None:
        raise NetworkError("missing calculus clause")
    if calculus is None:
        calculus = registry.builtin(declared_calculus)
    elif calculus.name != declared_calculus:
        raise NetworkError(
            f"network declares calculus {declared_calculus!r} "
            f"but {calculus.name!r} was supplied"
        )
    if var_names is None:
        raise NetworkError("missing vars clause")

    rel_edges = []
    for x, group, y, lineno in edges:
        try:
            rel = calculus.relation_from(group.split())
        except CalculusError as exc:
            raise NetworkError(f"line {lineno}: {exc}") from None
        rel_edges.append((x, rel, y))
    return normalize(calculus, rel_edges, var_names=var_names, name=name)


def load_network(path: str, calculus: Optional[CalculusSpec] = None) -> ConstraintNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read(), calculus)


def satisfies(net: ConstraintNetwork, valuation: Valuation, model) -> bool:
    """Does ``valuation`` (variable -> universe element) solve ``net`` in ``model``?

    True iff for every ordered pair of variables the assigned element pair
    lies in the interpretation of the pair's constraint.
    """
    if model.calculus is not net.calculus:
        raise CalculusMismatchError("model interprets a different calculus")
    missing = [v for v in net.var_names if v not in valuation]
    if missing:
        raise NetworkError(f"valuation is not total, missing: {', '.join(missing)}")
    n = len(net.var_names)
    values = [valuation[v] for v in net.var_names]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            pair = (values[i], values[j])
            if not model.mask_contains(net.get_mask(i, j), pair):
                return False
    return True


def random_network(
    calculus: CalculusSpec,
    n_vars: int,
    density: float,
    label_size: str = "uniform",
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> ConstraintNetwork:
    """Generate a random normalized network, deterministic under ``seed``.

    ``density`` is the fraction of unordered off-diagonal pairs that receive
    a constraint; the rest stay universal.  ``label_size`` selects the label
    distribution: ``"uniform"`` draws uniformly among non-empty proper
    composite relations, ``"singletons"`` draws a single base relation.
    """
    if n_vars < 2:
        raise NetworkError("random networks need at least 2 variables")
    if not 0.0 <= density <= 1.0:
        raise NetworkError("density must lie in [0, 1]")
    if label_size not in ("uniform", "singletons"):
        raise NetworkError(f"unknown label distribution {label_size!r}")
    if rng is None:
        rng = random.Random(seed)

    names = [f"x{i}" for i in range(n_vars)]
    net = ConstraintNetwork(calculus, names, storage_mode=FULL, name="random")
    pairs = [(i, j) for i in range(n_vars) for j in range(i + 1, n_vars)]
    k = round(density * len(pairs))
    chosen = rng.sample(pairs, k) if k < len(pairs) else pairs
    n = n_vars
    u = calculus.universal
    nsyms = len(calculus.symbols)
    for i, j in sorted(chosen):
        if label_size == "singletons":
            mask = 1 << rng.randrange(nsyms)
        else:
            mask = rng.randrange(1, u)  # non-empty, proper
        net.cells[i * n + j] = mask
        net.cells[j * n + i] = calculus.converse_mask(mask)
    return net
