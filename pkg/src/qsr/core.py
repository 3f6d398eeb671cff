"""Composite relations and the symbolic operations of a binary qualitative calculus.

A calculus is given by a finite set of base relation symbols together with a
converse table (one entry per symbol, each entry itself a set of symbols) and
a dense composition table (one set-valued cell per ordered pair of symbols).
Composite relations are subsets of the base symbols and are represented as
bit vectors: bit ``i`` stands for the ``i``-th symbol in declaration order.
Converse and composition extend from symbols to composite relations by union:

    conv(R) = union of conv(r) for r in R
    R . S   = union of (r . s) for r in R, s in S

Widths are dynamic (calculi range from a handful to well over a thousand base
relations); masks are plain Python integers.  The composition table is stored
dense, |Rel|**2 cells, which stays below ~4M cells for |Rel| <= 2048.  For
small calculi the extensions to composite arguments are precomputed
(2**|Rel| entries), making closure engines cheap table lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

# Precompute the full composite tables only while they stay small:
# converse needs 2**n ints, composition 4**n.
_FULL_CONV_LIMIT = 14
_FULL_COMP_LIMIT = 8


class CalculusError(Exception):
    """Malformed calculus data or misuse of calculus operations."""


class CalculusMismatchError(CalculusError):
    """Operation over relation sets owned by different calculi."""


class UnknownSymbolError(CalculusError):
    """A relation symbol that the calculus does not declare."""


@dataclass
class CalculusFlags:
    """Cached per-calculus properties consumed by the reasoning engines.

    ``ra7_holds``/``ra9_holds`` are tri-state: ``None`` means unknown, in
    which case the closure engine takes the safe (slow) branch.
    ``acl_decides_atomic`` records whether algebraic closure decides
    consistency of atomic networks: ``"yes"``, ``"no"`` or ``"unknown"``.
    """

    ra7_holds: Optional[bool] = None
    ra9_holds: Optional[bool] = None
    acl_decides_atomic: str = "unknown"


class CalculusSpec:
    """A binary qualitative calculus: symbols, identity, converse and composition tables.

    Instances are immutable after construction (except for the ``flags``
    sidecar, which caches analysis results) and may be shared freely across
    threads or workers.
    """

    __slots__ = (
        "name",
        "symbols",
        "identity_mask",
        "converse_row",
        "composition_row",
        "flags",
        "notes",
        "source",
        "universal",
        "_index",
        "_conv_full",
        "_comp_full",
        "_comp_cache",
    )

    def __init__(
        self,
        name: str,
        symbols: Iterable[str],
        identity: Optional[Iterable[str]],
        converse: dict[str, Iterable[str]],
        composition: dict[tuple[str, str], Iterable[str]],
        flags: Optional[CalculusFlags] = None,
        notes: Iterable[str] = (),
    ) -> None:
        self.name = name
        self.symbols: tuple[str, ...] = tuple(symbols)
        if not self.symbols:
            raise CalculusError("a calculus needs at least one base relation")
        if len(set(self.symbols)) != len(self.symbols):
            raise CalculusError("base relation symbols must be pairwise distinct")
        self._index = {s: i for i, s in enumerate(self.symbols)}
        n = len(self.symbols)
        self.universal = (1 << n) - 1

        self.identity_mask: Optional[int]
        if identity is None:
            self.identity_mask = None
        else:
            self.identity_mask = self.mask_of(identity)

        conv = []
        for s in self.symbols:
            if s not in converse:
                raise CalculusError(f"converse table is not total: missing entry for {s!r}")
            conv.append(self.mask_of(converse[s]))
        self.converse_row: tuple[int, ...] = tuple(conv)

        rows = []
        for a in self.symbols:
            row = []
            for b in self.symbols:
                if (a, b) not in composition:
                    raise CalculusError(
                        f"composition table is not total: missing cell ({a!r}, {b!r})"
                    )
                row.append(self.mask_of(composition[(a, b)]))
            rows.append(tuple(row))
        self.composition_row: tuple[tuple[int, ...], ...] = tuple(rows)

        self.flags = flags if flags is not None else CalculusFlags()
        self.notes: tuple[str, ...] = tuple(notes)
        self.source = None  # provenance record, filled in by the registry

        self._conv_full: Optional[list[int]] = None
        self._comp_full: Optional[list[list[int]]] = None
        self._comp_cache: dict[tuple[int, int], int] = {}

    # -- symbol/mask plumbing ------------------------------------------------

    def __len__(self) -> int:
        return len(self.symbols)

    def symbol_index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownSymbolError(
                f"calculus {self.name!r} has no base relation {symbol!r}"
            ) from None

    def mask_of(self, symbols: Iterable[str]) -> int:
        mask = 0
        for s in symbols:
            mask |= 1 << self.symbol_index(s)
        return mask

    def symbols_of(self, mask: int) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.symbols) if mask >> i & 1)

    def format_mask(self, mask: int) -> str:
        return "(" + " ".join(self.symbols_of(mask)) + ")"

    # -- operations on raw masks ---------------------------------------------

    def converse_mask(self, mask: int) -> int:
        full = self._conv_full
        if full is None:
            if len(self.symbols) <= _FULL_CONV_LIMIT:
                full = self._build_conv_full()
            else:
                out = 0
                row = self.converse_row
                m = mask
                while m:
                    low = m & -m
                    out |= row[low.bit_length() - 1]
                    m ^= low
                return out
        return full[mask]

    def compose_masks(self, a: int, b: int) -> int:
        full = self._comp_full
        if full is None:
            if len(self.symbols) <= _FULL_COMP_LIMIT:
                full = self._build_comp_full()
            else:
                return self._compose_large(a, b)
        return full[a][b]

    def complement_mask(self, mask: int) -> int:
        return self.universal & ~mask

    def _build_conv_full(self) -> list[int]:
        # conv(m) = conv(m without lowest bit) | conv(lowest bit); masks are
        # enumerated in increasing order so the smaller argument is ready.
        row = self.converse_row
        full = [0] * (self.universal + 1)
        for m in range(1, self.universal + 1):
            low = m & -m
            full[m] = full[m ^ low] | row[low.bit_length() - 1]
        self._conv_full = full
        return full

    def _build_comp_full(self) -> list[list[int]]:
        size = self.universal + 1
        rows = self.composition_row
        # first the single-symbol rows extended to composite right arguments
        sym_rows = []
        for row in rows:
            ext = [0] * size
            for m in range(1, size):
                low = m & -m
                ext[m] = ext[m ^ low] | row[low.bit_length() - 1]
            sym_rows.append(ext)
        full: list[list[int]] = [[0] * size]
        for a in range(1, size):
            low = a & -a
            base = full[a ^ low]
            srow = sym_rows[low.bit_length() - 1]
            full.append([base[b] | srow[b] for b in range(size)])
        self._comp_full = full
        return full

    def _compose_large(self, a: int, b: int) -> int:
        cache = self._comp_cache
        hit = cache.get((a, b))
        if hit is not None:
            return hit
        rows = self.composition_row
        out = 0
        m = a
        while m:
            low = m & -m
            i = low.bit_length() - 1
            row = rows[i]
            key = (low, b)
            rmask = cache.get(key)
            if rmask is None:
                rmask = 0
                bb = b
                while bb:
                    lb = bb & -bb
                    rmask |= row[lb.bit_length() - 1]
                    bb ^= lb
                cache[key] = rmask
            out |= rmask
            m ^= low
        cache[(a, b)] = out
        return out

    # -- RelationSet constructors ---------------------------------------------

    def relation(self, *symbols: str) -> "RelationSet":
        return RelationSet(self, self.mask_of(symbols))

    def relation_from(self, symbols: Iterable[str]) -> "RelationSet":
        return RelationSet(self, self.mask_of(symbols))

    def from_mask(self, mask: int) -> "RelationSet":
        if mask & ~self.universal:
            raise CalculusError("mask has bits outside the calculus width")
        return RelationSet(self, mask)

    @property
    def universal_relation(self) -> "RelationSet":
        return RelationSet(self, self.universal)

    @property
    def empty_relation(self) -> "RelationSet":
        return RelationSet(self, 0)

    @property
    def identity_relation(self) -> Optional["RelationSet"]:
        if self.identity_mask is None:
            return None
        return RelationSet(self, self.identity_mask)

    # -- equality: structural, flags excluded ----------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CalculusSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.symbols == other.symbols
            and self.identity_mask == other.identity_mask
            and self.converse_row == other.converse_row
            and self.composition_row == other.composition_row
        )

    def __hash__(self) -> int:
        return hash((self.name, self.symbols))

    def __repr__(self) -> str:
        return f"CalculusSpec({self.name!r}, |Rel|={len(self.symbols)})"

    # caches are derived data; keep pickles small for worker processes
    def __getstate__(self):
        return {
            "name": self.name,
            "symbols": self.symbols,
            "identity": None if self.identity_mask is None else self.symbols_of(self.identity_mask),
            "converse": {s: self.symbols_of(m) for s, m in zip(self.symbols, self.converse_row)},
            "composition": {
                (a, b): self.symbols_of(self.composition_row[i][j])
                for i, a in enumerate(self.symbols)
                for j, b in enumerate(self.symbols)
            },
            "flags": self.flags,
            "notes": self.notes,
        }

    def __setstate__(self, state) -> None:
        self.__init__(**state)


class RelationSet:
    """A composite relation: a set of base symbols of one owning calculus.

    Value type; all operations are pure and return fresh instances.  Mixing
    relation sets of different calculi raises :class:`CalculusMismatchError`.
    """

    __slots__ = ("calculus", "bits")

    def __init__(self, calculus: CalculusSpec, bits: int) -> None:
        self.calculus = calculus
        self.bits = bits

    def _check(self, other: "RelationSet") -> None:
        if self.calculus is not other.calculus:
            raise CalculusMismatchError(
                f"relation sets belong to different calculi "
                f"({self.calculus.name!r} vs {other.calculus.name!r})"
            )

    # Boolean structure
    def __or__(self, other: "RelationSet") -> "RelationSet":
        self._check(other)
        return RelationSet(self.calculus, self.bits | other.bits)

    def __and__(self, other: "RelationSet") -> "RelationSet":
        self._check(other)
        return RelationSet(self.calculus, self.bits & other.bits)

    def __invert__(self) -> "RelationSet":
        return RelationSet(self.calculus, self.calculus.complement_mask(self.bits))

    def complement(self) -> "RelationSet":
        return ~self

    # relational structure
    def converse(self) -> "RelationSet":
        return RelationSet(self.calculus, self.calculus.converse_mask(self.bits))

    def compose(self, other: "RelationSet") -> "RelationSet":
        self._check(other)
        return RelationSet(self.calculus, self.calculus.compose_masks(self.bits, other.bits))

    # set protocol
    def __contains__(self, symbol: str) -> bool:
        return bool(self.bits >> self.calculus.symbol_index(symbol) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_universal(self) -> bool:
        return self.bits == self.calculus.universal

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.calculus.symbols_of(self.bits)

    def issubset(self, other: "RelationSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: "RelationSet") -> bool:
        return self.issubset(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationSet):
            return NotImplemented
        return self.calculus is other.calculus and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((id(self.calculus), self.bits))

    def __repr__(self) -> str:
        return f"RelationSet({self.calculus.name}:{self.calculus.format_mask(self.bits)})"


# Operation-style aliases used throughout the toolkit and the docs.

def union(a: RelationSet, b: RelationSet) -> RelationSet:
    return a | b


def intersect(a: RelationSet, b: RelationSet) -> RelationSet:
    return a & b


def complement(a: RelationSet) -> RelationSet:
    return ~a


def converse(r: RelationSet) -> RelationSet:
    return r.converse()


def compose(r: RelationSet, s: RelationSet) -> RelationSet:
    return r.compose(s)


def compute_ra7(spec: CalculusSpec) -> bool:
    """Converse involution on base symbols: conv(conv({r})) == {r} for all r.

    When this holds the converse table is an involutive permutation of the
    symbols, converse distributes over intersection, and a reasoner may store
    only one direction of each constraint.
    """
    for i in range(len(spec.symbols)):
        if spec.converse_mask(spec.converse_row[i]) != 1 << i:
            return False
    return True


def compute_ra9(spec: CalculusSpec) -> bool:
    """Converse-composition distributivity on base pairs: conv(r.s) == conv(s).conv(r)."""
    n = len(spec.symbols)
    for i in range(n):
        for j in range(n):
            lhs = spec.converse_mask(spec.composition_row[i][j])
            rhs = spec.compose_masks(spec.converse_row[j], spec.converse_row[i])
            if lhs != rhs:
                return False
    return True
