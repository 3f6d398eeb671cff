"""Built-in calculi, the calculus spec-file grammar, and structural validation.

Spec files are line oriented, UTF-8, with ``#`` comments:

    calculus "pc1"
    relations < = >
    identity =
    flags ra7=yes ra9=yes          # optional, overrides computed values
    converse
    < (>)
    = (=)
    > (<)
    composition
    < < (<)
    < = (<)
    < > (< = >)
    ...

``identity`` with no symbols declares that the calculus has no identity
relation.  ``()`` denotes the empty set.  The composition section must list
every ordered pair of base relations exactly once (totality); so must the
converse section for every base relation.  ``serialize`` emits the canonical
form: symbols in declaration order, composition cells in row-major order.

Relation symbols are whitespace-delimited tokens; the directive keywords
(``calculus``, ``relations``, ``identity``, ``flags``, ``converse``,
``composition``) are reserved and rejected as symbol names.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from typing import Optional

from .core import CalculusFlags, CalculusSpec, compute_ra7, compute_ra9

BUILTIN_NAMES = ("pc1", "rcc5", "cycb", "appendixB1", "appendixB2", "appendixB-remark")


@dataclass(frozen=True)
class CalculusSource:
    """Where a calculus came from: the builtin registry or a spec file."""

    origin: str  # "builtin" or "file"
    path: Optional[str] = None
    raw: Optional[str] = None


_RCC5_NOTE = (
    "composition cell EQ.PP is sometimes printed as (PO); that value breaks the "
    "identity law id.r = r, whose row and column are analytically forced, so the "
    "builtin ships (PP)"
)


def _table(rows: dict[str, dict[str, str]]) -> dict[tuple[str, str], tuple[str, ...]]:
    out = {}
    for a, row in rows.items():
        for b, cell in row.items():
            out[(a, b)] = tuple(cell.split())
    return out


def _conv(entries: dict[str, str]) -> dict[str, tuple[str, ...]]:
    return {s: tuple(v.split()) for s, v in entries.items()}


def _make_pc1() -> CalculusSpec:
    u = "< = >"
    return CalculusSpec(
        name="pc1",
        symbols=["<", "=", ">"],
        identity=["="],
        converse=_conv({"<": ">", "=": "=", ">": "<"}),
        composition=_table({
            "<": {"<": "<", "=": "<", ">": u},
            "=": {"<": "<", "=": "=", ">": ">"},
            ">": {"<": u, "=": ">", ">": ">"},
        }),
        flags=CalculusFlags(acl_decides_atomic="yes"),
    )


def _make_rcc5() -> CalculusSpec:
    u = "EQ DC PO PP PPi"
    return CalculusSpec(
        name="rcc5",
        symbols=["EQ", "DC", "PO", "PP", "PPi"],
        identity=["EQ"],
        converse=_conv({"EQ": "EQ", "DC": "DC", "PO": "PO", "PP": "PPi", "PPi": "PP"}),
        composition=_table({
            "EQ": {"EQ": "EQ", "DC": "DC", "PO": "PO", "PP": "PP", "PPi": "PPi"},
            "DC": {"EQ": "DC", "DC": u, "PO": "DC PO PP", "PP": "DC PO PP", "PPi": "DC"},
            "PO": {"EQ": "PO", "DC": "DC PO PPi", "PO": u, "PP": "PO PP", "PPi": "DC PO PPi"},
            "PP": {"EQ": "PP", "DC": "DC", "PO": "DC PO PP", "PP": "PP", "PPi": u},
            "PPi": {"EQ": "PPi", "DC": "DC PO PPi", "PO": "PO PPi", "PP": "EQ PO PP PPi", "PPi": "PPi"},
        }),
        flags=CalculusFlags(acl_decides_atomic="yes"),
        notes=(_RCC5_NOTE,),
    )


def _make_cycb() -> CalculusSpec:
    return CalculusSpec(
        name="cycb",
        symbols=["e", "o", "l", "r"],
        identity=["e"],
        converse=_conv({"e": "e", "o": "o", "l": "r", "r": "l"}),
        composition=_table({
            "e": {"e": "e", "o": "o", "l": "l", "r": "r"},
            "o": {"e": "o", "o": "e", "l": "r", "r": "l"},
            "l": {"e": "l", "o": "r", "l": "l o r", "r": "e l r"},
            "r": {"e": "r", "o": "l", "l": "e l r", "r": "l o r"},
        }),
    )


def _make_appendix_b1() -> CalculusSpec:
    # Two-relation fixture with a deliberately non-involutive converse: both
    # converses are the universal relation, so conv(conv(r)) = 1 strictly
    # above r.  All composition cells are the universal relation; anything
    # tighter re-introduces violations beyond the intended identity-law and
    # involution failures.
    return CalculusSpec(
        name="appendixB1",
        symbols=["r1", "r2"],
        identity=["r1"],
        converse=_conv({"r1": "r1 r2", "r2": "r1 r2"}),
        composition=_table({
            "r1": {"r1": "r1 r2", "r2": "r1 r2"},
            "r2": {"r1": "r1 r2", "r2": "r1 r2"},
        }),
    )


def _make_appendix_b2() -> CalculusSpec:
    # Four-relation fixture over the universe {0,1} with phi(r1)={(0,0)},
    # phi(r2)={(1,1)}, phi(r3)={(0,1)}, phi(r4)={(1,0)}.  Every cell is the
    # tightest sound value except r3.r4 = (r1 r4), which over-approximates
    # the domain result {(0,0)} on purpose: that one coarse cell breaks
    # associativity, converse-composition distributivity, the Tarski/De
    # Morgan axiom and the Peircean law, while the empty identity
    # row/column cells break the identity laws upward.
    return CalculusSpec(
        name="appendixB2",
        symbols=["r1", "r2", "r3", "r4"],
        identity=["r1"],
        converse=_conv({"r1": "r1", "r2": "r2", "r3": "r4", "r4": "r3"}),
        composition=_table({
            "r1": {"r1": "r1", "r2": "", "r3": "r3", "r4": ""},
            "r2": {"r1": "", "r2": "r2", "r3": "", "r4": "r4"},
            "r3": {"r1": "", "r2": "r3", "r3": "", "r4": "r1 r4"},
            "r4": {"r1": "r4", "r2": "r4", "r3": "r2", "r4": ""},
        }),
    )


def _make_appendix_b_remark() -> CalculusSpec:
    # Identity/diversity over a two-element universe: phi(r1)={(0,0),(1,1)},
    # phi(r2)={(0,1),(1,0)}.  The cell r2.r2 = (r1 r2) is a strict
    # over-approximation of the domain result phi(r1), so the composition is
    # merely abstract there, yet the symbolic algebra satisfies the whole
    # relation-algebra axiom battery.
    return CalculusSpec(
        name="appendixB-remark",
        symbols=["r1", "r2"],
        identity=["r1"],
        converse=_conv({"r1": "r1", "r2": "r2"}),
        composition=_table({
            "r1": {"r1": "r1", "r2": "r2"},
            "r2": {"r1": "r2", "r2": "r1 r2"},
        }),
    )


_FACTORIES = {
    "pc1": _make_pc1,
    "rcc5": _make_rcc5,
    "cycb": _make_cycb,
    "appendixB1": _make_appendix_b1,
    "appendixB2": _make_appendix_b2,
    "appendixB-remark": _make_appendix_b_remark,
}

_CACHE: dict[str, CalculusSpec] = {}


def builtin(name: str) -> CalculusSpec:
    """Return the built-in calculus registered under ``name``.

    Instances are cached: repeated calls return the same object, so flag
    updates (completeness metadata) persist across lookups.
    """
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise KeyError(
            f"unknown builtin calculus {name!r}; available: {', '.join(BUILTIN_NAMES)}"
        ) from None
    spec = _CACHE.get(name)
    if spec is None:
        spec = factory()
        spec.flags.ra7_holds = compute_ra7(spec)
        spec.flags.ra9_holds = compute_ra9(spec)
        spec.source = CalculusSource(origin="builtin")
        _CACHE[name] = spec
    return spec


_RESERVED = frozenset(
    {"calculus", "relations", "identity", "flags", "converse", "composition"}
)


class SpecParseError(Exception):
    """Syntax or semantic error in a calculus spec file."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_group(tokens: list[str], lineno: int, allow_empty: bool) -> list[str]:
    # a parenthesised symbol group: ( sym ... ) with the parens possibly
    # glued to the first/last symbol
    text = " ".join(tokens)
    if not text.startswith("("):
        raise SpecParseError("expected a '(' symbol group", lineno)
    if not text.endswith(")"):
        raise SpecParseError("unterminated symbol group, expected ')'", lineno)
    inner = text[1:-1].split()
    if not inner and not allow_empty:
        raise SpecParseError("symbol group may not be empty here", lineno)
    return inner


def parse_spec(source: str) -> CalculusSpec:
    """Parse a calculus spec file into a validated :class:`CalculusSpec`."""
    name: Optional[str] = None
    symbols: list[str] = []
    identity: Optional[list[str]] = None
    have_identity_clause = False
    converse: dict[str, tuple[str, ...]] = {}
    composition: dict[tuple[str, str], tuple[str, ...]] = {}
    flag_overrides: dict[str, bool] = {}
    section: Optional[str] = None

    def known(sym: str, lineno: int) -> str:
        if sym not in symbols:
            raise SpecParseError(f"unknown symbol {sym!r}", lineno)
        return sym

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "calculus":
            try:
                parts = shlex.split(line)
            except ValueError as exc:
                raise SpecParseError(str(exc), lineno) from None
            if len(parts) != 2:
                raise SpecParseError("expected: calculus \"<name>\"", lineno)
            name = parts[1]
        elif head == "relations":
            if symbols:
                raise SpecParseError("duplicate relations clause", lineno)
            if len(tokens) < 2:
                raise SpecParseError("relations clause needs at least one symbol", lineno)
            for s in tokens[1:]:
                if s in _RESERVED:
                    raise SpecParseError(
                        f"symbol {s!r} collides with a directive keyword", lineno
                    )
                if s in symbols:
                    raise SpecParseError(f"duplicate symbol {s!r}", lineno)
                symbols.append(s)
        elif head == "identity":
            if not symbols:
                raise SpecParseError("identity clause before relations clause", lineno)
            if have_identity_clause:
                raise SpecParseError("duplicate identity clause", lineno)
            have_identity_clause = True
            identity = [known(s, lineno) for s in tokens[1:]]
        elif head == "flags":
            for tok in tokens[1:]:
                if "=" not in tok:
                    raise SpecParseError(f"malformed flag {tok!r}, expected name=yes|no", lineno)
                key, _, val = tok.partition("=")
                if key not in ("ra7", "ra9") or val not in ("yes", "no"):
                    raise SpecParseError(f"malformed flag {tok!r}, expected ra7|ra9=yes|no", lineno)
                flag_overrides[key] = val == "yes"
        elif head == "converse":
            if len(tokens) != 1:
                raise SpecParseError("converse section header takes no arguments", lineno)
            section = "converse"
        elif head == "composition":
            if len(tokens) != 1:
                raise SpecParseError("composition section header takes no arguments", lineno)
            section = "composition"
        elif section == "converse":
            sym = known(head, lineno)
            if sym in converse:
                raise SpecParseError(f"duplicate converse entry for {sym!r}", lineno)
            group = _parse_group(tokens[1:], lineno, allow_empty=False)
            converse[sym] = tuple(known(s, lineno) for s in group)
        elif section == "composition":
            if len(tokens) < 3:
                raise SpecParseError("expected: <sym> <sym> (<sym>*)", lineno)
            a, b = known(head, lineno), known(tokens[1], lineno)
            if (a, b) in composition:
                raise SpecParseError(f"duplicate composition cell ({a!r}, {b!r})", lineno)
            group = _parse_group(tokens[2:], lineno, allow_empty=True)
            composition[(a, b)] = tuple(known(s, lineno) for s in group)
        else:
            raise SpecParseError(f"unexpected directive {head!r}", lineno)

    if name is None:
        raise SpecParseError("missing calculus clause", max(1, source.count("\n") + 1))
    if not symbols:
        raise SpecParseError("missing relations clause", max(1, source.count("\n") + 1))
    missing_conv = [s for s in symbols if s not in converse]
    if missing_conv:
        raise SpecParseError(
            f"converse table not total: missing {', '.join(map(repr, missing_conv))}",
            max(1, source.count("\n") + 1),
        )
    missing_comp = [
        (a, b) for a in symbols for b in symbols if (a, b) not in composition
    ]
    if missing_comp:
        a, b = missing_comp[0]
        raise SpecParseError(
            f"composition table not total: missing cell ({a!r}, {b!r}) "
            f"and {len(missing_comp) - 1} more",
            max(1, source.count("\n") + 1),
        )

    spec = CalculusSpec(
        name=name,
        symbols=symbols,
        # an `identity` clause with zero symbols, like no clause at all,
        # declares that the calculus has no identity relation
        identity=identity if identity else None,
        converse=converse,
        composition=composition,
    )
    spec.flags.ra7_holds = flag_overrides.get("ra7", compute_ra7(spec))
    spec.flags.ra9_holds = flag_overrides.get("ra9", compute_ra9(spec))
    spec.source = CalculusSource(origin="file", raw=source)
    return spec


def serialize(spec: CalculusSpec) -> str:
    """Canonical spec-file text for ``spec`` (symbols and cells in declaration order)."""
    lines = [f'calculus "{spec.name}"']
    lines.append("relations " + " ".join(spec.symbols))
    if spec.identity_mask is not None:
        lines.append("identity " + " ".join(spec.symbols_of(spec.identity_mask)))
    else:
        lines.append("identity")
    lines.append("converse")
    for i, s in enumerate(spec.symbols):
        lines.append(f"{s} {spec.format_mask(spec.converse_row[i])}")
    lines.append("composition")
    for i, a in enumerate(spec.symbols):
        for j, b in enumerate(spec.symbols):
            lines.append(f"{a} {b} {spec.format_mask(spec.composition_row[i][j])}")
    return "\n".join(lines) + "\n"


def load_spec(path: str) -> CalculusSpec:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    spec = parse_spec(text)
    spec.source = CalculusSource(origin="file", path=path, raw=text)
    return spec


@dataclass(frozen=True)
class Finding:
    """One structural observation about a calculus (report-only, never fatal)."""

    kind: str
    message: str


def validate(spec: CalculusSpec) -> list[Finding]:
    """Structural findings for a calculus: identity-law consistency, converse
    involution, empty cells, plus any curated notes the spec carries.

    All findings are informational; a calculus may legitimately fail the
    identity law or converse involution.
    """
    findings: list[Finding] = []

    if spec.identity_mask is not None:
        idm = spec.identity_mask
        bad = []
        for i, s in enumerate(spec.symbols):
            m = 1 << i
            left = spec.compose_masks(idm, m)
            right = spec.compose_masks(m, idm)
            if left != m:
                bad.append(f"id.{s} = {spec.format_mask(left)} != {s}")
            if right != m:
                bad.append(f"{s}.id = {spec.format_mask(right)} != {s}")
        if bad:
            findings.append(Finding("identity-law", "identity law fails: " + "; ".join(bad)))

    bad_conv = []
    for i, s in enumerate(spec.symbols):
        back = spec.converse_mask(spec.converse_row[i])
        if back & (1 << i) == 0:
            bad_conv.append(f"conv(conv({s})) = {spec.format_mask(back)} does not contain {s}")
    if bad_conv:
        findings.append(Finding("converse-involution", "; ".join(bad_conv)))

    empty = [
        f"{a}.{b}"
        for i, a in enumerate(spec.symbols)
        for j, b in enumerate(spec.symbols)
        if spec.composition_row[i][j] == 0
    ]
    if empty:
        findings.append(
            Finding("empty-cell", "empty composition cells: " + ", ".join(empty))
        )

    for note in spec.notes:
        findings.append(Finding("note", note))
    return findings
