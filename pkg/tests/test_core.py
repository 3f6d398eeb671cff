"""Relation-set operations: Boolean structure, converse, composition."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsr import CalculusMismatchError, CalculusSpec, builtin, complement, compose, converse, intersect, union


pc1 = builtin("pc1")
rcc5 = builtin("rcc5")
cycb = builtin("cycb")


def test_union_basic():
    assert union(pc1.relation("<"), pc1.relation("=")).symbols == ("<", "=")
    assert union(pc1.relation("<", "="), pc1.universal_relation) == pc1.universal_relation
    assert union(rcc5.relation("PP"), rcc5.relation("PPi")).symbols == ("PP", "PPi")


def test_intersect_and_complement():
    assert intersect(pc1.relation("<", "="), pc1.relation("=", ">")).symbols == ("=",)
    assert complement(pc1.relation("<")).symbols == ("=", ">")
    assert complement(rcc5.universal_relation).is_empty


def test_converse():
    assert converse(pc1.relation("<", "=")).symbols == ("=", ">")
    # per-symbol lookup: e stays, l flips to r
    assert converse(cycb.relation("e", "l")).symbols == ("e", "r")
    assert converse(rcc5.relation("PP", "PPi")).symbols == ("PP", "PPi")
    assert converse(pc1.empty_relation).is_empty


def test_compose():
    assert compose(pc1.relation("<", "="), pc1.universal_relation) == pc1.universal_relation
    assert compose(rcc5.relation("PP", "PPi"), rcc5.relation("DC")).symbols == ("DC", "PO", "PPi")
    assert compose(pc1.relation("<"), pc1.empty_relation).is_empty
    # follows from the cycb table: l.l lacks e, so the union has all four
    assert compose(cycb.relation("e", "l"), cycb.relation("e", "l")).symbols == ("e", "o", "l", "r")


def test_cross_calculus_rejected():
    with pytest.raises(CalculusMismatchError):
        union(pc1.relation("<"), rcc5.relation("DC"))
    with pytest.raises(CalculusMismatchError):
        compose(pc1.relation("<"), cycb.relation("l"))


def test_mask_width_and_identity():
    assert pc1.universal == 0b111
    assert pc1.identity_relation.symbols == ("=",)
    assert rcc5.identity_relation.symbols == ("EQ",)
    assert cycb.identity_relation.symbols == ("e",)


def _sets(calc):
    return st.integers(min_value=0, max_value=calc.universal).map(calc.from_mask)


@settings(max_examples=200)
@given(_sets(rcc5), _sets(rcc5), _sets(rcc5))
def test_boolean_laws(a, b, c):
    assert (a | b) == (b | a)
    assert (a | (b | c)) == ((a | b) | c)
    # Huntington's axiom
    assert (~(~a | ~b)) | (~(~a | b)) == a


@settings(max_examples=200)
@given(_sets(rcc5), _sets(rcc5), _sets(rcc5))
def test_operations_distribute_over_union(a, b, c):
    assert (a | b).converse() == a.converse() | b.converse()
    assert (a | b).compose(c) == a.compose(c) | b.compose(c)
    assert c.compose(a | b) == c.compose(a) | c.compose(b)


@pytest.mark.parametrize("name", ["pc1", "rcc5", "cycb", "appendixB1", "appendixB2", "appendixB-remark"])
def test_double_converse_never_loses(name):
    calc = builtin(name)
    for mask in range(calc.universal + 1):
        r = calc.from_mask(mask)
        assert r.issubset(r.converse().converse())


def test_relation_set_protocols():
    r = pc1.relation("<", ">")
    assert "<" in r and "=" not in r
    assert len(r) == 2
    assert list(r) == ["<", ">"]
    assert bool(pc1.empty_relation) is False


def test_large_calculus_falls_back_to_sparse_tables():
    # 20 symbols is past the precomputation cut-offs; composition must still work
    syms = [f"s{i}" for i in range(20)]
    conv = {s: [s] for s in syms}
    comp = {(a, b): [a] for a in syms for b in syms}
    big = CalculusSpec("big", syms, None, conv, comp)
    r = big.relation("s0", "s7", "s19")
    assert r.compose(big.universal_relation) == r
    assert r.converse() == r
