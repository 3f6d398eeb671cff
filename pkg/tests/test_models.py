"""Finite interpretations: JEPD, partition schemes, operation strength, brute force."""

import pytest

from qsr import (
    BudgetExceededError,
    CalculusError,
    CalculusSpec,
    CellStrength,
    FiniteInterpretation,
    brute_force_solve,
    builtin,
    builtin_model,
    check_jepd,
    check_partition_scheme,
    classify_operation,
    domain_compose,
    domain_converse,
    normalize,
    parse_model,
)

pc1 = builtin("pc1")
b2 = builtin("appendixB2")


def test_appendix_b2_model_is_jepd():
    report = check_jepd(builtin_model("appendixB2"))
    assert report.jointly_exhaustive and report.pairwise_disjoint


def overlap_calculus():
    # two symbols interpreted as <= and >= over {0,1}: exhaustive but not disjoint
    syms = ["le", "ge"]
    return CalculusSpec(
        "overlap",
        syms,
        None,
        {s: syms for s in syms},
        {(a, b): syms for a in syms for b in syms},
    )


def test_non_disjoint_model_witness():
    calc = overlap_calculus()
    model = FiniteInterpretation(
        calc,
        ["0", "1"],
        {"le": [("0", "0"), ("0", "1"), ("1", "1")], "ge": [("0", "0"), ("1", "0"), ("1", "1")]},
    )
    report = check_jepd(model)
    assert report.jointly_exhaustive
    assert not report.pairwise_disjoint
    assert ("0", "0") in report.multiply_covered


def test_dropping_a_relation_breaks_exhaustiveness():
    model = builtin_model("appendixB2")
    partial = FiniteInterpretation(
        b2,
        model.universe,
        {"r1": model.phi["r1"], "r2": [], "r3": model.phi["r3"], "r4": model.phi["r4"]},
    )
    report = check_jepd(partial)
    assert not report.jointly_exhaustive
    assert ("1", "1") in report.uncovered


def test_partition_scheme_identity_as_composite():
    report = check_partition_scheme(builtin_model("appendixB2"))
    assert report.has_identity and report.converse_closed
    assert not report.has_identity_base
    assert report.identity_composite == ("r1", "r2")
    # the designated identity of the fixture covers only part of the diagonal
    assert report.declared_identity_matches is False


def test_partition_scheme_chain():
    report = check_partition_scheme(builtin_model("pc1-chain3"))
    assert report.has_identity and report.has_identity_base
    assert report.converse_closed
    assert report.declared_identity_matches is True


def test_partition_scheme_violated_by_le_gt():
    syms = ["le", "gt"]
    calc = CalculusSpec(
        "legt", syms, None, {s: syms for s in syms}, {(a, b): syms for a in syms for b in syms}
    )
    elems = ["0", "1", "2"]
    le = [(a, b) for a in elems for b in elems if int(a) <= int(b)]
    gt = [(a, b) for a in elems for b in elems if int(a) > int(b)]
    model = FiniteInterpretation(calc, elems, {"le": le, "gt": gt})
    assert check_jepd(model).certified
    report = check_partition_scheme(model)
    assert not report.has_identity
    assert not report.converse_closed
    assert "le" in report.converse_witnesses


def test_domain_compose_examples():
    assert domain_compose(builtin_model("appendixB2"), "r3", "r4") == {("0", "0")}
    assert domain_compose(builtin_model("pc1-chain3"), "<", "<") == {("0", "2")}


def test_domain_converse_is_involutive():
    model = builtin_model("pc1-chain3")
    for sym in pc1.symbols:
        twice = frozenset((b, a) for a, b in domain_converse(model, sym))
        assert twice == model.phi[sym]


def test_pc1_composition_weak_not_strong_on_chain():
    for size in (3, 5):
        grading = classify_operation(builtin_model(f"pc1-chain{size}"), pc1, "composition")
        assert grading.strength_of("<", "<") is CellStrength.WEAK
        assert grading.weak and not grading.strong


def test_pc1_converse_strong_on_chain():
    grading = classify_operation(builtin_model("pc1-chain3"), pc1, "converse")
    assert grading.strong


def test_appendix_b2_composition_abstract_at_r3_r4():
    grading = classify_operation(builtin_model("appendixB2"), b2, "composition")
    assert grading.strength_of("r3", "r4") is CellStrength.ABSTRACT_ONLY
    assert grading.is_calculus_under_model
    assert not grading.weak
    conv = classify_operation(builtin_model("appendixB2"), b2, "converse")
    assert conv.strong


def test_strength_hierarchy_never_violated():
    # strong implies the weak criterion, weak implies soundness, across all
    # cells of every bundled fixture
    for name in ("pc1-chain3", "cycb-compass4", "appendixB1", "appendixB2", "appendixB-remark"):
        model = builtin_model(name)
        calc = model.calculus
        for which in ("converse", "composition"):
            grading = classify_operation(model, calc, which)
            for key, strength in grading.cells.items():
                if which == "converse":
                    domain = domain_converse(model, key[0])
                    table = calc.converse_row[calc.symbol_index(key[0])]
                else:
                    domain = domain_compose(model, *key)
                    i, j = (calc.symbol_index(k) for k in key)
                    table = calc.composition_row[i][j]
                interp = model.phi_mask(table)
                if strength is CellStrength.STRONG:
                    assert interp == domain
                if strength in (CellStrength.STRONG, CellStrength.WEAK):
                    assert all(model.phi[s] & domain for s in calc.symbols_of(table))
                if strength is not CellStrength.UNSOUND:
                    assert interp >= domain


def test_unsound_cell_detected():
    # drop a needed symbol from one cell: the table now denies a real
    # configuration and stops being a calculus under the model
    rows = {
        (a, b): pc1.symbols_of(pc1.composition_row[i][j])
        for i, a in enumerate(pc1.symbols)
        for j, b in enumerate(pc1.symbols)
    }
    rows[("<", ">")] = ("<",)
    broken = CalculusSpec(
        "pc1-broken",
        pc1.symbols,
        ["="],
        {s: pc1.symbols_of(m) for s, m in zip(pc1.symbols, pc1.converse_row)},
        rows,
    )
    elems = ["0", "1", "2"]
    model = FiniteInterpretation(
        broken,
        elems,
        {
            "<": [(a, b) for a in elems for b in elems if int(a) < int(b)],
            "=": [(a, a) for a in elems],
            ">": [(a, b) for a in elems for b in elems if int(a) > int(b)],
        },
    )
    grading = classify_operation(model, broken, "composition")
    assert grading.strength_of("<", ">") is CellStrength.UNSOUND
    assert not grading.is_calculus_under_model


def test_brute_force_examples():
    chain3 = builtin_model("pc1-chain3")
    lt = pc1.relation("<")
    four_chain = normalize(pc1, [(f"x{i}", lt, f"x{i+1}") for i in range(3)])
    assert brute_force_solve(four_chain, chain3) is None

    three = normalize(pc1, [("A", lt, "B"), ("B", lt, "C")])
    assert brute_force_solve(three, chain3) == {"A": "0", "B": "1", "C": "2"}

    empty = normalize(pc1, [], var_names=["A", "B"])
    assert brute_force_solve(empty, chain3) == {"A": "0", "B": "0"}


def test_brute_force_budget():
    chain3 = builtin_model("pc1-chain3")
    net = normalize(pc1, [], var_names=[f"v{i}" for i in range(8)])
    with pytest.raises(BudgetExceededError):
        brute_force_solve(net, chain3, budget=100)


MODEL_TEXT = """\
model "tiny"
calculus appendixB2
universe 0 1
r1: (0,0)
r2: (1,1)
r3: (0,1)
r4: (1,0)
"""


def test_model_file_round_trip():
    model = parse_model(MODEL_TEXT)
    assert model.universe == ("0", "1")
    assert model.phi["r3"] == {("0", "1")}
    again = parse_model(model.to_text())
    assert again.phi == model.phi


def test_model_requires_injective_phi():
    text = MODEL_TEXT.replace("r4: (1,0)", "r4: (0,1)")
    from qsr import NetworkError

    with pytest.raises(NetworkError, match="injective"):
        parse_model(text)


def test_builtin_models_are_valid():
    for name in ("pc1-chain3", "pc1-chain4", "cycb-compass4", "appendixB1", "appendixB2", "appendixB-remark"):
        model = builtin_model(name)
        assert check_jepd(model).certified, name


def test_seriality_is_a_model_property():
    from qsr import check_seriality

    # a finite cut of the line loses seriality for the strict orders
    assert check_seriality(builtin_model("pc1-chain3")) == {"<": False, "=": True, ">": False}
    # rotations are serial everywhere
    assert all(check_seriality(builtin_model("cycb-compass4")).values())
