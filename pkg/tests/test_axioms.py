"""Axiom battery: verdicts, counterexamples, classification, equivalences."""

import pytest

from qsr import (
    CalculusSpec,
    Classification,
    builtin,
    check_axiom,
    check_axiom_composite,
    classify,
    r6_r6l_equivalence_check,
)
from qsr.axioms import MAIN_AXIOMS, SUB, SUP

ALWAYS_HOLD = ("R1", "R2", "R3", "R5", "R7" + SUP, "R8", "WA" + SUP, "SA" + SUP)


def test_pc1_r4_universe():
    rec = check_axiom(builtin("pc1"), "R4")
    assert rec.holds is True
    assert rec.violations == 0
    assert rec.universe == 27


def test_appendix_b2_r4_counterexample():
    rec = check_axiom(builtin("appendixB2"), "R4")
    assert rec.holds is False
    found = [e for e in rec.examples if e.operands == ("r1", "r3", "r4")]
    assert found and found[0].lhs == ("r1", "r4") and found[0].rhs == ("r1",)


def test_appendix_b1_r7_counterexample():
    rec = check_axiom(builtin("appendixB1"), "R7" + SUB)
    assert rec.holds is False
    ex = rec.examples[0]
    assert ex.operands == ("r1",) and ex.lhs == ("r1", "r2") and ex.rhs == ("r1",)


@pytest.mark.parametrize("name", ["pc1", "rcc5", "cycb", "appendixB-remark"])
def test_relation_algebras_have_clean_battery(name):
    report = classify(builtin(name))
    assert report.classification is Classification.RA
    assert report.all_main_hold()
    assert report.violated_sides() == frozenset()
    for aid in MAIN_AXIOMS:
        assert report.records[aid].violations == 0


def test_appendix_b1_violates_exactly_three_sides():
    report = classify(builtin("appendixB1"))
    assert report.violated_sides() == frozenset({"R6" + SUB, "R6l" + SUB, "R7" + SUB})
    assert report.classification is Classification.NA_OR_WEAKER


def test_appendix_b2_violated_side_set():
    report = classify(builtin("appendixB2"))
    assert report.violated_sides() == frozenset(
        {
            "WA" + SUB, "SA" + SUB,
            "R4" + SUB, "R4" + SUP,
            "R6" + SUP, "R6l" + SUP,
            "R9" + SUB, "R9" + SUP,
            "R10" + SUB, "R10" + SUP,
            "PL-right", "PL-left",
        }
    )


def test_always_satisfied_axioms():
    for name in ("pc1", "rcc5", "cycb", "appendixB1", "appendixB2", "appendixB-remark"):
        report = classify(builtin(name))
        for aid in ALWAYS_HOLD:
            assert report.records[aid].holds is True, (name, aid)


def test_classify_updates_flags():
    spec = builtin("appendixB2")
    spec.flags.ra7_holds = None
    spec.flags.ra9_holds = None
    classify(spec)
    assert spec.flags.ra7_holds is True
    assert spec.flags.ra9_holds is False


def test_id_dependent_axioms_not_applicable_without_identity():
    from qsr import parse_spec, serialize

    free = parse_spec(serialize(builtin("pc1")).replace("identity =", "identity"))
    for aid in ("R6", "R6l", "WA"):
        rec = check_axiom(free, aid)
        assert rec.holds is None and not rec.applicable
    report = classify(free)
    assert report.classification is not Classification.RA


def test_pl_and_r10_agree_under_the_premises():
    # agreement is guaranteed given R1-R3, R5, R7-R9
    for name in ("pc1", "rcc5", "cycb", "appendixB-remark"):
        report = classify(builtin(name))
        premises = all(
            report.records[a].holds for a in ("R1", "R2", "R3", "R5", "R7", "R8", "R9")
        )
        assert premises
        assert report.records["PL"].holds == report.records["R10"].holds


def test_pl_r10_divergence_without_premises():
    # with a broken converse involution the Peircean law can hold while the
    # Tarski/De Morgan axiom fails: no composition cell is empty (so PL is
    # vacuous) yet conv(r2) . c(r2 . r2) spills outside c(r2)
    spec = CalculusSpec(
        "divergence",
        ["r1", "r2"],
        ["r1"],
        {"r1": ["r1", "r2"], "r2": ["r1", "r2"]},
        {
            ("r1", "r1"): ["r1", "r2"],
            ("r1", "r2"): ["r1"],
            ("r2", "r1"): ["r1", "r2"],
            ("r2", "r2"): ["r2"],
        },
    )
    report = classify(spec)
    assert report.records["R7"].holds is False
    assert report.records["PL"].holds is True
    assert report.records["R10"].holds is False


@pytest.mark.parametrize("axiom", ["R4", "R6", "R6l", "R7", "R9"])
@pytest.mark.parametrize("name", ["pc1", "rcc5", "cycb", "appendixB-remark"])
def test_union_preserved_axioms_extend_to_composites(name, axiom):
    spec = builtin(name)
    assert check_axiom(spec, axiom).holds is True
    rec = check_axiom_composite(spec, axiom, samples=10_000, seed=5)
    assert rec.holds is True and rec.violations == 0


def test_composite_exhaustive_mode():
    spec = builtin("appendixB-remark")
    rec = check_axiom_composite(spec, "R4", exhaustive=True)
    assert rec.universe == 4 ** 3
    assert rec.holds is True


def test_r10_composite_level_can_be_probed():
    # mirrors the audit default (base pairs only) but allows opting in
    rec = check_axiom_composite(builtin("rcc5"), "R10", samples=2_000, seed=1)
    assert rec.holds is True


def test_r6_r6l_equivalence():
    assert r6_r6l_equivalence_check(builtin("pc1")) is True
    assert r6_r6l_equivalence_check(builtin("rcc5")) is True
    assert r6_r6l_equivalence_check(builtin("appendixB-remark")) is True
    # preconditions fail: converse involution for B1, distributivity for B2
    assert r6_r6l_equivalence_check(builtin("appendixB1")) is None
    assert r6_r6l_equivalence_check(builtin("appendixB2")) is None


def test_parallel_classification_matches_sequential():
    seq = classify(builtin("rcc5"))
    par = classify(builtin("rcc5"), jobs=2)
    assert par.classification is seq.classification
    for aid, rec in seq.records.items():
        assert par.records[aid].holds == rec.holds
        assert par.records[aid].violations == rec.violations


def test_classification_ra_minus_id():
    # identity laws broken by renaming the designated identity, everything
    # else intact: the point-calculus tables with identity set to < fail
    # only R6/R6l
    pc1 = builtin("pc1")
    spec = CalculusSpec(
        "pc1-misdeclared",
        pc1.symbols,
        ["<"],
        {s: pc1.symbols_of(m) for s, m in zip(pc1.symbols, pc1.converse_row)},
        {
            (a, b): pc1.symbols_of(pc1.composition_row[i][j])
            for i, a in enumerate(pc1.symbols)
            for j, b in enumerate(pc1.symbols)
        },
    )
    report = classify(spec)
    assert report.records["R6"].holds is False
    assert report.classification is Classification.RA_MINUS_ID


def test_report_json_shape():
    doc = classify(builtin("appendixB2")).to_json_dict()
    assert doc["classification"] == "NA-or-weaker"
    by_id = {a["axiom"]: a for a in doc["axioms"]}
    assert by_id["R4"]["violations"] > 0
    assert by_id["R4"]["universe"] == 64
    assert 0 < by_id["R4"]["percentage"] < 100
