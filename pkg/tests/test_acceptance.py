"""Acceptance suite: recomputes every published value the engine must match.

Each test prints one PASS/FAIL line so `pytest -s tests/test_acceptance.py`
reads as a checklist.  All assertions are exact; time limits are generous
relative to the actual runtimes.

One check is expected to fail and is marked xfail(strict): row 8 of the
chi = -1 table is not a free structure as printed (a localized typo in the
source table; see the companion test and the verify-paper output for the
full diagnosis).
"""

import time

import pytest

from beauville.catalog import build
from beauville.classify import fiber_classes
from beauville.reports import classify_ub
from beauville.verification import (
    CheckResult,
    check_invariant_formulas,
    check_oracle_equivalence,
    check_orbit_uniqueness,
    check_prop53,
    check_prop55,
    check_property_suites,
    check_table1_rows,
    check_thm13_chi_minus1,
    check_thm13_chi_minus5,
    check_thm14_partial,
    structure_canonical_key,
    table1_structures,
    _chi_minus1_context,
)


def _report(criterion: str, result: CheckResult, budget: float) -> None:
    status = result.status.upper()
    print(f"[{status}] {criterion}: {result.name} in {result.seconds:.1f}s (budget {budget:.0f}s)")
    print(f"        {result.detail}")
    assert result.seconds < budget, f"{result.name} exceeded its time budget"


def test_criterion_1_orbit_uniqueness():
    result = check_orbit_uniqueness()
    _report("criterion 1", result, 5)
    assert result.status == "pass"


def test_criterion_2_chi_minus1_count():
    result = check_thm13_chi_minus1()
    _report("criterion 2 (count)", result, 600)
    assert result.status == "pass"


@pytest.mark.xfail(
    strict=True,
    reason="row 8 of the printed chi=-1 table is not free: its S1 and S2 share"
    " the cyclic subgroup <e1+4e2> and its S2 duplicates row 2's; a paper"
    " typo, localized by the companion test below",
)
def test_criterion_2_table1_rows_as_printed():
    result = check_table1_rows()
    _report("criterion 2 (table rows, strict)", result, 600)
    assert result.status == "pass"


def test_criterion_2_table1_rows_localized():
    """Rows 1-7 validate and map to distinct classes; the single defect is
    row 8, and correcting its S2 restores the 8-row bijection."""
    t0 = time.time()
    ctx = _chi_minus1_context()
    class_keys = sorted(c.canonical_key for c in fiber_classes(ctx, chi=-1))
    structures = table1_structures(ctx)
    keys = []
    for i, s in enumerate(structures, 1):
        if i == 8:
            assert not s.is_free(), "row 8 unexpectedly became free; table typo fixed?"
            continue
        s.validate()
        keys.append(structure_canonical_key(ctx, s))
    assert len(set(keys)) == 7
    assert all(k in class_keys for k in keys)
    missing = [k for k in class_keys if k not in keys]
    assert len(missing) == 1
    # corrected row 8: keep S1 and S3, replace the duplicated S2
    from beauville.classify import BeauvilleStructure
    from beauville.groups import pack_exponents
    from beauville.triples import GeneratingTriple

    def v(a, b):
        return pack_exponents((a, b), (5, 5))

    Q1, Q2, Q3 = ctx.quotients
    t1 = GeneratingTriple(Q1.group, *(Q1.project(v(a, b)) for a, b in [(0, 1), (2, 2), (3, 2)]))
    t2 = GeneratingTriple(Q2.group, *(Q2.project(v(a, b)) for a, b in [(1, 0), (2, 1), (2, 4)]))
    t3 = GeneratingTriple(Q3.group, *(Q3.project(v(k, 0)) for k in [3, 3, 4]))
    fixed = BeauvilleStructure(ctx.group, ctx.kernels, ctx.quotients, (t1, t2, t3))
    fixed.validate()
    assert structure_canonical_key(ctx, fixed) == missing[0]
    print(
        f"[PASS] criterion 2 (table rows, localized): rows 1-7 map to 7 distinct"
        f" classes; row 8 defect localized and corrected in {time.time() - t0:.1f}s"
    )


def test_criterion_3_chi_minus5():
    result = check_thm13_chi_minus5()
    _report("criterion 3", result, 7200)
    assert result.status == "pass"
    assert "computed chi=-5 classes for C5^2 (trivial kernels): 77" in result.detail
    assert "rows 7-19 sum 77: MATCH" in result.detail


def test_criterion_4_thm14_partial():
    result = check_thm14_partial()
    _report("criterion 4", result, 3600)
    assert result.status in ("pass", "partial")


def test_criterion_5_prop55():
    result = check_prop55((5, 7, 11))
    _report("criterion 5", result, 1860)
    assert result.status == "pass"


def test_criterion_6_prop53():
    result = check_prop53(include_z5cubed=True)
    _report("criterion 6", result, 3600)
    assert result.status == "pass"
    assert "d(C5^3) = 3" in result.detail


def test_criterion_7_property_suites():
    result = check_property_suites(samples=1000)
    _report("criterion 7", result, 300)
    assert result.status == "pass"


def test_criterion_8_oracle_equivalence():
    result = check_oracle_equivalence()
    _report("criterion 8", result, 1800)
    assert result.status == "pass"


def test_criterion_9_invariant_formulas():
    result = check_invariant_formulas()
    _report("criterion 9", result, 5)
    assert result.status == "pass"


def test_candidate_pruning_is_sound():
    """Every classified absolutely faithful structure's (|G|, types) appears in
    the candidate list for its chi."""
    from beauville.invariants import candidate_tuples

    t0 = time.time()
    for spec, chi in (("S5", -2), ("S5", -5), ("PSL(2,7)", -4), ("C5^2", -5)):
        G = build(spec)
        rep = classify_ub(G, 3, chi=chi, kernel_policy="trivial")
        cands = {
            (c.group_order, tuple(sorted(c.types))) for c in candidate_tuples(chi)
        }
        for block in rep.kernel_orbits:
            for cls in block.classes:
                key = (G.order, tuple(sorted(tuple(sorted(t)) for t in cls.types)))
                assert key in cands, f"{spec} chi={chi}: {key} missing from candidates"
    print(f"[PASS] candidate pruning soundness in {time.time() - t0:.1f}s")
