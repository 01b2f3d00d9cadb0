import numpy as np
import pytest

from beauville.catalog import (
    build,
    load_group_file,
    parse_group_file,
    parse_group_spec,
    write_group_file,
)
from beauville.errors import (
    GroupFileError,
    ResourceLimitError,
    SpecSyntaxError,
    ValidationError,
)
from beauville.groups import abelianization_invariants, element_order_histogram
from beauville.verification import build_from_group_file_text, packaged_small_group_files


def test_parse_basics():
    assert parse_group_spec("C5^2").kind == "power"
    assert parse_group_spec("He(5)").kind == "heisenberg"
    assert parse_group_spec("C1").args == (1,)
    assert parse_group_spec("PSL(2,7)").args == (7,)
    assert parse_group_spec("S5 x C2").kind == "product"


def test_parse_roundtrip_stable():
    for text in (
        "C5^2",
        "He(5)",
        "PSL(2,7)",
        "S5 x C2 x D4",
        "Perm[(1,2,3)(4,5), (1,2)]",
        "Semidirect(C7, C3, [[[2]]])",
        'File("some/path.gf")',
    ):
        spec = parse_group_spec(text)
        again = parse_group_spec(spec.text)
        assert again == spec


def test_parse_errors_carry_position():
    with pytest.raises(SpecSyntaxError) as err:
        parse_group_spec("C5 ^^ 2")
    assert err.value.position >= 0
    with pytest.raises(SpecSyntaxError):
        parse_group_spec("C5^2 trailing")
    with pytest.raises(SpecSyntaxError):
        parse_group_spec("Foo(3)")
    with pytest.raises(SpecSyntaxError):
        parse_group_spec("PSL(3,7)")


def test_build_orders():
    cases = {
        "C5^2": 25,
        "PSL(2,7)": 168,
        "S5": 120,
        "He(5)": 125,
        "A5": 60,
        "D6": 12,
        "Q8": 8,
        "SL(2,3)": 24,
        "C1": 1,
    }
    for spec, order in cases.items():
        assert build(spec).order == order


def test_build_elementary_abelian_orders():
    G = build("C5^2")
    assert int(G.element_order[0]) == 1
    assert all(int(o) == 5 for o in G.element_order[1:])
    # standard generators have order n and generate
    from beauville.groups import subgroup_generated

    assert subgroup_generated(G, list(G.generators)).order == 25


def test_build_deterministic():
    a = build("Semidirect(C5, C4, [[[2]]])")
    b = build("Semidirect(C5, C4, [[[2]]])")
    assert np.array_equal(a.table, b.table)
    c = build("PSL(2,7)")
    d = build("PSL(2,7)")
    assert np.array_equal(c.table, d.table)


def test_order_bound(monkeypatch):
    with pytest.raises(ResourceLimitError):
        build("C50^2")  # order 2500 over the default bound
    monkeypatch.setenv("BEAUVILLE_MAX_ORDER", "3000")
    assert build("C50^2").order == 2500


def test_semidirect_rejects_bad_actions():
    with pytest.raises(ValidationError):
        build("Semidirect(C5, C4, [[[0]]])")  # e1 -> 0 is no automorphism
    with pytest.raises(ValidationError):
        # a -> 3a has order 6 in Aut(C7), incompatible with the C4 relation b^4 = 1
        build("Semidirect(C7, C4, [[[3]]])")


def test_perm_literal():
    G = build("Perm[(1,2,3,4,5), (1,2)]")
    assert G.order == 120
    with pytest.raises(SpecSyntaxError):
        parse_group_spec("Perm[(1,2,2)]")


def test_group_file_roundtrip(tmp_path, s5):
    path = tmp_path / "s5.gf"
    write_group_file(s5, path, label="sym5")
    G = load_group_file(path)
    assert G.order == 120
    assert G.label == "sym5"


def test_group_file_spec_integration(tmp_path):
    path = tmp_path / "d4.gf"
    write_group_file(build("D4"), path)
    G = build(f'File("{path}")')
    assert G.order == 8


def test_group_file_order_mismatch(tmp_path):
    text = "groupfile v1\norder 60\ndegree 5\n(1,2,3,4,5)\n(1,2)\n"
    path = tmp_path / "bad.gf"
    path.write_text(text)
    with pytest.raises(GroupFileError):
        load_group_file(path)


def test_group_file_malformed():
    with pytest.raises(GroupFileError):
        parse_group_file("groupfile v2\norder 2\ndegree 2\n(1,2)\n")
    with pytest.raises(GroupFileError):
        parse_group_file("groupfile v1\norder 2\ndegree 2\n(1,2) junk\n")
    with pytest.raises(GroupFileError):
        parse_group_file("groupfile v1\norder 2\ndegree 2\n(1,2)(2,3)\n")


def test_single_transposition_file(tmp_path):
    path = tmp_path / "c2.gf"
    path.write_text("groupfile v1\norder 2\ndegree 2\n(1,2)\n")
    assert load_group_file(path).order == 2


def test_packaged_small_groups_complete():
    files = packaged_small_group_files()
    assert len(files) == 74
    per_order = {}
    for name, text in files:
        G = build_from_group_file_text(name, text)
        assert G.order < 25
        per_order[G.order] = per_order.get(G.order, 0) + 1
    # number of groups of each order n < 25, per the standard classification
    expected = {
        1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1,
        12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5,
        21: 2, 22: 2, 23: 1, 24: 15,
    }
    assert per_order == expected


def test_packaged_small_groups_pairwise_distinct():
    seen = {}
    for name, text in packaged_small_group_files():
        G = build_from_group_file_text(name, text)
        fp = (
            G.order,
            G.is_abelian,
            abelianization_invariants(G),
            element_order_histogram(G),
        )
        assert fp not in seen, f"{name} and {seen[fp]} share an invariant fingerprint"
        seen[fp] = name
