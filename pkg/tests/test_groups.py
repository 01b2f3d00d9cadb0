import pytest

from beauville.catalog import build
from beauville.errors import InputError, ValidationError
from beauville.groups import (
    FiniteGroup,
    abelian_invariants,
    abelianization_invariants,
    closure,
    derived_subgroup,
    is_normal,
    normal_subgroups,
    quotient,
    subgroup_generated,
    trivial_subgroup,
)


def test_identity_and_inverse_laws(z52, s5):
    for G in (z52, s5):
        n = G.order
        assert all(G.mul(0, x) == x == G.mul(x, 0) for x in range(n))
        assert all(G.mul(x, G.inv(x)) == 0 for x in range(n))


def test_element_orders_divide_group_order(s5, psl7):
    for G in (s5, psl7):
        assert all(G.order % int(o) == 0 for o in G.element_order)


def test_broken_table_rejected():
    # constant row breaks the Latin-square property
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 1]])
    # violates associativity but is a Latin square with identity: the smallest
    # such magma has order 5
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValidationError):
        FiniteGroup(table)


def test_subgroup_generated_examples(z52, s5):
    # cyclic closure inside C5^2
    H = subgroup_generated(z52, [z52.generators[0]])
    assert H.order == 5
    # two independent generators give the whole group
    assert subgroup_generated(z52, list(z52.generators)).order == 25
    # S5 = <(12), (12345)>
    assert subgroup_generated(s5, list(s5.generators)).order == 120


def test_subgroup_generated_idempotent(s5):
    H = subgroup_generated(s5, [s5.generators[1]])
    again = subgroup_generated(s5, H.members)
    assert again.members == H.members


def test_subgroup_generated_bad_index(z52):
    with pytest.raises(InputError):
        subgroup_generated(z52, [99])


def test_is_normal(z52, s5):
    assert is_normal(z52, subgroup_generated(z52, [1]))  # abelian
    transposition = s5.generators[0]
    assert not is_normal(s5, subgroup_generated(s5, [transposition]))
    a5 = [N for N in normal_subgroups(s5) if N.order == 60]
    assert len(a5) == 1 and is_normal(s5, a5[0])


def test_normal_subgroups_z52(z52):
    ns = normal_subgroups(z52)
    assert [N.order for N in ns] == [1, 5, 5, 5, 5, 5, 5, 25]


def test_normal_subgroups_s5(s5):
    assert [N.order for N in normal_subgroups(s5)] == [1, 60, 120]


def test_normal_subgroups_trivial_group():
    C1 = build("C1")
    assert [N.order for N in normal_subgroups(C1)] == [1]


def test_quotient_examples(z52):
    q = quotient(z52, subgroup_generated(z52, [1]))
    assert q.group.order == 5
    # quotient by the trivial subgroup is a bijective copy
    q0 = quotient(z52, trivial_subgroup(z52))
    assert q0.group.order == 25
    assert sorted(int(v) for v in q0.projection) == list(range(25))
    z53 = build("C5^3")
    assert quotient(z53, subgroup_generated(z53, [1])).group.order == 25


def test_quotient_rejects_non_normal(s5):
    H = subgroup_generated(s5, [s5.generators[0]])
    with pytest.raises(ValidationError):
        quotient(s5, H)


def test_quotient_projection_is_homomorphism(z52):
    q = quotient(z52, subgroup_generated(z52, [1]))
    proj = q.projection
    for x in range(25):
        for y in range(25):
            assert proj[z52.mul(x, y)] == q.group.mul(int(proj[x]), int(proj[y]))
    assert z52.order == q.kernel.order * q.group.order


def test_closure_early_exit(s5):
    got = closure(s5, s5.generators, stop_at=s5.order)
    assert len(got) == 120


def test_derived_subgroup_and_abelianization(s5):
    assert derived_subgroup(s5).order == 60
    assert abelianization_invariants(s5) == (2,)
    assert abelian_invariants(build("C2 x C12")) == (12, 2)
    assert abelian_invariants(build("C4 x C2^2")) == (4, 2, 2)


def test_conjugacy_classes(s5):
    sizes = sorted(len(c) for c in s5.conjugacy_classes)
    # one class per cycle type of S5
    assert sizes == [1, 10, 15, 20, 20, 24, 30]
