import random

import numpy as np
import pytest

from beauville.catalog import build
from beauville.errors import ResourceLimitError
from beauville.groups import quotient, subgroup_generated, trivial_subgroup
from beauville.morphisms import (
    all_automorphisms,
    induced_quotient_iso,
    kernel_symmetries,
    kernel_tuple_orbits,
    stabilizer_automorphisms,
    symmetry_generators,
)


def test_automorphism_counts(z52, s5):
    assert len(all_automorphisms(z52)) == 480  # |GL(2,5)| = (25-1)(25-5)
    assert len(all_automorphisms(build("C2"))) == 1
    assert len(all_automorphisms(s5)) == 120  # inner only


def test_automorphism_count_psl(psl7):
    assert len(all_automorphisms(psl7)) == 336  # PGL(2,7)


def test_automorphism_closure(z52):
    auts = all_automorphisms(z52)
    auts.assert_closed()


def test_automorphism_order_bound(z52):
    with pytest.raises(ResourceLimitError):
        all_automorphisms(z52, order_bound=10)


def test_generators_generate(z52):
    auts = all_automorphisms(z52)
    gens = auts.generators()
    reached = {auts.index_of(np.arange(z52.order, dtype=np.int64))}
    frontier = list(gens)
    reached.update(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = auts.compose(g, x)
            if y not in reached:
                reached.add(y)
                frontier.append(y)
    assert len(reached) == 480


def test_induced_quotient_iso_roundtrip(z52):
    rng = random.Random(5)
    auts = all_automorphisms(z52)
    K = subgroup_generated(z52, [1])
    src = quotient(z52, K)
    for _ in range(25):
        i = rng.randrange(len(auts))
        alpha = auts[i]
        image_kernel = subgroup_generated(z52, [int(alpha[g]) for g in K.members])
        dst = quotient(z52, image_kernel)
        fwd = induced_quotient_iso(alpha, src, dst)
        fwd.validate()
        inv_alpha = auts[auts.inverse(i)]
        back = induced_quotient_iso(inv_alpha, dst, src)
        composite = back.compose(fwd)
        assert np.array_equal(composite.image_of, np.arange(src.group.order))
        # compatibility with projections: induced(proj_K(x)) = proj_{aK}(alpha(x))
        for x in range(z52.order):
            assert fwd(src.project(x)) == dst.project(int(alpha[x]))


def test_induced_identity_map(z52):
    K = subgroup_generated(z52, [1])
    q = quotient(z52, K)
    ident = np.arange(z52.order, dtype=np.int64)
    hom = induced_quotient_iso(ident, q, q)
    assert np.array_equal(hom.image_of, np.arange(5))


def test_stabilizer_automorphisms_line(z52):
    K = subgroup_generated(z52, [1])
    stab = stabilizer_automorphisms(z52, [K])
    assert len(stab) == 80  # GL(2,5) acts transitively on the six lines
    for img in stab:
        assert sorted(int(img[m]) for m in K.members) == list(K.members)


def test_kernel_symmetries_counts(z52):
    triv = trivial_subgroup(z52)
    K = subgroup_generated(z52, [1])
    assert len(kernel_symmetries(z52, [triv, triv, K])) == 160
    assert len(kernel_symmetries(z52, [triv, triv, triv])) == 480 * 6


def test_kernel_symmetries_swapping_conjugate_kernels():
    z53 = build("C5^3")
    kernels = [subgroup_generated(z53, [g]) for g in z53.generators]
    pairs = kernel_symmetries(z53, kernels)
    # 4^3 diagonal maps for each of the 3! coordinate permutations
    assert len(pairs) == 384
    assert {p.src for p in pairs} == {
        (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)
    }


def test_symmetry_generators_close(z52):
    triv = trivial_subgroup(z52)
    K = subgroup_generated(z52, [1])
    pairs = kernel_symmetries(z52, [triv, triv, K])
    gens = symmetry_generators(pairs, 3, z52.order)
    index = {p.key(): i for i, p in enumerate(pairs)}
    reached = set()
    frontier = [index[g.key()] for g in gens]
    reached.update(frontier)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = index[pairs[x].compose(g).key()]
            if y not in reached:
                reached.add(y)
                frontier.append(y)
    assert len(reached) == len(pairs)


def test_kernel_tuple_orbits_z52_n3(z52):
    orbits = kernel_tuple_orbits(z52, 3)
    shapes = sorted(tuple(K.order for K in o.representative) for o in orbits)
    assert shapes == [(1, 1, 1), (1, 1, 5), (1, 1, 25), (1, 5, 5), (5, 5, 5)]
    for o in orbits:
        assert o.orbit_size * o.stabilizer_size == 480 * 6


def test_kernel_tuple_orbits_are_inequivalent(z52):
    # no symmetry maps one representative tuple to another
    orbits = kernel_tuple_orbits(z52, 3)
    auts = all_automorphisms(z52)
    reps = [tuple(K.key for K in o.representative) for o in orbits]
    rep_set = set(reps)
    from itertools import permutations

    for rep in reps:
        arrays = [np.asarray(k, dtype=np.int64) for k in rep]
        for i in range(len(auts)):
            img = auts[i]
            moved = [tuple(int(v) for v in np.sort(img[a])) for a in arrays]
            for perm in permutations(range(3)):
                cand = tuple(moved[p] for p in perm)
                if cand in rep_set:
                    assert cand == rep


def test_kernel_tuples_n2_need_both_trivial(z52):
    # for n = 2 the omit-one intersections are the kernels themselves, so
    # minimality forces both kernels trivial
    orbits = kernel_tuple_orbits(z52, 2)
    assert [[K.order for K in o.representative] for o in orbits] == [[1, 1]]
