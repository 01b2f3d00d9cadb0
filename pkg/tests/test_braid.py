import random

from beauville.braid import (
    TripleIndex,
    apply_braid,
    apply_braid_word,
    braid_orbit,
    braid_type_automorphisms,
    orbit_classes,
)
from beauville.catalog import build
from beauville.groups import pack_exponents
from beauville.morphisms import all_automorphisms
from beauville.triples import GeneratingTriple, packed_triples


def _v(a, b):
    return pack_exponents((a, b), (5, 5))


def test_abelian_moves_are_transpositions(z52):
    t = GeneratingTriple(z52, _v(1, 0), _v(0, 1), _v(4, 4))
    assert apply_braid("s1", t).entries == (_v(0, 1), _v(1, 0), _v(4, 4))
    assert apply_braid("s2", t).entries == (_v(1, 0), _v(4, 4), _v(0, 1))


def test_moves_preserve_validity(s5):
    rng = random.Random(3)
    triples = packed_triples(s5)
    for _ in range(50):
        t = GeneratingTriple(s5, *rng.choice(triples))
        for move in ("s1", "s2", "s1i", "s2i"):
            moved = apply_braid(move, t)
            moved.validate()


def test_inverse_moves(s5):
    t = GeneratingTriple(s5, *packed_triples(s5)[7])
    assert apply_braid("s1i", apply_braid("s1", t)).entries == t.entries
    assert apply_braid("s2i", apply_braid("s2", t)).entries == t.entries
    assert apply_braid("s1", apply_braid("s1i", t)).entries == t.entries
    assert apply_braid("s2", apply_braid("s2i", t)).entries == t.entries


def test_braid_relation_exhaustive_z52(z52):
    for t in packed_triples(z52):
        trip = GeneratingTriple(z52, *t)
        left = apply_braid_word(["s1", "s2", "s1"], trip)
        right = apply_braid_word(["s2", "s1", "s2"], trip)
        assert left.entries == right.entries


def test_automorphism_braid_commutation(s5):
    rng = random.Random(9)
    auts = all_automorphisms(s5)
    triples = packed_triples(s5)
    for _ in range(60):
        t = GeneratingTriple(s5, *rng.choice(triples))
        arr = auts[rng.randrange(len(auts))]
        move = rng.choice(["s1", "s2", "s1i", "s2i"])
        left = apply_braid(move, GeneratingTriple(s5, *(int(arr[e]) for e in t.entries)))
        moved = apply_braid(move, t)
        right = GeneratingTriple(s5, *(int(arr[e]) for e in moved.entries))
        assert left.entries == right.entries


def test_braid_orbit_z5(z5):
    orbit = braid_orbit(GeneratingTriple(z5, 1, 1, 3))
    assert {t.entries for t in orbit} == {(1, 1, 3), (1, 3, 1), (3, 1, 1)}


def test_orbit_size_constant_along_orbit(s5):
    t = GeneratingTriple(s5, *packed_triples(s5, (2, 5, 4))[0])
    orbit = braid_orbit(t)
    sizes = {len(braid_orbit(u)) for u in list(orbit)[:10]}
    assert sizes == {len(orbit)}


def test_orbit_classes_z52(z52):
    oc = orbit_classes(z52, type_filter=(5, 5, 5))
    assert len(oc.classes) == 1
    assert oc.classes[0].class_size == 480
    idx = TripleIndex(z52)
    paper = (_v(1, 0), _v(0, 1), _v(4, 4))
    assert oc.class_of_b3key[idx.key(paper)] == 0


def test_orbit_classes_z5(z5):
    oc = orbit_classes(z5)
    assert len(oc.classes) == 1
    assert oc.classes[0].class_size == 12


def test_orbit_classes_partition(s5):
    oc = orbit_classes(s5, type_filter=(2, 5, 4))
    total = sum(c.class_size for c in oc.classes)
    assert total == len(packed_triples(s5, (2, 5, 4)))
    # genus and type multiset are class invariants by construction; the key is
    # the least packed triple so classes are sorted and stable
    keys = [c.key for c in oc.classes]
    assert keys == sorted(keys)


def test_braid_type_automorphisms_identity_always_member(s5):
    auts = all_automorphisms(s5)
    t = GeneratingTriple(s5, *packed_triples(s5)[0])
    import numpy as np

    ident = auts.index_of(np.arange(s5.order, dtype=np.int64))
    assert ident in braid_type_automorphisms(s5, t, auts)


def test_braid_type_automorphisms_beauville_triple(z52):
    auts = all_automorphisms(z52)
    t = GeneratingTriple(z52, _v(1, 0), _v(0, 1), _v(4, 4))
    bt = braid_type_automorphisms(z52, t, auts)
    assert len(bt) == 6  # the matrices permuting the three lines of the triple
    # closed under composition
    members = set(bt)
    for i in bt:
        for j in bt:
            assert auts.compose(i, j) in members


def test_orbit_stabilizer_bookkeeping(s5):
    # |BAut(S)| * |Aut x B3 orbit of S| = |Aut| * |B3 orbit of S|
    rng = random.Random(21)
    auts = all_automorphisms(s5)
    oc = orbit_classes(s5)
    idx = TripleIndex(s5)
    triples = packed_triples(s5)
    hyp = [t for t in triples if idx.key(t) in oc.class_of_b3key]
    for _ in range(8):
        t = rng.choice(hyp)
        trip = GeneratingTriple(s5, *t)
        bt = braid_type_automorphisms(s5, trip, auts, idx)
        cls = oc.classes[oc.class_of_b3key[idx.key(t)]]
        b3size = len(braid_orbit(trip))
        assert len(bt) * cls.class_size == len(auts) * b3size


def test_orbit_classes_against_raw_partition():
    """Independent oracle: partition the [7,7,7] triples of C7^2 by plain BFS
    over braid moves and automorphism generators applied to raw triples."""
    G = build("C7^2")
    triples = packed_triples(G, (7, 7, 7))
    oc = orbit_classes(G, type_filter=(7, 7, 7))
    auts = all_automorphisms(G)
    gen_arrs = [auts[i] for i in auts.generators()]
    from beauville.braid import BRAID_MOVES, _apply_move

    rows, inverse = G.rows, G.inverse
    seen = set()
    orbits = 0
    for start in triples:
        if start in seen:
            continue
        orbits += 1
        frontier = [start]
        seen.add(start)
        while frontier:
            cur = frontier.pop()
            nxts = [_apply_move(rows, inverse, m, cur) for m in BRAID_MOVES]
            nxts += [tuple(int(arr[e]) for e in cur) for arr in gen_arrs]
            for nxt in nxts:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    assert orbits == len(oc.classes)
    assert len(seen) == sum(c.class_size for c in oc.classes)


def test_stabilizer_set_invariance_along_orbit(z52):
    t = GeneratingTriple(z52, _v(1, 0), _v(0, 1), _v(4, 4))
    base = t.stabilizer_mask()
    for u in braid_orbit(t):
        assert u.stabilizer_mask() == base
