"""The Artin braid group B3 acting on generating triples.

sigma1 * [a,b,c] = [aba^-1, a, c] and sigma2 * [a,b,c] = [a, bcb^-1, b];
the inverses are solved from these.  Orbits are closed breadth-first over the
four moves; full Aut x B3 classes merge braid orbits through a union-find
keyed by braid-orbit canonical keys (the lexicographically least packed
triple), so class keys are stable across runs for deterministic constructors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .groups import FiniteGroup
from .morphisms import AutomorphismGroup, all_automorphisms
from .triples import (
    GeneratingTriple,
    genus_of_type,
    is_hyperbolic_type,
    pack,
    packed_triples,
    unpack,
)

BRAID_MOVES = ("s1", "s2", "s1i", "s2i")


def apply_braid(move: str, S: GeneratingTriple) -> GeneratingTriple:
    """One braid move applied to an API-level triple."""
    G = S.group
    a, b, c = _apply_move(G.rows, G.inverse, move, S.entries)
    return GeneratingTriple(G, a, b, c)


def _apply_move(rows, inverse, move: str, entries: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = entries
    if move == "s1":
        return (rows[rows[a][b]][int(inverse[a])], a, c)
    if move == "s2":
        return (a, rows[rows[b][c]][int(inverse[b])], b)
    if move == "s1i":
        return (b, rows[rows[int(inverse[b])][a]][b], c)
    if move == "s2i":
        return (a, c, rows[rows[int(inverse[c])][b]][c])
    raise InputError(f"unknown braid move {move!r}")


def apply_braid_word(word: Iterable[str], S: GeneratingTriple) -> GeneratingTriple:
    """Apply moves left to right."""
    out = S
    for move in word:
        out = apply_braid(move, out)
    return out


def braid_orbit_entries(G: FiniteGroup, entries: tuple[int, int, int]) -> set[tuple[int, int, int]]:
    rows = G.rows
    inverse = G.inverse
    seen = {entries}
    frontier = [entries]
    while frontier:
        cur = frontier.pop()
        for move in BRAID_MOVES:
            nxt = _apply_move(rows, inverse, move, cur)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def braid_orbit(S: GeneratingTriple) -> set[GeneratingTriple]:
    G = S.group
    return {GeneratingTriple(G, *e) for e in braid_orbit_entries(G, S.entries)}


class TripleIndex:
    """Per-group cache of braid-orbit canonical keys.

    key(t) is the minimum packed triple over the B3 orbit of t; all orbit
    members share it.  Orbits are explored lazily and memoized.
    """

    def __init__(self, G: FiniteGroup):
        self.group = G
        self._key: dict[tuple[int, int, int], int] = {}
        self._orbit_size: dict[int, int] = {}

    def key(self, entries: tuple[int, int, int]) -> int:
        got = self._key.get(entries)
        if got is not None:
            return got
        orbit = braid_orbit_entries(self.group, entries)
        key = min(pack(self.group, *e) for e in orbit)
        for e in orbit:
            self._key[e] = key
        self._orbit_size[key] = len(orbit)
        return key

    def orbit_size(self, key: int) -> int:
        return self._orbit_size[key]

    def rep(self, key: int) -> tuple[int, int, int]:
        return unpack(self.group, key)


@dataclass(frozen=True)
class OrbitClass:
    """One Aut(G) x B3 orbit of generating triples."""

    group: FiniteGroup
    representative: GeneratingTriple
    key: int  # least packed triple over the whole class
    class_size: int
    b3_orbit_size: int  # of the representative's braid orbit
    type: tuple[int, int, int]
    genus: int

    @property
    def type_multiset(self) -> tuple[int, int, int]:
        return tuple(sorted(self.type))  # type: ignore[return-value]


class OrbitClassification:
    """Classes plus lookup from any triple's braid key to its class."""

    def __init__(self, group: FiniteGroup, classes: list[OrbitClass], class_of_b3key: dict[int, int]):
        self.group = group
        self.classes = classes
        self.class_of_b3key = class_of_b3key

    def __len__(self) -> int:
        return len(self.classes)

    def class_index_of(self, index: TripleIndex, entries: tuple[int, int, int]) -> int:
        return self.class_of_b3key[index.key(entries)]


def orbit_classes(
    H: FiniteGroup,
    type_filter: Optional[Sequence[int]] = None,
    auts: Optional[AutomorphismGroup] = None,
    index: Optional[TripleIndex] = None,
    hyperbolic_only: bool = True,
) -> OrbitClassification:
    """Partition the (filtered) generating triples into Aut(H) x B3 orbits."""
    if auts is None:
        auts = all_automorphisms(H)
    if index is None:
        index = TripleIndex(H)
    triples = packed_triples(H, type_filter)
    if hyperbolic_only:
        orders = H.element_order
        triples = [
            t for t in triples if is_hyperbolic_type((int(orders[t[0]]), int(orders[t[1]]), int(orders[t[2]])))
        ]

    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    b3keys: list[int] = []
    for t in triples:
        k = index.key(t)
        if k not in parent:
            parent[k] = k
            b3keys.append(k)
    gen_arrs = [auts[i] for i in auts.generators()]
    for k in b3keys:
        a, b, c = index.rep(k)
        for arr in gen_arrs:
            union(k, index.key((int(arr[a]), int(arr[b]), int(arr[c]))))

    grouped: dict[int, list[int]] = {}
    for k in b3keys:
        grouped.setdefault(find(k), []).append(k)

    classes: list[OrbitClass] = []
    class_of_b3key: dict[int, int] = {}
    orders = H.element_order
    for root in sorted(grouped, key=lambda r: min(grouped[r])):
        members = grouped[root]
        key = min(members)
        size = sum(index.orbit_size(k) for k in members)
        rep_entries = index.rep(key)
        rep = GeneratingTriple(H, *rep_entries)
        t = tuple(int(orders[e]) for e in rep_entries)
        cls = OrbitClass(
            group=H,
            representative=rep,
            key=key,
            class_size=size,
            b3_orbit_size=index.orbit_size(key),
            type=t,  # type: ignore[arg-type]
            genus=genus_of_type(H.order, t),
        )
        cid = len(classes)
        classes.append(cls)
        for k in members:
            class_of_b3key[k] = cid
    return OrbitClassification(H, classes, class_of_b3key)


def braid_type_automorphisms(
    H: FiniteGroup,
    S: GeneratingTriple,
    auts: Optional[AutomorphismGroup] = None,
    index: Optional[TripleIndex] = None,
) -> list[int]:
    """Indices of automorphisms whose action on S is undone by some braid.

    These are exactly the automorphisms keeping S inside its own braid orbit;
    the result is a subgroup of Aut(H).
    """
    if auts is None:
        auts = all_automorphisms(H)
    if index is None:
        index = TripleIndex(H)
    key = index.key(S.entries)
    a, b, c = S.entries
    out = []
    for i, arr in enumerate(auts.auts):
        moved = (int(arr[a]), int(arr[b]), int(arr[c]))
        if index.key(moved) == key:
            out.append(i)
    return out
