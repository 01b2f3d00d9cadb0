"""Spherical generating triples: enumeration, genus, and stabilizer sets.

A triple [a,b,c] of non-identity elements with abc = 1 generating the group
encodes a Galois cover of the line branched over three points.  Triples are
kept ordered; identification up to reordering happens only through the braid
action in the braid module.  Hot paths work on packed integer triples, the
GeneratingTriple dataclass is the API-facing view.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import InputError, InternalInvariantError
from .groups import FiniteGroup, QuotientGroup, Subgroup, closure


def pack(G: FiniteGroup, a: int, b: int, c: int) -> int:
    n = G.order
    return (a * n + b) * n + c


def unpack(G: FiniteGroup, packed: int) -> tuple[int, int, int]:
    n = G.order
    ab, c = divmod(packed, n)
    a, b = divmod(ab, n)
    return a, b, c


@dataclass(frozen=True)
class GeneratingTriple:
    """Ordered triple [a,b,c], abc = 1, generating its group."""

    group: FiniteGroup
    a: int
    b: int
    c: int

    @property
    def entries(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def type(self) -> tuple[int, int, int]:
        orders = self.group.element_order
        return (int(orders[self.a]), int(orders[self.b]), int(orders[self.c]))

    @property
    def packed(self) -> int:
        return pack(self.group, self.a, self.b, self.c)

    @property
    def genus(self) -> int:
        return genus_of_type(self.group.order, self.type)

    def is_hyperbolic(self) -> bool:
        return is_hyperbolic_type(self.type)

    def stabilizer_mask(self) -> int:
        return stabilizer_mask(self.group, self.a, self.b, self.c)

    def stabilizer_set(self) -> tuple[int, ...]:
        return _mask_to_tuple(self.stabilizer_mask())

    def validate(self) -> None:
        G = self.group
        if 0 in self.entries:
            raise InputError("triple entries must be non-identity")
        if G.mul(G.mul(self.a, self.b), self.c) != 0:
            raise InputError("triple entries do not multiply to the identity")
        if len(closure(G, (self.a, self.b), stop_at=G.order)) != G.order:
            raise InputError("triple does not generate the group")

    def words(self) -> tuple[str, str, str]:
        name = self.group.element_name
        return (name(self.a), name(self.b), name(self.c))


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def is_hyperbolic_type(type_: Sequence[int]) -> bool:
    """1/m1 + 1/m2 + 1/m3 < 1, checked in exact integer arithmetic."""
    m1, m2, m3 = type_
    return m2 * m3 + m1 * m3 + m1 * m2 < m1 * m2 * m3


def genus_of_type(group_order: int, type_: Sequence[int]) -> int:
    """The genus from Hurwitz's formula 2g - 2 = |G| (1 - sum 1/m_i)."""
    m1, m2, m3 = type_
    for m in type_:
        if group_order % m != 0:
            raise InternalInvariantError(f"type entry {m} does not divide the group order {group_order}")
    num = group_order * (m1 * m2 * m3 - m2 * m3 - m1 * m3 - m1 * m2)
    den = m1 * m2 * m3
    if num % den != 0:
        raise InternalInvariantError(f"Hurwitz count 2g-2 is not integral for order {group_order}, type {tuple(type_)}")
    double = num // den
    if double % 2 != 0:
        raise InternalInvariantError(f"Hurwitz count 2g-2 = {double} is odd for order {group_order}, type {tuple(type_)}")
    g = double // 2 + 1
    if g < 0:
        raise InternalInvariantError(f"negative genus for order {group_order}, type {tuple(type_)}")
    return g


def generates(G: FiniteGroup, a: int, b: int) -> bool:
    return len(closure(G, (a, b), stop_at=G.order)) == G.order


def _normalize_type_filter(type_filter, ordered: bool):
    if type_filter is None:
        return None
    t = tuple(int(v) for v in type_filter)
    if len(t) != 3 or any(v < 2 for v in t):
        raise InputError(f"type filter must be three integers >= 2, got {type_filter}")
    return t if ordered else tuple(sorted(t))


def enumerate_triples(
    H: FiniteGroup,
    type_filter: Optional[Sequence[int]] = None,
    ordered_filter: bool = False,
) -> Iterator[GeneratingTriple]:
    """All generating triples of H, emitted once each in (a, b) lexicographic order.

    type_filter compares the sorted type multiset by default, the ordered type
    when ordered_filter is set.
    """
    for a, b, c in packed_triples(H, type_filter, ordered_filter):
        yield GeneratingTriple(H, a, b, c)


def packed_triples(
    H: FiniteGroup,
    type_filter: Optional[Sequence[int]] = None,
    ordered_filter: bool = False,
) -> list[tuple[int, int, int]]:
    """Triple enumeration core; returns entry tuples."""
    want = _normalize_type_filter(type_filter, ordered_filter)
    n = H.order
    rows = H.rows
    inverse = H.inverse
    orders = H.element_order
    out: list[tuple[int, int, int]] = []
    generating_pairs: dict[tuple[int, int], bool] = {}
    for a in range(1, n):
        row_a = rows[a]
        ord_a = int(orders[a])
        for b in range(1, n):
            c = int(inverse[row_a[b]])
            if c == 0:
                continue
            if want is not None:
                t = (ord_a, int(orders[b]), int(orders[c]))
                if ordered_filter:
                    if t != want:
                        continue
                elif tuple(sorted(t)) != want:
                    continue
            key = (a, b) if a <= b else (b, a)
            hit = generating_pairs.get(key)
            if hit is None:
                hit = generates(H, a, b)
                generating_pairs[key] = hit
            if hit:
                out.append((a, b, c))
    return out


def stabilizer_mask(G: FiniteGroup, a: int, b: int, c: int) -> int:
    """Bitset of the union of all conjugates of <a>, <b>, <c>.

    Conjugates of a cyclic subgroup are the cyclic subgroups generated by the
    conjugacy class of its generator, so the precomputed classes do the work.
    """
    mask = 1
    rows = G.rows
    class_of = G.class_of
    classes = G.conjugacy_classes
    for gen in (a, b, c):
        for x in classes[int(class_of[gen])]:
            p = x
            while p != 0:
                mask |= 1 << p
                p = rows[p][x]
    return mask


@dataclass(frozen=True)
class LiftedTriple:
    """A quotient triple together with its preimage stabilizer data in G."""

    triple: GeneratingTriple
    kernel: Subgroup
    lifted_mask: int

    def lifted_set(self) -> tuple[int, ...]:
        return _mask_to_tuple(self.lifted_mask)


def lift_stabilizer(triple: GeneratingTriple, Q: QuotientGroup) -> LiftedTriple:
    """Preimage in the parent group of the triple's stabilizer set."""
    if triple.group is not Q.group:
        raise InputError("triple does not live on this quotient")
    qmask = triple.stabilizer_mask()
    return LiftedTriple(triple, Q.kernel, Q.lift_mask(qmask))


def lift_mask_of_packed(Q: QuotientGroup, packed_entries: tuple[int, int, int]) -> int:
    a, b, c = packed_entries
    return Q.lift_mask(stabilizer_mask(Q.group, a, b, c))
