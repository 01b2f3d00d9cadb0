"""Unmixed Beauville structures and their biholomorphism classes.

A structure on G is an admissible tuple of normal kernels (K_1..K_n) plus one
hyperbolic generating triple per quotient G/K_i, subject to the freeness
condition: the lifted stabilizer sets intersect in the identity alone.
Classes are orbits under Aut(G) x (B3 wr S_n).

Two independent counting paths are implemented:

* the brute-force oracle: enumerate every valid structure with the kernel
  tuple fixed (collapsed along braid orbits) and partition by breadth-first
  search under the kernel-tuple symmetries;
* the fiber algorithm: reduce to orbit classes T(G/K_i) per quotient, then
  count each fiber over a class tuple as orbits on a product of coset spaces
  Aut(G/K_i)/BAut(G/K_i, S_i), and filter by freeness.

Restricting orbits of the full action to structures with one fixed kernel
tuple is sound because every orbit meets that slice, and two slice members
are equivalent iff some symmetry pair of the ordered kernel tuple connects
them.  Both paths share the slice reduction but nothing downstream of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InputError, InternalInvariantError, ResourceLimitError
from .groups import FiniteGroup, QuotientGroup, Subgroup, quotient, normal_subgroups, trivial_subgroup
from .morphisms import (
    AutomorphismGroup,
    KernelSymmetry,
    admissible_kernel_tuples,
    all_automorphisms,
    induced_quotient_iso,
    kernel_symmetries,
    symmetry_generators,
)
from .braid import OrbitClassification, TripleIndex, orbit_classes
from .triples import (
    GeneratingTriple,
    genus_of_type,
    is_hyperbolic_type,
    packed_triples,
    stabilizer_mask,
)

FULL_ENGINE_CAP = 2_000_000
SECTION_THRESHOLD = 100_000


# -- structures ----------------------------------------------------------------


def is_minimal_kernel_tuple(kernels: Sequence[Subgroup]) -> bool:
    """Every omit-one intersection of the kernels is trivial."""
    n = len(kernels)
    if n < 2:
        return False
    for omit in range(n):
        acc = ~0
        for j, K in enumerate(kernels):
            if j != omit:
                acc &= K.mask
        if acc != 1:
            return False
    return True


@dataclass(frozen=True)
class BeauvilleStructure:
    """Kernel tuple plus one generating triple per quotient."""

    group: FiniteGroup
    kernels: tuple[Subgroup, ...]
    quotients: tuple[QuotientGroup, ...]
    triples: tuple[GeneratingTriple, ...]

    @property
    def n(self) -> int:
        return len(self.kernels)

    @property
    def genera(self) -> tuple[int, ...]:
        return tuple(t.genus for t in self.triples)

    def lifted_masks(self) -> tuple[int, ...]:
        return tuple(
            Q.lift_mask(t.stabilizer_mask()) for Q, t in zip(self.quotients, self.triples)
        )

    def is_free(self) -> bool:
        acc = ~0
        for m in self.lifted_masks():
            acc &= m
        return acc == 1

    def validate(self) -> None:
        if len({len(self.kernels), len(self.quotients), len(self.triples)}) != 1:
            raise InputError("kernel, quotient and triple counts differ")
        if not is_minimal_kernel_tuple(self.kernels):
            raise InputError("kernel tuple is not minimal")
        for Q, t in zip(self.quotients, self.triples):
            if t.group is not Q.group:
                raise InputError("triple lives on the wrong quotient")
            t.validate()
            if not t.is_hyperbolic():
                raise InputError(f"triple of type {t.type} is not hyperbolic")
        if not self.is_free():
            raise InputError("lifted stabilizer sets intersect nontrivially")


def is_free_masks(masks: Sequence[int]) -> bool:
    acc = ~0
    for m in masks:
        acc &= m
    return acc == 1


# -- per-kernel-tuple context ----------------------------------------------------


class KernelContext:
    """Shared machinery for one group with one fixed ordered kernel tuple."""

    def __init__(self, G: FiniteGroup, kernels: Sequence[Subgroup]):
        if len(kernels) < 2:
            raise InputError("Beauville structures need n >= 2 factors")
        self.group = G
        self.kernels = tuple(kernels)
        self.n = len(kernels)
        if not is_minimal_kernel_tuple(self.kernels):
            raise InputError("kernel tuple fails the minimality condition")
        self.quotient_by_key: dict[tuple[int, ...], QuotientGroup] = {}
        for K in self.kernels:
            if K.key not in self.quotient_by_key:
                self.quotient_by_key[K.key] = quotient(G, K)
        self.quotients = tuple(self.quotient_by_key[K.key] for K in self.kernels)
        self.index_by_key = {key: TripleIndex(Q.group) for key, Q in self.quotient_by_key.items()}
        self._hyp: dict[tuple[int, ...], list[tuple[int, int, int]]] = {}
        self._key_data: dict[tuple[int, ...], dict[int, tuple[int, int]]] = {}
        self._symmetries: Optional[list[KernelSymmetry]] = None
        self._symmetry_gens: Optional[list[KernelSymmetry]] = None
        self._iso_cache: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}
        self._key_transport: dict[tuple[int, int], dict[int, int]] = {}
        self._auts: dict[tuple[int, ...], AutomorphismGroup] = {}
        self._classes: dict[tuple[int, ...], OrbitClassification] = {}

    # triples, braid keys, lifted masks ------------------------------------

    def hyperbolic_triples(self, key: tuple[int, ...]) -> list[tuple[int, int, int]]:
        if key not in self._hyp:
            Q = self.quotient_by_key[key].group
            orders = Q.element_order
            self._hyp[key] = [
                t
                for t in packed_triples(Q)
                if is_hyperbolic_type((int(orders[t[0]]), int(orders[t[1]]), int(orders[t[2]])))
            ]
        return self._hyp[key]

    def key_data(self, key: tuple[int, ...]) -> dict[int, tuple[int, int]]:
        """b3key -> (genus, lifted stabilizer mask), one entry per braid orbit."""
        if key not in self._key_data:
            Q = self.quotient_by_key[key]
            index = self.index_by_key[key]
            orders = Q.group.element_order
            data: dict[int, tuple[int, int]] = {}
            for t in self.hyperbolic_triples(key):
                k = index.key(t)
                if k not in data:
                    typ = (int(orders[t[0]]), int(orders[t[1]]), int(orders[t[2]]))
                    mask = Q.lift_mask(stabilizer_mask(Q.group, *t))
                    data[k] = (genus_of_type(Q.group.order, typ), mask)
            self._key_data[key] = data
        return self._key_data[key]

    # symmetries ------------------------------------------------------------

    @property
    def symmetries(self) -> list[KernelSymmetry]:
        if self._symmetries is None:
            self._symmetries = kernel_symmetries(self.group, self.kernels)
        return self._symmetries

    @property
    def symmetry_gens(self) -> list[KernelSymmetry]:
        if self._symmetry_gens is None:
            self._symmetry_gens = symmetry_generators(self.symmetries, self.n, self.group.order)
        return self._symmetry_gens

    def iso_array(self, pair_index: int, src_key: tuple[int, ...]) -> np.ndarray:
        """Induced map on quotient elements for one symmetry pair, from Q(src_key)."""
        cache_key = (pair_index, src_key)
        got = self._iso_cache.get(cache_key)
        if got is None:
            alpha = self.symmetries[pair_index].aut
            srcQ = self.quotient_by_key[src_key]
            dst_key = tuple(int(v) for v in np.sort(alpha[np.asarray(src_key, dtype=np.int64)]))
            dstQ = self.quotient_by_key[dst_key]
            got = induced_quotient_iso(alpha, srcQ, dstQ).image_of
            self._iso_cache[cache_key] = got
        return got

    def transport_key(self, pair_index: int, position: int, b3key: int) -> int:
        """Braid key at `position` of a triple moved there by symmetry pair `pair_index`."""
        pair = self.symmetries[pair_index]
        src_pos = pair.src[position]
        src_key = self.kernels[src_pos].key
        dst_key = self.kernels[position].key
        cache_key = (pair_index, position)
        table = self._key_transport.get(cache_key)
        if table is None:
            table = {}
            self._key_transport[cache_key] = table
        got = table.get(b3key)
        if got is None:
            iso = self.iso_array(pair_index, src_key)
            a, b, c = self.index_by_key[src_key].rep(b3key)
            got = self.index_by_key[dst_key].key((int(iso[a]), int(iso[b]), int(iso[c])))
            table[b3key] = got
        return got

    def pair_index_map(self) -> dict[tuple, int]:
        return {p.key(): i for i, p in enumerate(self.symmetries)}

    # canonical keys ----------------------------------------------------------

    def structure_key(self, b3keys: Sequence[int]) -> tuple[int, ...]:
        """Least transported braid-key tuple over all kernel-tuple symmetries."""
        best: Optional[tuple[int, ...]] = None
        for pi, pair in enumerate(self.symmetries):
            cand = tuple(self.transport_key(pi, i, b3keys[pair.src[i]]) for i in range(self.n))
            if best is None or cand < best:
                best = cand
        assert best is not None
        return best

    # automorphisms and orbit classes per quotient ------------------------------

    def quotient_automorphisms(self, key: tuple[int, ...]) -> AutomorphismGroup:
        if key not in self._auts:
            self._auts[key] = all_automorphisms(self.quotient_by_key[key].group)
        return self._auts[key]

    def quotient_classes(self, key: tuple[int, ...]) -> OrbitClassification:
        if key not in self._classes:
            self._classes[key] = orbit_classes(
                self.quotient_by_key[key].group,
                auts=self.quotient_automorphisms(key),
                index=self.index_by_key[key],
            )
        return self._classes[key]


# -- valid structures with a fixed kernel tuple (braid-collapsed) ----------------


def _chi_target(G: FiniteGroup, n: int, chi: Optional[int]) -> Optional[int]:
    """prod(g_i - 1) implied by chi, or None; rejects sign-impossible requests."""
    if chi is None:
        return None
    target = chi * G.order * (-1 if n % 2 else 1)
    if target <= 0:
        raise InputError(f"chi = {chi} has the wrong sign for n = {n}")
    return target


def _normalize_types(types) -> Optional[tuple[tuple[int, ...], ...]]:
    if types is None:
        return None
    normalized = tuple(sorted(tuple(sorted(int(v) for v in t)) for t in types))
    return normalized


def valid_key_tuples(
    ctx: KernelContext, chi: Optional[int] = None, types=None
) -> list[tuple[int, ...]]:
    """All free structures with this kernel tuple, one per braid-orbit tuple."""
    target = _chi_target(ctx.group, ctx.n, chi)
    want_types = _normalize_types(types)
    per_position = []
    for K in ctx.kernels:
        data = ctx.key_data(K.key)
        per_position.append(sorted(data.items()))
    index_by_key = [ctx.index_by_key[K.key] for K in ctx.kernels]
    out: list[tuple[int, ...]] = []

    def rec(pos: int, mask_acc: int, genus_prod: int, keys: list[int]) -> None:
        if pos == ctx.n:
            if mask_acc != 1:
                return
            if target is not None and genus_prod != target:
                return
            if want_types is not None:
                got = tuple(
                    sorted(
                        tuple(sorted(_type_of_key(ctx, ctx.kernels[i].key, keys[i])))
                        for i in range(ctx.n)
                    )
                )
                if got != want_types:
                    return
            out.append(tuple(keys))
            return
        for k, (genus, mask) in per_position[pos]:
            new_mask = mask_acc & mask
            new_prod = genus_prod * (genus - 1)
            if target is not None and (new_prod > target or target % new_prod):
                continue
            keys.append(k)
            rec(pos + 1, new_mask, new_prod, keys)
            keys.pop()

    rec(0, ~0, 1, [])
    return out


def _type_of_key(ctx: KernelContext, kernel_key: tuple[int, ...], b3key: int) -> tuple[int, int, int]:
    Q = ctx.quotient_by_key[kernel_key].group
    a, b, c = ctx.index_by_key[kernel_key].rep(b3key)
    o = Q.element_order
    return (int(o[a]), int(o[b]), int(o[c]))


# -- brute-force oracle -----------------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    key: tuple[int, ...]
    size: int  # number of braid-collapsed structures in the orbit


def brute_orbit_records(
    ctx: KernelContext, chi: Optional[int] = None, types=None
) -> list[OrbitRecord]:
    """Partition the valid braid-key tuples under the kernel-tuple symmetries."""
    valid = valid_key_tuples(ctx, chi, types)
    valid_set = set(valid)
    pair_map = ctx.pair_index_map()
    gen_indices = [pair_map[p.key()] for p in ctx.symmetry_gens]
    visited: set[tuple[int, ...]] = set()
    records = []
    for node in sorted(valid):
        if node in visited:
            continue
        orbit = {node}
        frontier = [node]
        while frontier:
            cur = frontier.pop()
            for pi in gen_indices:
                pair = ctx.symmetries[pi]
                nxt = tuple(
                    ctx.transport_key(pi, i, cur[pair.src[i]]) for i in range(ctx.n)
                )
                if nxt not in orbit:
                    if nxt not in valid_set:
                        raise InternalInvariantError("symmetry left the valid structure set")
                    orbit.add(nxt)
                    frontier.append(nxt)
        visited |= orbit
        records.append(OrbitRecord(min(orbit), len(orbit)))
    records.sort(key=lambda r: r.key)
    return records


# -- the fiber algorithm -----------------------------------------------------------


@dataclass
class _CosetSpace:
    """Cosets Aut(Q)/BAut(Q, R) for one orbit-class representative R."""

    auts: AutomorphismGroup
    rep_triple: tuple[int, int, int]
    baut: list[int]
    coset_of_aut: list[int]
    rep_aut: list[int]
    key_to_coset: dict[int, int]
    lmul: Optional[list[list[int]]] = None  # aut index -> coset action, built on demand

    @property
    def count(self) -> int:
        return len(self.rep_aut)


def _build_coset_space(
    auts: AutomorphismGroup, index: TripleIndex, rep_triple: tuple[int, int, int], baut: list[int]
) -> _CosetSpace:
    n = len(auts)
    coset_of_aut = [-1] * n
    rep_aut: list[int] = []
    for j in range(n):
        if coset_of_aut[j] >= 0:
            continue
        cid = len(rep_aut)
        rep_aut.append(j)
        for b in baut:
            k = auts.compose(j, b)
            if coset_of_aut[k] >= 0 and coset_of_aut[k] != cid:
                raise InternalInvariantError("BAut coset partition is inconsistent")
            coset_of_aut[k] = cid
    key_to_coset: dict[int, int] = {}
    a, b, c = rep_triple
    for cid, j in enumerate(rep_aut):
        arr = auts[j]
        key = index.key((int(arr[a]), int(arr[b]), int(arr[c])))
        if key in key_to_coset:
            raise InternalInvariantError("braid keys do not separate BAut cosets")
        key_to_coset[key] = cid
    return _CosetSpace(auts, rep_triple, baut, coset_of_aut, rep_aut, key_to_coset)


def _lmul_table(space: _CosetSpace) -> list[list[int]]:
    """coset(u . rep(c)) for every automorphism u; left multiplication action."""
    if space.lmul is None:
        auts = space.auts
        out = []
        for u in range(len(auts)):
            arr_u = auts[u]
            row = [0] * space.count
            for cid, j in enumerate(space.rep_aut):
                row[cid] = space.coset_of_aut[auts.index_of(arr_u[auts[j]])]
            out.append(row)
        space.lmul = out
    return space.lmul


@dataclass(frozen=True)
class StructureClass:
    """One biholomorphism class with a concrete representative structure."""

    canonical_key: tuple[int, ...]
    entries: tuple[tuple[int, int, int], ...]  # per position, on its quotient
    types: tuple[tuple[int, int, int], ...]
    genera: tuple[int, ...]


def fiber_classes(
    ctx: KernelContext,
    chi: Optional[int] = None,
    types=None,
    engine_cap: int = FULL_ENGINE_CAP,
) -> list[StructureClass]:
    """Classes of free structures on this kernel tuple via the fiber algorithm."""
    target = _chi_target(ctx.group, ctx.n, chi)
    want_types = _normalize_types(types)
    classifications = {key: ctx.quotient_classes(key) for key in ctx.quotient_by_key}

    allowed_per_position: list[list[int]] = []
    for K in ctx.kernels:
        allowed_per_position.append(list(range(len(classifications[K.key].classes))))

    # class tuples x, filtered by chi and type constraints
    xs: list[tuple[int, ...]] = []

    def rec(pos: int, prod: int, acc: list[int]) -> None:
        if pos == ctx.n:
            if target is not None and prod != target:
                return
            if want_types is not None:
                got = tuple(
                    sorted(
                        classifications[ctx.kernels[i].key].classes[acc[i]].type_multiset
                        for i in range(ctx.n)
                    )
                )
                if got != want_types:
                    return
            xs.append(tuple(acc))
            return
        key = ctx.kernels[pos].key
        for ci in allowed_per_position[pos]:
            g = classifications[key].classes[ci].genus
            new_prod = prod * (g - 1)
            if target is not None and (new_prod > target or target % new_prod):
                continue
            acc.append(ci)
            rec(pos + 1, new_prod, acc)
            acc.pop()

    rec(0, 1, [])

    # orbits of the symmetry pairs on class tuples
    pair_map = ctx.pair_index_map()
    gen_indices = [pair_map[p.key()] for p in ctx.symmetry_gens]
    x_set = set(xs)
    seen: set[tuple[int, ...]] = set()
    out: list[StructureClass] = []
    for x in sorted(xs):
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            cur = frontier.pop()
            for pi in gen_indices:
                nxt = _transport_x(ctx, classifications, pi, cur)
                if nxt not in orbit:
                    if nxt not in x_set:
                        raise InternalInvariantError("symmetry left the filtered class-tuple set")
                    orbit.add(nxt)
                    frontier.append(nxt)
        seen |= orbit
        rep_x = min(orbit)
        out.extend(_fiber_classes_for_x(ctx, classifications, rep_x, engine_cap))
    out.sort(key=lambda c: c.canonical_key)
    return out


def _transport_x(ctx, classifications, pair_index: int, x: tuple[int, ...]) -> tuple[int, ...]:
    pair = ctx.symmetries[pair_index]
    new = []
    for i in range(ctx.n):
        j = pair.src[i]
        src_key = ctx.kernels[j].key
        dst_key = ctx.kernels[i].key
        if src_key == dst_key:
            # the induced map is an automorphism of the quotient, hence fixes
            # every Aut x B3 class
            new.append(x[j])
            continue
        cls = classifications[src_key].classes[x[j]]
        moved_key = ctx.transport_key(pair_index, i, cls.key)
        new.append(classifications[dst_key].class_of_b3key[moved_key])
    return tuple(new)


def _fiber_classes_for_x(ctx, classifications, x, engine_cap) -> list[StructureClass]:
    stab = [
        pi
        for pi in range(len(ctx.symmetries))
        if _transport_x(ctx, classifications, pi, x) == x
    ]
    stab_pairs = [ctx.symmetries[pi] for pi in stab]
    stab_gens = symmetry_generators(stab_pairs, ctx.n, ctx.group.order)
    pair_map = ctx.pair_index_map()
    gen_indices = [pair_map[p.key()] for p in stab_gens]

    spaces = _spaces_for_x(ctx, classifications, x)
    total = 1
    for s in spaces:
        total *= s.count

    trivial_kernels = all(K.order == 1 for K in ctx.kernels)
    if trivial_kernels and total > SECTION_THRESHOLD:
        reps = _section_engine(ctx, spaces, gen_indices, x)
    else:
        if total > engine_cap:
            raise ResourceLimitError(
                f"fiber has {total} coset tuples, above the engine cap {engine_cap};"
                " rerun with the brute-force oracle or raise the cap"
            )
        reps = _full_engine(ctx, spaces, gen_indices, x)

    out = []
    for node in reps:
        entries = []
        b3keys = []
        free_acc = ~0
        for i, cid in enumerate(node):
            space = spaces[i]
            arr = space.auts[space.rep_aut[cid]]
            a, b, c = space.rep_triple
            t = (int(arr[a]), int(arr[b]), int(arr[c]))
            entries.append(t)
            key = ctx.kernels[i].key
            k = ctx.index_by_key[key].key(t)
            b3keys.append(k)
            free_acc &= ctx.key_data(key)[k][1]
        if free_acc != 1:
            continue
        canon = ctx.structure_key(b3keys)
        types_ = tuple(_type_of_key(ctx, ctx.kernels[i].key, k) for i, k in enumerate(b3keys))
        genera = tuple(
            genus_of_type(ctx.quotient_by_key[ctx.kernels[i].key].group.order, t)
            for i, t in enumerate(types_)
        )
        out.append(StructureClass(canon, tuple(entries), types_, genera))
    return out


def fiber_representatives(
    ctx: KernelContext, x: tuple[int, ...], engine_cap: int = FULL_ENGINE_CAP
) -> list[tuple[tuple[int, int, int], ...]]:
    """Representatives of the fiber over the class tuple x, before the
    coordinate-permutation quotient and the freeness filter.

    Two automorphism tuples describe the same fiber point exactly when they
    differ by a kernel-fixing automorphism applied diagonally and braid-type
    automorphisms per coordinate, so the orbit generators here are the
    symmetry pairs with the identity position map.
    """
    classifications = {key: ctx.quotient_classes(key) for key in ctx.quotient_by_key}
    for i, K in enumerate(ctx.kernels):
        if not 0 <= x[i] < len(classifications[K.key].classes):
            raise InputError(f"class index {x[i]} out of range at position {i}")
    identity_src = tuple(range(ctx.n))
    diag = [p for p in ctx.symmetries if p.src == identity_src]
    gen_indices = [
        ctx.pair_index_map()[p.key()]
        for p in symmetry_generators(diag, ctx.n, ctx.group.order)
    ]
    spaces = _spaces_for_x(ctx, classifications, x)
    total = 1
    for s in spaces:
        total *= s.count
    if total > engine_cap:
        raise ResourceLimitError(f"fiber has {total} coset tuples, above the cap {engine_cap}")
    reps = _full_engine(ctx, spaces, gen_indices, x)
    out = []
    for node in reps:
        entries = []
        for i, cid in enumerate(node):
            space = spaces[i]
            arr = space.auts[space.rep_aut[cid]]
            a, b, c = space.rep_triple
            entries.append((int(arr[a]), int(arr[b]), int(arr[c])))
        out.append(tuple(entries))
    return out


def _spaces_for_x(ctx, classifications, x) -> list[_CosetSpace]:
    spaces: list[_CosetSpace] = []
    space_cache: dict[tuple, _CosetSpace] = {}
    for i, K in enumerate(ctx.kernels):
        key = K.key
        cache_key = (key, x[i])
        if cache_key not in space_cache:
            auts = ctx.quotient_automorphisms(key)
            index = ctx.index_by_key[key]
            cls = classifications[key].classes[x[i]]
            rep = cls.representative.entries
            baut = _baut_indices(auts, index, rep)
            space_cache[cache_key] = _build_coset_space(auts, index, rep, baut)
        spaces.append(space_cache[cache_key])
    return spaces


def _baut_indices(auts: AutomorphismGroup, index: TripleIndex, rep: tuple[int, int, int]) -> list[int]:
    key = index.key(rep)
    a, b, c = rep
    return [
        i
        for i, arr in enumerate(auts.auts)
        if index.key((int(arr[a]), int(arr[b]), int(arr[c]))) == key
    ]


def _gen_tables(ctx, spaces, gen_indices) -> list[tuple[tuple[int, ...], list[list[int]]]]:
    """Per generator: (src positions, per-position coset maps)."""
    tables = []
    for pi in gen_indices:
        pair = ctx.symmetries[pi]
        per_pos = []
        for i in range(ctx.n):
            j = pair.src[i]
            src_space = spaces[j]
            dst_space = spaces[i]
            src_key = ctx.kernels[j].key
            dst_key = ctx.kernels[i].key
            iso = ctx.iso_array(pi, src_key)
            dst_index = ctx.index_by_key[dst_key]
            a, b, c = src_space.rep_triple
            table = []
            for cid in range(src_space.count):
                arr = src_space.auts[src_space.rep_aut[cid]]
                t = (int(iso[arr[a]]), int(iso[arr[b]]), int(iso[arr[c]]))
                k = dst_index.key(t)
                got = dst_space.key_to_coset.get(k)
                if got is None:
                    raise InternalInvariantError("fiber generator maps outside the class")
                table.append(got)
            per_pos.append(table)
        tables.append((pair.src, per_pos))
    return tables


def _full_engine(ctx, spaces, gen_indices, x) -> list[tuple[int, ...]]:
    """Orbit representatives on the full product of coset spaces."""
    tables = _gen_tables(ctx, spaces, gen_indices)
    counts = [s.count for s in spaces]
    n = len(counts)
    total = 1
    for c in counts:
        total *= c

    def encode(node: Sequence[int]) -> int:
        acc = 0
        for i in range(n):
            acc = acc * counts[i] + node[i]
        return acc

    def decode(code: int) -> list[int]:
        node = [0] * n
        for i in range(n - 1, -1, -1):
            code, node[i] = divmod(code, counts[i])
        return node

    visited = bytearray(total)
    reps = []
    for start in range(total):
        if visited[start]:
            continue
        reps.append(tuple(decode(start)))
        visited[start] = 1
        frontier = [start]
        while frontier:
            code = frontier.pop()
            node = decode(code)
            for src, per_pos in tables:
                nxt = encode([per_pos[i][node[src[i]]] for i in range(n)])
                if not visited[nxt]:
                    visited[nxt] = 1
                    frontier.append(nxt)
    return reps


def _section_engine(ctx, spaces, gen_indices, x) -> list[tuple[int, ...]]:
    """Orbit representatives with the diagonal automorphism action quotiented out.

    Only valid when every kernel is trivial: then each position's coset space
    carries the same Aut(G) acting diagonally on the left, that diagonal
    subgroup is normal in the acting group, and left multiplication is
    transitive on the first coordinate.  Nodes are tuples with the first
    coordinate pinned to the identity coset and the rest minimized over the
    identity coset's stabilizer BAut(S_1).
    """
    tables = _gen_tables(ctx, spaces, gen_indices)
    n = ctx.n
    auts = spaces[0].auts
    n_aut = len(auts)
    ident_idx = auts.index_of(np.arange(auts.group.order, dtype=np.int64))
    aut_inv = [auts.inverse(u) for u in range(n_aut)]
    lmuls = [_lmul_table(s) for s in spaces]
    cid0 = spaces[0].coset_of_aut[ident_idx]
    b1 = spaces[0].baut
    # compose(b, k) for b in BAut(S_1), all k
    rcomp = {b: [auts.compose(b, k) for k in range(n_aut)] for b in b1}

    counts = [s.count for s in spaces[1:]]

    def encode(rest: Sequence[int]) -> int:
        acc = 0
        for i, c in enumerate(counts):
            acc = acc * c + rest[i]
        return acc

    def decode(code: int) -> list[int]:
        rest = [0] * len(counts)
        for i in range(len(counts) - 1, -1, -1):
            code, rest[i] = divmod(code, counts[i])
        return rest

    def canonical(full: Sequence[int]) -> tuple[int, ...]:
        r = spaces[0].rep_aut[full[0]]
        ri = aut_inv[r]
        best = None
        for b in b1:
            u = rcomp[b][ri]
            if lmuls[0][u][full[0]] != cid0:
                raise InternalInvariantError("section renormalization missed the identity coset")
            cand = tuple(lmuls[i][u][full[i]] for i in range(1, n))
            if best is None or cand < best:
                best = cand
        return best  # type: ignore[return-value]

    total = 1
    for c in counts:
        total *= c
    visited: set[int] = set()
    reps: list[tuple[int, ...]] = []
    for raw in range(total):
        rest = decode(raw)
        node = canonical([cid0] + rest)
        code = encode(node)
        if code in visited:
            continue
        reps.append((cid0,) + node)
        visited.add(code)
        frontier = [node]
        while frontier:
            cur = frontier.pop()
            full = [cid0] + list(cur)
            for src, per_pos in tables:
                moved = [per_pos[i][full[src[i]]] for i in range(n)]
                nxt = canonical(moved)
                ncode = encode(nxt)
                if ncode not in visited:
                    visited.add(ncode)
                    frontier.append(nxt)
    return reps


# -- enumeration / existence --------------------------------------------------------


def candidate_kernel_tuples(
    G: FiniteGroup,
    n: int,
    kernel_policy: str = "all",
    normals: Optional[Sequence[Subgroup]] = None,
) -> list[tuple[Subgroup, ...]]:
    """Admissible ordered kernel tuples under the given policy, small kernels first."""
    if kernel_policy == "trivial":
        triv = trivial_subgroup(G)
        return [(triv,) * n]
    if kernel_policy != "all":
        raise InputError(f"unknown kernel policy {kernel_policy!r}")
    if normals is None:
        normals = normal_subgroups(G)
    tuples = admissible_kernel_tuples(G, normals, n)
    tuples.sort(key=lambda t: (sum(normals[i].order for i in t), t))
    return [tuple(normals[i] for i in t) for t in tuples]


def enumerate_structures(
    G: FiniteGroup,
    n: int,
    kernels: Optional[Sequence[Subgroup]] = None,
    kernel_policy: str = "all",
    chi: Optional[int] = None,
    types=None,
) -> Iterator[BeauvilleStructure]:
    """Brute-force stream of every valid structure, grouped by kernel tuple.

    This is the oracle path: no orbit identification, every structure once.
    """
    if n < 2:
        raise InputError("Beauville structures need n >= 2; n = 1 is a sentinel, not a size")
    tuples = [tuple(kernels)] if kernels is not None else candidate_kernel_tuples(G, n, kernel_policy)
    for kt in tuples:
        ctx = KernelContext(G, kt)
        # skip early if some quotient has no hyperbolic triples
        if any(not ctx.key_data(K.key) for K in kt):
            continue
        for key_tuple in valid_key_tuples(ctx, chi, types):
            yield from _expand_key_tuple(ctx, key_tuple)


def _expand_key_tuple(ctx: KernelContext, key_tuple: tuple[int, ...]) -> Iterator[BeauvilleStructure]:
    by_key: list[list[tuple[int, int, int]]] = []
    for i, K in enumerate(ctx.kernels):
        index = ctx.index_by_key[K.key]
        members = [t for t in ctx.hyperbolic_triples(K.key) if index.key(t) == key_tuple[i]]
        by_key.append(members)

    def rec(pos: int, acc: list[tuple[int, int, int]]) -> Iterator[BeauvilleStructure]:
        if pos == ctx.n:
            yield BeauvilleStructure(
                ctx.group,
                ctx.kernels,
                ctx.quotients,
                tuple(
                    GeneratingTriple(ctx.quotients[i].group, *acc[i]) for i in range(ctx.n)
                ),
            )
            return
        for t in by_key[pos]:
            acc.append(t)
            yield from rec(pos + 1, acc)
            acc.pop()

    yield from rec(0, [])


def structure_exists(
    G: FiniteGroup,
    n: int,
    kernel_policy: str = "all",
    chi: Optional[int] = None,
) -> bool:
    """Early-exit existence test for a valid structure."""
    if n < 2:
        raise InputError("Beauville structures need n >= 2")
    hyp_cache: dict[tuple[int, ...], bool] = {}
    normals = normal_subgroups(G) if kernel_policy == "all" else None
    for kt in candidate_kernel_tuples(G, n, kernel_policy, normals):
        ctx = KernelContext(G, kt)
        usable = True
        for K in kt:
            if K.key not in hyp_cache:
                hyp_cache[K.key] = bool(ctx.key_data(K.key))
            if not hyp_cache[K.key]:
                usable = False
                break
        if not usable:
            continue
        if valid_key_tuples(ctx, chi):
            return True
    return False


def beauville_dimension(G: FiniteGroup, n_max: int) -> Optional[int]:
    """Least n in [2, n_max] admitting a structure, or None if none found.

    None means "not ruled out beyond n_max": absence below the cutoff never
    certifies the sentinel value 1.
    """
    if n_max < 2:
        raise InputError("n_max must be at least 2")
    for n in range(2, n_max + 1):
        if structure_exists(G, n):
            return n
    return None
