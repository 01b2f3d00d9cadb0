"""Homomorphisms, automorphism groups, and symmetries of kernel tuples.

Automorphisms are stored as total image arrays over element indices.  The
enumeration strategy: pick a small generating sequence greedily, restrict
candidate generator images by order and conjugacy-class size (both
automorphism invariants), extend each candidate tuple to a total map along a
precomputed word table, and keep the maps that are bijective homomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as iter_permutations
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, InternalInvariantError, ResourceLimitError, ValidationError
from .groups import FiniteGroup, QuotientGroup, Subgroup, closure

_EXHAUSTIVE_HOM_ORDER = 300
_HOM_SAMPLES = 60_000
_HOM_SEED = 0xA0
DEFAULT_AUT_ORDER_BOUND = 2000


@dataclass(frozen=True)
class GroupHom:
    """Total map between groups; image_of[x] is the target index of x."""

    source: FiniteGroup
    target: FiniteGroup
    image_of: np.ndarray = field(repr=False)

    def __call__(self, x: int) -> int:
        return int(self.image_of[x])

    def is_bijective(self) -> bool:
        return len(np.unique(self.image_of)) == self.source.order == self.target.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target is not self.source:
            raise InputError("homomorphisms do not compose: target/source mismatch")
        return GroupHom(other.source, self.target, self.image_of[other.image_of])

    def inverse(self) -> "GroupHom":
        if not self.is_bijective():
            raise InputError("only bijective homomorphisms invert")
        inv = np.empty_like(self.image_of)
        inv[self.image_of] = np.arange(self.source.order)
        return GroupHom(self.target, self.source, inv)

    def validate(self) -> None:
        if int(self.image_of[0]) != 0:
            raise ValidationError("homomorphism does not fix the identity")
        if not _is_hom_image(self.source, self.target, self.image_of):
            raise ValidationError("map is not a homomorphism")


def _is_hom_image(G: FiniteGroup, H: FiniteGroup, img: np.ndarray) -> bool:
    if G.order <= _EXHAUSTIVE_HOM_ORDER:
        lhs = img[G.table.astype(np.int64)]
        rhs = H.table.astype(np.int64)[np.ix_(img, img)]
        return bool(np.array_equal(lhs, rhs))
    rng = np.random.default_rng(_HOM_SEED)
    xs = rng.integers(0, G.order, size=_HOM_SAMPLES)
    ys = rng.integers(0, G.order, size=_HOM_SAMPLES)
    lhs = img[G.table[xs, ys].astype(np.int64)]
    rhs = H.table[img[xs], img[ys]].astype(np.int64)
    return bool(np.array_equal(lhs, rhs))


def generating_sequence(G: FiniteGroup, start: Sequence[int] = ()) -> list[int]:
    """Small generating sequence, grown greedily by maximal closure gain."""
    gens = [int(g) for g in start]
    current = set(closure(G, gens)) if gens else {0}
    while len(current) < G.order:
        best_x, best_size, best_set = -1, -1, None
        for x in range(1, G.order):
            if x in current:
                continue
            got = closure(G, gens + [x])
            if len(got) > best_size:
                best_x, best_size, best_set = x, len(got), set(got)
                if best_size == G.order:
                    break
        gens.append(best_x)
        current = best_set  # type: ignore[assignment]
    return gens


def _word_table(
    G: FiniteGroup, gens: Sequence[int]
) -> tuple[list[tuple[int, int]], list[int]]:
    """Decomposition x = prev * gens[slot] for every element, in discovery order.

    Returns (entries, discovery): entries[k] = (prev, slot) for the element
    discovery[k], with the identity first as (-1, -1).  Image arrays of
    candidate generator images are filled by walking this table once.
    """
    words: list[Optional[tuple[int, int]]] = [None] * G.order
    words[0] = (-1, -1)
    discovery = [0]
    rows = G.rows
    head = 0
    while head < len(discovery):
        x = discovery[head]
        head += 1
        row = rows[x]
        for slot, g in enumerate(gens):
            y = row[g]
            if words[y] is None:
                words[y] = (x, slot)
                discovery.append(y)
    if len(discovery) != G.order:
        raise InternalInvariantError("word table: sequence does not generate the group")
    return [words[x] for x in discovery], discovery  # type: ignore[list-item]


def _fill_image(
    G: FiniteGroup,
    H: FiniteGroup,
    word_entries: list[tuple[int, int]],
    discovery: list[int],
    gen_images: Sequence[int],
) -> np.ndarray:
    img = np.full(G.order, -1, dtype=np.int64)
    h_rows = H.rows
    for pos, x in enumerate(discovery):
        prev, slot = word_entries[pos]
        img[x] = 0 if prev < 0 else h_rows[img[prev]][gen_images[slot]]
    return img


class AutomorphismGroup:
    """All automorphisms of a group, as image arrays closed under composition."""

    def __init__(self, group: FiniteGroup, auts: list[np.ndarray]):
        self.group = group
        self.auts = auts
        self.index = {a.tobytes(): i for i, a in enumerate(auts)}
        self._generators: Optional[list[int]] = None

    def __len__(self) -> int:
        return len(self.auts)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.auts[i]

    def index_of(self, img: np.ndarray) -> int:
        key = np.ascontiguousarray(img, dtype=np.int64).tobytes()
        got = self.index.get(key)
        if got is None:
            raise InputError("map is not an automorphism of this group")
        return got

    def compose(self, i: int, j: int) -> int:
        """Index of auts[i] after auts[j]."""
        return self.index_of(self.auts[i][self.auts[j]])

    def inverse(self, i: int) -> int:
        inv = np.empty(self.group.order, dtype=np.int64)
        inv[self.auts[i]] = np.arange(self.group.order)
        return self.index_of(inv)

    def hom(self, i: int) -> GroupHom:
        return GroupHom(self.group, self.group, self.auts[i])

    def generators(self) -> list[int]:
        """Indices of a small generating subset (greedy closure)."""
        if self._generators is None:
            self._generators = _greedy_generators(
                len(self.auts),
                compose=self.compose,
                identity=self.index_of(np.arange(self.group.order, dtype=np.int64)),
            )
        return self._generators

    def assert_closed(self) -> None:
        n = len(self.auts)
        ident = np.arange(self.group.order, dtype=np.int64)
        if ident.tobytes() not in self.index:
            raise InternalInvariantError("automorphism list lacks the identity")
        for i in range(n):
            self.inverse(i)
            for j in range(n):
                self.compose(i, j)


def _greedy_generators(count: int, compose, identity: int) -> list[int]:
    gens: list[int] = []
    reached = {identity}
    for cand in range(count):
        if cand in reached:
            continue
        gens.append(cand)
        frontier = [cand]
        reached.add(cand)
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (compose(g, x), compose(x, g)):
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
        if len(reached) == count:
            break
    return gens


def _candidate_images(G: FiniteGroup, g: int, restrict: Optional[set[int]] = None) -> list[int]:
    order = int(G.element_order[g])
    size = G.class_size(g)
    out = [
        x
        for x in range(G.order)
        if int(G.element_order[x]) == order and G.class_size(x) == size
    ]
    if restrict is not None:
        out = [x for x in out if x in restrict]
    return out


def _search_automorphisms(
    G: FiniteGroup,
    gens: Sequence[int],
    cand_lists: Sequence[Sequence[int]],
) -> list[np.ndarray]:
    word_entries, discovery = _word_table(G, gens)
    rows = G.rows
    orders = G.element_order
    found: list[np.ndarray] = []

    # quick pairwise filter: orders of products of generator images must match
    pair_orders = {
        (i, j): int(orders[rows[gens[i]][gens[j]]])
        for i in range(len(gens))
        for j in range(len(gens))
    }

    def ok_pairwise(images: list[int]) -> bool:
        k = len(images) - 1
        for i in range(len(images)):
            if int(orders[rows[images[i]][images[k]]]) != pair_orders[(i, k)]:
                return False
            if int(orders[rows[images[k]][images[i]]]) != pair_orders[(k, i)]:
                return False
        return True

    def rec(depth: int, images: list[int]) -> None:
        if depth == len(gens):
            img = _fill_image(G, G, word_entries, discovery, images)
            if len(np.unique(img)) == G.order and _is_hom_image(G, G, img):
                found.append(img)
            return
        for cand in cand_lists[depth]:
            images.append(cand)
            if ok_pairwise(images):
                rec(depth + 1, images)
            images.pop()

    rec(0, [])
    found.sort(key=lambda a: a.tobytes())
    return found


def all_automorphisms(G: FiniteGroup, order_bound: int = DEFAULT_AUT_ORDER_BOUND) -> AutomorphismGroup:
    """Every automorphism of G, exactly once, sorted by image array."""
    if G.order > order_bound:
        raise ResourceLimitError(
            f"automorphism enumeration for order {G.order} exceeds the bound {order_bound}"
        )
    if G.order == 1:
        return AutomorphismGroup(G, [np.zeros(1, dtype=np.int64)])
    gens = generating_sequence(G)
    cand_lists = [_candidate_images(G, g) for g in gens]
    return AutomorphismGroup(G, _search_automorphisms(G, gens, cand_lists))


def stabilizer_automorphisms(G: FiniteGroup, kernels: Sequence[Subgroup]) -> list[np.ndarray]:
    """All automorphisms of G permuting the given multiset of normal subgroups.

    Avoids enumerating the full automorphism group: the generating sequence is
    seeded with kernel elements so candidate images are pruned to kernel
    members of matching size early.
    """
    distinct: dict[tuple[int, ...], Subgroup] = {}
    for K in kernels:
        distinct.setdefault(K.key, K)
    nontrivial = [K for K in sorted(distinct.values(), key=lambda s: (s.order, s.members)) if K.order > 1]
    if G.order == 1:
        return [np.zeros(1, dtype=np.int64)]

    gens: list[int] = []
    restricts: list[Optional[set[int]]] = []
    current = {0}
    for K in nontrivial:
        same_size_union = {
            x for K2 in distinct.values() if K2.order == K.order for x in K2.members if x != 0
        }
        for x in K.members:
            if x not in current:
                gens.append(x)
                restricts.append(same_size_union)
                current = set(closure(G, gens))
    if len(current) < G.order:
        for x in generating_sequence(G, start=gens)[len(gens) :]:
            gens.append(x)
            restricts.append(None)
    cand_lists = [_candidate_images(G, g, restrict) for g, restrict in zip(gens, restricts)]
    auts = _search_automorphisms(G, gens, cand_lists)

    keys = set(distinct.keys())
    member_arrays = {key: np.asarray(key, dtype=np.int64) for key in keys}
    counts: dict[tuple[int, ...], int] = {}
    for K in kernels:
        counts[K.key] = counts.get(K.key, 0) + 1
    out = []
    for img in auts:
        image_map = {}
        good = True
        for key, arr in member_arrays.items():
            target = tuple(int(v) for v in np.sort(img[arr]))
            if target not in keys or counts[target] != counts[key]:
                good = False
                break
            image_map[key] = target
        if good and sorted(image_map.values()) == sorted(image_map.keys()):
            out.append(img)
    return out


# -- induced maps on quotients -------------------------------------------------


def induced_quotient_iso(alpha: np.ndarray, src: QuotientGroup, dst: QuotientGroup) -> GroupHom:
    """The isomorphism G/K -> G/alpha(K) induced by an automorphism alpha of G.

    src must be the quotient by K and dst the quotient by alpha(K); the result
    satisfies induced(proj_K(x)) = proj_{alpha(K)}(alpha(x)) for all x.
    """
    img = dst.projection[alpha[src.reps]]
    hom = GroupHom(src.group, dst.group, np.asarray(img, dtype=np.int64))
    if not hom.is_bijective():
        raise InternalInvariantError("induced quotient map is not bijective; kernel image mismatch?")
    return hom


# -- kernel tuples and their symmetries -----------------------------------------


@dataclass(frozen=True)
class KernelSymmetry:
    """One (automorphism, position permutation) pair acting on kernel tuples.

    Acting on an n-tuple: result[i] = alpha(old[src[i]]).  Valid means
    alpha(K_{src[i]}) = K_i for every position i, so the ordered kernel tuple
    is preserved.
    """

    aut: np.ndarray
    src: tuple[int, ...]

    def compose(self, other: "KernelSymmetry") -> "KernelSymmetry":
        """self after other."""
        return KernelSymmetry(self.aut[other.aut], tuple(other.src[s] for s in self.src))

    def key(self) -> tuple[bytes, tuple[int, ...]]:
        return (np.ascontiguousarray(self.aut, dtype=np.int64).tobytes(), self.src)


def kernel_symmetries(G: FiniteGroup, kernels: Sequence[Subgroup]) -> list[KernelSymmetry]:
    """All (alpha, tau) pairs preserving the ordered kernel tuple.

    This is the stabilizer of the kernel multiset combined with the induced
    position permutations: automorphisms may swap distinct kernels that are
    conjugate under Aut(G), with tau compensating so the ordered tuple is
    fixed.
    """
    auts = stabilizer_automorphisms(G, kernels)
    keys = [K.key for K in kernels]
    arrays = {key: np.asarray(key, dtype=np.int64) for key in set(keys)}
    positions_of: dict[tuple[int, ...], list[int]] = {}
    for i, key in enumerate(keys):
        positions_of.setdefault(key, []).append(i)

    out: list[KernelSymmetry] = []
    for img in auts:
        target_of = {key: tuple(int(v) for v in np.sort(img[arr])) for key, arr in arrays.items()}
        # positions holding kernel N must be sourced from positions holding
        # the preimage of N; enumerate all per-block bijections
        blocks: list[tuple[list[int], list[int]]] = []
        for key, dests in positions_of.items():
            srcs = positions_of[[k for k, t in target_of.items() if t == key][0]]
            blocks.append((dests, srcs))
        _expand_block_bijections(img, blocks, 0, [None] * len(keys), out)
    out.sort(key=lambda s: s.key())
    return out


def _expand_block_bijections(img, blocks, depth, src_acc, out) -> None:
    if depth == len(blocks):
        out.append(KernelSymmetry(img, tuple(src_acc)))
        return
    dests, srcs = blocks[depth]
    for perm in iter_permutations(srcs):
        for d, s in zip(dests, perm):
            src_acc[d] = s
        _expand_block_bijections(img, blocks, depth + 1, src_acc, out)


def symmetry_generators(pairs: list[KernelSymmetry], n_positions: int, order: int) -> list[KernelSymmetry]:
    """Greedy generating subset of an explicit KernelSymmetry list."""
    ident_key = (np.arange(order, dtype=np.int64).tobytes(), tuple(range(n_positions)))
    by_key = {p.key(): i for i, p in enumerate(pairs)}
    if ident_key not in by_key:
        raise InternalInvariantError("symmetry list lacks the identity pair")

    def compose_idx(i: int, j: int) -> int:
        return by_key[pairs[i].compose(pairs[j]).key()]

    gen_idx = _greedy_generators(len(pairs), compose=compose_idx, identity=by_key[ident_key])
    return [pairs[i] for i in gen_idx]


@dataclass(frozen=True)
class KernelTupleOrbit:
    """One orbit of admissible kernel tuples under Aut(G) x S_n."""

    representative: tuple[Subgroup, ...]
    orbit_size: int
    block_sizes: tuple[int, ...]
    stabilizer_size: int


def admissible_kernel_tuples(G: FiniteGroup, normals: Sequence[Subgroup], n: int) -> list[tuple[int, ...]]:
    """Index tuples over `normals` whose omit-one intersections are all trivial."""
    if n < 2:
        raise InputError("kernel tuples need n >= 2")
    masks = [N.mask for N in normals]
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]) -> None:
        if len(prefix) == n:
            for omit in range(n):
                acc = ~0
                for j, idx in enumerate(prefix):
                    if j != omit:
                        acc &= masks[idx]
                if acc != 1:
                    return
            out.append(tuple(prefix))
            return
        for idx in range(len(normals)):
            prefix.append(idx)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def kernel_tuple_orbits(
    G: FiniteGroup,
    n: int,
    auts: Optional[AutomorphismGroup] = None,
    normals: Optional[Sequence[Subgroup]] = None,
) -> list[KernelTupleOrbit]:
    """Orbit representatives of admissible kernel tuples, equal kernels adjacent."""
    from .groups import normal_subgroups  # local to avoid cycle at import time

    if normals is None:
        normals = normal_subgroups(G)
    if auts is None:
        auts = all_automorphisms(G)
    tuples = set(admissible_kernel_tuples(G, normals, n))
    index_of_key = {N.key: i for i, N in enumerate(normals)}
    aut_maps = []
    for gi in auts.generators():
        img = auts[gi]
        aut_maps.append(
            tuple(index_of_key[tuple(int(v) for v in np.sort(img[np.asarray(N.key)]))] for N in normals)
        )

    orbits: list[KernelTupleOrbit] = []
    seen: set[tuple[int, ...]] = set()
    for start in sorted(tuples):
        if start in seen:
            continue
        frontier = [start]
        members = {start}
        while frontier:
            node = frontier.pop()
            images = [tuple(m[i] for i in node) for m in aut_maps]
            images += [node[:k] + (node[k + 1], node[k]) + node[k + 2 :] for k in range(n - 1)]
            for nxt in images:
                if nxt not in members:
                    members.add(nxt)
                    frontier.append(nxt)
        seen |= members
        rep_idx = min(t for t in members if tuple(sorted(t)) == t)
        rep = tuple(normals[i] for i in rep_idx)
        block_sizes = []
        for i, K in enumerate(rep):
            if i and K.key == rep[i - 1].key:
                block_sizes[-1] += 1
            else:
                block_sizes.append(1)
        stab = kernel_symmetries(G, rep)
        orbits.append(KernelTupleOrbit(rep, len(members), tuple(block_sizes), len(stab)))
    orbits.sort(key=lambda o: tuple(K.key for K in o.representative))
    return orbits
