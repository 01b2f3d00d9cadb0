"""Enumerated finite groups with exact table-based arithmetic.

Elements of a group of order n are the integers 0..n-1, with 0 the identity.
All structure (multiplication, inverses, element orders) is materialized at
construction time, so every later algorithm is branch-free table lookup.
Groups, subgroups and quotients are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InputError, InternalInvariantError, ValidationError

# Full associativity is checked exhaustively up to this order, by random
# sampling above it.
_EXHAUSTIVE_ASSOC_ORDER = 64
_ASSOC_SAMPLES = 100_000
_ASSOC_SEED = 0x5E0


class FiniteGroup:
    """A finite group given by its Cayley table, elements indexed 0..order-1."""

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        label: str = "G",
        element_names: Optional[Sequence[str]] = None,
        abelian_factors: Optional[tuple[int, ...]] = None,
        perm_rep: Optional[list[tuple[int, ...]]] = None,
        generators: Optional[tuple[int, ...]] = None,
        validate: bool = True,
    ):
        table = np.asarray(table, dtype=np.uint16)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValidationError(f"Cayley table must be square, got shape {table.shape}")
        self.table = table
        self.order = int(table.shape[0])
        self.label = label
        self.abelian_factors = abelian_factors
        self.perm_rep = perm_rep
        self.generators = generators
        if element_names is not None and len(element_names) != self.order:
            raise ValidationError("element_names length does not match the order")
        self.element_names = list(element_names) if element_names is not None else None
        self._rows: Optional[list[list[int]]] = None
        self._conj_classes: Optional[list[tuple[int, ...]]] = None
        self._class_of: Optional[np.ndarray] = None
        self._is_abelian: Optional[bool] = None

        self.inverse = self._compute_inverses()
        self.element_order = self._compute_element_orders()
        if validate:
            self._validate()

    # -- basic arithmetic ---------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def power(self, x: int, k: int) -> int:
        k %= int(self.element_order[x])
        acc = 0
        for _ in range(k):
            acc = int(self.table[acc, x])
        return acc

    @property
    def rows(self) -> list[list[int]]:
        """Cayley table as plain int lists, for index-heavy inner loops."""
        if self._rows is None:
            self._rows = self.table.astype(np.int64).tolist()
        return self._rows

    @property
    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            self._is_abelian = bool(np.array_equal(self.table, self.table.T))
        return self._is_abelian

    def element_name(self, x: int) -> str:
        if self.element_names is not None:
            return self.element_names[x]
        if self.abelian_factors is not None:
            return _abelian_name(x, self.abelian_factors)
        if self.perm_rep is not None:
            return format_cycles(self.perm_rep[x])
        return f"g{x}"

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    # -- conjugacy ----------------------------------------------------------

    @property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        if self._conj_classes is None:
            self._compute_conjugacy()
        return self._conj_classes  # type: ignore[return-value]

    @property
    def class_of(self) -> np.ndarray:
        """Index of each element's conjugacy class."""
        if self._class_of is None:
            self._compute_conjugacy()
        return self._class_of  # type: ignore[return-value]

    def _compute_conjugacy(self) -> None:
        n = self.order
        class_of = np.full(n, -1, dtype=np.int64)
        classes: list[tuple[int, ...]] = []
        table = self.table
        inverse = self.inverse
        for x in range(n):
            if class_of[x] >= 0:
                continue
            # orbit of x under conjugation by all g
            orbit = np.unique(table[table[:, x], inverse[np.arange(n)]])
            cid = len(classes)
            classes.append(tuple(int(v) for v in orbit))
            class_of[orbit] = cid
        self._conj_classes = classes
        self._class_of = class_of

    def class_size(self, x: int) -> int:
        return len(self.conjugacy_classes[int(self.class_of[x])])

    # -- construction-time checks -------------------------------------------

    def _compute_inverses(self) -> np.ndarray:
        hits = np.argwhere(self.table == 0)
        inverse = np.full(self.order, -1, dtype=np.int64)
        inverse[hits[:, 0]] = hits[:, 1]
        if np.any(inverse < 0):
            raise ValidationError(f"{self.label}: some element has no inverse")
        return inverse

    def _compute_element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        current = np.arange(n)
        orders[current == 0] = 1
        k = 1
        while np.any(orders == 0):
            k += 1
            if k > n:
                raise ValidationError(f"{self.label}: element order exceeds group order")
            current = self.table[current, np.arange(n)]
            orders[(orders == 0) & (current == 0)] = k
        return orders

    def _validate(self) -> None:
        n = self.order
        table = self.table
        idx = np.arange(n)
        if not np.array_equal(table[0], idx) or not np.array_equal(table[:, 0], idx):
            raise ValidationError(f"{self.label}: element 0 is not an identity")
        if np.any(table[idx, self.inverse[idx]] != 0):
            raise ValidationError(f"{self.label}: inverse table is wrong")
        # rows and columns must be permutations (Latin square)
        if np.any(np.sort(table, axis=1) != idx) or np.any(np.sort(table, axis=0) != idx[:, None]):
            raise ValidationError(f"{self.label}: table is not a Latin square")
        if n <= _EXHAUSTIVE_ASSOC_ORDER:
            lhs = table[table, :]  # lhs[x,y,z] = T[T[x,y], z]
            rhs = table[:, table]  # rhs[x,y,z] = T[x, T[y,z]]
            if not np.array_equal(lhs, rhs):
                raise ValidationError(f"{self.label}: associativity fails")
        else:
            rng = np.random.default_rng(_ASSOC_SEED)
            xs = rng.integers(0, n, size=_ASSOC_SAMPLES)
            ys = rng.integers(0, n, size=_ASSOC_SAMPLES)
            zs = rng.integers(0, n, size=_ASSOC_SAMPLES)
            if not np.array_equal(table[table[xs, ys], zs], table[xs, table[ys, zs]]):
                raise ValidationError(f"{self.label}: associativity fails on a sampled triple")
        if np.any(self.order % self.element_order != 0):
            raise ValidationError(f"{self.label}: an element order does not divide |G|")


def _abelian_name(x: int, factors: tuple[int, ...]) -> str:
    coeffs = exponent_vector(x, factors)
    terms = [f"{c if c != 1 else ''}e{i + 1}" for i, c in enumerate(coeffs) if c]
    return "+".join(terms) if terms else "0"


def exponent_vector(x: int, factors: tuple[int, ...]) -> tuple[int, ...]:
    """Mixed-radix digits of x, most significant factor first."""
    coeffs = []
    for n_i in reversed(factors):
        x, c = divmod(x, n_i)
        coeffs.append(c)
    return tuple(reversed(coeffs))


def pack_exponents(coeffs: Sequence[int], factors: tuple[int, ...]) -> int:
    """Inverse of exponent_vector (coefficients are reduced mod each factor)."""
    if len(coeffs) != len(factors):
        raise InputError(f"expected {len(factors)} exponents, got {len(coeffs)}")
    x = 0
    for c, n_i in zip(coeffs, factors):
        x = x * n_i + (c % n_i)
    return x


def format_cycles(perm: tuple[int, ...]) -> str:
    """Disjoint-cycle string of a 0-based permutation tuple, on points 1..d."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        out.append("(" + ",".join(str(p + 1) for p in cyc) + ")")
    return "".join(out) if out else "()"


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """Subset of a parent group, closed under multiplication and inverse."""

    parent: FiniteGroup
    members: tuple[int, ...]  # sorted, contains 0
    mask: int = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def key(self) -> tuple[int, ...]:
        return self.members

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def small_generating_set(self) -> tuple[int, ...]:
        """Greedy generating set, used when serializing subgroups."""
        if self.order == 1:
            return ()
        gens: list[int] = []
        current = {0}
        while len(current) < self.order:
            for x in self.members:
                if x not in current:
                    gens.append(x)
                    current = set(closure(self.parent, gens))
                    break
        return tuple(gens)


def _make_subgroup(parent: FiniteGroup, members: Iterable[int]) -> Subgroup:
    members = tuple(sorted(set(members)))
    mask = 0
    for x in members:
        mask |= 1 << x
    return Subgroup(parent, members, mask)


def closure(G: FiniteGroup, seed: Iterable[int], stop_at: Optional[int] = None) -> tuple[int, ...]:
    """Smallest subset containing seed and 0, closed under multiplication.

    Closure under multiplication of a nonempty subset of a finite group is
    automatically closed under inverse.  If stop_at is given, the search
    aborts early (returning a partial set) once that many elements are found;
    callers use it for the common "does this pair generate G" test.
    """
    rows = G.rows
    known = {0}
    elems = [0]
    queue = []
    for s in seed:
        s = int(s)
        if s < 0 or s >= G.order:
            raise InputError(f"element index {s} out of range for group of order {G.order}")
        if s not in known:
            known.add(s)
            elems.append(s)
            queue.append(s)
    target = G.order if stop_at is None else stop_at
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        row_x = rows[x]
        for y in list(elems):
            for z in (row_x[y], rows[y][x]):
                if z not in known:
                    known.add(z)
                    elems.append(z)
                    queue.append(z)
                    if len(known) >= target:
                        return tuple(sorted(known))
    return tuple(sorted(known))


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup of G generated by the given element indices."""
    return _make_subgroup(G, closure(G, gens))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return _make_subgroup(G, (0,))


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return _make_subgroup(G, range(G.order))


def is_subgroup(G: FiniteGroup, members: Iterable[int]) -> bool:
    got = set(members)
    if 0 not in got:
        return False
    return set(closure(G, got)) == got


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    """True iff g h g^-1 lies in H for every g in G, h in H."""
    if H.parent is not G:
        raise InputError("subgroup does not belong to this group")
    mask = H.mask
    table = G.rows
    inverse = G.inverse
    for g in range(G.order):
        row = table[g]
        ginv = int(inverse[g])
        for h in H.members:
            if not (mask >> table[row[h]][ginv]) & 1:
                return False
    return True


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of G containing the seed elements."""
    if G.is_abelian:
        return subgroup_generated(G, seed)
    rows = G.rows
    inverse = G.inverse
    known = {0}
    elems = [0]
    queue = []

    def add(x: int) -> None:
        if x not in known:
            known.add(x)
            elems.append(x)
            queue.append(x)

    for s in seed:
        add(int(s))
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in range(G.order):
            add(rows[rows[g][x]][int(inverse[g])])
        row_x = rows[x]
        for y in list(elems):
            add(row_x[y])
            add(rows[y][x])
    return _make_subgroup(G, known)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    """Commutator subgroup [G, G]."""
    rows = G.rows
    inverse = G.inverse
    comms = set()
    for x in range(G.order):
        for y in range(G.order):
            comms.add(rows[rows[rows[x][y]][int(inverse[x])]][int(inverse[y])])
    return _make_subgroup(G, closure(G, comms))


def center_size(G: FiniteGroup) -> int:
    table = G.table
    return int(np.sum(np.all(table == table.T, axis=1)))


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian group, largest first.

    Peels off a maximal-order cyclic subgroup (always a direct summand in a
    finite abelian group) and recurses on the quotient.
    """
    if not G.is_abelian:
        raise InputError("abelian_invariants needs an abelian group")
    if G.order == 1:
        return ()
    x = int(np.argmax(G.element_order))
    d = int(G.element_order[x])
    rest = quotient(G, subgroup_generated(G, [x]), validate=False)
    return (d,) + abelian_invariants(rest.group)


def abelianization_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors of G/[G,G]."""
    return abelian_invariants(quotient(G, derived_subgroup(G), validate=False).group)


def element_order_histogram(G: FiniteGroup) -> tuple[tuple[int, int], ...]:
    vals, counts = np.unique(G.element_order, return_counts=True)
    return tuple((int(v), int(c)) for v, c in zip(vals, counts))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every normal subgroup of G, including the trivial one and G itself.

    Works upward from the trivial subgroup, repeatedly extending each known
    normal subgroup by the normal closure of one more element.  Every normal
    subgroup is reached this way because its elements can be added one at a
    time.  Correctness over speed; fine for the catalog-scale orders.
    """
    triv = trivial_subgroup(G)
    found: dict[tuple[int, ...], Subgroup] = {triv.key: triv}
    frontier = [triv]
    while frontier:
        H = frontier.pop()
        hset = set(H.members)
        seen_extensions: set[tuple[int, ...]] = set()
        for x in range(1, G.order):
            if x in hset:
                continue
            # x and x' give the same extension when x' is in the coset xH;
            # only try the minimum of each coset
            coset_min = min(G.rows[x][h] for h in H.members)
            if coset_min != x or coset_min in seen_extensions:
                continue
            seen_extensions.add(coset_min)
            N = normal_closure(G, H.members + (x,))
            if N.key not in found:
                found[N.key] = N
                frontier.append(N)
    return sorted(found.values(), key=lambda s: (s.order, s.members))


# -- quotients ---------------------------------------------------------------


@dataclass(frozen=True)
class QuotientGroup:
    """Quotient G/K with a total projection map and coset representatives."""

    parent: FiniteGroup
    kernel: Subgroup
    group: FiniteGroup
    projection: np.ndarray = field(repr=False)  # parent index -> quotient index
    reps: np.ndarray = field(repr=False)  # quotient index -> parent coset rep

    @property
    def order(self) -> int:
        return self.group.order

    def project(self, x: int) -> int:
        return int(self.projection[x])

    def fiber_mask(self, q: int) -> int:
        """Bitset over parent elements of the coset projecting to q."""
        mask = 0
        for x in np.nonzero(self.projection == q)[0]:
            mask |= 1 << int(x)
        return mask

    def lift_mask(self, qmask: int) -> int:
        """Preimage bitset of a quotient-element bitset."""
        mask = 0
        proj = self.projection
        for x in range(self.parent.order):
            if (qmask >> int(proj[x])) & 1:
                mask |= 1 << x
        return mask


def quotient(G: FiniteGroup, K: Subgroup, validate: bool = True) -> QuotientGroup:
    """Quotient group G/K for a normal subgroup K; identity coset is index 0."""
    if K.parent is not G:
        raise InputError("kernel does not belong to this group")
    if not is_normal(G, K):
        raise ValidationError("cannot form a quotient by a non-normal subgroup")
    k_arr = np.asarray(K.members, dtype=np.int64)
    coset_rep = np.min(G.table[:, k_arr].astype(np.int64), axis=1)
    reps = np.unique(coset_rep)
    index_of_rep = {int(r): i for i, r in enumerate(reps)}
    projection = np.array([index_of_rep[int(r)] for r in coset_rep], dtype=np.int64)
    m = len(reps)
    qtable = projection[G.table[np.ix_(reps, reps)].astype(np.int64)]
    names = [f"[{G.element_name(int(r))}]" for r in reps]
    Q = FiniteGroup(
        qtable,
        label=f"{G.label}/K{K.order}",
        element_names=names,
        validate=False,
    )
    out = QuotientGroup(G, K, Q, projection, reps)
    if validate:
        _validate_quotient(out)
    return out


def _validate_quotient(q: QuotientGroup) -> None:
    G, Q, proj = q.parent, q.group, q.projection
    if G.order != q.kernel.order * Q.order:
        raise InternalInvariantError("quotient order mismatch")
    lhs = proj[G.table.astype(np.int64)]
    rhs = Q.table.astype(np.int64)[np.ix_(proj, proj)]
    if not np.array_equal(lhs, rhs):
        raise InternalInvariantError("quotient projection is not a homomorphism")
    fiber0 = tuple(int(x) for x in np.nonzero(proj == 0)[0])
    if fiber0 != q.kernel.members:
        raise InternalInvariantError("projection fiber over identity differs from kernel")
    Q._validate()
