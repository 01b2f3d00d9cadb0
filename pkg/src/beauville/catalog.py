"""Constructors for the groups the engine works with.

Two entry points: a small spec language (``parse_group_spec`` + ``build``)
covering cyclic powers, direct/semidirect products, symmetric, alternating,
dihedral, dicyclic, Heisenberg and (P)SL(2,q) groups plus permutation
literals, and a line-based ``groupfile v1`` interchange format for groups
exported from external databases as permutation generators.

All constructors are deterministic: building the same spec twice yields
byte-identical Cayley tables, so element indices are stable across runs.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    GroupFileError,
    InputError,
    InternalInvariantError,
    ResourceLimitError,
    SpecSyntaxError,
    ValidationError,
)
from .groups import FiniteGroup, exponent_vector, format_cycles, pack_exponents

DEFAULT_MAX_ORDER = 2000
_MAX_ORDER_ENV = "BEAUVILLE_MAX_ORDER"


def max_order_bound() -> int:
    raw = os.environ.get(_MAX_ORDER_ENV)
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        bound = int(raw)
    except ValueError as exc:
        raise InputError(f"{_MAX_ORDER_ENV} must be an integer, got {raw!r}") from exc
    if bound <= 0:
        raise InputError(f"{_MAX_ORDER_ENV} must be positive")
    return bound


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """Parsed constructor tree; ``text`` regenerates an equivalent source form."""

    kind: str
    args: tuple = ()

    @property
    def text(self) -> str:
        return _unparse(self)


def _unparse(spec: GroupSpec) -> str:
    k = spec.kind
    if k == "cyclic":
        return f"C{spec.args[0]}"
    if k == "symmetric":
        return f"S{spec.args[0]}"
    if k == "alternating":
        return f"A{spec.args[0]}"
    if k == "dihedral":
        return f"D{spec.args[0]}"
    if k == "dicyclic":
        return f"Q{spec.args[0]}"
    if k == "heisenberg":
        return f"He({spec.args[0]})"
    if k == "psl":
        return f"PSL(2,{spec.args[0]})"
    if k == "sl":
        return f"SL(2,{spec.args[0]})"
    if k == "product":
        return " x ".join(_unparse(a) for a in spec.args)
    if k == "power":
        base, exp = spec.args
        return f"{_unparse(base)}^{exp}"
    if k == "perm":
        gens = ", ".join("".join(f"({','.join(str(p) for p in cyc)})" for cyc in gen) for gen in spec.args[0])
        return f"Perm[{gens}]"
    if k == "semidirect":
        a, b, action = spec.args
        rows = ", ".join(
            "[" + ", ".join("[" + ",".join(str(v) for v in vec) + "]" for vec in row) + "]" for row in action
        )
        return f"Semidirect({_unparse(a)}, {_unparse(b)}, [{rows}])"
    if k == "file":
        return f'File("{spec.args[0]}")'
    raise InternalInvariantError(f"unknown spec kind {k}")


# -- parser -------------------------------------------------------------------


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z]+)|(?P<int>\d+)|(?P<string>\"[^\"]*\")|(?P<sym>[\^x×(),\[\]]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", pos)
        for kind in ("name", "int", "string", "sym"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val, m.start(kind)))
                break
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise SpecSyntaxError(f"expected {want!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> GroupSpec:
        spec = self.parse_product()
        tok = self.peek()
        if tok[0] != "end":
            raise SpecSyntaxError(f"trailing input starting with {tok[1]!r}", tok[2])
        return spec

    def parse_product(self) -> GroupSpec:
        factors = [self.parse_power()]
        while True:
            tok = self.peek()
            if tok[0] == "sym" and tok[1] in ("x", "×"):
                self.next()
                factors.append(self.parse_power())
            elif tok[0] == "name" and tok[1] == "x":
                self.next()
                factors.append(self.parse_power())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return GroupSpec("product", tuple(factors))

    def parse_power(self) -> GroupSpec:
        base = self.parse_atom()
        tok = self.peek()
        if tok[0] == "sym" and tok[1] == "^":
            self.next()
            exp_tok = self.expect("int")
            exp = int(exp_tok[1])
            if exp < 1:
                raise SpecSyntaxError("power exponent must be >= 1", exp_tok[2])
            return GroupSpec("power", (base, exp))
        return base

    def parse_atom(self) -> GroupSpec:
        tok = self.next()
        kind, val, pos = tok
        if kind == "sym" and val == "(":
            inner = self.parse_product()
            self.expect("sym", ")")
            return inner
        if kind != "name":
            raise SpecSyntaxError(f"expected a group constructor, found {val!r}", pos)
        name = val
        if name in ("C", "S", "A", "D", "Q"):
            n = int(self.expect("int")[1])
            lookup = {"C": "cyclic", "S": "symmetric", "A": "alternating", "D": "dihedral", "Q": "dicyclic"}
            return GroupSpec(lookup[name], (n,))
        if name == "He":
            self.expect("sym", "(")
            p = int(self.expect("int")[1])
            self.expect("sym", ")")
            return GroupSpec("heisenberg", (p,))
        if name in ("PSL", "SL"):
            self.expect("sym", "(")
            two = self.expect("int")
            if int(two[1]) != 2:
                raise SpecSyntaxError(f"only degree 2 is supported for {name}", two[2])
            self.expect("sym", ",")
            q = int(self.expect("int")[1])
            self.expect("sym", ")")
            return GroupSpec("psl" if name == "PSL" else "sl", (q,))
        if name == "Perm":
            return self.parse_perm_literal(pos)
        if name == "Semidirect":
            return self.parse_semidirect()
        if name == "File":
            self.expect("sym", "(")
            path = self.expect("string")[1][1:-1]
            self.expect("sym", ")")
            return GroupSpec("file", (path,))
        raise SpecSyntaxError(f"unsupported constructor {name!r}", pos)

    def parse_perm_literal(self, start: int) -> GroupSpec:
        self.expect("sym", "[")
        gens: list[tuple[tuple[int, ...], ...]] = []
        while True:
            gens.append(self.parse_cycles())
            tok = self.next()
            if tok[0] == "sym" and tok[1] == ",":
                continue
            if tok[0] == "sym" and tok[1] == "]":
                break
            raise SpecSyntaxError(f"expected ',' or ']' in Perm literal, found {tok[1]!r}", tok[2])
        if not gens:
            raise SpecSyntaxError("empty Perm literal", start)
        return GroupSpec("perm", (tuple(gens),))

    def parse_cycles(self) -> tuple[tuple[int, ...], ...]:
        cycles = []
        while True:
            tok = self.peek()
            if not (tok[0] == "sym" and tok[1] == "("):
                break
            self.next()
            points = [int(self.expect("int")[1])]
            while True:
                tok = self.next()
                if tok[0] == "sym" and tok[1] == ",":
                    points.append(int(self.expect("int")[1]))
                elif tok[0] == "sym" and tok[1] == ")":
                    break
                else:
                    raise SpecSyntaxError(f"expected ',' or ')' in cycle, found {tok[1]!r}", tok[2])
            if len(set(points)) != len(points):
                raise SpecSyntaxError("cycle repeats a point", tok[2])
            cycles.append(tuple(points))
        if not cycles:
            tok = self.peek()
            raise SpecSyntaxError("expected a cycle '(...'", tok[2])
        return tuple(cycles)

    def parse_semidirect(self) -> GroupSpec:
        self.expect("sym", "(")
        a = self.parse_product()
        self.expect("sym", ",")
        b = self.parse_product()
        self.expect("sym", ",")
        action = self.parse_action_matrix()
        self.expect("sym", ")")
        return GroupSpec("semidirect", (a, b, action))

    def parse_action_matrix(self) -> tuple:
        self.expect("sym", "[")
        rows = []
        while True:
            rows.append(self.parse_action_row())
            tok = self.next()
            if tok[0] == "sym" and tok[1] == ",":
                continue
            if tok[0] == "sym" and tok[1] == "]":
                break
            raise SpecSyntaxError(f"expected ',' or ']' in action, found {tok[1]!r}", tok[2])
        return tuple(rows)

    def parse_action_row(self) -> tuple:
        self.expect("sym", "[")
        vecs = []
        while True:
            vecs.append(self.parse_int_vector())
            tok = self.next()
            if tok[0] == "sym" and tok[1] == ",":
                continue
            if tok[0] == "sym" and tok[1] == "]":
                break
            raise SpecSyntaxError(f"expected ',' or ']' in action row, found {tok[1]!r}", tok[2])
        return tuple(vecs)

    def parse_int_vector(self) -> tuple[int, ...]:
        self.expect("sym", "[")
        vals = [int(self.expect("int")[1])]
        while True:
            tok = self.next()
            if tok[0] == "sym" and tok[1] == ",":
                vals.append(int(self.expect("int")[1]))
            elif tok[0] == "sym" and tok[1] == "]":
                break
            else:
                raise SpecSyntaxError(f"expected ',' or ']' in vector, found {tok[1]!r}", tok[2])
        return tuple(vals)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the group mini-language; raises SpecSyntaxError with a position."""
    return _Parser(text).parse()


# -- builders -----------------------------------------------------------------


def build(spec: GroupSpec | str, max_order: Optional[int] = None, base_dir: Optional[Path] = None) -> FiniteGroup:
    """Materialize a parsed spec as a FiniteGroup.

    max_order defaults to BEAUVILLE_MAX_ORDER or 2000; exceeding it raises
    ResourceLimitError before any quadratic-size table is allocated.
    """
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    bound = max_order if max_order is not None else max_order_bound()
    G = _build(spec, bound, base_dir or Path.cwd())
    return G


def _check_order(order: int, bound: int, label: str) -> None:
    if order > bound:
        raise ResourceLimitError(f"{label} has order {order}, above the configured bound {bound}")


def _build(spec: GroupSpec, bound: int, base_dir: Path) -> FiniteGroup:
    k = spec.kind
    if k == "cyclic":
        return abelian_group((spec.args[0],), bound)
    if k == "power":
        base, exp = spec.args
        if base.kind == "cyclic":
            return abelian_group((base.args[0],) * exp, bound)
        flat = GroupSpec("product", (base,) * exp)
        return _build(flat, bound, base_dir)
    if k == "product":
        factors = [_build(a, bound, base_dir) for a in spec.args]
        if all(f.abelian_factors is not None for f in factors):
            orders: list[int] = []
            for f in factors:
                orders.extend(f.abelian_factors)  # type: ignore[arg-type]
            return abelian_group(tuple(orders), bound)
        out = factors[0]
        for f in factors[1:]:
            out = direct_product(out, f, bound)
        return out
    if k == "symmetric":
        return symmetric_group(spec.args[0], bound)
    if k == "alternating":
        return alternating_group(spec.args[0], bound)
    if k == "dihedral":
        return dihedral_group(spec.args[0], bound)
    if k == "dicyclic":
        return dicyclic_group(spec.args[0], bound)
    if k == "heisenberg":
        return heisenberg_group(spec.args[0], bound)
    if k in ("psl", "sl"):
        return psl2(spec.args[0], bound, special_linear=(k == "sl"))
    if k == "perm":
        return permutation_group_from_cycles(spec.args[0], bound)
    if k == "semidirect":
        a_spec, b_spec, action = spec.args
        return semidirect_product(_build(a_spec, bound, base_dir), _build(b_spec, bound, base_dir), action, bound)
    if k == "file":
        return load_group_file(base_dir / spec.args[0], max_order=bound)
    raise InternalInvariantError(f"unknown spec kind {k}")


def abelian_group(factors: tuple[int, ...], bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Z_{n1} x ... x Z_{nk} with mixed-radix element indexing, e_i the basis."""
    if not factors or any(n < 1 for n in factors):
        raise InputError(f"invalid cyclic factors {factors}")
    order = 1
    for n in factors:
        order *= n
    label = " x ".join(f"C{n}" for n in factors)
    _check_order(order, bound, label)
    digits = np.stack(
        [v.reshape(-1) for v in np.indices(factors)], axis=1
    )  # row x = exponent vector of x, most significant first
    sums = digits[:, None, :] + digits[None, :, :]
    mods = np.asarray(factors)
    sums %= mods
    weights = np.ones(len(factors), dtype=np.int64)
    for i in range(len(factors) - 2, -1, -1):
        weights[i] = weights[i + 1] * factors[i + 1]
    table = (sums * weights).sum(axis=2)
    gens = tuple(int(w) for w, n in zip(weights, factors) if n > 1)
    return FiniteGroup(
        table,
        label=label,
        abelian_factors=tuple(factors),
        generators=gens,
        validate=order <= 512,
    )


def direct_product(A: FiniteGroup, B: FiniteGroup, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    order = A.order * B.order
    label = f"{A.label} x {B.label}"
    _check_order(order, bound, label)
    nb = B.order
    ta = A.table.astype(np.int64)
    tb = B.table.astype(np.int64)
    table = (np.kron(ta, np.ones((nb, nb), dtype=np.int64)) * nb) + np.tile(tb, (A.order, A.order))
    names = [f"({A.element_name(x // nb)},{B.element_name(x % nb)})" for x in range(order)]
    gens_a = A.generators or ()
    gens_b = B.generators or ()
    gens = tuple(a * nb for a in gens_a) + tuple(gens_b)
    return FiniteGroup(table, label=label, element_names=names, generators=gens or None, validate=order <= 512)


def _perm_group_from_gens(
    gens: Sequence[tuple[int, ...]],
    label: str,
    bound: int,
    expected_order: Optional[int] = None,
) -> FiniteGroup:
    """Close permutation generators, elements ordered by discovery from identity."""
    if not gens:
        raise InputError("need at least one permutation generator")
    degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise InputError("permutation generators act on different point sets")
    ident = tuple(range(degree))
    elems: list[tuple[int, ...]] = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for g in gens:
            nxt = tuple(cur[g[p]] for p in range(degree))
            if nxt not in index:
                if expected_order is not None and len(elems) >= expected_order:
                    raise GroupFileError(f"{label}: more elements than the declared order {expected_order}")
                if len(elems) >= bound:
                    raise ResourceLimitError(f"{label} exceeds the configured order bound {bound}")
                index[nxt] = len(elems)
                elems.append(nxt)
    order = len(elems)
    if expected_order is not None and order != expected_order:
        raise GroupFileError(f"{label}: declared order {expected_order} but generators produce {order}")
    _check_order(order, bound, label)
    table = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            table[i, j] = index[tuple(p[q[k]] for k in range(degree))]
    gen_idx = tuple(index[g] for g in gens)
    return FiniteGroup(
        table,
        label=label,
        perm_rep=elems,
        generators=gen_idx,
        validate=order <= 512,
    )


def _cycles_to_perm(cycles: Sequence[tuple[int, ...]], degree: int) -> tuple[int, ...]:
    perm = list(range(degree))
    for cyc in cycles:
        for i, p in enumerate(cyc):
            if p < 1 or p > degree:
                raise InputError(f"cycle point {p} outside 1..{degree}")
            perm[p - 1] = cyc[(i + 1) % len(cyc)] - 1
    return tuple(perm)


def permutation_group_from_cycles(
    gens_cycles: Sequence[tuple[tuple[int, ...], ...]],
    bound: int = DEFAULT_MAX_ORDER,
    degree: Optional[int] = None,
    label: Optional[str] = None,
    expected_order: Optional[int] = None,
) -> FiniteGroup:
    """Group generated by permutations given in disjoint-cycle notation."""
    seen_points = [p for gen in gens_cycles for cyc in gen for p in cyc]
    if degree is None:
        degree = max(seen_points)
    for gen in gens_cycles:
        flat = [p for cyc in gen for p in cyc]
        if len(flat) != len(set(flat)):
            raise InputError(f"cycles in one generator overlap: {gen}")
    perms = [_cycles_to_perm(gen, degree) for gen in gens_cycles]
    name = label or "Perm[" + ", ".join(format_cycles(p) for p in perms) + "]"
    return _perm_group_from_gens(perms, name, bound, expected_order)


def symmetric_group(n: int, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if n < 1:
        raise InputError("symmetric group degree must be >= 1")
    if n == 1:
        return abelian_group((1,), bound)
    if n == 2:
        return abelian_group((2,), bound)
    gens = [_cycles_to_perm(((1, 2),), n), _cycles_to_perm((tuple(range(1, n + 1)),), n)]
    return _perm_group_from_gens(gens, f"S{n}", bound)


def alternating_group(n: int, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if n < 3:
        return abelian_group((1,), bound)
    if n == 3:
        return abelian_group((3,), bound)
    g1 = _cycles_to_perm(((1, 2, 3),), n)
    if n % 2 == 1:
        g2 = _cycles_to_perm((tuple(range(1, n + 1)),), n)
    else:
        g2 = _cycles_to_perm((tuple(range(2, n + 1)),), n)
    return _perm_group_from_gens([g1, g2], f"A{n}", bound)


def dihedral_group(n: int, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Dihedral group of order 2n: rotation r (order n) and a reflection s."""
    if n < 1:
        raise InputError("dihedral parameter must be >= 1")
    order = 2 * n
    _check_order(order, bound, f"D{n}")
    # element i + n*j  <->  r^i s^j
    table = np.zeros((order, order), dtype=np.int64)
    for i1 in range(n):
        for j1 in range(2):
            for i2 in range(n):
                for j2 in range(2):
                    i = (i1 + i2) % n if j1 == 0 else (i1 - i2) % n
                    table[i1 + n * j1, i2 + n * j2] = i + n * ((j1 + j2) % 2)

    def name(x: int) -> str:
        i, j = x % n, x // n
        rot = f"r^{i}" if i else "1"
        return f"{rot}s" if j else rot

    gens = (1, n) if n > 1 else (n,)
    return FiniteGroup(
        table, label=f"D{n}", element_names=[name(x) for x in range(order)], generators=gens, validate=order <= 512
    )


def dicyclic_group(order: int, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Dicyclic group of the given order 4k: <a,b | a^{2k}=1, b^2=a^k, bab^-1=a^-1>.

    Q8 is the quaternion group, Q16 generalized quaternion, Q12 = Dic3, etc.
    """
    if order % 4 != 0 or order < 8:
        raise InputError(f"dicyclic order must be a multiple of 4 and >= 8, got {order}")
    _check_order(order, bound, f"Q{order}")
    k = order // 4
    m = 2 * k
    # element i + m*j <-> a^i b^j with j in {0,1}
    table = np.zeros((order, order), dtype=np.int64)
    for i1 in range(m):
        for j1 in range(2):
            for i2 in range(m):
                for j2 in range(2):
                    # (a^i1 b^j1)(a^i2 b^j2): move b^j1 past a^i2
                    i = (i1 + i2) % m if j1 == 0 else (i1 - i2) % m
                    if j1 and j2:
                        i = (i + k) % m  # b^2 = a^k
                    table[i1 + m * j1, i2 + m * j2] = i + m * ((j1 + j2) % 2)

    def name(x: int) -> str:
        i, j = x % m, x // m
        return (f"a^{i}" + ("b" if j else "")) if i else ("b" if j else "1")

    return FiniteGroup(
        table,
        label=f"Q{order}",
        element_names=[name(x) for x in range(order)],
        generators=(1, m),
        validate=order <= 512,
    )


def heisenberg_group(p: int, bound: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Heisenberg group of order p^3: upper unitriangular 3x3 matrices over F_p."""
    if p < 2:
        raise InputError("Heisenberg parameter must be >= 2")
    order = p**3
    _check_order(order, bound, f"He({p})")
    # element index encodes (a, b, c) <-> [[1,a,c],[0,1,b],[0,0,1]]
    idx = np.arange(order)
    a1, rest = np.divmod(idx, p * p)
    b1, c1 = np.divmod(rest, p)
    a2 = a1[None, :]
    b2 = b1[None, :]
    c2 = c1[None, :]
    a1 = a1[:, None]
    b1 = b1[:, None]
    c1 = c1[:, None]
    a = (a1 + a2) % p
    b = (b1 + b2) % p
    c = (c1 + c2 + a1 * b2) % p
    table = a * p * p + b * p + c

    def name(x: int) -> str:
        av, rest_ = divmod(x, p * p)
        bv, cv = divmod(rest_, p)
        return f"({av},{bv},{cv})"

    return FiniteGroup(
        table,
        label=f"He({p})",
        element_names=[name(x) for x in range(order)],
        generators=(p * p, p),
        validate=order <= 512,
    )


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def psl2(q: int, bound: int = DEFAULT_MAX_ORDER, special_linear: bool = False) -> FiniteGroup:
    """PSL(2,q) acting on the projective line (or SL(2,q) as matrices), prime q <= 13."""
    if q not in _SMALL_PRIMES:
        raise InputError(f"(P)SL(2,q) supports prime q in {_SMALL_PRIMES}, got {q}")
    if special_linear:
        return _sl2_matrices(q, bound)
    # generators x -> x+1 and x -> -1/x on P^1 = {0..q-1, inf}; point q is inf
    degree = q + 1
    t = [0] * degree
    for x in range(q):
        t[x] = (x + 1) % q
    t[q] = q
    s = [0] * degree
    for x in range(q):
        s[x] = q if x == 0 else (-pow(x, q - 2, q)) % q
    s[q] = 0
    gens = [tuple(t), tuple(s)]
    return _perm_group_from_gens(gens, f"PSL(2,{q})", bound)


def _sl2_matrices(q: int, bound: int) -> FiniteGroup:
    order = q * (q - 1) * (q + 1)
    _check_order(order, bound, f"SL(2,{q})")
    mats: list[tuple[int, int, int, int]] = []
    index: dict[tuple[int, int, int, int], int] = {}
    ident = (1, 0, 0, 1)
    mats.append(ident)
    index[ident] = 0
    gens = [(1, 1, 0, 1), (0, (-1) % q, 1, 0)]
    head = 0
    while head < len(mats):
        a, b, c, d = mats[head]
        head += 1
        for e, f, g, h in gens:
            m = ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)
            if m not in index:
                index[m] = len(mats)
                mats.append(m)
    if len(mats) != order:
        raise InternalInvariantError(f"SL(2,{q}) closure produced {len(mats)} elements, expected {order}")
    table = np.zeros((order, order), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(mats):
        for j, (e, f, g, h) in enumerate(mats):
            table[i, j] = index[
                ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)
            ]

    names = [f"[{a},{b};{c},{d}]" for a, b, c, d in mats]
    return FiniteGroup(
        table,
        label=f"SL(2,{q})",
        element_names=names,
        generators=(index[gens[0]], index[gens[1]]),
        validate=order <= 512,
    )


def semidirect_product(
    A: FiniteGroup,
    B: FiniteGroup,
    action: Sequence[Sequence[Sequence[int]]],
    bound: int = DEFAULT_MAX_ORDER,
) -> FiniteGroup:
    """A : B with B acting on an abelian A through the given generator images.

    ``action[j][i]`` is the exponent vector (over A's cyclic factors) of the
    image of A's i-th standard generator under B's j-th generator.  The images
    must define automorphisms of A, and the generator assignment must extend
    to a homomorphism B -> Aut(A); both are recomputed and validated here.
    """
    if A.abelian_factors is None:
        raise ValidationError("semidirect products require an abelian normal factor with standard generators")
    factors = A.abelian_factors
    ngens = len(factors)
    b_gens = B.generators
    if b_gens is None:
        raise ValidationError(f"{B.label} exposes no distinguished generators for a semidirect action")
    if len(action) != len(b_gens):
        raise ValidationError(f"action has {len(action)} rows but {B.label} has {len(b_gens)} generators")
    order = A.order * B.order
    _check_order(order, bound, f"({A.label}) : ({B.label})")

    gen_maps = []
    for j, row in enumerate(action):
        if len(row) != ngens:
            raise ValidationError(f"action row {j} has {len(row)} images but {A.label} has {ngens} generators")
        gen_maps.append(_abelian_automorphism(factors, row, f"action row {j}"))

    # propagate phi over all of B along its Cayley graph; conflicts mean the
    # generator assignment is not a homomorphism B -> Aut(A)
    phi: list[Optional[np.ndarray]] = [None] * B.order
    phi[0] = np.arange(A.order, dtype=np.int64)
    queue = [0]
    head = 0
    while head < len(queue):
        b = queue[head]
        head += 1
        for j, g in enumerate(b_gens):
            nb = B.mul(g, b)
            cand = gen_maps[j][phi[b]]
            if phi[nb] is None:
                phi[nb] = cand
                queue.append(nb)
            elif not np.array_equal(phi[nb], cand):
                raise ValidationError("semidirect action does not define a homomorphism into Aut(A)")
    if any(p is None for p in phi):
        raise ValidationError(f"{B.label}'s declared generators do not generate it")

    # element index a + na*b <-> (a, b); (a1,b1)(a2,b2) = (a1 * phi_{b1}(a2), b1 b2)
    na = A.order
    ta = A.table.astype(np.int64)
    tb = B.table.astype(np.int64)
    idx = np.arange(order)
    a_all, b_all = idx % na, idx // na
    table = np.zeros((order, order), dtype=np.int64)
    for x in range(order):
        a1, b1 = int(a_all[x]), int(b_all[x])
        twisted = phi[b1]
        table[x] = ta[a1, twisted[a_all]] + tb[b1, b_all] * na

    names = [f"({A.element_name(x % na)},{B.element_name(x // na)})" for x in range(order)]
    gens = tuple(int(g) for g in (A.generators or ())) + tuple(na * int(b) for b in b_gens)
    return FiniteGroup(
        table,
        label=f"({A.label}) : ({B.label})",
        element_names=names,
        generators=gens or None,
        validate=order <= 512,
    )


def _abelian_automorphism(factors: tuple[int, ...], images: Sequence[Sequence[int]], what: str) -> np.ndarray:
    """Total map of the abelian group sending e_i to the given exponent vectors."""
    order = 1
    for n in factors:
        order *= n
    img = np.zeros(order, dtype=np.int64)
    image_of_gen = [pack_exponents(vec, factors) for vec in images]
    for x in range(order):
        coeffs = exponent_vector(x, factors)
        acc = [0] * len(factors)
        for c, g in zip(coeffs, image_of_gen):
            gvec = exponent_vector(g, factors)
            acc = [(u + c * v) % n for u, v, n in zip(acc, gvec, factors)]
        img[x] = pack_exponents(acc, factors)
        # order must be preserved generator-wise; full bijectivity checked below
    if len(set(img.tolist())) != order:
        raise ValidationError(f"{what} is not an automorphism of the abelian factor")
    for i, vec in enumerate(images):
        g = image_of_gen[i]
        # the image of e_i must have the same order as e_i
        n_i = factors[i]
        gvec = exponent_vector(g, factors)
        ord_img = 1
        for v, n in zip(gvec, factors):
            if v:
                ord_img = np.lcm(ord_img, n // np.gcd(v, n))
        if int(ord_img) != n_i:
            raise ValidationError(f"{what}: image of e{i+1} has order {int(ord_img)}, expected {n_i}")
    return img


# -- group files ---------------------------------------------------------------


@dataclass(frozen=True)
class GroupFile:
    """Parsed groupfile v1 header plus generators in cycle form."""

    order: int
    degree: int
    generators: tuple[tuple[tuple[int, ...], ...], ...]
    label: Optional[str]


_CYCLE_LINE_RE = re.compile(r"^(\(\d+(?:,\d+)*\))+$|^\(\)$")


def parse_group_file(text: str, source: str = "<groupfile>") -> GroupFile:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "groupfile v1":
        raise GroupFileError(f"{source}: first line must be 'groupfile v1'")
    if len(lines) < 4:
        raise GroupFileError(f"{source}: missing header or generators")
    m = re.fullmatch(r"order (\d+)", lines[1])
    if not m:
        raise GroupFileError(f"{source}: second line must be 'order N'")
    order = int(m.group(1))
    m = re.fullmatch(r"degree (\d+)", lines[2])
    if not m:
        raise GroupFileError(f"{source}: third line must be 'degree d'")
    degree = int(m.group(1))
    label: Optional[str] = None
    gen_lines = lines[3:]
    if gen_lines and gen_lines[-1].startswith("label "):
        label = gen_lines[-1][len("label ") :]
        gen_lines = gen_lines[:-1]
    if not gen_lines:
        raise GroupFileError(f"{source}: no generators")
    gens = []
    for ln in gen_lines:
        if not _CYCLE_LINE_RE.fullmatch(ln.replace(" ", "")):
            raise GroupFileError(f"{source}: bad generator line {ln!r}")
        if ln.replace(" ", "") == "()":
            gens.append(((1,),))  # identity generator, for the trivial group
            continue
        cycles = []
        for part in re.findall(r"\(([\d,]+)\)", ln):
            cyc = tuple(int(v) for v in part.split(","))
            if any(p < 1 or p > degree for p in cyc):
                raise GroupFileError(f"{source}: cycle point outside 1..{degree} in {ln!r}")
            if len(set(cyc)) != len(cyc):
                raise GroupFileError(f"{source}: repeated point in cycle {ln!r}")
            cycles.append(cyc)
        flat = [p for cyc in cycles for p in cyc]
        if len(flat) != len(set(flat)):
            raise GroupFileError(f"{source}: cycles overlap in {ln!r}")
        gens.append(tuple(cycles))
    return GroupFile(order, degree, tuple(gens), label)


def load_group_file(path: str | Path, max_order: Optional[int] = None) -> FiniteGroup:
    """Build the group generated by the permutations in a groupfile v1 file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GroupFileError(f"cannot read group file {path}: {exc}") from exc
    gf = parse_group_file(text, source=str(path))
    bound = max_order if max_order is not None else max_order_bound()
    label = gf.label or path.stem
    return permutation_group_from_cycles(
        gf.generators, bound, degree=gf.degree, label=label, expected_order=gf.order
    )


def write_group_file(G: FiniteGroup, path: str | Path, label: Optional[str] = None) -> None:
    """Export G through its regular permutation representation (or stored one)."""
    path = Path(path)
    if G.order == 1:
        perms = [(0,)]
        degree = 1
    elif G.perm_rep is not None:
        perms = [G.perm_rep[g] for g in (G.generators or range(1, G.order))]
        degree = len(G.perm_rep[0])
    else:
        gens = G.generators or tuple(range(1, G.order))
        # left-multiplication action of each generator on all elements
        perms = [tuple(int(G.table[g, x]) for x in range(G.order)) for g in gens]
        degree = G.order
    body = ["groupfile v1", f"order {G.order}", f"degree {degree}"]
    body += [format_cycles(p) for p in perms]
    body.append(f"label {label or G.label}")
    path.write_text("\n".join(body) + "\n", encoding="utf-8")


def trivial_group() -> FiniteGroup:
    return abelian_group((1,))
