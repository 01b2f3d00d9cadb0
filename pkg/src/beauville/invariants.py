"""Numerical invariants of the quotient manifold and candidate-tuple pruning.

All arithmetic is exact integer arithmetic; the Hurwitz bound in particular
uses isqrt so the floor is correct at boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from .errors import InconsistentConfigurationError, InputError
from .triples import is_hyperbolic_type


@dataclass(frozen=True)
class ManifoldInvariants:
    """chi, K^n, e and Kodaira dimension of (C_1 x ... x C_n)/G."""

    chi: int
    self_intersection: int
    euler: int
    kodaira: int
    genera: tuple[int, ...]
    group_order: int
    n: int


def compute_invariants(group_order: int, genera: Sequence[int]) -> ManifoldInvariants:
    """Invariants from the curve genera and the group order.

    chi = (-1)^n / |G| * prod(g_i - 1); the product must be divisible by the
    group order or the configuration cannot arise from a free action.
    """
    if group_order < 1:
        raise InputError("group order must be positive")
    genera = tuple(int(g) for g in genera)
    if any(g < 0 for g in genera) or not genera:
        raise InputError(f"invalid genera {genera}")
    n = len(genera)
    prod = 1
    for g in genera:
        prod *= g - 1
    if prod % group_order != 0:
        raise InconsistentConfigurationError(
            f"prod(g_i - 1) = {prod} is not divisible by the group order {group_order}"
        )
    sign = -1 if n % 2 else 1
    chi = sign * (prod // group_order)
    k_top = sign * _factorial(n) * (2**n) * chi
    return ManifoldInvariants(
        chi=chi,
        self_intersection=k_top,
        euler=(2**n) * chi,
        kodaira=sum(1 for g in genera if g >= 2),
        genera=genera,
        group_order=group_order,
        n=n,
    )


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def hurwitz_bound(chi: int) -> int:
    """floor(168 * sqrt(-21 chi)), the group-order bound for threefolds."""
    if chi >= 0:
        raise InputError(f"the Hurwitz-style bound needs chi <= -1, got {chi}")
    return isqrt(168 * 168 * 21 * (-chi))


@dataclass(frozen=True)
class CandidateTuple:
    """Arithmetically possible (order, genera, types) for an absolutely faithful threefold."""

    group_order: int
    genera: tuple[int, int, int]
    types: tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _types_for(order: int, genus: int, divisor_pool: list[int], m_cap: int) -> list[tuple[int, int, int]]:
    """Sorted hyperbolic types over divisors of the order matching Hurwitz exactly."""
    out = []
    pool = [m for m in divisor_pool if 2 <= m <= m_cap]
    for i, m1 in enumerate(pool):
        for j in range(i, len(pool)):
            m2 = pool[j]
            for k in range(j, len(pool)):
                m3 = pool[k]
                if not is_hyperbolic_type((m1, m2, m3)):
                    continue
                num = order * (m1 * m2 * m3 - m2 * m3 - m1 * m3 - m1 * m2)
                den = m1 * m2 * m3
                if num % den:
                    continue
                double = num // den
                if double % 2 or double // 2 + 1 != genus:
                    continue
                out.append((m1, m2, m3))
    return out


def candidate_tuples(chi: int) -> list[CandidateTuple]:
    """All (N, g_1..g_3, T_1..T_3) surviving the combinatorial constraints.

    Constraints: N at most the Hurwitz bound; each g_i - 1 divides N|chi| and
    their product equals N|chi|; type entries are divisors of N, at least 2,
    at most 4g_i + 2, divide (g_{i+1}-1)(g_{i+2}-1) cyclically, and satisfy
    the Hurwitz formula for (N, g_i) exactly with a hyperbolic type.
    """
    if chi >= 0:
        raise InputError(f"candidate enumeration needs chi <= -1, got {chi}")
    bound = hurwitz_bound(chi)
    a = -chi
    out: list[CandidateTuple] = []
    for order in range(2, bound + 1):
        target = order * a
        gdivs = [d for d in _divisors(target)]
        odivs = _divisors(order)
        # genera combinations g1 <= g2 <= g3 with prod (g_i - 1) = N|chi|
        for d1 in gdivs:
            if d1 * d1 * d1 > target:
                break
            if target % d1:
                continue
            rest = target // d1
            for d2 in _divisors(rest):
                if d2 < d1:
                    continue
                d3 = rest // d2
                if rest % d2 or d3 < d2:
                    continue
                genera = (d1 + 1, d2 + 1, d3 + 1)
                if genera[0] < 2:
                    continue
                ds = (d1, d2, d3)
                per_genus_types = []
                for i, g in enumerate(genera):
                    cross = ds[(i + 1) % 3] * ds[(i + 2) % 3]
                    pool = [m for m in odivs if cross % m == 0]
                    per_genus_types.append(_types_for(order, g, pool, 4 * g + 2))
                if all(per_genus_types):
                    for t1 in per_genus_types[0]:
                        for t2 in per_genus_types[1]:
                            for t3 in per_genus_types[2]:
                                out.append(CandidateTuple(order, genera, (t1, t2, t3)))
    return out
