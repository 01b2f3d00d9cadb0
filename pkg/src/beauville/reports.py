"""Classification reports: the top-level classify entry point and JSON forms.

Reports are deterministic: kernel orbits sort by their subgroup keys, classes
by canonical key, and JSON serialization uses sorted keys, so identical runs
emit byte-identical output.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .classify import (
    KernelContext,
    StructureClass,
    brute_orbit_records,
    fiber_classes,
)
from .errors import InputError, InternalInvariantError
from .groups import FiniteGroup, Subgroup, trivial_subgroup
from .invariants import compute_invariants
from .morphisms import kernel_tuple_orbits


class OracleMismatchError(InternalInvariantError):
    """The fiber algorithm and the brute-force oracle disagree."""


@dataclass(frozen=True)
class ClassEntry:
    canonical_key: tuple[int, ...]
    triples: tuple[tuple[str, str, str], ...]
    types: tuple[tuple[int, int, int], ...]
    type_tuple: tuple[tuple[int, int, int], ...]  # sorted form, the cell label
    genera: tuple[int, ...]
    chi: int
    self_intersection: int
    euler: int
    kodaira: int

    def to_dict(self) -> dict:
        return {
            "triples": [list(t) for t in self.triples],
            "type_tuple": [list(t) for t in self.type_tuple],
            "genera": list(self.genera),
            "chi": self.chi,
            "self_intersection": self.self_intersection,
            "euler": self.euler,
            "kodaira": self.kodaira,
            "canonical_key": list(self.canonical_key),
        }


@dataclass(frozen=True)
class KernelOrbitBlock:
    kernel_tuple: tuple[tuple[str, ...], ...]  # generator words per kernel
    kernel_orders: tuple[int, ...]
    classes: tuple[ClassEntry, ...]
    total_count: int
    oracle_checked: bool

    def cells(self) -> list[tuple[tuple[tuple[int, int, int], ...], int, int]]:
        """(sorted type tuple, chi, count) aggregation of the classes."""
        acc: dict[tuple, int] = {}
        for c in self.classes:
            acc[(c.type_tuple, c.chi)] = acc.get((c.type_tuple, c.chi), 0) + 1
        return [(types, chi, count) for (types, chi), count in sorted(acc.items())]

    def to_dict(self) -> dict:
        return {
            "kernel_tuple": [list(k) for k in self.kernel_tuple],
            "kernel_orders": list(self.kernel_orders),
            "classes": [c.to_dict() for c in self.classes],
            "cells": [
                {"type_tuple": [list(t) for t in types], "chi": chi, "count": count}
                for types, chi, count in self.cells()
            ],
            "total_count": self.total_count,
            "oracle_checked": self.oracle_checked,
        }


@dataclass(frozen=True)
class ClassReport:
    group_spec: str
    n: int
    kernel_orbits: tuple[KernelOrbitBlock, ...]
    total_count: int

    def to_dict(self) -> dict:
        if len(self.kernel_orbits) == 1:
            block = self.kernel_orbits[0].to_dict()
            block.update({"group_spec": self.group_spec, "n": self.n})
            return block
        return {
            "group_spec": self.group_spec,
            "n": self.n,
            "kernel_orbits": [b.to_dict() for b in self.kernel_orbits],
            "total_count": self.total_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _class_entry(ctx: KernelContext, cls: StructureClass) -> ClassEntry:
    words = []
    for i, entries in enumerate(cls.entries):
        Q = ctx.quotients[i].group
        words.append(tuple(Q.element_name(e) for e in entries))
    inv = compute_invariants(ctx.group.order, cls.genera)
    return ClassEntry(
        canonical_key=cls.canonical_key,
        triples=tuple(words),
        types=cls.types,
        type_tuple=tuple(sorted(tuple(sorted(t)) for t in cls.types)),
        genera=cls.genera,
        chi=inv.chi,
        self_intersection=inv.self_intersection,
        euler=inv.euler,
        kodaira=inv.kodaira,
    )


def classify_kernel_orbit(
    G: FiniteGroup,
    kernels: Sequence[Subgroup],
    chi: Optional[int] = None,
    types=None,
    oracle: bool = False,
) -> KernelOrbitBlock:
    """Classes for one kernel-tuple orbit, optionally cross-checked by brute force."""
    ctx = KernelContext(G, kernels)
    classes = fiber_classes(ctx, chi=chi, types=types)
    if oracle:
        records = brute_orbit_records(ctx, chi=chi, types=types)
        fiber_keys = sorted(c.canonical_key for c in classes)
        brute_keys = sorted(r.key for r in records)
        if fiber_keys != brute_keys:
            raise OracleMismatchError(
                f"fiber algorithm found {len(fiber_keys)} classes, oracle {len(brute_keys)};"
                f" first difference near {_first_diff(fiber_keys, brute_keys)}"
            )
    entries = tuple(sorted((_class_entry(ctx, c) for c in classes), key=lambda e: e.canonical_key))
    return KernelOrbitBlock(
        kernel_tuple=tuple(
            tuple(K.parent.element_name(g) for g in K.small_generating_set()) for K in kernels
        ),
        kernel_orders=tuple(K.order for K in kernels),
        classes=entries,
        total_count=len(entries),
        oracle_checked=oracle,
    )


def _first_diff(a: list, b: list):
    for x, y in zip(a, b):
        if x != y:
            return (x, y)
    return (len(a), len(b))


def _orbit_worker(args) -> KernelOrbitBlock:
    G, kernel_keys, chi, types, oracle = args
    from .groups import subgroup_generated

    kernels = tuple(subgroup_generated(G, key) for key in kernel_keys)
    return classify_kernel_orbit(G, kernels, chi=chi, types=types, oracle=oracle)


def classify_ub(
    G: FiniteGroup,
    n: int,
    chi: Optional[int] = None,
    types=None,
    kernel_policy: str = "all",
    kernels: Optional[Sequence[Subgroup]] = None,
    oracle: bool = False,
    jobs: int = 1,
    group_spec: Optional[str] = None,
) -> ClassReport:
    """Biholomorphism classes of n-fold unmixed Beauville structures on G.

    kernels restricts to one kernel-tuple orbit; kernel_policy='trivial'
    restricts to absolutely faithful actions; otherwise every kernel-tuple
    orbit is classified.
    """
    if types is not None:
        types = [tuple(t) for t in types]
        if len(types) != n:
            raise InputError(f"need one --type per factor: got {len(types)} for n = {n}")
    if kernels is not None:
        reps = [tuple(sorted(kernels, key=lambda K: K.key))]
    elif kernel_policy == "trivial":
        triv = trivial_subgroup(G)
        reps = [(triv,) * n]
    else:
        reps = [o.representative for o in kernel_tuple_orbits(G, n)]

    tasks = [(G, tuple(K.members for K in kt), chi, types, oracle) for kt in reps]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_orbit_worker, tasks))
    else:
        blocks = [_orbit_worker(t) for t in tasks]
    keyed = sorted(zip((tuple(K.key for K in kt) for kt in reps), blocks), key=lambda kv: kv[0])
    ordered = tuple(b for _, b in keyed)
    return ClassReport(
        group_spec=group_spec or G.label,
        n=n,
        kernel_orbits=ordered,
        total_count=sum(b.total_count for b in ordered),
    )
