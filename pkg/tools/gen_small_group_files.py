#!/usr/bin/env python3
"""Regenerate the bundled permutation exports of every group of order < 25.

Each group is built from a catalog spec and written through its regular
permutation representation, then reloaded and cross-checked against the
expected order and abelianization invariants.  Output is deterministic.

Usage: python tools/gen_small_group_files.py [outdir]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from beauville.catalog import build, load_group_file, write_group_file
from beauville.groups import abelianization_invariants

# (file stem, spec, order, invariant factors of the abelianization)
SMALL_GROUPS: list[tuple[str, str, int, tuple[int, ...]]] = [
    ("001_01_c1", "C1", 1, ()),
    ("002_01_c2", "C2", 2, (2,)),
    ("003_01_c3", "C3", 3, (3,)),
    ("004_01_c4", "C4", 4, (4,)),
    ("004_02_c2x2", "C2^2", 4, (2, 2)),
    ("005_01_c5", "C5", 5, (5,)),
    ("006_01_c6", "C6", 6, (6,)),
    ("006_02_s3", "S3", 6, (2,)),
    ("007_01_c7", "C7", 7, (7,)),
    ("008_01_c8", "C8", 8, (8,)),
    ("008_02_c4x2", "C4 x C2", 8, (4, 2)),
    ("008_03_c2x3", "C2^3", 8, (2, 2, 2)),
    ("008_04_d4", "D4", 8, (2, 2)),
    ("008_05_q8", "Q8", 8, (2, 2)),
    ("009_01_c9", "C9", 9, (9,)),
    ("009_02_c3x2", "C3^2", 9, (3, 3)),
    ("010_01_c10", "C10", 10, (10,)),
    ("010_02_d5", "D5", 10, (2,)),
    ("011_01_c11", "C11", 11, (11,)),
    ("012_01_c12", "C12", 12, (12,)),
    ("012_02_c6x2", "C6 x C2", 12, (6, 2)),
    ("012_03_d6", "D6", 12, (2, 2)),
    ("012_04_a4", "A4", 12, (3,)),
    ("012_05_dic3", "Q12", 12, (4,)),
    ("013_01_c13", "C13", 13, (13,)),
    ("014_01_c14", "C14", 14, (14,)),
    ("014_02_d7", "D7", 14, (2,)),
    ("015_01_c15", "C15", 15, (15,)),
    ("016_01_c16", "C16", 16, (16,)),
    ("016_02_c4x4", "C4^2", 16, (4, 4)),
    ("016_03_c8x2", "C8 x C2", 16, (8, 2)),
    ("016_04_c4x2x2", "C4 x C2^2", 16, (4, 2, 2)),
    ("016_05_c2x4", "C2^4", 16, (2, 2, 2, 2)),
    ("016_06_d8", "D8", 16, (2, 2)),
    ("016_07_q16", "Q16", 16, (2, 2)),
    ("016_08_sd16", "Semidirect(C8, C2, [[[3]]])", 16, (2, 2)),
    ("016_09_m16", "Semidirect(C8, C2, [[[5]]])", 16, (4, 2)),
    ("016_10_d4x2", "D4 x C2", 16, (2, 2, 2)),
    ("016_11_q8x2", "Q8 x C2", 16, (2, 2, 2)),
    ("016_12_c4sc4", "Semidirect(C4, C4, [[[3]]])", 16, (4, 2)),
    ("016_13_c22sc4", "Semidirect(C2^2, C4, [[[0,1],[1,0]]])", 16, (4, 2)),
    ("016_14_pauli", "Semidirect(C4 x C2, C2, [[[1,0],[2,1]]])", 16, (2, 2, 2)),
    ("017_01_c17", "C17", 17, (17,)),
    ("018_01_c18", "C18", 18, (18,)),
    ("018_02_c6x3", "C6 x C3", 18, (6, 3)),
    ("018_03_d9", "D9", 18, (2,)),
    ("018_04_s3x3", "S3 x C3", 18, (6,)),
    ("018_05_gd18", "Semidirect(C3^2, C2, [[[2,0],[0,2]]])", 18, (2,)),
    ("019_01_c19", "C19", 19, (19,)),
    ("020_01_c20", "C20", 20, (20,)),
    ("020_02_c10x2", "C10 x C2", 20, (10, 2)),
    ("020_03_d10", "D10", 20, (2, 2)),
    ("020_04_dic5", "Q20", 20, (4,)),
    ("020_05_f20", "Semidirect(C5, C4, [[[2]]])", 20, (4,)),
    ("021_01_c21", "C21", 21, (21,)),
    ("021_02_c7sc3", "Semidirect(C7, C3, [[[2]]])", 21, (3,)),
    ("022_01_c22", "C22", 22, (22,)),
    ("022_02_d11", "D11", 22, (2,)),
    ("023_01_c23", "C23", 23, (23,)),
    ("024_01_c24", "C24", 24, (24,)),
    ("024_02_c12x2", "C12 x C2", 24, (12, 2)),
    ("024_03_c6x2x2", "C6 x C2^2", 24, (6, 2, 2)),
    ("024_04_s4", "S4", 24, (2,)),
    ("024_05_sl23", "SL(2,3)", 24, (3,)),
    ("024_06_a4x2", "A4 x C2", 24, (6,)),
    ("024_07_d12", "D12", 24, (2, 2)),
    ("024_08_dic6", "Q24", 24, (2, 2)),
    ("024_09_d4x3", "D4 x C3", 24, (6, 2)),
    ("024_10_q8x3", "Q8 x C3", 24, (6, 2)),
    ("024_11_s3x4", "S3 x C4", 24, (4, 2)),
    ("024_12_s3x2x2", "S3 x C2^2", 24, (2, 2, 2)),
    ("024_13_dic3x2", "Q12 x C2", 24, (4, 2)),
    ("024_14_c3sc8", "Semidirect(C3, C8, [[[2]]])", 24, (8,)),
    ("024_15_c3sd4", "Semidirect(C3, D4, [[[2]], [[1]]])", 24, (2, 2)),
]


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    fingerprints = {}
    for stem, spec, order, ab in SMALL_GROUPS:
        G = build(spec)
        assert G.order == order, f"{stem}: built order {G.order}, expected {order}"
        got_ab = abelianization_invariants(G)
        assert got_ab == ab, f"{stem}: abelianization {got_ab}, expected {ab}"
        path = outdir / f"{stem}.gf"
        write_group_file(G, path, label=stem)
        back = load_group_file(path)
        assert back.order == order, f"{stem}: reload order {back.order}"
        assert abelianization_invariants(back) == ab, f"{stem}: reload abelianization"
        fp = (order, back.is_abelian, ab, tuple(sorted(back.element_order.tolist())))
        fingerprints.setdefault(fp, []).append(stem)
    collisions = {fp: names for fp, names in fingerprints.items() if len(names) > 1}
    if collisions:
        print("fingerprint collisions (distinguished only by finer invariants):")
        for fp, names in sorted(collisions.items()):
            print("  ", names)
    print(f"wrote {len(SMALL_GROUPS)} group files to {outdir}")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "src" / "beauville" / "data" / "small_groups"
    )
    main(target)
