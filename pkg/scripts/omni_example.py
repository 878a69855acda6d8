"""Walk through the two-rupture-vertex example stored in fixtures/omni.json.

Prints the partition, the surface piece over the m <= l component, the
size and anchor of every chain, and writes the plumbing graph as DOT.
"""

from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from milnor_boundary import build_plumbing, components_gamma1, export_dot, partition, residuals
from milnor_boundary.formats import read_resolution

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "omni.json"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dot", type=Path, help="write the plumbing graph here")
    args = ap.parse_args()

    gamma, mp, _, _ = read_resolution(FIXTURE.read_text(encoding="utf-8"))
    part = partition(gamma, mp)
    print("vertex  euler   m   l")
    for w in gamma.exceptional:
        print(f"{w:>6}  {gamma.euler[w]:>5}  {mp.m[w]:>2}  {mp.l[w]:>2}")
    print(f"W1 = {part.W1}  W2 = {part.W2}")
    for cs in components_gamma1(gamma, mp, part):
        print(f"component {cs.name}: d = {cs.d}, genus = {cs.genus}, euler = {cs.euler}")

    out = build_plumbing(gamma, mp)
    sizes = Counter(p.kind for p in out.provenance.values())
    print(f"{len(out.graph)} vertices, {len(out.graph.edges)} edges")
    for kind, count in sorted(sizes.items()):
        print(f"  {kind:<16} {count}")
    centres = [v for v, p in out.provenance.items() if p.kind in ("f1-chain", "bridge-chain") and p.role == "0"]
    for v in sorted(centres):
        print(f"  centre {v}: m = {out.zsys.m[v]}")
    duals = {v: n for v, n in out.zsys.n.items() if n}
    print(f"dual multiplicities: {duals}")
    print(f"max |residual| = {max(map(abs, residuals(out.graph, out.zsys).values()))}")
    if args.dot:
        args.dot.write_text(export_dot(out.graph, out.zsys, name="omni"), encoding="utf-8")
        print(f"wrote {args.dot}")


if __name__ == "__main__":
    main()
