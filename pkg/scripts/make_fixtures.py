"""Regenerate the JSON fixtures and golden outputs under ``fixtures/``.

Run from the repository root::

    python3 scripts/make_fixtures.py           # write files
    python3 scripts/make_fixtures.py --check   # exit 1 if anything would change
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from milnor_boundary import (
    Arrow,
    ResolutionGraph,
    build_plumbing,
    dump_resolution,
    export_dot,
    gen_tab,
    serialize_plumbing,
    solve_mult_pair,
)

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def omni_gamma() -> ResolutionGraph:
    """Resolution graph of f = A B^2, g = C^3 D.

    A, C are generic cusps x^2 + c y^3 and B, D are generic members of
    (x^2 + y^3)^2 + c x^5; the cusps hang off the first rupture vertex w3,
    the other two branches off the second rupture vertex w5.
    """
    gamma = ResolutionGraph()
    gamma.euler.update({"w1": -3, "w2": -2, "w3": -2, "w4": -3, "w5": -1, "w6": -2})
    gamma.edges = [("w1", "w3"), ("w2", "w3"), ("w3", "w4"), ("w4", "w5"), ("w5", "w6")]
    gamma.arrows.update({
        "fA": Arrow("w3", "f"),
        "gC": Arrow("w3", "g"),
        "fB": Arrow("w5", "f"),
        "gD": Arrow("w5", "g"),
    })
    return gamma


OMNI_ARROW_M = {"fA": 1, "fB": 2, "gC": 0, "gD": 0}
OMNI_ARROW_L = {"fA": 0, "fB": 0, "gC": 3, "gD": 1}

# (m_v, delta_hat_v) for the three m <= l vertices and
# (m_inner, l_inner, m_outer, l_outer) for the two boundary edges
OMNI_COMPONENT = {
    "inner": [[15, 1], [10, 1], [30, 4]],
    "boundary": [[30, 30, 1, 0], [30, 30, 34, 32]],
    "expected": {"d": 1, "genus": 17, "euler": -90},
}


def render() -> dict[str, str]:
    files: dict[str, str] = {}
    for a, b in ((3, 2), (7, 5)):
        gamma, mp = gen_tab(a, b)
        files[f"tab_{a}_{b}.json"] = dump_resolution(gamma, mp)
        out = build_plumbing(gamma, mp)
        files[f"tab_{a}_{b}.plumbing.json"] = serialize_plumbing(out)
        if (a, b) == (3, 2):
            files["tab_3_2.dot"] = export_dot(out.graph, out.zsys)

    gamma = omni_gamma()
    mp = solve_mult_pair(gamma, OMNI_ARROW_M, OMNI_ARROW_L)
    files["omni.json"] = dump_resolution(gamma, mp)
    files["omni.plumbing.json"] = serialize_plumbing(build_plumbing(gamma, mp))
    files["omni_component.json"] = json.dumps(OMNI_COMPONENT, indent=2) + "\n"
    return files


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args()
    stale = []
    for name, text in render().items():
        path = ROOT / name
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(name)
        else:
            path.write_text(text, encoding="utf-8")
            print(f"wrote {path.relative_to(ROOT.parent)}")
    for name in stale:
        print(f"stale: {name}", file=sys.stderr)
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
