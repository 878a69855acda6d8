"""JSON documents for resolution graphs and constructed plumbing graphs.

Resolution document::

    {"vertices": [{"id": "v1", "euler": -3}, ...],
     "edges": [["v1", "v2"], ...],
     "arrows": [{"id": "f1", "attach": "v2", "kind": "f", "m": 1, "l": 0}, ...],
     "mult": {"m": {"v1": 2, ...}, "l": {"v1": 2, ...}}}

``mult`` is optional and covers exceptional vertices only; arrowhead values
live on the arrows.  Plumbing document::

    {"vertices": [{"id", "euler", "genus", "m", "n", "piece"}, ...],
     "edges": [{"a", "b", "sign"}, ...]}

All arrays are sorted, so equal inputs serialize to identical bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .construct import ConstructionOutput, Piece
from .graph import MultiplicitySystem, PlumbingGraph
from .resolution import (
    Arrow,
    MultPair,
    ResolutionError,
    ResolutionGraph,
    check_balance,
    validate_multiplicities,
)


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                          exc.lineno, exc.colno) from None


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _field(obj: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise FormatError(f"{where}: field {key!r} must be an integer")
    if kind is str and not isinstance(val, str):
        raise FormatError(f"{where}: field {key!r} must be a string")
    return val


def _list(doc: dict, key: str, required: bool = True) -> list:
    if key not in doc:
        if required:
            raise FormatError(f"document lacks {key!r}")
        return []
    if not isinstance(doc[key], list):
        raise FormatError(f"{key!r} must be a list")
    return doc[key]


def parse_resolution(text: str, require_balanced: bool = False) -> tuple[ResolutionGraph, MultPair | None]:
    """Parse and structurally validate a resolution document.

    Multiplicities, when present, must cover every vertex.  Balance is only
    enforced with ``require_balanced``; ``validate`` wants to report it instead.
    """
    gamma, mp, _, _ = read_resolution(text, require_balanced)
    return gamma, mp


def read_resolution(
    text: str, require_balanced: bool = False
) -> tuple[ResolutionGraph, MultPair | None, dict[str, int], dict[str, int]]:
    """Like :func:`parse_resolution`, also returning the arrowhead ``m`` and ``l`` values."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    gamma = ResolutionGraph()
    for i, item in enumerate(_list(doc, "vertices")):
        vid = _field(item, "id", str, f"vertex #{i}")
        if vid in gamma.euler:
            raise ResolutionError(f"duplicate vertex {vid!r}")
        gamma.euler[vid] = _field(item, "euler", int, f"vertex {vid!r}")
    for i, item in enumerate(_list(doc, "edges")):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise FormatError(f"edge #{i} must be a pair of identifiers")
        gamma.edges.append((item[0], item[1]))
    arrow_m: dict[str, int] = {}
    arrow_l: dict[str, int] = {}
    for i, item in enumerate(_list(doc, "arrows", required=False)):
        aid = _field(item, "id", str, f"arrow #{i}")
        if aid in gamma.arrows:
            raise ResolutionError(f"duplicate arrow {aid!r}")
        kind = _field(item, "kind", str, f"arrow {aid!r}")
        if kind not in ("f", "g"):
            raise FormatError(f"arrow {aid!r}: kind must be 'f' or 'g'")
        gamma.arrows[aid] = Arrow(_field(item, "attach", str, f"arrow {aid!r}"), kind)
        own = "m" if kind == "f" else "l"
        value = _field(item, own, int, f"arrow {aid!r}")
        other = item.get("l" if kind == "f" else "m", 0)
        arrow_m[aid], arrow_l[aid] = (value, other) if kind == "f" else (other, value)
    gamma.validate()

    mp = None
    if "mult" in doc:
        mult = doc["mult"]
        if not isinstance(mult, dict):
            raise FormatError("'mult' must be an object")
        fams = {}
        for name in ("m", "l"):
            fam = mult.get(name)
            if not isinstance(fam, dict):
                raise FormatError(f"'mult' lacks family {name!r}")
            for w in gamma.exceptional:
                if w not in fam:
                    raise ResolutionError(f"missing {name} value for vertex {w!r}")
                if isinstance(fam[w], bool) or not isinstance(fam[w], int):
                    raise FormatError(f"{name} value of {w!r} must be an integer")
            for key in fam:
                if key not in gamma.euler:
                    raise ResolutionError(f"{name} value given for undeclared vertex {key!r}")
            fams[name] = dict(fam)
        mp = MultPair({**fams["m"], **arrow_m}, {**fams["l"], **arrow_l})
        validate_multiplicities(gamma, mp)
        if require_balanced:
            bad = check_balance(gamma, mp)
            if bad:
                w, name, r = bad[0]
                raise ResolutionError(f"unbalanced: {name}-residual {r} at {w!r}")
    return gamma, mp, arrow_m, arrow_l


def dump_resolution(gamma: ResolutionGraph, mp: MultPair | None = None,
                    arrows_m: dict[str, int] | None = None,
                    arrows_l: dict[str, int] | None = None) -> str:
    if mp is not None:
        arrows_m, arrows_l = mp.m, mp.l
    if arrows_m is None or arrows_l is None:
        raise ValueError("arrow values are required")
    doc: dict[str, Any] = {
        "vertices": [{"id": w, "euler": gamma.euler[w]} for w in gamma.exceptional],
        "edges": sorted(sorted(e) for e in gamma.edges),
        "arrows": [
            {"id": a, "attach": gamma.arrows[a].attach, "kind": gamma.arrows[a].kind,
             "m": arrows_m[a], "l": arrows_l[a]}
            for a in sorted(gamma.arrows)
        ],
    }
    if mp is not None:
        doc["mult"] = {
            "m": {w: mp.m[w] for w in gamma.exceptional},
            "l": {w: mp.l[w] for w in gamma.exceptional},
        }
    return _dump(doc)


def serialize_plumbing(out: ConstructionOutput) -> str:
    g, sys = out.graph, out.zsys
    doc = {
        "vertices": [
            {"id": v, "euler": g.euler[v], "genus": g.genus[v], "m": sys.m[v],
             "n": sys.n.get(v, 0), "piece": out.provenance[v].tag() if v in out.provenance else None}
            for v in g.vertices
        ],
        "edges": [{"a": e.a, "b": e.b, "sign": e.sign} for e in g.sorted_edges()],
    }
    return _dump(doc)


def parse_plumbing(text: str) -> ConstructionOutput:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    g = PlumbingGraph()
    sys = MultiplicitySystem()
    prov: dict[str, Piece] = {}
    for i, item in enumerate(_list(doc, "vertices")):
        vid = _field(item, "id", str, f"vertex #{i}")
        where = f"vertex {vid!r}"
        genus = _field(item, "genus", int, where)
        if vid in g:
            raise FormatError(f"duplicate vertex {vid!r}")
        if genus < 0:
            raise FormatError(f"{where}: negative genus")
        g.add_vertex(vid, _field(item, "euler", int, where), genus)
        sys.set(vid, _field(item, "m", int, where), _field(item, "n", int, where))
        tag = item.get("piece")
        if tag is not None:
            try:
                prov[vid] = Piece.from_tag(tag)
            except (ValueError, AttributeError):
                raise FormatError(f"{where}: malformed piece tag {tag!r}") from None
    for i, item in enumerate(_list(doc, "edges")):
        where = f"edge #{i}"
        a = _field(item, "a", str, where)
        b = _field(item, "b", str, where)
        sign = _field(item, "sign", int, where)
        for v in (a, b):
            if v not in g:
                raise FormatError(f"{where}: dangling endpoint {v!r}")
        if a == b:
            raise FormatError(f"{where}: loop at {a!r}")
        if sign not in (1, -1):
            raise FormatError(f"{where}: sign must be +1 or -1")
        g.add_edge(a, b, sign)
    return ConstructionOutput(g, sys, prov)
