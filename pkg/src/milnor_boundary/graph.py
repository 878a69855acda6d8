"""Decorated plumbing graphs and multiplicity systems.

Vertices carry an Euler number and a genus; edges are kept as a list so that
parallel edges (each with its own sign) survive.  Loops are not allowed.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class Edge(NamedTuple):
    a: str
    b: str
    sign: int

    def other(self, v: str) -> str:
        return self.b if v == self.a else self.a

    def key(self) -> tuple[str, str, int]:
        lo, hi = sorted((self.a, self.b))
        return lo, hi, self.sign


class GraphError(ValueError):
    pass


class IsomorphismSearchAborted(RuntimeError):
    pass


@dataclass
class PlumbingGraph:
    euler: dict[str, int] = field(default_factory=dict)
    genus: dict[str, int] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    def add_vertex(self, v: str, euler: int, genus: int = 0) -> None:
        if v in self.euler:
            raise GraphError(f"duplicate vertex {v!r}")
        if genus < 0:
            raise GraphError(f"negative genus at {v!r}")
        self.euler[v] = euler
        self.genus[v] = genus

    def add_edge(self, a: str, b: str, sign: int = 1, count: int = 1) -> None:
        if a == b:
            raise GraphError(f"loop at {a!r}")
        for v in (a, b):
            if v not in self.euler:
                raise GraphError(f"edge endpoint {v!r} is not a vertex")
        if sign not in (1, -1):
            raise GraphError(f"edge sign must be +1 or -1, got {sign}")
        self.edges.extend(Edge(a, b, sign) for _ in range(count))

    @property
    def vertices(self) -> list[str]:
        return sorted(self.euler)

    def __contains__(self, v: object) -> bool:
        return v in self.euler

    def __len__(self) -> int:
        return len(self.euler)

    def adjacency(self) -> dict[str, list[tuple[int, str]]]:
        """Map each vertex to its ``(sign, neighbour)`` pairs, one per edge."""
        adj: dict[str, list[tuple[int, str]]] = {v: [] for v in self.euler}
        for e in self.edges:
            adj[e.a].append((e.sign, e.b))
            adj[e.b].append((e.sign, e.a))
        return adj

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in (e.a, e.b)]

    def copy(self) -> PlumbingGraph:
        return PlumbingGraph(dict(self.euler), dict(self.genus), list(self.edges))

    def relabel(self, mapping: dict[str, str]) -> PlumbingGraph:
        out = PlumbingGraph()
        for v in self.euler:
            out.add_vertex(mapping.get(v, v), self.euler[v], self.genus[v])
        for e in self.edges:
            out.add_edge(mapping.get(e.a, e.a), mapping.get(e.b, e.b), e.sign)
        return out

    def sorted_edges(self) -> list[Edge]:
        return [Edge(*k) for k in sorted(e.key() for e in self.edges)]


@dataclass
class MultiplicitySystem:
    """Multiplicities ``m`` and dual multiplicities ``n`` of a function."""

    m: dict[str, int] = field(default_factory=dict)
    n: dict[str, int] = field(default_factory=dict)

    def set(self, v: str, m: int, n: int = 0) -> None:
        self.m[v] = m
        self.n[v] = n

    def __add__(self, other: MultiplicitySystem) -> MultiplicitySystem:
        keys = set(self.m) | set(other.m)
        return MultiplicitySystem(
            {v: self.m.get(v, 0) + other.m.get(v, 0) for v in keys},
            {v: self.n.get(v, 0) + other.n.get(v, 0) for v in keys},
        )

    def copy(self) -> MultiplicitySystem:
        return MultiplicitySystem(dict(self.m), dict(self.n))

    def covers(self, vertices: Iterable[str]) -> list[str]:
        """Return the vertices lacking an ``m`` value."""
        return [v for v in vertices if v not in self.m]


def top_ident_residual(g: PlumbingGraph, sys: MultiplicitySystem, v: str) -> int:
    """``euler_v * m_v + sum(sign_e * m_other(e)) - n_v``; zero when the identity holds."""
    if v not in g:
        raise GraphError(f"unknown vertex {v!r}")
    total = g.euler[v] * sys.m[v] - sys.n.get(v, 0)
    for e in g.edges:
        if e.a == v:
            total += e.sign * sys.m[e.b]
        elif e.b == v:
            total += e.sign * sys.m[e.a]
    return total


def residuals(g: PlumbingGraph, sys: MultiplicitySystem) -> dict[str, int]:
    """The residual of :func:`top_ident_residual` at every vertex, in one pass."""
    res = {v: g.euler[v] * sys.m[v] - sys.n.get(v, 0) for v in g.euler}
    for e in g.edges:
        res[e.a] += e.sign * sys.m[e.b]
        res[e.b] += e.sign * sys.m[e.a]
    return res


# --------------------------------------------------------------------------
# isomorphism
# --------------------------------------------------------------------------


def _edge_profile(g: PlumbingGraph) -> dict[tuple[str, str], tuple[int, int]]:
    counts: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for e in g.edges:
        key = (e.a, e.b) if e.a < e.b else (e.b, e.a)
        counts[key][0 if e.sign > 0 else 1] += 1
    return {k: (p, q) for k, (p, q) in counts.items()}


def _refine_colours(graphs: list[PlumbingGraph]) -> list[dict[str, int]]:
    """Colour refinement run jointly so colour ids are comparable across graphs."""
    adjs = [g.adjacency() for g in graphs]
    colours = [{v: (g.euler[v], g.genus[v]) for v in g.euler} for g in graphs]
    palette: dict[object, int] = {}
    current = [{v: palette.setdefault(c, len(palette)) for v, c in col.items()} for col in colours]
    n_classes = len(palette)
    while True:
        palette = {}
        nxt = []
        for col, adj in zip(current, adjs):
            sig = {
                v: (col[v], tuple(sorted((s, col[u]) for s, u in adj[v])))
                for v in col
            }
            nxt.append({v: palette.setdefault(s, len(palette)) for v, s in sig.items()})
        current = nxt
        if len(palette) == n_classes:
            return current
        n_classes = len(palette)


def graphs_isomorphic(g1: PlumbingGraph, g2: PlumbingGraph, max_nodes: int = 200_000) -> bool:
    """Decide whether a decoration- and sign-preserving vertex bijection exists.

    Backtracking over candidates of equal refined colour, checking signed
    edge multiplicities against every already-mapped vertex.  Raises
    :class:`IsomorphismSearchAborted` after ``max_nodes`` search nodes.
    """
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges):
        return False
    col1, col2 = _refine_colours([g1, g2])
    if Counter(col1.values()) != Counter(col2.values()):
        return False
    prof1, prof2 = _edge_profile(g1), _edge_profile(g2)
    adj1 = {v: sorted({u for _, u in nbrs}) for v, nbrs in g1.adjacency().items()}
    by_colour: dict[int, list[str]] = defaultdict(list)
    for v in sorted(col2):
        by_colour[col2[v]].append(v)
    class_size = Counter(col1.values())

    # connectivity-first order: next vertex has the most mapped neighbours
    order: list[str] = []
    placed: set[str] = set()
    remaining = set(g1.euler)
    while remaining:
        best = min(
            remaining,
            key=lambda v: (-sum(u in placed for u in adj1[v]), class_size[col1[v]], v),
        )
        order.append(best)
        placed.add(best)
        remaining.discard(best)

    mapping: dict[str, str] = {}
    used: set[str] = set()
    nodes = 0

    def consistent(v: str, w: str) -> bool:
        for u, x in mapping.items():
            a = prof1.get((u, v) if u < v else (v, u), (0, 0))
            b = prof2.get((x, w) if x < w else (w, x), (0, 0))
            if a != b:
                return False
        return True

    def extend(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        v = order[i]
        for w in by_colour[col1[v]]:
            if w in used:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise IsomorphismSearchAborted(f"gave up after {max_nodes} search nodes")
            if not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0)


# --------------------------------------------------------------------------
# DOT export
# --------------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def vertex_label(g: PlumbingGraph, v: str, sys: MultiplicitySystem | None = None) -> str:
    label = str(g.euler[v])
    if g.genus[v]:
        label += f" [{g.genus[v]}]"
    if sys is not None:
        label += f" ({sys.m[v]})"
    return label


def export_dot(g: PlumbingGraph, sys: MultiplicitySystem | None = None, name: str = "G") -> str:
    """Render ``g`` as an undirected DOT graph.

    Negative edges are dashed and labelled with a circled minus.  A nonzero
    dual multiplicity becomes a dashed arrow to a bare leaf labelled ``(n)``.
    """
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle];"]
    for v in g.vertices:
        lines.append(f"  {_quote(v)} [label={_quote(vertex_label(g, v, sys))}];")
        if sys is not None and sys.n.get(v, 0):
            leaf = _quote(v + "#n")
            lines.append(f"  {leaf} [shape=none, label={_quote(f'({sys.n[v]})')}];")
            lines.append(f"  {_quote(v)} -- {leaf} [style=dashed, dir=forward];")
    for e in g.sorted_edges():
        attrs = ' [style=dashed, label="⊖"]' if e.sign < 0 else ""
        lines.append(f"  {_quote(e.a)} -- {_quote(e.b)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
