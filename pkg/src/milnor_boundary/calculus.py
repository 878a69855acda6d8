"""The two plumbing moves used to simplify constructed graphs.

Both moves act on copies and carry an optional multiplicity system along so
that the residual identity keeps holding at every surviving vertex.
"""

from __future__ import annotations

from .graph import Edge, GraphError, MultiplicitySystem, PlumbingGraph


class CalculusError(ValueError):
    pass


def flip_signs_at(
    g: PlumbingGraph, sys: MultiplicitySystem | None, v: str
) -> tuple[PlumbingGraph, MultiplicitySystem | None]:
    """Reverse the orientation of the piece at ``v``.

    Every edge at ``v`` changes sign, and so do ``m_v`` and ``n_v``.
    """
    if v not in g:
        raise GraphError(f"unknown vertex {v!r}")
    out = g.copy()
    out.edges = [Edge(e.a, e.b, -e.sign) if v in (e.a, e.b) else e for e in g.edges]
    if sys is None:
        return out, None
    new = sys.copy()
    new.m[v] = -sys.m[v]
    new.n[v] = -sys.n.get(v, 0)
    return out, new


def blowdown_obstruction(g: PlumbingGraph, sys: MultiplicitySystem | None, v: str) -> str | None:
    """Why ``v`` cannot be blown down, or None if it can."""
    if v not in g:
        return f"unknown vertex {v!r}"
    if g.genus[v] != 0:
        return f"{v!r} has genus {g.genus[v]}"
    if g.euler[v] not in (1, -1):
        return f"{v!r} has Euler number {g.euler[v]}"
    inc = g.incident(v)
    if len(inc) > 2:
        return f"{v!r} has {len(inc)} edges"
    if len(inc) == 2 and inc[0].other(v) == inc[1].other(v):
        return f"both edges at {v!r} go to {inc[0].other(v)!r}"
    if sys is not None and sys.n.get(v, 0):
        return f"{v!r} carries dual multiplicity {sys.n[v]}"
    return None


def blow_down(
    g: PlumbingGraph, sys: MultiplicitySystem | None, v: str
) -> tuple[PlumbingGraph, MultiplicitySystem | None]:
    """Remove a genus-0 vertex of Euler number ``eps = +-1`` with at most two edges.

    Each former neighbour's Euler number drops by ``eps``; two former
    neighbours joined through edges of signs ``s1``, ``s2`` get a new edge of
    sign ``-eps * s1 * s2``.
    """
    why = blowdown_obstruction(g, sys, v)
    if why:
        raise CalculusError(f"cannot blow down: {why}")
    eps = g.euler[v]
    inc = g.incident(v)
    out = PlumbingGraph(
        {u: e for u, e in g.euler.items() if u != v},
        {u: x for u, x in g.genus.items() if u != v},
        [e for e in g.edges if v not in (e.a, e.b)],
    )
    for e in inc:
        out.euler[e.other(v)] -= eps
    if len(inc) == 2:
        out.add_edge(inc[0].other(v), inc[1].other(v), -eps * inc[0].sign * inc[1].sign)
    if sys is None:
        return out, None
    new = sys.copy()
    del new.m[v]
    new.n.pop(v, None)
    return out, new


def normalize(
    g: PlumbingGraph, sys: MultiplicitySystem | None = None
) -> tuple[PlumbingGraph, MultiplicitySystem | None]:
    """Blow down the smallest eligible vertex until none is left."""
    while True:
        adj = g.adjacency()
        target = None
        for v in g.vertices:
            if g.genus[v] or g.euler[v] not in (1, -1) or len(adj[v]) > 2:
                continue
            if len(adj[v]) == 2 and adj[v][0][1] == adj[v][1][1]:
                continue
            if sys is not None and sys.n.get(v, 0):
                continue
            target = v
            break
        if target is None:
            return g, sys
        g, sys = blow_down(g, sys, target)
