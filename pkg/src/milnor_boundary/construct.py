"""Plumbing graph and multiplicities of ``z`` built from a resolution of ``f``, ``g``.

The output graph is assembled from five families of pieces:

* ``component-piece``: ``d`` parallel copies of a surface vertex per
  connected component of the ``m <= l`` part of the resolution graph;
* ``f1-chain``: two strings and a centre per ``f``-arrow on the ``m <= l`` part;
* ``bridge-chain``: the same shape per edge crossing from ``m <= l`` to ``m > l``;
* ``w2-pair``: a ``+`` and a ``-`` copy of every ``m > l`` vertex;
* ``g2-star``: a centre with ``m_w`` leaves per ``g``-arrow on the ``m > l`` part.

Chain multiplicities are obtained by solving the tridiagonal system the
residual identity imposes along each string, never from closed forms; the
closed forms are only used as cross-checks by :func:`verify_z_system`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cfrac import ncf_convergents, ncf_expand
from .graph import Edge, MultiplicitySystem, PlumbingGraph, residuals
from .resolution import (
    ComponentSummary,
    MultPair,
    Partition,
    ResolutionError,
    ResolutionGraph,
    check_balance,
    components_gamma1,
    partition,
    validate_multiplicities,
)

PIECE_KINDS = ("component-piece", "f1-chain", "bridge-chain", "w2-pair", "g2-star")


class ConstructionError(RuntimeError):
    def __init__(self, message: str, report: VerificationReport | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Piece:
    """Which piece a vertex belongs to, the resolution object it came from, and its slot."""

    kind: str
    source: str
    role: str

    def tag(self) -> str:
        return f"{self.kind}:{self.source}:{self.role}"

    @classmethod
    def from_tag(cls, tag: str) -> Piece:
        kind, _, rest = tag.partition(":")
        source, sep, role = rest.rpartition(":")
        if kind not in PIECE_KINDS or not sep:
            raise ValueError(f"malformed piece tag {tag!r}")
        return cls(kind, source, role)


@dataclass
class Fragment:
    graph: PlumbingGraph = field(default_factory=PlumbingGraph)
    zsys: MultiplicitySystem = field(default_factory=MultiplicitySystem)
    provenance: dict[str, Piece] = field(default_factory=dict)

    def add(self, v: str, euler: int, piece: Piece, m: int, n: int = 0, genus: int = 0) -> None:
        self.graph.add_vertex(v, euler, genus)
        self.zsys.set(v, m, n)
        self.provenance[v] = piece

    def absorb(self, other: Fragment) -> None:
        for v in other.graph.euler:
            self.add(v, other.graph.euler[v], other.provenance[v], other.zsys.m[v],
                     other.zsys.n[v], other.graph.genus[v])
        self.graph.edges.extend(other.graph.edges)


@dataclass
class ConstructionOutput:
    graph: PlumbingGraph
    zsys: MultiplicitySystem
    provenance: dict[str, Piece]

    def piece_vertices(self, kind: str) -> list[str]:
        return sorted(v for v, p in self.provenance.items() if p.kind == kind)


# --------------------------------------------------------------------------
# vertex naming
# --------------------------------------------------------------------------


def component_id(index: int, i: int) -> str:
    return f"G1.c{index}.i{i}"


def f1_id(arrow: str, i: int | None = None, side: str = "") -> str:
    return f"f1.{arrow}.0" if i is None else f"f1.{arrow}.p{i}{side}"


def bridge_id(edge_index: int, i: int | None = None, side: str = "") -> str:
    return f"br.e{edge_index}.0" if i is None else f"br.e{edge_index}.p{i}{side}"


def w2_id(w: str, side: str) -> str:
    return f"G2.{w}{side}"


def g2_id(arrow: str, i: int) -> str:
    return f"g2.{arrow}.{i}"


SIDES = (("+", 1), ("-", -1))


# --------------------------------------------------------------------------
# chains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainValues:
    """Multiplicities ``x_1..x_s`` along one string and the dual multiplicity at ``x_1``."""

    values: tuple[int, ...]
    dual: int


def _solve_tridiagonal(sub: list, diag: list, sup: list, rhs: list) -> list[Fraction]:
    n = len(diag)
    cp: list[Fraction] = [Fraction(0)] * n
    dp: list[Fraction] = [Fraction(0)] * n
    for i in range(n):
        denom = Fraction(diag[i]) - (sub[i] * cp[i - 1] if i else 0)
        if denom == 0:
            raise ConstructionError("singular chain system")
        cp[i] = Fraction(sup[i]) / denom if i < n - 1 else Fraction(0)
        dp[i] = (rhs[i] - (sub[i] * dp[i - 1] if i else 0)) / denom
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = dp[i] - (cp[i] * x[i + 1] if i < n - 1 else 0)
    return x


def _chain_solution(terms: tuple[int, ...], anchor: int, side: int,
                    end_value: int | None, end_dual) -> list[Fraction]:
    s = len(terms)
    if s == 0:
        raise ConstructionError("empty chain")
    diag = [-side * k for k in terms]
    rhs = [Fraction(0)] * s
    rhs[-1] -= anchor
    if end_value is None:
        rhs[0] += end_dual
    else:
        rhs[0] -= side * end_value
    return _solve_tridiagonal([side] * s, diag, [side] * s, rhs)


def z_mult_chain(
    terms: tuple[int, ...],
    anchor: int,
    side: int,
    end_value: int | None = None,
    end_dual: int = 0,
) -> ChainValues:
    """Solve the residual identity along the string ``v_1 - ... - v_s - v_0``.

    ``v_i`` has Euler number ``-side * k_i``; consecutive string vertices are
    joined by edges of sign ``side`` and ``v_s`` by a positive edge to the
    centre ``v_0``, whose multiplicity is ``anchor``.  Beyond ``v_1`` there is
    either a vertex of known multiplicity ``end_value`` joined by an edge of
    sign ``side`` (dual multiplicity zero at ``v_1``), or nothing, in which
    case ``end_dual`` is the prescribed dual multiplicity at ``v_1``.
    """
    sol = _chain_solution(terms, anchor, side, end_value, end_dual)
    bad = [x for x in sol if x.denominator != 1]
    if bad:
        raise ConstructionError(f"non-integral chain multiplicity {bad[0]}: inconsistent anchors")
    dual = end_dual if end_value is None else 0
    return ChainValues(tuple(int(x) for x in sol), dual)


def _chain_fragment(fr: Fragment, name, piece_of, terms, values: dict[int, ChainValues], centre_m: int) -> None:
    s = len(terms)
    fr.add(name(None, ""), 0, piece_of("0"), centre_m)
    for label, sign in SIDES:
        chain = values[sign]
        for i, k in enumerate(terms, start=1):
            n = chain.dual if i == 1 else 0
            fr.add(name(i, label), -sign * k, piece_of(f"p{i}{label}"), chain.values[i - 1], n)
        for i in range(1, s):
            fr.graph.add_edge(name(i, label), name(i + 1, label), sign)
        fr.graph.add_edge(name(s, label), name(None, ""), 1)


# --------------------------------------------------------------------------
# the five pieces
# --------------------------------------------------------------------------


def piece_component(cs: ComponentSummary, index: int) -> Fragment:
    fr = Fragment()
    for i in range(1, cs.d + 1):
        fr.add(component_id(index, i), cs.euler, Piece("component-piece", cs.name, f"i{i}"), 1,
               genus=cs.genus)
    return fr


def piece_f1_chain(gamma: ResolutionGraph, mp: MultPair, arrow: str) -> Fragment:
    w = gamma.arrows[arrow].attach
    m_a, m_w, l_w = mp.m[arrow], mp.m[w], mp.l[w]
    m_e = gcd(m_a, m_w)
    ma_t, mw_t = m_a // m_e, m_w // m_e
    terms = ncf_expand(ma_t, mw_t)
    anchor = -ma_t * l_w
    minus = z_mult_chain(terms, anchor, -1, end_dual=0)
    # the centre identity forces x_s + y_s = m_e (the m_e component edges carry m = 1);
    # x_s is affine in the free-end dual, which fixes it
    base = _chain_solution(terms, anchor, 1, None, 0)[-1]
    slope = _chain_solution(terms, anchor, 1, None, 1)[-1] - base
    dual = (m_e - minus.values[-1] - base) / slope
    if dual.denominator != 1:
        raise ConstructionError(f"non-integral dual multiplicity {dual} on the chain of {arrow!r}")
    plus = z_mult_chain(terms, anchor, 1, end_dual=int(dual))
    fr = Fragment()
    _chain_fragment(
        fr,
        lambda i, side: f1_id(arrow, i, side),
        lambda role: Piece("f1-chain", arrow, role),
        terms,
        {1: plus, -1: minus},
        anchor,
    )
    return fr


def piece_bridge_chain(gamma: ResolutionGraph, mp: MultPair, edge_index: int, part: Partition) -> Fragment:
    v1, v2 = gamma.edges[edge_index]
    if v1 not in part.W1:
        v1, v2 = v2, v1
    if v1 not in part.W1 or v2 not in part.W2:
        raise ConstructionError(f"edge {v1!r}-{v2!r} does not cross the partition")
    m1, l1, m2, l2 = mp.m[v1], mp.l[v1], mp.m[v2], mp.l[v2]
    g = gcd(m1, m2)
    t1, t2 = m1 // g, m2 // g
    terms = ncf_expand(t2, t1)
    anchor = t1 * l2 - t2 * l1
    plus = z_mult_chain(terms, anchor, 1, end_value=m2 - l2)
    minus = z_mult_chain(terms, anchor, -1, end_value=l2)
    fr = Fragment()
    _chain_fragment(
        fr,
        lambda i, side: bridge_id(edge_index, i, side),
        lambda role: Piece("bridge-chain", f"{v1}~{v2}", role),
        terms,
        {1: plus, -1: minus},
        anchor,
    )
    return fr


def piece_w2_pair(gamma: ResolutionGraph, mp: MultPair, w: str) -> Fragment:
    """The two copies of ``w``; dual multiplicities are filled in after assembly."""
    fr = Fragment()
    fr.add(w2_id(w, "+"), gamma.euler[w], Piece("w2-pair", w, "+"), mp.m[w] - mp.l[w])
    fr.add(w2_id(w, "-"), -gamma.euler[w], Piece("w2-pair", w, "-"), mp.l[w])
    return fr


def piece_g2_star(gamma: ResolutionGraph, mp: MultPair, arrow: str) -> Fragment:
    w = gamma.arrows[arrow].attach
    l_a = mp.l[arrow]
    fr = Fragment()
    centre = g2_id(arrow, 0)
    fr.add(centre, 0, Piece("g2-star", arrow, "0"), -l_a)
    for i in range(1, mp.m[w] + 1):
        fr.add(g2_id(arrow, i), -l_a, Piece("g2-star", arrow, str(i)), 1)
        fr.graph.add_edge(centre, g2_id(arrow, i), -1)
    return fr


def bridge_edges(gamma: ResolutionGraph, part: Partition) -> list[int]:
    first, second = set(part.W1), set(part.W2)
    return [
        i for i, (a, b) in enumerate(gamma.edges)
        if (a in first and b in second) or (a in second and b in first)
    ]


def attach_pieces(
    gamma: ResolutionGraph,
    part: Partition,
    comps: list[ComponentSummary],
) -> list[Edge]:
    edges: list[Edge] = []
    for index, cs in enumerate(comps):
        for be in cs.boundary:
            if be.m_e % cs.d:
                raise ConstructionError(f"d = {cs.d} does not divide m_e = {be.m_e} on {be.inner!r}-{be.outer!r}")
            bundle = be.m_e // cs.d
            target = f1_id(be.outer) if be.edge_index is None else bridge_id(be.edge_index)
            for i in range(1, cs.d + 1):
                edges.extend(Edge(component_id(index, i), target, -1) for _ in range(bundle))
            if be.edge_index is not None:
                for label, sign in SIDES:
                    edges.append(Edge(bridge_id(be.edge_index, 1, label), w2_id(be.outer, label), sign))
    second = set(part.W2)
    for a, b in gamma.edges:
        if a in second and b in second:
            for label, sign in SIDES:
                edges.append(Edge(w2_id(a, label), w2_id(b, label), sign))
    for arrow in part.A_g2:
        w = gamma.arrows[arrow].attach
        for label, _ in SIDES:
            edges.append(Edge(g2_id(arrow, 0), w2_id(w, label), 1))
    return edges


def build_plumbing(gamma: ResolutionGraph, mp: MultPair) -> ConstructionOutput:
    gamma.validate()
    if not gamma.arrows_of("f"):
        raise ResolutionError("f has no strict-transform branches")
    validate_multiplicities(gamma, mp)
    bad = check_balance(gamma, mp)
    if bad:
        w, fam, r = bad[0]
        raise ResolutionError(f"unbalanced input: {fam}-residual {r} at {w!r}")

    part = partition(gamma, mp)
    comps = components_gamma1(gamma, mp, part)
    fr = Fragment()
    for index, cs in enumerate(comps):
        fr.absorb(piece_component(cs, index))
    for arrow in part.A_f1:
        fr.absorb(piece_f1_chain(gamma, mp, arrow))
    for idx in bridge_edges(gamma, part):
        fr.absorb(piece_bridge_chain(gamma, mp, idx, part))
    for w in part.W2:
        fr.absorb(piece_w2_pair(gamma, mp, w))
    for arrow in part.A_g2:
        fr.absorb(piece_g2_star(gamma, mp, arrow))
    for e in attach_pieces(gamma, part, comps):
        fr.graph.add_edge(e.a, e.b, e.sign)

    res = residuals(fr.graph, fr.zsys)
    for w in part.W2:
        fr.zsys.n[w2_id(w, "+")] = res[w2_id(w, "+")]

    out = ConstructionOutput(fr.graph, fr.zsys, fr.provenance)
    report = verify_z_system(out, gamma, mp)
    if not report.ok:
        first = report.failures[0]
        raise ConstructionError(f"verification failed: {first.name} at {first.subject}: {first.detail}", report)
    return out


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    subject: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, subject: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, subject, bool(ok), detail))

    def expect(self, name: str, subject: str, got, want) -> None:
        self.add(name, subject, got == want, f"got {got}, expected {want}")

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def residual_failures(self) -> list[Check]:
        return [c for c in self.failures if c.name == "residual"]

    def summary(self) -> str:
        lines = [f"{len(self.checks)} checks, {len(self.failures)} failed"]
        lines += [f"FAIL {c.name} {c.subject}: {c.detail}" for c in self.failures]
        return "\n".join(lines)


def check_output_identities(out: ConstructionOutput) -> VerificationReport:
    """Checks that need only the output: residuals and where duals may live."""
    report = VerificationReport()
    g, sys = out.graph, out.zsys
    missing = sys.covers(g.vertices)
    for v in missing:
        report.add("coverage", v, False, "no multiplicity")
    if missing:
        return report
    res = residuals(g, sys)
    for v in g.vertices:
        report.add("residual", v, res[v] == 0, f"residual {res[v]}")
    for v in g.vertices:
        piece = out.provenance.get(v)
        allowed = piece is not None and (
            (piece.kind == "f1-chain" and piece.role == "p1+")
            or (piece.kind == "w2-pair" and piece.role == "+")
        )
        if sys.n.get(v, 0) and not allowed:
            report.add("dual-support", v, False, f"nonzero dual {sys.n[v]}")
    report.add("dual-support", "all", not any(c.name == "dual-support" for c in report.checks))
    return report


def verify_z_system(out: ConstructionOutput, gamma: ResolutionGraph, mp: MultPair) -> VerificationReport:
    """Residual identity everywhere plus the per-piece values known in closed form."""
    report = check_output_identities(out)
    if any(c.name == "coverage" for c in report.checks):
        return report
    m, n = out.zsys.m, out.zsys.n
    part = partition(gamma, mp)

    def value(table, v):
        return table.get(v, "missing")

    for index, cs in enumerate(components_gamma1(gamma, mp, part)):
        for i in range(1, cs.d + 1):
            report.expect("component-m", component_id(index, i), value(m, component_id(index, i)), 1)

    for arrow in part.A_f1:
        w = gamma.arrows[arrow].attach
        m_a, m_w, l_w = mp.m[arrow], mp.m[w], mp.l[w]
        g = gcd(m_a, m_w)
        terms = ncf_expand(m_a // g, m_w // g)
        conv = ncf_convergents(terms)
        report.expect("f1-anchor", f1_id(arrow), value(m, f1_id(arrow)), -(m_a // g) * l_w)
        top = f1_id(arrow, 1, "+")
        report.expect("f1-dual", top, abs(n.get(top, 0)), m_a)
        for i in range(1, len(terms) + 1):
            report.expect("f1-minus-closed-form", f1_id(arrow, i, "-"),
                          value(m, f1_id(arrow, i, "-")), l_w * conv.mu[i])
            report.expect("f1-plus-closed-form", f1_id(arrow, i, "+"),
                          value(m, f1_id(arrow, i, "+")), (m_w - l_w) * conv.mu[i] - m_a * conv.mu_tilde[i])

    for idx in bridge_edges(gamma, part):
        v1, v2 = gamma.edges[idx]
        if v1 not in part.W1:
            v1, v2 = v2, v1
        m1, l1, m2, l2 = mp.m[v1], mp.l[v1], mp.m[v2], mp.l[v2]
        g = gcd(m1, m2)
        terms = ncf_expand(m2 // g, m1 // g)
        conv = ncf_convergents(terms)
        report.expect("bridge-anchor", bridge_id(idx), value(m, bridge_id(idx)), (m1 // g) * l2 - (m2 // g) * l1)
        report.expect("bridge-end+", bridge_id(idx, 1, "+"), value(m, bridge_id(idx, 1, "+")), m1 - l1)
        report.expect("bridge-end-", bridge_id(idx, 1, "-"), value(m, bridge_id(idx, 1, "-")), l1)
        for i in range(1, len(terms) + 1):
            report.expect("bridge-closed-form", bridge_id(idx, i, "+"), value(m, bridge_id(idx, i, "+")),
                          (m1 - l1) * conv.mu[i] - (m2 - l2) * conv.mu_tilde[i])
            report.expect("bridge-closed-form", bridge_id(idx, i, "-"), value(m, bridge_id(idx, i, "-")),
                          l1 * conv.mu[i] - l2 * conv.mu_tilde[i])

    for w in part.W2:
        plus, minus = w2_id(w, "+"), w2_id(w, "-")
        report.expect("w2-m+", plus, value(m, plus), mp.m[w] - mp.l[w])
        report.expect("w2-m-", minus, value(m, minus), mp.l[w])
        report.expect("w2-dual", plus, abs(n.get(plus, 0)), sum(mp.m[a] for a in gamma.arrows_at(w, "f")))

    for arrow in part.A_g2:
        report.expect("g2-centre", g2_id(arrow, 0), value(m, g2_id(arrow, 0)), -mp.l[arrow])
        w = gamma.arrows[arrow].attach
        for i in range(1, mp.m[w] + 1):
            report.expect("g2-leaf", g2_id(arrow, i), value(m, g2_id(arrow, i)), 1)
    return report


def expected_vertex_count(gamma: ResolutionGraph, mp: MultPair) -> int:
    """Vertex count predicted from the resolution data alone."""
    part = partition(gamma, mp)
    total = sum(cs.d for cs in components_gamma1(gamma, mp, part))
    for arrow in part.A_f1:
        w = gamma.arrows[arrow].attach
        g = gcd(mp.m[arrow], mp.m[w])
        total += 2 * len(ncf_expand(mp.m[arrow] // g, mp.m[w] // g)) + 1
    for idx in bridge_edges(gamma, part):
        a, b = gamma.edges[idx]
        v1, v2 = (a, b) if a in part.W1 else (b, a)
        g = gcd(mp.m[v1], mp.m[v2])
        total += 2 * len(ncf_expand(mp.m[v2] // g, mp.m[v1] // g)) + 1
    total += 2 * len(part.W2)
    total += sum(mp.m[gamma.arrows[a].attach] + 1 for a in part.A_g2)
    return total
