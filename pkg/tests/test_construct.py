from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_boundary.cfrac import ncf_expand
from milnor_boundary.construct import (
    ConstructionError,
    ConstructionOutput,
    Piece,
    bridge_id,
    component_id,
    f1_id,
    bridge_edges,
    build_plumbing,
    check_output_identities,
    expected_vertex_count,
    piece_bridge_chain,
    piece_f1_chain,
    piece_g2_star,
    piece_w2_pair,
    verify_z_system,
    z_mult_chain,
)
from milnor_boundary.graph import Edge, graphs_isomorphic, residuals
from milnor_boundary.resolution import (
    Arrow,
    MultPair,
    Partition,
    ResolutionError,
    ResolutionGraph,
    components_gamma1,
    gen_tab,
    partition,
)
from oracles import random_resolution

TAB_RANGE = [(a, b) for a in range(2, 13) for b in range(2, a + 1)]


def one_arrow(m_a: int, m_w: int, l_w: int, kind: str = "f") -> tuple[ResolutionGraph, MultPair]:
    """A single vertex with one arrow; values are set by hand, not balanced."""
    gamma = ResolutionGraph()
    gamma.euler["w"] = -1
    gamma.arrows["a"] = Arrow("w", kind)
    if kind == "f":
        return gamma, MultPair({"w": m_w, "a": m_a}, {"w": l_w, "a": 0})
    return gamma, MultPair({"w": m_w, "a": 0}, {"w": l_w, "a": m_a})


def kinds(out) -> Counter:
    return Counter(p.kind for p in out.provenance.values())


# -- whole constructions -----------------------------------------------------------


def test_tab32_structure(tab32):
    _, _, out = tab32
    g = out.graph
    assert len(g) == 13
    # five component-to-centre edges, four inside the chains, four chain ends to the pair
    assert len(g.edges) == 13
    assert kinds(out) == Counter({"component-piece": 5, "bridge-chain": 6, "w2-pair": 2})
    comps = out.piece_vertices("component-piece")
    assert all(g.euler[v] == -1 and g.genus[v] == 0 for v in comps)
    comp_edges = [e for e in g.edges if {e.a, e.b} & set(comps)]
    assert len(comp_edges) == 5 and all(e.sign == -1 for e in comp_edges)
    assert sorted((g.euler["br.e0.p1+"], g.euler["br.e0.p1-"], g.euler["br.e0.0"],
                   g.euler["br.e1.p1+"], g.euler["br.e1.p1-"], g.euler["br.e1.0"])) == [-3, -2, 0, 0, 2, 3]
    assert (g.euler["G2.v2+"], g.euler["G2.v2-"]) == (-1, 1)
    assert (out.zsys.m["G2.v2+"], out.zsys.m["G2.v2-"]) == (1, 5)
    assert {v: n for v, n in out.zsys.n.items() if n} == {"G2.v2+": -1}


def test_tab75_structure(tab75):
    gamma, _, out = tab75
    assert set(kinds(out)) == {"w2-pair", "g2-star"}
    assert kinds(out)["w2-pair"] == 2 * len(gamma.euler)
    leaves = Counter(p.source for v, p in out.provenance.items() if p.kind == "g2-star" and p.role != "0")
    assert sorted(leaves.values()) == [5, 7]
    plus = [e for e in out.graph.edges if e.a.startswith("G2.") and e.b.startswith("G2.") and e.a.endswith("+")]
    minus = [e for e in out.graph.edges if e.a.startswith("G2.") and e.b.startswith("G2.") and e.a.endswith("-")]
    assert len(plus) == len(minus) == len(gamma.edges)
    assert all(e.sign == 1 for e in plus) and all(e.sign == -1 for e in minus)


def test_omni_pieces(omni):
    gamma, mp, out = omni
    part = partition(gamma, mp)
    assert part.W1 == ("w1", "w2", "w3") and part.A_f1 == ("fA",) and part.A_g2 == ("gD",)
    assert kinds(out) == Counter({"g2-star": 73, "f1-chain": 61, "bridge-chain": 17, "w2-pair": 6,
                                  "component-piece": 1})
    m, n = out.zsys.m, out.zsys.n
    assert (m["f1.fA.0"], m["f1.fA.p1+"], m["f1.fA.p1-"]) == (-30, 0, 30)
    (idx,) = bridge_edges(gamma, part)
    assert (m[f"br.e{idx}.0"], m[f"br.e{idx}.p1+"], m[f"br.e{idx}.p1-"]) == (-30, 0, 30)
    assert {v: x for v, x in n.items() if x} == {"f1.fA.p1+": -1, "G2.w5+": -2}
    (copy,) = out.piece_vertices("component-piece")
    assert (out.graph.euler[copy], out.graph.genus[copy]) == (-90, 17)
    assert sorted(out.graph.euler[f"G2.{w}{s}"] for w in part.W2 for s in "+-") == [-3, -2, -1, 1, 2, 3]


@pytest.mark.parametrize("a, b", TAB_RANGE)
def test_tab_sweep_verifies(a, b):
    gamma, mp = gen_tab(a, b)
    out = build_plumbing(gamma, mp)
    report = verify_z_system(out, gamma, mp)
    assert report.ok, report.summary()
    assert set(residuals(out.graph, out.zsys).values()) == {0}
    assert len(out.graph) == expected_vertex_count(gamma, mp)


def test_build_rejects_bad_input():
    gamma, mp = gen_tab(3, 2)
    mp.m["v2"] += 1
    with pytest.raises(ResolutionError, match="unbalanced"):
        build_plumbing(gamma, mp)
    gamma = ResolutionGraph()
    gamma.euler["w"] = -1
    gamma.arrows["g"] = Arrow("w", "g")
    with pytest.raises(ResolutionError, match="no strict-transform"):
        build_plumbing(gamma, MultPair({"w": 1, "g": 0}, {"w": 1, "g": 1}))


# -- single pieces -------------------------------------------------------------------


def test_f1_chain_shortest():
    gamma, mp = one_arrow(3, 3, 5)
    fr = piece_f1_chain(gamma, mp, "a")
    assert sorted(fr.graph.euler.values()) == [-1, 0, 1]
    assert len(fr.graph) == 3


def test_f1_chain_two_thirds():
    assert ncf_expand(2, 3) == (1, 3)
    gamma, mp = one_arrow(2, 3, 3)
    fr = piece_f1_chain(gamma, mp, "a")
    m = fr.zsys.m
    assert (m["f1.a.p1-"], m["f1.a.p2-"]) == (3, 3)
    assert m["f1.a.0"] == -6
    assert abs(fr.zsys.n["f1.a.p1+"]) == 2


def test_bridge_examples():
    gamma, mp = gen_tab(3, 2)
    part = partition(gamma, mp)
    idx = gamma.edges.index(("v1", "v2"))
    fr = piece_bridge_chain(gamma, mp, idx, part)
    assert len(fr.graph) == 3
    assert sorted(fr.graph.euler.values()) == [-3, 0, 3]
    idx = gamma.edges.index(("v2", "v3"))
    fr = piece_bridge_chain(gamma, mp, idx, part)
    m = fr.zsys.m
    assert sorted(fr.graph.euler.values()) == [-2, 0, 2]
    assert (m[f"br.e{idx}.0"], m[f"br.e{idx}.p1+"], m[f"br.e{idx}.p1-"]) == (-1, 0, 3)
    assert not any(fr.zsys.n.values())


def test_bridge_proportional_anchor():
    gamma = ResolutionGraph()
    gamma.euler.update({"p": -2, "q": -1})
    gamma.edges = [("p", "q")]
    part = Partition(W1=("p",), W2=("q",), A_f1=(), A_f2=(), A_g1=(), A_g2=())
    fr = piece_bridge_chain(gamma, MultPair({"p": 2, "q": 4}, {"p": 3, "q": 6}), 0, part)
    assert fr.zsys.m["br.e0.0"] == 0


def test_w2_pair_examples():
    gamma, mp = gen_tab(3, 2)
    fr = piece_w2_pair(gamma, mp, "v2")
    assert (fr.graph.euler["G2.v2+"], fr.graph.euler["G2.v2-"]) == (-1, 1)
    assert (fr.zsys.m["G2.v2+"], fr.zsys.m["G2.v2-"]) == (1, 5)
    gamma, mp = gen_tab(7, 5)
    out = build_plumbing(gamma, mp)
    bare = [w for w in gamma.euler if not gamma.arrows_at(w, "f")]
    assert bare and all(out.zsys.n[f"G2.{w}+"] == 0 for w in bare)


def test_g2_star_examples(omni):
    gamma, mp = one_arrow(1, 1, 0, kind="g")
    fr = piece_g2_star(gamma, mp, "a")
    assert len(fr.graph) == 2
    assert [e.sign for e in fr.graph.edges] == [-1]
    assert fr.zsys.m == {"g2.a.0": -1, "g2.a.1": 1}

    _, _, out = omni
    star = out.piece_vertices("g2-star")
    assert len(star) == 73
    leaves = [v for v in star if not v.endswith(".0")]
    assert all(out.graph.euler[v] == -1 and out.zsys.m[v] == 1 for v in leaves)


def _component_edge_counts(gamma, mp, out):
    """Per component copy: observed edge counts to each centre, and the expected m_e / d."""
    part = partition(gamma, mp)
    for index, cs in enumerate(components_gamma1(gamma, mp, part)):
        want: Counter = Counter()
        for be in cs.boundary:
            centre = f1_id(be.outer) if be.edge_index is None else bridge_id(be.edge_index)
            want[centre] += be.m_e // cs.d
        for i in range(1, cs.d + 1):
            v = component_id(index, i)
            inc = out.graph.incident(v)
            assert all(e.sign == -1 for e in inc)
            yield Counter(e.other(v) for e in inc), want


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_random_resolutions_build(seed):
    rng = random.Random(seed)
    gamma, mp = random_resolution(rng, blowups=rng.randint(0, 8), f_arrows=rng.randint(1, 3),
                                  g_arrows=rng.randint(1, 3))
    out = build_plumbing(gamma, mp)
    assert verify_z_system(out, gamma, mp).ok
    assert len(out.graph) == expected_vertex_count(gamma, mp)
    for got, want in _component_edge_counts(gamma, mp, out):
        assert got == want
    part = partition(gamma, mp)
    for w in part.W2:
        assert out.zsys.m[f"G2.{w}+"] + out.zsys.m[f"G2.{w}-"] == mp.m[w]
    for v, piece in out.provenance.items():
        if piece.kind == "component-piece" or (piece.kind == "g2-star" and piece.role != "0"):
            assert out.zsys.m[v] == 1


def test_parallel_component_edges():
    # find a random input where some boundary edge needs more than one edge per copy
    for seed in range(500):
        rng = random.Random(seed)
        gamma, mp = random_resolution(rng, blowups=rng.randint(0, 8), f_arrows=rng.randint(1, 3),
                                      g_arrows=rng.randint(1, 3))
        out = build_plumbing(gamma, mp)
        pairs = list(_component_edge_counts(gamma, mp, out))
        if any(n > 1 for _, want in pairs for n in want.values()):
            assert all(got == want for got, want in pairs)
            return
    pytest.fail("no input with m_e / d > 1 in the random corpus")


@pytest.mark.parametrize("a, b", [(3, 2), (7, 5), (5, 3)])
def test_plus_minus_involution(a, b):
    out = build_plumbing(*gen_tab(a, b))
    g = out.graph
    for v, piece in out.provenance.items():
        if piece.kind in ("f1-chain", "bridge-chain", "w2-pair") and v.endswith("+"):
            twin = v[:-1] + "-"
            assert g.euler[twin] == -g.euler[v]
    for e in g.edges:
        if e.a[-1] in "+-" and e.a[-1] == e.b[-1] and e.a[:2] == e.b[:2]:
            twin = (e.a[:-1] + ("-" if e.a[-1] == "+" else "+"), e.b[:-1] + ("-" if e.b[-1] == "+" else "+"))
            signs = {x.sign for x in g.edges if {x.a, x.b} == set(twin)}
            assert signs == {-e.sign}


def test_copy_relabeling_is_isomorphism(tab32):
    _, _, out = tab32
    comps = out.piece_vertices("component-piece")
    by_comp: dict[str, list[str]] = {}
    for v in comps:
        by_comp.setdefault(out.provenance[v].source, []).append(v)
    rng = random.Random(3)
    mapping = {}
    for vs in by_comp.values():
        perm = vs[:]
        rng.shuffle(perm)
        mapping.update(zip(vs, perm))
    assert graphs_isomorphic(out.graph, out.graph.relabel(mapping))


# -- chains and verification ---------------------------------------------------------


def test_z_mult_chain_examples():
    assert z_mult_chain((1, 3), -6, -1).values == (3, 3)
    # T_{3,2} bridge plus side: the far end is v_{w,+} with m = 1
    chain = z_mult_chain((2,), -1, 1, end_value=1)
    assert chain.values == (0,) and chain.dual == 0
    assert z_mult_chain((2, 3, 2), 0, 1, end_value=0).values == (0, 0, 0)
    assert z_mult_chain((2, 3, 2), 0, -1).values == (0, 0, 0)
    with pytest.raises(ConstructionError, match="non-integral"):
        z_mult_chain((2,), 1, 1, end_value=0)


def test_verify_detects_flipped_edge(tab32):
    gamma, mp, out = tab32
    broken = out.graph.copy()
    # both endpoints carry nonzero m, so both residuals move
    i = next(i for i, e in enumerate(broken.edges) if out.zsys.m[e.a] and out.zsys.m[e.b])
    e = broken.edges[i]
    broken.edges[i] = Edge(e.a, e.b, -e.sign)
    bad = ConstructionOutput(broken, out.zsys, out.provenance)
    report = verify_z_system(bad, gamma, mp)
    assert not report.ok
    assert len(report.residual_failures()) >= 2


def test_verify_reports_pass(tab32, tab75):
    for gamma, mp, out in (tab32, tab75):
        report = verify_z_system(out, gamma, mp)
        assert report.ok and report.failures == []
        assert "0 failed" in report.summary()


def test_dual_support_check(tab32):
    _, _, out = tab32
    zsys = out.zsys.copy()
    zsys.n["G2.v2-"] = 4
    report = check_output_identities(ConstructionOutput(out.graph, zsys, out.provenance))
    assert any(c.name == "dual-support" and c.subject == "G2.v2-" for c in report.failures)


def test_piece_tags_round_trip():
    p = Piece("bridge-chain", "e3", "p2+")
    assert Piece.from_tag(p.tag()) == p
    assert Piece.from_tag("component-piece:v1,v3:i2") == Piece("component-piece", "v1,v3", "i2")
    for bad in ("nonsense:x:y", "w2-pair"):
        with pytest.raises(ValueError):
            Piece.from_tag(bad)
