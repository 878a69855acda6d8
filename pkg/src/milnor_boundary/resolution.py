"""Embedded resolution graphs of a pair of plane curve germs ``f``, ``g``.

Exceptional vertices carry Euler numbers; arrowheads mark branches of the
strict transforms of ``f`` (kind ``"f"``) and ``g`` (kind ``"g"``).  The two
multiplicity families ``m`` (of ``f``) and ``l`` (of ``g``) live on all
vertices, arrowheads included, where an arrowhead value is the multiplicity
of the corresponding branch.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Literal

FAMILIES = ("m", "l")


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    attach: str
    kind: Literal["f", "g"]


@dataclass
class ResolutionGraph:
    euler: dict[str, int] = field(default_factory=dict)
    arrows: dict[str, Arrow] = field(default_factory=dict)
    edges: list[tuple[str, str]] = field(default_factory=list)

    @property
    def exceptional(self) -> list[str]:
        return sorted(self.euler)

    @property
    def vertices(self) -> list[str]:
        return sorted(set(self.euler) | set(self.arrows))

    def arrows_of(self, kind: str) -> list[str]:
        return sorted(a for a, arr in self.arrows.items() if arr.kind == kind)

    def arrows_at(self, w: str, kind: str | None = None) -> list[str]:
        return sorted(
            a for a, arr in self.arrows.items()
            if arr.attach == w and (kind is None or arr.kind == kind)
        )

    def w_neighbours(self) -> dict[str, list[str]]:
        """Exceptional neighbours of each exceptional vertex, one entry per edge."""
        nbrs: dict[str, list[str]] = {w: [] for w in self.euler}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return nbrs

    def validate(self) -> None:
        """Raise :class:`ResolutionError` naming the first structural defect."""
        clash = set(self.euler) & set(self.arrows)
        if clash:
            raise ResolutionError(f"identifier used for both a vertex and an arrow: {sorted(clash)[0]!r}")
        if not self.euler:
            raise ResolutionError("resolution graph has no exceptional vertices")
        for a, arr in sorted(self.arrows.items()):
            if arr.kind not in ("f", "g"):
                raise ResolutionError(f"arrow {a!r} has unknown kind {arr.kind!r}")
            if arr.attach not in self.euler:
                raise ResolutionError(f"arrow {a!r} attaches to unknown vertex {arr.attach!r}")
        for a, b in self.edges:
            for v in (a, b):
                if v in self.arrows:
                    raise ResolutionError(f"arrowhead {v!r} has more than one edge")
                if v not in self.euler:
                    raise ResolutionError(f"dangling edge {a!r}-{b!r}: {v!r} is not declared")
            if a == b:
                raise ResolutionError(f"loop at {a!r}")
        nbrs = self.w_neighbours()
        start = self.exceptional[0]
        seen = {start}
        stack = [start]
        while stack:
            for u in nbrs[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        missing = sorted(set(self.euler) - seen)
        if missing:
            raise ResolutionError(f"graph is disconnected: {missing[0]!r} unreachable from {start!r}")


@dataclass
class MultPair:
    m: dict[str, int] = field(default_factory=dict)
    l: dict[str, int] = field(default_factory=dict)

    def family(self, name: str) -> dict[str, int]:
        return self.m if name == "m" else self.l


def validate_multiplicities(gamma: ResolutionGraph, mp: MultPair) -> None:
    """Coverage and sign checks; balance is left to :func:`check_balance`."""
    for name in FAMILIES:
        fam = mp.family(name)
        for v in gamma.vertices:
            if v not in fam:
                raise ResolutionError(f"missing {name} value for {v!r}")
    for w in gamma.exceptional:
        if mp.m[w] < 1 or mp.l[w] < 1:
            raise ResolutionError(f"exceptional vertex {w!r} needs m, l >= 1, got ({mp.m[w]}, {mp.l[w]})")
    for a, arr in gamma.arrows.items():
        own, other = ("m", "l") if arr.kind == "f" else ("l", "m")
        if mp.family(own)[a] < 1:
            raise ResolutionError(f"{arr.kind}-arrow {a!r} needs {own} >= 1")
        if mp.family(other)[a] != 0:
            raise ResolutionError(f"{arr.kind}-arrow {a!r} needs {other} = 0")


def check_balance(gamma: ResolutionGraph, mp: MultPair) -> list[tuple[str, str, int]]:
    """Nonzero residuals ``(vertex, family, residual)`` of the balance relations."""
    nbrs = gamma.w_neighbours()
    out = []
    for name in FAMILIES:
        fam = mp.family(name)
        for v in gamma.vertices:
            if v not in fam:
                raise ResolutionError(f"missing {name} value for {v!r}")
    for w in gamma.exceptional:
        for name in FAMILIES:
            fam = mp.family(name)
            r = gamma.euler[w] * fam[w] + sum(fam[u] for u in nbrs[w])
            r += sum(fam[a] for a in gamma.arrows_at(w))
            if r:
                out.append((w, name, r))
    return out


def _bareiss_solve(matrix: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly with fraction-free elimination."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ResolutionError("intersection matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                aug[i][j] = (aug[i][j] * aug[k][k] - aug[i][k] * aug[k][j]) // prev
            aug[i][k] = 0
        prev = aug[k][k]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = Fraction(aug[i][n]) - sum(aug[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / aug[i][i]
    return x


def intersection_matrix(gamma: ResolutionGraph) -> tuple[list[str], list[list[int]]]:
    ws = gamma.exceptional
    idx = {w: i for i, w in enumerate(ws)}
    mat = [[0] * len(ws) for _ in ws]
    for w in ws:
        mat[idx[w]][idx[w]] = gamma.euler[w]
    for a, b in gamma.edges:
        mat[idx[a]][idx[b]] += 1
        mat[idx[b]][idx[a]] += 1
    return ws, mat


def solve_multiplicities(gamma: ResolutionGraph, arrow_values: dict[str, int]) -> dict[str, int]:
    """Values on exceptional vertices balancing the given arrowhead values."""
    for a in gamma.arrows:
        if a not in arrow_values:
            raise ResolutionError(f"missing value for arrow {a!r}")
    ws, mat = intersection_matrix(gamma)
    rhs = [-sum(arrow_values[a] for a in gamma.arrows_at(w)) for w in ws]
    sol = _bareiss_solve(mat, rhs)
    out = {}
    for w, x in zip(ws, sol):
        if x.denominator != 1:
            raise ResolutionError(f"non-integral solution {x} at {w!r}")
        if x < 0:
            raise ResolutionError(f"negative solution {x} at {w!r}")
        out[w] = int(x)
    return out


def solve_mult_pair(gamma: ResolutionGraph, arrow_m: dict[str, int], arrow_l: dict[str, int]) -> MultPair:
    m = solve_multiplicities(gamma, arrow_m)
    l = solve_multiplicities(gamma, arrow_l)
    m.update(arrow_m)
    l.update(arrow_l)
    return MultPair(m, l)


# --------------------------------------------------------------------------
# partition and components of the m <= l part
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    W1: tuple[str, ...]
    W2: tuple[str, ...]
    A_f1: tuple[str, ...]
    A_f2: tuple[str, ...]
    A_g1: tuple[str, ...]
    A_g2: tuple[str, ...]


def partition(gamma: ResolutionGraph, mp: MultPair) -> Partition:
    W1 = tuple(w for w in gamma.exceptional if mp.m[w] <= mp.l[w])
    W2 = tuple(w for w in gamma.exceptional if mp.m[w] > mp.l[w])
    first = set(W1)

    def split(kind: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
        arrows = gamma.arrows_of(kind)
        return (
            tuple(a for a in arrows if gamma.arrows[a].attach in first),
            tuple(a for a in arrows if gamma.arrows[a].attach not in first),
        )

    A_f1, A_f2 = split("f")
    A_g1, A_g2 = split("g")
    return Partition(W1, W2, A_f1, A_f2, A_g1, A_g2)


@dataclass(frozen=True)
class BoundaryEdge:
    """An edge from a component vertex to an ``f``-arrow or an ``m > l`` vertex."""

    inner: str
    outer: str
    m_e: int
    edge_index: int | None = None  # position in ``gamma.edges``; None for arrows


@dataclass(frozen=True)
class ComponentSummary:
    vertices: tuple[str, ...]
    boundary: tuple[BoundaryEdge, ...]
    outer: tuple[str, ...]
    delta_hat: dict[str, int]
    d: int
    genus: int
    euler: int

    @property
    def name(self) -> str:
        return ",".join(self.vertices)


def component_invariants(
    inner: list[tuple[int, int]],
    boundary: list[tuple[int, int, int, int]],
) -> tuple[int, int, int]:
    """Return ``(d, genus, euler)`` of the surface piece over one component.

    ``inner`` lists ``(m_v, delta_hat_v)``; ``boundary`` lists
    ``(m_inner, l_inner, m_outer, l_outer)`` per boundary edge.  ``d`` is the
    gcd of all inner and outer ``m``; genus and Euler number solve

        d (2 - 2 genus) = sum m_v (2 - delta_hat_v) + sum gcd(m_inner, m_outer)
        d euler         = sum (m_inner l_outer - m_outer l_inner)
    """
    if not boundary:
        raise ResolutionError("component has no boundary edges")
    d = 0
    for m_v, _ in inner:
        d = gcd(d, m_v)
    for _, _, m_w, _ in boundary:
        d = gcd(d, m_w)
    chi = sum(m_v * (2 - dh) for m_v, dh in inner)
    chi += sum(gcd(m_v, m_w) for m_v, _, m_w, _ in boundary)
    twist = sum(m_v * l_w - m_w * l_v for m_v, l_v, m_w, l_w in boundary)
    if chi % d or (2 * d - chi) % (2 * d):
        raise ResolutionError(f"non-integral genus from d={d}, sum={chi}")
    if twist % d:
        raise ResolutionError(f"non-integral Euler number from d={d}, sum={twist}")
    genus = (2 * d - chi) // (2 * d)
    if genus < 0:
        raise ResolutionError(f"negative genus {genus}")
    return d, genus, twist // d


def components_gamma1(gamma: ResolutionGraph, mp: MultPair, part: Partition) -> list[ComponentSummary]:
    """One summary per connected component of the subgraph induced on W1."""
    first = set(part.W1)
    second = set(part.W2)
    f_first = set(part.A_f1)
    adj: dict[str, list[str]] = defaultdict(list)
    for a, b in gamma.edges:
        if a in first and b in first:
            adj[a].append(b)
            adj[b].append(a)

    comps = []
    seen: set[str] = set()
    for start in part.W1:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for u in adj[stack.pop()]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(sorted(comp))

    out = []
    for comp in comps:
        members = set(comp)
        boundary = []
        for idx, (a, b) in enumerate(gamma.edges):
            for inner, outer in ((a, b), (b, a)):
                if inner in members and outer in second:
                    boundary.append(BoundaryEdge(inner, outer, gcd(mp.m[inner], mp.m[outer]), idx))
        for arr in sorted(f_first):
            v = gamma.arrows[arr].attach
            if v in members:
                boundary.append(BoundaryEdge(v, arr, gcd(mp.m[v], mp.m[arr])))
        if not boundary:
            raise ResolutionError(f"component {comp} has no boundary edges")
        delta = Counter()
        for a, b in gamma.edges:
            if a in members and b in members:
                delta[a] += 1
                delta[b] += 1
        for e in boundary:
            delta[e.inner] += 1
        delta_hat = {v: delta[v] for v in comp}
        d, genus, euler = component_invariants(
            [(mp.m[v], delta_hat[v]) for v in comp],
            [(mp.m[e.inner], mp.l[e.inner], mp.m[e.outer], mp.l[e.outer]) for e in boundary],
        )
        outer = tuple(sorted({e.outer for e in boundary}))
        out.append(ComponentSummary(tuple(comp), tuple(boundary), outer, delta_hat, d, genus, euler))
    return out


# --------------------------------------------------------------------------
# the T_{a,b} family: f = x^a + y^b, g = xy
# --------------------------------------------------------------------------


def _det(u: tuple[int, int], v: tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def stern_brocot_rays(target: tuple[int, int]) -> list[tuple[int, int]]:
    """Interior rays of the minimal regular fan of the quadrant containing ``target``.

    Rays are returned in order from the ``(1, 0)`` side to the ``(0, 1)`` side.
    """
    p, q = target
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError(f"target must be a primitive interior vector, got {target}")
    left, right = (1, 0), (0, 1)
    rays = []
    while True:
        med = (left[0] + right[0], left[1] + right[1])
        rays.append(med)
        if med == target:
            break
        if _det(med, target) > 0:
            left = med
        else:
            right = med
    return sorted(rays, key=lambda r: Fraction(r[1], r[0]))


def gen_tab(a: int, b: int) -> tuple[ResolutionGraph, MultPair]:
    """Minimal embedded resolution of ``x^a + y^b`` and ``xy`` with multiplicities."""
    if not (a >= b >= 2):
        raise ValueError(f"need a >= b >= 2, got a={a}, b={b}")
    d = gcd(a, b)
    rays = stern_brocot_rays((b // d, a // d))
    fan = [(1, 0)] + rays + [(0, 1)]
    gamma = ResolutionGraph()
    mp = MultPair()
    ids = [f"v{i}" for i in range(1, len(rays) + 1)]
    for i, (p, q) in enumerate(rays, start=1):
        prev, nxt = fan[i - 1], fan[i + 1]
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        k = s[0] // p if p else s[1] // q
        assert (k * p, k * q) == s
        gamma.euler[ids[i - 1]] = -k
        mp.m[ids[i - 1]] = min(p * a, q * b)
        mp.l[ids[i - 1]] = p + q
    gamma.edges = [(ids[i], ids[i + 1]) for i in range(len(ids) - 1)]
    rupture = ids[rays.index((b // d, a // d))]
    for j in range(1, d + 1):
        gamma.arrows[f"f{j}"] = Arrow(rupture, "f")
        mp.m[f"f{j}"], mp.l[f"f{j}"] = 1, 0
    gamma.arrows["gx"] = Arrow(ids[0], "g")
    gamma.arrows["gy"] = Arrow(ids[-1], "g")
    for g_arrow in ("gx", "gy"):
        mp.m[g_arrow], mp.l[g_arrow] = 0, 1
    return gamma, mp
