"""Colorability, boundary extension, and coloring criticality.

Criticality follows the bordered definition: a graph is critical when for
every maximal proper subgraph containing the boundary there is a proper
list-coloring of the boundary that extends to the subgraph but not to the
whole graph.  Quantifying over maximal subgraphs only (edge deletions,
plus deletions of isolated interior vertices) is equivalent to the full
definition because extendability is antitone under subgraph inclusion.

All searches are exhaustive backtracking, deterministic by construction:
vertices in decreasing-degree order, colors in ascending order, boundary
colorings in lexicographic order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product

from .embedding import DiskGraph, RotationEmbedding
from .errors import ColorOutsideList, FormatError


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex color lists; colors are small positive integers."""

    lists: tuple[frozenset[int], ...]

    def __post_init__(self):
        if any(not ls for ls in self.lists):
            raise FormatError("every vertex needs a nonempty list")

    @classmethod
    def uniform(cls, n: int, k: int) -> "ListAssignment":
        ls = frozenset(range(1, k + 1))
        return cls(tuple(ls for _ in range(n)))

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.lists[v]

    def __len__(self) -> int:
        return len(self.lists)


class Tristate(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


class Exclusion(enum.Enum):
    EXCLUDED_GIRTH = "excluded_girth"
    EXCLUDED_NONCRITICAL = "excluded_noncritical"
    NOT_EXCLUDED = "not_excluded"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassSpec:
    """The graph class under verification: girth bound plus coloring kind."""

    girth_min: int
    k: int
    mode: str = "coloring"
    palette_bound: int | None = None

    def __post_init__(self):
        if self.girth_min < 1 or self.k < 1:
            raise FormatError("girth_min and k must be positive")
        if self.mode not in ("coloring", "choosability"):
            raise FormatError(f"bad mode {self.mode!r}")
        if self.mode == "choosability":
            if self.palette_bound is None or self.palette_bound < self.k:
                raise FormatError("choosability needs palette_bound >= k")


def adjacency_sets(e: RotationEmbedding) -> list[set[int]]:
    return [set(rot) for rot in e.rotations]


def _search(adj, lists, fixed):
    """Deterministic extension of ``fixed`` to a proper list coloring."""
    for v, c in fixed.items():
        for u in adj[v]:
            if fixed.get(u) == c:
                return None
    n = len(adj)
    order = [
        v
        for v in sorted(range(n), key=lambda v: (-len(adj[v]), v))
        if v not in fixed
    ]
    coloring = dict(fixed)

    def place(i):
        if i == len(order):
            return True
        v = order[i]
        taken = {coloring[u] for u in adj[v] if u in coloring}
        for c in sorted(lists[v]):
            if c in taken:
                continue
            coloring[v] = c
            if place(i + 1):
                return True
            del coloring[v]
        return False

    return coloring if place(0) else None


def extend_coloring(
    g: DiskGraph, lists: ListAssignment, precolor: dict[int, int]
) -> dict[int, int] | None:
    """Extend a boundary precoloring to a proper list coloring, if possible."""
    if len(lists) != g.n:
        raise FormatError("list assignment does not cover the graph")
    boundary = g.base.boundary_vertices
    for v, c in precolor.items():
        if v not in boundary:
            raise ColorOutsideList(f"precolored vertex {v} is not on the boundary")
        if c not in lists[v]:
            raise ColorOutsideList(f"color {c} not in the list of vertex {v}")
    return _search(adjacency_sets(g.base), lists.lists, dict(precolor))


def _boundary_colorings(adj, lists, boundary):
    """Proper list colorings of the boundary, lexicographic order."""
    bs = sorted(boundary)
    for combo in product(*[sorted(lists[v]) for v in bs]):
        phi = dict(zip(bs, combo))
        if all(
            phi[u] != phi[v] for u in bs for v in adj[u] if v in phi and v > u
        ):
            yield phi


def _maximal_proper_subgraphs(e: RotationEmbedding):
    """Adjacency of each G-e, plus G-v for isolated interior vertices.

    Vertex deletions keep indices (the vertex just loses its list's
    relevance); its color choice never conflicts, matching deletion.
    """
    adj = adjacency_sets(e)
    out = []
    for u, v in sorted(e.edges):
        sub = [set(s) for s in adj]
        sub[u].discard(v)
        sub[v].discard(u)
        out.append(sub)
    for v in sorted(e.isolated_interior):
        sub = [set(s) for s in adj]
        out.append(sub)
    return out


def is_critical_for_lists(g: DiskGraph, lists: ListAssignment) -> bool:
    """Criticality for a fixed list assignment, bordered definition."""
    if len(lists) != g.n:
        raise FormatError("list assignment does not cover the graph")
    e = g.base
    adj = adjacency_sets(e)
    subs = _maximal_proper_subgraphs(e)
    if not subs:
        return True  # no proper subgraph contains the boundary: vacuous
    remaining = set(range(len(subs)))
    boundary = e.boundary_vertices
    for phi in _boundary_colorings(adj, lists.lists, boundary):
        if _search(adj, lists.lists, phi) is not None:
            continue
        for i in sorted(remaining):
            if _search(subs[i], lists.lists, phi) is not None:
                remaining.discard(i)
        if not remaining:
            return True
    return not remaining


def is_critical_for_k_coloring(g: DiskGraph, k: int) -> bool:
    return is_critical_for_lists(g, ListAssignment.uniform(g.n, k))


def _normalized_assignments(n, k, palette_bound):
    """List assignments with k-lists, complete up to color renaming.

    Vertices are filled in index order; the new colors a vertex introduces
    are always the smallest unused ones, which reaches every assignment up
    to a permutation of the palette.
    """

    def rec(v, used, acc):
        if v == n:
            yield tuple(acc)
            return
        for fresh in range(0, k + 1):
            if used + fresh > palette_bound or k - fresh > used:
                continue
            new_colors = tuple(range(used + 1, used + fresh + 1))
            for old in combinations(range(1, used + 1), k - fresh):
                acc.append(frozenset(old + new_colors))
                yield from rec(v + 1, used + fresh, acc)
                acc.pop()

    yield from rec(0, 0, [])


def is_critical_for_k_choosability(
    g: DiskGraph, k: int, palette_bound: int
) -> Tristate:
    """Search for a criticality-witnessing list assignment.

    A positive answer is always sound.  A negative answer is sound once
    the palette has at least k*n colors: any assignment uses at most that
    many distinct colors, so the renaming-normalized enumeration is then
    exhaustive.  Below the threshold an exhausted search returns UNKNOWN.
    """
    if palette_bound < k:
        raise FormatError("palette_bound must be at least k")
    n = g.n
    for lists in _normalized_assignments(n, k, palette_bound):
        if is_critical_for_lists(g, ListAssignment(lists)):
            return Tristate.TRUE
    if palette_bound >= k * n:
        return Tristate.FALSE
    return Tristate.UNKNOWN


def girth(e: RotationEmbedding) -> int | float:
    """Length of a shortest cycle; infinity for forests."""
    adj = adjacency_sets(e)
    best = float("inf")
    for root in range(e.n):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for u in adj[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        parent[u] = v
                        nxt.append(u)
                    elif parent[v] != u and dist[u] >= dist[v]:
                        best = min(best, dist[u] + dist[v] + 1)
            frontier = nxt
    return best


def exclude_candidate(h: DiskGraph, spec: ClassSpec) -> Exclusion:
    """Decide whether a candidate is excluded from the class."""
    if girth(h.base) < spec.girth_min:
        return Exclusion.EXCLUDED_GIRTH
    if spec.mode == "coloring":
        critical = is_critical_for_k_coloring(h, spec.k)
        return Exclusion.NOT_EXCLUDED if critical else Exclusion.EXCLUDED_NONCRITICAL
    verdict = is_critical_for_k_choosability(h, spec.k, spec.palette_bound)
    if verdict is Tristate.TRUE:
        return Exclusion.NOT_EXCLUDED
    if verdict is Tristate.FALSE:
        return Exclusion.EXCLUDED_NONCRITICAL
    return Exclusion.UNKNOWN


# --- list assignment text format ---


def parse_lists(text: str, n: int) -> ListAssignment:
    """Parse ``list <vertex> <c1> <c2> ...`` lines."""
    lists: dict[int, frozenset[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "list" or len(parts) < 3:
            raise FormatError(f"line {lineno}: expected 'list <v> <colors...>'")
        try:
            v = int(parts[1])
            colors = frozenset(int(p) for p in parts[2:])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {line!r}") from exc
        if v in lists:
            raise FormatError(f"line {lineno}: duplicate list for vertex {v}")
        if any(c < 1 for c in colors):
            raise FormatError(f"line {lineno}: colors must be positive")
        lists[v] = colors
    if sorted(lists) != list(range(n)):
        raise FormatError("lists must cover vertices 0..n-1")
    return ListAssignment(tuple(lists[v] for v in range(n)))


def serialize_lists(lists: ListAssignment) -> str:
    lines = [
        f"list {v} " + " ".join(map(str, sorted(ls)))
        for v, ls in enumerate(lists.lists)
    ]
    return "\n".join(lines) + "\n"
