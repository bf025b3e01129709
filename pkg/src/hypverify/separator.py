"""The apex-BFS cycle separator and its iteration.

Given a disk-embedded graph that is internally hyperbolic, the separator
augments it to a plane triangulation (boundary cycle riding the circle,
chords through internal faces, an apex beyond the boundary coned onto
the boundary cycle), takes a BFS tree from the apex, and extracts from
the interdigitating dual tree a fundamental cycle whose sides are both
large.  Hyperbolicity bounds the BFS depth, hence the cycle length,
hence the boundary of the returned slice.

Augmentation never adds vertices, so all counts are reported against the
original graph; the returned slice is expressed as a trace on the
original embedding and can be re-cut independently.  The map used
internally tolerates parallel edges (never bigon faces, never loops).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .embedding import DiskGraph, RotationEmbedding
from .errors import DegenerateInput, EmptyBoundary, InvalidSlice, ThresholdTooSmall
from .exact import LogAffine, ceil_log_product, compare_with_log, format_rational
from .slices import (
    ArcSegment,
    EdgeSegment,
    FaceSegment,
    SliceSpec,
    TraceStep,
    cut_along_slice,
    whole_surface_spec,
)


@dataclass
class LayerProfile:
    """BFS layer sizes from the apex: counts at and beyond each distance."""

    n_i: tuple[int, ...]
    n_plus_i: tuple[int, ...]
    depth: int

    def __post_init__(self):
        d = self.depth
        assert len(self.n_i) == len(self.n_plus_i) == d + 1
        assert self.n_plus_i[d] == 0
        for i in range(1, d + 1):
            assert self.n_plus_i[i - 1] == self.n_plus_i[i] + self.n_i[i]


@dataclass
class SeparatorTrace:
    """Internals of one separator run, for auditing."""

    apex: int
    bfs_parent: dict[int, int | None]
    tree_edges: frozenset[int]
    dual_edges: tuple[int, ...]
    chosen_edge: int
    cycle_vertices: tuple[int | None, ...]  # None marks the apex
    side_a: frozenset[int]
    side_b: frozenset[int]


@dataclass
class SeparatorResult:
    """The chosen slice with its evaluated Lemma-style bound ledger."""

    disk: SliceSpec
    size: int
    boundary: int
    ledger: dict
    case: str
    trace: SeparatorTrace | None = None
    augmented_edges: int = 0


@dataclass
class IteratedResult:
    """Result of the iterated separator: the final piece and the chain."""

    piece: DiskGraph
    size: int
    boundary: int
    ledger: dict
    chain: tuple[SliceSpec, ...]
    iterations: int

    @property
    def disk(self) -> SliceSpec:
        return self.chain[-1] if self.chain else None


class PlaneMap:
    """Mutable plane multigraph map.  Darts are ints; twin(d) = d ^ 1.

    ``nxt``/``prv`` link the clockwise rotation around each dart's origin.
    The face to the left of d is traced by d -> nxt[d ^ 1].
    """

    def __init__(self, n_vertices: int):
        self.n = n_vertices
        self.org: list[int] = []
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.einfo: list[tuple] = []
        self.vert_dart: list[int] = [-1] * n_vertices

    def add_vertex(self) -> int:
        self.vert_dart.append(-1)
        self.n += 1
        return self.n - 1

    def _new_dart(self, v: int) -> int:
        self.org.append(v)
        self.nxt.append(-1)
        self.prv.append(-1)
        return len(self.org) - 1

    def _attach(self, d: int, after: int | None):
        v = self.org[d]
        if after is None:
            if self.vert_dart[v] == -1:
                self.nxt[d] = d
                self.prv[d] = d
                self.vert_dart[v] = d
                return
            after = self.prv[self.vert_dart[v]]
        nn = self.nxt[after]
        self.nxt[after] = d
        self.prv[d] = after
        self.nxt[d] = nn
        self.prv[nn] = d

    def add_edge(self, v: int, after_v: int | None, u: int, after_u: int | None, info) -> int:
        """New edge; each end inserted after the given dart (None appends)."""
        dv = self._new_dart(v)
        du = self._new_dart(u)
        assert dv % 2 == 0 and du == dv + 1
        self._attach(dv, after_v)
        self._attach(du, after_u)
        self.einfo.append(info)
        return dv

    def head(self, d: int) -> int:
        return self.org[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.nxt[d ^ 1]

    def darts_of(self, v: int) -> Iterator[int]:
        d0 = self.vert_dart[v]
        if d0 == -1:
            return
        d = d0
        while True:
            yield d
            d = self.nxt[d]
            if d == d0:
                break

    def faces(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.org)
        out = []
        for d0 in range(len(self.org)):
            if seen[d0]:
                continue
            walk = []
            d = d0
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.face_next(d)
            out.append(tuple(walk))
        return out

    def edge_count(self) -> int:
        return len(self.org) // 2

    def check_euler(self):
        active = sum(1 for d in self.vert_dart if d != -1)
        f = len(self.faces())
        assert active - self.edge_count() + f == 2, "map lost planarity"


@dataclass
class Triangulation:
    """Augmented triangulated map with the distinguished apex."""

    pmap: PlaneMap
    apex: int
    outer_visits: tuple[int, ...]
    added_edges: int
    isolated: tuple[int, ...]
    source: DiskGraph


def _build_base_map(g: DiskGraph):
    """Plane map of the graph minus isolated interior vertices.

    Returns (map, before_dart per walk vertex) where before_dart marks the
    rotation position the boundary arcs occupied (the dart the arc pair
    preceded), or None for degree-0 walk vertices.
    """
    e = g.base
    iso = sorted(e.isolated_interior)
    pm = PlaneMap(e.n)
    dart_of = {}
    for u, v in sorted(e.edges):
        d = pm._new_dart(u)
        d2 = pm._new_dart(v)
        pm.einfo.append(("g",))
        dart_of[(u, v)] = d
        dart_of[(v, u)] = d2
    for v in range(e.n):
        rot = e.rotations[v]
        if not rot:
            continue
        ds = [dart_of[(v, u)] for u in rot]
        for i, d in enumerate(ds):
            pm.nxt[d] = ds[(i + 1) % len(ds)]
            pm.prv[d] = ds[(i - 1) % len(ds)]
        pm.vert_dart[v] = ds[0]
    walk = e.boundary_walks[0]
    anchors = e._walk_hosting[0][0] if walk else {}
    before = {}
    for x in walk:
        a = anchors.get(x)
        before[x] = dart_of[a] if a is not None else None
    return pm, before, iso, dart_of


def _arc_hugs_edge(e: RotationEmbedding, arc: int):
    """The g-edge riding arc ``arc`` of walk 0, if they bound a bigon sliver."""
    walk = e.boundary_walks[0]
    b = len(walk)
    x, y = walk[arc], walk[(arc + 1) % b]
    ov = e.overlay
    try:
        slot = ov.ends[x].index(("a", 0, arc, 0))
    except ValueError:
        return None
    oid = ov.orbit_of[(x, slot)]
    orbit = ov.orbits[oid]
    if len(orbit) != 2:
        return None
    other = orbit[0] if orbit[1] == (x, slot) else orbit[1]
    end = ov.end_of(other)
    if end == ("e", x) and other[0] == y:
        return (x, y)
    return None


def triangulate_and_apex(g: DiskGraph) -> Triangulation:
    """Augment to a plane triangulation with an apex beyond the boundary.

    The boundary cycle rides the circle (new edges wherever no graph edge
    hugs an arc), internal faces are triangulated by ear chords, and the
    apex is coned onto the outer region.  All additions are logged; no
    vertex other than the apex is added.
    """
    e = g.base
    if g.boundary_count == 0:
        raise EmptyBoundary("the separator needs at least one boundary vertex")
    pm, before, iso, dart_of = _build_base_map(g)
    walk = e.boundary_walks[0]
    b = len(walk)
    added = 0

    inner_anchor = dict(before)  # insertion cursor per walk vertex

    def insert_before_anchor(v):
        anchor = inner_anchor[v]
        if anchor is None and pm.vert_dart[v] == -1:
            return None  # empty rotation: append
        if anchor is None:
            return pm.prv[pm.vert_dart[v]]
        return pm.prv[anchor]

    outer_dart = None
    if b >= 2:
        for i in range(b):
            x, y = walk[i], walk[(i + 1) % b]
            hug = _arc_hugs_edge(e, i)
            if hug is not None:
                k_dart = dart_of[(x, y)]
            else:
                dx = insert_before_anchor(x)
                dy = insert_before_anchor(y)
                k_dart = pm.add_edge(x, dx, y, dy, ("K", 0, i))
                # keep later insertions on the inner side of this end
                inner_anchor[y] = k_dart ^ 1
                added += 1
            if i == 0:
                outer_dart = k_dart ^ 1  # dart y -> x, outer side on its left
    else:
        # single boundary vertex: the outer region is the host face itself
        x = walk[0]
        anchor = before[x]
        if anchor is not None:
            outer_dart = anchor
        else:
            outer_dart = None  # lone vertex handled by caller

    # triangulate everything except the outer region
    outer_face_key = None
    if outer_dart is not None:
        outer_face_key = outer_dart
    faces = pm.faces()
    work = []
    for f in faces:
        if outer_face_key is not None and outer_face_key in f:
            continue
        work.append(list(f))
    for fwalk in work:
        while len(fwalk) > 3:
            r = len(fwalk)
            cut = None
            for j in range(r):
                a = pm.org[fwalk[(j - 1) % r]]
                c = pm.org[fwalk[(j + 1) % r]]
                if a != c:
                    cut = j
                    break
            if cut is None:
                raise InvalidSlice("face cannot be triangulated")
            j = cut
            d_prev = fwalk[(j - 1) % r]
            d_j = fwalk[j]
            chord = pm.add_edge(
                pm.org[d_prev],
                pm.prv[d_prev],
                pm.head(d_j),
                d_j ^ 1,
                ("chord",),
            )
            added += 1
            rest = [chord] + [fwalk[(j + 1 + t) % r] for t in range(r - 2)]
            fwalk[:] = rest

    # apex cone over the outer region
    apex = pm.add_vertex()
    if outer_face_key is None:
        # the graph is a single boundary vertex (plus removed isolated)
        o_vertices = [walk[0]]
        pm.add_edge(apex, None, walk[0], None, ("apex",))
        added += 1
        outer_visits = (walk[0],)
    else:
        owalk = []
        d = outer_face_key
        while True:
            owalk.append(d)
            d = pm.face_next(d)
            if d == outer_face_key:
                break
        prev_t = None
        for o in owalk:
            x = pm.head(o)  # cone at the head of each outer dart
            after_apex = pm.prv[prev_t] if prev_t is not None else None
            t = pm.add_edge(apex, after_apex, x, o ^ 1, ("apex",))
            added += 1
            prev_t = t
        outer_visits = tuple(pm.head(o) for o in owalk)
    pm.check_euler()
    tri = Triangulation(pm, apex, outer_visits, added, tuple(iso), g)
    _assert_triangulated(tri)
    return tri


def _assert_triangulated(tri: Triangulation):
    pm = tri.pmap
    for f in pm.faces():
        assert len(f) >= 3, "bigon or monogon face after augmentation"
        if tri.apex not in {pm.org[d] for d in f}:
            assert len(f) == 3, "internal face not triangulated"
        else:
            assert len(f) == 3, "apex region not triangulated"


def bfs_layers(
    tri: Triangulation, *, c: Fraction | None = None, check_depth: bool = False
) -> LayerProfile:
    """Layer profile from the apex; optionally assert the depth bound."""
    pm = tri.pmap
    dist, _ = _bfs(pm, tri.apex)
    d = max(dist.values())
    counts = [0] * (d + 1)
    for v, dv in dist.items():
        counts[dv] += 1
    total = len(dist)
    nplus = []
    acc = 0
    for i in range(d + 1):
        acc += counts[i]
        nplus.append(total - acc)
    profile = LayerProfile(tuple(counts), tuple(nplus), d)
    if check_depth and c is not None:
        n = len(dist) - 1  # graph vertices, sans apex
        if n >= 1:
            bound = ceil_log_product(Fraction(c) + 1, Fraction(max(n, 1))) + 1
            assert d <= max(bound, 1), (
                f"BFS depth {d} exceeds the hyperbolic bound {bound}"
            )
    return profile


def _bfs(pm: PlaneMap, root: int):
    dist = {root: 0}
    parent_dart: dict[int, int | None] = {root: None}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for d in pm.darts_of(v):
                u = pm.head(d)
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent_dart[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist, parent_dart


def _lca(parent_dart, pm, dist, x, y):
    a, b = x, y
    while dist[a] > dist[b]:
        a = pm.org[parent_dart[a]]
    while dist[b] > dist[a]:
        b = pm.org[parent_dart[b]]
    while a != b:
        a = pm.org[parent_dart[a]]
        b = pm.org[parent_dart[b]]
    return a


@dataclass
class _DualData:
    faces: list
    face_of_dart: dict
    nontree: list  # edge ids
    child_face: dict  # edge id -> face index on the child side
    tin: dict
    tout: dict
    cycle_len: dict
    inside_child: dict  # edge id -> map vertices strictly inside child side
    face_edges: dict  # face index -> incident nontree edge ids


def _dual_structures(tri: Triangulation, dist, parent_dart) -> _DualData:
    pm = tri.pmap
    tree_edges = frozenset(
        d // 2 for d in parent_dart.values() if d is not None
    )
    faces = pm.faces()
    face_of_dart = {}
    for fi, walk in enumerate(faces):
        for d in walk:
            face_of_dart[d] = fi
    nontree = [
        eid for eid in range(pm.edge_count()) if eid not in tree_edges
    ]
    assert len(nontree) == len(faces) - 1, "dual tree edge count mismatch"

    adj: dict[int, list[tuple[int, int]]] = {fi: [] for fi in range(len(faces))}
    for eid in nontree:
        fa = face_of_dart[2 * eid]
        fb = face_of_dart[2 * eid + 1]
        assert fa != fb, "nontree edge with equal sides"
        adj[fa].append((fb, eid))
        adj[fb].append((fa, eid))

    # root the dual tree at face 0; Euler intervals give subtree tests
    tin, tout, order = {}, {}, []
    parent_face = {0: (None, None)}
    stack = [(0, False)]
    clock = 0
    subtree_faces = {}
    while stack:
        f, done = stack.pop()
        if done:
            tout[f] = clock
            cnt = 1
            for g2, eid in adj[f]:
                if parent_face.get(g2, (None, None))[0] == f:
                    cnt += subtree_faces[g2]
            subtree_faces[f] = cnt
            continue
        tin[f] = clock
        clock += 1
        stack.append((f, True))
        for g2, eid in adj[f]:
            if g2 not in parent_face:
                parent_face[g2] = (f, eid)
                stack.append((g2, False))
    assert len(parent_face) == len(faces), "dual tree disconnected"

    child_face = {}
    for f, (pf, eid) in parent_face.items():
        if pf is not None:
            child_face[eid] = f

    cycle_len = {}
    inside_child = {}
    n_active = sum(1 for d in pm.vert_dart if d != -1)
    for eid in nontree:
        x, y = pm.org[2 * eid], pm.org[2 * eid + 1]
        l = _lca(parent_dart, pm, dist, x, y)
        ln = dist[x] + dist[y] - 2 * dist[l] + 1
        cycle_len[eid] = ln
        fc = subtree_faces[child_face[eid]]
        v_in = fc - ln + 2
        assert v_in % 2 == 0, "side count parity broken"
        inside_child[eid] = v_in // 2

    face_edges = {
        fi: sorted(eid for _, eid in adj[fi]) for fi in range(len(faces))
    }
    return _DualData(
        faces,
        face_of_dart,
        nontree,
        child_face,
        tin,
        tout,
        cycle_len,
        inside_child,
        face_edges,
    )


def _cycle_vertices(tri, dist, parent_dart, eid):
    """Vertex cycle of the nontree edge, as a dart sequence around it."""
    pm = tri.pmap
    x, y = pm.org[2 * eid], pm.org[2 * eid + 1]
    l = _lca(parent_dart, pm, dist, x, y)
    up = []  # darts x -> ... -> lca
    v = x
    while v != l:
        d = parent_dart[v]
        up.append(d ^ 1)
        v = pm.org[d]
    down = []  # darts lca -> ... -> y
    chain = []
    v = y
    while v != l:
        d = parent_dart[v]
        chain.append(d)
        v = pm.org[d]
    down = list(reversed(chain))
    # cycle: x ->..-> lca ->..-> y -> x
    return up + down + [2 * eid + 1 if pm.org[2 * eid + 1] == y else 2 * eid]


def _side_faces(dual: _DualData, eid: int, child_side: bool):
    cf = dual.child_face[eid]
    lo, hi = dual.tin[cf], dual.tout[cf]
    out = []
    for fi in range(len(dual.faces)):
        inside = lo <= dual.tin[fi] and dual.tout[fi] <= hi
        if inside == child_side:
            out.append(fi)
    return out


def _side_vertex_sets(tri, dual, eid, cyc_vertices):
    """Graph-vertex sets on the two sides of the cycle, cycle included."""
    pm = tri.pmap
    apex = tri.apex
    child = set()
    for fi in _side_faces(dual, eid, True):
        for d in dual.faces[fi]:
            child.add(pm.org[d])
    parent = set()
    for fi in _side_faces(dual, eid, False):
        for d in dual.faces[fi]:
            parent.add(pm.org[d])
    cyc = set(cyc_vertices)
    a = (child | cyc) - {apex}
    b = (parent | cyc) - {apex}
    return a, b


def _dart_segment(tri: Triangulation, d: int):
    """Trace segment for riding map dart d, against the original graph."""
    pm = tri.pmap
    e = tri.source.base
    info = pm.einfo[d // 2]
    v, w = pm.org[d], pm.head(d)
    if info[0] == "g":
        return TraceStep(v, EdgeSegment())
    if info[0] == "K":
        return TraceStep(v, ArcSegment(0, info[2]))
    if info[0] == "chord":
        fa, ca = _chord_corner(tri, d)
        fb, cb = _chord_corner(tri, d ^ 1)
        if fa is None and fb is None:
            raise InvalidSlice("chord between two isolated boundary vertices")
        face = fa if fa is not None else fb
        assert fb is None or fa is None or fa == fb, "chord spans two faces"
        return TraceStep(v, FaceSegment(face, ca, cb))
    raise AssertionError(f"unexpected segment provenance {info}")


def _chord_corner(tri: Triangulation, d: int):
    """Original-graph face corner holding the chord end of map dart d.

    Returns (face index, corner position); (None, -1) marks an endpoint
    with no graph edges (a free corner on the boundary circle).
    """
    pm = tri.pmap
    e = tri.source.base
    v = pm.org[d]
    cur = pm.nxt[d]
    while cur != d:
        if pm.einfo[cur // 2][0] == "g":
            g_dart = (v, pm.head(cur))
            face = e.face_of_dart[g_dart]
            pos = e.graph_faces[face].index(g_dart)
            return face, pos
        cur = pm.nxt[cur]
    return None, -1


def _try_cut(g: DiskGraph, steps, isolated_inside=frozenset()):
    """Cut with whichever side is a single face; None if neither."""
    for side in ("left", "right"):
        spec = SliceSpec(tuple(steps), side, frozenset(isolated_inside))
        try:
            return spec, cut_along_slice(g.base, spec)
        except InvalidSlice:
            continue
    return None


def _evaluate_lemma_bounds(n, boundary_total, c, size, delta_boundary):
    """Both separator bounds, exactly evaluated; returns the ledger dict."""
    c = Fraction(c)
    lhs_low = Fraction(n, 3)
    upper = LogAffine(Fraction(2 * n, 3) + 4, 2 * (c + 1), Fraction(max(n, 2)))
    low_ok = lhs_low <= size
    up_ok = compare_with_log(Fraction(size), upper) <= 0
    dens_lhs = Fraction(n * delta_boundary)
    dens_rhs = LogAffine(
        Fraction(size) * (boundary_total + 9),
        6 * (c + 1) * Fraction(size),
        Fraction(max(n, 2)),
    )
    dens_ok = compare_with_log(dens_lhs, dens_rhs) <= 0
    return {
        "n": n,
        "boundary": boundary_total,
        "c": format_rational(c),
        "size": size,
        "delta_boundary": delta_boundary,
        "bound1_lhs": format_rational(lhs_low),
        "bound1_rhs": str(upper),
        "bound1_holds": bool(low_ok and up_ok),
        "bound2_lhs": format_rational(dens_lhs),
        "bound2_rhs": str(dens_rhs),
        "bound2_holds": bool(dens_ok),
    }


def _identity_result(g: DiskGraph, c) -> SeparatorResult:
    spec = whole_surface_spec(g.base)
    ledger = _evaluate_lemma_bounds(
        g.n, g.boundary_count, c, g.n, g.boundary_count
    )
    return SeparatorResult(
        disk=spec,
        size=g.n,
        boundary=g.boundary_count,
        ledger=ledger,
        case="identity",
    )


def _distribute_isolated(iso, size_a, size_b):
    """Split the isolated vertices between the two sides, larger share to
    the smaller side, keeping both sides' lower bounds intact."""
    iso = sorted(iso)
    half = (len(iso) + 1) // 2
    if size_a <= size_b:
        return frozenset(iso[:half]), frozenset(iso[half:])
    return frozenset(iso[half:]), frozenset(iso[:half])


def cycle_separator(g: DiskGraph, c) -> SeparatorResult:
    """One separator step: a slice with balanced size and small boundary.

    The caller asserts internal hyperbolicity with constant c; the ledger
    reports both bound evaluations either way.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    n = g.n
    if n == 0:
        raise DegenerateInput("empty graph")
    if g.boundary_count == 0:
        raise EmptyBoundary("the separator needs a boundary vertex")
    if n <= 2:
        return _identity_result(g, c)

    tri = triangulate_and_apex(g)
    pm = tri.pmap
    apex = tri.apex
    n_prime = n - len(tri.isolated)
    if n_prime <= 2:
        return _identity_result(g, c)

    dist, parent_dart = _bfs(pm, apex)
    dual = _dual_structures(tri, dist, parent_dart)

    # vertex counts per side for every candidate edge
    def side_counts(eid):
        ln = dual.cycle_len[eid]
        in_child = dual.inside_child[eid]
        n_active = sum(1 for d in pm.vert_dart if d != -1)
        in_parent = (n_active - ln) - in_child
        x, y = pm.org[2 * eid], pm.org[2 * eid + 1]
        l = _lca(parent_dart, pm, dist, x, y)
        apex_on = l == apex or apex in (x, y)
        apex_in_child = False
        if not apex_on:
            f_apex = dual.face_of_dart[pm.vert_dart[apex]]
            cf = dual.child_face[eid]
            apex_in_child = (
                dual.tin[cf] <= dual.tin[f_apex]
                and dual.tout[f_apex] <= dual.tout[cf]
            )
        g_cyc = ln - (1 if apex_on else 0)
        a_child = in_child - (0 if apex_on or not apex_in_child else 1) + g_cyc
        a_parent = (
            in_parent - (0 if apex_on or apex_in_child else 1) + g_cyc
        )
        return a_child, a_parent, apex_on

    # orient dual edges toward the side with fewer graph vertices and
    # find a source face of the directed tree
    incoming = {fi: 0 for fi in range(len(dual.faces))}
    smaller_side = {}
    for eid in dual.nontree:
        a_child, a_parent, _ = side_counts(eid)
        to_child = a_child <= a_parent
        smaller_side[eid] = "child" if to_child else "parent"
        target = (
            dual.child_face[eid]
            if to_child
            else dual.face_of_dart[
                2 * eid
                if dual.face_of_dart[2 * eid] != dual.child_face[eid]
                else 2 * eid + 1
            ]
        )
        incoming[target] += 1

    source = None
    for fi in range(len(dual.faces)):
        if all(
            _points_away(dual, smaller_side, eid, fi)
            for eid in dual.face_edges[fi]
        ):
            source = fi
            break
    assert source is not None, "directed dual tree has no source"
    cand = dual.face_edges[source]
    assert 1 <= len(cand) <= 3, "triangulation gives at most three candidates"

    # the cover property: every graph vertex lies on some candidate's
    # far side (the side away from the source face)
    n_g = n_prime
    far_sets = {}
    best = None
    for eid in cand:
        cyc_darts = _cycle_vertices(tri, dist, parent_dart, eid)
        cyc_verts = [pm.org[d] for d in cyc_darts]
        a_set, b_set = _side_vertex_sets(tri, dual, eid, cyc_verts)
        source_in_child = (
            dual.tin[dual.child_face[eid]] <= dual.tin[source]
            and dual.tout[source] <= dual.tout[dual.child_face[eid]]
        )
        far = b_set if source_in_child else a_set
        far_sets[eid] = far
        key = (
            len(far),
            -dual.cycle_len[eid],
            tuple(sorted(v for v in cyc_verts if v != apex)),
            -eid,
        )
        if best is None or key > best[0]:
            best = (key, eid, cyc_darts, cyc_verts, a_set, b_set)
    cover = set()
    for s in far_sets.values():
        cover |= s
    assert cover == {
        v for v in range(g.base.n) if pm.vert_dart[v] != -1 and v != apex
    }, "source-face sides do not cover the graph"

    _, eid, cyc_darts, cyc_verts, a_set, b_set = best
    # separation soundness on the original graph
    cyc_set = set(cyc_verts) - {apex}
    only_a = a_set - b_set
    only_b = b_set - a_set
    for u, v in g.base.edges:
        assert not (
            (u in only_a and v in only_b) or (u in only_b and v in only_a)
        ), "cycle does not separate"

    trace_obj = SeparatorTrace(
        apex=apex,
        bfs_parent={
            v: (pm.org[d] if d is not None else None)
            for v, d in parent_dart.items()
        },
        tree_edges=frozenset(
            d // 2 for d in parent_dart.values() if d is not None
        ),
        dual_edges=tuple(dual.nontree),
        chosen_edge=eid,
        cycle_vertices=tuple(
            None if v == apex else v for v in cyc_verts
        ),
        side_a=frozenset(a_set),
        side_b=frozenset(b_set),
    )

    iso = tri.isolated
    if apex in cyc_verts:
        result = _apex_on_cycle(g, tri, dist, parent_dart, cyc_darts, iso, c)
    else:
        result = _apex_off_cycle(
            g, tri, dual, eid, cyc_darts, iso, c
        )
    result.trace = trace_obj
    result.augmented_edges = tri.added_edges
    return result


def _points_away(dual, smaller_side, eid, fi):
    is_child_flank = dual.child_face[eid] == fi
    to_child = smaller_side[eid] == "child"
    # the edge points into the flank on its smaller side
    return to_child != is_child_flank


def _apex_off_cycle(g, tri, dual, eid, cyc_darts, iso, c):
    pm = tri.pmap
    apex = tri.apex
    f_apex = dual.face_of_dart[pm.vert_dart[apex]]
    cf = dual.child_face[eid]
    apex_in_child = (
        dual.tin[cf] <= dual.tin[f_apex] and dual.tout[f_apex] <= dual.tout[cf]
    )
    # the slice is the apex-free side
    want_child = not apex_in_child
    first = cyc_darts[0]
    first_in_child = (
        dual.tin[cf] <= dual.tin[dual.face_of_dart[first]]
        and dual.tout[dual.face_of_dart[first]] <= dual.tout[cf]
    )
    darts = cyc_darts if first_in_child == want_child else [
        d ^ 1 for d in reversed(cyc_darts)
    ]
    steps = [_dart_segment(tri, d) for d in darts]
    spec = SliceSpec(tuple(steps), "left")
    piece = cut_along_slice(g.base, spec)
    other_size = g.n - len(iso) - (piece.n - len(spec.steps))
    iso_in, _ = _distribute_isolated(iso, piece.n, other_size)
    if iso_in:
        spec = SliceSpec(spec.steps, spec.side, iso_in)
        piece = cut_along_slice(g.base, spec)
    ledger = _evaluate_lemma_bounds(
        g.n, g.boundary_count, c, piece.n, len(spec.steps)
    )
    return SeparatorResult(
        disk=spec,
        size=piece.n,
        boundary=len(spec.steps),
        ledger=ledger,
        case="apex_off_cycle",
    )


def _apex_on_cycle(g, tri, dist, parent_dart, cyc_darts, iso, c):
    pm = tri.pmap
    apex = tri.apex
    e = tri.source.base
    walk = e.boundary_walks[0]
    b = len(walk)
    # the path P: the cycle minus the apex, as darts
    k = next(i for i, d in enumerate(cyc_darts) if pm.org[d] == apex)
    rotated = cyc_darts[k:] + cyc_darts[:k]  # starts with apex's out-dart
    p_darts = rotated[1:-1]  # drop apex->x and y->apex darts
    x_end = pm.head(rotated[0])
    y_end = pm.org[rotated[-1]]
    candidates = []
    if not p_darts:
        # degenerate two-edge cycle through the apex: fall back to the
        # whole disk, which satisfies the bounds at these tiny sizes
        assert g.n <= 3 * 2, "degenerate apex cycle on a large instance"
        return _identity_result(g, c)
    p_steps = [_dart_segment(tri, d) for d in p_darts]
    p_steps_rev = [_dart_segment(tri, d ^ 1) for d in reversed(p_darts)]
    if b >= 2 and x_end in walk and y_end in walk:
        px, py = walk.index(x_end), walk.index(y_end)

        def forward_run(start, stop, full=False):
            out = []
            p = start
            while True:
                if p == stop and (out or not full):
                    break
                out.append(TraceStep(walk[p], ArcSegment(0, p)))
                p = (p + 1) % b
            return out

        if px == py:
            variants = [
                list(p_steps),
                list(p_steps_rev) + forward_run(px, py, full=True),
            ]
        else:
            variants = [
                list(p_steps) + forward_run(py, px),
                list(p_steps_rev) + forward_run(px, py),
            ]
        for steps in variants:
            got = _try_cut(g, steps)
            if got is not None:
                candidates.append(got)
    else:
        # close through the hosting face with a chord between the cone
        # corners at the two path ends
        fa, ca = _cone_corner(tri, rotated[0] ^ 1)
        fb, cb = _cone_corner(tri, rotated[-1])
        face = fa if fa is not None else fb
        closing = TraceStep(y_end, FaceSegment(face, cb, ca))
        steps = list(p_steps) + [closing]
        for side in ("left", "right"):
            spec = SliceSpec(tuple(steps), side)
            try:
                piece = cut_along_slice(g.base, spec)
                candidates.append((spec, piece))
            except InvalidSlice:
                continue
    assert candidates, "no expressible slice for the apex-on-cycle case"
    sized = []
    for spec, piece in candidates:
        sized.append((Fraction(len(spec.steps), piece.n), piece.n, spec, piece))
    sized.sort(key=lambda t: (t[0], -t[1]))
    _, _, spec, piece = sized[0]
    other = sized[-1][3].n if len(sized) > 1 else g.n - piece.n
    iso_in, _ = _distribute_isolated(iso, piece.n, other)
    if iso_in:
        spec = SliceSpec(spec.steps, spec.side, iso_in)
        piece = cut_along_slice(g.base, spec)
    ledger = _evaluate_lemma_bounds(
        g.n, g.boundary_count, c, piece.n, len(spec.steps)
    )
    return SeparatorResult(
        disk=spec,
        size=piece.n,
        boundary=len(spec.steps),
        ledger=ledger,
        case="apex_on_cycle",
    )


def _cone_corner(tri: Triangulation, apex_dart: int):
    """Corner of the hosting face at the far end of a cone edge."""
    return _chord_corner(tri, apex_dart)


def iterated_separator(g: DiskGraph, c, t) -> IteratedResult:
    """Repeated separation until the piece has at most t vertices."""
    c = Fraction(c)
    t = Fraction(t)
    need = LogAffine(Fraction(48), 24 * (c + 1), t)
    if compare_with_log(t, need) < 0:
        raise ThresholdTooSmall(f"t must satisfy t >= 24(c+1)ln t + 48")
    chain = []
    cur = g
    iterations = 0
    if cur.n > t:
        while cur.n > t:
            res = cycle_separator(cur, c)
            piece = cut_along_slice(cur.base, res.disk)
            assert 4 * piece.n <= 3 * cur.n, (
                f"shrink factor above 3/4: {cur.n} -> {piece.n}"
            )
            chain.append(res.disk)
            cur = DiskGraph.from_embedding(piece)
            iterations += 1
    else:
        spec = whole_surface_spec(g.base)
        chain.append(spec)
        cur = DiskGraph.from_embedding(cut_along_slice(g.base, spec))
    size = cur.n
    boundary = cur.boundary_count
    dens_lhs = Fraction(t * g.n * boundary)
    dens_rhs = LogAffine(
        Fraction(size) * (t * g.boundary_count + g.n * (21 * c + 57)),
        Fraction(size) * 24 * (c + 1) * g.n,
        t,
    )
    ledger = {
        "n": g.n,
        "boundary": g.boundary_count,
        "c": format_rational(c),
        "t": format_rational(t),
        "size": size,
        "delta_boundary": boundary,
        "size_ok": bool(Fraction(size) <= t),
        "density_lhs": format_rational(dens_lhs),
        "density_rhs": str(dens_rhs),
        "density_holds": bool(compare_with_log(dens_lhs, dens_rhs) <= 0),
    }
    return IteratedResult(
        piece=cur,
        size=size,
        boundary=boundary,
        ledger=ledger,
        chain=tuple(chain),
        iterations=iterations,
    )


@dataclass
class OracleVerdict:
    """Outcome of the disk-family hyperbolicity scan.

    A violation is always sound (the witness slice re-verifies).  "holds"
    is exhaustive over the enumerated family only: simple disks traced by
    cycles of the graph, and by boundary-to-boundary paths closed with a
    circle segment.
    """

    holds: bool
    witness: tuple | None = None  # (SliceSpec, interior, boundary size)


def _all_cycles(adj, n):
    """All simple cycles as vertex tuples, smallest vertex first."""
    out = []
    for s in range(n):
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for u in sorted(adj[v]):
                if u == s and len(path) >= 3:
                    if path[1] < path[-1]:  # one orientation per cycle
                        out.append(tuple(path))
                elif u > s and u not in path:
                    stack.append((u, path + [u]))
    return out


def _all_boundary_paths(adj, walk, n):
    """Simple paths with both ends on the walk and interior off it."""
    wset = set(walk)
    out = []
    for s in walk:
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for u in sorted(adj[v]):
                if u in path:
                    continue
                if u in wset:
                    if u > s and len(path) >= 1:
                        out.append(tuple(path + [u]))
                else:
                    stack.append((u, path + [u]))
    return out


def _random_cycles(adj, n, samples, rng):
    """Fundamental cycles of random spanning trees, deduplicated."""
    seen = set()
    out = []
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    if not edges:
        return out
    for _ in range(samples):
        root = rng.randrange(n)
        parent = {root: None}
        stack = [root]
        while stack:
            v = stack.pop()
            nbrs = sorted(adj[v])
            rng.shuffle(nbrs)
            for u in nbrs:
                if u not in parent:
                    parent[u] = v
                    stack.append(u)
        u, v = edges[rng.randrange(len(edges))]
        if u not in parent or v not in parent:
            continue
        au, av = [], []
        a = u
        while a is not None:
            au.append(a)
            a = parent[a]
        b = v
        while b is not None:
            av.append(b)
            b = parent[b]
        sa, sb = set(au), set(av)
        meet = next(x for x in au if x in sb)
        cyc = au[: au.index(meet) + 1] + list(
            reversed(av[: av.index(meet)])
        )
        if len(cyc) < 3:
            continue
        k = cyc.index(min(cyc))
        canon = tuple(cyc[k:] + cyc[:k])
        if canon[1] > canon[-1]:
            canon = (canon[0],) + tuple(reversed(canon[1:]))
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return out


def _random_boundary_paths(adj, walk, samples, rng):
    """Random walk-to-walk simple paths with interior off the walk."""
    wset = set(walk)
    seen = set()
    out = []
    if len(walk) < 2:
        return out
    for _ in range(samples):
        s = walk[rng.randrange(len(walk))]
        path = [s]
        used = {s}
        for _ in range(len(adj) + 1):
            nbrs = [u for u in adj[path[-1]] if u not in used]
            if not nbrs:
                break
            u = nbrs[rng.randrange(len(nbrs))]
            if u in wset:
                if u != s:
                    path.append(u)
                    key = tuple(path if path[0] < path[-1] else reversed(path))
                    if key not in seen:
                        seen.add(key)
                        out.append(tuple(path))
                break
            path.append(u)
            used.add(u)
    return out


def _cycle_specs(cycle):
    for verts in (cycle, tuple(reversed(cycle))):
        yield tuple(TraceStep(v, EdgeSegment()) for v in verts)


def _path_specs(path, walk):
    b = len(walk)
    x, y = path[0], path[-1]
    px, py = walk.index(x), walk.index(y)
    p_steps = [TraceStep(v, EdgeSegment()) for v in path[:-1]]
    rev_steps = [TraceStep(v, EdgeSegment()) for v in reversed(path[1:])]

    def run(start, stop):
        out = []
        p = start
        while p != stop:
            out.append(TraceStep(walk[p], ArcSegment(0, p)))
            p = (p + 1) % b
        return out

    yield tuple(p_steps + run(py, px))
    yield tuple(rev_steps + run(px, py))


def internal_hyperbolicity_oracle(
    g: DiskGraph,
    c,
    *,
    exhaustive_limit: int = 14,
    samples: int = 4000,
    seed: int = 0,
) -> OracleVerdict:
    """Scan simple proper disks for violations of the content inequality.

    Exhaustive for graphs up to ``exhaustive_limit`` vertices, a budgeted
    randomized refuter beyond.  Declared isolated vertices are never
    placed inside candidate disks, which only weakens the scan (documented
    family-relative behavior).
    """
    import random as _random

    c = Fraction(c)
    e = g.base
    n = e.n
    adj = [set(r) for r in e.rotations]
    walk = e.boundary_walks[0]
    exhaustive = n <= exhaustive_limit
    rng = _random.Random(seed)

    def check(steps):
        for side in ("left", "right"):
            spec = SliceSpec(tuple(steps), side)
            try:
                piece = cut_along_slice(e, spec)
            except InvalidSlice:
                continue
            if piece.surface_kind != "disk":
                continue  # annulus side: not a disk slice
            covered = set(piece.origins)
            if len(covered) >= n:
                continue  # the slice carries every vertex: not internal
            inside = piece.n - len(spec.steps)
            if inside > c * (len(spec.steps) - 1):
                return spec, inside, len(spec.steps)
        return None

    cycles = (
        _all_cycles(adj, n)
        if exhaustive
        else _random_cycles(adj, n, samples, rng)
    )
    for cycle in cycles:
        for steps in _cycle_specs(cycle):
            hit = check(steps)
            if hit is not None:
                return OracleVerdict(False, hit)
    if walk and len(walk) >= 1:
        paths = (
            _all_boundary_paths(adj, walk, n)
            if exhaustive
            else _random_boundary_paths(adj, walk, samples, rng)
        )
        for path in paths:
            for steps in _path_specs(path, walk):
                hit = check(steps)
                if hit is not None:
                    return OracleVerdict(False, hit)
    # single-vertex loop disks: a chord between two corners of one face
    # at a repeated vertex pinches off content with boundary size 1
    for fi, orbit in enumerate(e.graph_faces):
        visits: dict[int, list[int]] = {}
        for p, (v, _) in enumerate(orbit):
            visits.setdefault(v, []).append(p)
        for v, ps in sorted(visits.items()):
            if len(ps) < 2:
                continue
            for i in range(len(ps)):
                for j in range(i + 1, len(ps)):
                    hit = check(
                        (TraceStep(v, FaceSegment(fi, ps[i], ps[j])),)
                    )
                    if hit is not None:
                        return OracleVerdict(False, hit)
    return OracleVerdict(True)
