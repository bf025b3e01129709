"""Slices: closed traces on an embedding and the cut they induce.

A trace is a closed walk alternating vertices and segments.  A segment
either rides a graph edge, crosses one face as a chord between two face
corners, or rides one arc of a boundary circle.  The trace is the facial
walk of the slice: the region on its left (after orienting per ``side``)
is the slice, and cutting along the trace yields the graph drawn in the
slice's closure, with multiply-visited vertices split into one copy per
visit.

Region assignment happens on the overlay: chords are inserted into face
corners (a chord is only accepted where its two ends see the same
overlay face), then overlay faces are 2-colored by merging across every
non-wall edge, where walls are the traced segments plus all boundary
arcs.  Vertex copies are read off as the fans of ends between
consecutive trace passages on the slice side.

Edges may be ridden twice in opposite directions (a slit); the region
then has a single side and the slit edge is duplicated in the cut.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import RotationEmbedding, build_embedding, _build_mixed_overlay
from .errors import InvalidSlice


@dataclass(frozen=True)
class EdgeSegment:
    """Segment riding the graph edge between consecutive trace vertices."""


@dataclass(frozen=True)
class FaceSegment:
    """Chord through one face, between two of its corners.

    Corners are positions into the facial orbit of ``face`` (an index
    into the embedding's graph_faces).
    """

    face: int
    out_corner: int
    in_corner: int


@dataclass(frozen=True)
class ArcSegment:
    """Segment riding arc ``arc`` of boundary walk ``walk``."""

    walk: int
    arc: int


Segment = EdgeSegment | FaceSegment | ArcSegment


@dataclass(frozen=True)
class TraceStep:
    vertex: int
    segment: Segment


@dataclass(frozen=True)
class SliceSpec:
    """A closed trace plus the choice of complementary region.

    ``side`` is "left" or "right" of the trace direction.  Interior
    isolated vertices have no combinatorial position, so membership in
    the slice is declared explicitly via ``isolated_inside``.
    """

    steps: tuple[TraceStep, ...]
    side: str = "left"
    isolated_inside: frozenset[int] = field(default_factory=frozenset)

    def reversed(self) -> "SliceSpec":
        m = len(self.steps)
        out = []
        for i in range(m):
            j = (m - i) % m
            seg = self.steps[(j - 1) % m].segment
            if isinstance(seg, FaceSegment):
                seg = FaceSegment(seg.face, seg.in_corner, seg.out_corner)
            out.append(TraceStep(self.steps[j % m].vertex, seg))
        return SliceSpec(tuple(out), self.side, self.isolated_inside)


def _fail(msg: str):
    raise InvalidSlice(msg)


class _Cut:
    """One cut computation: validation, overlay extension, assembly."""

    def __init__(self, e: RotationEmbedding, spec: SliceSpec):
        if spec.side not in ("left", "right"):
            _fail(f"bad side {spec.side!r}")
        self.e = e
        self.spec = spec if spec.side == "left" else spec.reversed()
        self.steps = self.spec.steps
        self.m = len(self.steps)
        if self.m == 0:
            _fail("empty trace")
        if not self.spec.isolated_inside <= e.isolated_interior:
            _fail("isolated_inside must name interior isolated vertices")
        self._validate_segments()
        self._extend_overlay()
        self._assign_regions()

    # -- step validation and end keys --

    def _validate_segments(self):
        e, steps, m = self.e, self.steps, self.m
        edge_rides: dict[tuple[int, int], int] = {}
        used_arcs = set()
        self.out_keys = []
        self.in_keys = []  # in key of segment i, living at vertex of step i+1
        self.walls = set()
        for i, step in enumerate(steps):
            v = step.vertex
            w = steps[(i + 1) % m].vertex
            seg = step.segment
            if isinstance(seg, EdgeSegment):
                if (min(v, w), max(v, w)) not in e.edges:
                    _fail(f"step {i}: no edge {v}-{w}")
                if (v, w) in edge_rides:
                    _fail(f"step {i}: edge {v}-{w} ridden twice same direction")
                edge_rides[(v, w)] = i
                self.out_keys.append(("e", w))
                self.in_keys.append(("e", v))
                self.walls.add(("E", min(v, w), max(v, w)))
            elif isinstance(seg, FaceSegment):
                try:
                    orbit = e.graph_faces[seg.face]
                except IndexError:
                    _fail(f"step {i}: no face {seg.face}")
                for name, pos, vertex in (
                    ("out", seg.out_corner, v),
                    ("in", seg.in_corner, w),
                ):
                    if not (0 <= pos < len(orbit)):
                        _fail(f"step {i}: {name} corner out of range")
                    if orbit[pos][0] != vertex:
                        _fail(
                            f"step {i}: {name} corner {pos} of face "
                            f"{seg.face} is not at vertex {vertex}"
                        )
                if seg.out_corner == seg.in_corner:
                    _fail(f"step {i}: chord must join distinct corners")
                self.out_keys.append(("c", i, 0))
                self.in_keys.append(("c", i, 1))
                self.walls.add(("C", i))
            elif isinstance(seg, ArcSegment):
                if not (0 <= seg.walk < len(e.boundary_walks)):
                    _fail(f"step {i}: no walk {seg.walk}")
                walk = e.boundary_walks[seg.walk]
                b = len(walk)
                if not (0 <= seg.arc < b):
                    _fail(f"step {i}: no arc {seg.arc} on walk {seg.walk}")
                x, y = walk[seg.arc], walk[(seg.arc + 1) % b]
                if (seg.walk, seg.arc) in used_arcs:
                    _fail(f"step {i}: arc ridden twice")
                used_arcs.add((seg.walk, seg.arc))
                if (v, w) == (x, y):
                    self.out_keys.append(("a", seg.walk, seg.arc, 0))
                    self.in_keys.append(("a", seg.walk, seg.arc, 1))
                elif (v, w) == (y, x):
                    self.out_keys.append(("a", seg.walk, seg.arc, 1))
                    self.in_keys.append(("a", seg.walk, seg.arc, 0))
                else:
                    _fail(f"step {i}: arc does not join {v} and {w}")
                self.walls.add(("A", seg.walk, seg.arc))
            else:
                _fail(f"step {i}: unknown segment {seg!r}")
        self.used_arcs = used_arcs

    # -- overlay extension with chords --

    def _gap_positions(self, ends_v, prev_u, next_u):
        """Insertion indices inside the corner gap, in clockwise order."""
        i_prev = ends_v.index(("e", prev_u))
        i_next = ends_v.index(("e", next_u))
        deg = len(ends_v)
        out = []
        k = i_prev
        while True:
            out.append(k + 1)
            k = (k + 1) % deg
            if k == i_next:
                break
        return out

    def _corner_anchor(self, face_orbit, pos):
        """(vertex, prev neighbor, next neighbor) of a graph-face corner."""
        v, next_u = face_orbit[pos]
        prev_u = face_orbit[pos - 1][0]
        return v, prev_u, next_u

    def _extend_overlay(self):
        e = self.e
        base = e.overlay
        ends = [list(per) for per in base.ends]
        n_extra = 0
        ov = base
        beyond_ids = set(e.beyond_orbits.values())

        def corner_orbit(v, insert_at):
            return ov.orbit_of[(v, insert_at % len(ends[v]))]

        for i, step in enumerate(self.steps):
            seg = step.segment
            if not isinstance(seg, FaceSegment):
                continue
            orbit = e.graph_faces[seg.face]
            v_out, pu_out, nu_out = self._corner_anchor(orbit, seg.out_corner)
            v_in, pu_in, nu_in = self._corner_anchor(orbit, seg.in_corner)
            cand_out = self._gap_positions(ends[v_out], pu_out, nu_out)
            cand_in = self._gap_positions(ends[v_in], pu_in, nu_in)
            placed = False
            for q_out in cand_out:
                if placed:
                    break
                o_out = corner_orbit(v_out, q_out)
                if o_out in beyond_ids:
                    continue
                for q_in in cand_in:
                    o_in = corner_orbit(v_in, q_in)
                    if o_in in beyond_ids or o_in != o_out:
                        continue
                    first, second = (v_out, q_out, ("c", i, 0)), (v_in, q_in, ("c", i, 1))
                    if v_out == v_in and q_in < q_out:
                        first, second = second, first
                    elif v_out == v_in and q_in == q_out:
                        continue
                    sv, sq, skey = second
                    fv, fq, fkey = first
                    ends[sv].insert(sq, skey)
                    ends[fv].insert(fq, fkey)
                    placed = True
                    break
            if not placed:
                _fail(
                    f"step {i}: chord cannot be drawn through face {seg.face}"
                )
            n_extra += 1
            ov = _build_mixed_overlay(ends, 0, base.n_edges + n_extra)
            beyond_ids = {
                ov.orbit_of[self._beyond_dart(ends, wi)]
                for wi, walk in enumerate(e.boundary_walks)
                if walk
            }
        self.ov = _build_mixed_overlay(ends, 0, base.n_edges + n_extra)
        self.ends = ends

    def _beyond_dart(self, ends, wi):
        walk = self.e.boundary_walks[wi]
        b = len(walk)
        key = ("a", wi, (b - 1) % b, 1)
        return (walk[0], ends[walk[0]].index(key))

    # -- region 2-coloring --

    def _is_wall(self, dart):
        end = self.ov.end_of(dart)
        if end[0] == "e":
            v = dart[0]
            return ("E", min(v, end[1]), max(v, end[1])) in self.walls
        if end[0] == "a":
            return True
        return True  # chords are always trace walls

    def _assign_regions(self):
        ov = self.ov
        n_orbits = len(ov.orbits)
        parent = list(range(n_orbits))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        beyond_ids = set()
        for wi, walk in enumerate(self.e.boundary_walks):
            if walk:
                beyond_ids.add(ov.orbit_of[self._beyond_dart(self.ends, wi)])

        for v, per_v in enumerate(ov.ends):
            for s in range(len(per_v)):
                d = (v, s)
                if not self._is_wall(d):
                    union(ov.orbit_of[d], ov.orbit_of[ov.twin[d]])

        # regions also connect through vertices the trace does not visit:
        # the vertex point itself belongs to the region
        trace_vertices = {s.vertex for s in self.steps}
        for v, per_v in enumerate(ov.ends):
            if v in trace_vertices or not per_v:
                continue
            corners = [
                ov.orbit_of[(v, s)]
                for s in range(len(per_v))
                if ov.orbit_of[(v, s)] not in beyond_ids
            ]
            for a, b in zip(corners, corners[1:]):
                union(a, b)

        self.trace_darts = []
        for i in range(self.m):
            v = self.steps[i].vertex
            slot = ov.ends[v].index(self.out_keys[i])
            self.trace_darts.append((v, slot))

        left = {find(ov.orbit_of[d]) for d in self.trace_darts}
        if len(left) != 1:
            _fail("trace does not bound a single region on the slice side")
        self.voids = {find(o) for o in beyond_ids}
        chosen = left.pop()
        if chosen in self.voids:
            _fail("selected side lies beyond the surface boundary")
        self.chosen = chosen
        self.find = find
        self._check_walk_compatibility()

    def _check_walk_compatibility(self):
        """Each ambient walk must be traced, inside, or outside the slice."""
        ov, e = self.ov, self.e
        trace_vertices = {s.vertex for s in self.steps}
        self.retained_walks = []
        for wi, walk in enumerate(e.boundary_walks):
            b = len(walk)
            if b == 0:
                continue
            traced = {a for (w2, a) in self.used_arcs if w2 == wi}
            all_arcs = set(range(b))
            if traced == all_arcs:
                continue  # fully consumed by the trace
            sliver_states = set()
            for a in all_arcs - traced:
                x = walk[a]
                slot = ov.ends[x].index(("a", wi, a, 0))
                sliver_states.add(self.find(ov.orbit_of[(x, slot)]) == self.chosen)
            if sliver_states == {False}:
                continue  # wholly outside (possibly touching at vertices)
            if (
                sliver_states == {True}
                and not traced
                and not (set(walk) & trace_vertices)
            ):
                self.retained_walks.append(wi)
                continue
            _fail(
                f"walk {wi} straddles the slice without being traced"
            )

    # -- wedges and assembly --

    def boundary_size(self) -> int:
        return self.m

    def build_piece(self) -> RotationEmbedding:
        ov, e, m = self.ov, self.e, self.m
        in_slot = {}
        out_slot = {}
        trace_slots: dict[int, set[int]] = {}
        for i in range(m):
            v = self.steps[i].vertex
            w = self.steps[(i + 1) % m].vertex
            so = ov.ends[v].index(self.out_keys[i])
            si = ov.ends[w].index(self.in_keys[i])
            out_slot[i] = so
            in_slot[(i + 1) % m] = si
            trace_slots.setdefault(v, set()).add(so)
            trace_slots.setdefault(w, set()).add(si)

        ride_by_outdart = {}
        for i in range(m):
            if isinstance(self.steps[i].segment, EdgeSegment):
                ride_by_outdart[(self.steps[i].vertex, out_slot[i])] = i

        # pass 1: wedges
        wedges = {}  # visit -> list of slots, first=opener, last=closer
        opener_of = {}
        closer_of = {}
        mid_owner = {}
        for i in range(m):
            v = self.steps[i].vertex
            deg = len(ov.ends[v])
            s0 = in_slot[i]
            slots = [s0]
            s = (s0 + 1) % deg
            while s != s0 and s not in trace_slots[v]:
                slots.append(s)
                s = (s + 1) % deg
            slots.append(s)  # closer; equals s0 on a full wrap
            wedges[i] = slots
            opener_of[(v, s0)] = i
            closer_of[(v, slots[-1])] = i
            for s_mid in slots[1:-1]:
                mid_owner[(v, s_mid)] = i
            for s_at in slots[:-1]:
                corner = ov.orbit_of[(v, (s_at + 1) % deg)]
                if self.find(corner) != self.chosen:
                    _fail("trace orientation does not bound the selected side")

        # interior membership
        trace_vset = set(trace_slots)
        interior = []
        for v in range(e.n):
            if v in trace_vset or not ov.ends[v]:
                continue
            states = set()
            for s in range(len(ov.ends[v])):
                cls = self.find(ov.orbit_of[(v, s)])
                if cls in self.voids:
                    continue
                states.add(cls == self.chosen)
            if states == {True}:
                interior.append(v)
            elif len(states) > 1:
                _fail(f"vertex {v} straddles the slice boundary")

        new_id = {}
        for v in interior:
            new_id[v] = m + len(new_id)
        iso_ids = {}
        for v in sorted(self.spec.isolated_inside):
            iso_ids[v] = m + len(new_id) + len(iso_ids)

        def ride_target(j):
            """Piece vertex at the head of edge ride j."""
            w = self.steps[(j + 1) % m].vertex
            return opener_of[(w, in_slot[(j + 1) % m])]

        def ride_source(j):
            """Piece vertex at the tail flank of edge ride j."""
            v = self.steps[j].vertex
            return closer_of[(v, out_slot[j])]

        def map_plain_end(v, u):
            """Neighbor id for the untraced edge end at v toward u."""
            if u in new_id:
                return new_id[u]
            slot_at_u = ov.ends[u].index(("e", v))
            owner = mid_owner.get((u, slot_at_u))
            if owner is None:
                _fail(f"edge {v}-{u} leaves the slice")
            return owner

        rotations = []
        for i in range(m):
            v = self.steps[i].vertex
            slots = wedges[i]
            rot = []
            full_wrap = len(slots) >= 2 and slots[-1] == slots[0]
            for idx, s in enumerate(slots):
                end = ov.ends[v][s]
                if end[0] != "e":
                    continue
                u = end[1]
                is_opener = idx == 0
                is_closer = idx == len(slots) - 1
                if is_opener and not (full_wrap and idx == len(slots) - 1):
                    j = (i - 1) % m
                    if not isinstance(self.steps[j].segment, EdgeSegment):
                        _fail("inconsistent opener segment")
                    rot.append(ride_source(j))
                elif is_closer:
                    j = ride_by_outdart.get((v, s))
                    if j is None:
                        _fail("wedge closes at a non-ride end")
                    rot.append(ride_target(j))
                else:
                    if s in trace_slots[v]:
                        _fail("trace slot inside a wedge")
                    rot.append(map_plain_end(v, u))
            rotations.append(tuple(rot))

        for v in interior:
            rot = []
            for s in range(len(ov.ends[v])):
                end = ov.ends[v][s]
                if end[0] != "e":
                    continue
                rot.append(map_plain_end(v, end[1]))
            rotations.append(tuple(rot))
        for _ in iso_ids:
            rotations.append(())

        walks = [tuple(range(m))]
        for wi in self.retained_walks:
            walks.append(tuple(new_id[x] for x in self.e.boundary_walks[wi]))

        origins = []
        amb = self.e.origins
        for i in range(m):
            v = self.steps[i].vertex
            origins.append(amb[v] if amb else v)
        for v in interior:
            origins.append(amb[v] if amb else v)
        for v in sorted(self.spec.isolated_inside):
            origins.append(amb[v] if amb else v)

        try:
            return build_embedding(rotations, walks, origins=origins)
        except Exception as exc:  # pragma: no cover - defensive
            raise InvalidSlice(f"cut produced an invalid embedding: {exc}") from exc


def slice_boundary_size(e: RotationEmbedding, spec: SliceSpec) -> int:
    """Boundary size of the slice, counting vertex visits with multiplicity."""
    return _Cut(e, spec).boundary_size()


def cut_along_slice(e: RotationEmbedding, spec: SliceSpec) -> RotationEmbedding:
    """The graph drawn in the slice's closure, with split boundary copies.

    Copy ``i`` of the result is the trace visit ``i``; provenance is in
    the result's ``origins``.
    """
    return _Cut(e, spec).build_piece()


def whole_surface_spec(e: RotationEmbedding, walk: int = 0) -> SliceSpec:
    """The identity slice tracing boundary walk ``walk`` of a disk."""
    w = e.boundary_walks[walk]
    steps = tuple(
        TraceStep(w[i], ArcSegment(walk, i)) for i in range(len(w))
    )
    return SliceSpec(steps, "left", frozenset(e.isolated_interior))
