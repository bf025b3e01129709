"""Graphs embedded in the sphere, disk, and cylinder via rotation systems.

An embedding is a simple graph with a clockwise cyclic neighbor order per
vertex, plus 0, 1, or 2 boundary walks marking where the surface boundary
circles pass through the drawing.  A boundary circle meets the graph only
in vertices, so each walk is a cyclic sequence of distinct vertices
inscribed in one face per touched component.

Validation works on an *overlay*: the graph plus one virtual "arc" edge
per boundary-circle segment between consecutive walk vertices.  The
overlay must be connected (apart from isolated interior vertices) and
have Euler count V - E + F = 2; this single check certifies that the
rotation system is planar, that every walk bounds a circle reachable
from its host faces, and that multiple components thread the circles
without crossing.

Faces are traced with the convention that the face orbit of a directed
edge lies to its left: after arriving at v from u, the walk leaves along
the neighbor following u in v's clockwise order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    BrokenInvolution,
    EmptyBoundarySide,
    FormatError,
    NonSimple,
    UnsupportedSurface,
)

Dart = tuple[int, int]  # (vertex, slot into the overlay rotation)

SURFACE_BY_WALKS = {0: "sphere", 1: "disk", 2: "cylinder"}


class Overlay:
    """Graph rotation system refined with boundary-circle arc ends.

    ``ends[v]`` is the clockwise list of ends at v.  An end is
    ``("e", u)`` for the edge toward u, or ``("a", walk, arc, side)`` for
    one side of a boundary arc.  Cut overlays add ``("c", seg, side)``
    chord ends.
    """

    __slots__ = ("ends", "twin", "orbits", "orbit_of", "n_edges")

    def trace_orbits(self):
        orbits = []
        orbit_of = {}
        for v, per_v in enumerate(self.ends):
            for i in range(len(per_v)):
                d = (v, i)
                if d in orbit_of:
                    continue
                orbit = []
                cur = d
                while cur not in orbit_of:
                    orbit_of[cur] = len(orbits)
                    orbit.append(cur)
                    cur = self.next_in_face(cur)
                orbits.append(tuple(orbit))
        self.orbits = tuple(orbits)
        self.orbit_of = orbit_of

    def next_in_face(self, dart: Dart) -> Dart:
        u, j = self.twin[dart]
        deg = len(self.ends[u])
        return (u, (j + 1) % deg)

    def end_of(self, dart: Dart):
        return self.ends[dart[0]][dart[1]]


def _build_mixed_overlay(ends, n_graph_edges, n_arcs):
    """Finish an overlay whose twin pairing spans edges, arcs, and chords."""
    ov = object.__new__(Overlay)
    ov.ends = ends
    ov.n_edges = n_graph_edges + n_arcs
    slot_of = [{} for _ in ends]
    for v, per_v in enumerate(ends):
        for i, end in enumerate(per_v):
            slot_of[v][end] = i
    half = {}
    twin = {}
    for v, per_v in enumerate(ends):
        for i, end in enumerate(per_v):
            kind = end[0]
            if kind == "e":
                twin[(v, i)] = (end[1], slot_of[end[1]][("e", v)])
            else:
                key = end[:-1]  # arc or chord identity without the side
                if key in half:
                    other = half.pop(key)
                    twin[(v, i)] = other
                    twin[other] = (v, i)
                else:
                    half[key] = (v, i)
    if half:
        raise BrokenInvolution(f"unpaired overlay ends: {sorted(half)}")
    ov.twin = twin
    ov.trace_orbits()
    return ov


def _validate_rotations(rotations):
    n = len(rotations)
    edges = set()
    for v, rot in enumerate(rotations):
        seen = set()
        for u in rot:
            if not isinstance(u, int) or not (0 <= u < n):
                raise FormatError(f"rotation of {v} references bad vertex {u}")
            if u == v:
                raise NonSimple(f"loop at vertex {v}")
            if u in seen:
                raise NonSimple(f"parallel edge between {v} and {u}")
            seen.add(u)
            edges.add((min(u, v), max(u, v)))
    for u, v in edges:
        if u not in rotations[v] or v not in rotations[u]:
            raise BrokenInvolution(f"edge {u}-{v} present at one end only")
    return edges


def _cyclic_subsequence_match(target, visits):
    """Match target (a list of vertices) as a cyclic subsequence of visits.

    Returns the list of matched positions, or None.  Each target vertex is
    matched to exactly one visit position; positions are strictly
    increasing within one wrap of the cyclic visit list.
    """
    r = len(visits)
    if not target:
        return None
    for s in range(r):
        if visits[s] != target[0]:
            continue
        positions = [s]
        cursor = s + 1
        ok = True
        for y in target[1:]:
            while cursor < s + r and visits[cursor % r] != y:
                cursor += 1
            if cursor >= s + r:
                ok = False
                break
            positions.append(cursor % r)
            cursor += 1
        if ok:
            return positions
    return None


@dataclass(frozen=True)
class RotationEmbedding:
    """A validated bordered embedding.  Immutable; construct via build_embedding."""

    rotations: tuple[tuple[int, ...], ...]
    boundary_walks: tuple[tuple[int, ...], ...] = ()
    origins: tuple[int, ...] | None = None

    # --- basic counts ---

    @property
    def n(self) -> int:
        return len(self.rotations)

    @cached_property
    def surface_kind(self) -> str:
        return SURFACE_BY_WALKS[len(self.boundary_walks)]

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for walk in self.boundary_walks for v in walk)

    @property
    def boundary_count(self) -> int:
        return sum(len(w) for w in self.boundary_walks)

    @property
    def interior_count(self) -> int:
        return self.n - self.boundary_count

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (min(u, v), max(u, v))
            for v, rot in enumerate(self.rotations)
            for u in rot
        )

    @cached_property
    def isolated_interior(self) -> frozenset[int]:
        return frozenset(
            v
            for v in range(self.n)
            if not self.rotations[v] and v not in self.boundary_vertices
        )

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotations[v]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    # --- faces of the bare rotation system ---

    @cached_property
    def graph_faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """All face orbits of the rotation system, as tuples of (v, u) darts."""
        rot_index = [
            {u: i for i, u in enumerate(rot)} for rot in self.rotations
        ]
        orbits = []
        seen = set()
        for v in range(self.n):
            for u in self.rotations[v]:
                d = (v, u)
                if d in seen:
                    continue
                orbit = []
                cur = d
                while cur not in seen:
                    seen.add(cur)
                    orbit.append(cur)
                    a, b = cur
                    rot_b = self.rotations[b]
                    cur = (b, rot_b[(rot_index[b][a] + 1) % len(rot_b)])
                orbits.append(tuple(orbit))
        return tuple(orbits)

    @cached_property
    def face_of_dart(self) -> dict[tuple[int, int], int]:
        out = {}
        for i, orbit in enumerate(self.graph_faces):
            for d in orbit:
                out[d] = i
        return out

    def face_visits(self, face: int) -> tuple[int, ...]:
        return tuple(d[0] for d in self.graph_faces[face])

    @cached_property
    def _walk_hosting(self):
        """Per walk: matched visit anchors, host faces, per-vertex leaving dart."""
        comp_of = self._component_of
        hosts = []  # per walk: dict vertex -> leaving dart or None
        host_faces = []  # per walk: frozenset of face ids
        for walk in self.boundary_walks:
            if not walk:
                hosts.append({})
                host_faces.append(frozenset())
                continue
            anchors, faces = self._match_walk(walk, comp_of)
            hosts.append(anchors)
            host_faces.append(faces)
        return hosts, host_faces

    def _match_walk(self, walk, comp_of):
        by_comp: dict[int, list[int]] = {}
        for x in walk:
            by_comp.setdefault(comp_of[x], []).append(x)
        anchors: dict[int, tuple[int, int] | None] = {}
        faces = set()
        for comp, restriction in by_comp.items():
            if all(not self.rotations[x] for x in restriction):
                for x in restriction:
                    anchors[x] = None
                continue
            target = list(reversed(restriction))
            matched = False
            for fi, orbit in enumerate(self.graph_faces):
                if comp_of[orbit[0][0]] != comp:
                    continue
                visits = [d[0] for d in orbit]
                positions = _cyclic_subsequence_match(target, visits)
                if positions is None:
                    continue
                for y, p in zip(target, positions):
                    anchors[y] = orbit[p]
                faces.add(fi)
                matched = True
                break
            if not matched:
                raise UnsupportedSurface(
                    f"boundary walk {walk} cannot be inscribed in any face"
                )
        return anchors, frozenset(faces)

    @cached_property
    def _component_of(self) -> list[int]:
        comp = [-1] * self.n
        cid = 0
        for s in range(self.n):
            if comp[s] != -1:
                continue
            stack = [s]
            comp[s] = cid
            while stack:
                v = stack.pop()
                for u in self.rotations[v]:
                    if comp[u] == -1:
                        comp[u] = cid
                        stack.append(u)
            cid += 1
        return comp

    @cached_property
    def host_faces(self) -> frozenset[int]:
        return frozenset().union(*self._walk_hosting[1]) if self.boundary_walks else frozenset()

    # --- overlay (graph + boundary arcs) ---

    @cached_property
    def overlay(self) -> Overlay:
        ends = [[("e", u) for u in rot] for rot in self.rotations]
        anchors_per_walk = self._walk_hosting[0]
        n_arcs = 0
        for wi, walk in enumerate(self.boundary_walks):
            b = len(walk)
            if b == 0:
                continue
            n_arcs += b if b > 1 else 1
            anchors = anchors_per_walk[wi]
            for i, x in enumerate(walk):
                pair = [("a", wi, i % b, 0), ("a", wi, (i - 1) % b, 1)]
                anchor = anchors.get(x)
                if anchor is None:
                    ends[x].extend(pair)
                else:
                    leave_to = anchor[1]
                    slot = ends[x].index(("e", leave_to))
                    ends[x][slot:slot] = pair
        ov = _build_mixed_overlay(
            [list(per) for per in ends], len(self.edges), n_arcs
        )
        return ov

    @cached_property
    def beyond_orbits(self) -> dict[int, int]:
        """Per walk id, the overlay orbit tracing the circle from outside."""
        ov = self.overlay
        out = {}
        for wi, walk in enumerate(self.boundary_walks):
            b = len(walk)
            if b == 0:
                continue
            key = ("a", wi, (b - 1) % b if b > 1 else 0, 1)
            slot = self.overlay.ends[walk[0]].index(key)
            oid = ov.orbit_of[(walk[0], slot)]
            orbit = ov.orbits[oid]
            arcs = [ov.end_of(d) for d in orbit]
            if len(orbit) != b or any(
                e[0] != "a" or e[1] != wi or e[3] != 1 for e in arcs
            ):
                raise UnsupportedSurface(
                    f"boundary walk {walk} does not bound a free circle"
                )
            out[wi] = oid
        return out

    # --- spec operations ---

    def faces(self) -> list[tuple[int, ...]]:
        """Facial walks of the surface faces, excluding boundary host faces."""
        hosts = self.host_faces
        return [
            self.face_visits(i)
            for i in range(len(self.graph_faces))
            if i not in hosts
        ]

    def boundary_walk_of(self, v: int) -> int | None:
        for wi, walk in enumerate(self.boundary_walks):
            if v in walk:
                return wi
        return None

    def validate(self) -> None:
        """Run all structural checks; raises on the first violation."""
        n = self.n
        edges = _validate_rotations(self.rotations)
        if len(self.boundary_walks) > 2:
            raise UnsupportedSurface("more than two boundary walks")
        seen_bverts = set()
        for walk in self.boundary_walks:
            if len(set(walk)) != len(walk):
                raise UnsupportedSurface(f"boundary walk repeats a vertex: {walk}")
            for x in walk:
                if not (0 <= x < n):
                    raise FormatError(f"boundary walk references bad vertex {x}")
                if x in seen_bverts:
                    raise UnsupportedSurface(
                        f"vertex {x} lies on two boundary walks"
                    )
                seen_bverts.add(x)
        if len(self.boundary_walks) == 2 and any(
            not w for w in self.boundary_walks
        ):
            raise UnsupportedSurface(
                "cylinder boundary walks must both be nonempty"
            )
        ov = self.overlay
        active = [v for v in range(n) if ov.ends[v]]
        if active:
            seen = {active[0]}
            stack = [active[0]]
            while stack:
                v = stack.pop()
                for i in range(len(ov.ends[v])):
                    u = ov.twin[(v, i)][0]
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            if len(seen) != len(active):
                raise UnsupportedSurface(
                    "embedding is disconnected away from the boundary"
                )
            euler = len(active) - ov.n_edges + len(ov.orbits)
            if euler != 2:
                raise UnsupportedSurface(
                    f"rotation system has positive genus (V-E+F = {euler})"
                )
        self.beyond_orbits  # walk-circle purity check

    # --- serialization ---

    def to_text(self) -> str:
        lines = [f"surface {self.surface_kind}"]
        bset = self.boundary_vertices
        for v in range(self.n):
            lines.append(f"v {v} {'b' if v in bset else 'i'}")
        for v in range(self.n):
            if self.rotations[v]:
                lines.append("rot " + " ".join(map(str, (v,) + self.rotations[v])))
        for walk in self.boundary_walks:
            lines.append(("bwalk " + " ".join(map(str, walk))).rstrip())
        return "\n".join(lines) + "\n"


def _orient_walk(probe: RotationEmbedding, walk: tuple[int, ...]):
    """Return the walk oriented so it inscribes into host faces as stored.

    A walk inscribes when its reversal is a cyclic subsequence of a host
    facial walk per touched component; callers may pass either direction.
    """
    if not walk:
        return walk
    for candidate in (walk, walk[::-1]):
        try:
            probe._match_walk(candidate, probe._component_of)
            return candidate
        except UnsupportedSurface:
            continue
    raise UnsupportedSurface(
        f"boundary walk {walk} cannot be inscribed in any face"
    )


def build_embedding(
    rotations,
    boundary_walks=(),
    expected_surface: str | None = None,
    origins=None,
) -> RotationEmbedding:
    """Validate raw rotation data and return an immutable embedding.

    Raises BrokenInvolution, NonSimple, or UnsupportedSurface per the
    specific defect; FormatError for out-of-range references.
    """
    rot_t = tuple(tuple(rot) for rot in rotations)
    _validate_rotations(rot_t)
    probe = RotationEmbedding(rotations=rot_t, boundary_walks=())
    walks_t = tuple(
        _orient_walk(probe, tuple(w)) for w in boundary_walks
    )
    emb = RotationEmbedding(
        rotations=rot_t,
        boundary_walks=walks_t,
        origins=tuple(origins) if origins is not None else None,
    )
    emb.validate()
    if expected_surface is not None and emb.surface_kind != expected_surface:
        raise UnsupportedSurface(
            f"declared {expected_surface}, derived {emb.surface_kind}"
        )
    return emb


def boundary_vertex_count(e: RotationEmbedding) -> int:
    """Number of graph vertices on the surface boundary."""
    return e.boundary_count


def faces(e: RotationEmbedding) -> list[tuple[int, ...]]:
    return e.faces()


# --- surface-specific wrappers ---


@dataclass(frozen=True)
class DiskGraph:
    """An embedding in the closed disk, with its boundary/interior split."""

    base: RotationEmbedding
    boundary_count: int
    interior_count: int

    @classmethod
    def from_embedding(cls, e: RotationEmbedding) -> "DiskGraph":
        if e.surface_kind != "disk":
            raise UnsupportedSurface(f"not a disk embedding: {e.surface_kind}")
        return cls(e, e.boundary_count, e.interior_count)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def walk(self) -> tuple[int, ...]:
        return self.base.boundary_walks[0]


@dataclass(frozen=True)
class CylinderGraph:
    """An embedding in the cylinder, with its two boundary vertex sets."""

    base: RotationEmbedding
    side1: frozenset[int] = field(default=frozenset())
    side2: frozenset[int] = field(default=frozenset())

    @classmethod
    def from_embedding(cls, e: RotationEmbedding) -> "CylinderGraph":
        if e.surface_kind != "cylinder":
            raise UnsupportedSurface(
                f"not a cylinder embedding: {e.surface_kind}"
            )
        return cls(
            e,
            frozenset(e.boundary_walks[0]),
            frozenset(e.boundary_walks[1]),
        )

    @property
    def n(self) -> int:
        return self.base.n

    @cached_property
    def distance(self) -> int | float:
        """Graph distance between the two boundary sides (inf if none)."""
        if not self.side1 or not self.side2:
            raise EmptyBoundarySide("both cylinder sides must be nonempty")
        dist = {v: 0 for v in self.side1}
        frontier = sorted(self.side1)
        d = 0
        while frontier:
            if any(v in self.side2 for v in frontier):
                return d
            d += 1
            nxt = []
            for v in frontier:
                for u in self.base.rotations[v]:
                    if u not in dist:
                        dist[u] = d
                        nxt.append(u)
            frontier = nxt
        return float("inf")


# --- text format ---


def parse_graph(text: str) -> RotationEmbedding:
    """Parse the line-based graph format; strict about every directive."""
    surface = None
    flags: dict[int, str] = {}
    rots: dict[int, tuple[int, ...]] = {}
    walks: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "surface":
                if surface is not None:
                    raise FormatError("duplicate surface line")
                if len(parts) != 2 or parts[1] not in ("disk", "cylinder", "sphere"):
                    raise FormatError(f"bad surface line: {line!r}")
                surface = parts[1]
            elif kind == "v":
                if len(parts) != 3 or parts[2] not in ("b", "i"):
                    raise FormatError(f"bad vertex line: {line!r}")
                vid = int(parts[1])
                if vid in flags:
                    raise FormatError(f"duplicate vertex {vid}")
                flags[vid] = parts[2]
            elif kind == "rot":
                if len(parts) < 2:
                    raise FormatError(f"bad rot line: {line!r}")
                vid = int(parts[1])
                if vid in rots:
                    raise FormatError(f"duplicate rot line for vertex {vid}")
                rots[vid] = tuple(int(p) for p in parts[2:])
            elif kind == "bwalk":
                walks.append(tuple(int(p) for p in parts[1:]))
            else:
                raise FormatError(f"unknown directive {kind!r}")
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {line!r}") from exc
    if surface is None:
        raise FormatError("missing surface line")
    n = len(flags)
    if n == 0:
        raise FormatError("no vertices")
    if sorted(flags) != list(range(n)):
        raise FormatError("vertex ids must be dense integers from 0")
    for vid in rots:
        if vid not in flags:
            raise FormatError(f"rot line for undeclared vertex {vid}")
    rotations = [rots.get(v, ()) for v in range(n)]
    emb = build_embedding(rotations, walks, expected_surface=surface)
    for v in range(n):
        should = "b" if v in emb.boundary_vertices else "i"
        if flags[v] != should:
            raise FormatError(
                f"vertex {v} flagged {flags[v]!r} but walks say {should!r}"
            )
    return emb


def serialize_graph(e: RotationEmbedding) -> str:
    return e.to_text()
