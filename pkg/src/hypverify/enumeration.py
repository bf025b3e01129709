"""Canonical codes and exhaustive generation of small embedded graphs.

The canonical code of an embedding is the minimum, over every starting
dart and both orientations, of a breadth-first relabeling code computed
on the overlay (graph plus boundary arcs).  Two embeddings get the same
code exactly when an embedding isomorphism maps one to the other, fixing
the boundary structure setwise and allowing reflection.

Generation runs level-wise on sphere embeddings: pendant-vertex additions
move between vertex counts, chord additions through a face close each
level, and each level is deduplicated by canonical code.  Disk and
cylinder streams decorate sphere embeddings with inscribed boundary
walks and deduplicate again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .embedding import (
    CylinderGraph,
    DiskGraph,
    RotationEmbedding,
    build_embedding,
)
from .errors import FormatError, UnsupportedSurface


@dataclass(frozen=True)
class CanonicalCode:
    """Total-order key identifying an embedding up to isomorphism."""

    data: bytes

    def __lt__(self, other):
        return self.data < other.data


def _overlay_tables(e: RotationEmbedding):
    ov = e.overlay
    ends = ov.ends
    twin = ov.twin
    return ends, twin


def _encode_from(ends, twin, start, orient):
    """Relabeling code anchored at one dart and orientation."""
    v0 = start[0]
    labels = {v0: 0}
    entry = {v0: start[1]}
    queue = [v0]
    pieces = []
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        per_v = ends[v]
        deg = len(per_v)
        s0 = entry[v]
        row = [deg]
        for step in range(deg):
            s = (s0 + orient * step) % deg
            end = per_v[s]
            u, su = twin[(v, s)]
            if u not in labels:
                labels[u] = len(labels)
                entry[u] = su
                queue.append(u)
            row.append((end[0] == "a", labels[u]))
        pieces.append(tuple(row))
    return tuple(pieces)


def _candidate_darts(ends):
    # the code row starts with the overlay degree, so the minimum is
    # always anchored at a vertex of minimal positive degree
    degs = [len(per_v) for per_v in ends if per_v]
    if not degs:
        return
    dmin = min(degs)
    for v, per_v in enumerate(ends):
        if len(per_v) == dmin:
            for s in range(len(per_v)):
                yield (v, s)


def canonical_code(e: RotationEmbedding) -> CanonicalCode:
    """Code invariant under relabeling, walk rotation, and reflection."""
    ends, twin = _overlay_tables(e)
    prefix = (
        len(e.boundary_walks),
        tuple(sorted(len(w) for w in e.boundary_walks)),
        e.n,
        len(e.isolated_interior),
    )
    best = None
    for start in _candidate_darts(ends):
        for orient in (1, -1):
            code = _encode_from(ends, twin, start, orient)
            if best is None or code < best:
                best = code
    return CanonicalCode(repr((prefix, best)).encode())


def automorphism_count(e: RotationEmbedding) -> int:
    """Number of self-maps (including reflections) fixing the boundary
    structure setwise; 2 for a doubly-symmetric edge, etc."""
    ends, twin = _overlay_tables(e)
    codes = [
        _encode_from(ends, twin, start, orient)
        for start in _candidate_darts(ends)
        for orient in (1, -1)
    ]
    if not codes:
        return 1
    best = min(codes)
    return sum(1 for c in codes if c == best)


# --- sphere-level generation ---


def _graph_distance(e: RotationEmbedding, src: int, dst: int) -> int | float:
    if src == dst:
        return 0
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for u in e.rotations[v]:
                if u not in dist:
                    if u == dst:
                        return dist[v] + 1
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return float("inf")


def _corners(e: RotationEmbedding):
    """(face index, vertex, slot-of-leaving-end) for every face corner."""
    out = []
    for fi, orbit in enumerate(e.graph_faces):
        for p, (v, next_u) in enumerate(orbit):
            out.append((fi, p, v, e.rotations[v].index(next_u)))
    return out


def _insert(rot: tuple[int, ...], slot: int, item: int) -> tuple[int, ...]:
    return rot[:slot] + (item,) + rot[slot:]


def _pendant_children(e: RotationEmbedding):
    """Add one new degree-1 vertex into each face corner."""
    n = e.n
    if not e.edges:
        # only the single-vertex seed is edgeless and connected
        return [RotationEmbedding(((1,), (0,)))] if n == 1 else []
    children = []
    for _, _, v, slot in _corners(e):
        rots = list(e.rotations)
        rots[v] = _insert(rots[v], slot, n)
        rots.append((v,))
        children.append(RotationEmbedding(tuple(rots)))
    return children


def _chord_children(e: RotationEmbedding, girth_min: int, cur_girth):
    """Add one edge between two corners of a common face."""
    children = []
    by_face: dict[int, list[tuple[int, int, int]]] = {}
    for fi, p, v, slot in _corners(e):
        by_face.setdefault(fi, []).append((p, v, slot))
    for fi, corners in by_face.items():
        for i in range(len(corners)):
            for j in range(i + 1, len(corners)):
                _, v, sv = corners[i]
                _, u, su = corners[j]
                if v == u or u in e.rotations[v]:
                    continue
                cycle = _graph_distance(e, v, u) + 1
                new_girth = min(cur_girth, cycle)
                if new_girth < girth_min:
                    continue
                rots = list(e.rotations)
                rots[v] = _insert(rots[v], sv, u)
                rots[u] = _insert(rots[u], su, v)
                children.append((RotationEmbedding(tuple(rots)), new_girth))
    return children


def sphere_embeddings(
    max_vertices: int, girth_min: int = 3
) -> Iterator[tuple[RotationEmbedding, int | float]]:
    """All connected sphere embeddings up to isomorphism, with girth.

    Yields levels in vertex-count order; within a level the order is
    deterministic but unsorted (callers sort decorated codes).
    """
    if max_vertices < 1:
        return
    seed = RotationEmbedding(((),))
    level: dict[bytes, tuple[RotationEmbedding, int | float]] = {
        canonical_code(seed).data: (seed, float("inf"))
    }
    for n in range(1, max_vertices + 1):
        queue = list(level.values())
        while queue:
            emb, g = queue.pop()
            for child, cg in _chord_children(emb, girth_min, g):
                key = canonical_code(child).data
                if key not in level:
                    level[key] = (child, cg)
                    queue.append((child, cg))
        yield from level.values()
        if n == max_vertices:
            break
        nxt: dict[bytes, tuple[RotationEmbedding, int | float]] = {}
        for emb, g in level.values():
            for child in _pendant_children(emb):
                key = canonical_code(child).data
                if key not in nxt:
                    nxt[key] = (child, g)
        level = nxt


# --- boundary decoration ---


def _distinct_subsets(visits):
    """Position subsets of a facial walk hitting distinct vertices."""
    r = len(visits)
    out = []

    def rec(start, acc, used):
        if acc:
            out.append(tuple(acc))
        for p in range(start, r):
            if visits[p] in used:
                continue
            acc.append(p)
            used.add(visits[p])
            rec(p + 1, acc, used)
            used.remove(visits[p])
            acc.pop()

    rec(0, [], set())
    return out


def enumerate_disk_graphs(
    max_vertices: int,
    girth_min: int = 3,
    max_boundary: int | None = None,
    connectivity: str = "connected",
) -> Iterator[DiskGraph]:
    """All disk-embedded graphs up to embedded isomorphism.

    Each qualifying embedding appears exactly once; the stream is
    deterministic, code-ascending within each vertex count.
    """
    if connectivity != "connected":
        raise FormatError("only connected enumeration is supported")
    if max_vertices < 1:
        return
    pending_n = 1
    bucket: dict[bytes, RotationEmbedding] = {}
    for emb, _ in sphere_embeddings(max_vertices, girth_min):
        if emb.n != pending_n:
            for key in sorted(bucket):
                yield DiskGraph.from_embedding(bucket[key])
            bucket = {}
            pending_n = emb.n
        for walk in _disk_walks(emb, max_boundary):
            try:
                dec = build_embedding(emb.rotations, [walk])
            except UnsupportedSurface:
                continue
            key = canonical_code(dec).data
            if key not in bucket:
                bucket[key] = dec
    for key in sorted(bucket):
        yield DiskGraph.from_embedding(bucket[key])


def _disk_walks(emb: RotationEmbedding, max_boundary):
    yield ()
    if emb.n == 1 and not emb.edges:
        yield (0,)
        return
    seen = set()
    for orbit in emb.graph_faces:
        visits = [d[0] for d in orbit]
        for subset in _distinct_subsets(visits):
            if max_boundary is not None and len(subset) > max_boundary:
                continue
            walk = tuple(visits[p] for p in subset)
            if walk in seen:
                continue
            seen.add(walk)
            yield walk


def enumerate_cylinder_graphs(
    max_vertices: int, girth_min: int = 3
) -> Iterator[CylinderGraph]:
    """All cylinder-embedded graphs with two nonempty boundary walks."""
    if max_vertices < 1:
        return
    pending_n = 1
    bucket: dict[bytes, RotationEmbedding] = {}
    for emb, _ in sphere_embeddings(max_vertices, girth_min):
        if emb.n != pending_n:
            for key in sorted(bucket):
                yield CylinderGraph.from_embedding(bucket[key])
            bucket = {}
            pending_n = emb.n
        walks = list(_disk_walks(emb, None))
        for i, w1 in enumerate(walks):
            if not w1:
                continue
            for w2 in walks[i:]:
                if not w2 or set(w1) & set(w2):
                    continue
                try:
                    dec = build_embedding(emb.rotations, [w1, w2])
                except UnsupportedSurface:
                    continue
                key = canonical_code(dec).data
                if key not in bucket:
                    bucket[key] = dec
    for key in sorted(bucket):
        yield CylinderGraph.from_embedding(bucket[key])
