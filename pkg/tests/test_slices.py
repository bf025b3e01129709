import pytest

from hypverify.embedding import build_embedding
from hypverify.errors import InvalidSlice
from hypverify.slices import (
    ArcSegment,
    EdgeSegment,
    FaceSegment,
    SliceSpec,
    TraceStep,
    cut_along_slice,
    slice_boundary_size,
    whole_surface_spec,
)

from conftest import bowtie_disk, triangle_in_disk


def edge_cycle_spec(vertices, side="left"):
    return SliceSpec(
        tuple(TraceStep(v, EdgeSegment()) for v in vertices), side
    )


def c4_with_chord():
    """C4 0-1-2-3 in a disk plus the chord 0-2, all on the boundary."""
    return build_embedding(
        rotations=[(3, 2, 1), (0, 2), (1, 0, 3), (2, 0)],
        boundary_walks=[(0, 1, 2, 3)],
    )


class TestBoundarySize:
    def test_triangle_trace(self):
        e = triangle_in_disk()
        assert slice_boundary_size(e, edge_cycle_spec((0, 1, 2))) == 3

    def test_reversed_triangle_trace(self):
        e = triangle_in_disk()
        assert (
            slice_boundary_size(e, edge_cycle_spec((2, 1, 0), side="right"))
            == 3
        )
        # the left of the reversed trace is the fragmented outer ring,
        # which is not a single face
        with pytest.raises(InvalidSlice):
            slice_boundary_size(e, edge_cycle_spec((2, 1, 0)))

    def test_isolated_vertex_disk(self):
        # one boundary vertex, one isolated interior vertex; the slice is
        # the whole disk, traced through the single boundary vertex once
        e = build_embedding([(), ()], [(0,)])
        spec = SliceSpec(
            (TraceStep(0, ArcSegment(0, 0)),),
            isolated_inside=frozenset({1}),
        )
        assert slice_boundary_size(e, spec) == 1
        piece = cut_along_slice(e, spec)
        assert piece.n == 2
        assert piece.boundary_count == 1

    def test_slit_counts_multiplicity(self):
        # slitting along a pendant edge visits its attachment twice
        e = build_embedding(
            rotations=[(2, 3, 1), (0, 2), (1, 0), (0,)],
            boundary_walks=[(0, 1, 2)],
        )
        walk = e.boundary_walks[0]
        k = walk.index(0)
        steps = (
            TraceStep(0, EdgeSegment()),
            TraceStep(3, EdgeSegment()),
        ) + tuple(
            TraceStep(walk[(k + j) % 3], ArcSegment(0, (k + j) % 3))
            for j in range(3)
        )
        assert slice_boundary_size(e, SliceSpec(steps)) == 5


class TestCut:
    def test_chordal_triangle_slice_is_identity_subgraph(self):
        e = c4_with_chord()
        spec = edge_cycle_spec((0, 1, 2))
        piece = cut_along_slice(e, spec)
        assert piece.n == 3
        assert len(piece.edges) == 3
        assert piece.boundary_count == 3
        assert piece.origins == (0, 1, 2)

    def test_other_side_of_chord(self):
        # the companion slice rides the chord then the boundary arcs past 3
        e = c4_with_chord()
        assert e.boundary_walks[0] == (0, 1, 2, 3)
        spec = SliceSpec(
            (
                TraceStep(0, EdgeSegment()),
                TraceStep(2, ArcSegment(0, 2)),
                TraceStep(3, ArcSegment(0, 3)),
            )
        )
        piece = cut_along_slice(e, spec)
        assert piece.n == 3
        assert sorted(piece.origins) == [0, 2, 3]
        assert len(piece.edges) == 3

    def test_bowtie_one_triangle_chord_slice(self):
        # a chord through the outer face from one corner of the shared
        # vertex to the other cuts off one triangle
        e = bowtie_disk()
        f = e.face_of_dart[(1, 0)]
        visits = [d[0] for d in e.graph_faces[f]]
        assert sorted(visits) == [0, 0, 1, 2, 3, 4]
        p, q = [i for i, v in enumerate(visits) if v == 0]
        piece = cut_along_slice(
            e, SliceSpec((TraceStep(0, FaceSegment(f, p, q)),))
        )
        other = cut_along_slice(
            e, SliceSpec((TraceStep(0, FaceSegment(f, q, p)),))
        )
        assert {piece.n, other.n} == {3}
        assert sorted(piece.origins + other.origins) == [0, 0, 1, 2, 3, 4]
        assert len(piece.edges) == len(other.edges) == 3

    def test_whole_disk_identity(self):
        e = c4_with_chord()
        piece = cut_along_slice(e, whole_surface_spec(e))
        assert piece.n == e.n
        assert len(piece.edges) == len(e.edges)
        assert piece.boundary_count == e.boundary_count
        assert sorted(piece.origins) == list(range(e.n))

    def test_bowtie_double_pinch_rejected(self):
        # a curve through the shared vertex twice pinches the inside into
        # two components, so "around both triangles" is not a single face
        e = bowtie_disk()
        f = e.face_of_dart[(1, 0)]
        visits = [d[0] for d in e.graph_faces[f]]
        p, q = [i for i, v in enumerate(visits) if v == 0]
        spec = SliceSpec(
            (
                TraceStep(0, FaceSegment(f, p, q)),
                TraceStep(0, FaceSegment(f, q, p)),
            )
        )
        with pytest.raises(InvalidSlice):
            cut_along_slice(e, spec)

    def test_size_invariant(self):
        # |V(piece)| = interior content + boundary size with multiplicity
        e = c4_with_chord()
        for spec in (
            edge_cycle_spec((0, 1, 2)),
            whole_surface_spec(e),
        ):
            piece = cut_along_slice(e, spec)
            inside = piece.n - slice_boundary_size(e, spec)
            assert inside >= 0
            assert piece.boundary_count == slice_boundary_size(e, spec)

    def test_cylinder_piece_from_disk(self):
        # triangular prism in a disk: outer triangle 0,1,2 on the circle,
        # inner triangle 3,4,5, radial spokes; cutting along the inner
        # cycle and keeping the boundary side yields a cylinder
        e = build_embedding(
            rotations=[
                (2, 3, 1),
                (0, 4, 2),
                (1, 5, 0),
                (0, 5, 4),
                (3, 5, 1),
                (2, 4, 3),
            ],
            boundary_walks=[(0, 1, 2)],
        )
        spec = edge_cycle_spec((3, 4, 5), side="right")
        piece = cut_along_slice(e, spec)
        assert piece.surface_kind == "cylinder"
        assert piece.n == 6

        inner = cut_along_slice(e, edge_cycle_spec((3, 4, 5), side="left"))
        assert inner.surface_kind == "disk"
        assert inner.n == 3

    def test_face_count_matches_inside(self):
        e = c4_with_chord()
        piece = cut_along_slice(e, edge_cycle_spec((0, 1, 2)))
        assert len(piece.faces()) == 1

    def test_invalid_nonexistent_edge(self):
        e = triangle_in_disk()
        with pytest.raises(InvalidSlice):
            slice_boundary_size(
                e,
                SliceSpec(
                    (
                        TraceStep(0, EdgeSegment()),
                        TraceStep(2, EdgeSegment()),
                        TraceStep(1, EdgeSegment()),
                        TraceStep(0, EdgeSegment()),
                    )
                ),
            )

    def test_invalid_double_ride_same_direction(self):
        e = triangle_in_disk()
        steps = (
            TraceStep(0, EdgeSegment()),
            TraceStep(1, EdgeSegment()),
            TraceStep(0, EdgeSegment()),
            TraceStep(1, EdgeSegment()),
        )
        with pytest.raises(InvalidSlice):
            slice_boundary_size(e, SliceSpec(steps))

    def test_separating_slit_is_rejected(self):
        # riding the full chord 0-2 both ways plus the whole circle walks
        # the boundary of the union of two faces, not of one face
        e = c4_with_chord()
        walk = e.boundary_walks[0]
        k = walk.index(0)
        steps = (
            TraceStep(0, EdgeSegment()),
            TraceStep(2, EdgeSegment()),
        ) + tuple(
            TraceStep(walk[(k + j) % 4], ArcSegment(0, (k + j) % 4))
            for j in range(4)
        )
        with pytest.raises(InvalidSlice):
            cut_along_slice(e, SliceSpec(steps))

    def test_slit_cut_duplicates_pendant_edge(self):
        # triangle on the circle plus an interior pendant vertex 3 at 0;
        # slitting along 0-3 and around the circle keeps one region and
        # duplicates the slit edge
        e = build_embedding(
            rotations=[(2, 3, 1), (0, 2), (1, 0), (0,)],
            boundary_walks=[(0, 1, 2)],
        )
        walk = e.boundary_walks[0]
        k = walk.index(0)
        steps = (
            TraceStep(0, EdgeSegment()),  # slit down
            TraceStep(3, EdgeSegment()),  # bounce back
        ) + tuple(
            TraceStep(walk[(k + j) % 3], ArcSegment(0, (k + j) % 3))
            for j in range(3)
        )
        piece = cut_along_slice(e, SliceSpec(steps))
        assert piece.n == 5
        assert piece.boundary_count == 5
        assert piece.origins.count(0) == 2
        assert len(piece.edges) == 5
