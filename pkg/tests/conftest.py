"""Shared small-instance builders used across the suite."""

import pytest

from hypverify.embedding import DiskGraph, build_embedding


def triangle_in_disk():
    """Triangle v0v1v2 with all three vertices on the boundary circle."""
    return build_embedding(
        rotations=[(2, 1), (0, 2), (1, 0)],
        boundary_walks=[(0, 1, 2)],
    )


def k4_sphere():
    """Tetrahedron: vertex 3 inside the triangle 0,1,2."""
    return build_embedding(
        rotations=[(2, 3, 1), (0, 3, 2), (1, 3, 0), (0, 2, 1)],
    )


def c4_sphere():
    """4-cycle on the sphere, two faces."""
    return build_embedding(
        rotations=[(3, 1), (0, 2), (1, 3), (2, 0)],
    )


def drum_cylinder():
    """Cube graph as a drum: two boundary 4-cycles joined by 4 rungs.

    Outer square 0-1-2-3, inner square 4-5-6-7, rungs i-(i+4).
    """
    rotations = [
        (3, 4, 1),
        (0, 5, 2),
        (1, 6, 3),
        (2, 7, 0),
        (0, 7, 5),
        (1, 4, 6),
        (2, 5, 7),
        (3, 6, 4),
    ]
    return build_embedding(rotations, [(0, 1, 2, 3), (4, 7, 6, 5)])


def grid_3x3_disk():
    """3x3 grid with the outer 8-cycle on the boundary circle.

    Ids row-major: 0 1 2 / 3 4 5 / 6 7 8.
    """
    rotations = [
        (1, 3),
        (2, 4, 0),
        (5, 1),
        (0, 4, 6),
        (1, 5, 7, 3),
        (2, 8, 4),
        (3, 7),
        (4, 8, 6),
        (5, 7),
    ]
    return build_embedding(rotations, [(0, 1, 2, 5, 8, 7, 6, 3)])


def bowtie_disk():
    """Two triangles sharing vertex 0, everything interior (empty boundary).

    Left triangle 0-1-2, right triangle 0-3-4.
    """
    return build_embedding(
        rotations=[(4, 3, 2, 1), (0, 2), (1, 0), (4, 0), (0, 3)],
        boundary_walks=[()],
    )


def path_in_disk():
    """Path 0-1-2 with its two endpoints on the boundary circle."""
    return build_embedding(
        rotations=[(1,), (0, 2), (1,)],
        boundary_walks=[(0, 2)],
    )


def disk(e) -> DiskGraph:
    return DiskGraph.from_embedding(e)


@pytest.fixture
def triangle():
    return triangle_in_disk()
