import math
from fractions import Fraction

import pytest

from hypverify.cylinder import (
    CylinderDecomposition,
    cut_open_along_path,
    distance_layers,
    fat_cylinder_check,
    is_fat,
    shortest_crossing_path,
    thin_layer_decomposition,
)
from hypverify.embedding import CylinderGraph, build_embedding
from hypverify.errors import NotFat
from hypverify.separator import internal_hyperbolicity_oracle

from conftest import drum_cylinder


def grid_cylinder(k, m):
    """C_k x P_m: m rings of k vertices; ring 0 and ring m-1 on the circles.

    Vertex (r, j) -> r*k + j.  Clockwise rotations from a radial layout
    (ring 0 outermost).
    """
    def vid(r, j):
        return r * k + j % k

    rots = []
    for r in range(m):
        for j in range(k):
            nbrs = []
            # order: ring-prev (outward), next-in-ring, ring-next (inward),
            # prev-in-ring; consistent clockwise order for a radial layout
            if r > 0:
                nbrs.append(vid(r - 1, j))
            nbrs.append(vid(r, j + 1))
            if r < m - 1:
                nbrs.append(vid(r + 1, j))
            nbrs.append(vid(r, j - 1))
            rots.append(tuple(nbrs))
    w1 = tuple(vid(0, j) for j in range(k))
    w2 = tuple(vid(m - 1, j) for j in range(k))
    return CylinderGraph.from_embedding(build_embedding(rots, [w1, w2]))


def pinched_cylinder(k, levels):
    """Layered cylinder where layer sizes follow ``levels``.

    Equal-size rings are joined by straight spokes; a smaller ring takes
    contiguous fan arcs.  Rings of size < 3 carry no ring edges.
    Rotations per vertex: outer neighbors in arc order, ring-next, inner
    neighbors reversed, ring-prev.
    """
    ids = []
    base = 0
    for size in levels:
        ids.append(list(range(base, base + size)))
        base += size
    n = base
    upl = {v: [] for v in range(n)}
    downl = {v: [] for v in range(n)}

    def assign(big, small):
        return {
            v: small[(j * len(small)) // len(big)] for j, v in enumerate(big)
        }

    for r in range(len(levels) - 1):
        a, b = ids[r], ids[r + 1]
        if len(a) == len(b):
            for j in range(len(a)):
                downl[a[j]].append(b[j])
                upl[b[j]].append(a[j])
        elif len(a) > len(b):
            m = assign(a, b)
            for v in a:
                downl[v].append(m[v])
                upl[m[v]].append(v)
        else:
            m = assign(b, a)
            for v in b:
                upl[v].append(m[v])
                downl[m[v]].append(v)
    rots = []
    for ring in ids:
        s = len(ring)
        for j, v in enumerate(ring):
            rot = list(upl[v])
            if s >= 3:
                rot.append(ring[(j + 1) % s])
            rot.extend(reversed(downl[v]))
            if s >= 3:
                rot.append(ring[(j - 1) % s])
            rots.append(tuple(rot))
    return CylinderGraph.from_embedding(
        build_embedding(rots, [tuple(ids[0]), tuple(ids[-1])])
    )


class TestLayers:
    def test_drum(self):
        g = CylinderGraph.from_embedding(drum_cylinder())
        assert distance_layers(g) == [4, 4]
        assert g.distance == 1

    def test_c6p4(self):
        g = grid_cylinder(6, 4)
        assert distance_layers(g) == [6, 6, 6, 6]

    def test_pinched(self):
        g = pinched_cylinder(6, (6, 6, 2, 6, 6))
        assert distance_layers(g) == [6, 6, 2, 6, 6]


class TestFat:
    def test_c6p4(self):
        g = grid_cylinder(6, 4)
        assert is_fat(g, 6)
        assert not is_fat(g, 7)

    def test_drum_vacuous(self):
        g = CylinderGraph.from_embedding(drum_cylinder())
        assert is_fat(g, 100)

    def test_pinched_not_fat(self):
        g = pinched_cylinder(6, (6, 6, 2, 6, 6))
        assert not is_fat(g, 3)


class TestCutOpen:
    def test_c6p4_slit(self):
        g = grid_cylinder(6, 4)
        path = shortest_crossing_path(g)
        assert len(path) == 4
        disk, spec = cut_open_along_path(g, path)
        assert disk.boundary_count == 12 + 2 * 3
        assert disk.interior_count == 12 - 2
        # every path vertex is duplicated by the slit
        assert disk.n == g.n + len(path)


class TestFatCheck:
    def test_drum_trivial(self):
        g = CylinderGraph.from_embedding(drum_cylinder())
        ledger = fat_cylinder_check(g, Fraction(1, 2))
        assert ledger["final_holds"]
        assert ledger["content"] == 0

    def test_c10p4(self):
        # 4c+2 = 10 <= 10 with c = 2
        g = grid_cylinder(10, 4)
        disk, _ = cut_open_along_path(g)
        assert internal_hyperbolicity_oracle(
            disk, Fraction(2), exhaustive_limit=0, samples=500
        ).holds
        ledger = fat_cylinder_check(g, Fraction(2))
        assert ledger["hyperbolic_holds"]
        assert ledger["final_holds"]

    def test_not_fat_raises(self):
        g = pinched_cylinder(8, (8, 8, 2, 8, 8))
        with pytest.raises(NotFat):
            fat_cylinder_check(g, Fraction(1))

    def test_synthetic_violation(self):
        # a (4c+2)-fat cylinder whose middle carries a dense blob: the
        # ambient graph is not hyperbolic, and the final bound fails
        g = blob_cylinder()
        c = Fraction(1, 2)
        assert is_fat(g, 4 * c + 2)
        ledger = fat_cylinder_check(g, c)
        assert not ledger["final_holds"]
        assert not ledger["hyperbolic_holds"]


def blob_cylinder():
    """C4 x P2 drum with a dense fan of extra vertices inside one face."""
    k = 4
    rots = {
        0: [3, 4, 1],
        1: [0, 5, 2],
        2: [1, 6, 3],
        3: [2, 7, 0],
        4: [0, 7, 5],
        5: [1, 4, 6],
        6: [2, 5, 7],
        7: [3, 6, 4],
    }
    # fan vertices 8..8+t-1 inside the face 0-1-5-4, all tied to 0 and 1;
    # 13 interior vertices beat the bound 2c*8 + 4c + 2 = 12 at c = 1/2
    t = 13
    fan = list(range(8, 8 + t))
    for i, v in enumerate(fan):
        rots[v] = [0, 1]
    # at 0: insert fan between 4 and 1 (inside that face), nearest-first
    rots[0] = [3, 4] + fan[::-1] + [1]
    rots[1] = [0] + fan + [5, 2]
    rotations = [tuple(rots[v]) for v in range(8 + t)]
    e = build_embedding(rotations, [(0, 1, 2, 3), (4, 7, 6, 5)])
    return CylinderGraph.from_embedding(e)


class TestDecomposition:
    def test_c6p4_no_thin_layers(self):
        g = grid_cylinder(6, 4)
        dec = thin_layer_decomposition(g, Fraction(1))
        assert dec.thin_levels == ()
        assert len(dec.pieces) == 1
        assert dec.pieces[0].fat
        assert dec.pieces[0].interior == 12

    def test_single_pinch(self):
        g = pinched_cylinder(6, (6, 6, 2, 6, 6))
        dec = thin_layer_decomposition(g, Fraction(1))
        assert dec.thin_levels == (2,)
        assert len(dec.curves) == 1
        assert len(dec.pieces) == 2
        assert sorted(dec.touched[0]) == sorted(
            [v for v in range(g.n) if distance_layers(g)[2] and v in (12, 13)]
        )

    def test_double_pinch(self):
        g = pinched_cylinder(6, (6, 6, 2, 6, 2, 6, 6))
        dec = thin_layer_decomposition(g, Fraction(1))
        assert dec.thin_levels == (2, 4)
        assert len(dec.pieces) == 3
        middle = dec.pieces[1]
        c = Fraction(1)
        assert middle.interior <= 16 * c * c + 12 * c + 2

    def test_additivity(self):
        for g in (
            grid_cylinder(6, 4),
            pinched_cylinder(6, (6, 6, 2, 6, 6)),
            pinched_cylinder(6, (6, 6, 2, 6, 2, 6, 6)),
        ):
            dec = thin_layer_decomposition(g, Fraction(1))
            touched = set()
            for t in dec.touched:
                touched |= set(t)
            total = sum(p.interior for p in dec.pieces)
            assert total + len(touched) + len(g.side1) + len(g.side2) == g.n
