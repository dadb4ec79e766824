import pytest

from cubical.lattice import (
    NEIGHBOR_OFFSETS,
    OFFSET_BIT,
    CubicalComplex,
    boundary,
    cell_to_cube,
    closure,
    coboundary,
    cube_to_cell,
    dimension,
    euler_characteristic,
    neighbor_mask,
)
from cubical.complex_io import dumps_complex, loads_complex, looks_like_complex
from pipeline.errors import ComplexError


def test_dimension_counts_odd_coordinates():
    assert dimension((0, 0, 0)) == 0
    assert dimension((1, 0, 2)) == 1
    assert dimension((1, 1, 1)) == 3


def test_boundary_of_edges_and_squares():
    assert boundary((0, 0, 0)) == []
    assert boundary((1, 0, 0)) == [(0, 0, 0), (2, 0, 0)]
    assert boundary((1, 1, 0)) == [(0, 1, 0), (2, 1, 0), (1, 0, 0), (1, 2, 0)]


def test_cube_cell_conversion():
    assert cube_to_cell((0, 0, 0)) == (1, 1, 1)
    assert cell_to_cube((3, 1, 5)) == (1, 0, 2)
    with pytest.raises(ComplexError):
        cell_to_cube((0, 1, 1))


def test_single_cube_closure_and_euler():
    k = CubicalComplex([(0, 0, 0)])
    assert len(k.cells()) == 27
    assert k.euler_characteristic() == 1
    assert closure([(1, 1, 1)]) == k.cells()


def test_euler_characteristic_of_shapes(ring):
    assert euler_characteristic([]) == 0
    assert CubicalComplex.box((0, 0, 0), (1, 1, 1)).euler_characteristic() == 1
    assert ring.euler_characteristic() == 0

    shell = CubicalComplex.box((0, 0, 0), (2, 2, 2)).difference([(1, 1, 1)])
    assert shell.euler_characteristic() == 2

    hollow = closure([(1, 1, 1)]) - {(1, 1, 1)}
    assert euler_characteristic(hollow) == 2


def test_coboundary_inside_single_cube():
    k = CubicalComplex([(0, 0, 0)])
    assert coboundary((0, 0, 0), k) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert coboundary((1, 1, 0), k) == [(1, 1, 1)]
    assert coboundary((1, 1, 1), k) == []
    with pytest.raises(ComplexError):
        coboundary((4, 4, 4), k)


def test_neighbor_masks():
    assert neighbor_mask((1, 1, 1), CubicalComplex([(0, 0, 0)])) == 0

    pair = CubicalComplex([(0, 0, 0), (1, 0, 0)])
    assert pair.neighbor_mask((1, 1, 1)) == 1 << OFFSET_BIT[(1, 0, 0)]
    assert pair.neighbor_mask((3, 1, 1)) == 1 << OFFSET_BIT[(-1, 0, 0)]

    block = CubicalComplex.box((0, 0, 0), (2, 2, 2))
    assert block.neighbor_mask(cube_to_cell((1, 1, 1))) == (1 << len(NEIGHBOR_OFFSETS)) - 1

    with pytest.raises(ComplexError):
        neighbor_mask((1, 1, 0), block)


def test_components_by_adjacency():
    diagonal = CubicalComplex([(0, 0, 0), (1, 1, 1)])
    assert len(diagonal.components("vertex")) == 1
    assert len(diagonal.components("face")) == 2

    apart = CubicalComplex([(0, 0, 0), (5, 0, 0)])
    assert not apart.is_connected()
    assert apart.components()[0] == frozenset({(0, 0, 0)})


def test_bitmap_membership_and_box():
    k = CubicalComplex([(2, 3, 4), (2, 3, 5)])
    assert k.has_cube((2, 3, 5))
    assert not k.has_cube((9, 9, 9))
    assert k.has_cell((5, 7, 10))
    lo, hi = k.bounding_box
    assert lo == (1, 2, 3) and hi == (3, 4, 6)
    assert k == CubicalComplex([(2, 3, 5), (2, 3, 4)])
    assert hash(k) == hash(CubicalComplex(list(k)))


def test_complex_dump_format():
    k = CubicalComplex([(0, 0, 0), (1, -2, 3)])
    text = dumps_complex(k)
    assert looks_like_complex(text)
    assert not looks_like_complex("[[1,2],[2,1]]")
    assert not looks_like_complex("3_1: braid 1,1,1")
    assert loads_complex(text) == k
    with pytest.raises(ComplexError):
        loads_complex("1 2\n")
