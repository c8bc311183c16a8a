from itertools import combinations

import numpy as np
import pytest

from surround_tools.errors import FieldError, LatinSquareError
from surround_tools.latin_tools import (SUPPORTED_ORDERS, LatinSquare, are_orthogonal, build_field,
                                        format_juxtaposition, generate_mols, is_latin, juxtapose, square_parts,
                                        verify_field_axioms)


def test_gf2_and_gf4_arithmetic():
    f2 = build_field(2)
    assert f2.add[1, 1] == 0
    f4 = build_field(4)
    assert f4.mul[2, 2] == 3  # x * x = x + 1


@pytest.mark.parametrize('q', SUPPORTED_ORDERS)
def test_every_supported_field_is_a_field(q):
    verify_field_axioms(build_field(q))


@pytest.mark.parametrize('q, reason', [(6, 'not a prime power'), (1, 'not a prime power'), (32, 'unsupported')])
def test_unsupported_orders(q, reason):
    with pytest.raises(FieldError, match=reason):
        build_field(q)


def test_broken_tables_are_detected():
    f = build_field(3)
    broken = type(f)(p=f.p, e=f.e, poly=f.poly, add=f.add, mul=np.zeros_like(f.mul))
    with pytest.raises(FieldError):
        verify_field_axioms(broken)


@pytest.mark.parametrize('k', [2, 3, 4, 5, 7, 8, 9])
def test_generated_families_are_mutually_orthogonal(k):
    family = generate_mols(k)
    assert len(family.squares) == k - 1
    assert all(is_latin(sq) for sq in family.squares)
    assert all(are_orthogonal(a, b) for a, b in combinations(family.squares, 2))


def test_order_two_square():
    assert generate_mols(2).squares[0].to_list() == [[0, 1], [1, 0]]


def test_generation_is_deterministic():
    assert generate_mols(5) == generate_mols(5)


def test_is_latin_and_malformed_grids():
    assert is_latin(LatinSquare.from_rows([[0, 1], [1, 0]]))
    assert not is_latin(LatinSquare.from_rows([[0, 1], [0, 1]]))
    with pytest.raises(LatinSquareError):
        is_latin(LatinSquare.from_rows([[0, 1, 2], [1, 0]]))
    with pytest.raises(LatinSquareError):
        is_latin(LatinSquare.from_rows([[0, 2], [2, 0]]))


def test_juxtaposition():
    sq = LatinSquare.from_rows([[0, 1], [1, 0]])
    assert juxtapose(sq, sq) == [[(0, 0), (1, 1)], [(1, 1), (0, 0)]]
    assert not are_orthogonal(sq, sq)
    a, b = generate_mols(3).squares
    assert len({pair for row in juxtapose(a, b) for pair in row}) == 9
    with pytest.raises(LatinSquareError):
        juxtapose(sq, a)
    assert format_juxtaposition(sq, sq).splitlines()[0] == '(0,0) (1,1)'


def test_square_parts_cover_the_grid():
    sq = generate_mols(4).squares[1]
    parts = square_parts(sq)
    assert sorted(len(cells) for cells in parts.values()) == [4] * 4
    assert all(sq.grid[r][c] == symbol for symbol, cells in parts.items() for r, c in cells)
