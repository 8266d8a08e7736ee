import itertools
import json

import pytest
from hypothesis import given, strategies as st

from orderlab.errors import InvalidArgument
from orderlab.groups import (
    FiniteWindow,
    GroupElement,
    Heisenberg,
    IntegerLattice,
    Unipotent,
    enumerate_box,
    enumeration_index,
    from_matrix,
    identity,
    inverse,
    iter_enumeration,
    matmul,
    multiply,
    parse_group,
    to_matrix,
)

from conftest import small_radius

H = Heisenberg()
T1, T2, T3 = H.element(0, 0, 1), H.element(0, 1, 0), H.element(1, 0, 0)


def coords_strategy(group, bound=6):
    return st.tuples(*[st.integers(-bound, bound)] * group.dim).map(lambda c: GroupElement(group, c))


def test_identity_coords():
    assert identity(IntegerLattice(2)).coords == (0, 0)
    assert identity(H).coords == (0, 0, 0)
    assert identity(Unipotent(3)).coords == (0,) * 6


def test_heisenberg_products_match_matrices():
    assert multiply(T3, T2).coords == (1, 1, 0)
    assert to_matrix(multiply(T3, T2)) == [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    assert multiply(T2, T3).coords == (1, 1, 1)
    assert matmul(to_matrix(T2), to_matrix(T3)) == to_matrix(multiply(T2, T3))


def test_generator_matrices():
    assert to_matrix(T1) == [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
    assert to_matrix(T2) == [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    assert to_matrix(T3) == [[1, 0, 0], [0, 1, 1], [0, 0, 1]]


def test_normal_form_matrix():
    # T3^2 T2^1 T1^5
    assert to_matrix(H.element(2, 1, 5)) == [[1, 1, 5], [0, 1, 2], [0, 0, 1]]
    word = multiply(multiply(multiply(T3, T3), T2), GroupElement(H, (0, 0, 5)))
    assert word.coords == (2, 1, 5)


def test_inverse_examples():
    assert inverse(IntegerLattice(2).element(3, -5)).coords == (-3, 5)
    assert inverse(T3).coords == (-1, 0, 0)


@pytest.mark.parametrize("group", [H, Unipotent(2), Unipotent(3), Unipotent(4)], ids=str)
def test_matrix_round_trip(group):
    import random

    rnd = random.Random(0)
    for _ in range(100):
        g = GroupElement(group, tuple(rnd.randint(-50, 50) for _ in range(group.dim)))
        assert from_matrix(group, to_matrix(g)) == g
    assert to_matrix(identity(group)) == [[int(i == j) for j in range(len(to_matrix(identity(group))))]
                                          for i in range(len(to_matrix(identity(group))))]


def test_product_formula_matches_matrix_product_on_box():
    U = Unipotent(3)
    box = enumerate_box(U, 1).elements
    for a in box:
        ma = to_matrix(a)
        for b in box:
            assert to_matrix(multiply(a, b)) == matmul(ma, to_matrix(b))


def test_unipotent_inverse_is_matrix_inverse():
    U = Unipotent(3)
    g = U.element(1, -2, 3, 4, -1, 7)
    assert matmul(to_matrix(g), to_matrix(inverse(g))) == to_matrix(identity(U))


def test_from_matrix_rejects_non_unipotent():
    with pytest.raises(InvalidArgument):
        from_matrix(H, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(InvalidArgument):
        from_matrix(H, [[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    with pytest.raises(InvalidArgument):
        to_matrix(IntegerLattice(2).element(1, 1))


def test_group_mismatch():
    with pytest.raises(InvalidArgument):
        multiply(T3, IntegerLattice(3).element(1, 0, 0))


def test_invalid_dimensions():
    with pytest.raises(InvalidArgument):
        IntegerLattice(0)
    with pytest.raises(InvalidArgument):
        Unipotent(1)


def test_heisenberg_agrees_with_unipotent2():
    U = Unipotent(2)

    def to_u(g):
        n3, n2, n1 = g.coords
        return U.element(n2, n3, n1)  # flat order a_1^1, a_2^1, a_1^2

    box = enumerate_box(H, 2).elements
    for a in box:
        assert to_matrix(a) == to_matrix(to_u(a))
        for b in box:
            assert to_u(multiply(a, b)) == multiply(to_u(a), to_u(b))


def test_associativity_and_inverses_on_boxes(group):
    r = small_radius(group)
    box = enumerate_box(group, r).elements
    sample = box if len(box) <= 30 else box[:: len(box) // 30]
    for a, b, c in itertools.product(sample, repeat=3):
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    e = identity(group)
    for g in enumerate_box(group, 3 if group.dim <= 3 else 1):
        assert multiply(g, inverse(g)) == e == multiply(inverse(g), g)
        assert multiply(g, e) == g == multiply(e, g)


@pytest.mark.parametrize("group", [H, Unipotent(3)], ids=str)
@given(data=st.data())
def test_associativity_random(group, data):
    a, b, c = (data.draw(coords_strategy(group)) for _ in range(3))
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert to_matrix(multiply(a, b)) == matmul(to_matrix(a), to_matrix(b))


def test_box_sizes():
    assert [e.coords for e in enumerate_box(IntegerLattice(1), 1)] == [(0,), (-1,), (1,)]
    assert len(enumerate_box(H, 1)) == 27
    assert len(enumerate_box(IntegerLattice(2), 2)) == 25
    assert len(enumerate_box(H, 2)) == 5 * 5 * 9
    assert len(enumerate_box(Unipotent(3), 1)) == 3 ** 6


def test_boxes_nest_and_exhaust(group):
    boxes = [set(enumerate_box(group, n).coords) for n in range(3 if group.dim <= 3 else 2)]
    for small, big in zip(boxes, boxes[1:]):
        assert small < big
    g = GroupElement(group, tuple(range(1, group.dim + 1)))
    n = group.grade(g.coords)
    assert g in enumerate_box(group, n) and g not in enumerate_box(group, n - 1)


def test_enumeration_index():
    Z = IntegerLattice(1)
    assert enumeration_index(identity(Z)) == 0
    assert enumeration_index(Z.element(-1)) == 1
    assert enumeration_index(Z.element(1)) == 2
    for group in (IntegerLattice(2), H, Unipotent(3)):
        r = 2 if group.dim <= 3 else 1
        for i, c in enumerate(iter_enumeration(group, r)):
            assert enumeration_index(GroupElement(group, c)) == i


def test_enumeration_respects_grading(group):
    r = 2 if group.dim <= 3 else 1
    inner = enumerate_box(group, r - 1)
    shell = [g for g in enumerate_box(group, r) if g not in inner]
    assert max(enumeration_index(g) for g in inner) < min(enumeration_index(g) for g in shell)


def test_window_rejects_duplicates():
    with pytest.raises(InvalidArgument):
        FiniteWindow(IntegerLattice(1), [(0,), (0,)])


def test_json_round_trip():
    g = Unipotent(3).element(1, 2, 3, 4, 5, 6)
    data = json.loads(json.dumps(g.to_json()))
    assert data == {"group": "unipotent:3", "coords": [1, 2, 3, 4, 5, 6]}
    assert GroupElement.from_json(data) == g
    assert parse_group("heisenberg") == H
    assert parse_group("zd:3") == IntegerLattice(3)
