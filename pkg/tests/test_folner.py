from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orderlab.errors import InvalidArgument
from orderlab.folner import defect, defect_trend, folner_box, interior_ratio
from orderlab.groups import FiniteWindow, Heisenberg, IntegerLattice, Unipotent, identity

Z2 = IntegerLattice(2)
H = Heisenberg()


def _brute_defect(g, F):
    # left translate every element and take the symmetric difference
    gF = {F.group.mul(g.coords, c) for c in F.coords}
    return Fraction(len(gF ^ F.coord_set), len(F))


@pytest.mark.parametrize("n", range(2, 21))
def test_z2_box_defect(n):
    assert defect(Z2.element(1, 0), folner_box(Z2, n)) == Fraction(2, n + 1)


@given(st.integers(1, 12), st.integers(-3, 3), st.integers(-3, 3))
def test_z2_defect_matches_symmetric_difference(n, a, b):
    g, F = Z2.element(a, b), folner_box(Z2, n)
    assert defect(g, F) == _brute_defect(g, F)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heisenberg_defect_matches_symmetric_difference(n):
    F = folner_box(H, n)
    for g in (H.element(0, 1, 0), H.element(1, 0, 0), H.element(1, -1, 2)):
        assert defect(g, F) == _brute_defect(g, F)


def test_identity_has_zero_defect():
    for group in (Z2, H, Unipotent(3)):
        assert defect(identity(group), folner_box(group, 1)) == 0


def test_heisenberg_defect_decays():
    series = defect_trend(H, H.element(0, 1, 0), 3, 12)
    vals = dict(series.values)
    assert vals[12] < vals[3] / 2
    assert series.passed


def test_series_serialisation():
    s = defect_trend(Z2, Z2.element(1, 0), 2, 4)
    data = s.to_json()
    assert [(v["numerator"], v["denominator"]) for v in data["values"]] == [(2, 3), (1, 2), (2, 5)]
    assert s.to_csv().splitlines()[0] == "n,numerator,denominator,float_value"


def test_interior_ratio():
    K = FiniteWindow(Z2, [(0, 0), (1, 0)])
    assert interior_ratio(K, folner_box(Z2, 3)) == Fraction(12, 16)


def test_bad_arguments():
    with pytest.raises(InvalidArgument):
        defect_trend(Z2, Z2.element(1, 0), 3, 3)
    with pytest.raises(InvalidArgument):
        defect(H.element(1, 0, 0), folner_box(Z2, 2))
