import itertools

import pytest
from hypothesis import given, settings, strategies as st

from orderlab.errors import InvalidArgument
from orderlab.groups import GroupElement, Heisenberg, IntegerLattice, Unipotent, enumerate_box, matmul, to_matrix
from orderlab.order import (
    check_certificates,
    count_below,
    f_seq,
    h_seq,
    in_past,
    in_semigroup,
    less_than,
    standard_context,
    standard_generators,
    verify_admissibility,
    verify_conjugation_invariance,
    verify_past_axioms,
)

from conftest import small_radius

H = Heisenberg()


def _mat_inv_unipotent(m):
    """Inverse of a unit upper-triangular integer matrix by back substitution."""
    n = len(m)
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            inv[i][j] = -sum(m[i][k] * inv[k][j] for k in range(i + 1, j + 1))
    return inv


def _heisenberg_less(a, b):
    # b^-1 a computed with matrices, then the (n3, n2, n1) sign rule
    m = matmul(_mat_inv_unipotent(to_matrix(b)), to_matrix(a))
    key = (m[1][2], m[0][1], m[0][2])
    first = next((v for v in key if v), 0)
    return first < 0


def test_zd_past_examples():
    ctx = standard_context(IntegerLattice(2))
    e = lambda *c: GroupElement(ctx.group, c)  # noqa: E731
    assert in_past(ctx, e(0, -1))
    assert not in_past(ctx, e(0, 1))
    assert not in_past(ctx, e(0, 0))
    # sum decides first, then the shorter partial sum
    assert in_past(ctx, e(5, -6))
    assert in_past(ctx, e(-1, 1))
    assert not in_past(ctx, e(1, -1))


def test_heisenberg_past_examples():
    ctx = standard_context(H)
    assert in_past(ctx, H.element(-1, 0, 0))
    assert in_past(ctx, H.element(0, -1, 7))
    assert in_past(ctx, H.element(0, 0, -1))
    assert not in_past(ctx, H.element(1, -9, -9))
    assert less_than(ctx, H.element(0, 0, 0), H.element(1, 0, 0))


def test_heisenberg_order_matches_matrix_oracle():
    ctx = standard_context(H)
    box = enumerate_box(H, 1).elements
    for a, b in itertools.product(box, repeat=2):
        assert less_than(ctx, a, b) == _heisenberg_less(a, b)


@pytest.mark.parametrize(
    "group,radius",
    [(IntegerLattice(1), 6), (IntegerLattice(2), 3), (H, 1), (Unipotent(2), 1)],
    ids=str,
)
def test_order_is_strict_total_and_left_invariant(group, radius):
    ctx = standard_context(group)
    box = enumerate_box(group, radius).coords
    for a, b in itertools.product(box, repeat=2):
        lt, gt = ctx.less(a, b), ctx.less(b, a)
        assert (lt + gt) == (a != b)
    sample = box[:: max(1, len(box) // 12)]
    for g, a, b in itertools.product(sample, repeat=3):
        assert ctx.less(a, b) == ctx.less(group.mul(g, a), group.mul(g, b))


def test_past_axioms_small(group):
    ctx = standard_context(group)
    report = verify_past_axioms(ctx, small_radius(group) if group.dim <= 3 else 1)
    assert report.passed, report.to_json()


@pytest.mark.parametrize("group", [H, Unipotent(3)], ids=str)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_past_axioms_random(group, data):
    ctx = standard_context(group)
    el = st.tuples(*[st.integers(-20, 20)] * group.dim)
    a, b = data.draw(el), data.draw(el)
    # exactly one of a, a^-1 is in the past unless a is the identity
    if a != group.identity_coords:
        assert ctx.past(a) != ctx.past(group.inv(a))
    else:
        assert not ctx.past(a)
    if ctx.past(a) and ctx.past(b):
        assert ctx.past(group.mul(a, b))


def test_verify_rejects_bad_radius():
    with pytest.raises(InvalidArgument):
        verify_past_axioms(standard_context(H), 0)


def test_broken_past_is_reported():
    ctx = standard_context(IntegerLattice(1))
    ctx.past = lambda c: c[0] != 0  # both c and -c: axiom 1 fails
    report = verify_past_axioms(ctx, 2)
    assert not report.passed
    assert (1,) in report.axiom1_violations


def test_semigroups_and_sequences():
    ctx = standard_context(H)
    assert in_semigroup(ctx, H.element(2, 1, 4))
    assert not in_semigroup(ctx, H.element(2, 1, 5))
    assert not in_semigroup(ctx, H.element(1, 2, 0))
    assert f_seq(ctx, 3).coords == (3, 0, 0)
    assert h_seq(ctx, 3).coords == (-3, 0, 0)
    z = standard_context(IntegerLattice(3))
    assert f_seq(z, 2).coords == (2, 2, 2)
    u = standard_context(Unipotent(3))
    f2 = f_seq(u, 2)
    assert to_matrix(f2)[2][3] == 2 and sum(map(abs, f2.coords)) == 2


def test_certificates_cover_generators(group):
    ctx = standard_context(group)
    assert check_certificates(ctx) == []
    assert set(standard_generators(group)) <= {c.target for c in ctx.certificates}


def test_admissibility_small(group):
    ctx = standard_context(group)
    report = verify_admissibility(ctx, 2, 1)
    assert report.passed, report.to_json()


def test_conjugation_invariance_both_directions():
    ctx = standard_context(H)
    assert verify_conjugation_invariance(ctx, 3, 1) == []


def _heisenberg_count_oracle(n):
    # s in S with s < T3^n, by direct enumeration with the matrix comparison
    fn = H.element(n, 0, 0)
    total = 0
    for n3 in range(0, n + 1):
        for n2 in range(0, n3 + 1):
            for n1 in range(0, n3 * n3 + 1):
                if _heisenberg_less(H.element(n3, n2, n1), fn):
                    total += 1
    return total


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_heisenberg_count_below(n):
    ctx = standard_context(H)
    c = count_below(ctx, n)
    assert c == _heisenberg_count_oracle(n)
    assert c == sum((m + 1) * (m * m + 1) for m in range(n))
    assert c <= (n * n + 1) ** 3


@pytest.mark.parametrize("n", range(1, 8))
def test_integer_count_below(n):
    assert count_below(standard_context(IntegerLattice(1)), n) == n


def test_z2_count_below_oracle():
    ctx = standard_context(IntegerLattice(2))
    for n in range(1, 4):
        # (a, b) >= 0 with (a+b, a) < (2n, n) lexicographically
        expected = sum(1 for a in range(3 * n) for b in range(3 * n) if (a + b, a) < (2 * n, n))
        assert count_below(ctx, n) == expected


def test_count_below_rejects_zero():
    with pytest.raises(InvalidArgument):
        count_below(standard_context(H), 0)
