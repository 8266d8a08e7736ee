"""Algebraic pasts, the induced left-invariant orders and admissible semigroups.

For each supported group the past is the set of elements whose *order key*
is lexicographically negative (first nonzero entry < 0):

* Z^d: the partial sums ``(n_1+...+n_d, n_1+...+n_{d-1}, ..., n_1)``;
* Heisenberg: the exponent triple ``(n3, n2, n1)``;
* U_{d+1}(Z): ``(a_d^1, ..., a_1^1; a_{d-1}^2, ..., a_1^2; ...; a_1^d)``.

``g1 < g2`` iff ``g2^{-1} g1`` lies in the past.  Everything here is checked by
exhaustive scans over finite boxes; nothing is claimed beyond the box.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import ConsistencyError, InvalidArgument
from .groups import (
    Coords,
    GroupElement,
    Group,
    Heisenberg,
    IntegerLattice,
    Unipotent,
    enumerate_box,
)


def _first_nonzero_negative(key) -> bool:
    for v in key:
        if v:
            return v < 0
    return False


def lattice_key(c: Coords) -> Coords:
    sums = list(itertools.accumulate(c))
    return tuple(reversed(sums))


def unipotent_key_order(d: int) -> tuple[tuple[int, int], ...]:
    return tuple((k, i) for k in range(1, d + 1) for i in range(d - k + 1, 0, -1))


@dataclass(frozen=True)
class Certificate:
    """A word over S and S^{-1} claimed to multiply out to ``target``."""

    name: str
    target: Coords
    word: tuple[tuple[Coords, int], ...]  # (element of S, +1 or -1)


@dataclass
class OrderedGroupContext:
    group: Group
    past: Callable[[Coords], bool]
    semigroup: Callable[[Coords], bool]
    f: Callable[[int], Coords]
    h: Callable[[int], Coords]
    certificates: tuple[Certificate, ...]
    # coordinate ranges certified to hold every s in S with s < f_n
    below_box: Callable[[int], list[range]]
    # published upper bound on #{s in S : s < f_n}, where one is stated
    count_bound: Callable[[int], int] | None = None
    # S intersected with a coordinate box; defaults to filtering the box
    semigroup_points: Callable[[list[range]], Iterator[Coords]] | None = None

    def points_of_s(self, ranges: list[range]) -> Iterator[Coords]:
        if self.semigroup_points is not None:
            return self.semigroup_points(ranges)
        return (c for c in itertools.product(*ranges) if self.semigroup(c))

    def element(self, c: Coords) -> GroupElement:
        return GroupElement(self.group, c)

    def less(self, a: Coords, b: Coords) -> bool:
        g = self.group
        return self.past(g.mul(g.inv(b), a))


def standard_context(group: Group) -> OrderedGroupContext:
    """The past, semigroup and sequences used for each supported group."""
    if isinstance(group, IntegerLattice):
        return _lattice_context(group)
    if isinstance(group, Heisenberg):
        return _heisenberg_context(group)
    if isinstance(group, Unipotent):
        return _unipotent_context(group)
    raise InvalidArgument(f"no ordered context for {group}")


def _lattice_context(group: IntegerLattice) -> OrderedGroupContext:
    d = group.d

    def basis(i):
        return tuple(int(j == i) for j in range(d))

    certs = tuple(Certificate(f"e{i + 1}", basis(i), ((basis(i), 1),)) for i in range(d))
    return OrderedGroupContext(
        group=group,
        past=lambda c: _first_nonzero_negative(lattice_key(c)),
        semigroup=lambda c: all(v >= 0 for v in c),
        f=lambda n: (n,) * d,
        h=lambda n: (-n,) * d,
        certificates=certs,
        # s >= 0 and sum(s) <= d*n
        below_box=lambda n: [range(0, d * n + 1)] * d,
    )


def _heisenberg_context(group: Heisenberg) -> OrderedGroupContext:
    T1, T2, T3 = (0, 0, 1), (0, 1, 0), (1, 0, 0)
    T3T2, T3T1 = group.mul(T3, T2), group.mul(T3, T1)
    certs = (
        Certificate("T3", T3, ((T3, 1),)),
        Certificate("T2", T2, ((T3, -1), (T3T2, 1))),
        Certificate("T1", T1, ((T3, -1), (T3T1, 1))),
    )

    def in_s(c):
        n3, n2, n1 = c
        return n3 >= n2 >= 0 and n3 * n3 >= n1 >= 0

    return OrderedGroupContext(
        group=group,
        past=_first_nonzero_negative,
        semigroup=in_s,
        f=lambda n: (n, 0, 0),
        h=lambda n: (-n, 0, 0),
        certificates=certs,
        below_box=lambda n: [range(0, n + 1), range(0, n + 1), range(0, n * n + 1)],
        count_bound=lambda n: (n * n + 1) ** 3,
    )


def _unipotent_context(group: Unipotent) -> OrderedGroupContext:
    d = group.d
    idx = group.index
    key_perm = [idx[ki] for ki in unipotent_key_order(d)]
    levels = [k for k, _ in group.positions]
    lead = idx[(1, d)]

    def unit(i, j):
        c = [0] * group.dim
        c[idx[(j - i, i)]] = 1
        return tuple(c)

    T = unit(d, d + 1)
    certs = [Certificate(f"T{d},{d + 1}", T, ((T, 1),))]
    for i in range(1, d + 1):
        for j in range(i + 1, d + 2):
            if (i, j) == (d, d + 1):
                continue
            certs.append(Certificate(f"T{i},{j}", unit(i, j), ((T, -1), (group.mul(T, unit(i, j)), 1))))

    def in_s(c):
        top = c[lead]
        return all(0 <= v <= top ** k for v, k in zip(c, levels))

    def s_points(ranges):
        for top in ranges[lead]:
            if top < 0:
                continue
            sub = [
                [top] if p == lead else range(max(r.start, 0), min(r.stop, top ** k + 1))
                for p, (r, k) in enumerate(zip(ranges, levels))
            ]
            yield from itertools.product(*sub)

    return OrderedGroupContext(
        group=group,
        past=lambda c: _first_nonzero_negative(c[p] for p in key_perm),
        semigroup=in_s,
        f=lambda n: tuple(n if p == lead else 0 for p in range(group.dim)),
        h=lambda n: tuple(-n if p == lead else 0 for p in range(group.dim)),
        certificates=tuple(certs),
        below_box=lambda n: [range(0, n ** k + 1) for k in levels],
        count_bound=lambda n: math.prod(n ** k + 1 for k in levels),
        semigroup_points=s_points,
    )


def _check_group(ctx: OrderedGroupContext, *elements: GroupElement) -> None:
    for g in elements:
        if g.group != ctx.group:
            raise InvalidArgument(f"element of {g.group} used with context for {ctx.group}")


def in_past(ctx: OrderedGroupContext, g: GroupElement) -> bool:
    _check_group(ctx, g)
    return ctx.past(g.coords)


def less_than(ctx: OrderedGroupContext, g1: GroupElement, g2: GroupElement) -> bool:
    _check_group(ctx, g1, g2)
    return ctx.less(g1.coords, g2.coords)


def in_semigroup(ctx: OrderedGroupContext, s: GroupElement) -> bool:
    _check_group(ctx, s)
    return ctx.semigroup(s.coords)


def f_seq(ctx: OrderedGroupContext, n: int) -> GroupElement:
    return ctx.element(ctx.f(n))


def h_seq(ctx: OrderedGroupContext, n: int) -> GroupElement:
    return ctx.element(ctx.h(n))


# -- reports ------------------------------------------------------------------


@dataclass
class AxiomReport:
    group: Group
    box_radius: int
    axiom1_violations: list = field(default_factory=list)
    axiom2_violations: list = field(default_factory=list)
    axiom3_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.axiom1_violations or self.axiom2_violations or self.axiom3_violations)

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "box_radius": self.box_radius,
            "axiom1_violations": [list(c) for c in self.axiom1_violations],
            "axiom2_violations": [list(c) for c in self.axiom2_violations],
            "axiom3_violations": [[list(a), list(b)] for a, b in self.axiom3_violations],
            "passed": self.passed,
        }


@dataclass
class AdmissibilityReport:
    group: Group
    box_radius: int
    n_max: int
    closure_violations: list = field(default_factory=list)
    containment_violations: list = field(default_factory=list)
    conjugation_violations: list = field(default_factory=list)
    sequence_violations: list = field(default_factory=list)
    certificate_failures: list = field(default_factory=list)
    counts_below: dict = field(default_factory=dict)
    bound_values: dict = field(default_factory=dict)

    @property
    def generator_check(self) -> bool:
        return not self.certificate_failures

    @property
    def bound_violations(self) -> list[int]:
        return [n for n, b in self.bound_values.items() if self.counts_below[n] > b]

    @property
    def passed(self) -> bool:
        return not (
            self.closure_violations
            or self.containment_violations
            or self.conjugation_violations
            or self.sequence_violations
            or self.certificate_failures
            or self.bound_violations
        )

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "box_radius": self.box_radius,
            "n_max": self.n_max,
            "closure_violations": [[list(a), list(b)] for a, b in self.closure_violations],
            "containment_violations": [list(c) for c in self.containment_violations],
            "conjugation_violations": [{"n": n, "g": list(c)} for n, c in self.conjugation_violations],
            "sequence_violations": [{"n": n, "what": what} for n, what in self.sequence_violations],
            "certificate_failures": list(self.certificate_failures),
            "generator_check": self.generator_check,
            "counts_below": {str(n): v for n, v in self.counts_below.items()},
            "bound_values": {str(n): v for n, v in self.bound_values.items()},
            "passed": self.passed,
        }


def verify_past_axioms(ctx: OrderedGroupContext, box_radius: int) -> AxiomReport:
    """Exhaustively check the three algebraic-past axioms on ``box(box_radius)``."""
    if box_radius < 1:
        raise InvalidArgument("box_radius must be >= 1")
    g_ = ctx.group
    past = ctx.past
    e = g_.identity_coords
    box = enumerate_box(g_, box_radius).coords
    report = AxiomReport(g_, box_radius)
    in_phi = []
    for c in box:
        p, q = past(c), past(g_.inv(c))
        if p and q:
            report.axiom1_violations.append(c)
        if c != e and not (p or q):
            report.axiom2_violations.append(c)
        if p:
            in_phi.append(c)
    for a in in_phi:
        for b in in_phi:
            if not past(g_.mul(a, b)):
                report.axiom3_violations.append((a, b))
    return report


def verify_conjugation_invariance(ctx: OrderedGroupContext, n_max: int, box_radius: int) -> list[tuple[int, Coords]]:
    """Pairs ``(n, g)`` in the box where ``f_n Phi f_n^{-1} = Phi`` fails (either direction)."""
    if n_max < 1:
        raise InvalidArgument("n_max must be >= 1")
    g_ = ctx.group
    past = ctx.past
    out = []
    box = enumerate_box(g_, box_radius).coords
    for n in range(1, n_max + 1):
        f = ctx.f(n)
        fi = g_.inv(f)
        for c in box:
            p = past(c)
            if p != past(g_.mul(g_.mul(f, c), fi)) or p != past(g_.mul(g_.mul(fi, c), f)):
                out.append((n, c))
    return out


def _word_product(group: Group, word) -> Coords:
    out = group.identity_coords
    for c, sign in word:
        out = group.mul(out, c if sign > 0 else group.inv(c))
    return out


def check_certificates(ctx: OrderedGroupContext) -> list[str]:
    """Names of certificates whose words leave S or do not multiply to the target."""
    bad = []
    for cert in ctx.certificates:
        letters_ok = all(ctx.semigroup(c) and sign in (1, -1) for c, sign in cert.word)
        if not letters_ok or _word_product(ctx.group, cert.word) != cert.target:
            bad.append(cert.name)
    return bad


def standard_generators(group: Group) -> list[Coords]:
    """The usual generating set the certificates must cover."""
    if isinstance(group, IntegerLattice):
        return [tuple(int(j == i) for j in range(group.d)) for i in range(group.d)]
    if isinstance(group, Heisenberg):
        return [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    out = []
    for i in range(1, group.d + 1):
        for j in range(i + 1, group.d + 2):
            c = [0] * group.dim
            c[group.index[(j - i, i)]] = 1
            out.append(tuple(c))
    return out


def _count_in(ctx: OrderedGroupContext, ranges: list[range], fn: Coords) -> int:
    return sum(1 for c in ctx.points_of_s(ranges) if ctx.less(c, fn))


def count_below(ctx: OrderedGroupContext, n: int) -> int:
    """Exact ``#{s in S : s < f_n}``.

    S is scanned inside a coordinate box that must contain every such ``s``;
    the count is repeated on the box for ``n + 1`` and must not change.
    """
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    fn = ctx.f(n)
    count = _count_in(ctx, ctx.below_box(n), fn)
    bigger = _count_in(ctx, ctx.below_box(n + 1), fn)
    if bigger != count:
        raise ConsistencyError(f"count_below({n}) grew from {count} to {bigger} on a larger box")
    return count


def verify_admissibility(ctx: OrderedGroupContext, n_max: int, box_radius: int) -> AdmissibilityReport:
    if n_max < 1 or box_radius < 1:
        raise InvalidArgument("n_max and box_radius must be >= 1")
    g_ = ctx.group
    e = g_.identity_coords
    report = AdmissibilityReport(g_, box_radius, n_max)
    box = enumerate_box(g_, box_radius).coords
    s_box = [c for c in box if ctx.semigroup(c)]

    for a in s_box:
        for b in s_box:
            if not ctx.semigroup(g_.mul(a, b)):
                report.closure_violations.append((a, b))
    # S inside Phi^{-1} u {e}
    for c in s_box:
        if c != e and not ctx.past(g_.inv(c)):
            report.containment_violations.append(c)
    report.conjugation_violations = verify_conjugation_invariance(ctx, n_max, box_radius)

    for n in range(1, n_max + 1):
        f, f_next, h, h_next = ctx.f(n), ctx.f(n + 1), ctx.h(n), ctx.h(n + 1)
        if ctx.past(f):
            report.sequence_violations.append((n, "f_n in Phi"))
        if not ctx.less(f, f_next):
            report.sequence_violations.append((n, "f_n not < f_{n+1}"))
        if not ctx.semigroup(g_.inv(h)):
            report.sequence_violations.append((n, "h_n not in S^-1"))
        if not ctx.less(h_next, h):
            report.sequence_violations.append((n, "h_n not > h_{n+1}"))

    report.certificate_failures = check_certificates(ctx)
    covered = {c.target for c in ctx.certificates}
    for gen in standard_generators(g_):
        if gen not in covered:
            report.certificate_failures.append(f"missing generator {gen}")

    for n in range(1, n_max + 1):
        report.counts_below[n] = count_below(ctx, n)
        if ctx.count_bound is not None:
            report.bound_values[n] = ctx.count_bound(n)
    return report
