"""Asymptotic pairs, stable-set samples and Li-Yorke witnesses on full shifts.

Every claim is bounded by an explicit horizon: a pair is reported
``asymptotic-within-horizon`` only when all its violations sit strictly inside
the horizon box.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InsufficientWindow, InvalidArgument
from .groups import (
    Coords,
    FiniteWindow,
    Group,
    GroupElement,
    IntegerLattice,
    box_size,
    enumerate_box,
    iter_enumeration,
)
from .order import OrderedGroupContext
from .shift import Configuration, act, first_disagreement, metric_from_index, random_configuration

ASYMPTOTIC = "asymptotic-within-horizon"
LI_YORKE = "li-yorke-witnessed"
REFUTED = "refuted"


@dataclass
class PairVerdict:
    kind: str
    horizon: int
    violations: list[tuple[Coords, float]] = field(default_factory=list)
    proximal_witnesses: list[tuple[Coords, float]] = field(default_factory=list)
    distal_witnesses: list[tuple[Coords, float]] = field(default_factory=list)
    # enumeration index of the first disagreement, parallel to the witness lists
    proximal_indices: list[int] = field(default_factory=list)
    distal_indices: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        def pairs(ws):
            return [{"s": list(s), "distance": d} for s, d in ws]

        def with_index(ws, idx):
            return [{"s": list(s), "distance": d, "index": k} for (s, d), k in zip(ws, idx)]

        return {
            "kind": self.kind,
            "horizon": self.horizon,
            "violations": pairs(self.violations),
            "proximal_witnesses": with_index(self.proximal_witnesses, self.proximal_indices),
            "distal_witnesses": with_index(self.distal_witnesses, self.distal_indices),
        }


def _default_flip(alphabet: int) -> Callable[[int], int]:
    return lambda s: (s + 1) % alphabet


def make_finite_difference_pair(x: Configuration, D: Iterable, flip=None) -> Configuration:
    """Copy of ``x`` with the symbol changed at every cell of ``D``."""
    if flip is None:
        flip = _default_flip(x.alphabet)
    elif isinstance(flip, dict):
        table = flip
        flip = lambda s: table.get(s, s)  # noqa: E731
    values = dict(x.values)
    for d in D:
        c = d.coords if isinstance(d, GroupElement) else tuple(d)
        if c not in values:
            raise InvalidArgument(f"difference cell {c} outside the configuration window")
        new = flip(values[c])
        if not 0 <= new < x.alphabet:
            raise InvalidArgument(f"flip produced symbol {new} outside the alphabet")
        if new == values[c]:
            raise InvalidArgument(f"flip leaves the symbol at {c} unchanged")
        values[c] = new
    return Configuration(x.group, values, x.alphabet)


def semigroup_members(ctx: OrderedGroupContext, horizon: int) -> list[Coords]:
    """``S`` inside ``box(horizon)``, in enumeration order."""
    return [c for c in enumerate_box(ctx.group, horizon).coords if ctx.semigroup(c)]


def inverse_semigroup_members(ctx: OrderedGroupContext, horizon: int) -> list[Coords]:
    """``S^{-1}`` inside ``box(horizon)``."""
    g = ctx.group
    return [c for c in enumerate_box(g, horizon).coords if ctx.semigroup(g.inv(c))]


def prefix_length(eps: float, cap: int) -> int:
    """Number of leading enumeration indices ``k`` with ``2^-k > eps`` (capped)."""
    m = 0
    while m < cap and math.ldexp(1.0, -m) > eps:
        m += 1
    return m


def _first_index(x: Configuration, y: Configuration, s: Coords, cells: Sequence[Coords]) -> int | None:
    """Index of the first cell ``h`` with ``(s x)(h) != (s y)(h)``."""
    g = x.group
    sinv = g.inv(s)
    for i, h in enumerate(cells):
        src = g.mul(sinv, h)
        a, b = x.values.get(src), y.values.get(src)
        if a is None or b is None:
            raise InsufficientWindow(f"need the configuration at {src} to evaluate s={s} at {h}")
        if a != b:
            return i
    return None


def _as_coords(items) -> list[Coords]:
    return [s.coords if isinstance(s, GroupElement) else tuple(s) for s in items]


def is_asymptotic_truncated(x: Configuration, y: Configuration, S_members, eps: float, horizon: int) -> PairVerdict:
    """Find every listed ``s`` with ``d(sx, sy) > eps``.

    Only the enumeration prefix that can push the distance above ``eps`` is
    read.  The pair is ``asymptotic-within-horizon`` when every violating ``s``
    lies in a box strictly smaller than ``box(horizon)``.
    """
    if x.group != y.group or x.alphabet != y.alphabet:
        raise InvalidArgument("configurations from different shift spaces")
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    g = x.group
    cells = []
    m = prefix_length(eps, box_size(g, horizon))
    for i, c in enumerate(iter_enumeration(g, horizon)):
        if i >= m:
            break
        cells.append(c)
    verdict = PairVerdict(ASYMPTOTIC, horizon)
    worst = -1
    for s in _as_coords(S_members):
        k = _first_index(x, y, s, cells)
        if k is not None:
            verdict.violations.append((s, metric_from_index(k)))
            worst = max(worst, g.grade(s))
    if worst >= horizon:
        verdict.kind = REFUTED
    return verdict


# -- Li-Yorke witnesses ---------------------------------------------------------


@dataclass(frozen=True)
class SparseSet:
    """Points ``t * (1, ..., 1)`` on the positive diagonal of Z^d with ratio >= 2."""

    group: IntegerLattice
    scalars: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.group, IntegerLattice):
            raise InvalidArgument("sparse sets live on Z^d")
        ts = self.scalars
        if any(t < 2 or t % 2 for t in ts):
            raise InvalidArgument("sparse points need even scalars >= 2")
        if any(b < 2 * a for a, b in zip(ts, ts[1:])):
            raise InvalidArgument("consecutive sparse points must grow by a factor >= 2")

    @classmethod
    def powers_of_two(cls, group: IntegerLattice, k0: int, depth: int) -> SparseSet:
        if k0 < 1 or depth < 0:
            raise InvalidArgument("need k0 >= 1 and depth >= 0")
        return cls(group, tuple(2 ** k for k in range(k0, k0 + depth + 1)))

    def point(self, t: int) -> Coords:
        return (t,) * self.group.d

    @property
    def points(self) -> list[Coords]:
        return [self.point(t) for t in self.scalars]

    @property
    def horizon(self) -> int:
        """Box radius that sees the nearest disagreement of every proximal witness."""
        return max(self.scalars) // 2

    @property
    def window_radius(self) -> int:
        """Box radius a base configuration needs for the witnesses to be evaluable."""
        return 2 * max(self.scalars)

    def distal_elements(self) -> list[Coords]:
        # s = -t moves the disagreement at t onto the identity
        return [self.point(-t) for t in self.scalars]

    def proximal_elements(self) -> list[Coords]:
        # s = -(t + t/2): nearest disagreement is t/2 away, and t/2 grows strictly
        return [self.point(-(t + t // 2)) for t in self.scalars]


def li_yorke_verdict(x: Configuration, y: Configuration, D: SparseSet, delta: float) -> PairVerdict:
    """Evaluate distal and proximal witnesses for a pair differing on ``D``."""
    if x.group != D.group:
        raise InvalidArgument("sparse set lives in another group")
    if not 0 < delta < 1:
        raise InvalidArgument("delta must lie in (0, 1)")
    horizon = D.horizon
    cells = list(iter_enumeration(x.group, horizon))
    verdict = PairVerdict(REFUTED, horizon)
    for s in D.distal_elements():
        k = _first_index(x, y, s, cells)
        if k is not None:
            verdict.distal_witnesses.append((s, metric_from_index(k)))
            verdict.distal_indices.append(k)
    if len(D.scalars) >= 2:
        for s in D.proximal_elements():
            k = _first_index(x, y, s, cells)
            if k is not None:
                verdict.proximal_witnesses.append((s, metric_from_index(k)))
                verdict.proximal_indices.append(k)
    if _li_yorke_sound(verdict.distal_witnesses, verdict.proximal_indices, delta, len(D.scalars)):
        verdict.kind = LI_YORKE
    return verdict


def _li_yorke_sound(distal, proximal_indices, delta, expected) -> bool:
    return (
        len(distal) >= 2
        and all(d > delta for _, d in distal)
        and len(proximal_indices) == expected
        and len(proximal_indices) >= 2
        and all(a < b for a, b in zip(proximal_indices, proximal_indices[1:]))
    )


def li_yorke_witness(base: Configuration, D: SparseSet, delta: float) -> tuple[Configuration, PairVerdict]:
    """Flip ``base`` on ``D`` and witness the (S^{-1}, delta)-Li-Yorke behaviour of the pair."""
    y = make_finite_difference_pair(base, D.points)
    return y, li_yorke_verdict(base, y, D, delta)


def reverify_li_yorke(x: Configuration, y: Configuration, verdict: PairVerdict, delta: float) -> bool:
    """Second pass: recompute every witness with ``act`` and the shift metric.

    Distances are compared through their exponents (first disagreement
    indices), since ``2^-k`` underflows for the deeper proximal witnesses.
    """
    g = x.group
    box = enumerate_box(g, verdict.horizon).coords

    def index(s):
        e = GroupElement(g, s)
        return first_disagreement(act(e, x, box), act(e, y, box), verdict.horizon)

    distal = [index(s) for s, _ in verdict.distal_witnesses]
    prox = [index(s) for s, _ in verdict.proximal_witnesses]
    if distal != verdict.distal_indices or prox != verdict.proximal_indices:
        return False
    return (
        len(distal) >= 2
        and all(metric_from_index(k) > delta for k in distal)
        and len(prox) >= 2
        and all(a < b for a, b in zip(prox, prox[1:]))
    )


def base_configuration(group: IntegerLattice, radius: int, alphabet: int, seed: int) -> Configuration:
    rng = np.random.default_rng(seed)
    return random_configuration(
        FiniteWindow(group, _cube(group.d, radius), presorted=True), alphabet, rng
    )


def _cube(d: int, r: int) -> list[Coords]:
    return list(itertools.product(range(-r, r + 1), repeat=d))


@dataclass
class ChaoticSample:
    """Finitely many configurations meant to be pairwise Li-Yorke."""

    base: Configuration
    members: list[Configuration]
    difference_sets: list[SparseSet]
    pair_verdicts: dict[tuple[int, int], PairVerdict]

    @property
    def passed(self) -> bool:
        return all(v.kind == LI_YORKE for v in self.pair_verdicts.values())

    def to_json(self) -> dict:
        return {
            "size": len(self.members),
            "difference_scalars": [list(D.scalars) for D in self.difference_sets],
            "pairs": {f"{i},{j}": v.to_json() for (i, j), v in sorted(self.pair_verdicts.items())},
            "passed": self.passed,
        }


def chaotic_sample(group: IntegerLattice, size: int, delta: float, seed: int = 0, k0: int = 1,
                   length: int | None = None, alphabet: int = 2) -> ChaoticSample:
    """``size`` flips of one random base, pairwise differing on sparse diagonal sets.

    Member ``j`` flips the powers ``2^(k0+i)`` with ``i % size != j``, so two
    members differ exactly on the powers with ``i % size`` in ``{i, j}``.
    """
    if size < 2:
        raise InvalidArgument("a chaotic sample needs at least two members")
    length = length or 2 * size
    powers = [2 ** (k0 + i) for i in range(length)]
    full = SparseSet(group, tuple(powers))
    base = base_configuration(group, full.window_radius, alphabet, seed)
    flips = [SparseSet(group, tuple(t for i, t in enumerate(powers) if i % size != j)) for j in range(size)]
    members = [make_finite_difference_pair(base, D.points) for D in flips]
    verdicts = {}
    for i in range(size):
        for j in range(i + 1, size):
            diff = SparseSet(group, tuple(t for n, t in enumerate(powers) if n % size in (i, j)))
            verdicts[(i, j)] = li_yorke_verdict(members[i], members[j], diff, delta)
    return ChaoticSample(base, members, flips, verdicts)


def stable_set_sample(x: Configuration, S_members, eps: float, horizon: int, budget: int, seed: int = 0,
                      max_cells: int = 3, region_radius: int | None = None) -> list[Configuration]:
    """Finite-difference perturbations of ``x`` that pass ``is_asymptotic_truncated``.

    Difference cells are drawn from ``box(region_radius)`` (default
    ``horizon // 2``).  With ``max_cells == 0`` the only candidate is ``x``.
    """
    if budget < 1:
        raise InvalidArgument("budget must be >= 1")
    rng = np.random.default_rng(seed)
    if max_cells == 0:
        return [x]
    radius = horizon // 2 if region_radius is None else region_radius
    region = [c for c in enumerate_box(x.group, radius).coords if c in x.values]
    out: list[Configuration] = []
    seen: set[frozenset] = set()
    for _ in range(20 * budget):
        if len(out) == budget:
            break
        n = int(rng.integers(1, max_cells + 1))
        picks = rng.choice(len(region), size=min(n, len(region)), replace=False)
        D = frozenset(region[int(i)] for i in picks)
        if D in seen:
            continue
        seen.add(D)
        y = make_finite_difference_pair(x, D)
        if is_asymptotic_truncated(x, y, S_members, eps, horizon).kind == ASYMPTOTIC:
            out.append(y)
    return out
