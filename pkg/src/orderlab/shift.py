"""Shift spaces over the supported groups: configurations, the shift action,
the shift metric and pattern counting for topological entropy."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InsufficientWindow, InvalidArgument, UnsupportedOperation
from .folner import folner_box
from .groups import (
    Coords,
    FiniteWindow,
    Group,
    GroupElement,
    IntegerLattice,
    box_size,
    iter_enumeration,
    parse_group,
)


class Configuration:
    """A partial point of the full shift: symbols on a finite set of group elements."""

    def __init__(self, group: Group, values: Mapping[Coords, int], alphabet: int = 2):
        if alphabet < 2:
            raise InvalidArgument("alphabet needs at least 2 symbols")
        self.group = group
        self.alphabet = alphabet
        self.values: dict[Coords, int] = dict(values)
        for s in self.values.values():
            if not 0 <= s < alphabet:
                raise InvalidArgument(f"symbol {s} outside alphabet of size {alphabet}")

    @property
    def window(self) -> FiniteWindow:
        return FiniteWindow(self.group, list(self.values))

    def __contains__(self, c) -> bool:
        return (c.coords if isinstance(c, GroupElement) else c) in self.values

    def __getitem__(self, c) -> int:
        return self.values[c.coords if isinstance(c, GroupElement) else c]

    def get(self, c, default=None):
        return self.values.get(c.coords if isinstance(c, GroupElement) else c, default)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Configuration)
            and self.group == other.group
            and self.alphabet == other.alphabet
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"Configuration({self.group}, {len(self)} cells, alphabet={self.alphabet})"

    def restrict(self, window: Iterable[Coords]) -> Configuration:
        return Configuration(self.group, {c: self.values[c] for c in window if c in self.values}, self.alphabet)

    def to_json(self) -> dict:
        w = self.window
        return {
            "group": self.group.name,
            "alphabet": self.alphabet,
            "window": [list(c) for c in w.coords],
            "values": [self.values[c] for c in w.coords],
        }

    @classmethod
    def from_json(cls, data: dict) -> Configuration:
        group = parse_group(data["group"])
        values = {group.check(c): int(v) for c, v in zip(data["window"], data["values"])}
        return cls(group, values, int(data.get("alphabet", 2)))


def random_configuration(window: FiniteWindow | Iterable[Coords], alphabet: int, rng: np.random.Generator,
                         group: Group | None = None) -> Configuration:
    if isinstance(window, FiniteWindow):
        group, coords = window.group, list(window.coords)
    else:
        coords = list(window)
        if group is None:
            raise InvalidArgument("group required for a bare coordinate list")
    symbols = rng.integers(0, alphabet, size=len(coords))
    return Configuration(group, dict(zip(coords, symbols.tolist())), alphabet)


def act(g: GroupElement, x: Configuration, window: Iterable[Coords] | None = None) -> Configuration:
    """``(g x)(h) = x(g^{-1} h)``.

    Without ``window`` the result lives on ``g * x.window``.  With one, it is
    restricted to the cells of ``window`` where the right-hand side is defined;
    missing cells are simply absent.
    """
    if g.group != x.group:
        raise InvalidArgument("group element and configuration live in different groups")
    mul = x.group.mul
    if window is None:
        return Configuration(x.group, {mul(g.coords, c): v for c, v in x.values.items()}, x.alphabet)
    ginv = x.group.inv(g.coords)
    out = {}
    for h in window:
        h = h.coords if isinstance(h, GroupElement) else h
        v = x.values.get(mul(ginv, h))
        if v is not None:
            out[h] = v
    return Configuration(x.group, out, x.alphabet)


def first_disagreement(x: Configuration, y: Configuration, horizon: int) -> int | None:
    """Smallest enumeration index in ``box(horizon)`` where ``x`` and ``y`` differ."""
    if x.group != y.group or x.alphabet != y.alphabet:
        raise InvalidArgument("configurations from different shift spaces")
    for i, c in enumerate(iter_enumeration(x.group, horizon)):
        a, b = x.values.get(c), y.values.get(c)
        if a is None or b is None:
            raise InsufficientWindow(f"configuration undefined at {c} inside box({horizon})")
        if a != b:
            return i
    return None


def metric_from_index(k: int | None) -> float:
    return 0.0 if k is None else math.ldexp(1.0, -k)


def shift_metric(x: Configuration, y: Configuration, horizon: int) -> float:
    """``2^-k`` for the first disagreement index ``k`` within ``box(horizon)``; 0 if none."""
    return metric_from_index(first_disagreement(x, y, horizon))


# -- shift systems and pattern counting --------------------------------------


@dataclass(frozen=True)
class Pattern:
    offsets: tuple[Coords, ...]
    symbols: tuple[int, ...]

    def normalized(self) -> Pattern:
        lows = [min(o[i] for o in self.offsets) for i in range(len(self.offsets[0]))]
        return Pattern(tuple(tuple(v - lo for v, lo in zip(o, lows)) for o in self.offsets), self.symbols)

    @property
    def extent(self) -> Coords:
        n = self.normalized()
        return tuple(max(o[i] for o in n.offsets) + 1 for i in range(len(n.offsets[0])))


@dataclass
class ShiftSystem:
    group: Group
    alphabet: int
    forbidden: list[Pattern] = field(default_factory=list)

    def __post_init__(self):
        if self.alphabet < 2:
            raise InvalidArgument("alphabet needs at least 2 symbols")
        for p in self.forbidden:
            if not p.offsets or len(p.offsets) != len(p.symbols):
                raise InvalidArgument("malformed forbidden pattern")
            if any(len(o) != self.group.dim for o in p.offsets):
                raise InvalidArgument("pattern offsets do not match the group dimension")

    @property
    def is_full(self) -> bool:
        return not self.forbidden

    def with_forbidden(self, *patterns: Pattern) -> ShiftSystem:
        return ShiftSystem(self.group, self.alphabet, list(self.forbidden) + list(patterns))

    @classmethod
    def from_text(cls, text: str, group: Group | None = None) -> ShiftSystem:
        """Parse ``alphabet k`` followed by one ``offset:symbol ...`` pattern per line.

        Offsets are comma separated integers (``0:1 1:1`` on Z, ``0,0:1 1,0:1`` on Z^2).
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("alphabet"):
            raise InvalidArgument("SFT file must start with 'alphabet k'")
        try:
            k = int(lines[0].split()[1])
            patterns = []
            for ln in lines[1:]:
                offs, syms = [], []
                for tok in ln.split():
                    o, s = tok.rsplit(":", 1)
                    offs.append(tuple(int(v) for v in o.split(",")))
                    syms.append(int(s))
                patterns.append(Pattern(tuple(offs), tuple(syms)))
        except (IndexError, ValueError) as exc:
            raise InvalidArgument(f"cannot parse SFT description: {exc}") from exc
        if group is None:
            dim = len(patterns[0].offsets[0]) if patterns else 1
            group = IntegerLattice(dim)
        for p in patterns:
            if any(not 0 <= s < k for s in p.symbols):
                raise InvalidArgument("pattern symbol outside the alphabet")
        return cls(group, k, patterns)


def _occurs_anywhere(values: Mapping[Coords, int], pattern: Pattern, window: FiniteWindow) -> bool:
    # translates t with t + offsets inside the window
    base = pattern.offsets[0]
    for c in window.coords:
        t = tuple(a - b for a, b in zip(c, base))
        cells = [tuple(a + b for a, b in zip(t, o)) for o in pattern.offsets]
        if all(cell in values for cell in cells) and all(
            values[cell] == s for cell, s in zip(cells, pattern.symbols)
        ):
            return True
    return False


def is_locally_admissible(sys: ShiftSystem, x: Configuration) -> bool:
    if not isinstance(sys.group, IntegerLattice):
        raise UnsupportedOperation("forbidden-pattern checks are only defined on Z^d")
    w = x.window
    return not any(_occurs_anywhere(x.values, p, w) for p in sys.forbidden)


def _interval(F: FiniteWindow) -> tuple[int, int] | None:
    xs = sorted(c[0] for c in F.coords)
    if xs and xs[-1] - xs[0] + 1 == len(xs):
        return xs[0], xs[-1]
    return None


def _rectangle(F: FiniteWindow) -> tuple[int, int, int, int] | None:
    xs = [c[0] for c in F.coords]
    ys = [c[1] for c in F.coords]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if (x1 - x0 + 1) * (y1 - y0 + 1) == len(F):
        return x0, x1, y0, y1
    return None


def _count_line(k: int, patterns: list[Pattern], length: int) -> int:
    """Words of the given length avoiding every pattern (transfer over histories)."""
    pats = [p.normalized() for p in patterns]
    spans = [p.extent[0] for p in pats]
    keep = max(spans, default=1) - 1
    states: dict[tuple[int, ...], int] = {(): 1}
    for _ in range(length):
        nxt: dict[tuple[int, ...], int] = {}
        for hist, cnt in states.items():
            for s in range(k):
                h = hist + (s,)
                bad = False
                for p, w in zip(pats, spans):
                    if w <= len(h) and all(h[len(h) - w + o[0]] == v for o, v in zip(p.offsets, p.symbols)):
                        bad = True
                        break
                if bad:
                    continue
                key = h[len(h) - keep:] if keep else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(states.values())


def _count_plane(k: int, patterns: list[Pattern], width: int, height: int) -> int:
    """Row-by-row transfer on a width x height rectangle (first coordinate = column)."""
    pats = [p.normalized() for p in patterns]
    exts = [p.extent for p in pats]
    keep = max((e[1] for e in exts), default=1) - 1

    @lru_cache(maxsize=None)
    def top_ok(stack: tuple[tuple[int, ...], ...]) -> bool:
        # patterns whose top row is the last row of the stack
        for p, (w, h) in zip(pats, exts):
            if h > len(stack) or w > width:
                continue
            rows = stack[len(stack) - h:]
            for t in range(width - w + 1):
                if all(rows[o[1]][t + o[0]] == v for o, v in zip(p.offsets, p.symbols)):
                    return False
        return True

    rows = [r for r in itertools.product(range(k), repeat=width) if top_ok((r,))]
    states: dict[tuple, int] = {(): 1}
    for _ in range(height):
        nxt: dict[tuple, int] = {}
        for stack, cnt in states.items():
            for r in rows:
                s = stack + (r,)
                if len(s) > 1 and not top_ok(s):
                    continue
                key = s[len(s) - keep:] if keep else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(states.values())


BRUTE_FORCE_LIMIT = 1 << 20


def pattern_count(sys: ShiftSystem, F: FiniteWindow) -> int:
    """Number of locally admissible patterns on ``F``."""
    if F.group != sys.group:
        raise InvalidArgument("window and shift system live in different groups")
    if sys.is_full:
        return sys.alphabet ** len(F)
    g = sys.group
    if not isinstance(g, IntegerLattice) or g.d > 2:
        raise UnsupportedOperation("SFT counting is only implemented on Z and Z^2")
    if g.d == 1 and (iv := _interval(F)) is not None:
        return _count_line(sys.alphabet, sys.forbidden, iv[1] - iv[0] + 1)
    if g.d == 2 and (rect := _rectangle(F)) is not None:
        x0, x1, y0, y1 = rect
        return _count_plane(sys.alphabet, sys.forbidden, x1 - x0 + 1, y1 - y0 + 1)
    if sys.alphabet ** len(F) > BRUTE_FORCE_LIMIT:
        raise UnsupportedOperation("irregular window too large for brute-force counting")
    return brute_force_count(sys, F)


def brute_force_count(sys: ShiftSystem, F: FiniteWindow) -> int:
    coords = F.coords
    total = 0
    for word in itertools.product(range(sys.alphabet), repeat=len(coords)):
        vals = dict(zip(coords, word))
        if not any(_occurs_anywhere(vals, p, F) for p in sys.forbidden):
            total += 1
    return total


def _iroot(n: int, m: int) -> int | None:
    """Exact integer m-th root of n, or None."""
    r = round(math.exp(math.log(n) / m)) if n > 1 else n
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** m == n:
            return c
    return None


def log_per_site(count: int, size: int) -> float:
    """``log(count) / size``, exact when ``count`` is a perfect ``size``-th power."""
    if count < 1 or size < 1:
        raise InvalidArgument("need count >= 1 and size >= 1")
    root = _iroot(count, size)
    if root is not None:
        return math.log(root)
    return math.log(count) / size


@dataclass
class EntropyEstimate:
    n: int
    window_size: int
    pattern_count: int
    estimate: float

    def to_json(self) -> dict:
        return {"n": self.n, "count": str(self.pattern_count), "estimate": self.estimate}


def top_entropy_estimate(sys: ShiftSystem, n: int) -> EntropyEstimate:
    """``log N(F_n) / |F_n|`` on the group's Følner box (natural log)."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    F = folner_box(sys.group, n)
    count = pattern_count(sys, F)
    return EntropyEstimate(n, len(F), count, log_per_site(count, len(F)))


def golden_mean_shift() -> ShiftSystem:
    return ShiftSystem(IntegerLattice(1), 2, [Pattern(((0,), (1,)), (1, 1))])


def hard_square_shift() -> ShiftSystem:
    z2 = IntegerLattice(2)
    return ShiftSystem(z2, 2, [Pattern(((0, 0), (1, 0)), (1, 1)), Pattern(((0, 0), (0, 1)), (1, 1))])
