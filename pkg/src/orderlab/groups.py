"""Exact arithmetic for Z^d, the discrete Heisenberg group and U_{d+1}(Z).

Elements are stored in canonical integer coordinates:

* ``IntegerLattice(d)``: ``(n_1, ..., n_d)``.
* ``Heisenberg``: ``(n3, n2, n1)``, the exponents of ``T3^n3 T2^n2 T1^n1``,
  whose matrix is ``[[1, n2, n1], [0, 1, n3], [0, 0, 1]]``.
* ``Unipotent(d)``: the entries ``a[k][i]`` of the (d+1)x(d+1) unipotent matrix
  (``a[k][i]`` sits at row ``i``, column ``i + k``, 1-based), flattened level by
  level: ``a_1^1, ..., a_d^1, a_1^2, ..., a_{d-1}^2, ..., a_1^d``.

All arithmetic uses Python integers, so there is no overflow.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidArgument

Coords = tuple[int, ...]


def _ceil_root(a: int, k: int) -> int:
    """Smallest n >= 0 with n**k >= a (a >= 0)."""
    if a <= 0:
        return 0
    if k == 1:
        return a
    n = max(0, int(round(a ** (1.0 / k))) - 1)
    while n ** k < a:
        n += 1
    while n > 0 and (n - 1) ** k >= a:
        n -= 1
    return n


class Group:
    """Base class; concrete groups are frozen dataclasses and double as group ids."""

    name: str

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def mul(self, a: Coords, b: Coords) -> Coords:
        raise NotImplementedError

    def inv(self, a: Coords) -> Coords:
        raise NotImplementedError

    def radii(self, n: int) -> Coords:
        """Per-coordinate radii of the box of size ``n``."""
        raise NotImplementedError

    def grade(self, c: Coords) -> int:
        """Smallest ``n`` with ``c`` inside ``box(n)``."""
        raise NotImplementedError

    @property
    def identity_coords(self) -> Coords:
        return (0,) * self.dim

    def check(self, c: Sequence[int]) -> Coords:
        c = tuple(int(v) for v in c)
        if len(c) != self.dim:
            raise InvalidArgument(f"{self.name} expects {self.dim} coordinates, got {len(c)}")
        return c

    def element(self, *coords: int) -> GroupElement:
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return GroupElement(self, self.check(coords))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class IntegerLattice(Group):
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise InvalidArgument(f"IntegerLattice needs d >= 1, got {self.d}")

    @property
    def name(self) -> str:
        return f"zd:{self.d}"

    @property
    def dim(self) -> int:
        return self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def radii(self, n):
        return (n,) * self.d

    def grade(self, c):
        return max(abs(v) for v in c)


@dataclass(frozen=True)
class Heisenberg(Group):
    @property
    def name(self) -> str:
        return "heisenberg"

    @property
    def dim(self) -> int:
        return 3

    def mul(self, a, b):
        # [[1,a2,a1],[0,1,a3]] @ [[1,b2,b1],[0,1,b3]]
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[1] * b[0])

    def inv(self, a):
        return (-a[0], -a[1], a[0] * a[1] - a[2])

    def radii(self, n):
        return (n, n, n * n)

    def grade(self, c):
        return max(abs(c[0]), abs(c[1]), math.isqrt(abs(c[2]) - 1) + 1 if c[2] else 0)


@dataclass(frozen=True)
class Unipotent(Group):
    """U_{d+1}(Z), the (d+1)x(d+1) unipotent upper triangular integer matrices."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise InvalidArgument(f"Unipotent needs d >= 2, got {self.d}")

    @property
    def name(self) -> str:
        return f"unipotent:{self.d}"

    @property
    def dim(self) -> int:
        return self.d * (self.d + 1) // 2

    @cached_property
    def positions(self) -> tuple[tuple[int, int], ...]:
        """(k, i) label of each flat coordinate, 1-based."""
        return tuple((k, i) for k in range(1, self.d + 1) for i in range(1, self.d - k + 2))

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {ki: p for p, ki in enumerate(self.positions)}

    @cached_property
    def _levels(self) -> Coords:
        return tuple(k for k, _ in self.positions)

    @cached_property
    def _cross_terms(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # c_i^k = a_i^k + sum_{j=1}^{k-1} a_i^{k-j} b_{i+k-j}^j + b_i^k
        idx = self.index
        return tuple(
            tuple((idx[(k - j, i)], idx[(j, i + k - j)]) for j in range(1, k))
            for k, i in self.positions
        )

    def mul(self, a, b):
        return tuple(
            a[p] + b[p] + sum(a[q] * b[r] for q, r in terms)
            for p, terms in enumerate(self._cross_terms)
        )

    def inv(self, a):
        # solve a*b = e level by level; level-k entries of b only need lower levels
        b = [0] * self.dim
        for p, terms in enumerate(self._cross_terms):
            b[p] = -a[p] - sum(a[q] * b[r] for q, r in terms)
        return tuple(b)

    def radii(self, n):
        return tuple(n ** k for k in self._levels)

    def grade(self, c):
        return max(_ceil_root(abs(v), k) for v, k in zip(c, self._levels))


def parse_group(text: str) -> Group:
    """Parse ``zd:2``, ``heisenberg`` or ``unipotent:3``."""
    kind, _, arg = text.strip().lower().partition(":")
    try:
        if kind in ("zd", "z", "lattice"):
            return IntegerLattice(int(arg or 1))
        if kind in ("heisenberg", "h3"):
            return Heisenberg()
        if kind in ("unipotent", "u"):
            return Unipotent(int(arg))
    except ValueError as exc:
        raise InvalidArgument(f"bad group spec {text!r}") from exc
    raise InvalidArgument(f"unknown group {text!r}")


@dataclass(frozen=True)
class GroupElement:
    group: Group
    coords: Coords

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def inverse(self) -> GroupElement:
        return inverse(self)

    def __repr__(self) -> str:
        return f"{self.group.name}{self.coords}"

    def to_json(self) -> dict:
        return {"group": self.group.name, "coords": list(self.coords)}

    @classmethod
    def from_json(cls, data: dict) -> GroupElement:
        group = parse_group(data["group"])
        return cls(group, group.check(data["coords"]))


def identity(group: Group) -> GroupElement:
    return GroupElement(group, group.identity_coords)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.group != b.group:
        raise InvalidArgument(f"cannot multiply {a.group} by {b.group}")
    return GroupElement(a.group, a.group.mul(a.coords, b.coords))


def inverse(a: GroupElement) -> GroupElement:
    return GroupElement(a.group, a.group.inv(a.coords))


def power(a: GroupElement, n: int) -> GroupElement:
    base = a if n >= 0 else inverse(a)
    out = identity(a.group)
    for _ in range(abs(n)):
        out = multiply(out, base)
    return out


def to_matrix(a: GroupElement) -> list[list[int]]:
    g = a.group
    if isinstance(g, Heisenberg):
        n3, n2, n1 = a.coords
        return [[1, n2, n1], [0, 1, n3], [0, 0, 1]]
    if isinstance(g, Unipotent):
        m = [[int(r == c) for c in range(g.d + 1)] for r in range(g.d + 1)]
        for (k, i), v in zip(g.positions, a.coords):
            m[i - 1][i - 1 + k] = v
        return m
    raise InvalidArgument(f"{g} is not a matrix group")


def from_matrix(group: Group, m: Sequence[Sequence[int]]) -> GroupElement:
    if isinstance(group, Heisenberg):
        size = 3
    elif isinstance(group, Unipotent):
        size = group.d + 1
    else:
        raise InvalidArgument(f"{group} is not a matrix group")
    rows = [list(r) for r in m]
    if len(rows) != size or any(len(r) != size for r in rows):
        raise InvalidArgument(f"expected a {size}x{size} matrix")
    for r in range(size):
        for c in range(size):
            v = rows[r][c]
            if v != int(v):
                raise InvalidArgument("matrix entries must be integers")
            if (r == c and v != 1) or (r > c and v != 0):
                raise InvalidArgument("matrix is not unit upper triangular")
    if isinstance(group, Heisenberg):
        return GroupElement(group, (int(rows[1][2]), int(rows[0][1]), int(rows[0][2])))
    return GroupElement(group, tuple(int(rows[i - 1][i - 1 + k]) for k, i in group.positions))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    """Plain integer matrix product (used as an independent check of ``multiply``)."""
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


# -- boxes and the canonical enumeration -------------------------------------


def enumeration_key(c: Coords, group: Group) -> tuple[int, Coords]:
    return (group.grade(c), c)


class FiniteWindow:
    """Finite subset of a group, kept in canonical enumeration order."""

    def __init__(self, group: Group, elements: Iterable[GroupElement | Sequence[int]], *, presorted: bool = False):
        coords = []
        for e in elements:
            if isinstance(e, GroupElement):
                if e.group != group:
                    raise InvalidArgument("window elements belong to another group")
                coords.append(e.coords)
            else:
                coords.append(tuple(e))
        cset = frozenset(coords)
        if len(cset) != len(coords):
            raise InvalidArgument("window has duplicate elements")
        if not presorted:
            coords.sort(key=lambda c: enumeration_key(c, group))
        self.group = group
        self.coords: tuple[Coords, ...] = tuple(coords)
        self.coord_set = cset

    @classmethod
    def from_coords(cls, group: Group, coords: Iterable[Sequence[int]]) -> FiniteWindow:
        return cls(group, [group.check(c) for c in coords])

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(GroupElement(self.group, c) for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        c = item.coords if isinstance(item, GroupElement) else tuple(item)
        return c in self.coord_set

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteWindow) and self.group == other.group and self.coord_set == other.coord_set

    def __hash__(self) -> int:
        return hash((self.group, self.coord_set))

    def __repr__(self) -> str:
        return f"FiniteWindow({self.group}, {len(self)} elements)"

    def translate(self, g: GroupElement) -> FiniteWindow:
        """Left translate ``gF``."""
        mul = self.group.mul
        return FiniteWindow(self.group, [mul(g.coords, c) for c in self.coords])


def box_coords(group: Group, n: int) -> Iterator[Coords]:
    """All coordinate tuples of ``box(n)`` in lexicographic order."""
    return itertools.product(*(range(-r, r + 1) for r in group.radii(n)))


def box_size(group: Group, n: int) -> int:
    if n < 0:
        return 0
    return math.prod(2 * r + 1 for r in group.radii(n))


def enumerate_box(group: Group, n: int) -> FiniteWindow:
    """``box(n)`` listed by grade, ties broken lexicographically on coordinates."""
    if n < 0:
        raise InvalidArgument("box radius must be >= 0")
    out: list[Coords] = []
    for m in range(n + 1):
        out.extend(shell_coords(group, m))
    return FiniteWindow(group, out, presorted=True)


def shell_coords(group: Group, m: int) -> list[Coords]:
    """``box(m) \\ box(m-1)`` in lexicographic order."""
    if m == 0:
        return [group.identity_coords]
    inner = group.radii(m - 1)
    return [
        c for c in box_coords(group, m)
        if any(abs(v) > r for v, r in zip(c, inner))
    ]


def iter_enumeration(group: Group, max_radius: int | None = None) -> Iterator[Coords]:
    """The canonical enumeration g_0 = e, g_1, g_2, ... (optionally up to a box)."""
    m = 0
    while max_radius is None or m <= max_radius:
        yield from shell_coords(group, m)
        m += 1


def _lex_rank_in_box(c: Coords, radii: Coords) -> int:
    """Number of points of the box with these radii that are lexicographically below ``c``."""
    total = 0
    tail = math.prod(2 * r + 1 for r in radii)
    for v, r in zip(c, radii):
        tail //= 2 * r + 1
        total += max(0, min(v, r + 1) + r) * tail
        if not -r <= v <= r:
            break
    return total


def enumeration_index(g: GroupElement) -> int:
    """Position of ``g`` in the canonical enumeration (identity is 0)."""
    group, c = g.group, g.coords
    n = group.grade(c)
    if n == 0:
        return 0
    outer = _lex_rank_in_box(c, group.radii(n))
    inner = _lex_rank_in_box(c, group.radii(n - 1))
    return box_size(group, n - 1) + outer - inner
