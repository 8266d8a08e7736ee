"""Measure entropy of Bernoulli and Markov shift measures.

Cylinder probabilities are exact fractions (inputs are converted from their
decimal representation), and floats only appear when logarithms are taken.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, UnsupportedOperation
from .groups import Coords, FiniteWindow, Group, GroupElement, IntegerLattice, enumerate_box, parse_group
from .order import standard_context

TOL = 1e-12
MAX_CYLINDERS = 1 << 20


def _exact(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def partition_entropy(p: Sequence) -> float:
    """``-sum p_i log p_i`` with ``0 log 0 = 0``."""
    p = [float(v) for v in p]
    if any(v < 0 for v in p) or abs(math.fsum(p) - 1.0) > TOL:
        raise InvalidArgument(f"not a probability vector: {p}")
    return math.fsum(-v * math.log(v) for v in p if v > 0)


class ShiftMeasure:
    """Bernoulli measure on any supported group, or a stationary Markov measure on Z."""

    def __init__(self, kind: str, group: Group, p=None, P=None, pi=None):
        self.kind = kind
        self.group = group
        if kind == "bernoulli":
            self.p = tuple(_exact(v) for v in p)
            if len(self.p) < 2 or any(v < 0 for v in self.p) or abs(float(sum(self.p)) - 1) > TOL:
                raise InvalidArgument(f"invalid Bernoulli vector {p}")
            self.alphabet = len(self.p)
        elif kind == "markov":
            if group != IntegerLattice(1):
                raise UnsupportedOperation("Markov measures are only supported on Z")
            self.P = tuple(tuple(_exact(v) for v in row) for row in P)
            k = len(self.P)
            if k < 2 or any(len(r) != k for r in self.P):
                raise InvalidArgument("transition matrix must be square with >= 2 states")
            if any(v < 0 for r in self.P for v in r) or any(abs(float(sum(r)) - 1) > TOL for r in self.P):
                raise InvalidArgument("transition matrix is not stochastic")
            self.pi = tuple(_exact(v) for v in pi) if pi is not None else stationary_vector(self.P)
            if len(self.pi) != k or any(v <= 0 for v in self.pi):
                raise InvalidArgument("stationary vector must be positive")
            for j in range(k):
                if abs(float(sum(self.pi[i] * self.P[i][j] for i in range(k)) - self.pi[j])) > TOL:
                    raise InvalidArgument("pi is not stationary for P")
            self.alphabet = k
        else:
            raise InvalidArgument(f"unknown measure kind {kind!r}")

    @classmethod
    def bernoulli(cls, p, group: Group | None = None) -> ShiftMeasure:
        return cls("bernoulli", group or IntegerLattice(1), p=p)

    @classmethod
    def markov(cls, P, pi=None) -> ShiftMeasure:
        return cls("markov", IntegerLattice(1), P=P, pi=pi)

    @classmethod
    def from_json(cls, data: dict | str, group: Group | None = None) -> ShiftMeasure:
        if isinstance(data, str):
            data = json.loads(data)
        kind = data.get("kind")
        if group is None and "group" in data:
            group = parse_group(data["group"])
        if kind == "bernoulli":
            return cls.bernoulli(data["p"], group)
        if kind == "markov":
            if group is not None and group != IntegerLattice(1):
                raise UnsupportedOperation("Markov measures are only supported on Z")
            return cls.markov(data["P"], data.get("pi"))
        raise InvalidArgument(f"unknown measure kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "bernoulli":
            return {"kind": "bernoulli", "group": self.group.name, "p": [str(v) for v in self.p]}
        return {"kind": "markov", "P": [[str(v) for v in r] for r in self.P], "pi": [str(v) for v in self.pi]}

    @lru_cache(maxsize=None)
    def transition_power(self, n: int) -> tuple[tuple[Fraction, ...], ...]:
        k = self.alphabet
        if n == 0:
            return tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k))
        prev = self.transition_power(n - 1)
        return tuple(
            tuple(sum(prev[i][m] * self.P[m][j] for m in range(k)) for j in range(k)) for i in range(k)
        )

    def cylinder(self, coords: Sequence[Coords], word: Sequence[int]) -> Fraction:
        """Probability that the symbols at ``coords`` read ``word``."""
        if self.kind == "bernoulli":
            out = Fraction(1)
            for s in word:
                out *= self.p[s]
            return out
        pairs = sorted(zip((c[0] for c in coords), word))
        prob = self.pi[pairs[0][1]]
        for (t0, a), (t1, b) in zip(pairs, pairs[1:]):
            prob *= self.transition_power(t1 - t0)[a][b]
        return prob


def stationary_vector(P) -> tuple[Fraction, ...]:
    """Exact solution of ``pi P = pi``, ``sum(pi) = 1`` by Gaussian elimination over Q."""
    k = len(P)
    # rows: (P^T - I) pi = 0, with the last equation replaced by normalisation
    A = [[_exact(P[j][i]) - (1 if i == j else 0) for j in range(k)] + [Fraction(0)] for i in range(k)]
    A[-1] = [Fraction(1)] * k + [Fraction(1)]
    for col in range(k):
        piv = next((r for r in range(col, k) if A[r][col] != 0), None)
        if piv is None:
            raise InvalidArgument("stationary distribution is not unique")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(k):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(A[r][k] for r in range(k))


def measure_entropy(mu: ShiftMeasure) -> float:
    if mu.kind == "bernoulli":
        return partition_entropy(mu.p)
    k = mu.alphabet
    return math.fsum(
        -float(mu.pi[i]) * float(mu.P[i][j]) * math.log(float(mu.P[i][j]))
        for i in range(k)
        for j in range(k)
        if mu.P[i][j] > 0
    )


@dataclass(frozen=True)
class FinitePartitionSpec:
    """The join of the symbol-at-coordinate partitions over a finite window."""

    coordinates: FiniteWindow

    def __post_init__(self):
        if not len(self.coordinates):
            raise InvalidArgument("partition window must be nonempty")

    @classmethod
    def at(cls, group: Group, *coords: Sequence[int]) -> FinitePartitionSpec:
        return cls(FiniteWindow(group, [group.check(c) for c in coords]))

    @property
    def group(self) -> Group:
        return self.coordinates.group

    def translated_by(self, elements: Iterable[Coords]) -> set[Coords]:
        """Coordinates of the join of ``g alpha`` over the given ``g``."""
        mul = self.group.mul
        return {mul(g, w) for g in elements for w in self.coordinates.coords}


def joint_entropy(mu: ShiftMeasure, coords: Iterable[Coords]) -> float:
    """Entropy of the symbols on a finite set of coordinates, by cylinder enumeration."""
    coords = sorted(set(coords))
    if not coords:
        return 0.0
    if mu.kind == "bernoulli":
        # product measure: the joint entropy is additive over coordinates
        return len(coords) * partition_entropy(mu.p)
    if mu.alphabet ** len(coords) > MAX_CYLINDERS:
        raise UnsupportedOperation(f"{len(coords)} coordinates is too many cylinders to enumerate")
    terms = []
    for word in itertools.product(range(mu.alphabet), repeat=len(coords)):
        p = mu.cylinder(coords, word)
        if p:
            terms.append(-float(p) * math.log(p))
    return math.fsum(terms)


def brute_force_joint_entropy(mu: ShiftMeasure, coords: Iterable[Coords]) -> float:
    """Cylinder enumeration for any measure kind; used to cross-check the Bernoulli shortcut."""
    coords = sorted(set(coords))
    if mu.alphabet ** len(coords) > MAX_CYLINDERS:
        raise UnsupportedOperation("too many cylinders")
    return math.fsum(
        -float(p) * math.log(p)
        for word in itertools.product(range(mu.alphabet), repeat=len(coords))
        if (p := mu.cylinder(coords, word))
    )


def conditional_entropy(mu: ShiftMeasure, target: Iterable[Coords], given: Iterable[Coords]) -> float:
    """``H(target | given) = H(target u given) - H(given)``."""
    target, given = set(target), set(given)
    if mu.kind == "bernoulli":
        return len(target - given) * partition_entropy(mu.p)
    return joint_entropy(mu, target | given) - joint_entropy(mu, given)


def _check_measure_group(mu: ShiftMeasure, group: Group) -> None:
    if mu.group != group:
        raise InvalidArgument(f"measure lives on {mu.group}, partition on {group}")


def conditional_entropy_finite_past(mu: ShiftMeasure, alpha: FinitePartitionSpec, past: FiniteWindow) -> float:
    """``H(alpha | symbols on past)``; every past coordinate must lie in the algebraic past."""
    _check_measure_group(mu, alpha.group)
    if past.group != alpha.group:
        raise InvalidArgument("past window lives in another group")
    ctx = standard_context(past.group)
    outside = [c for c in past.coords if not ctx.past(c)]
    if outside:
        raise InvalidArgument(f"past window leaves the algebraic past at {outside[0]}")
    if past.coord_set & alpha.coordinates.coord_set:
        raise InvalidArgument("partition coordinates overlap the past window")
    return conditional_entropy(mu, alpha.coordinates.coords, past.coords)


@dataclass
class PinskerCheckReport:
    lhs: float
    rhs: float
    truncation_radius: int

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "gap": self.gap, "truncation_radius": self.truncation_radius}


def pinsker_check(mu: ShiftMeasure, alpha: FinitePartitionSpec, beta: FinitePartitionSpec, radius: int) -> PinskerCheckReport:
    """Truncated Pinsker identity on ``box(radius)``.

    lhs = H(a v b | (a v b) over past-in-box)
    rhs = H(b | b over past-in-box) + H(a | b over box  v  a over past-in-box)
    """
    group = alpha.group
    if beta.group != group:
        raise InvalidArgument("alpha and beta live in different groups")
    _check_measure_group(mu, group)
    if radius < 1:
        raise InvalidArgument("radius must be >= 1")
    box = enumerate_box(group, radius)
    for spec in (alpha, beta):
        if not spec.coordinates.coord_set <= box.coord_set:
            raise InvalidArgument("partition coordinates must lie in the truncation box")
    ctx = standard_context(group)
    past_box = [c for c in box.coords if ctx.past(c)]
    gamma = FinitePartitionSpec(FiniteWindow(group, list(alpha.coordinates.coord_set | beta.coordinates.coord_set)))

    lhs = conditional_entropy(mu, gamma.coordinates.coords, gamma.translated_by(past_box))
    h_beta = conditional_entropy(mu, beta.coordinates.coords, beta.translated_by(past_box))
    tail = conditional_entropy(
        mu, alpha.coordinates.coords, beta.translated_by(box.coords) | alpha.translated_by(past_box)
    )
    return PinskerCheckReport(lhs, h_beta + tail, radius)


def block_entropy(mu: ShiftMeasure, n: int) -> float:
    """``H`` of the symbols on ``[0, n]`` of Z, enumerating all cylinders (float)."""
    if mu.group != IntegerLattice(1):
        raise UnsupportedOperation("block entropy is computed on Z only")
    k = mu.alphabet
    if k ** (n + 1) > (1 << 24):
        raise UnsupportedOperation("block too long to enumerate")
    if mu.kind == "bernoulli":
        step = np.array([float(v) for v in mu.p])
        probs = step.copy()
        for _ in range(n):
            probs = (probs[:, None] * step[None, :]).ravel()
    else:
        P = np.array([[float(v) for v in r] for r in mu.P])
        probs = np.array([float(v) for v in mu.pi])
        for _ in range(n):
            last = np.arange(probs.size) % k
            probs = (probs[:, None] * P[last, :]).ravel()
    nz = probs[probs > 0]
    return float(-(nz * np.log(nz)).sum())


def block_entropy_estimate(mu: ShiftMeasure, n: int) -> float:
    return block_entropy(mu, n) / (n + 1)
