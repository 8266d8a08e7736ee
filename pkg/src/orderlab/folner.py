"""Følner windows and exact defect ratios."""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgument
from .groups import FiniteWindow, Group, GroupElement, IntegerLattice, enumerate_box


def folner_box(group: Group, n: int) -> FiniteWindow:
    """The window F_n used for averaging: [0, n]^d on Z^d, the canonical box elsewhere."""
    if isinstance(group, IntegerLattice):
        return FiniteWindow(group, itertools.product(range(n + 1), repeat=group.d))
    return enumerate_box(group, n)


def defect(g: GroupElement, F: FiniteWindow) -> Fraction:
    """``|gF Δ F| / |F|`` with left translation, as an exact fraction."""
    if g.group != F.group:
        raise InvalidArgument("translator and window live in different groups")
    if not len(F):
        raise InvalidArgument("empty window")
    mul = F.group.mul
    inside = sum(1 for c in F.coords if mul(g.coords, c) in F.coord_set)
    return Fraction(2 * (len(F) - inside), len(F))


def interior_ratio(K: FiniteWindow, F: FiniteWindow) -> Fraction:
    """Fraction of ``g`` in ``F`` with ``Kg`` contained in ``F``."""
    if K.group != F.group:
        raise InvalidArgument("K and F live in different groups")
    if not len(F):
        raise InvalidArgument("empty window")
    mul = F.group.mul
    good = sum(1 for c in F.coords if all(mul(k, c) in F.coord_set for k in K.coords))
    return Fraction(good, len(F))


@dataclass
class FolnerDefectSeries:
    group: Group
    translator: GroupElement
    values: list[tuple[int, Fraction]] = field(default_factory=list)
    threshold: Fraction = Fraction(1, 5)

    @property
    def passed(self) -> bool:
        """Final defect below the first one and below the threshold."""
        if len(self.values) < 2:
            return False
        first, last = self.values[0][1], self.values[-1][1]
        return (last < first or last == 0) and last < self.threshold

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "translator": list(self.translator.coords),
            "threshold": str(self.threshold),
            "values": [
                {"n": n, "numerator": v.numerator, "denominator": v.denominator, "float_value": float(v)}
                for n, v in self.values
            ],
            "passed": self.passed,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "numerator", "denominator", "float_value"])
        for n, v in self.values:
            w.writerow([n, v.numerator, v.denominator, repr(float(v))])
        return buf.getvalue()


def defect_trend(group: Group, g: GroupElement, n_lo: int, n_hi: int, threshold=Fraction(1, 5)) -> FolnerDefectSeries:
    if not 1 <= n_lo < n_hi:
        raise InvalidArgument("need 1 <= n_lo < n_hi")
    if g.group != group:
        raise InvalidArgument("translator belongs to another group")
    series = FolnerDefectSeries(group, g, threshold=Fraction(threshold))
    for n in range(n_lo, n_hi + 1):
        series.values.append((n, defect(g, folner_box(group, n))))
    return series
