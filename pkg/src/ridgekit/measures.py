"""Finitely supported signed measures and their projections.

A :class:`DiscreteMeasure` is a signed combination of point masses with exact
rational weights.  Projecting it along a direction ``a`` (the map
``x -> a . x``) yields a :class:`ProjectedMeasure` on the line whose atom at
level ``c`` collects the weights of all support points with ``a . x == c``.
A measure *annihilates* a family of directions when every such projection is
the zero measure; these are exactly the measures orthogonal to all sums of
ridge profiles along those directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .rationals import RationalLike, rationalize


@dataclass(frozen=True)
class Point:
    """A point of R^d with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) == 0:
            raise ValueError("points need at least one coordinate")

    @classmethod
    def of(cls, *values: RationalLike) -> "Point":
        return cls(tuple(rationalize(v) for v in values))

    @classmethod
    def from_seq(cls, values: Sequence[RationalLike]) -> "Point":
        return cls(tuple(rationalize(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def translate(self, shift: Sequence[Fraction]) -> "Point":
        if len(shift) != self.dim:
            raise ValueError("shift dimension mismatch")
        return Point(tuple(c + s for c, s in zip(self.coords, shift)))


@dataclass(frozen=True)
class Direction:
    """A nonzero vector of R^d; defines the projection x -> a . x."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) == 0:
            raise ValueError("directions need at least one coordinate")
        if all(c == 0 for c in self.coords):
            raise ValueError("direction must be nonzero")

    @classmethod
    def of(cls, *values: RationalLike) -> "Direction":
        return cls(tuple(rationalize(v) for v in values))

    @classmethod
    def from_seq(cls, values: Sequence[RationalLike]) -> "Direction":
        return cls(tuple(rationalize(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def dot(self, point: Point) -> Fraction:
        if point.dim != self.dim:
            raise ValueError(
                f"dimension mismatch: direction is {self.dim}-d, point is {point.dim}-d"
            )
        return sum((a * x for a, x in zip(self.coords, point.coords)), Fraction(0))

    def scale(self, factor: RationalLike) -> "Direction":
        f = rationalize(factor)
        if f == 0:
            raise ValueError("cannot scale a direction by zero")
        return Direction(tuple(f * c for c in self.coords))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Canonical finitely supported signed measure.

    Support points are pairwise distinct, sorted lexicographically, and carry
    nonzero weights; the zero measure is the empty support (never an all-zero
    weight list), so equality of measures is plain equality.
    """

    support: tuple[Point, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights must have equal length")

    @classmethod
    def from_atoms(
        cls, atoms: Iterable[tuple[Point, RationalLike]]
    ) -> "DiscreteMeasure":
        """Build the canonical form: merge duplicate points, drop zero weights."""
        merged: dict[tuple[Fraction, ...], Fraction] = {}
        dim = None
        for point, weight in atoms:
            if dim is None:
                dim = point.dim
            elif point.dim != dim:
                raise ValueError("all atoms must share one dimension")
            merged[point.coords] = merged.get(point.coords, Fraction(0)) + rationalize(weight)
        kept = sorted((c, w) for c, w in merged.items() if w != 0)
        return cls(tuple(Point(c) for c, _ in kept), tuple(w for _, w in kept))

    @classmethod
    def point_mass(cls, point: Point, weight: RationalLike = 1) -> "DiscreteMeasure":
        return cls.from_atoms([(point, weight)])

    @classmethod
    def zero(cls) -> "DiscreteMeasure":
        return cls((), ())

    @property
    def is_zero(self) -> bool:
        return not self.support

    @property
    def dim(self) -> int | None:
        return self.support[0].dim if self.support else None

    def atoms(self) -> Iterable[tuple[Point, Fraction]]:
        return zip(self.support, self.weights)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure.from_atoms(list(self.atoms()) + list(other.atoms()))

    def __neg__(self) -> "DiscreteMeasure":
        return DiscreteMeasure(self.support, tuple(-w for w in self.weights))

    def scaled(self, factor: RationalLike) -> "DiscreteMeasure":
        return DiscreteMeasure.from_atoms((p, rationalize(factor) * w) for p, w in self.atoms())


@dataclass(frozen=True)
class ProjectedMeasure:
    """Canonical signed measure on the line: strictly increasing levels, nonzero weights."""

    levels: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.weights):
            raise ValueError("levels and weights must have equal length")
        if any(a >= b for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")

    @classmethod
    def from_atoms(
        cls, atoms: Iterable[tuple[RationalLike, RationalLike]]
    ) -> "ProjectedMeasure":
        merged: dict[Fraction, Fraction] = {}
        for level, weight in atoms:
            lv = rationalize(level)
            merged[lv] = merged.get(lv, Fraction(0)) + rationalize(weight)
        kept = sorted((lv, w) for lv, w in merged.items() if w != 0)
        return cls(tuple(lv for lv, _ in kept), tuple(w for _, w in kept))

    @property
    def is_zero(self) -> bool:
        return not self.levels

    def atoms(self) -> Iterable[tuple[Fraction, Fraction]]:
        return zip(self.levels, self.weights)

    def total_variation(self) -> Fraction:
        return sum((abs(w) for w in self.weights), Fraction(0))


def pushforward(mu: DiscreteMeasure, a: Direction) -> ProjectedMeasure:
    """Image of ``mu`` under x -> a . x, with exact level grouping."""
    return ProjectedMeasure.from_atoms((a.dot(p), w) for p, w in mu.atoms())


def total_variation(mu: DiscreteMeasure) -> Fraction:
    """Sum of absolute atom weights."""
    return sum((abs(w) for w in mu.weights), Fraction(0))


def integrate(mu: DiscreteMeasure, f: Callable[[Point], RationalLike]) -> Fraction | float:
    """Integrate ``f`` against ``mu``: the weighted sum of f over the support.

    Exact (a Fraction) whenever ``f`` returns rationals; a float leaks in as
    soon as ``f`` produces one.
    """
    total: Fraction | float = Fraction(0)
    for p, w in mu.atoms():
        value = f(p)
        if isinstance(value, float):
            total = float(total) + float(w) * value
        else:
            total = total + w * rationalize(value)
    return total


def is_annihilating(mu: DiscreteMeasure, dirs: Sequence[Direction]) -> bool:
    """True iff every directional projection of ``mu`` is the zero measure."""
    if not dirs:
        raise ValueError("need at least one direction")
    return all(pushforward(mu, a).is_zero for a in dirs)
