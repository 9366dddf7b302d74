"""Level/point incidence analysis for finite configurations.

Fix points ``x^1..x^n`` and directions ``a^1..a^k``.  For each direction,
points group by their exact projection value (their *level*).  Stacking one
0/1 row per (direction, level) pair, with a 1 in column ``j`` when point
``j`` sits on that level, gives the incidence matrix ``M``.

A *closed path* is a subset of points carrying nonzero coefficients that sum
to zero within every level group of every direction, i.e. a nonzero null
vector of ``M``.  Its atoms form a measure annihilating all the directions,
which is exactly the obstruction to representing arbitrary data on the
points as a sum of per-direction level profiles.  Hence the verdict: the
configuration is *dense* (every data vector is an exact ridge sum) iff no
closed path exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactlinalg import GaussJordanSolver, gram_matrix, int_mat_mul, mat_vec, nullspace_int
from .measures import Direction, DiscreteMeasure, Point, is_annihilating
from .rationals import RationalLike, rationalize


@dataclass(frozen=True)
class PointConfig:
    """A finite point set together with the directions under study."""

    points: tuple[Point, ...]
    dirs: tuple[Direction, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("need at least one point")
        if not self.dirs:
            raise ValueError("need at least one direction")
        dim = self.points[0].dim
        if any(p.dim != dim for p in self.points) or any(a.dim != dim for a in self.dirs):
            raise ValueError("points and directions must share one dimension")
        if len({p.coords for p in self.points}) != len(self.points):
            raise ValueError("points must be pairwise distinct")

    @classmethod
    def build(
        cls,
        points: Sequence[Sequence[RationalLike]],
        dirs: Sequence[Sequence[RationalLike]],
    ) -> "PointConfig":
        return cls(
            tuple(Point.from_seq(p) for p in points),
            tuple(Direction.from_seq(a) for a in dirs),
        )

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return len(self.dirs)

    @property
    def dim(self) -> int:
        return self.points[0].dim


@dataclass(frozen=True)
class IncidenceStructure:
    """Per-direction level groups plus the stacked 0/1 membership matrix."""

    dirs: tuple[Direction, ...]
    levels: tuple[tuple[Fraction, ...], ...]          # per direction, sorted
    groups: tuple[tuple[tuple[int, ...], ...], ...]   # per direction, per level
    n_points: int

    @property
    def level_counts(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    @property
    def row_count(self) -> int:
        return sum(self.level_counts)

    def matrix_rows(self) -> list[list[int]]:
        rows: list[list[int]] = []
        for dir_groups in self.groups:
            for members in dir_groups:
                row = [0] * self.n_points
                for j in members:
                    row[j] = 1
                rows.append(row)
        return rows


def build_incidence(cfg: PointConfig) -> IncidenceStructure:
    """Group points by exact projection value along every direction."""
    levels: list[tuple[Fraction, ...]] = []
    groups: list[tuple[tuple[int, ...], ...]] = []
    for a in cfg.dirs:
        by_level: dict[Fraction, list[int]] = {}
        for j, p in enumerate(cfg.points):
            by_level.setdefault(a.dot(p), []).append(j)
        ordered = sorted(by_level.items())
        levels.append(tuple(lv for lv, _ in ordered))
        groups.append(tuple(tuple(members) for _, members in ordered))
    return IncidenceStructure(cfg.dirs, tuple(levels), tuple(groups), cfg.n)


@dataclass(frozen=True)
class ClosedPathCertificate:
    """A nonzero annihilating measure supported on configuration points.

    Weights are coprime integers and the lexicographically first support
    point carries a positive weight.
    """

    measure: DiscreteMeasure

    def __post_init__(self) -> None:
        if len(self.measure.support) < 2:
            raise ValueError("a closed path needs at least two points")

    def verify(self, dirs: Sequence[Direction]) -> bool:
        return is_annihilating(self.measure, dirs)

    def weights_for(self, points: Sequence[Point]) -> list[Fraction]:
        """Weights aligned with an external point ordering (0 off support)."""
        lookup = {p.coords: w for p, w in self.measure.atoms()}
        return [lookup.get(p.coords, Fraction(0)) for p in points]


class DensityPreconditionError(Exception):
    """Raised when an operation requires a dense configuration but a closed path exists."""

    def __init__(self, certificate: ClosedPathCertificate):
        super().__init__("configuration admits a closed path; ridge sums are not dense")
        self.certificate = certificate


def find_closed_path(cfg: PointConfig) -> ClosedPathCertificate | None:
    """Return an annihilating certificate, or None when the incidence matrix
    has full column rank.

    The certificate is the first null-space basis vector under the
    right-to-left pivot order, restricted to its nonzero coordinates; the
    restriction satisfies the same level equations, so the support is itself
    a closed path.
    """
    inc = build_incidence(cfg)
    basis = nullspace_int(inc.matrix_rows(), cfg.n)
    if not basis:
        return None
    vec = basis[0]
    atoms = [(cfg.points[j], Fraction(w)) for j, w in enumerate(vec) if w != 0]
    measure = DiscreteMeasure.from_atoms(atoms)
    if measure.weights[0] < 0:
        measure = -measure
    return ClosedPathCertificate(measure)


@dataclass(frozen=True)
class LevelTable:
    """A univariate profile sampled on the levels of one direction."""

    levels: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.values):
            raise ValueError("levels and values must have equal length")

    def value_at(self, level: Fraction) -> Fraction:
        try:
            return self.values[self.levels.index(level)]
        except ValueError:
            raise KeyError(f"level {level} not in table") from None


@dataclass(frozen=True)
class RidgeSum:
    """Per-direction level profiles; evaluates as the sum of the profiles."""

    dirs: tuple[Direction, ...]
    tables: tuple[LevelTable, ...]

    def value_at(self, point: Point) -> Fraction:
        return sum(
            (t.value_at(a.dot(point)) for a, t in zip(self.dirs, self.tables)),
            Fraction(0),
        )


@dataclass
class _RidgeSolver:
    """Cached exact least-squares machinery for one configuration.

    Works in point space: with ``S = M^T M`` (n-by-n), any solution ``y`` of
    ``S^2 y = S f`` gives the minimum-norm least-squares level profile
    ``u = M y``, because ``S y - f`` is orthogonal to the row space of ``M``
    and ``u`` lies in the column space of ``M``.
    """

    incidence: IncidenceStructure
    rows: list[list[int]] = field(init=False)
    solver: GaussJordanSolver = field(init=False)
    s_matrix: list[list[int]] = field(init=False)

    def __post_init__(self) -> None:
        self.rows = self.incidence.matrix_rows()
        n = self.incidence.n_points
        self.s_matrix = gram_matrix(self.rows, n)
        s2 = int_mat_mul(self.s_matrix, self.s_matrix)
        self.solver = GaussJordanSolver([[Fraction(v) for v in row] for row in s2])

    def fit(self, values: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        rhs = mat_vec(self.s_matrix, values)
        y = self.solver.solve(rhs)
        u = mat_vec(self.rows, y)
        fitted = [Fraction(0)] * len(values)
        pos = 0
        for dir_groups in self.incidence.groups:
            for members in dir_groups:
                for j in members:
                    fitted[j] += u[pos]
                pos += 1
        return u, fitted


@lru_cache(maxsize=128)
def _ridge_solver(cfg: PointConfig) -> _RidgeSolver:
    return _RidgeSolver(build_incidence(cfg))


def interpolate_ridge(
    cfg: PointConfig, values: Sequence[RationalLike]
) -> tuple[RidgeSum, Fraction]:
    """Best exact ridge-sum fit of ``values`` on the configuration points.

    Solves the stacked level system in the least-squares sense over the
    rationals (minimum-norm among minimizers) and returns the per-direction
    level tables together with the exact worst-case pointwise error.  The
    residual is zero for every data vector iff the configuration admits no
    closed path.
    """
    if len(values) != cfg.n:
        raise ValueError(f"expected {cfg.n} values, got {len(values)}")
    f = [rationalize(v) for v in values]
    solver = _ridge_solver(cfg)
    u, fitted = solver.fit(f)
    residual = max(abs(a - b) for a, b in zip(f, fitted))
    tables = []
    pos = 0
    for lv in solver.incidence.levels:
        tables.append(LevelTable(lv, tuple(u[pos : pos + len(lv)])))
        pos += len(lv)
    return RidgeSum(cfg.dirs, tuple(tables)), residual


@dataclass(frozen=True)
class DensityVerdict:
    dense: bool
    certificate: ClosedPathCertificate | None

    def __post_init__(self) -> None:
        if self.dense == (self.certificate is not None):
            raise ValueError("verdict and certificate disagree")


def density_verdict(cfg: PointConfig) -> DensityVerdict:
    """Dense iff no closed path exists; otherwise carries the witness."""
    cert = find_closed_path(cfg)
    return DensityVerdict(cert is None, cert)
