"""Network approximation with an arbitrary continuous nonpolynomial activation.

Pipeline: exact ridge interpolation supplies per-direction level profiles;
each profile is then matched by a small combination of activation atoms
``sigma(t*y - theta)`` with the scale ``t`` on a signed geometric grid and the
threshold ``theta`` restricted to a given open interval.  The assembled
network keeps every threshold strictly inside that interval and has however
many units the one-dimensional fits needed.

Polynomial activations cannot span profiles this way, so a finite-difference
degree probe rejects them up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .activation import Network, NetworkTerm
from .incidence import DensityPreconditionError, PointConfig, density_verdict, interpolate_ridge
from .rationals import RationalLike, rationalize


class FitBudgetError(Exception):
    """Dictionary fit ran out of atoms/refinements before reaching the target."""

    def __init__(self, best_error: float):
        super().__init__(f"fit budget exhausted; best error {best_error:.3g}")
        self.best_error = best_error


class PolynomialActivationError(Exception):
    """The activation looks polynomial; the density hypothesis fails."""


@dataclass(eq=False)
class SigmaOracle:
    """A continuous activation given by an evaluator plus a descriptor."""

    name: str
    evaluator: Callable[[float], float]
    params: dict = field(default_factory=dict)


def logistic_oracle() -> SigmaOracle:
    def f(x: float) -> float:
        if x >= 0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)

    return SigmaOracle("logistic", f)


def tanh_ramp_oracle() -> SigmaOracle:
    return SigmaOracle("tanh-ramp", lambda x: 0.5 * (1.0 + math.tanh(x)))


def table_oracle(points: Sequence[tuple[float, float]]) -> SigmaOracle:
    """Piecewise-linear activation through the given (x, y) pairs, clamped outside."""
    pts = sorted((float(x), float(y)) for x, y in points)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])

    def f(x: float) -> float:
        return float(np.interp(x, xs, ys))

    return SigmaOracle("table", f, {"points": [[x, y] for x, y in pts]})


def table_oracle_from_csv(path: str) -> SigmaOracle:
    """Load a piecewise-linear activation from a two-column CSV (x, y).

    A single non-numeric header line is tolerated and skipped.
    """
    pairs: list[tuple[float, float]] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise ValueError(f"{path}:{lineno + 1}: expected two columns")
            try:
                pairs.append((float(cells[0]), float(cells[1])))
            except ValueError:
                if lineno == 0:
                    continue  # header
                raise ValueError(f"{path}:{lineno + 1}: not numeric") from None
    if len(pairs) < 2:
        raise ValueError("table activation needs at least two points")
    return table_oracle(pairs)


def sigma_by_name(name: str, params: dict | None = None) -> SigmaOracle:
    params = params or {}
    if name == "logistic":
        return logistic_oracle()
    if name == "tanh-ramp":
        return tanh_ramp_oracle()
    if name == "table":
        return table_oracle([tuple(p) for p in params["points"]])
    raise ValueError(f"unknown activation preset {name!r}")


def polynomial_degree_probe(
    sigma: SigmaOracle, max_degree: int = 8, span: float = 8.0, rtol: float = 1e-8
) -> int | None:
    """Detect polynomial behaviour by vanishing finite differences.

    Samples the activation on an equispaced grid over ``[-span, span]``; the
    (d+1)-th differences of a degree-d polynomial vanish identically, while
    any genuinely curved nonpolynomial keeps them at visible size.  Returns
    the detected degree, or None when no order up to ``max_degree`` vanishes.
    """
    count = max_degree + 6
    xs = np.linspace(-span, span, count)
    ys = np.array([sigma.evaluator(float(x)) for x in xs])
    scale = max(1.0, float(np.max(np.abs(ys))))
    for degree in range(max_degree + 1):
        diffs = np.diff(ys, degree + 1)
        if float(np.max(np.abs(diffs))) <= rtol * scale:
            return degree
    return None


@dataclass(frozen=True)
class ThetaInterval:
    """An open threshold interval with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo >= self.hi:
            raise ValueError("interval must be nonempty: lo < hi")

    @classmethod
    def create(cls, lo: RationalLike, hi: RationalLike) -> "ThetaInterval":
        return cls(rationalize(lo), rationalize(hi))

    def contains(self, x: RationalLike) -> bool:
        q = rationalize(x)
        return self.lo < q < self.hi

    def interior_grid(self, count: int) -> list[Fraction]:
        """``count`` equispaced rationals strictly inside the interval."""
        step = (self.hi - self.lo) / (count + 1)
        return [self.lo + step * (j + 1) for j in range(count)]


@dataclass(frozen=True)
class UnivariateFit:
    """A one-dimensional activation combination fitted to a level profile."""

    terms: tuple[tuple[Fraction, Fraction, Fraction], ...]  # (c, t, theta)
    achieved_error: float


def _scale_grid(exp_range: int) -> list[Fraction]:
    grid = []
    for e in range(-exp_range, exp_range + 1):
        q = Fraction(2) ** e
        grid.append(q)
        grid.append(-q)
    return grid


def approx_univariate(
    levels: Sequence[RationalLike],
    targets: Sequence[RationalLike],
    sigma: SigmaOracle,
    theta: ThetaInterval,
    eps: float,
    budget: int = 48,
    rounds: int = 6,
) -> UnivariateFit:
    """Greedy dictionary fit of a level profile by activation atoms.

    Atoms are sigma(t*y - theta) with t on a signed geometric grid (powers of
    two) and theta equispaced strictly inside the interval; each round the
    scale range and the theta resolution double.  Atoms are added greedily by
    residual correlation with a full least-squares refit, until the worst
    level error is within ``eps`` or the atom budget runs out; exhausting all
    rounds raises :class:`FitBudgetError` with the best error achieved.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    ys = np.array([float(rationalize(v)) for v in levels], dtype=float)
    f = np.array([float(rationalize(v)) for v in targets], dtype=float)
    if f.size == 0:
        raise ValueError("need at least one level")
    best_error = float(np.max(np.abs(f)))
    if best_error <= eps:
        return UnivariateFit((), best_error)

    exp_range = 8
    theta_count = 257
    for _ in range(rounds):
        scales = _scale_grid(exp_range)
        thetas = theta.interior_grid(theta_count)
        atoms: list[tuple[Fraction, Fraction]] = [(t, th) for t in scales for th in thetas]
        columns = np.empty((f.size, len(atoms)))
        for j, (t, th) in enumerate(atoms):
            ft, fth = float(t), float(th)
            columns[:, j] = [sigma.evaluator(ft * y - fth) for y in ys]
        norms = np.linalg.norm(columns, axis=0)
        usable = norms > 1e-12

        selected: list[int] = []
        residual = f.copy()
        while len(selected) < budget:
            corr = np.abs(residual @ columns)
            corr[~usable] = -1.0
            if selected:
                corr[selected] = -1.0
            j = int(np.argmax(corr / np.where(norms > 1e-12, norms, 1.0)))
            if corr[j] <= 0:
                break
            selected.append(j)
            sub = columns[:, selected]
            coef, *_ = np.linalg.lstsq(sub, f, rcond=None)
            residual = f - sub @ coef
            err = float(np.max(np.abs(residual)))
            best_error = min(best_error, err)
            if err <= eps:
                terms = tuple(
                    (Fraction(float(c)), atoms[jj][0], atoms[jj][1])
                    for c, jj in zip(coef, selected)
                )
                return UnivariateFit(terms, err)
        exp_range *= 2
        theta_count = theta_count * 2 + 1
    raise FitBudgetError(best_error)


def approx_network(
    cfg: PointConfig,
    f_values: Sequence[RationalLike],
    sigma: SigmaOracle,
    theta: ThetaInterval,
    eps: float,
    budget: int = 48,
    rounds: int = 6,
) -> Network:
    """Assemble a network matching the data within ``eps`` on the points.

    Refuses polynomial activations (probe) and configurations with a closed
    path (certificate attached to the error).  The per-direction budget is
    eps/(k+1); the assembled worst-case error over the configuration points
    is replayed, checked against the triangle-inequality bound, and recorded
    in ``report``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    detected = polynomial_degree_probe(sigma)
    if detected is not None:
        raise PolynomialActivationError(
            f"activation {sigma.name!r} looks like a polynomial of degree {detected}; "
            "density requires a nonpolynomial activation"
        )
    verdict = density_verdict(cfg)
    if not verdict.dense:
        raise DensityPreconditionError(verdict.certificate)
    ridge, residual = interpolate_ridge(cfg, f_values)

    k = cfg.k
    per_dir_eps = eps / (k + 1)
    terms: list[NetworkTerm] = []
    fit_errors: list[float] = []
    for a, table in zip(cfg.dirs, ridge.tables):
        fit = approx_univariate(
            table.levels, table.values, sigma, theta, per_dir_eps, budget, rounds
        )
        fit_errors.append(fit.achieved_error)
        for c, t, th in fit.terms:
            if not theta.contains(th):
                raise AssertionError("threshold escaped the allowed interval")
            terms.append(NetworkTerm(c, a.scale(t), th))

    net = Network(tuple(terms), sigma)
    f = [float(rationalize(v)) for v in f_values]
    replayed = 0.0
    evaluator = sigma.evaluator
    for point, fv in zip(cfg.points, f):
        val = sum(
            float(t.c) * evaluator(float(t.w.dot(point) - t.theta)) for t in terms
        )
        replayed = max(replayed, abs(fv - val))
    bound = float(residual) + sum(fit_errors)
    assert replayed <= bound + 1e-9, "error budget accounting violated"
    if replayed > eps:
        raise FitBudgetError(replayed)
    object.__setattr__(
        net,
        "report",
        {
            "replayed_error": replayed,
            "ridge_residual": float(residual),
            "per_direction_errors": fit_errors,
            "error_bound": bound,
            "term_count": len(terms),
        },
    )
    return net
