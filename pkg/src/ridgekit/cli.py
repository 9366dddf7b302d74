"""Command-line front end.

Commands analyze a configuration given either as a JSON file (rationals as
"p/q" strings, preserving exactness) or as a named preset, and write their
artifacts as JSON/CSV with sorted keys and LF newlines, so identical jobs
produce byte-identical outputs.

Exit codes: 0 success, 2 a density precondition failed (the certificate is
still written), 1 malformed input or internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .activation import (
    ActivationSpec,
    EncoderBudgetError,
    build_k_network,
    encode_univariate,
    sigma_eval,
)
from .bolts import (
    BoltGenerationError,
    build_bolt_graph,
    find_closed_bolt,
    orbits,
    weak_star_probe,
)
from .enumeration import RationalPoly
from .incidence import (
    ClosedPathCertificate,
    DensityPreconditionError,
    PointConfig,
    density_verdict,
    interpolate_ridge,
)
from .netapprox import (
    FitBudgetError,
    PolynomialActivationError,
    ThetaInterval,
    sigma_by_name,
)
from .presets import (
    config_preset,
    generator_preset,
    probe_test,
    target_values,
)
from .rationals import format_rational, rationalize

COMMANDS = (
    "paths",
    "bolts",
    "orbits",
    "probe",
    "ridgefit",
    "netfit",
    "sigma-build",
    "sigma-eval",
    "kfit",
)


@dataclass
class JobConfig:
    """One CLI job: the command plus its fully resolved parameters."""

    command: str
    input_path: str | None = None
    preset: str | None = None
    out_dir: str = "."
    params: dict = field(default_factory=dict)
    seed: int = 0


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    path.write_bytes(text.encode("utf-8"))


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def load_config_file(path: str) -> tuple[PointConfig, list[Fraction] | None]:
    """Parse the JSON configuration schema.

    Schema: {"dimension": d, "points": [[rational strings]],
    "directions": [[rational strings]], "values": [rational strings]?}.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    dim = raw["dimension"]
    points = raw["points"]
    dirs = raw["directions"]
    for label, rows in (("points", points), ("directions", dirs)):
        for row in rows:
            if len(row) != dim:
                raise ValueError(f"{label} entry {row} does not match dimension {dim}")
    cfg = PointConfig.build(points, dirs)
    values = raw.get("values")
    if values is not None:
        if len(values) != len(points):
            raise ValueError("values must have one entry per point")
        values = [rationalize(v) for v in values]
    return cfg, values


def _resolve_config(job: JobConfig) -> tuple[PointConfig, list[Fraction] | None]:
    if job.preset:
        cfg = config_preset(job.preset)
        values = None
    elif job.input_path:
        cfg, values = load_config_file(job.input_path)
    else:
        raise ValueError("provide --preset or an input file")
    fname = job.params.get("target")
    if fname:
        values = target_values(fname, cfg)
    return cfg, values


def _certificate_dict(cert: ClosedPathCertificate) -> dict:
    return {
        "points": [[format_rational(c) for c in p.coords] for p in cert.measure.support],
        "weights": [format_rational(w) for w in cert.measure.weights],
    }


def _source_fields(job: JobConfig) -> dict:
    return {
        "command": job.command,
        "source": job.preset or job.input_path,
        "seed": job.seed,
    }


def _run_paths(job: JobConfig, out: Path) -> int:
    cfg, _ = _resolve_config(job)
    verdict = density_verdict(cfg)
    payload = _source_fields(job) | {
        "verdict": "dense" if verdict.dense else "not_dense",
        "certificate": None if verdict.dense else _certificate_dict(verdict.certificate),
    }
    _write_json(out / "verdict.json", payload)
    return 0 if verdict.dense else 2


def _require_two_dirs(cfg: PointConfig) -> None:
    if cfg.k != 2:
        raise ValueError("bolt analysis needs exactly two directions")


def _run_bolts(job: JobConfig, out: Path) -> int:
    cfg, _ = _resolve_config(job)
    _require_two_dirs(cfg)
    graph = build_bolt_graph(cfg.points, cfg.dirs[0], cfg.dirs[1])
    bolt = find_closed_bolt(graph)
    payload = _source_fields(job) | {
        "found": bolt is not None,
        "bolt": None
        if bolt is None
        else {
            "points": [[format_rational(c) for c in p.coords] for p in bolt.points],
            "first_link": bolt.first_link,
            "closed": bolt.closed,
        },
    }
    _write_json(out / "bolt.json", payload)
    return 0


def _run_orbits(job: JobConfig, out: Path) -> int:
    cfg, _ = _resolve_config(job)
    _require_two_dirs(cfg)
    graph = build_bolt_graph(cfg.points, cfg.dirs[0], cfg.dirs[1])
    parts = orbits(graph)
    payload = _source_fields(job) | {
        "orbit_count": len(parts),
        "orbits": [list(part) for part in parts],
    }
    _write_json(out / "orbits.json", payload)
    return 0


def _run_probe(job: JobConfig, out: Path) -> int:
    if not job.preset:
        raise ValueError("probe requires --preset naming a generator")
    gen = generator_preset(job.preset)
    names = job.params.get("tests") or ["x", "y"]
    tests = [probe_test(n) for n in names]
    if not any(n == "ridge-identity" for n in names):
        tests.append(probe_test("ridge-identity"))
    n_max = int(job.params.get("n", 1000))
    threshold = rationalize(job.params.get("threshold", "1/100"))
    report = weak_star_probe(gen, tests, n_max, threshold)
    _write_csv(out / "decay.csv", ["n", "test_name", "abs_integral"], report.rows)
    payload = _source_fields(job) | {
        "verdict": report.verdict,
        "ridge_bounds_ok": report.ridge_bounds_ok,
        "threshold": report.threshold,
        "n_max": report.n_max,
        "final_values": report.final_values,
    }
    _write_json(out / "probe.json", payload)
    return 0


def _require_values(values) -> list[Fraction]:
    if values is None:
        raise ValueError("this command needs data: provide \"values\" in the input or --f NAME")
    return values


def _run_ridgefit(job: JobConfig, out: Path) -> int:
    cfg, values = _resolve_config(job)
    values = _require_values(values)
    ridge, residual = interpolate_ridge(cfg, values)
    payload = _source_fields(job) | {
        "residual": format_rational(residual),
        "tables": [
            {
                "direction": [format_rational(c) for c in a.coords],
                "levels": [format_rational(lv) for lv in table.levels],
                "values": [format_rational(v) for v in table.values],
            }
            for a, table in zip(ridge.dirs, ridge.tables)
        ],
    }
    _write_json(out / "ridgefit.json", payload)
    return 0


def _run_netfit(job: JobConfig, out: Path) -> int:
    cfg, values = _resolve_config(job)
    values = _require_values(values)
    sigma_name = job.params.get("sigma", "logistic")
    if sigma_name == "table":
        from .netapprox import table_oracle_from_csv

        table_path = job.params.get("sigma_table")
        if not table_path:
            raise ValueError("--sigma table requires --sigma-table FILE.csv")
        sigma = table_oracle_from_csv(table_path)
    else:
        sigma = sigma_by_name(sigma_name)
    theta = ThetaInterval.create(
        job.params.get("theta_lo", "-5"), job.params.get("theta_hi", "5")
    )
    eps = float(job.params.get("eps", 0.01))
    net = approx_or_fail(cfg, values, sigma, theta, eps, out, job)
    if net is None:
        return 2
    _write_json(out / "network.json", _source_fields(job) | net.to_dict())
    return 0


def approx_or_fail(cfg, values, sigma, theta, eps, out: Path, job: JobConfig):
    from .netapprox import approx_network

    try:
        return approx_network(cfg, values, sigma, theta, eps)
    except DensityPreconditionError as exc:
        _write_json(
            out / "certificate.json",
            _source_fields(job)
            | {"error": "not_dense", "certificate": _certificate_dict(exc.certificate)},
        )
        return None


def _run_kfit(job: JobConfig, out: Path) -> int:
    cfg, values = _resolve_config(job)
    values = _require_values(values)
    eps = rationalize(job.params.get("eps", "1/100"))
    try:
        net = build_k_network(cfg, values, eps)
    except DensityPreconditionError as exc:
        _write_json(
            out / "certificate.json",
            _source_fields(job)
            | {"error": "not_dense", "certificate": _certificate_dict(exc.certificate)},
        )
        return 2
    _write_json(out / "network.json", _source_fields(job) | net.to_dict())
    return 0


def _run_sigma_eval(job: JobConfig, out: Path) -> int:
    spec = ActivationSpec.create(
        job.params.get("alpha", "1"),
        job.params.get("l", "1"),
        job.params.get("sharpness", "1"),
    )
    start = rationalize(job.params.get("start", "0"))
    stop = rationalize(job.params.get("stop", "10"))
    step = rationalize(job.params.get("step", "1/100"))
    if step <= 0 or stop < start:
        raise ValueError("need step > 0 and stop >= start")
    rows = []
    t = start
    while t <= stop:
        rows.append((float(t), float(sigma_eval(spec, t))))
        t += step
    _write_csv(out / "sigma.csv", ["t", "sigma_t"], rows)
    return 0


def _run_sigma_build(job: JobConfig, out: Path) -> int:
    coeffs = job.params.get("poly")
    if not coeffs:
        raise ValueError("sigma-build requires --poly with comma-separated rational coefficients")
    poly = RationalPoly.from_coefficients([rationalize(c) for c in coeffs.split(",")])
    spec = ActivationSpec.create(
        job.params.get("alpha", "1"),
        job.params.get("l", "1"),
        job.params.get("sharpness", "1"),
    )
    eps = float(job.params.get("eps", 0.001))
    enc = encode_univariate(poly, eps, spec)
    payload = _source_fields(job) | {
        "index": str(enc.index),
        "scale": format_rational(enc.scale),
        "shift": format_rational(enc.shift),
        "achieved_error": float(enc.achieved_error),
        "poly": str(enc.poly),
    }
    _write_json(out / "encoding.json", payload)
    return 0


_RUNNERS = {
    "paths": _run_paths,
    "bolts": _run_bolts,
    "orbits": _run_orbits,
    "probe": _run_probe,
    "ridgefit": _run_ridgefit,
    "netfit": _run_netfit,
    "kfit": _run_kfit,
    "sigma-eval": _run_sigma_eval,
    "sigma-build": _run_sigma_build,
}


def run(job: JobConfig) -> int:
    """Execute one job; returns the process exit code."""
    if job.command not in _RUNNERS:
        raise ValueError(f"unknown command {job.command!r}")
    out = Path(job.out_dir)
    try:
        return _RUNNERS[job.command](job, out)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 1
    except (
        ValueError,
        OSError,
        KeyError,
        OverflowError,
        FitBudgetError,
        PolynomialActivationError,
        EncoderBudgetError,
        BoltGenerationError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgekit",
        description="Density analysis and network construction for direction-restricted ridge sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("input", nargs="?", help="configuration JSON file")
            p.add_argument("--preset", help="named preset configuration")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=0, help="seed recorded in artifacts")

    p = sub.add_parser("paths", help="decide density / find a closed-path certificate")
    add_common(p)

    p = sub.add_parser("bolts", help="find a closed bolt (two directions)")
    add_common(p)

    p = sub.add_parser("orbits", help="orbit partition under level sharing (two directions)")
    add_common(p)

    p = sub.add_parser("probe", help="finite weak-star decay probe along a generated bolt")
    p.add_argument("--preset", required=True, help="generator preset name")
    p.add_argument("--N", type=int, default=1000, help="truncation length")
    p.add_argument("--tests", default="x,y", help="comma-separated test names")
    p.add_argument("--threshold", default="1/100", help="decay threshold for plain tests")
    add_common(p, with_input=False)

    p = sub.add_parser("ridgefit", help="exact least-squares ridge interpolation")
    add_common(p)
    p.add_argument("--f", dest="target", help="named target function for the data")

    p = sub.add_parser("netfit", help="fit a network with a named activation oracle")
    add_common(p)
    p.add_argument("--f", dest="target", help="named target function for the data")
    p.add_argument(
        "--sigma", default="logistic", help="activation preset (logistic, tanh-ramp, table)"
    )
    p.add_argument("--sigma-table", dest="sigma_table", help="CSV file for --sigma table")
    p.add_argument("--theta-lo", default="-5")
    p.add_argument("--theta-hi", default="5")
    p.add_argument("--eps", default="0.01")

    p = sub.add_parser("kfit", help="build the exactly-k-unit network with the constructed activation")
    add_common(p)
    p.add_argument("--f", dest="target", help="named target function for the data")
    p.add_argument("--eps", default="1/100")

    p = sub.add_parser("sigma-eval", help="tabulate the constructed activation as CSV")
    p.add_argument("--alpha", default="1")
    p.add_argument("--l", default="1")
    p.add_argument("--sharpness", default="1")
    p.add_argument("--from", dest="start", default="0")
    p.add_argument("--to", dest="stop", default="10")
    p.add_argument("--step", default="1/100")
    add_common(p, with_input=False)

    p = sub.add_parser("sigma-build", help="encode a rational polynomial into the activation")
    p.add_argument("--poly", required=True, help="comma-separated rational coefficients, constant first")
    p.add_argument("--alpha", default="1")
    p.add_argument("--l", default="1")
    p.add_argument("--sharpness", default="1")
    p.add_argument("--eps", default="0.001")
    add_common(p, with_input=False)

    return parser


def job_from_args(args: argparse.Namespace) -> JobConfig:
    params = {}
    for key in (
        "target",
        "sigma",
        "sigma_table",
        "theta_lo",
        "theta_hi",
        "eps",
        "alpha",
        "l",
        "sharpness",
        "start",
        "stop",
        "step",
        "poly",
        "threshold",
    ):
        if hasattr(args, key) and getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if hasattr(args, "N"):
        params["n"] = args.N
    if hasattr(args, "tests"):
        params["tests"] = [t.strip() for t in args.tests.split(",") if t.strip()]
    return JobConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        preset=getattr(args, "preset", None),
        out_dir=args.out,
        params=params,
        seed=args.seed,
    )


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return run(job_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
