"""Command-line front end: config loading, task dispatch, CSV/JSON artifacts.

Configs are YAML with three sections (geometry, discretization, run); all
geometry functions are cosine series, so smoothness holds by construction.
Every output file carries the sha256 hash of the canonicalized config so
artifacts can be traced to their inputs; floats are written with 17
significant digits for bitwise-reproducible reruns.
"""

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from ._parallel import default_threads
from .bands import (analyze_gaps, borg_test, brillouin_grid, compute_bands,
                    effective_solver, fiber_solver, symmetry_monotonicity_check)
from .convergence import eps_sweep, fit_rate
from .cross_section import SectionGrid, uniform_gap
from .effective_1d import FourierTruncation
from .errors import (GapViolation, InconsistentBands, ParseError,
                     PropertyViolation, ValidationError, WavebandsError)
from .fiber3d import FiberDiscretization
from .geometry import (PeriodicScalar, SectionShape, WaveguideSpec,
                       max_epsilon, validate_epsilon)

_DISC_DEFAULTS = {
    "fourier_modes": 32,
    "longitudinal_points": 25,
    "section_nodes": [9, 9],
    "theta_points": 33,
}
_RUN_DEFAULTS = {
    "epsilons": [0.2, 0.1, 0.05],
    "n_bands": 6,
    "output_dir": ".",
    "min_slope": 0.9,
    "s_samples": 16,
}


@dataclass
class RunConfig:
    spec: WaveguideSpec
    discretization: dict
    run: dict
    normalized: dict     # canonical round-trippable document

    @property
    def config_hash(self):
        payload = json.dumps(self.normalized, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def truncation(self):
        return FourierTruncation(self.spec.L, int(self.discretization["fourier_modes"]))

    def fiber_discretization(self):
        n1, n2 = self.discretization["section_nodes"]
        grid = SectionGrid(self.spec.section, int(n1), int(n2))
        return FiberDiscretization(n_s=int(self.discretization["longitudinal_points"]),
                                   grid=grid)


def _coefficient(entry, period, name):
    """Build a PeriodicScalar from {constant: v} or {series: [[m, amp, phase], ...]}."""
    if entry is None:
        entry = {"constant": 0.0}
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ParseError(f"geometry.{name}: expected one of 'constant' or 'series'")
    if "constant" in entry:
        return PeriodicScalar.constant(float(entry["constant"]), period)
    if "series" in entry:
        terms = entry["series"]
        try:
            terms = [(int(m), float(amp), float(phase)) for m, amp, phase in terms]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"geometry.{name}.series: need [mode, amp, phase] triples") from exc
        return PeriodicScalar.from_series(period, terms)
    raise ParseError(f"geometry.{name}: unknown key {next(iter(entry))!r}")


def _normalize_coefficient(entry):
    if entry is None:
        return {"constant": 0.0}
    if "constant" in entry:
        return {"constant": float(entry["constant"])}
    return {"series": [[int(m), float(a), float(p)] for m, a, p in entry["series"]]}


def load_config(path):
    """Parse and validate a YAML run config."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(doc, dict) or "geometry" not in doc:
        raise ParseError("config must be a mapping with a 'geometry' section")

    geo = doc["geometry"]
    try:
        period = float(geo["period"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("geometry.period: required positive number") from exc
    sect = geo.get("section", {"a": 1.0, "b": 1.0})
    section = SectionShape(
        a=float(sect.get("a", 1.0)), b=float(sect.get("b", 1.0)),
        offset=tuple(sect.get("offset", (0.0, 0.0))),
    )
    spec = WaveguideSpec(
        L=period,
        k=_coefficient(geo.get("k"), period, "k"),
        tau=_coefficient(geo.get("tau"), period, "tau"),
        alpha=_coefficient(geo.get("alpha"), period, "alpha"),
        h=_coefficient(geo.get("h", {"constant": 1.0}), period, "h"),
        section=section,
        c=float(geo.get("c", 1.0)),
    )

    disc = dict(_DISC_DEFAULTS)
    disc.update(doc.get("discretization") or {})
    if int(disc["fourier_modes"]) < 1:
        raise ValidationError("discretization.fourier_modes must be >= 1")
    if int(disc["theta_points"]) < 9 or int(disc["theta_points"]) % 2 == 0:
        raise ValidationError("discretization.theta_points must be odd and >= 9")
    run = dict(_RUN_DEFAULTS)
    run.update(doc.get("run") or {})
    run["epsilons"] = [float(e) for e in run["epsilons"]]

    normalized = {
        "geometry": {
            "period": period,
            "c": spec.c,
            "section": {"a": section.a, "b": section.b,
                        "offset": list(section.offset)},
            "k": _normalize_coefficient(geo.get("k")),
            "tau": _normalize_coefficient(geo.get("tau")),
            "alpha": _normalize_coefficient(geo.get("alpha")),
            "h": _normalize_coefficient(geo.get("h", {"constant": 1.0})),
        },
        "discretization": {
            "fourier_modes": int(disc["fourier_modes"]),
            "longitudinal_points": int(disc["longitudinal_points"]),
            "section_nodes": [int(disc["section_nodes"][0]), int(disc["section_nodes"][1])],
            "theta_points": int(disc["theta_points"]),
        },
        "run": {
            "epsilons": run["epsilons"],
            "n_bands": int(run["n_bands"]),
            "output_dir": str(run["output_dir"]),
            "min_slope": float(run["min_slope"]),
            "s_samples": int(run["s_samples"]),
        },
    }
    return RunConfig(spec=spec, discretization=normalized["discretization"],
                     run=normalized["run"], normalized=normalized)


def serialize_config(config):
    """Canonical YAML text; parsing it again yields an identical config."""
    return yaml.safe_dump(config.normalized, sort_keys=True)


def _fmt(x):
    return "%.17g" % float(x)


def _write_csv(path, config, header, rows):
    lines = [f"# config_hash={config.config_hash}", ",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(v) if isinstance(v, (int, float, np.floating)) and not isinstance(v, bool)
            else str(v)
            for v in row
        ))
    Path(path).write_text("\n".join(lines) + "\n")


def _write_json(path, config, payload):
    doc = {"config_hash": config.config_hash}
    doc.update(payload)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _out_dir(config):
    out = Path(config.run["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _band_rows(bands):
    rows = []
    for j, theta in enumerate(bands.thetas):
        for n in range(bands.n_bands):
            rows.append((theta, n + 1, bands.table[n, j], bands.source,
                         bands.epsilon if bands.epsilon is not None else ""))
    return rows


def cmd_validate(config, args, threads):
    checks = {
        "h_positive": config.spec.h.min() > 0.0,
        "alpha_zero_at_origin": abs(config.spec.alpha(0.0)) <= 1e-12,
        "c_positive": config.spec.c > 0.0,
        "max_epsilon": max_epsilon(config.spec),
    }
    for eps in config.run["epsilons"]:
        validate_epsilon(config.spec, eps)
        checks[f"epsilon_{eps:g}_admissible"] = True
    roundtrip = load_config_text(serialize_config(config))
    checks["config_roundtrip"] = roundtrip.normalized == config.normalized
    if not checks["config_roundtrip"]:
        raise ValidationError("config does not round-trip through serialization")
    out = _out_dir(config)
    _write_json(out / "validate.json", config, {"checks": checks, "status": "ok"})
    return 0


def load_config_text(text):
    """load_config for in-memory YAML text (round-trip checks, tests)."""
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".yaml", delete=False) as fh:
        fh.write(text)
        name = fh.name
    try:
        return load_config(name)
    finally:
        Path(name).unlink(missing_ok=True)


def cmd_bands(config, args, threads):
    n_bands = int(args.n_bands or config.run["n_bands"])
    thetas = brillouin_grid(config.spec.L, config.discretization["theta_points"])
    if args.epsilon == "effective":
        solver = effective_solver(config.spec, config.truncation())
        bands = compute_bands(solver, n_bands, thetas, "effective",
                              config.spec.L, threads=threads)
    else:
        eps = float(args.epsilon)
        validate_epsilon(config.spec, eps)
        solver = fiber_solver(config.spec, eps, config.fiber_discretization())
        bands = compute_bands(solver, n_bands, thetas, "fiber",
                              config.spec.L, epsilon=eps, threads=threads)
    out = _out_dir(config)
    _write_csv(out / "bands.csv", config,
               ["theta", "band_index", "value", "source", "epsilon"],
               _band_rows(bands))
    return 0


def cmd_gaps(config, args, threads):
    n_bands = int(config.run["n_bands"])
    thetas = brillouin_grid(config.spec.L, config.discretization["theta_points"])
    solver = effective_solver(config.spec, config.truncation())
    bands = compute_bands(solver, n_bands, thetas, "effective",
                          config.spec.L, threads=threads)
    symmetry_monotonicity_check(bands, solver=lambda t, n: solver(t, n))
    report = analyze_gaps(bands)
    verdict = borg_test(config.spec, n_bands, trunc=config.truncation())
    payload = {
        "source": report.source,
        "grid_tol": report.grid_tol,
        "gaps": [
            {"n": g.n, "lower": g.lower, "upper": g.upper,
             "width": g.width, "rule": g.rule}
            for g in report.gaps
        ],
        "open_gaps": [g.n for g in report.open_gaps()],
        "borg": {
            "verdict": verdict.label,
            "first_gap_index": verdict.first_gap_index,
            "bands_checked": verdict.bands_checked,
            "exhausted": verdict.exhausted,
        },
    }
    out = _out_dir(config)
    _write_json(out / "gaps.json", config, payload)
    return 0


def cmd_converge(config, args, threads):
    epsilons = ([float(e) for e in args.epsilons.split(",")]
                if args.epsilons else config.run["epsilons"])
    thetas = np.array([0.0, 0.5 * np.pi / config.spec.L, np.pi / config.spec.L])
    n_max = min(int(config.run["n_bands"]), 3)
    sweep = eps_sweep(config.spec, epsilons, thetas, n_max,
                      config.fiber_discretization(), config.truncation(),
                      threads=threads)
    slopes, min_slope = fit_rate(sweep)
    rows = []
    for i, eps in enumerate(sweep.epsilons):
        for j, theta in enumerate(sweep.thetas):
            for n in range(n_max):
                rows.append((eps, theta, n + 1, sweep.nu[n, j],
                             sweep.fiber[i, n, j], sweep.errors[i, n, j]))
    out = _out_dir(config)
    _write_csv(out / "converge.csv", config,
               ["epsilon", "theta", "band", "nu", "E", "abs_error"], rows)
    _write_json(out / "converge.json", config, {
        # entries at solver precision carry no rate; +inf becomes null
        "min_slope": min_slope if np.isfinite(min_slope) else None,
        "slopes": [[v if np.isfinite(v) else None for v in row]
                   for row in slopes.tolist()],
        "floor": sweep.floor,
        "thetas": sweep.thetas.tolist(),
        "epsilons": sweep.epsilons.tolist(),
    })
    if min_slope < float(config.run["min_slope"]):
        raise PropertyViolation(
            f"fitted convergence slope {min_slope:.3g} below the required "
            f"{config.run['min_slope']:g}"
        )
    return 0


def cmd_crosssec(config, args, threads):
    eps = float(args.epsilon if args.epsilon else config.run["epsilons"][0])
    s_samples = int(args.s_samples or config.run["s_samples"])
    n1, n2 = config.discretization["section_nodes"]
    grid = SectionGrid(config.spec.section, n1, n2)
    gap = uniform_gap(grid, config.spec, eps, s_samples)
    out = _out_dir(config)
    _write_json(out / "crosssec.json", config, {
        "epsilon": eps, "s_samples": s_samples, "uniform_gap": gap,
    })
    return 0


_COMMANDS = {
    "bands": cmd_bands,
    "gaps": cmd_gaps,
    "converge": cmd_converge,
    "crosssec": cmd_crosssec,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wavebands",
        description="Band structures, gaps and thin-limit diagnostics for "
                    "periodic waveguides.",
    )
    parser.add_argument("--config", required=True, help="YAML run configuration")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: WAVEBANDS_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bands = sub.add_parser("bands", help="band table over the Brillouin zone")
    p_bands.add_argument("--epsilon", default="effective",
                         help="thickness value, or 'effective' for the 1D model")
    p_bands.add_argument("--n-bands", type=int, default=None)

    sub.add_parser("gaps", help="gap report and constant-potential dichotomy")

    p_conv = sub.add_parser("converge", help="thickness sweep and rate fit")
    p_conv.add_argument("--epsilons", default=None,
                        help="comma-separated strictly decreasing thicknesses")

    p_cs = sub.add_parser("crosssec", help="uniform transverse gap certificate")
    p_cs.add_argument("--epsilon", default=None)
    p_cs.add_argument("--s-samples", type=int, default=None)

    sub.add_parser("validate", help="check config and geometry invariants")
    return parser


def run(command, config, args=None, threads=1):
    """Dispatch one command; returns the process exit status."""
    if command not in _COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    if args is None:
        args = argparse.Namespace(epsilon="effective", n_bands=None,
                                  epsilons=None, s_samples=None)
    return _COMMANDS[command](config, args, threads)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads if args.threads is not None else default_threads()
    try:
        config = load_config(args.config)
        status = run(args.command, config, args=args, threads=threads)
    except (PropertyViolation, GapViolation, InconsistentBands) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 2
    except WavebandsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
