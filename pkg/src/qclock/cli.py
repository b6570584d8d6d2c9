"""Command-line driver: single cases, parameter sweeps, table/curve/compare files.

Configs are plain-text key=value documents ('#' starts a comment).  Angles
cross this boundary in degrees and are converted to radians exactly once on
the way in; output files report degrees again.  Identical configs produce
byte-identical output files.

Exit codes: 0 success, 2 config parse error, 3 validation error,
4 quadrature convergence failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

from .distribution import (ArrivalScheme, peak_phi, pi_of_phi, variance_phi,
                           write_distribution_csv)
from .errors import (ConfigParseError, ConvergenceError,
                     DegenerateDistributionError, DomainError, QClockError,
                     UnsupportedSchemeError, ValidationError)
from .measurement import (deviation_report, measure, round_half_away,
                          write_deviation_csv)
from .quadrature import QuadratureSpec
from .wavepacket import PhysicsConfig

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4
EXIT_IO = 5

DEFAULT_SIGMA0_LADDER = (1e-5, 1e-6, 1e-7, 1e-8)

#: Rotator lengths (cm) of the two built-in presets; everything else is
#: shared: u=3e5 cm/s, B=10 gauss, calibrated moment.
PRESETS = {"I": 1.0, "II": 2.0}

_PHYSICS_KEYS = ("hbar", "m0", "mu", "u", "d", "B")


def default_thetas_deg(physics: PhysicsConfig) -> tuple[float, ...]:
    """Analyzer angles used by the built-in sweeps: the packet peak's
    rotation angle plus 60 and 90 degree offsets."""
    base = math.degrees(physics.phi_peak)
    return (base, base + 60.0, base + 90.0)


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs: physics, scheme, sweep axes, output."""

    physics: PhysicsConfig = PhysicsConfig()
    scheme: ArrivalScheme = ArrivalScheme.MODULUS_TOTAL_CURRENT
    thetas_deg: tuple[float, ...] = default_thetas_deg(PhysicsConfig())
    sigma0_ladder: tuple[float, ...] = DEFAULT_SIGMA0_LADDER
    quad: QuadratureSpec = QuadratureSpec()
    output_dir: Path = Path(".")
    thetas_are_default: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.sigma0_ladder:
            raise ValidationError("sigma0_ladder must not be empty")
        for s0 in self.sigma0_ladder:
            replace(self.physics, sigma0=s0)  # runs the validity guard
        for theta in self.thetas_deg:
            if not 0.0 <= theta < 360.0:
                raise ValidationError(
                    f"thetas_deg must lie in [0, 360); got {theta!r}")

    def physics_for(self, sigma0: float) -> PhysicsConfig:
        return replace(self.physics, sigma0=sigma0)


def _with_physics(cfg: RunConfig, physics: PhysicsConfig) -> RunConfig:
    thetas = default_thetas_deg(physics) if cfg.thetas_are_default \
        else cfg.thetas_deg
    return replace(cfg, physics=physics, thetas_deg=thetas)


def apply_preset(cfg: RunConfig, name: str) -> RunConfig:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; choose I or II")
    return _with_physics(cfg, replace(cfg.physics, d=PRESETS[name]))


def _parse_float(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigParseError(f"value for {key!r} is not a number: {raw!r}",
                               line=line_no) from None


def _parse_float_list(raw: str, key: str, line_no: int) -> tuple[float, ...]:
    items = [piece.strip() for piece in raw.split(",") if piece.strip()]
    if not items:
        raise ConfigParseError(f"{key!r} needs at least one value", line=line_no)
    return tuple(_parse_float(item, key, line_no) for item in items)


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse a key=value document into a validated RunConfig.

    Unknown keys are rejected with their line number.  Omitted keys keep
    the base (default: the d=1 cm preset with its standard sweep axes).
    """
    cfg = base if base is not None else RunConfig()
    physics_kwargs = {k: getattr(cfg.physics, k) for k in _PHYSICS_KEYS}
    physics_kwargs["sigma0"] = cfg.physics.sigma0
    scheme = cfg.scheme
    thetas = cfg.thetas_deg
    thetas_default = cfg.thetas_are_default
    ladder = cfg.sigma0_ladder
    quad_kwargs = {"rel_tol": cfg.quad.rel_tol,
                   "panel_order": cfg.quad.panel_order,
                   "max_depth": cfg.quad.max_depth}
    out_dir = cfg.output_dir

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw_line!r}",
                                   line=line_no)
        key, _, raw_value = line.partition("=")
        key = key.strip()
        value = raw_value.strip()
        if not value:
            raise ConfigParseError(f"empty value for {key!r}", line=line_no)

        if key == "preset":
            if value not in PRESETS:
                raise ConfigParseError(f"unknown preset {value!r}; choose I or II",
                                       line=line_no)
            physics_kwargs["d"] = PRESETS[value]
        elif key in _PHYSICS_KEYS:
            physics_kwargs[key] = _parse_float(value, key, line_no)
        elif key == "sigma0":
            values = _parse_float_list(value, key, line_no)
            physics_kwargs["sigma0"] = values[0]
            ladder = values
        elif key == "thetas_deg":
            thetas = _parse_float_list(value, key, line_no)
            thetas_default = False
        elif key == "scheme":
            scheme = ArrivalScheme.from_name(value)
        elif key == "rel_tol":
            quad_kwargs["rel_tol"] = _parse_float(value, key, line_no)
        elif key == "panel_order":
            quad_kwargs["panel_order"] = int(_parse_float(value, key, line_no))
        elif key == "max_depth":
            quad_kwargs["max_depth"] = int(_parse_float(value, key, line_no))
        elif key == "out":
            out_dir = Path(value)
        else:
            raise ConfigParseError(f"unknown key {key!r}", line=line_no)

    physics = PhysicsConfig(**physics_kwargs)
    if thetas_default:
        thetas = default_thetas_deg(physics)
    return RunConfig(physics=physics, scheme=scheme, thetas_deg=thetas,
                     sigma0_ladder=ladder, quad=QuadratureSpec(**quad_kwargs),
                     output_dir=out_dir, thetas_are_default=thetas_default)


def serialize(cfg: RunConfig) -> str:
    """Emit a config document that parses back to an equal RunConfig."""
    lines = ["# qclock run configuration"]
    for key in _PHYSICS_KEYS:
        lines.append(f"{key} = {getattr(cfg.physics, key)!r}")
    lines.append("sigma0 = " + ", ".join(repr(s) for s in cfg.sigma0_ladder))
    lines.append("thetas_deg = " + ", ".join(repr(t) for t in cfg.thetas_deg))
    lines.append(f"scheme = {cfg.scheme.value}")
    lines.append(f"rel_tol = {cfg.quad.rel_tol!r}")
    lines.append(f"panel_order = {cfg.quad.panel_order}")
    lines.append(f"max_depth = {cfg.quad.max_depth}")
    lines.append(f"out = {cfg.output_dir}")
    return "\n".join(lines) + "\n"


def _thread_count() -> int:
    raw = os.environ.get("QCLOCK_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"QCLOCK_THREADS must be an integer, got {raw!r}") \
            from None
    if n < 1:
        raise ValidationError("QCLOCK_THREADS must be >= 1")
    return n


def _parallel_map(fn: Callable, items: Sequence):
    """Map fn over independent sweep cells, capped by QCLOCK_THREADS.

    Results come back in input order, so output files do not depend on the
    degree of parallelism.
    """
    workers = min(_thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_text(path: Path, text: str) -> None:
    """Write atomically: a failure never leaves a partial output file."""
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _sigma_tag(sigma0: float) -> str:
    return repr(sigma0).replace("-", "m").replace("+", "p").replace(".", "_")


def run_table(cfg: RunConfig) -> Path:
    """Channel probabilities for every (sigma0, theta) cell, 5 decimals.

    Layout mirrors the reference tables: one row per sigma0, a
    (p_plus, p_minus) column pair per analyzer angle.
    """
    thetas_rad = [math.radians(t) for t in cfg.thetas_deg]

    def cell(sigma0: float):
        dist = pi_of_phi(cfg.physics_for(sigma0), cfg.scheme, cfg.quad)
        return [measure(dist, theta, cfg.quad) for theta in thetas_rad]

    rows = _parallel_map(cell, cfg.sigma0_ladder)

    header = ["sigma0_cm"]
    for theta in cfg.thetas_deg:
        header.append(f"p_plus_{theta:.5f}")
        header.append(f"p_minus_{theta:.5f}")
    lines = [",".join(header)]
    for sigma0, results in zip(cfg.sigma0_ladder, rows):
        cells = [repr(sigma0)]
        for res in results:
            cells.append(f"{round_half_away(res.p_plus):.5f}")
            cells.append(f"{round_half_away(res.p_minus):.5f}")
        lines.append(",".join(cells))

    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / "table.csv"
    _write_text(path, "\n".join(lines) + "\n")
    return path


def run_curve(cfg: RunConfig) -> list[Path]:
    """Angular density curve per sigma0, plus a summary sidecar each."""

    def cell(sigma0: float):
        dist = pi_of_phi(cfg.physics_for(sigma0), cfg.scheme, cfg.quad)
        return dist, peak_phi(dist), variance_phi(dist, cfg.quad)

    results = _parallel_map(cell, cfg.sigma0_ladder)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for sigma0, (dist, peak, variance) in zip(cfg.sigma0_ladder, results):
        tag = _sigma_tag(sigma0)
        curve_path = cfg.output_dir / f"curve_sigma0_{tag}.csv"
        write_distribution_csv(dist, curve_path)
        summary_path = cfg.output_dir / f"curve_sigma0_{tag}_summary.txt"
        _write_text(summary_path, "\n".join([
            f"peak_phi_deg = {math.degrees(peak):.17g}",
            f"variance_rad2 = {variance:.17g}",
            f"truncated_tail_mass = {dist.truncated_tail_mass:.17g}",
        ]) + "\n")
        paths.extend([curve_path, summary_path])
    return paths


_COMPARE_SCHEMES = (ArrivalScheme.MODULUS_TOTAL_CURRENT,
                    ArrivalScheme.MODULUS_SCHRODINGER_CURRENT)


def run_compare(cfg: RunConfig) -> list[Path]:
    """Quantum-scheme vs semiclassical deviations; one CSV per scheme and
    sigma0."""
    thetas_rad = [math.radians(t) for t in cfg.thetas_deg]
    cells = [(scheme, sigma0) for scheme in _COMPARE_SCHEMES
             for sigma0 in cfg.sigma0_ladder]

    def cell(item):
        scheme, sigma0 = item
        return deviation_report(cfg.physics_for(sigma0), scheme, thetas_rad,
                                cfg.quad)

    reports = _parallel_map(cell, cells)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for (scheme, sigma0), rows in zip(cells, reports):
        path = cfg.output_dir / \
            f"compare_{scheme.value}_sigma0_{_sigma_tag(sigma0)}.csv"
        write_deviation_csv(rows, path)
        paths.append(path)
    return paths


def run_validate(cfg: RunConfig) -> None:
    """Config check only; constructing RunConfig already ran every guard."""
    phys = cfg.physics
    print("configuration OK")
    print(f"  d = {phys.d} cm, u = {phys.u} cm/s, B = {phys.B} gauss")
    print(f"  mu = {phys.mu} erg/gauss, omega = {phys.omega:.6f} rad/s")
    print(f"  peak rotation = {math.degrees(phys.phi_peak):.5f} deg")
    print(f"  sigma0 ladder = {', '.join(repr(s) for s in cfg.sigma0_ladder)} cm")
    print(f"  analyzer angles = {', '.join(f'{t:.5f}' for t in cfg.thetas_deg)} deg")
    print(f"  scheme = {cfg.scheme.value}")
    print(f"  quadrature: rel_tol={cfg.quad.rel_tol}, "
          f"order={cfg.quad.panel_order}, max_depth={cfg.quad.max_depth}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="built-in parameter set (rotator length)")
    parser.add_argument("--sigma0", action="append", type=float, metavar="CM",
                        help="initial packet width; repeat for a ladder")
    parser.add_argument("--theta-deg", action="append", type=float,
                        metavar="DEG", help="analyzer angle; repeatable")
    parser.add_argument("--scheme",
                        choices=[s.value for s in ArrivalScheme],
                        help="arrival-time scheme")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--rel-tol", type=float, help="quadrature tolerance")


def _assemble(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.preset:
        cfg = apply_preset(cfg, args.preset)
    if args.config is not None:
        cfg = parse_config(args.config.read_text(encoding="utf-8"), base=cfg)
    if args.sigma0:
        physics = replace(cfg.physics, sigma0=args.sigma0[0])
        cfg = replace(_with_physics(cfg, physics),
                      sigma0_ladder=tuple(args.sigma0))
    if args.theta_deg:
        cfg = replace(cfg, thetas_deg=tuple(args.theta_deg),
                      thetas_are_default=False)
    if args.scheme:
        cfg = replace(cfg, scheme=ArrivalScheme.from_name(args.scheme))
    if args.rel_tol is not None:
        cfg = replace(cfg, quad=replace(cfg.quad, rel_tol=args.rel_tol))
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qclock",
        description="Spin-rotator quantum clock: angular distributions of "
                    "emergent spins and Stern-Gerlach probabilities.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
            ("table", "channel probabilities per (sigma0, theta), 5 decimals"),
            ("curve", "angular density curves plus summary sidecars"),
            ("compare", "quantum schemes vs the semiclassical baseline"),
            ("validate", "check a configuration and exit")):
        _add_common_flags(sub.add_parser(name, help=text))
    args = parser.parse_args(argv)

    try:
        cfg = _assemble(args)
        if args.command == "validate":
            run_validate(cfg)
        elif args.command == "table":
            print(f"wrote {run_table(cfg)}")
        elif args.command == "curve":
            for path in run_curve(cfg):
                print(f"wrote {path}")
        else:
            for path in run_compare(cfg):
                print(f"wrote {path}")
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, DomainError, UnsupportedSchemeError,
            DegenerateDistributionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QClockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
