"""Command-line front end.

Verbs:

* ``sweep``    -- QFI over a duration grid for the selected probe families
* ``compare``  -- perturbative vs oracle on an acceleration ladder
* ``validate`` -- invariant suites with measured residuals (non-zero exit on
  failure)
* ``overlaps`` -- precompute and cache the quadrature overlap matrices

Scenario parameters come from ``key = value`` config files and/or flags;
flags win. Results are written as UTF-8 CSV with LF endings and
full-precision floats, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bogoliubov import series_from_csv
from .cavity import (
    DEFAULT_H_LADDER,
    CavityScenario,
    load_or_compute_overlaps,
)
from .sweeps import (
    FAMILIES,
    SweepSpec,
    compare_methods,
    comparison_to_csv,
    rows_to_csv,
    run_sweep,
    validate,
)

CONFIG_KEYS = {
    "L": float,
    "h": float,
    "u": float,
    "u_grid": str,
    "k": int,
    "k_prime": int,
    "n_max": int,
    "r": float,
    "delta": float,
    "x": float,
    "N": float,
}


def read_config(path: str) -> dict:
    """Parse a ``key = value`` config file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{ln}: unknown key {key!r}")
            values[key] = CONFIG_KEYS[key](value)
    return values


def parse_grid(text: str) -> tuple:
    """Grid syntax: ``start:stop:step`` (inclusive stop) or comma values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} must be start:stop:step or comma-separated")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int(round((stop - start) / step))
        return tuple(np.round(start + step * np.arange(n + 1), 12))
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussfisher",
        description="Estimation precision (quantum Fisher information) for "
        "Gaussian states of a bosonic field under Bogoliubov channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value scenario file")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--nmax", type=int, help="mode-ladder truncation")
        p.add_argument("--h", type=float, help="acceleration parameter h = aL/c^2")
        p.add_argument("--length", type=float, help="cavity length (default 1)")
        p.add_argument("--modes", help="probed modes as 'k,k_prime' (default 1,2)")
        p.add_argument("--cache", help="directory for cached overlap matrices")
        p.add_argument("--channel", help="CSV file with an imported channel series")
        p.add_argument("--seed", type=int, default=1234, help="seed for randomized suites")

    p_sweep = sub.add_parser("sweep", help="QFI over a duration grid")
    add_common(p_sweep)
    p_sweep.add_argument("--grid", help="u grid 'start:stop:step' or comma list")
    p_sweep.add_argument(
        "--state",
        action="append",
        choices=FAMILIES,
        help="probe family (repeatable; default: all three)",
    )
    p_sweep.add_argument("--x", type=float, help="squeezing fraction of the energy budget")
    p_sweep.add_argument("--photons", type=float, help="mean photon number per probe mode")
    p_sweep.add_argument("--r", type=float, help="squeezing parameter (overrides energy budget)")
    p_sweep.add_argument("--delta", type=float, help="displacement parameter (with --r)")
    p_sweep.add_argument("--methods", default="perturbative", help="comma list: perturbative,oracle")

    p_cmp = sub.add_parser("compare", help="perturbative vs oracle on an h ladder")
    add_common(p_cmp)
    p_cmp.add_argument("--u", type=float, help="duration parameter (default from config/scenario)")
    p_cmp.add_argument("--ladder", default="0.02,0.04,0.08", help="comma list of h values")
    p_cmp.add_argument("--r", type=float, help="squeezing parameter (default 1)")
    p_cmp.add_argument("--delta", type=float, help="displacement parameter (default 0)")
    p_cmp.add_argument(
        "--state",
        action="append",
        choices=FAMILIES,
        help="probe family (repeatable; default: all three)",
    )

    p_val = sub.add_parser("validate", help="run the invariant suites")
    add_common(p_val)

    p_ov = sub.add_parser("overlaps", help="build the overlap cache")
    add_common(p_ov)
    p_ov.add_argument(
        "--ladder",
        help="comma list of h values to precompute (default: the fit ladder)",
    )
    return parser


def scenario_from(args, config: dict) -> CavityScenario:
    def pick(flag, key, default):
        if flag is not None:
            return flag
        return config.get(key, default)

    modes = (config.get("k", 1), config.get("k_prime", 2))
    if getattr(args, "modes", None):
        parts = args.modes.split(",")
        if len(parts) != 2:
            raise ValueError("--modes expects 'k,k_prime'")
        modes = (int(parts[0]), int(parts[1]))
    return CavityScenario(
        length=pick(args.length, "L", 1.0),
        h=pick(args.h, "h", 0.05),
        u=config.get("u", 0.3) if getattr(args, "u", None) is None else args.u,
        k=modes[0],
        k_prime=modes[1],
        n_max=pick(args.nmax, "n_max", 10),
    )


def emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def load_channel(args):
    if not getattr(args, "channel", None):
        return None
    with open(args.channel, encoding="utf-8") as fh:
        return series_from_csv(fh.read())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = read_config(args.config) if args.config else {}
        scenario = scenario_from(args, config)
        channel = load_channel(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "sweep":
        grid = None
        if args.grid:
            grid = parse_grid(args.grid)
        elif "u_grid" in config:
            grid = parse_grid(config["u_grid"])
        spec_kwargs = dict(
            scenario=scenario,
            families=tuple(args.state) if args.state else FAMILIES,
            photons=args.photons if args.photons is not None else config.get("N", 1.0),
            x=args.x if args.x is not None else config.get("x", 1.0),
            r=args.r if args.r is not None else config.get("r"),
            delta=args.delta if args.delta is not None else config.get("delta"),
            methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
            channel=channel,
        )
        if grid is not None:
            spec_kwargs["grid"] = grid
        try:
            spec = SweepSpec(**spec_kwargs)
            rows = run_sweep(spec, cache_dir=args.cache)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        emit(rows_to_csv(rows), args.out)
        return 0

    if args.command == "compare":
        ladder = tuple(float(tok) for tok in args.ladder.split(","))
        spec = SweepSpec(
            scenario=scenario,
            families=tuple(args.state) if args.state else FAMILIES,
            grid=(scenario.u,),
            r=args.r if args.r is not None else config.get("r", 1.0),
            delta=args.delta if args.delta is not None else config.get("delta", 0.0),
            methods=("perturbative", "oracle"),
            channel=channel,
        )
        try:
            report = compare_methods(spec, h_ladder=ladder, cache_dir=args.cache)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        emit(comparison_to_csv(report), args.out)
        for family, slope in report.slopes.items():
            print(f"slope {family}: {slope:.3f}", file=sys.stderr)
        return 0 if report.passed() else 1

    if args.command == "validate":
        try:
            report = validate(scenario, channel=channel, seed=args.seed, cache_dir=args.cache)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = "\n".join(report.lines()) + "\n"
        emit(text, args.out)
        if args.out is not None:
            print(text, end="")
        return 0 if report.passed else 1

    if args.command == "overlaps":
        if args.cache is None:
            print("error: overlaps requires --cache", file=sys.stderr)
            return 2
        ladder = (
            tuple(float(tok) for tok in args.ladder.split(","))
            if args.ladder
            else DEFAULT_H_LADDER + (scenario.h,)
        )
        for h in ladder:
            ov = load_or_compute_overlaps(scenario.length, float(h), scenario.n_max, args.cache)
            print(f"h={h:g}: n_max={ov.n_max} quadrature order {ov.quad_order} cached")
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
