"""Command-line experiment runner emitting CSV tables.

Subcommands: ``bound``, ``projective``, ``jc``, ``figure2``, ``figure3``.
Settings come from flags, then from an optional ``--config`` file of
``key = value`` lines, then from defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .discrimination import (
    BinaryEnsemble,
    helstrom_bound,
    make_bpsk,
    make_ook,
    optimal_projective_angles,
    projective_success,
    shot_noise_limit,
)
from .errors import DegenerateEnsembleError, UnreachableTargetError
from .jcmodel import ScanConfig, default_starts, optimize
from .optimizer import OptimizerConfig
from .states import Family, FamilySpec, alpha_for_mean_n

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNREACHABLE = 3
EXIT_SANITY = 4

BOUND_COLUMNS = ["mean_n", "alpha", "p_hel_bpsk", "p_hel_ook"]
PROJECTIVE_COLUMNS = ["mean_n", "xi", "p_projective", "p_hel", "abs_diff", "status"]
JC_COLUMNS = [
    "mean_n", "p_hel", "p_ind", "delta_percent",
    "theta", "phi", "Phi", "starts_used", "converged",
]
FIG3_EXTRA = ["p_hel_scs", "p_snl"]

# panels of the figures: (file tag, family)
PANELS = [
    ("oscs", FamilySpec.oscs(3)),
    ("bgcs", FamilySpec.bgcs(0.5)),
    ("msg", FamilySpec.msgcs()),
]

FIG_NMIN, FIG_NMAX, FIG_STEPS = 0.01, 0.6, 60
DELTA_LIMIT = 0.1
DELTA_LIMIT_SMALL_N = 1e-5
SMALL_N = 0.1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: FamilySpec
    keying: str = "bpsk"
    q0: float = 0.5
    n_min: float = FIG_NMIN
    n_max: float = FIG_NMAX
    steps: int = FIG_STEPS
    output_path: str | None = None
    tolerance: float = 1e-10
    max_iterations: int = 2000
    phi_max: float = ScanConfig().phi_max

    def validate(self) -> RunConfig:
        if self.keying not in ("ook", "bpsk"):
            raise ConfigError(f"keying must be 'ook' or 'bpsk', got {self.keying!r}")
        if not 0.0 <= self.q0 <= 1.0:
            raise ConfigError(f"q0 must lie in [0, 1], got {self.q0}")
        if not 0.0 < self.n_min < self.n_max:
            raise ConfigError(f"need 0 < nmin < nmax, got nmin={self.n_min}, nmax={self.n_max}")
        if self.steps < 2:
            raise ConfigError(f"steps must be >= 2, got {self.steps}")
        if self.family.kind is Family.OSCS and not self.n_max < self.family.n_j:
            raise ConfigError(f"OS-CS with n_j={self.family.n_j} needs nmax < {self.family.n_j}")
        if not self.tolerance > 0 or self.max_iterations < 1:
            raise ConfigError("tol must be > 0 and max-iter >= 1")
        if self.phi_max < 0:
            raise ConfigError("phi-max must be >= 0")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.n_min, self.n_max, self.steps)

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            starts=default_starts(), tolerance=self.tolerance, max_iterations=self.max_iterations
        )

    def scan(self) -> ScanConfig | None:
        return ScanConfig(phi_max=self.phi_max) if self.phi_max > 0 else None


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"refusing to write non-finite value {value!r}")
    return format(value, ".12g")


def render_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) if row.get(c, "") != "" else "" for c in columns])
    return buf.getvalue()


def _ensemble(cfg: RunConfig, alpha: float) -> BinaryEnsemble:
    make = make_bpsk if cfg.keying == "bpsk" else make_ook
    return make(cfg.family, alpha, cfg.q0)


def bound_columns(cfg: RunConfig) -> list[str]:
    return BOUND_COLUMNS + (["p_snl"] if cfg.family.kind is Family.SCS else [])


def cmd_bound(cfg: RunConfig) -> list[dict]:
    """Helstrom bounds of BPSK and OOK at each grid mean photon number."""
    rows = []
    for mean_n in cfg.grid():
        alpha = alpha_for_mean_n(cfg.family, mean_n)
        row = {
            "mean_n": mean_n,
            "alpha": alpha,
            "p_hel_bpsk": helstrom_bound(make_bpsk(cfg.family, alpha, cfg.q0)),
            "p_hel_ook": helstrom_bound(make_ook(cfg.family, alpha, cfg.q0)),
        }
        if cfg.family.kind is Family.SCS:
            row["p_snl"] = shot_noise_limit(alpha)
        rows.append(row)
    return rows


def cmd_projective(cfg: RunConfig) -> list[dict]:
    """Cat-basis projective measurement at its optimal angles versus the Helstrom bound."""
    rows = []
    for mean_n in cfg.grid():
        alpha = alpha_for_mean_n(cfg.family, mean_n)
        ens = _ensemble(cfg, alpha)
        p_hel = helstrom_bound(ens)
        row = {"mean_n": mean_n, "alpha": alpha, "p_hel": p_hel, "status": "ok"}
        try:
            angles = optimal_projective_angles(ens)
        except DegenerateEnsembleError:
            row["status"] = "degenerate"
        else:
            p = projective_success(ens, angles.xi, angles.zeta)
            row.update(xi=angles.xi, p_projective=p, abs_diff=abs(p - p_hel))
        rows.append(row)
    return rows


def _jc_row(cfg: RunConfig, mean_n: float) -> dict:
    alpha = alpha_for_mean_n(cfg.family, mean_n)
    res = optimize(_ensemble(cfg, alpha), cfg.optimizer(), cfg.scan())
    return {
        "mean_n": mean_n,
        "alpha": alpha,
        "p_hel": res.p_helstrom,
        "p_ind": res.p_success,
        "delta_percent": res.delta_percent,
        "theta": res.angles.theta,
        "phi": res.angles.phi,
        "Phi": res.angles.Phi,
        "starts_used": res.starts_used,
        "converged": res.converged,
    }


def cmd_jc(cfg: RunConfig) -> list[dict]:
    """Optimized Jaynes-Cummings indirect measurement at each grid point."""
    return [_jc_row(cfg, mean_n) for mean_n in cfg.grid()]


def _figure_config(family: FamilySpec, base: RunConfig | None) -> RunConfig:
    base = base or RunConfig(family=family)
    return replace(base, family=family, keying="bpsk", q0=0.5).validate()


def figure2_panels(base: RunConfig | None = None) -> dict[str, tuple[list[dict], list[str]]]:
    panels = {}
    for tag, family in PANELS:
        rows = cmd_bound(_figure_config(family, base))
        bad = [r["mean_n"] for r in rows if r["p_hel_bpsk"] < r["p_hel_ook"] - 1e-12]
        panels[tag] = (rows, [f"BPSK below OOK at mean_n={n:.6g}" for n in bad])
    return panels


def figure3_panels(base: RunConfig | None = None) -> dict[str, tuple[list[dict], list[str]]]:
    scs = FamilySpec.scs()
    panels = {}
    for tag, family in PANELS:
        cfg = _figure_config(family, base)
        rows, problems = [], []
        for mean_n in cfg.grid():
            row = _jc_row(cfg, mean_n)
            alpha_scs = math.sqrt(mean_n)
            row["p_hel_scs"] = helstrom_bound(make_bpsk(scs, alpha_scs, 0.5))
            row["p_snl"] = shot_noise_limit(alpha_scs)
            limit = DELTA_LIMIT_SMALL_N if mean_n <= SMALL_N + 1e-12 else DELTA_LIMIT
            if row["delta_percent"] >= limit:
                problems.append(f"delta={row['delta_percent']:.3e}% >= {limit:g}% at mean_n={mean_n:.6g}")
            if row["p_ind"] > row["p_hel"] + 1e-9:
                problems.append(f"p_ind above the Helstrom bound at mean_n={mean_n:.6g}")
            rows.append(row)
        panels[tag] = (rows, problems)
    return panels


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_KEYS = {
    "family": str, "nj": int, "chi": float, "keying": str, "q0": float,
    "nmin": float, "nmax": float, "steps": int, "out": str,
    "tol": float, "max_iter": int, "phi_max": float,
}


def _merge(args: argparse.Namespace) -> dict:
    merged = {}
    if args.config:
        try:
            file_values = read_config_file(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        for key, value in file_values.items():
            if key not in _KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                merged[key] = _KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _family(values: dict) -> FamilySpec:
    name = values.get("family", "scs")
    try:
        if name == "scs":
            return FamilySpec.scs()
        if name == "oscs":
            return FamilySpec.oscs(values.get("nj", 3))
        if name == "bgcs":
            return FamilySpec.bgcs(values.get("chi", 0.5))
        if name == "msgcs":
            return FamilySpec.msgcs()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown family {name!r}")


def build_config(args: argparse.Namespace, figure: bool = False) -> RunConfig:
    values = _merge(args)
    defaults = RunConfig(family=FamilySpec.scs())
    cfg = RunConfig(
        family=FamilySpec.scs() if figure else _family(values),
        keying=values.get("keying", defaults.keying),
        q0=values.get("q0", defaults.q0),
        n_min=values.get("nmin", defaults.n_min),
        n_max=values.get("nmax", defaults.n_max),
        steps=values.get("steps", defaults.steps),
        output_path=values.get("out"),
        tolerance=values.get("tol", defaults.tolerance),
        max_iterations=values.get("max_iter", defaults.max_iterations),
        phi_max=values.get("phi_max", defaults.phi_max),
    )
    return cfg if figure else cfg.validate()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags take precedence")
    common.add_argument("--nmin", type=float, help="smallest mean photon number")
    common.add_argument("--nmax", type=float, help="largest mean photon number")
    common.add_argument("--steps", type=int, help="number of grid points")
    common.add_argument("--out", help="output CSV file (directory for figure commands)")
    common.add_argument("--tol", type=float, help="simplex diameter tolerance")
    common.add_argument("--max-iter", dest="max_iter", type=int, help="Nelder-Mead iteration cap")
    common.add_argument("--phi-max", dest="phi_max", type=float,
                        help="range of the Phi scan that seeds the optimizer (0 disables it)")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=["scs", "oscs", "bgcs", "msgcs"])
    family.add_argument("--nj", type=int, help="OS-CS level count n_j")
    family.add_argument("--chi", type=float, help="BG-CS index chi")
    family.add_argument("--keying", choices=["ook", "bpsk"])
    family.add_argument("--q0", type=float, help="prior probability of bit 0")

    parser = argparse.ArgumentParser(prog="nscs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bound", parents=[common, family], help="Helstrom bounds, BPSK and OOK")
    sub.add_parser("projective", parents=[common, family], help="cat-basis projective measurement")
    sub.add_parser("jc", parents=[common, family], help="Jaynes-Cummings indirect measurement")
    sub.add_parser("figure2", parents=[common], help="write fig2_<family>.csv")
    sub.add_parser("figure3", parents=[common], help="write fig3_<family>.csv")
    return parser


def _run_figure(args, panels_fn, prefix: str, columns: list[str]) -> int:
    cfg = build_config(args, figure=True)
    outdir = Path(cfg.output_path or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for tag, (rows, problems) in panels_fn(cfg).items():
        path = outdir / f"{prefix}_{tag}.csv"
        _write(render_csv(columns, rows), str(path))
        print(f"wrote {path}", file=sys.stderr)
        for p in problems:
            print(f"sanity check failed ({tag}): {p}", file=sys.stderr)
            status = EXIT_SANITY
    return status


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure2":
            return _run_figure(args, figure2_panels, "fig2", BOUND_COLUMNS)
        if args.command == "figure3":
            return _run_figure(args, figure3_panels, "fig3", JC_COLUMNS + FIG3_EXTRA)
        cfg = build_config(args)
        if args.command == "bound":
            text = render_csv(bound_columns(cfg), cmd_bound(cfg))
        elif args.command == "projective":
            text = render_csv(PROJECTIVE_COLUMNS, cmd_projective(cfg))
        else:
            text = render_csv(JC_COLUMNS, cmd_jc(cfg))
        _write(text, cfg.output_path)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnreachableTargetError as exc:
        print(f"unreachable target: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
