"""Command-line front end: sweeps, onset tables and figure data as CSV or JSON."""

import argparse
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

from .analytic import code_success_probability, esd_onset_analytic, esd_onset_numeric
from .codes import CODES, CodeConstructionError
from .metrics import concurrence, fidelity_with_initial
from .pipeline import DEFAULT_CODES, ChannelConstructionError, ChannelKind, Family, Scenario, evolve_pair, make_pair
from .qmat import EigenConvergenceError

OUTPUT_DIR_ENV = "ESDQEC_OUTPUT_DIR"
DISCREPANCY_TOL = 1e-4

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_IO = 4

COMPUTE_ERRORS = (EigenConvergenceError, ChannelConstructionError, CodeConstructionError, ArithmeticError)


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """Fixed 12-significant-digit rendering; None prints as NONE."""
    if x is None:
        return "NONE"
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    return format(float(x), ".12g")


_ALPHA_RE = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_alpha(text: str) -> float:
    """Radians, or a literal such as 'pi/4', '3pi/8' or '3*pi/8'."""
    m = _ALPHA_RE.match(text)
    try:
        if m:
            num = float(m.group(1)) if m.group(1) else 1.0
            den = float(m.group(2)) if m.group(2) else 1.0
            value = num * math.pi / den
        else:
            value = float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot read angle {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"angle {text!r} is not finite")
    return value


@dataclass(frozen=True)
class RunConfig:
    command: str = "sweep"
    channel_kind: ChannelKind = ChannelKind.AD
    family: Family = Family.PHI
    alpha: float = math.pi / 4
    kappa: float = 1.0
    code: Optional[str] = None  # None picks the default code for the channel
    grid_size: int = 101
    output_path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        try:
            object.__setattr__(self, "channel_kind", ChannelKind(self.channel_kind))
            object.__setattr__(self, "family", Family(self.family))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.grid_size < 2:
            raise ConfigError(f"grid size must be at least 2, got {self.grid_size}")
        if self.command != "onset" and not 0.0 < self.alpha < math.pi / 2:
            raise ConfigError(f"alpha must lie in (0, pi/2), got {self.alpha}")
        if self.kappa < 0 or not math.isfinite(self.kappa):
            raise ConfigError(f"kappa must be a finite non-negative number, got {self.kappa}")
        if self.code is not None and self.code != "none" and self.code not in CODES:
            raise ConfigError(f"unknown code {self.code!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    @property
    def code_name(self) -> Optional[str]:
        if self.code is None:
            return DEFAULT_CODES[self.channel_kind]
        return None if self.code == "none" else self.code

    def scenario(self) -> Scenario:
        kappa = self.kappa if self.channel_kind is ChannelKind.COMBINED else None
        return Scenario(self.channel_kind, self.code_name, kappa=kappa)

    def metadata(self) -> dict:
        meta = {
            "command": self.command,
            "channel": self.channel_kind.value,
            "family": self.family.value,
            "code": self.code_name or "none",
            "grid": self.grid_size,
        }
        if self.command != "onset":
            meta["alpha"] = fmt(self.alpha)
        if self.channel_kind is ChannelKind.COMBINED:
            meta["kappa"] = fmt(self.kappa)
        return meta


@dataclass(frozen=True)
class SweepRecord:
    p: float
    c_unc: float
    c_cor: float
    f_unc: float
    f_cor: float


@dataclass(frozen=True)
class OnsetRow:
    alpha: float
    onset_analytic: Optional[float]
    onset_uncorrected: Optional[float]
    onset_corrected: Optional[float]
    discrepancy: bool


def p_grid(n: int) -> List[float]:
    """n evenly spaced probabilities from 0 to 1 inclusive."""
    return [i / (n - 1) for i in range(n)]


def alpha_grid(n: int) -> List[float]:
    """n interior angles k*pi/(2(n+1)), endpoints excluded."""
    return [k * (math.pi / 2) / (n + 1) for k in range(1, n + 1)]


def sweep_point(state, unc: Scenario, cor: Scenario, p: float) -> SweepRecord:
    r_unc = evolve_pair(state, unc.at(p))
    r_cor = evolve_pair(state, cor.at(p))
    return SweepRecord(
        p,
        concurrence(r_unc),
        concurrence(r_cor),
        fidelity_with_initial(r_unc, state),
        fidelity_with_initial(r_cor, state),
    )


def run_sweep(config: RunConfig) -> List[SweepRecord]:
    """Uncorrected and corrected concurrence and fidelity along a p grid.

    Writes the records when ``config.output_path`` is set.
    """
    state = make_pair(config.family, config.alpha)
    cor = config.scenario()
    unc = cor.uncorrected()
    records = [sweep_point(state, unc, cor, p) for p in p_grid(config.grid_size)]
    if config.output_path:
        write_table(config.output_path, config.format, config.metadata(),
                    list(SweepRecord.__dataclass_fields__), [asdict(r) for r in records])
    return records


def _same_onset(a: Optional[float], b: Optional[float]) -> bool:
    # None means no sudden death before p = 1, the same as an onset of exactly 1
    a = 1.0 if a is None else a
    b = 1.0 if b is None else b
    return abs(a - b) <= DISCREPANCY_TOL


def run_onset_table(config: RunConfig) -> List[OnsetRow]:
    """Onset of sudden death over an interior alpha grid, analytic beside numeric.

    ``discrepancy`` marks rows where the uncorrected numeric onset and the
    closed-form one differ by more than 1e-4.
    """
    cor = config.scenario()
    unc = cor.uncorrected()
    kappa = config.kappa if config.channel_kind is ChannelKind.COMBINED else None
    rows = []
    for alpha in alpha_grid(config.grid_size):
        analytic = esd_onset_analytic(config.family, config.channel_kind, alpha, kappa)
        numeric_unc = esd_onset_numeric(unc, config.family, alpha)
        numeric_cor = esd_onset_numeric(cor, config.family, alpha) if cor.code else numeric_unc
        rows.append(OnsetRow(alpha, analytic, numeric_unc, numeric_cor, not _same_onset(analytic, numeric_unc)))
    if config.output_path:
        write_table(config.output_path, config.format, config.metadata(),
                    list(OnsetRow.__dataclass_fields__), [asdict(r) for r in rows])
    return rows


# figure data

FIGURES = {
    1: "success probability of the (4,1) and (9,2) codes vs p",
    2: "concurrence and fidelity vs p, phi family, amplitude damping",
    3: "concurrence and fidelity vs p, psi family, amplitude damping",
    4: "concurrence and fidelity vs p, phase damping (same for both families)",
    5: "corrected minus uncorrected concurrence and fidelity, amplitude damping",
    6: "corrected minus uncorrected concurrence and fidelity, phase damping",
    7: "sudden-death onset vs alpha, amplitude and phase damping",
    8: "sudden-death onset vs alpha, combined noise, phi family",
}

FIGURE_ALPHAS = (("pi/4", math.pi / 4), ("pi/12", math.pi / 12))


def _curve_rows(family, kind, grid):
    rows = []
    for label, alpha in FIGURE_ALPHAS:
        cfg = RunConfig(channel_kind=kind, family=family, alpha=alpha, grid_size=grid)
        for r in run_sweep(cfg):
            rows.append({"alpha": label, **asdict(r)})
    return rows


def _delta_rows(families, kind, grid):
    rows = []
    for family in families:
        for label, alpha in FIGURE_ALPHAS:
            cfg = RunConfig(channel_kind=kind, family=family, alpha=alpha, grid_size=grid)
            for r in run_sweep(cfg):
                rows.append({"family": family, "alpha": label, "p": r.p,
                             "delta_c": r.c_cor - r.c_unc, "delta_f": r.f_cor - r.f_unc})
    return rows


def _onset_rows(settings):
    rows = []
    for extra, cfg in settings:
        for r in run_onset_table(cfg):
            rows.append({**extra, **asdict(r)})
    return rows


def figure_table(fig_id: int, grid: int = 101, alpha_points: int = 15):
    """Column names and rows of the data behind one figure."""
    if fig_id not in FIGURES:
        raise ConfigError(f"unknown figure {fig_id}; choose from {sorted(FIGURES)}")
    if fig_id == 1:
        rows = [{"p": p, "success_4_1": code_success_probability(4, 1, p),
                 "success_9_2": code_success_probability(9, 2, p)} for p in p_grid(grid)]
    elif fig_id == 2:
        rows = _curve_rows("phi", "ad", grid)
    elif fig_id == 3:
        rows = _curve_rows("psi", "ad", grid)
    elif fig_id == 4:
        rows = _curve_rows("phi", "pd", grid)
    elif fig_id == 5:
        rows = _delta_rows(("phi", "psi"), "ad", grid)
    elif fig_id == 6:
        rows = _delta_rows(("phi",), "pd", grid)
    elif fig_id == 7:
        settings = [({"channel": kind, "family": fam},
                     RunConfig(command="onset", channel_kind=kind, family=fam, grid_size=alpha_points))
                    for kind in ("ad", "pd") for fam in ("phi", "psi")]
        rows = _onset_rows(settings)
    else:
        settings = [({"kappa": fmt(k)},
                     RunConfig(command="onset", channel_kind="combined", family="phi", kappa=k,
                               grid_size=alpha_points))
                    for k in (1.0, 10.0)]
        rows = _onset_rows(settings)
    return list(rows[0]), rows


def run_figure(fig_id: int, output_path, grid: int = 101, alpha_points: int = 15) -> List[Path]:
    """Write the CSV series for one figure into directory ``output_path``."""
    columns, rows = figure_table(fig_id, grid, alpha_points)
    meta = {"figure": fig_id, "description": FIGURES[fig_id], "grid": grid}
    if fig_id >= 7:
        meta["alpha_points"] = alpha_points
    path = Path(output_path) / f"fig{fig_id}.csv"
    write_table(path, "csv", meta, columns, rows)
    return [path]


# output

def render_table(fmt_name: str, metadata: dict, columns: List[str], rows: List[dict]) -> str:
    if fmt_name == "json":
        doc = {"metadata": dict(metadata),
               "columns": columns,
               "records": [{c: _json_value(row[c]) for c in columns} for row in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    lines = [f"# {k}: {v}" for k, v in metadata.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(fmt(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"


def _json_value(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    return float(fmt(v))


def write_table(path, fmt_name: str, metadata: dict, columns: List[str], rows: List[dict]) -> None:
    text = render_table(fmt_name, metadata, columns, rows)
    if str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# argument handling

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", choices=[k.value for k in ChannelKind], default="ad")
    p.add_argument("--family", choices=[f.value for f in Family], default="phi")
    p.add_argument("--kappa", type=float, default=1.0, help="dephasing to damping rate ratio (combined noise)")
    p.add_argument("--code", choices=["none", *CODES], default=None,
                   help="code used for the corrected curve (default depends on --channel)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdqec",
        description="Entanglement of error-corrected qubit pairs under damping noise.",
        epilog=f"Figure files go to --out, else ${OUTPUT_DIR_ENV}, else the current directory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="concurrence and fidelity along a p grid")
    _add_common(sweep)
    sweep.add_argument("--alpha", default="pi/4", help="mixing angle in radians or as 'pi/N'")
    sweep.add_argument("--grid", type=int, default=101, help="number of p values, 0 to 1 inclusive")

    onset = sub.add_parser("onset", help="sudden-death onset over an alpha grid")
    _add_common(onset)
    onset.add_argument("--grid", type=int, default=15, help="number of interior alpha values")

    figure = sub.add_parser("figure", help="data series behind one figure")
    figure.add_argument("fig_id", type=int, choices=sorted(FIGURES))
    figure.add_argument("--grid", type=int, default=101, help="number of p values")
    figure.add_argument("--alpha-points", type=int, default=15, help="alpha values for onset figures")
    figure.add_argument("--out", default=None, help="output directory")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        channel_kind=args.channel,
        family=args.family,
        alpha=parse_alpha(args.alpha) if args.command == "sweep" else math.pi / 4,
        kappa=args.kappa,
        code=args.code,
        grid_size=args.grid,
        output_path=args.out,
        format=args.format,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            if args.grid < 2 or args.alpha_points < 1:
                raise ConfigError("--grid must be at least 2 and --alpha-points at least 1")
            out_dir = args.out or os.environ.get(OUTPUT_DIR_ENV) or "."
            for path in run_figure(args.fig_id, out_dir, args.grid, args.alpha_points):
                print(path)
            return EXIT_OK
        config = config_from_args(args)
        if config.command == "sweep":
            run_sweep(config)
        else:
            run_onset_table(config)
        return EXIT_OK
    except ConfigError as exc:
        print(f"esdqec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"esdqec: cannot write {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except COMPUTE_ERRORS as exc:
        print(f"esdqec: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"esdqec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
