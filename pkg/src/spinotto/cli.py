"""Command-line front end.

Exit codes: 0 ok, 1 input error, 2 valid input but the cycle is not an engine.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import figures
from .coupled import critical_couplings
from .engine import CSV_COLUMNS, analyze
from .errors import DomainError, SpinOttoError
from .spectra import SpinMagnitude, hamiltonian_matrix, spectrum, zeeman_matrix
from .tolerance import MARGIN_TOL
from .verify import diagonalize

EXIT_OK, EXIT_INPUT, EXIT_NON_ENGINE = 0, 1, 2

DEFAULTS = dict(
    s=2, coupled=False, B1=5.0, B2=3.0, T1=6.0, T2=3.0, J=0.0,
    J_from=None, J_to=None, J_steps=None, out=None, format="csv", tol=None,
    verify=False, plot_script=False,
)
CONFIG_TYPES = dict(
    s=int, coupled=lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
    B1=float, B2=float, T1=float, T2=float, J=float, J_from=float, J_to=float, J_steps=int,
    out=str, format=str, tol=float,
)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    medium: str
    twice_s: int
    B1: float
    B2: float
    T1: float
    T2: float
    J: float
    J_from: Optional[float] = None
    J_to: Optional[float] = None
    J_steps: Optional[int] = None
    output: Optional[str] = None
    fmt: str = "csv"
    tol: Optional[float] = None

    @property
    def margin_tol(self) -> float:
        return self.tol if self.tol is not None else MARGIN_TOL

    @property
    def spin(self) -> SpinMagnitude:
        return SpinMagnitude(self.twice_s)

    @property
    def is_sweep(self) -> bool:
        return self.J_steps is not None

    def j_bound(self) -> float:
        return self.B2 / (2 * (self.twice_s + 1))

    def validate(self, sweep: bool = False):
        if self.twice_s < 1:
            raise ConfigError(f"--s (twice s) must be >= 1, got {self.twice_s}")
        if not self.B2 > 0:
            raise ConfigError(f"need B2 > 0, got B2={self.B2}")
        if not self.B1 > self.B2:
            raise ConfigError(f"need B1 > B2, got B1={self.B1}, B2={self.B2}")
        if not self.T2 > 0:
            raise ConfigError(f"need T2 > 0, got T2={self.T2}")
        if not self.T1 > self.T2:
            raise ConfigError(f"need T1 > T2, got T1={self.T1}, T2={self.T2}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json, got {self.fmt}")
        if sweep:
            if None in (self.J_from, self.J_to, self.J_steps):
                raise ConfigError("a sweep needs --J-from, --J-to and --J-steps")
            if self.J_steps < 2:
                raise ConfigError(f"need J steps >= 2, got {self.J_steps}")
            js = (self.J_from, self.J_to)
        else:
            js = (self.J,)
        if self.medium == "coupled":
            bound = self.j_bound()
            for j in js:
                if not 0 <= j < bound:
                    raise ConfigError(f"J={j} outside [0, B2/(2(2s+1))) = [0, {bound:.6g})")
        elif any(j != 0 for j in js):
            raise ConfigError("J is only meaningful with --coupled")

    def j_values(self):
        return [float(j) for j in np.linspace(self.J_from, self.J_to, self.J_steps)]


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment; keys use flag names with '_' for '-'."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_TYPES[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def fmt_num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return f"{v:.12g}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_num(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return None if math.isnan(v) else float(v)
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------


def cmd_cycle(cfg: RunConfig) -> int:
    cfg.validate()
    rep = analyze(cfg.medium, cfg.spin, cfg.B1, cfg.B2, cfg.T1, cfg.T2, cfg.J, cfg.margin_tol)
    row = rep.row()
    extra = {}
    if rep.local is not None:
        extra = {"q_hot": list(rep.local.q_half), "q_cold": list(rep.local.q_half_cold),
                 "r_hot": list(rep.local.r_spin), "r_cold": list(rep.local.r_spin_cold)}
    if rep.majorisation is not None:
        extra["margins"] = {f"m{rep.majorisation.n - i}": v for i, v in enumerate(rep.majorisation.margins)}
    if cfg.fmt == "json":
        text = json.dumps(_jsonable({"medium": cfg.medium, "s": str(cfg.spin),
                                     "B1": cfg.B1, "B2": cfg.B2, "T1": cfg.T1, "T2": cfg.T2,
                                     **row, **extra}), indent=2) + "\n"
        emit(text, cfg.output)
    elif cfg.output:
        emit(csv_text(CSV_COLUMNS, [[row[c] for c in CSV_COLUMNS]]), cfg.output)
    else:
        lines = [f"medium: {cfg.medium}  s={cfg.spin}  "
                 f"B1={cfg.B1} B2={cfg.B2} T1={cfg.T1} T2={cfg.T2} J={cfg.J}"]
        lines += [f"{c:>9}: {fmt_num(row[c])}" for c in CSV_COLUMNS if c != "J"]
        lines += [f"{k:>9}: {' '.join(fmt_num(x) for x in v)}" for k, v in extra.items() if k != "margins"]
        if "margins" in extra:
            lines.append("  margins: " + " ".join(f"{k}={fmt_num(v)}" for k, v in extra["margins"].items()))
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if rep.is_engine else EXIT_NON_ENGINE


def sweep_rows(cfg: RunConfig):
    for J in cfg.j_values():
        row = analyze(cfg.medium, cfg.spin, cfg.B1, cfg.B2, cfg.T1, cfg.T2, J, cfg.margin_tol).row()
        yield [row[c] for c in CSV_COLUMNS]


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.medium != "coupled":
        raise ConfigError("sweep scans J and needs --coupled")
    cfg.validate(sweep=True)
    rows = list(sweep_rows(cfg))
    if cfg.fmt == "json":
        text = json.dumps(_jsonable([dict(zip(CSV_COLUMNS, r)) for r in rows]), indent=1) + "\n"
    else:
        text = csv_text(CSV_COLUMNS, rows)
    emit(text, cfg.output)
    return EXIT_OK


def cmd_critical(cfg: RunConfig) -> int:
    cfg.validate()
    cc = critical_couplings(cfg.spin, cfg.B1, cfg.B2, cfg.T1, cfg.T2,
                            tol=cfg.tol if cfg.tol is not None else 1e-9)
    N = cfg.twice_s + 1
    data = {
        "phi": cc.phi, f"phi_over_{2 * N}": cc.phi / (2 * N),
        "Jc_global": cc.j_c_global, "Jc_half": cc.j_c_half, "Jc_spin": cc.j_c_spin,
        "Jc_half_general": cc.j_c_half_general,
        "bisect_global_majorisation": cc.j_bisect_global, "bisect_global_pwc": cc.j_bisect_global_pwc,
        "bisect_half_pwc": cc.j_bisect_half, "bisect_spin_pwc": cc.j_bisect_spin,
        **{f"delta_{k}": v for k, v in cc.deltas().items()},
        "monotone": cc.monotone,
    }
    if cfg.fmt == "json":
        emit(json.dumps(_jsonable({**data, "notes": list(cc.notes)}), indent=2) + "\n", cfg.output)
    else:
        lines = [f"{k:>28}: {fmt_num(v)}" for k, v in data.items()]
        lines += [f"  note: {n}" for n in cc.notes]
        emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def cmd_majorize(cfg: RunConfig) -> int:
    cfg.validate()
    rep = analyze(cfg.medium, cfg.spin, cfg.B1, cfg.B2, cfg.T1, cfg.T2, cfg.J, cfg.margin_tol)
    m = rep.majorisation
    if m is None:
        raise ConfigError("spectrum is below the level-crossing threshold")
    lines = [f"holds: {fmt_num(m.holds)}", f"tolerance: {fmt_num(m.tolerance_used)}",
             f"first_violated_m: {m.first_violated_m if m.first_violated_m is not None else ''}"]
    lines += [f"m={m.n - i}: {fmt_num(v)}" for i, v in enumerate(m.margins)]
    emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, verify: bool = False) -> int:
    if cfg.twice_s < 1 or not cfg.B1 > 0 or cfg.J < 0:
        raise ConfigError("need --s >= 1, --B1 > 0, --J >= 0")
    if cfg.medium == "single" and cfg.J != 0:
        raise ConfigError("J is only meaningful with --coupled")
    spec = spectrum(cfg.medium, cfg.spin, cfg.B1, cfg.J)
    lines = [f"medium={spec.medium} s={spec.spin} B={spec.B} J={spec.J} shift={fmt_num(spec.shift)} "
             f"ordered={fmt_num(spec.ordered)}"]
    lines += [f"{k} {fmt_num(e)}" for k, e in spec.levels]
    status = EXIT_OK
    if verify:
        H = hamiltonian_matrix(cfg.spin, cfg.B1, cfg.J) if cfg.medium == "coupled" else zeeman_matrix(cfg.spin, cfg.B1)
        w, _ = diagonalize(H)
        dev = float(np.abs(np.sort(w + spec.shift) - np.sort(spec.as_array())).max())
        ok = dev <= 1e-10
        lines.append(f"verify: max |analytic - diagonalised| = {dev:.3g} -> {'ok' if ok else 'MISMATCH'}")
        status = EXIT_OK if ok else EXIT_INPUT
    emit("\n".join(lines) + "\n", cfg.output)
    return status


def cmd_figure(name: str, outdir, plot_script: bool = False) -> list:
    header, rows = figures.figure_data(name)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{name}.csv"
    path.write_text(csv_text(header, rows))
    written = [path]
    if plot_script:
        sp = outdir / f"plot_{name}.py"
        sp.write_text(figures.plot_script(name, header, path.name))
        written.append(sp)
    return written


# --- argument parsing ---------------------------------------------------------


def _add_common(p):
    p.add_argument("--config", help="flat key = value file; explicit flags win")
    p.add_argument("--s", type=int, help="twice the spin magnitude (1 -> s=1/2, 2 -> s=1)")
    p.add_argument("--coupled", action="store_const", const=True, help="spin-1/2 coupled to spin-s")
    for name in ("B1", "B2", "T1", "T2", "J"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--J-from", dest="J_from", type=float)
    p.add_argument("--J-to", dest="J_to", type=float)
    p.add_argument("--J-steps", dest="J_steps", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--tol", type=float, help="margin tolerance (majorisation) / bisection tolerance (critical)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinotto", description="Quasi-static spin Otto engines and majorisation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("cycle", "report one cycle"),
        ("sweep", "CSV over a J grid (coupled medium)"),
        ("critical", "closed-form and bisected critical couplings"),
        ("majorize", "tail-sum margins of P < P'"),
        ("spectrum", "energy levels at field B1"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "spectrum":
            p.add_argument("--verify", action="store_true", help="cross-check against dense diagonalisation")
    p = sub.add_parser("figure", help="write curve data for a reference figure")
    p.add_argument("name", choices=figures.FIGURES)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--plot-script", dest="plot_script", action="store_true")
    return parser


def resolve(args) -> dict:
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return values


def to_config(v: dict) -> RunConfig:
    return RunConfig(
        medium="coupled" if v["coupled"] else "single", twice_s=v["s"],
        B1=v["B1"], B2=v["B2"], T1=v["T1"], T2=v["T2"], J=v["J"],
        J_from=v["J_from"], J_to=v["J_to"], J_steps=v["J_steps"],
        output=v["out"], fmt=v["format"], tol=v["tol"],
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            for path in cmd_figure(args.name, args.out, args.plot_script):
                print(path)
            return EXIT_OK
        values = resolve(args)
        cfg = to_config(values)
        if args.command == "cycle":
            return cmd_cycle(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "critical":
            return cmd_critical(cfg)
        if args.command == "majorize":
            return cmd_majorize(cfg)
        return cmd_spectrum(cfg, verify=args.verify)
    except (ConfigError, DomainError, SpinOttoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
