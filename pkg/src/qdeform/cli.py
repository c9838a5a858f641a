"""Command-line frontend.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 internal-consistency error.
"""

from __future__ import annotations

import argparse
import csv
import math
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bell import BellSpec, BellVariant, conditional_center
from .errors import DomainError, InternalConsistencyError
from .figures import FIGURE_NAMES, figure_presets, momentum_window
from .grid import BELL_LABELS, Axis, SliceSpec, analytic_bound, evaluate_slice, find_peak
from .oscillator import PureStateSpec, make_params, psi
from .output import format_float, write_csv, write_pgm16
from .verification import run_checks, write_figures
from .wigner2 import SuperpositionSpec

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ("params", "psi", "wigner", "bell", "verify", "figures")

# per-command defaults; the wigner and bell defaults match the fig1 and fig2 presets
DEFAULTS = {
    "params": dict(q_a=0.001, n=2, m=6),
    "psi": dict(q_a=0.001, n=2),
    "wigner": dict(q_a=0.001, n=3, m=5, amp_a=1 / math.sqrt(2), amp_b=1 / math.sqrt(2)),
    "bell": dict(q_a=0.001, n=2, m=6, variant="psi+"),
    "verify": dict(),
    "figures": dict(q_a=0.001, format="both"),
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    q_a: float = 0.001
    q_b: float | None = None
    n: int = 0
    m: int = 0
    amp_a: complex = 1.0
    amp_b: complex = 0.0
    variant: str | None = None
    figure: str | None = None
    free: tuple[str, str] | None = None
    fix: list[str] = field(default_factory=list)
    window: list[str] = field(default_factory=list)
    format: str = "csv"
    out: str | None = None
    decompose: bool = False
    workers: int = 1
    count: int = 301
    verify_level: str = "fast"
    flip_sign: bool = False

    def params_a(self):
        return make_params(self.mass, self.omega, self.hbar, self.q_a)

    def params_b(self):
        return make_params(self.mass, self.omega, self.hbar, self.q_b if self.q_b is not None else self.q_a)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("physical constants and state")
    g.add_argument("--mass", type=float)
    g.add_argument("--omega", type=float)
    g.add_argument("--hbar", type=float)
    g.add_argument("--q-a", dest="q_a", type=float, help="deformation of branch/particle A")
    g.add_argument("--q-b", dest="q_b", type=float, help="deformation of branch/particle B (default: q-a)")
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--amp-a", dest="amp_a", type=_complex)
    g.add_argument("--amp-b", dest="amp_b", type=_complex)
    g.add_argument("--variant", choices=[v.value for v in BellVariant])
    w = common.add_argument_group("window and output")
    w.add_argument("--figure", choices=FIGURE_NAMES, help="use a named figure preset")
    w.add_argument("--free", help="two free axes, e.g. xA,pA")
    w.add_argument("--fix", nargs="+", metavar="LABEL=VALUE",
                   help="fixed coordinates; a trailing 'h' scales by that particle's h, e.g. pB=-2h")
    w.add_argument("--window", nargs="+", metavar="AX:MIN:MAX:COUNT")
    w.add_argument("--count", type=int, help="points per axis for default windows")
    w.add_argument("--format", choices=("csv", "pgm16", "both"))
    w.add_argument("--out", help="output path prefix (a directory for 'figures')")
    w.add_argument("--decompose", action="store_true", default=None, help="add W1,W2,W3 columns (bell)")
    w.add_argument("--workers", type=int)
    w.add_argument("--verify", "--level", dest="verify_level", choices=("fast", "full"))
    w.add_argument("--debug-flip-sign", dest="flip_sign", action="store_true", default=None,
                   help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="qdeform", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "params": "print lambda, h and suggested windows",
        "psi": "tabulate a stationary state",
        "wigner": "Wigner grid of a two-state superposition",
        "bell": "2D slice of a Bell-state Wigner function",
        "verify": "run the closed-form vs oracle verification suite",
        "figures": "write every figure-preset grid",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; multi-valued keys are space separated."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _coerce_config(values: dict) -> list[str]:
    """Turn config entries into argv tokens so argparse validates them like flags."""
    argv = []
    for key, value in values.items():
        flag = "--" + key.replace("_", "-")
        if key in ("decompose", "debug_flip_sign", "flip_sign"):
            if value.lower() in ("1", "true", "yes"):
                argv.append("--debug-flip-sign" if "flip" in key else flag)
            continue
        if key in ("fix", "window"):
            argv.append(flag)
            argv.extend(shlex.split(value))
        elif key == "verify_level":
            argv.extend(["--verify", value])
        else:
            argv.extend([flag, value])
    return argv


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    merged = dict(DEFAULTS[args.command])
    if args.config:
        file_argv = _coerce_config(read_config_file(args.config))
        file_args = parser.parse_args([args.command] + file_argv)
        merged.update({k: v for k, v in vars(file_args).items() if v is not None and k not in ("command", "config")})
    merged.update({k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config")})
    if "free" in merged:
        parts = tuple(t.strip() for t in merged["free"].split(","))
        if len(parts) != 2:
            raise ConfigError(f"--free needs two comma-separated labels, got {merged['free']!r}")
        merged["free"] = parts
    for key in ("fix", "window"):
        merged.setdefault(key, [])
    cfg = RunConfig(command=args.command, **merged)
    if cfg.command == "wigner" and abs(abs(cfg.amp_a) ** 2 + abs(cfg.amp_b) ** 2 - 1.0) > 1e-12:
        raise ConfigError(f"amplitudes must satisfy |a|^2 + |b|^2 = 1, got a={cfg.amp_a}, b={cfg.amp_b}")
    if cfg.workers < 1:
        raise ConfigError("--workers must be at least 1")
    return cfg


def _parse_window(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(f"window must look like AX:MIN:MAX:COUNT, got {text!r}")
    return Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))


def _parse_fix(text: str, h_of) -> tuple[str, float]:
    if "=" not in text:
        raise ConfigError(f"fixed coordinate must look like LABEL=VALUE, got {text!r}")
    label, value = (t.strip() for t in text.split("=", 1))
    if value.endswith("h"):
        coeff = value[:-1] or "1"
        coeff = {"-": "-1", "+": "1"}.get(coeff, coeff)
        return label, float(coeff) * h_of(label)
    return label, float(value)


def _build_slice(cfg: RunConfig, default_free, default_axes: dict, default_fixed: dict, h_of) -> SliceSpec:
    windows = {ax.label: ax for ax in (_parse_window(t) for t in cfg.window)}
    free = cfg.free or default_free
    axes = []
    for label in free:
        if label in windows:
            axes.append(windows[label])
        elif label in default_axes:
            lo, hi = default_axes[label]
            axes.append(Axis(label, lo, hi, cfg.count))
        else:
            raise ConfigError(f"no window for free axis {label!r}; pass --window {label}:MIN:MAX:COUNT")
    fixed = {k: v for k, v in default_fixed.items() if k not in free}
    fixed.update(dict(_parse_fix(t, h_of) for t in cfg.fix))
    return SliceSpec(tuple(axes), tuple(fixed.items()))


def _out_prefix(cfg: RunConfig) -> Path:
    return Path(cfg.out or cfg.command)


def _write_grid(grid, cfg: RunConfig, decompose: bool = False) -> list[Path]:
    prefix = _out_prefix(cfg)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.format in ("csv", "both"):
        written.append(write_csv(grid, prefix.with_name(prefix.name + ".csv"), decompose=decompose))
    if cfg.format in ("pgm16", "both"):
        written.extend(write_pgm16(grid, prefix.with_name(prefix.name + ".pgm")))
    return written


def _peak_report(grid, out) -> None:
    c1, c2, value = find_peak(grid)
    print(f"peak |W| at {grid.axis1.label}={c1:.6g}, {grid.axis2.label}={c2:.6g}: W={value:.10g}", file=out)


def cmd_params(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    pa, pb = cfg.params_a(), cfg.params_b()
    for name, p in (("A", pa), ("B", pb)):
        unit = 2.0 * p.lam * p.h * p.hbar
        print(f"[{name}] mass={p.mass:g} omega={p.omega:g} hbar={p.hbar:g} q={p.q:g}", file=out)
        print(f"[{name}] lambda={p.lam:.10g}", file=out)
        print(f"[{name}] h={p.h:.10g}", file=out)
        print(f"[{name}] level spacing in p (2 lambda h hbar)={unit:.10g}", file=out)
        top = max(cfg.n, cfg.m)
        lo, hi = momentum_window(top, p)
        print(f"[{name}] suggested windows: x in [-1.5, 1.5], p in [{lo:.6g}, {hi:.6g}] (levels <= {top})", file=out)
    return EXIT_OK


def cmd_psi(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    p = cfg.params_a()
    spec = PureStateSpec(cfg.n, p)
    windows = [_parse_window(t) for t in cfg.window]
    axis = windows[0] if windows else Axis("x", -4.0, 4.0, cfg.count)
    values = psi(spec, axis.points)
    lines = [f"# n={cfg.n},q={format_float(p.q)},lambda={format_float(p.lam)},h={format_float(p.h)}", "x,re,im,abs2"]
    for x, v in zip(axis.points, values):
        lines.append(",".join(format_float(t) for t in (x, v.real, v.imag, abs(v) ** 2)))
    text = "\n".join(lines) + "\n"
    if cfg.out:
        path = Path(cfg.out + ".csv")
        path.write_bytes(text.encode("ascii"))
        print(f"wrote {path}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_wigner(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.figure:
        fig = figure_presets(q=cfg.q_a, count=cfg.count, mass=cfg.mass, omega=cfg.omega, hbar=cfg.hbar)[cfg.figure]
        if not isinstance(fig.target, SuperpositionSpec):
            raise ConfigError(f"{cfg.figure} is a Bell figure; use the 'bell' command")
        spec, slc = fig.target, fig.slice
    else:
        pa, pb = cfg.params_a(), cfg.params_b()
        spec = SuperpositionSpec(cfg.amp_a, cfg.amp_b, cfg.n, cfg.m, pa, pb)
        lo, hi = momentum_window(max(cfg.n, cfg.m), pa)
        slc = _build_slice(cfg, ("x", "p"), {"x": (-1.5, 1.5), "p": (lo, hi)}, {}, lambda _: pa.h)
    grid = evaluate_slice(spec, slc, workers=cfg.workers)
    for path in _write_grid(grid, cfg):
        print(f"wrote {path}", file=out)
    _peak_report(grid, out)
    return EXIT_OK


def cmd_bell(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.figure:
        fig = figure_presets(q=cfg.q_a, count=cfg.count, mass=cfg.mass, omega=cfg.omega, hbar=cfg.hbar)[cfg.figure]
        if not isinstance(fig.target, BellSpec):
            raise ConfigError(f"{cfg.figure} is not a Bell figure; use the 'wigner' command")
        spec, slc = fig.target, fig.slice
    else:
        pa, pb = cfg.params_a(), cfg.params_b()
        spec = BellSpec(BellVariant(cfg.variant), cfg.n, cfg.m, pa, pb)
        top = max(cfg.n, cfg.m)
        default_axes = {
            "xA": (-1.5, 1.5),
            "xB": (-1.5, 1.5),
            "pA": momentum_window(top, pa),
            "pB": momentum_window(top, pb),
        }
        default_fixed = {"xA": 0.0, "pA": conditional_center(cfg.n, pa), "xB": 0.0, "pB": conditional_center(cfg.n, pb)}
        h_of = lambda label: pa.h if label.endswith("A") else pb.h
        slc = _build_slice(cfg, ("xA", "pA"), default_axes, default_fixed, h_of)
        if set(slc.labels) != set(BELL_LABELS):
            raise ConfigError(f"slice must cover {BELL_LABELS}, got {slc.labels}")
    grid = evaluate_slice(spec, slc, workers=cfg.workers, decompose=cfg.decompose)
    for path in _write_grid(grid, cfg, decompose=cfg.decompose):
        print(f"wrote {path}", file=out)
    _peak_report(grid, out)
    bound = analytic_bound(spec)
    print(f"max|W|={np.max(np.abs(grid.values)):.10g} (bound {bound:.10g})", file=out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    results = run_checks(cfg.verify_level, flip_sign=cfg.flip_sign)
    for r in results:
        print(r.line(), file=out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=out)
    if cfg.out:
        path = Path(cfg.out if cfg.out.endswith(".csv") else cfg.out + "_verify.csv")
        new = not path.exists()
        with path.open("a", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if new:
                writer.writerow(["check", "value", "tolerance", "pass"])
            for r in results:
                writer.writerow([r.name, format_float(r.value), format_float(r.tolerance), int(r.passed)])
        print(f"appended summary to {path}", file=out)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_figures(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    out_dir = Path(cfg.out or "figures")
    names = (cfg.figure,) if cfg.figure else FIGURE_NAMES
    hashes = write_figures(out_dir, count=cfg.count, workers=cfg.workers, fmt=cfg.format, q=cfg.q_a, names=names)
    for name, digest in sorted(hashes.items()):
        print(f"{digest}  {out_dir / name}", file=out)
    return EXIT_OK


HANDLERS = {
    "params": cmd_params,
    "psi": cmd_psi,
    "wigner": cmd_wigner,
    "bell": cmd_bell,
    "verify": cmd_verify,
    "figures": cmd_figures,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"qdeform: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalConsistencyError as exc:
        print(f"qdeform: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
