"""Command-line front end.

``qmellin solve --config FILE``
    Solve a q-diffusion, q-wave or n-th order problem described by an INI
    file; writes one CSV per requested time plus ``summary.txt``.
``qmellin verify --level quick|full``
    Run the acceptance suite and print a pass/fail table.
``qmellin tabulate --fn NAME --q Q --from A --to B --step H [--out FILE]``
    Tabulate a q-special function on an evenly spaced real grid.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(solver error, residual above threshold or a failed verification check).

Example configuration::

    [problem]
    kind = diffusion          ; diffusion | wave | nth
    q = 0.5
    profile = gaussian(b=1)
    times = 0, 0.3

    [grid]
    x = -12, 12, 2049
    xi = -12, 12, 2049

    [tolerance]
    residual = 1e-4

    [output]
    dir = out
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__, verify
from .errors import QCalcError
from .profiles import parse_profile
from .qcore import QParameter, SeriesControl, q_cos, q_exp, q_gamma, q_number, q_sin
from .solvers import (DEFAULT_X_GRID, DEFAULT_XI_GRID, DiffusionProblem, NthOrderProblem,
                      WaveProblem, solve_q_diffusion, solve_q_nth, solve_q_wave)
from .transforms import GridSpec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

KINDS = ("diffusion", "wave", "nth")
DEFAULT_RESIDUAL = 1e-4


class ConfigError(ValueError):
    """A configuration problem; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    kind: str
    q: QParameter
    f_spec: str
    times: tuple[float, ...]
    n: int = 2
    g_specs: tuple[Optional[str], ...] = ()
    x_grid: GridSpec = DEFAULT_X_GRID
    xi_grid: GridSpec = DEFAULT_XI_GRID
    residual_threshold: float = DEFAULT_RESIDUAL
    control: SeriesControl = field(default_factory=SeriesControl)
    strict: bool = False
    out_dir: Path = Path("out")


def _field(section: str, key: str, raw: str, convert: Callable):
    try:
        return convert(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None


def _float(raw: str) -> float:
    value = float(raw)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {raw!r}")
    return value


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(_float(p) for p in raw.split(",") if p.strip())


def _grid(raw: str) -> GridSpec:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'lo, hi, n_points', got {raw!r}")
    return GridSpec(_float(parts[0]), _float(parts[1]), int(parts[2]))


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration; raises :class:`ConfigError`."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from None
    if not parser.has_section("problem"):
        raise ConfigError("config: missing [problem] section")
    prob = parser["problem"]

    def need(key: str) -> str:
        if key not in prob:
            raise ConfigError(f"[problem] {key}: missing")
        return prob[key]

    kind = need("kind").strip().lower()
    if kind not in KINDS:
        raise ConfigError(f"[problem] kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    q = _field("problem", "q", need("q"), lambda r: QParameter(_float(r)))
    f_spec = need("profile")
    _field("problem", "profile", f_spec, parse_profile)
    times = _field("problem", "times", need("times"), _floats)
    if not times:
        raise ConfigError("[problem] times: empty list")
    if any(t < 0 for t in times):
        raise ConfigError(f"[problem] times: must be nonnegative, got {times}")

    n = 2
    g_specs: tuple[Optional[str], ...] = ()
    if kind == "nth":
        n = _field("problem", "n", need("n"), int)
        if n not in (2, 3, 4):
            raise ConfigError(f"[problem] n: must be 2, 3 or 4, got {n}")
        g_specs = tuple(prob.get(f"g{k}") for k in range(1, n))
    elif kind == "wave":
        g_specs = (prob.get("velocity"),)
    for k, spec in enumerate(g_specs, start=1):
        if spec is not None:
            _field("problem", "velocity" if kind == "wave" else f"g{k}", spec, parse_profile)
    strict = _field("problem", "strict", prob.get("strict", "false"), _boolean)

    grid = parser["grid"] if parser.has_section("grid") else {}
    x_grid = _field("grid", "x", grid["x"], _grid) if "x" in grid else DEFAULT_X_GRID
    xi_grid = _field("grid", "xi", grid["xi"], _grid) if "xi" in grid else DEFAULT_XI_GRID

    tol = parser["tolerance"] if parser.has_section("tolerance") else {}
    threshold = (_field("tolerance", "residual", tol["residual"], _float)
                 if "residual" in tol else DEFAULT_RESIDUAL)
    defaults = SeriesControl()
    rel_tol = (_field("tolerance", "series_rel_tol", tol["series_rel_tol"], _float)
               if "series_rel_tol" in tol else defaults.rel_tol)
    max_terms = (_field("tolerance", "max_terms", tol["max_terms"], int)
                 if "max_terms" in tol else defaults.max_terms)
    control = _field("tolerance", "series_rel_tol", (rel_tol, max_terms),
                     lambda a: SeriesControl(*a))

    out = parser["output"] if parser.has_section("output") else {}
    out_dir = Path(out.get("dir", "out"))
    return RunConfig(kind, q, f_spec, times, n, g_specs, x_grid, xi_grid, threshold,
                     control, strict, out_dir)


def _boolean(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected true/false, got {raw!r}")


def _profile(spec: Optional[str]):
    return None if spec is None else parse_profile(spec)


def run_solver(cfg: RunConfig):
    f = parse_profile(cfg.f_spec)
    g = tuple(_profile(s) for s in cfg.g_specs)
    if cfg.kind == "diffusion":
        problem = DiffusionProblem(cfg.q, f, cfg.times, cfg.x_grid, cfg.xi_grid)
        return solve_q_diffusion(problem, cfg.control, strict=cfg.strict)
    if cfg.kind == "wave":
        problem = WaveProblem(cfg.q, f, cfg.times, g[0], cfg.x_grid, cfg.xi_grid)
        return solve_q_wave(problem, cfg.control, strict=cfg.strict)
    problem = NthOrderProblem(cfg.n, cfg.q, f, cfg.times, g, cfg.x_grid, cfg.xi_grid)
    return solve_q_nth(problem, cfg.control, strict=cfg.strict)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    """Write columns as CSV with 17 significant digits and '\\n' line endings."""
    rows = [",".join(header)]
    rows.extend(",".join(_fmt(v) for v in row) for row in zip(*columns))
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")


def cmd_solve(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out is not None:
        cfg = RunConfig(**{**cfg.__dict__, "out_dir": Path(args.out)})
    start = time.perf_counter()
    try:
        report = run_solver(cfg)
    except (QCalcError, ValueError, ArithmeticError) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    wall = time.perf_counter() - start

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, (t, sol) in enumerate(zip(report.times, report.solutions)):
        name = f"solution_{i:03d}.csv"
        values = np.asarray(sol.values, dtype=complex)
        write_csv(cfg.out_dir / name, ("x", "re_y", "im_y"),
                  (sol.grid.points, values.real, values.imag))
        files.append((name, t))

    ok = report.residual_max < cfg.residual_threshold
    lines = [
        f"kind = {cfg.kind}",
        f"q = {cfg.q.q!r}",
        f"profile = {cfg.f_spec}",
        f"residual_max = {report.residual_max:.6e}",
        f"residual_threshold = {cfg.residual_threshold:.6e}",
        f"status = {'ok' if ok else 'residual above threshold'}",
        f"series_rel_tol = {cfg.control.rel_tol:.3e}",
        f"max_terms = {cfg.control.max_terms}",
    ]
    lines += [f"{k} = {v:.6e}" if isinstance(v, float) else f"{k} = {v}"
              for k, v in sorted(report.diagnostics.items())]
    lines.append(f"wall_time_seconds = {wall:.3f}")
    lines += [f"file {name} t = {t!r}" for name, t in files]
    (cfg.out_dir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    if not ok:
        print(f"error: residual {report.residual_max:.3e} above threshold "
              f"{cfg.residual_threshold:.3e}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args) -> int:
    if not args.tol_scale >= 0:
        print("error: --tol-scale must be nonnegative", file=sys.stderr)
        return EXIT_CONFIG
    results = verify.run(args.level, args.tol_scale)
    print(verify.format_table(results))
    for r in results:
        print(r.summary_line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


TABULATED: dict[str, Callable] = {
    "qgamma": q_gamma,
    "qexp": q_exp,
    "qsin": q_sin,
    "qcos": q_cos,
    "qnumber": q_number,
}


def tabulate(fn: str, q: float, start: float, stop: float, step: float):
    """Return ``(x, values)`` for ``fn`` on ``start, start + step, ..., stop``."""
    qp = QParameter(q)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    x = start + step * np.arange(count)
    func = TABULATED[fn]
    values = np.array([complex(func(qp, float(v))) for v in x])
    return x, values


def cmd_tabulate(args) -> int:
    for name in ("q", "start", "stop", "step"):
        if not math.isfinite(getattr(args, name)):
            print(f"error: --{name.replace('start', 'from').replace('stop', 'to')} must be finite",
                  file=sys.stderr)
            return EXIT_CONFIG
    if not 0 < args.q < 1:
        print(f"error: q must lie in (0, 1), got {args.q}", file=sys.stderr)
        return EXIT_CONFIG
    if args.step <= 0 or args.stop < args.start:
        print("error: step must be positive and --to must not be below --from", file=sys.stderr)
        return EXIT_CONFIG
    try:
        x, values = tabulate(args.fn, args.q, args.start, args.stop, args.step)
    except (QCalcError, ValueError, ArithmeticError) as exc:
        print(f"error: {args.fn} failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    header = ("x", f"re_{args.fn}", f"im_{args.fn}")
    if args.out:
        write_csv(Path(args.out), header, (x, values.real, values.imag))
    else:
        sys.stdout.write(",".join(header) + "\n")
        for row in zip(x, values.real, values.imag):
            sys.stdout.write(",".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmellin", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem described by a config file")
    p.add_argument("--config", required=True, help="INI file with [problem], [grid], ...")
    p.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every tolerance by this factor")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tabulate", help="tabulate a q-special function")
    p.add_argument("--fn", required=True, choices=sorted(TABULATED))
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_tabulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
