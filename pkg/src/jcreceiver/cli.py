"""Command-line front end: tables of trace distances, error probabilities and
failure probabilities, written as CSV or JSON.

Every subcommand prints a header row, data rows in a fixed order and a block
of ``#`` metadata lines recording the effective configuration. Output depends
only on the arguments, so repeated runs are byte-identical.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .errors import DomainError, EvaluationError, ImpossibleOutcomeError, UnsupportedConfigurationError
from .fock import DEFAULT_EPS_TRUNC
from .kennedy import FIRST_MAXIMUM_WINDOW, KennedyProblem, idp_limit, kennedy_error, kennedy_limit, \
    pnrd_error, pnrd_failure, run_unambiguous_chain
from .measurement import PriorPair, closed_form_Dtr, optimal_gamma, sql_homodyne
from .minerr import BIASED_PRIOR_WINDOWS, DiscriminationProblem, default_windows, displaced_single_round, \
    run_sequence, solve
from .optimize import SearchWindow, maximize_scalar

PROG = "jcreceiver"
DEFAULT_DIGITS = 12

#: Per-subcommand defaults, echoed into the metadata of every run.
DEFAULTS: Dict[str, Dict[str, str]] = {
    "trace-scan": {"alpha": "2,1,0.5", "window": "0:2,7.5:9", "points": "1001"},
    "min-error": {"alpha_sq_grid": "0:1:21", "eta1": "1/2,1/3,1/4,1/8", "det_eff": "1,0.91"},
    "gamma-opt": {"alpha": "1,0.5,0.25", "eta1": "0.05:0.5:10", "window": "7.5:9"},
    "kennedy": {"alpha_sq_grid": "0:1.5:31", "eta1": "1/2", "rounds": "3", "det_eff": "1,0.91",
                "window": "0:2"},
    "sequence": {"alpha": "0.25,0.5,1", "eta1": "1/2", "rounds": "3"},
    "displacement-scan": {"alpha": "1", "beta_grid": "-0.5:0.5:9", "eta1": "1/2"},
}
SUBCOMMANDS = tuple(DEFAULTS)


class ConfigError(Exception):
    """Invalid command-line configuration (exit code 2)."""


# -- parsing -----------------------------------------------------------------

def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}") from None


def _integer(text, name: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}") from None


def parse_grid(text: str) -> List[float]:
    """``lo:hi:n`` is ``n`` evenly spaced values, endpoints included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be lo:hi:n, got {text!r}")
    lo, hi = _number(parts[0]), _number(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid size must be an integer, got {parts[2]!r}") from None
    if n < 1 or (n > 1 and not lo < hi) or (n == 1 and lo != hi):
        raise ConfigError(f"grid needs n >= 1 and lo < hi (lo == hi for n = 1), got {text!r}")
    return [float(x) for x in np.linspace(lo, hi, n)]


def parse_values(text: str) -> List[float]:
    """Comma list of numbers (fractions like ``1/3`` allowed), or a ``lo:hi:n`` grid."""
    if ":" in text:
        return parse_grid(text)
    values = [_number(t) for t in text.split(",") if t.strip()]
    if not values:
        raise ConfigError("empty value list")
    return values


def parse_alphas(text: str) -> List[complex]:
    out = []
    for t in text.split(","):
        t = t.strip().replace(" ", "")
        try:
            out.append(complex(_number(t)) if "j" not in t else complex(t))
        except ValueError:
            raise ConfigError(f"not a coherent amplitude: {t!r}") from None
    if not out:
        raise ConfigError("empty amplitude list")
    return out


def parse_windows(text: str, points: Optional[int] = None) -> Tuple[SearchWindow, ...]:
    windows = []
    for item in text.split(","):
        bounds = item.split(":")
        if len(bounds) != 2:
            raise ConfigError(f"window must be lo:hi, got {item!r}")
        lo, hi = _number(bounds[0]), _number(bounds[1])
        try:
            windows.append(SearchWindow(lo, hi) if points is None else SearchWindow(lo, hi, points))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    return tuple(windows)


# -- configuration -----------------------------------------------------------

@dataclass
class RunConfig:
    """Validated settings of one subcommand run."""

    subcommand: str
    alphas: List[complex] = field(default_factory=list)
    eta1: List[float] = field(default_factory=list)
    windows: Optional[Tuple[SearchWindow, ...]] = None
    rounds: int = 3
    det_eff: List[float] = field(default_factory=list)
    betas: List[float] = field(default_factory=list)
    points: int = 1001
    eps_trunc: float = DEFAULT_EPS_TRUNC
    fmt: str = "csv"
    out: Optional[str] = None
    digits: int = DEFAULT_DIGITS
    jobs: int = 1
    echo: Dict[str, str] = field(default_factory=dict)


def _pick(args, name: str, sub: str) -> Optional[str]:
    value = getattr(args, name, None)
    if value is None:
        value = DEFAULTS[sub].get(name)
    return value


def build_config(args, sub: Optional[str] = None) -> RunConfig:
    """Resolve defaults and validate; raises :class:`ConfigError`."""
    sub = sub or args.command
    echo = {"subcommand": sub}

    def take(name):
        value = _pick(args, name, sub)
        if value is not None:
            echo[name] = str(value)
        return value

    cfg = RunConfig(subcommand=sub)
    alpha_text, grid_text = take("alpha"), take("alpha_sq_grid")
    if getattr(args, "alpha", None) is not None:
        grid_text = None
        echo.pop("alpha_sq_grid", None)
    elif alpha_text is not None and grid_text is not None:
        alpha_text = None
        echo.pop("alpha", None)
    if grid_text is not None:
        grid = parse_grid(grid_text)
        if min(grid) < 0:
            raise ConfigError("|alpha|^2 grid must be non-negative")
        cfg.alphas = [complex(math.sqrt(x)) for x in grid]
    elif alpha_text is not None:
        cfg.alphas = parse_alphas(alpha_text)
    eta_text = take("eta1")
    cfg.eta1 = parse_values(eta_text) if eta_text is not None else [0.5]
    for e in cfg.eta1:
        if not 0.0 < e < 1.0:
            raise ConfigError(f"eta1 must lie in (0, 1), got {e!r}")
    points = take("points")
    if points is not None:
        cfg.points = _integer(points, "points")
        if cfg.points < 2:
            raise ConfigError("points must be at least 2")
    window_text = take("window")
    if window_text is not None:
        cfg.windows = parse_windows(window_text, cfg.points if sub == "trace-scan" else None)
    rounds = take("rounds")
    if rounds is not None:
        cfg.rounds = _integer(rounds, "rounds")
        if not 1 <= cfg.rounds <= 6:
            raise ConfigError(f"rounds must lie in [1, 6], got {cfg.rounds}")
    det_text = take("det_eff")
    if det_text is not None:
        cfg.det_eff = parse_values(det_text)
        for d in cfg.det_eff:
            if not 0.0 < d <= 1.0:
                raise ConfigError(f"detector efficiency must lie in (0, 1], got {d!r}")
    beta_text = take("beta_grid")
    if beta_text is not None:
        cfg.betas = parse_grid(beta_text)
    cfg.eps_trunc = _number(str(args.trunc_eps))
    if not 0.0 < cfg.eps_trunc <= 1e-6:
        raise ConfigError(f"trunc-eps must lie in (0, 1e-6], got {cfg.eps_trunc!r}")
    cfg.fmt = args.format
    cfg.out = args.out
    cfg.digits = int(args.digits)
    if not 1 <= cfg.digits <= 17:
        raise ConfigError("digits must lie in [1, 17]")
    cfg.jobs = int(args.jobs)
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    echo.update(trunc_eps=repr(cfg.eps_trunc), digits=str(cfg.digits), format=cfg.fmt)
    cfg.echo = echo
    return cfg


# -- tables ------------------------------------------------------------------

@dataclass
class ResultTable:
    columns: List[str]
    rows: List[list]
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match the header")


def _cell(x, digits: int) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return f"{x:.{digits}g}"


def render_csv(table: ResultTable, digits: int) -> str:
    lines = [",".join(table.columns)]
    lines += [",".join(_cell(x, digits) for x in row) for row in table.rows]
    lines += [f"# {k}={v}" for k, v in table.metadata.items()]
    return "\n".join(lines) + "\n"


def _json_cell(x, digits: int):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{digits}g}")


def render_json(table: ResultTable, digits: int) -> str:
    doc = {
        "columns": table.columns,
        "rows": [[_json_cell(x, digits) for x in row] for row in table.rows],
        "metadata": table.metadata,
    }
    return json.dumps(doc, indent=1, sort_keys=False, allow_nan=False) + "\n"


def render(table: ResultTable, cfg: RunConfig) -> str:
    return render_json(table, cfg.digits) if cfg.fmt == "json" else render_csv(table, cfg.digits)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """``[fn(x) for x in items]``; with ``jobs > 1`` computed in worker processes, order kept."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _metadata(cfg: RunConfig, extra: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    meta = {"tool": f"{PROG} {__version__}"}
    meta.update(cfg.echo)
    if extra:
        meta.update(extra)
    return meta


def _windows_text(windows) -> str:
    return ",".join(f"{w.lo!r}:{w.hi!r}/{w.grid_points}" for w in windows)


def _real(alpha: complex) -> float:
    if alpha.imag != 0.0:
        raise ConfigError("this table needs real amplitudes")
    return alpha.real


# -- workers (module level so they can be sent to worker processes) ----------

def _trace_rows(alpha: float, windows, eps: float):
    rows, maxima = [], []
    for w in windows:
        xs = w.grid
        ys = closed_form_Dtr(alpha, xs, eps)
        rows += [[alpha, w.lo, w.hi, x, y] for x, y in zip(xs, ys)]
        if alpha == 0.0:
            maxima.append((w, w.lo, 0.0))
        else:
            rep = maximize_scalar(lambda p: closed_form_Dtr(alpha, p, eps), w, vectorized=True)
            maxima.append((w, rep.x_star, rep.f_star))
    return rows, maxima


def _min_error_row(point, eps: float, det_eff: Sequence[float]):
    eta1, alpha = point
    priors = PriorPair(eta1)
    res = solve(DiscriminationProblem(alpha, priors, eps_trunc=eps))
    try:
        sql = sql_homodyne(alpha, priors)
    except UnsupportedConfigurationError:
        sql = math.nan
    row = [eta1, abs(alpha) ** 2, res.phi_star, res.window_used.lo, res.window_used.hi,
           res.gamma_star, res.p_err, res.helstrom, res.deviation, sql, kennedy_error(alpha, priors)]
    row += [pnrd_error(alpha, priors, d) for d in det_eff]
    return row


def _gamma_row(point, windows, eps: float):
    alpha, eta1 = point
    priors = PriorPair(eta1)
    res = solve(DiscriminationProblem(alpha, priors, windows, eps))
    gamma, k = optimal_gamma(alpha, res.phi_star, priors, eps)
    return [abs(alpha), eta1, res.phi_star, gamma, k]


def _kennedy_row(alpha: complex, eta1: float, rounds: int, windows, det_eff, eps: float):
    priors = PriorPair(eta1)
    chain = run_unambiguous_chain(KennedyProblem(alpha, priors, rounds, windows, eps))
    row = [abs(alpha) ** 2] + [r.cumulative_Q for r in chain]
    row += [kennedy_limit(alpha, priors), idp_limit(alpha, priors)]
    row += [pnrd_failure(alpha, priors, d) for d in det_eff]
    return row


def _sequence_rows(point, rounds: int, windows, eps: float):
    alpha, eta1 = point
    report = run_sequence(DiscriminationProblem(alpha, PriorPair(eta1), eps_trunc=eps), rounds, windows)
    return [[abs(alpha), eta1, s.round, s.cumulative_p_err, s.helstrom, s.n_leaves, s.n_impossible,
             s.total_branch_prob] for s in report.rounds]


def _displacement_row(point, eps: float):
    alpha, eta1, beta = point
    res = displaced_single_round(DiscriminationProblem(alpha, PriorPair(eta1), eps_trunc=eps), beta)
    return [abs(alpha), eta1, beta, res.phi_star, res.p_err, res.helstrom]


# -- subcommands -------------------------------------------------------------

def cmd_trace_scan(cfg: RunConfig) -> ResultTable:
    """``(phi, D_tr)`` over each window for each amplitude, plus the located maxima."""
    windows = cfg.windows or parse_windows(DEFAULTS["trace-scan"]["window"], cfg.points)
    alphas = [_real(a) for a in cfg.alphas]
    results = _parallel_map(partial(_trace_rows, windows=windows, eps=cfg.eps_trunc), alphas, cfg.jobs)
    rows, extra = [], {}
    for alpha, (r, maxima) in zip(alphas, results):
        rows += r
        for w, x, y in maxima:
            extra[f"max.alpha_{alpha!r}.window_{w.lo!r}:{w.hi!r}"] = f"phi={x:.10g},d_tr={y:.10g}"
    return ResultTable(["alpha", "window_lo", "window_hi", "phi", "d_tr"], rows, _metadata(cfg, extra))


def _det_columns(prefix: str, det_eff) -> List[str]:
    return [f"{prefix}_{d:g}" for d in det_eff]


def cmd_min_error(cfg: RunConfig) -> ResultTable:
    """Single-round error against the Helstrom bound, per prior and ``|alpha|^2``."""
    points = [(e, a) for e in cfg.eta1 for a in cfg.alphas]
    rows = _parallel_map(partial(_min_error_row, eps=cfg.eps_trunc, det_eff=cfg.det_eff), points, cfg.jobs)
    columns = ["eta1", "alpha_sq", "phi_star", "window_lo", "window_hi", "gamma_star", "p_err",
               "helstrom", "deviation", "sql", "kennedy_error"] + _det_columns("pnrd_error", cfg.det_eff)
    extra = {f"windows.eta1_{e!r}": _windows_text(default_windows(PriorPair(e))) for e in cfg.eta1}
    return ResultTable(columns, rows, _metadata(cfg, extra))


def cmd_gamma_opt(cfg: RunConfig) -> ResultTable:
    """Optimal projector weight ``gamma`` as a function of the prior."""
    windows = cfg.windows or BIASED_PRIOR_WINDOWS
    if any(a == 0 for a in cfg.alphas):
        raise ConfigError("gamma_opt is undefined for alpha = 0")
    points = [(a, e) for a in cfg.alphas for e in cfg.eta1]
    rows = _parallel_map(partial(_gamma_row, windows=windows, eps=cfg.eps_trunc), points, cfg.jobs)
    return ResultTable(["alpha", "eta1", "phi_star", "gamma_opt", "knowledge"], rows,
                       _metadata(cfg, {"windows": _windows_text(windows)}))


def cmd_kennedy(cfg: RunConfig) -> ResultTable:
    """Failure probabilities of the repeated unambiguous scheme and its benchmarks."""
    if len(cfg.eta1) != 1:
        raise ConfigError("kennedy takes a single eta1")
    windows = cfg.windows or FIRST_MAXIMUM_WINDOW
    fn = partial(_kennedy_row, eta1=cfg.eta1[0], rounds=cfg.rounds, windows=windows,
                 det_eff=cfg.det_eff, eps=cfg.eps_trunc)
    rows = _parallel_map(fn, cfg.alphas, cfg.jobs)
    columns = ["alpha_sq"] + [f"Q{k}" for k in range(1, cfg.rounds + 1)] + ["Q_kennedy", "Q_idp"]
    columns += _det_columns("pnrd", cfg.det_eff)
    return ResultTable(columns, rows, _metadata(cfg, {"windows": _windows_text(windows)}))


def cmd_sequence(cfg: RunConfig) -> ResultTable:
    """Cumulative error of the sequential scheme after each round."""
    points = [(a, e) for a in cfg.alphas for e in cfg.eta1]
    fn = partial(_sequence_rows, rounds=cfg.rounds, windows=cfg.windows, eps=cfg.eps_trunc)
    rows = [r for block in _parallel_map(fn, points, cfg.jobs) for r in block]
    columns = ["alpha", "eta1", "round", "cumulative_p_err", "helstrom", "n_leaves", "n_impossible",
               "total_branch_prob"]
    later = "problem windows" if cfg.windows is None else _windows_text(cfg.windows)
    return ResultTable(columns, rows, _metadata(cfg, {"later_round_windows": later}))


def cmd_displacement_scan(cfg: RunConfig) -> ResultTable:
    """Single-round error after a common pre-displacement ``beta``."""
    points = [(a, e, b) for a in cfg.alphas for e in cfg.eta1 for b in cfg.betas]
    rows = _parallel_map(partial(_displacement_row, eps=cfg.eps_trunc), points, cfg.jobs)
    return ResultTable(["alpha", "eta1", "beta", "phi_star", "p_err", "helstrom"], rows, _metadata(cfg))


COMMANDS = {
    "trace-scan": cmd_trace_scan,
    "min-error": cmd_min_error,
    "gamma-opt": cmd_gamma_opt,
    "kennedy": cmd_kennedy,
    "sequence": cmd_sequence,
    "displacement-scan": cmd_displacement_scan,
}


# -- entry point -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_common(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--trunc-eps", default=repr(DEFAULT_EPS_TRUNC), help="Poisson tail bound of the Fock cutoff")
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "trace-scan": "trace distance of the ancilla pair against the coupling",
        "min-error": "single-round error probability against the Helstrom bound",
        "gamma-opt": "optimal projector weight against the prior",
        "kennedy": "failure probabilities of the repeated unambiguous receiver",
        "sequence": "cumulative error of the sequential receiver per round",
        "displacement-scan": "single-round error after a pre-displacement",
    }
    for name, text in helps.items():
        d = DEFAULTS[name]
        p = subs.add_parser(name, help=text, description=text)
        if "alpha" in d or "alpha_sq_grid" in d:
            p.add_argument("--alpha", help=f"comma list of amplitudes (default {d.get('alpha', 'from grid')})")
            p.add_argument("--alpha-sq-grid", dest="alpha_sq_grid", metavar="LO:HI:N",
                           help=f"grid of |alpha|^2 (default {d.get('alpha_sq_grid', 'unused')})")
        p.add_argument("--eta1", help=f"prior(s) of |alpha>, list or LO:HI:N (default {d.get('eta1', '1/2')})")
        if name != "min-error" and name != "displacement-scan":
            p.add_argument("--window", metavar="LO:HI[,LO:HI]", help=f"coupling windows (default {d.get('window', 'problem windows')})")
        if name == "trace-scan":
            p.add_argument("--points", help=f"grid points per window (default {d['points']})")
        if name in ("kennedy", "sequence"):
            p.add_argument("--rounds", help=f"number of ancilla rounds, 1..6 (default {d['rounds']})")
        if "det_eff" in d:
            p.add_argument("--det-eff", dest="det_eff", help=f"detector efficiencies (default {d['det_eff']})")
        if name == "displacement-scan":
            p.add_argument("--beta-grid", dest="beta_grid", metavar="LO:HI:N", help=f"default {d['beta_grid']}")
        _add_common(p)
    rep = subs.add_parser("reproduce", help="run every subcommand with defaults into a directory")
    rep.add_argument("directory")
    _add_common(rep)
    return parser


def _run(args) -> int:
    if args.command == "reproduce":
        if args.out is not None:
            raise ConfigError("reproduce writes into its directory; --out is not accepted")
        if not os.path.isdir(args.directory):
            raise ConfigError(f"not a directory: {args.directory!r}")
        outputs = []
        for sub in SUBCOMMANDS:
            cfg = build_config(args, sub)
            outputs.append((os.path.join(args.directory, f"{sub}.{cfg.fmt}"), render(COMMANDS[sub](cfg), cfg)))
        # everything is computed before the first file is written
        for path, text in outputs:
            write_atomic(path, text)
        return 0
    cfg = build_config(args)
    text = render(COMMANDS[cfg.subcommand](cfg), cfg)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except (ConfigError, DomainError, UnsupportedConfigurationError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (EvaluationError, ImpossibleOutcomeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"{PROG}: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
