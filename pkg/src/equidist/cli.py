"""Command-line harness: family or literal polynomial -> roots -> measures -> reports.

Exit status: 0 when every report passes, 2 when any report fails (or its
preconditions do not hold), 1 on usage, parse or I/O errors, 3 on numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import numbers
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .discrepancy import (
    DiscrepancyReport,
    builtin_test_function,
    cor32_report,
    cor35_report,
    cor36_report,
    energy_report,
    et31_report,
    growth_report,
    sector_deviation,
    thm31_report,
    thm34_report,
    zero_stats,
)
from .families import FamilyError, FamilyKind, FamilyMember, FamilySpec, parse_family
from .intpoly import PolynomialParseError, parse_polynomial
from .mahler import measure_report
from .potential import Domain, DomainError, QuadratureError, Segment, UnitDisk, equilibrium_mean, parse_domain
from .rootfinder import DEFAULT_TARGET_RADIUS, MAX_SWEEPS, RootFindingError, RootSet, find_roots

__all__ = ["RunConfig", "run", "main", "emit_plot_data", "emit_root_scatter", "UsageError", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
COMMANDS = ("roots", "measure", "stats", "verify", "growth", "sweep")
THEOREMS = ("et31", "thm31", "thm34", "energy", "cor32", "cor35", "cor36", "growth")
TEST_FUNCTIONS = ("cor32", "cor33", "cor35", "cor36", "cor37")
VERIFY_COLUMNS = ("theorem", "n", "lhs", "lhs_unc", "rhs", "pass", "member", "status")

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_NUMERIC = 0, 1, 2, 3

_DISK_ONLY = {"et31", "thm31", "cor32"}
_SEGMENT_ONLY = {"thm34", "cor35", "cor36"}


class UsageError(Exception):
    """Bad flags, grammar or config; exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- configuration ------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    command: str
    polynomial: str | None = None
    family: str | None = None
    shift: int = 0
    domain: str = "disk"
    n_min: int | None = None
    n_max: int | None = None
    output: str | None = None
    format: str | None = None
    seed: int | None = None
    target_radius: float = DEFAULT_TARGET_RADIUS
    max_sweeps: int = MAX_SWEEPS
    sector_bins: int = 8
    r: float | None = None
    theorems: tuple[str, ...] = ()
    phi: str | None = None
    jobs: int = 1
    plot_data: str | None = None

    def output_format(self) -> str:
        if self.format:
            return self.format
        return {"roots": "text", "measure": "json"}.get(self.command, "csv")

    def validate(self) -> tuple[Domain, FamilySpec]:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if (self.polynomial is None) == (self.family is None):
            raise UsageError("give exactly one of a literal polynomial or --family")
        try:
            E = parse_domain(self.domain)
        except DomainError as exc:
            raise UsageError(f"--domain: {exc}") from None
        if self.polynomial is not None:
            try:
                poly = parse_polynomial(self.polynomial)
            except PolynomialParseError as exc:
                raise UsageError(f"polynomial: {exc}") from None
            if poly.degree < 1:
                raise UsageError("polynomial must have degree >= 1")
            spec = FamilySpec(FamilyKind.Custom, shift=self.shift, custom=poly)
        else:
            try:
                spec = parse_family(self.family, self.shift)
            except FamilyError as exc:
                raise UsageError(f"--family: {exc}") from None
            if spec.parameter is None and (self.n_min is None or self.n_max is None):
                raise UsageError("a family without a parameter needs --n-min and --n-max")
        if self.n_min is not None and self.n_max is not None and self.n_min > self.n_max:
            raise UsageError(f"empty n-range [{self.n_min}, {self.n_max}]")
        if self.format not in (None, "csv", "json", "text"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.output_format() == "text" and self.command != "roots":
            raise UsageError("text output is only available for roots")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.sector_bins < 1:
            raise UsageError("--sector-bins must be >= 1")
        if not self.target_radius > 0:
            raise UsageError("--target-radius must be positive")
        if self.r is not None and not self.r > 0:
            raise UsageError("--r must be positive")
        if self.command in ("verify", "sweep"):
            _check_theorems(self.theorems or applicable_theorems(E), E)
        if self.phi is not None and self.phi not in TEST_FUNCTIONS:
            raise UsageError(f"unknown test function {self.phi!r}")
        if self.plot_data is not None and self.command in ("measure", "stats"):
            raise UsageError("plot data is written by roots, verify, sweep and growth")
        return E, spec

    def members(self, spec: FamilySpec) -> list[FamilyMember]:
        if spec.kind is FamilyKind.Custom or spec.parameter is not None:
            out = [spec.member()]
            if self.n_min is not None and self.n_max is not None:
                out = [m for m in out if self.n_min <= m.degree <= self.n_max]
        else:
            try:
                out = list(spec.members_by_degree(self.n_min, self.n_max))
            except FamilyError as exc:
                raise UsageError(f"--family: {exc}") from None
        if not out:
            raise UsageError(f"no members of {spec.name} with degree in [{self.n_min}, {self.n_max}]")
        return out


def _check_theorems(theorems: Sequence[str], E: Domain) -> None:
    if not theorems:
        raise UsageError("no theorem selected")
    for th in theorems:
        if th not in THEOREMS:
            raise UsageError(f"unknown theorem {th!r}; expected one of {', '.join(THEOREMS)}")
        if th in _DISK_ONLY and not isinstance(E, UnitDisk):
            raise UsageError(f"{th} is stated on the unit disk, not {E.describe()}")
        if th in _SEGMENT_ONLY and not isinstance(E, Segment):
            raise UsageError(f"{th} is stated on a segment, not {E.describe()}")
        if th == "cor36" and E != Segment(-2, 2):
            raise UsageError("cor36 is stated on segment:a=-2,b=2")


def applicable_theorems(E: Domain) -> tuple[str, ...]:
    """Default theorem list of a sweep on ``E``."""
    if isinstance(E, UnitDisk):
        return ("et31", "thm31", "energy", "cor32", "growth")
    if isinstance(E, Segment):
        out = ("thm34", "energy", "cor35")
        return out + (("cor36",) if E == Segment(-2, 2) else ()) + ("growth",)
    return ("energy", "growth")


# -- per-member work ------------------------------------------------------------------------


@dataclass
class _Result:
    label: str
    degree: int
    rows: list = field(default_factory=list)
    roots: RootSet | None = None
    numeric_error: str | None = None
    input_error: str | None = None


def _roots(member: FamilyMember, cfg: RunConfig) -> RootSet:
    return find_roots(member.poly, cfg.target_radius, factors=member.factors, seed=cfg.seed, max_sweeps=cfg.max_sweeps)


def _phi(cfg: RunConfig, E: Domain, n: int):
    name = cfg.phi
    if name is None:
        if isinstance(E, Segment):
            name = "cor36" if E == Segment(-2, 2) else "cor35"
        else:
            name = "cor32"
    if name == "cor35":
        a, b = (E.a, E.b) if isinstance(E, Segment) else (None, None)
        return builtin_test_function(name, a=a, b=b)
    if name in ("cor33", "cor37"):
        return builtin_test_function(name, n=n)
    return builtin_test_function(name)


def _theorem_report(th: str, member: FamilyMember, rs: RootSet, E: Domain, cfg: RunConfig) -> DiscrepancyReport:
    p = member.poly
    if th == "et31":
        return et31_report(p, rs, sector_bins=cfg.sector_bins, factors=member.factors)
    if th == "thm31":
        return thm31_report(p, rs, _phi(cfg, E, p.degree))
    if th == "thm34":
        return thm34_report(p, rs, _phi(cfg, E, p.degree), E)
    if th == "energy":
        return energy_report(p, rs, _phi(cfg, E, p.degree), cfg.r, E, factors=member.factors)
    if th == "cor32":
        return cor32_report(p, rs)
    if th == "cor35":
        return cor35_report(p, rs, E)
    return cor36_report(p, rs)


def _verify_row(th: str, n: int, label: str, rep: DiscrepancyReport | None = None, status: str = "") -> dict:
    if rep is None:
        return {"theorem": th, "n": n, "lhs": math.nan, "lhs_unc": math.nan, "rhs": None, "pass": None,
                "member": label, "status": status, "parameters": {}}
    params = {"tag": rep.theorem.value, **rep.parameters}
    return {"theorem": th, "n": n, "lhs": rep.lhs, "lhs_unc": rep.lhs_uncertainty, "rhs": rep.rhs,
            "pass": rep.passed, "member": label, "status": rep.status, "parameters": params}


def _growth_row(member: FamilyMember, E: Domain) -> dict:
    g = growth_report([member], E)[0]
    return {"theorem": "growth", "n": g.n, "lhs": g.log_sup_norm, "lhs_unc": None, "rhs": None, "pass": None,
            "member": g.label, "status": g.note or "trend only", "parameters": {"ratio": g.ratio}}


def _work_verify(member: FamilyMember, E: Domain, cfg: RunConfig, res: _Result) -> None:
    n = member.degree
    rs = None
    root_error = None
    if any(th != "growth" for th in cfg.theorems):
        try:
            rs = _roots(member, cfg)
        except ValueError as exc:
            root_error = str(exc)
    res.roots = rs
    for th in cfg.theorems:
        if th == "growth":
            res.rows.append(_growth_row(member, E))
            continue
        if rs is None:
            res.rows.append(_verify_row(th, n, member.label, status=f"precondition not met: {root_error}"))
            continue
        try:
            rep = _theorem_report(th, member, rs, E, cfg)
        except ValueError as exc:
            res.rows.append(_verify_row(th, n, member.label, status=f"precondition not met: {exc}"))
            continue
        res.rows.append(_verify_row(th, n, member.label, rep))


def _work_roots(member: FamilyMember, cfg: RunConfig, res: _Result) -> None:
    rs = _roots(member, cfg)
    res.roots = rs
    for z, rad in zip(rs.roots, rs.radii):
        res.rows.append({"member": member.label, "re": float(z.real), "im": float(z.imag), "radius": float(rad)})


def _work_measure(member: FamilyMember, E: Domain, cfg: RunConfig, res: _Result) -> None:
    rs = _roots(member, cfg)
    rep = measure_report(member.poly, E, rs=rs, factors=member.factors)
    row = {"member": member.label, "n": member.degree}
    row.update(rep.as_dict())
    del row["degree"]
    row["chain_ok"] = rep.chain_ok
    res.rows.append(row)


def _work_stats(member: FamilyMember, E: Domain, cfg: RunConfig, res: _Result) -> None:
    rs = _roots(member, cfg)
    st = zero_stats(rs, cfg.sector_bins)
    dev, arc = sector_deviation(st)
    res.rows.append({
        "member": member.label,
        "n": st.n,
        "mean_re": st.mean.real,
        "mean_im": st.mean.imag,
        "mean_square_re": st.mean_square.real,
        "mean_square_im": st.mean_square.imag,
        "target_mean": equilibrium_mean(E, lambda z: z.real),
        "target_mean_square": equilibrium_mean(E, lambda z: (z * z).real),
        "sector_deviation": dev,
        "edge_ambiguous": st.edge_ambiguous,
        "moments": list(st.moments),
        "sector_edges": list(st.sector_edges),
        "sector_counts": list(st.sector_counts),
        "arc": list(arc),
    })


def _work_growth(member: FamilyMember, E: Domain, res: _Result) -> None:
    g = growth_report([member], E)[0]
    res.rows.append({"member": g.label, "n": g.n, "log_sup_norm": g.log_sup_norm, "ratio": g.ratio, "note": g.note})


def _work(task: tuple[FamilyMember, RunConfig]) -> _Result:
    member, cfg = task
    E = parse_domain(cfg.domain)
    res = _Result(member.label, member.degree)
    try:
        if cfg.command in ("verify", "sweep"):
            _work_verify(member, E, cfg, res)
        elif cfg.command == "roots":
            _work_roots(member, cfg, res)
        elif cfg.command == "measure":
            _work_measure(member, E, cfg, res)
        elif cfg.command == "stats":
            _work_stats(member, E, cfg, res)
        else:
            _work_growth(member, E, res)
    except (RootFindingError, QuadratureError, ZeroDivisionError, FloatingPointError) as exc:
        res.numeric_error = str(exc)
    except ValueError as exc:
        res.input_error = str(exc)
    return res


# -- formatting ---------------------------------------------------------------------------------


def fmt(x) -> str:
    """Scalar to text: floats with 17 significant digits, None as empty."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, Enum):
        return str(x.value)
    if isinstance(x, numbers.Real):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x + 0.0, ".17g")  # + 0.0 folds -0 into 0
    return str(x)


def _json_value(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, Enum):
        return _json_value(x.value)
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, numbers.Real):
        return fmt(x) if math.isfinite(x) else "null"
    if isinstance(x, numbers.Complex):
        return "[" + _json_value(x.real) + ", " + _json_value(x.imag) + "]"
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def to_json(obj, indent: int = 0) -> str:
    """JSON with the same float formatting as the CSV output; non-finite floats become null."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj) and not any(isinstance(v, complex) for v in obj):
            return "[" + ", ".join(_json_value(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return _json_value(obj)


def _csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


_CSV_COLUMNS = {
    "roots": ("member", "re", "im", "radius"),
    "measure": ("member", "n", "mahler", "generalized", "tilde", "height", "sup_norm", "gap", "chain_ok"),
    "stats": ("member", "n", "mean_re", "mean_im", "mean_square_re", "mean_square_im", "target_mean",
              "target_mean_square", "sector_deviation", "edge_ambiguous"),
    "growth": ("member", "n", "log_sup_norm", "ratio", "note"),
    "verify": VERIFY_COLUMNS,
    "sweep": VERIFY_COLUMNS,
}


def render(cfg: RunConfig, results: list[_Result]) -> str:
    rows = [row for res in results for row in res.rows]
    kind = cfg.output_format()
    if kind == "text":
        lines = []
        for res in results:
            if len(results) > 1:
                lines.append(f"# {res.label}")
            lines += [f"{fmt(r['re'])} {fmt(r['im'])} {fmt(r['radius'])}" for r in res.rows]
        return "\n".join(lines) + "\n"
    if kind == "csv":
        return _csv(rows, _CSV_COLUMNS[cfg.command])
    head = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "domain": parse_domain(cfg.domain).describe()}
    if cfg.command == "measure" and cfg.polynomial is not None and len(rows) == 1:
        head.update(rows[0])
    else:
        head["rows"] = rows
    return to_json(head) + "\n"


# -- plot data ------------------------------------------------------------------------------------


def emit_plot_data(reports: Sequence[DiscrepancyReport], path) -> Path:
    """Write ``n,lhs,rhs`` rows (rhs empty where the threshold is not met)."""
    if not reports:
        raise ValueError("no reports to plot")
    rows = [{"n": r.parameters.get("n"), "lhs": r.lhs, "rhs": r.rhs} for r in reports]
    return _write_series(rows, ("n", "lhs", "rhs"), path)


def emit_root_scatter(rs: RootSet, path) -> Path:
    """Write ``re,im`` rows, one per root."""
    if len(rs) == 0:
        raise ValueError("no roots to plot")
    rows = [{"re": float(z.real), "im": float(z.imag)} for z in rs.roots]
    return _write_series(rows, ("re", "im"), path)


def _write_series(rows, columns, path) -> Path:
    path = Path(path)
    path.write_text(_csv(rows, columns))
    return path


def _safe(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", label)


def _plot(cfg: RunConfig, results: list[_Result]) -> None:
    out = Path(cfg.plot_data)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.command == "roots":
        for res in results:
            emit_root_scatter(res.roots, out / f"roots_{_safe(res.label)}.csv")
        return
    if cfg.command == "growth":
        rows = [r for res in results for r in res.rows]
        _write_series(rows, ("n", "log_sup_norm"), out / "growth.csv")
        return
    for th in cfg.theorems:
        rows = [r for res in results for r in res.rows if r["theorem"] == th]
        if not rows:
            raise ValueError(f"no {th} reports to plot")
        if th == "growth":
            _write_series([{"n": r["n"], "log_sup_norm": r["lhs"]} for r in rows], ("n", "log_sup_norm"), out / "growth.csv")
        else:
            _write_series(rows, ("n", "lhs", "rhs"), out / f"{th}.csv")


# -- driver -----------------------------------------------------------------------------------------


def _execute(cfg: RunConfig, members: list[FamilyMember]) -> list[_Result]:
    tasks = [(m, cfg) for m in members]
    if cfg.jobs == 1 or len(tasks) == 1:
        return [_work(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(tasks))) as pool:
        # map keeps input order whatever the completion order
        return list(pool.map(_work, tasks))


def _row_failed(row: dict) -> bool:
    return row.get("pass") is False or str(row.get("status", "")).startswith("precondition")


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        _check_precision_env()
        E, spec = cfg.validate()
        if cfg.command in ("verify", "sweep") and not cfg.theorems:
            cfg = replace(cfg, theorems=applicable_theorems(E))
        members = cfg.members(spec)
    except UsageError as exc:
        print(f"equidist: {exc}", file=stderr)
        return EXIT_USAGE
    results = _execute(cfg, members)
    status = EXIT_OK
    for res in results:
        if res.input_error is not None:
            print(f"equidist: {res.label}: {res.input_error}", file=stderr)
            return EXIT_USAGE
    good = [res for res in results if res.numeric_error is None]
    try:
        text = render(cfg, good)
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            stdout.write(text)
        if cfg.plot_data is not None:
            _plot(cfg, good)
    except (OSError, ValueError) as exc:
        print(f"equidist: cannot write output: {exc}", file=stderr)
        return EXIT_USAGE
    for res in results:
        if res.numeric_error is not None:
            print(f"equidist: numerical failure in {res.label}: {res.numeric_error}", file=stderr)
            status = EXIT_NUMERIC
    if status == EXIT_OK and any(_row_failed(row) for res in good for row in res.rows):
        status = EXIT_FAIL
    return status


def _check_precision_env() -> None:
    raw = os.environ.get("EQUIDIST_PRECISION")
    if raw is None:
        return
    try:
        int(raw)
    except ValueError:
        raise UsageError(f"EQUIDIST_PRECISION must be an integer, got {raw!r}") from None


# -- argument parsing -------------------------------------------------------------------------------


def _theorem_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--family", help="family grammar, e.g. cycloprod:k=200 or chebyshev")
    common.add_argument("--shift", type=int, default=0, help="integer shift z -> z - c")
    common.add_argument("--domain", default="disk", help="disk | segment:a=A,b=B | diskplus:points=P,...")
    common.add_argument("--n-min", type=int, help="smallest degree of a family sweep")
    common.add_argument("--n-max", type=int, help="largest degree of a family sweep")
    common.add_argument("--output", "-o", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json", "text"))
    common.add_argument("--seed", type=int, help="seed of the root-finder start jitter (default: fixed library seed)")
    common.add_argument("--target-radius", type=float, default=DEFAULT_TARGET_RADIUS)
    common.add_argument("--max-sweeps", type=int, default=MAX_SWEEPS)
    common.add_argument("--sector-bins", type=int, default=8)
    common.add_argument("--jobs", "-j", type=int, default=1, help="worker processes")
    common.add_argument("--plot-data", metavar="DIR", help="write plot-ready series files into DIR")
    common.add_argument("--config", metavar="FILE", help="key=value file mirroring the flags; flags win")

    parser = _Parser(prog="equidist", description="Mahler measures and zero-distribution discrepancy checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "roots": "print 're im radius' per root",
        "measure": "Mahler, generalized and tilde measures, height and sup norm",
        "stats": "zero moments and sector counts",
        "verify": "check one theorem over a family",
        "growth": "log sup norm trend table",
        "sweep": "check several theorems over a family",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("polynomial", nargs="?", help='literal polynomial, e.g. "z^2-z-1"')
        if name in ("verify", "sweep"):
            p.add_argument("--phi", choices=TEST_FUNCTIONS, help="test function (default follows the domain)")
            p.add_argument("--r", type=float, help="energy-bound radius (default 1/n disk, 1/n^2 segment)")
        if name == "verify":
            p.add_argument("--theorem", required=True, choices=THEOREMS)
        if name == "sweep":
            p.add_argument("--theorems", type=_theorem_list, help="comma-separated list (default: all that apply)")
    return parser


def read_config(path: str) -> dict[str, tuple[str, int]]:
    """Parse ``key = value`` lines; returns key -> (value, line number)."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for no, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise UsageError(f"{path}: line {no}, column 1: expected key=value")
        key, value = (s.strip() for s in text.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = (value, no)
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], ns: argparse.Namespace) -> argparse.Namespace:
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, (value, no) in read_config(ns.config).items():
        action = actions.get(key)
        if action is None or key in ("help", "config", "command"):
            raise UsageError(f"{ns.config}: line {no}: unknown key {key!r} for {ns.command}")
        try:
            defaults[key] = action.type(value) if action.type else value
        except (TypeError, ValueError):
            raise UsageError(f"{ns.config}: line {no}: bad value {value!r} for {key}") from None
        if action.choices is not None and defaults[key] not in action.choices:
            raise UsageError(f"{ns.config}: line {no}: {value!r} is not one of {sorted(action.choices)}")
    sub.set_defaults(**defaults)
    for a in sub._actions:
        if a.dest in defaults:
            a.required = False
    return parser.parse_args(argv)


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    theorems = ()
    if ns.command == "verify":
        theorems = (ns.theorem,)
    elif ns.command == "sweep" and ns.theorems:
        theorems = ns.theorems
    known = {f.name for f in fields(RunConfig)}
    values = {k: v for k, v in vars(ns).items() if k in known}
    values["theorems"] = theorems
    return RunConfig(**values)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = _first_pass(parser, argv)
        if ns.config:
            ns = _apply_config(parser, argv, ns)
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"equidist: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


def _first_pass(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # a config file may supply required flags, so tolerate their absence here
    if "--config" not in " ".join(argv):
        return parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices
    saved = {name: [a for a in p._actions if a.required] for name, p in sub.items()}
    for acts in saved.values():
        for a in acts:
            a.required = False
    try:
        return parser.parse_args(argv)
    finally:
        for acts in saved.values():
            for a in acts:
                a.required = True
