"""Command-line front end: ``scan``, ``figure``, ``atlas``, ``validate``, ``params``.

Every command writes plain data files. Options may also come from a flat
``key = value`` config file (``--config``); flags given on the command line
win over file values.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from qpbands import io, oracle, spectrum
from qpbands.errors import DomainError
from qpbands.params import (
    DimensionlessParams,
    NormalizedParams,
    cross_check,
    derived_from_energies,
    energies_from_dimensionless,
    normalized_from_dimensionless,
)
from qpbands.presets import FigurePreset

RESIDUAL_LIMIT = 1e-10
DEFAULT_ORACLE_N = 64
DEFAULT_VALIDATE_TOL = 1e-6


@dataclass
class ScanConfig:
    beta: float
    gamma: float
    k_points: int = spectrum.DEFAULT_K_POINTS
    tol: float = spectrum.DEFAULT_TOL
    oracle_n: Optional[int] = None
    output_path: str = "-"
    format: str = "csv"

    def __post_init__(self):
        if self.k_points < 3 or self.k_points % 2 == 0:
            raise DomainError(f"k_points must be odd and >= 3, got {self.k_points}")
        if not self.tol > 0:
            raise DomainError(f"tol must be > 0, got {self.tol}")
        if self.oracle_n is not None and (self.oracle_n % 2 or self.oracle_n < 16):
            raise DomainError(f"oracle_n must be even and >= 16, got {self.oracle_n}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        DimensionlessParams(self.beta, self.gamma)


# -- table assembly -----------------------------------------------------------

def _params_block(p: DimensionlessParams, np_: NormalizedParams) -> dict:
    return {"beta": p.beta, "gamma": p.gamma, "a": np_.a, "b": np_.b,
            "delta": np_.delta, "homega_over_2J": np_.homega_over_2J}


def _verify_point(pt, K, np_, photon):
    c = abs(math.cos(0.5 * K))
    if not abs(pt.residual) < RESIDUAL_LIMIT:
        raise RuntimeError(f"{pt.band.value} residual {pt.residual!r} at K={K!r}")
    if not pt.eps < np_.delta - c:
        raise RuntimeError(f"{pt.band.value} inside the continuum at K={K!r}")
    below = pt.eps < photon
    if below != (pt.band is spectrum.Band.BAND2):
        raise RuntimeError(f"{pt.band.value} on the wrong side of the photon line at K={K!r}")


def scan_table(np_: NormalizedParams, k_points: int, tol: float) -> tuple:
    """Solve both bands and lay them out column-wise; returns ``(table, scan)``."""
    scan = spectrum.scan_bands(np_, spectrum.k_grid(k_points), tol)
    table = {c: [] for c in io.SCAN_COLUMNS}
    for i, K in enumerate(scan.k.tolist()):
        sl = scan.continuum[i]
        photon = float(scan.photon[i])
        table["K"].append(K)
        table["continuum_lo"].append(sl.lo)
        table["continuum_hi"].append(sl.hi)
        table["photon_line"].append(photon)
        for n, curve in (("1", scan.band1), ("2", scan.band2)):
            pt = curve.points[i]
            if pt is not None:
                _verify_point(pt, K, np_, photon)
            table["band" + n].append(None if pt is None else pt.eps)
            table["residual" + n].append(None if pt is None else pt.residual)
            table["a_prime" + n].append(None if pt is None else pt.a_prime)
    return table, scan


def _scan_diagnostics(scan: spectrum.BandScan) -> dict:
    np_ = scan.params
    out = {
        "band1_points": len(scan.band1.solved()),
        "band2_points": len(scan.band2.solved()),
        "solver_errors": {c.band.value: {str(k): v for k, v in sorted(c.errors.items())}
                          for c in (scan.band1, scan.band2)},
        "repulsive_exists": spectrum.repulsive_existence(np_).exists,
    }
    edges = spectrum.band_edge_closed_form(np_)
    out["edge_closed_form"] = {"eps_plus": edges.eps_plus, "eps_minus": edges.eps_minus}
    if scan.band1.solved():
        fl = spectrum.flatness(scan.band1)
        out["band1_bandwidth"] = fl.bandwidth
        out["band1_relative_flatness"] = fl.relative
    b2 = [abs(p.eps + math.cos(p.k)) for p in scan.band2.solved()]
    if b2:
        out["band2_max_photon_offset"] = max(b2)
    res = [abs(p.residual) for c in (scan.band1, scan.band2) for p in c.solved()]
    if res:
        out["max_abs_residual"] = max(res)
    return out


def _report(p, np_, table, k_points, diagnostics) -> dict:
    return {
        "version": io.version_block(),
        "params": _params_block(p, np_),
        "grid": {"k_points": k_points, "k_min": -math.pi, "k_max": math.pi},
        "bands": table,
        "diagnostics": diagnostics,
    }


def _emit(out, fmt, columns, table, report) -> list:
    if fmt == "csv":
        text = io.csv_text(columns, io.columns_to_rows(columns, table))
    else:
        text = io.json_text(report)
    if out in (None, "-"):
        sys.stdout.write(text)
        return []
    path = Path(out)
    try:
        io.write_text(path, text)
        meta = {k: v for k, v in report.items() if k != "bands"}
        meta["columns"] = list(columns)
        meta["format"] = fmt
        io.write_text(io.sidecar_path(path), io.json_text(meta))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return [path, io.sidecar_path(path)]


def run_scan(cfg: ScanConfig) -> list:
    p = DimensionlessParams(cfg.beta, cfg.gamma)
    np_ = normalized_from_dimensionless(p)
    table, scan = scan_table(np_, cfg.k_points, cfg.tol)
    diag = _scan_diagnostics(scan)
    if cfg.oracle_n is not None:
        rep = oracle.compare_with_solver(np_, cfg.oracle_n, cfg.tol, full_check=False)
        diag["oracle"] = _comparison_dict(rep)
    return _emit(cfg.output_path, cfg.format, io.SCAN_COLUMNS, table,
                 _report(p, np_, table, cfg.k_points, diag))


def reproduce_figures(preset: FigurePreset, k_points: int = spectrum.DEFAULT_K_POINTS,
                      tol: float = spectrum.DEFAULT_TOL, out="-", fmt="csv") -> list:
    """Scan table for one published panel plus the two reference curves
    (pure-attractive band and photon line)."""
    p = preset.params
    np_ = normalized_from_dimensionless(p)
    table, scan = scan_table(np_, k_points, tol)
    table["pure_attractive"] = [float(v) for v in spectrum.pure_attractive(scan.k, np_)]
    diag = _scan_diagnostics(scan)
    diag["preset"] = preset.name
    b1 = scan.band1.energies()
    ok = ~np.isnan(b1)
    if ok.any():
        ref = np.asarray(table["pure_attractive"])
        diag["band1_max_rel_dev_from_pure_attractive"] = float(
            np.max(np.abs(b1[ok] - ref[ok])) / np_.delta)
    return _emit(out, fmt, io.FIGURE_COLUMNS, table, _report(p, np_, table, k_points, diag))


def atlas_point(beta: float, gamma: float, k_points: int, tol: float) -> dict:
    np_ = normalized_from_dimensionless(DimensionlessParams(beta, gamma))
    scan = spectrum.scan_bands(np_, spectrum.k_grid(k_points), tol)
    row = {"beta": beta, "gamma": gamma, "band1_bandwidth": None,
           "band1_relative_flatness": None, "band2_max_photon_offset": None,
           "gap_band1_to_continuum": None,
           "repulsive_exists": spectrum.repulsive_existence(np_).exists}
    if scan.band1.solved():
        fl = spectrum.flatness(scan.band1)
        row["band1_bandwidth"] = fl.bandwidth
        row["band1_relative_flatness"] = fl.relative
    b2 = [abs(p.eps + math.cos(p.k)) for p in scan.band2.solved()]
    if b2:
        row["band2_max_photon_offset"] = max(b2)
    k0 = spectrum.solve_band1(0.0, np_, tol)
    if k0 is not None:
        row["gap_band1_to_continuum"] = (np_.delta - 1.0) - k0.eps
    return row


def _axis(values, rng, resolution, name):
    if values:
        vals = [float(v) for v in values]
    elif rng:
        lo, hi = rng
        if not (lo > 0 and hi > 0):
            raise DomainError(f"{name} range must be positive, got {rng}")
        if resolution < 2:
            raise DomainError(f"resolution must be >= 2, got {resolution}")
        vals = np.linspace(lo, hi, resolution).tolist()
    else:
        raise DomainError(f"give either a {name} range or explicit {name} values")
    for v in vals:
        if not v > 0:
            raise DomainError(f"{name} values must be > 0, got {v}")
    return vals


def atlas(betas, gammas, k_points: int = spectrum.DEFAULT_K_POINTS,
          tol: float = spectrum.DEFAULT_TOL, jobs: int = 1) -> list:
    """Flatness / photon-offset / existence summary on a (beta, gamma) grid.

    Rows are ordered beta-major regardless of ``jobs``.
    """
    spectrum.k_grid(k_points)
    pairs = [(b, g) for b in betas for g in gammas]
    args = ([b for b, _ in pairs], [g for _, g in pairs],
            [k_points] * len(pairs), [tol] * len(pairs))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(atlas_point, *args))
    return list(map(atlas_point, *args))


def _comparison_dict(rep: oracle.ComparisonReport) -> dict:
    d = asdict(rep)
    d["rows"] = [asdict(r) for r in rep.rows]
    return d


def validate(beta: float, gamma: float, n_cells: int = DEFAULT_ORACLE_N,
             tol: float = DEFAULT_VALIDATE_TOL, full_check: bool = True) -> tuple:
    """Run the ring oracle against the solver; returns ``(exit_code, report)``."""
    if n_cells % 2:
        raise DomainError(f"oracle ring size must be even, got {n_cells}")
    if n_cells < 16:
        raise DomainError(f"oracle ring size must be >= 16, got {n_cells}")
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    p = DimensionlessParams(beta, gamma)
    np_ = normalized_from_dimensionless(p)
    rep = oracle.compare_with_solver(np_, n_cells, spectrum.DEFAULT_TOL, full_check=full_check)
    failures = rep.failures(tol)
    report = {
        "version": io.version_block(),
        "params": _params_block(p, np_),
        "tolerances": {"delta": tol, "multiset": 1e-9, "solver": spectrum.DEFAULT_TOL},
        "oracle": _comparison_dict(rep),
        "failures": failures,
        "passed": not failures,
    }
    return (0 if not failures else 1), report


def params_report(beta: float, gamma: float) -> dict:
    p = DimensionlessParams(beta, gamma)
    np_ = normalized_from_dimensionless(p)
    d = derived_from_energies(energies_from_dimensionless(p, 1.0))
    edges = spectrum.band_edge_closed_form(np_)
    asym = spectrum.band_edge_asymptotic(np_)
    rep = spectrum.repulsive_existence(np_)
    cc = cross_check(p)
    return {
        "version": io.version_block(),
        "params": _params_block(p, np_),
        "derived_in_units_of_EJ": asdict(d),
        "cross_check": {"residuals": cc.residuals, "max_residual": cc.max_residual},
        "band_edges": {"closed_form": asdict(edges), "asymptotic": asdict(asym)},
        "repulsive": asdict(rep),
    }


# -- argument handling --------------------------------------------------------

_CONFIG_TYPES = {
    "beta": float, "gamma": float, "k_points": int, "tol": float, "oracle_n": int,
    "out": str, "format": str, "figure": str, "resolution": int, "jobs": int,
    "beta_range": lambda s: [float(x) for x in s.replace(",", " ").split()],
    "gamma_range": lambda s: [float(x) for x in s.replace(",", " ").split()],
    "betas": lambda s: [float(x) for x in s.replace(",", " ").split()],
    "gammas": lambda s: [float(x) for x in s.replace(",", " ").split()],
}

_DEFAULTS = {
    "k_points": spectrum.DEFAULT_K_POINTS, "tol": None, "oracle_n": None,
    "out": "-", "format": "csv", "resolution": 5, "jobs": 1,
}


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys may use
    dashes or underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _CONFIG_TYPES[key](value)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def _color(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _diag(msg: str, ok: bool = True):
    tag = _color("ok", "32") if ok else _color("FAIL", "31")
    print(f"[{tag}] {msg}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="qpbands", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def physics(p, k=True):
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        if k:
            p.add_argument("--k-points", dest="k_points", type=int)
        p.add_argument("--tol", type=float)

    s = sub.add_parser("scan", parents=[common], help="solve both bands on a K grid")
    physics(s)
    s.add_argument("--oracle-n", dest="oracle_n", type=int,
                   help="also compare against a ring of this size (blocks only)")

    f = sub.add_parser("figure", parents=[common], help="reproduce one published panel")
    f.add_argument("--figure", help="fig3a .. fig5d")
    f.add_argument("--k-points", dest="k_points", type=int)
    f.add_argument("--tol", type=float)

    a = sub.add_parser("atlas", parents=[common], help="flatness/offset map over (beta, gamma)")
    a.add_argument("--beta-range", dest="beta_range", nargs=2, type=float)
    a.add_argument("--gamma-range", dest="gamma_range", nargs=2, type=float)
    a.add_argument("--betas", nargs="+", type=float)
    a.add_argument("--gammas", nargs="+", type=float)
    a.add_argument("--resolution", type=int)
    a.add_argument("--k-points", dest="k_points", type=int)
    a.add_argument("--tol", type=float)
    a.add_argument("--jobs", type=int)

    v = sub.add_parser("validate", parents=[common], help="check the solver against ring ED")
    physics(v, k=False)
    v.add_argument("--oracle-n", dest="oracle_n", type=int)
    v.add_argument("--skip-full", action="store_true",
                   help="skip the full real-space spectrum comparison")

    pr = sub.add_parser("params", parents=[common], help="print derived parameters")
    pr.add_argument("--beta", type=float)
    pr.add_argument("--gamma", type=float)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in list(_DEFAULTS.items()) + [(k, None) for k in _CONFIG_TYPES]:
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            setattr(args, key, cfg.get(key, default))
    return args


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise DomainError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def main(argv=None) -> int:
    parser = build_parser()
    args = resolve(parser.parse_args(argv))
    try:
        if args.command == "scan":
            _need(args, "beta", "gamma")
            cfg = ScanConfig(args.beta, args.gamma, args.k_points,
                             args.tol or spectrum.DEFAULT_TOL, args.oracle_n, args.out, args.format)
            for path in run_scan(cfg):
                _diag(f"wrote {path}")
        elif args.command == "figure":
            _need(args, "figure")
            preset = FigurePreset.parse(args.figure)
            for path in reproduce_figures(preset, args.k_points, args.tol or spectrum.DEFAULT_TOL,
                                          args.out, args.format):
                _diag(f"wrote {path}")
        elif args.command == "atlas":
            betas = _axis(args.betas, args.beta_range, args.resolution, "beta")
            gammas = _axis(args.gammas, args.gamma_range, args.resolution, "gamma")
            rows = atlas(betas, gammas, args.k_points, args.tol or spectrum.DEFAULT_TOL, args.jobs)
            table = {c: [r[c] for r in rows] for c in io.ATLAS_COLUMNS}
            report = {"version": io.version_block(),
                      "params": {"betas": betas, "gammas": gammas},
                      "grid": {"k_points": args.k_points},
                      "bands": table, "diagnostics": {"rows": len(rows)}}
            for path in _emit(args.out, args.format, io.ATLAS_COLUMNS, table, report):
                _diag(f"wrote {path}")
        elif args.command == "validate":
            _need(args, "beta", "gamma")
            n = args.oracle_n if args.oracle_n is not None else DEFAULT_ORACLE_N
            code, report = validate(args.beta, args.gamma, n, args.tol or DEFAULT_VALIDATE_TOL,
                                    full_check=not args.skip_full)
            text = io.json_text(report)
            if args.out in (None, "-"):
                sys.stdout.write(text)
            else:
                io.write_text(args.out, text)
            _diag(f"validate beta={args.beta} gamma={args.gamma} N={n}: "
                  f"{len(report['failures'])} failure(s)", ok=code == 0)
            return code
        elif args.command == "params":
            _need(args, "beta", "gamma")
            text = io.json_text(params_report(args.beta, args.gamma))
            if args.out in (None, "-"):
                sys.stdout.write(text)
            else:
                io.write_text(args.out, text)
    except DomainError as exc:
        _diag(f"domain error: {exc}", ok=False)
        return 2
    except OSError as exc:
        _diag(f"I/O error: {exc}", ok=False)
        return 3
    return 0
