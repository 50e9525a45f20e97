"""Command-line front end: figure datasets, parameter sweeps, the validation
battery, and sudden-death boundary queries.

CSV output puts a header naming every column on the first line and prints
floats with 17 significant digits, so repeated runs are byte-identical.  The
MMESDYN_WORKERS environment variable sets the scan worker count; any value
yields identical output.

Exit codes: 0 success, 1 validation failure, 2 bad arguments, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import dynamics, entanglement, linalg, monogamy, nonlocality, validation
from .dynamics import PAIR_NAMES

MEASURES = ("negativity", "min", "m_indicator", "m_prime", "esd_line",
            "pt_spectrum")
FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")

SWEEP_HEADER = ("family", "p", "kappa_t", "measure", "label", "closed",
                "numeric")

# time grids used by the figure datasets; the appendix families die before
# kappa_t = 1, so their panels use the shorter, denser grid
KT_MAIN = [i * 0.02 for i in range(301)]
KT_APPENDIX = [i * 0.01 for i in range(301)]


class BadArguments(Exception):
    pass


class OutputError(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.17g}"


def _write_lines(path: str, lines) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _write_csv(path: str, header, rows, footer=None) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    if footer is not None:
        lines.append(footer)
    _write_lines(path, lines)


# -- sweep ----------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    family: str
    p_values: tuple
    kt_min: float
    kt_max: float
    kt_step: float
    measures: tuple
    output_path: str
    format: str

    def validate(self) -> None:
        if self.family not in dynamics.FAMILIES:
            raise BadArguments(f"unknown family {self.family!r}")
        if not self.p_values:
            raise BadArguments("p list must be nonempty")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise BadArguments(f"p = {p} outside [0, 1]")
        if self.kt_min > self.kt_max:
            raise BadArguments("kt-min must not exceed kt-max")
        if self.kt_min < 0.0:
            raise BadArguments("kt-min must be nonnegative")
        if self.kt_step <= 0.0:
            raise BadArguments("kt-step must be positive")
        if not self.measures:
            raise BadArguments("measures list must be nonempty")
        for m in self.measures:
            if m not in MEASURES:
                raise BadArguments(f"unknown measure {m!r}, expected a subset "
                                   f"of {', '.join(MEASURES)}")
        if self.format not in ("csv", "json"):
            raise BadArguments(f"format must be csv or json, got {self.format!r}")

    def kt_grid(self) -> list:
        n = int(math.floor((self.kt_max - self.kt_min) / self.kt_step + 1e-9))
        return [self.kt_min + i * self.kt_step for i in range(n + 1)]


def _swap(fn, p, kt):
    return dynamics.swap_xi_chi(fn, p, kt)


def _closed_negativity(family, pair, p, kt):
    if family == "dim4":
        if pair == "c1c2":
            return entanglement.negativity_c1c2_closed(p, kt)
        if pair == "c1r2":
            return entanglement.negativity_c1r2_closed(p, kt)
        if pair == "r1c2":
            return _swap(entanglement.negativity_c1r2_from_amps, p, kt)
        return _swap(entanglement.negativity_c1c2_from_amps, p, kt)
    if family == "dim6" and pair == "c1c2":
        return entanglement.negativity_dim6_closed(p, kt)
    return None


def _closed_min(family, label, p, kt):
    if label == "global":
        return nonlocality.min_global_closed(p)
    par = dynamics.damping_amplitudes(kt)
    if family == "dim4":
        if label == "c1c2":
            return nonlocality.min_c1c2_from_amps(p, par.xi, par.chi)
        if label == "c1r2":
            return nonlocality.min_c1r2_from_amps(p, par.xi, par.chi)
        if label == "r1c2":
            return _swap(nonlocality.min_c1r2_from_amps, p, kt)
        return _swap(nonlocality.min_c1c2_from_amps, p, kt)
    if label == "c1c2":
        if family == "dim6":
            return nonlocality.min_dim6_from_amps(p, par.xi, par.chi)
        return nonlocality.min_dim8_from_amps(p, par.xi, par.chi)
    return None


def _point_rows(family, spec, p, kt, measure):
    rows = []
    if measure == "negativity":
        for pair in PAIR_NAMES:
            numeric = entanglement.negativity(
                dynamics.pair_state(spec, kt, pair), (0,))
            rows.append((family, p, kt, measure, pair,
                         _closed_negativity(family, pair, p, kt), numeric))
    elif measure == "min":
        for pair in PAIR_NAMES:
            numeric = nonlocality.min_luo_fu(dynamics.pair_state(spec, kt, pair))
            rows.append((family, p, kt, measure, pair,
                         _closed_min(family, pair, p, kt), numeric))
        numeric = nonlocality.min_bipartition(
            dynamics.evolve_four_partite(spec, kt), monogamy.GLOBAL_CUT)
        rows.append((family, p, kt, measure, "global",
                     _closed_min(family, "global", p, kt), numeric))
    elif measure == "m_indicator":
        closed = (monogamy.negativity_monogamy_closed(p, kt)
                  if family == "dim4" else None)
        rows.append((family, p, kt, measure, "m",
                     closed, monogamy.negativity_monogamy(p, kt, family)))
    elif measure == "m_prime":
        closed = (monogamy.min_distribution_closed(p, kt)
                  if family == "dim4" else None)
        rows.append((family, p, kt, measure, "m_prime",
                     closed, monogamy.min_distribution(p, kt, family)))
    elif measure == "pt_spectrum":
        cc = dynamics.pair_state(spec, kt, "c1c2")
        eigs = linalg.eigvals_hermitian(linalg.partial_transpose(cc, 0).data)
        closed_cc = (entanglement.pt_spectrum_c1c2_closed(p, kt)
                     if family == "dim4" else None)
        for i, eig in enumerate(eigs):
            closed = None if closed_cc is None else float(closed_cc[i])
            rows.append((family, p, kt, measure, f"c1c2_eig{i + 1}",
                         closed, float(eig)))
        if family == "dim4":
            cr = dynamics.pair_state(spec, kt, "c1r2")
            eigs = linalg.eigvals_hermitian(
                linalg.partial_transpose(cr, 0).data)
            closed_cr = entanglement.pt_spectrum_c1r2_closed(p, kt)
            for i, eig in enumerate(eigs):
                rows.append((family, p, kt, measure, f"c1r2_eig{i + 1}",
                             float(closed_cr[i]), float(eig)))
    return rows


def run_sweep(sweep: SweepSpec) -> str:
    """Evaluate the requested measures over the grid and write one file.

    Row order is p-major, then kappa_t, with measures in their canonical
    order at each point; the boundary-time measure depends only on p and is
    emitted once per p with an empty kappa_t field.
    """
    sweep.validate()
    kt_grid = sweep.kt_grid()
    measures = tuple(m for m in MEASURES if m in sweep.measures)
    rows = []
    for p in sweep.p_values:
        spec = dynamics.family_spec(sweep.family, p)
        if "esd_line" in measures:
            rows.append((sweep.family, p, None, "esd_line", "boundary_time",
                         None, entanglement.esd_boundary(sweep.family, p)))
        point_measures = [m for m in measures if m != "esd_line"]
        for kt in kt_grid:
            for measure in point_measures:
                rows.extend(_point_rows(sweep.family, spec, p, kt, measure))

    deltas = [abs(closed - numeric)
              for (_f, _p, _kt, _m, _lbl, closed, numeric) in rows
              if closed is not None]
    delta = max(deltas) if deltas else None

    if sweep.format == "csv":
        footer = f"# max_abs_delta {_fmt(delta) if delta is not None else 'n/a'}"
        _write_csv(sweep.output_path, SWEEP_HEADER, rows, footer)
    else:
        payload = {
            "header": list(SWEEP_HEADER),
            "rows": [dict(zip(SWEEP_HEADER, row)) for row in rows],
            "max_abs_delta": delta,
        }
        _write_lines(sweep.output_path, [json.dumps(payload, indent=2)])
    return sweep.output_path


# -- figures --------------------------------------------------------------------

P_PANELS = (0.0, 0.5, 0.75, 1.0)
_PANEL_TAGS = {0.0: "p000", 0.5: "p050", 0.75: "p075", 1.0: "p100"}


def _fig1(out_dir):
    rows = []
    for i in range(51):
        p = i / 50.0
        for kt in KT_MAIN:
            rows.append((p, kt, entanglement.negativity_c1c2_closed(p, kt)))
    _write_csv(os.path.join(out_dir, "fig1_negativity_surface.csv"),
               ("p", "kappa_t", "negativity_c1c2"), rows)
    line = [(i / 100.0, entanglement.esd_boundary("dim4", i / 100.0))
            for i in range(101)]
    _write_csv(os.path.join(out_dir, "fig1_esd_line.csv"),
               ("p", "esd_time"), line)
    return ["fig1_negativity_surface.csv", "fig1_esd_line.csv"]


def _fig2(out_dir):
    rows = []
    for i in range(51):
        p = i / 50.0
        for kt in KT_MAIN:
            par = dynamics.damping_amplitudes(kt)
            rows.append((p, kt,
                         nonlocality.min_c1c2_from_amps(p, par.xi, par.chi)))
    _write_csv(os.path.join(out_dir, "fig2_min_surface.csv"),
               ("p", "kappa_t", "min_c1c2"), rows)
    inset = []
    for kt in KT_MAIN:
        par = dynamics.damping_amplitudes(kt)
        hi = nonlocality.min_c1c2_from_amps(1.0, par.xi, par.chi)
        lo = nonlocality.min_c1c2_from_amps(0.0, par.xi, par.chi)
        inset.append((kt, hi, lo, hi - lo))
    _write_csv(os.path.join(out_dir, "fig2_min_asymmetry.csv"),
               ("kappa_t", "min_p1", "min_p0", "difference"), inset)
    return ["fig2_min_surface.csv", "fig2_min_asymmetry.csv"]


def _panel_files(out_dir, prefix, columns, extract):
    names = []
    for p in P_PANELS:
        rows = []
        for kt in KT_MAIN:
            panel = monogamy.distribution_panel(p, kt, "dim4")
            rows.append((kt,) + extract(panel))
        name = f"{prefix}_{_PANEL_TAGS[p]}.csv"
        _write_csv(os.path.join(out_dir, name), ("kappa_t",) + columns, rows)
        names.append(name)
    return names


def _fig3(out_dir):
    return _panel_files(
        out_dir, "fig3",
        ("neg_c1c2", "neg_c1r2", "neg_r1c2", "neg_r1r2", "m_indicator"),
        lambda panel: tuple(panel.pairwise[pair][0] for pair in PAIR_NAMES)
        + (panel.m_indicator,))


def _fig4(out_dir):
    return _panel_files(
        out_dir, "fig4",
        ("min_c1c2", "min_c1r2", "min_r1c2", "min_r1r2", "m_prime"),
        lambda panel: tuple(panel.pairwise[pair][1] for pair in PAIR_NAMES)
        + (panel.m_prime_indicator,))


def _fig5(out_dir):
    rows = []
    for i in range(101):
        p = i / 100.0
        for kt in KT_APPENDIX:
            rows.append((p, kt, entanglement.esd_region_classifier(p, kt)))
    _write_csv(os.path.join(out_dir, "fig5_regions.csv"),
               ("p", "kappa_t", "region"), rows)
    return ["fig5_regions.csv"]


def _fig6(out_dir):
    names = []
    for family in ("dim6", "dim8"):
        rows = [(i / 100.0, entanglement.esd_boundary(family, i / 100.0))
                for i in range(101)]
        name = f"fig6_esd_{family}.csv"
        _write_csv(os.path.join(out_dir, name), ("p", "esd_time"), rows)
        names.append(name)
    return names


def _fig7(out_dir):
    names = []
    for family in ("dim6", "dim8"):
        values = monogamy.min_distribution_curve(0.8, KT_APPENDIX, family)
        rows = list(zip(KT_APPENDIX, values))
        name = f"fig7_mprime_{family}.csv"
        _write_csv(os.path.join(out_dir, name), ("kappa_t", "m_prime"), rows)
        names.append(name)
    return names


_FIGURES = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
            "fig5": _fig5, "fig6": _fig6, "fig7": _fig7}


def run_figure(figure_id: str, out_dir: str) -> list:
    """Write the dataset files behind one figure; returns the file names."""
    if figure_id not in _FIGURES:
        raise BadArguments(f"unknown figure id {figure_id!r}, expected one "
                           f"of {', '.join(FIGURE_IDS)}")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out_dir}: {exc}") from exc
    return _FIGURES[figure_id](out_dir)


def run_validate(level: str = "fast") -> int:
    """Run the acceptance battery, print the report, return the exit code."""
    records = validation.run_all(level)
    for line in validation.report_lines(records):
        print(line)
    return 0 if validation.all_passed(records) else 1


# -- argument handling ------------------------------------------------------------

def _parse_floats(text: str, what: str) -> tuple:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise BadArguments(f"bad {what} list {text!r}: {exc}") from exc


def _load_config(path: str) -> dict:
    """Key-value config: one `key = value` per line, # starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise BadArguments(
                        f"{path}:{lineno}: expected `key = value`, got {raw!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
    except OSError as exc:
        raise BadArguments(f"cannot read config {path}: {exc}") from exc
    return values


_SWEEP_DEFAULTS = {"family": "dim4", "p": "0", "kt-min": "0", "kt-max": "6",
                   "kt-step": "0.02", "measures": "negativity",
                   "format": "csv", "out": None}


def _effective(cli_values: dict, config: dict, defaults: dict) -> dict:
    merged = dict(defaults)
    for key, value in config.items():
        if key not in defaults:
            raise BadArguments(f"unknown config key {key!r}")
        merged[key] = value
    for key, value in cli_values.items():
        if value is not None:
            merged[key] = value
    return merged


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmesdyn",
        description="Entanglement and nonlocality dynamics of mixed "
                    "maximally entangled states in lossy cavity pairs.",
        epilog="MMESDYN_WORKERS sets the scan worker count (default: machine "
               "parallelism); any value produces identical results.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write the dataset files for one figure")
    fig.add_argument("figure_id", choices=FIGURE_IDS)
    fig.add_argument("--out", required=True, help="output directory")

    sweep = sub.add_parser("sweep", help="tabulate measures over a (p, kt) grid")
    sweep.add_argument("--family", choices=dynamics.FAMILIES)
    sweep.add_argument("--p", help="comma-separated probabilities in [0, 1]")
    sweep.add_argument("--kt-min", dest="kt_min")
    sweep.add_argument("--kt-max", dest="kt_max")
    sweep.add_argument("--kt-step", dest="kt_step")
    sweep.add_argument("--measures",
                       help=f"comma-separated subset of {', '.join(MEASURES)}")
    sweep.add_argument("--format", choices=("csv", "json"))
    sweep.add_argument("--out", help="output file")
    sweep.add_argument("--config", help="key = value file mirroring the flags; "
                                        "flags override file values")

    val = sub.add_parser("validate", help="run the acceptance-check battery")
    val.add_argument("--level", choices=("fast", "full"), default="fast")

    esd = sub.add_parser("esd", help="sudden-death boundary time for one p")
    esd.add_argument("--family", choices=dynamics.FAMILIES, required=True)
    esd.add_argument("--p", type=float, required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            names = run_figure(args.figure_id, args.out)
            for name in names:
                print(os.path.join(args.out, name))
            return 0
        if args.command == "sweep":
            config = _load_config(args.config) if args.config else {}
            cli_values = {"family": args.family, "p": args.p,
                          "kt-min": args.kt_min, "kt-max": args.kt_max,
                          "kt-step": args.kt_step, "measures": args.measures,
                          "format": args.format, "out": args.out}
            merged = _effective(cli_values, config, _SWEEP_DEFAULTS)
            if merged["out"] is None:
                raise BadArguments("an output file is required (--out or "
                                   "config key `out`)")
            try:
                spec = SweepSpec(
                    family=merged["family"],
                    p_values=_parse_floats(merged["p"], "p"),
                    kt_min=float(merged["kt-min"]),
                    kt_max=float(merged["kt-max"]),
                    kt_step=float(merged["kt-step"]),
                    measures=tuple(tok.strip()
                                   for tok in merged["measures"].split(",")
                                   if tok.strip()),
                    output_path=merged["out"],
                    format=merged["format"],
                )
            except ValueError as exc:
                raise BadArguments(f"bad numeric flag: {exc}") from exc
            path = run_sweep(spec)
            print(path)
            return 0
        if args.command == "validate":
            return run_validate(args.level)
        if args.command == "esd":
            if not 0.0 <= args.p <= 1.0:
                raise BadArguments(f"p = {args.p} outside [0, 1]")
            print(_fmt(entanglement.esd_boundary(args.family, args.p)))
            return 0
        raise BadArguments(f"unknown command {args.command!r}")
    except BadArguments as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
