"""Acceptance-check suite: every closed form against an independent numeric
route, every quoted constant against a fresh computation.

Each check returns a CheckRecord; run_all executes the whole battery at a
chosen thoroughness level.  Closed forms are always resolved through their
module attribute at call time, so a test can monkeypatch one and confirm the
corresponding check really fails.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import dynamics, entanglement, linalg, monogamy, nonlocality

SPECTRUM_TOL = 1e-10
MATRIX_TOL = 1e-12
MIN_ORACLE_TOL = 1e-10
ZERO_TOL = 1e-10

RNG_SEED = 20260816


@dataclass(frozen=True)
class CheckRecord:
    name: str
    passed: bool
    measured: str
    expected: str
    runtime_s: float


def _record(name: str, passed: bool, measured: str, expected: str,
            t0: float) -> CheckRecord:
    return CheckRecord(name, bool(passed), measured, expected,
                       time.perf_counter() - t0)


def _grid(n: int, hi: float) -> list:
    return [hi * i / (n - 1) for i in range(n)]


def check_initial_maximality(level: str = "fast") -> CheckRecord:
    """1: every family starts with negativity exactly 1/2, any p."""
    t0 = time.perf_counter()
    worst = 0.0
    for family in dynamics.FAMILIES:
        for i in range(11):
            p = i / 10.0
            rho = dynamics.build_mmes(dynamics.family_spec(family, p))
            worst = max(worst, abs(entanglement.negativity(rho, (0,)) - 0.5))
    return _record("initial_maximality", worst <= ZERO_TOL,
                   f"max |N(0) - 0.5| = {worst:.3e}",
                   "<= 1e-10 for p in {0,0.1,...,1}, all families", t0)


def check_esd_constants(level: str = "fast") -> CheckRecord:
    """2: sudden-death plateau constants and threshold probabilities."""
    t0 = time.perf_counter()
    gaps = []
    gaps.append(abs(entanglement.esd_boundary("dim4", 0.0)
                    - math.log((3 + math.sqrt(3)) / 2)))
    for p in (0.0, 0.01, 0.03):
        gaps.append(abs(entanglement.esd_boundary("dim6", p)
                        - math.log((5 + math.sqrt(5)) / 4)))
    for p in (0.0, 0.003, 0.006):
        gaps.append(abs(entanglement.esd_boundary("dim8", p)
                        - math.log((7 + math.sqrt(7)) / 6)))
    boundary_gap = max(gaps)
    p1 = entanglement.esd_threshold_recovered("dim6")
    p2 = entanglement.esd_threshold_recovered("dim8")
    gap1 = abs(p1 - 0.03512)
    gap2 = abs(p2 - 0.006258)
    passed = boundary_gap <= 1e-8 and gap1 <= 1e-5 and gap2 <= 1e-6
    return _record("esd_constants", passed,
                   f"boundary gap {boundary_gap:.3e}; p1 = {p1:.8f}, "
                   f"p2 = {p2:.8f}",
                   "plateaus within 1e-8; thresholds 0.03512 +/- 1e-5 and "
                   "0.006258 +/- 1e-6", t0)


def check_closed_vs_numeric(level: str = "fast") -> CheckRecord:
    """3: spectra, matrices, and MIN closed forms against generic numerics.

    Also settles the discriminant-reading question in the cavity-cavity
    spectrum: the chi^8 reading must pass while the chi^2 reading fails, and
    the record names the surviving one.
    """
    t0 = time.perf_counter()
    n = 20 if level == "full" else 6
    p_grid = _grid(n, 1.0)
    kt_grid = _grid(n, 6.0)

    spec_gap = mat_gap = min_gap = rejected_gap = 0.0
    for p in p_grid:
        spec4 = dynamics.family_spec("dim4", p)
        spec6 = dynamics.family_spec("dim6", p)
        spec8 = dynamics.family_spec("dim8", p)
        for kt in kt_grid:
            cc = dynamics.pair_state(spec4, kt, "c1c2")
            cr = dynamics.pair_state(spec4, kt, "c1r2")
            eig_cc = linalg.eigvals_hermitian(
                linalg.partial_transpose(cc, 0).data)
            eig_cr = linalg.eigvals_hermitian(
                linalg.partial_transpose(cr, 0).data)
            spec_gap = max(spec_gap, np.max(np.abs(
                eig_cc - entanglement.pt_spectrum_c1c2_closed(p, kt))))
            spec_gap = max(spec_gap, np.max(np.abs(
                eig_cr - entanglement.pt_spectrum_c1r2_closed(p, kt))))
            rejected_gap = max(rejected_gap, np.max(np.abs(
                eig_cc - entanglement.pt_spectrum_c1c2_closed(
                    p, kt, c_variant="chi2"))))
            mat_gap = max(mat_gap, np.max(np.abs(
                cc.data - dynamics.analytic_rho_c1c2(p, kt).data)))
            mat_gap = max(mat_gap, np.max(np.abs(
                cr.data - dynamics.analytic_rho_c1r2(p, kt).data)))

            par = dynamics.damping_amplitudes(kt)
            min_gap = max(min_gap, abs(
                nonlocality.min_luo_fu(cc)
                - nonlocality.min_c1c2_from_amps(p, par.xi, par.chi)))
            min_gap = max(min_gap, abs(
                nonlocality.min_luo_fu(cr)
                - nonlocality.min_c1r2_from_amps(p, par.xi, par.chi)))
            min_gap = max(min_gap, abs(
                nonlocality.min_luo_fu(dynamics.pair_state(spec6, kt, "c1c2"))
                - nonlocality.min_dim6_from_amps(p, par.xi, par.chi)))
            min_gap = max(min_gap, abs(
                nonlocality.min_luo_fu(dynamics.pair_state(spec8, kt, "c1c2"))
                - nonlocality.min_dim8_from_amps(p, par.xi, par.chi)))
            min_gap = max(min_gap, abs(
                nonlocality.min_bipartition(
                    dynamics.evolve_four_partite(spec4, kt),
                    monogamy.GLOBAL_CUT)
                - nonlocality.min_global_closed(p)))

    passed = (spec_gap <= SPECTRUM_TOL and mat_gap <= MATRIX_TOL
              and min_gap <= MIN_ORACLE_TOL and rejected_gap > SPECTRUM_TOL)
    return _record("closed_vs_numeric", passed,
                   f"chi8 spectrum reading passes (max |d| = {spec_gap:.3e}); "
                   f"chi2 reading rejected (max |d| = {rejected_gap:.3e}); "
                   f"matrices {mat_gap:.3e}; MIN oracles {min_gap:.3e}",
                   "spectra <= 1e-10 under exactly one reading; matrices "
                   "<= 1e-12; MIN closed forms <= 1e-10", t0)


def check_min_endpoints(level: str = "fast") -> CheckRecord:
    """4: initial MIN equals (p - 1/2)^2 + 1/4 and half the purity."""
    t0 = time.perf_counter()
    worst = 0.0
    for family in dynamics.FAMILIES:
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            value, half_purity = nonlocality.min_initial_purity_relation(
                p, family)
            expected = (p - 0.5) ** 2 + 0.25
            worst = max(worst, abs(value - expected),
                        abs(value - half_purity))
    return _record("min_endpoints", worst <= 1e-12,
                   f"max deviation {worst:.3e}",
                   "initial MIN = (p-1/2)^2 + 1/4 = purity/2 within 1e-12",
                   t0)


def check_brute_force_oracle(level: str = "fast") -> CheckRecord:
    """5: direction-scan MIN agrees with the closed qubit formula."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(RNG_SEED)
    count = 50 if level == "full" else 10
    lo = hi = 0.0
    for _ in range(count):
        rho = linalg.random_density_matrix((2, 4), rng)
        diff = (nonlocality.min_brute_force(rho)
                - nonlocality.min_luo_fu(rho))
        lo = min(lo, diff)
        hi = max(hi, diff)
    spec4 = dynamics.family_spec("dim4", 0.5)
    for kt in (0.0, 0.5, 1.0, 2.0):
        rho = dynamics.pair_state(spec4, kt, "c1c2")
        diff = (nonlocality.min_brute_force(rho)
                - nonlocality.min_luo_fu(rho))
        lo = min(lo, diff)
        hi = max(hi, diff)
    passed = lo >= -1e-6 and hi <= 1e-9
    return _record("brute_force_oracle", passed,
                   f"difference range [{lo:.3e}, {hi:.3e}] over {count} "
                   f"random states + 4 evolved states",
                   "within [-1e-6, +1e-9] of the closed formula", t0)


def check_continuity(level: str = "fast") -> CheckRecord:
    """6: the t -> 0 MIN limit agrees with the value at t = 0."""
    t0 = time.perf_counter()
    worst = 0.0
    for p in (0.0, 0.3, 0.5, 0.7, 1.0):
        worst = max(worst, abs(nonlocality.min_continuity_check(p)["gap"]))
    return _record("min_continuity", worst <= 1e-8,
                   f"max extrapolation gap {worst:.3e}",
                   "no jump at t = 0 within 1e-8", t0)


def check_global_invariants(level: str = "fast") -> CheckRecord:
    """7: global negativity and global MIN are conserved by the evolution."""
    t0 = time.perf_counter()
    points = [("dim4", 0.2, 0.3), ("dim4", 0.5, 1.5), ("dim4", 0.8, 4.0),
              ("dim4", 0.95, 0.7), ("dim6", 0.0, 0.5), ("dim6", 0.6, 2.0),
              ("dim6", 1.0, 0.9), ("dim8", 0.1, 0.4), ("dim8", 0.5, 1.0),
              ("dim8", 0.9, 3.0)]
    worst_n = worst_m = 0.0
    for family, p, kt in points:
        rho4 = dynamics.evolve_four_partite(
            dynamics.family_spec(family, p), kt)
        worst_n = max(worst_n, abs(
            entanglement.negativity(rho4, monogamy.GLOBAL_CUT) - 0.5))
        worst_m = max(worst_m, abs(
            nonlocality.min_bipartition(rho4, monogamy.GLOBAL_CUT)
            - 0.5 * (1 - 2 * p + 2 * p * p)))
    passed = worst_n <= ZERO_TOL and worst_m <= ZERO_TOL
    return _record("global_invariants", passed,
                   f"negativity drift {worst_n:.3e}, MIN drift {worst_m:.3e} "
                   f"over {len(points)} points",
                   "global negativity = 0.5 and global MIN = (1-2p+2p^2)/2 "
                   "within 1e-10", t0)


def check_monogamy_scan(level: str = "fast") -> CheckRecord:
    """8: indicator sign structure over the parameter grid."""
    t0 = time.perf_counter()
    grids = monogamy.default_grids() if level == "full" else monogamy.fast_grids()
    p_grid, kt_grid = grids

    neg_mins = {}
    for family in dynamics.FAMILIES:
        neg_mins[family] = monogamy.negativity_monogamy_scan(
            family, p_grid, kt_grid)["min_value_of_indicator"]
    sq_min = monogamy.squared_min_scan(
        "dim4", p_grid, kt_grid)["min_value_of_indicator"]

    curve0 = monogamy.min_distribution_curve(0.0, kt_grid)
    curve_half = monogamy.min_distribution_curve(0.5, kt_grid)
    curve1 = monogamy.min_distribution_curve(1.0, kt_grid)
    mp0 = min(curve0)
    mp_half = min(curve_half)
    mp1 = max(abs(v) for v in curve1)

    passed = (min(neg_mins.values()) >= -1e-10 and sq_min >= -1e-9
              and mp0 >= -ZERO_TOL and mp_half < -1e-4 and mp1 < 1e-10)
    neg_txt = ", ".join(f"{f}: {v:.2e}" for f, v in neg_mins.items())
    return _record("monogamy_scan", passed,
                   f"min M ({neg_txt}); min squared-MIN {sq_min:.2e}; "
                   f"M' extremes p0 {mp0:.2e} / p0.5 {mp_half:.2e} / "
                   f"p1 {mp1:.2e}",
                   "M >= -1e-10 all families; squared-MIN >= -1e-9; M' >= 0 "
                   "at p=0 (noise floor 1e-10), < -1e-4 at p=0.5, |M'| < "
                   "1e-10 at p=1", t0)


def check_peak_census(level: str = "fast") -> CheckRecord:
    """9: peak counts of the cross-pair negativity and the p = 1 MIN overlap.

    The p = 0.5 expectation of two peaks is recorded as stated even though
    fine-resolution analysis finds the early hump merges into a shoulder
    near p = 0.47, so this check is expected to fail there; see the project
    decision log.
    """
    t0 = time.perf_counter()
    expected = {0.0: 2, 0.5: 2, 0.75: 1, 1.0: 1}
    counts = {p: monogamy.peak_census("negativity", "c1r2", p)
              for p in expected}
    gap = monogamy.min_pair_curve_gap(1.0)
    passed = counts == expected and gap < 1e-10
    counted = ", ".join(f"p={p:g}: {c}" for p, c in counts.items())
    return _record("peak_census", passed,
                   f"counts ({counted}); p=1 cross-pair MIN gap {gap:.2e}",
                   "counts 2/2/1/1 at p = 0/0.5/0.75/1; gap < 1e-10", t0)


def check_region_diagram(level: str = "fast") -> CheckRecord:
    """10: the no-negativity region matches the classifier exactly and the
    middle boundary line is time-constant."""
    t0 = time.perf_counter()
    n = 200 if level == "full" else 50
    mismatches = 0
    for p in _grid(n, 1.0):
        for kt in _grid(n, 6.0):
            region = entanglement.esd_region_classifier(p, kt)
            dead = entanglement.negativity_c1c2_closed(p, kt) <= ZERO_TOL
            if (region == "IV") != dead:
                mismatches += 1
    kt_star = math.log((3 + math.sqrt(3)) / 2)
    lam5_worst = 0.0
    for p in _grid(n, 1.0):
        par = dynamics.damping_amplitudes(kt_star)
        eigs = entanglement._pt_eigs_c1c2(p, par.xi, par.chi)
        lam5_worst = max(lam5_worst, abs(eigs[4]))
    passed = mismatches == 0 and lam5_worst <= 1e-12
    return _record("region_diagram", passed,
                   f"{mismatches} region/negativity mismatches on {n}x{n} "
                   f"grid; |middle eigenvalue| at the constant line "
                   f"{lam5_worst:.3e}",
                   "region IV iff zero negativity; line eigenvalue 0 "
                   "within 1e-12 for all p", t0)


CHECKS = (
    check_initial_maximality,
    check_esd_constants,
    check_closed_vs_numeric,
    check_min_endpoints,
    check_brute_force_oracle,
    check_continuity,
    check_global_invariants,
    check_monogamy_scan,
    check_peak_census,
    check_region_diagram,
)


def run_all(level: str = "fast") -> list:
    """Run the full battery; a crashing check becomes a failed record."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    records = []
    for check in CHECKS:
        try:
            records.append(check(level))
        except Exception as exc:  # noqa: BLE001 - report, don't abort the suite
            records.append(CheckRecord(check.__name__.removeprefix("check_"),
                                       False, f"raised {exc!r}",
                                       "check completes", 0.0))
    return records


def all_passed(records) -> bool:
    return all(r.passed for r in records)


def report_lines(records) -> list:
    lines = []
    for r in records:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name}: {r.measured}  "
                     f"(expected: {r.expected}) [{r.runtime_s:.2f}s]")
    overall = "PASS" if all_passed(records) else "FAIL"
    lines.append(f"overall: {overall} "
                 f"({sum(r.passed for r in records)}/{len(records)} checks)")
    return lines
