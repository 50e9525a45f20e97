"""Correlation-distribution indicators across the four-partite system.

Quantifies how entanglement negativity and measurement-induced nonlocality
(MIN) spread over the four parties: the squared-negativity indicator across
the (cavity pair) | (reservoir pair) split, the MIN distribution indicator,
a numerical squared-MIN scan, and the per-pair measure panels behind the
time-evolution figures.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dynamics import (
    PAIR_NAMES,
    damping_amplitudes,
    evolve_four_partite,
    family_spec,
    pair_state,
)
from .entanglement import (
    negativity,
    negativity_c1c2_from_amps,
    negativity_c1r2_from_amps,
)
from .nonlocality import (
    min_bipartition,
    min_c1r2_from_amps,
    min_luo_fu,
)

# subsystem axes of the four-partite state are (c1, r1, c2, r2); the global
# bipartition groups the first cavity with its reservoir against the rest
GLOBAL_CUT = (0, 1)

WORKER_ENV = "MMESDYN_WORKERS"

ESB_THRESHOLD = 1e-10
ESB_TIME_TOL = 1e-8

PEAK_GRID_STEP = 1e-3
PEAK_GRID_SPAN = 6.0
PEAK_PLATEAU_TOL = 1e-12
PEAK_VALUE_CLAMP = 1e-12


@dataclass(frozen=True)
class DistributionPanel:
    """All correlation measures of one (p, kappa_t) point in one record.

    pairwise maps each pair label to a (negativity, min) tuple; the two
    indicator fields are the squared-negativity balance and the MIN
    distribution balance across the global cut.
    """

    p: float
    kappa_t: float
    pairwise: dict
    global_negativity: float
    global_min: float
    m_indicator: float
    m_prime_indicator: float


def distribution_panel(p: float, kappa_t: float,
                       family: str = "dim4") -> DistributionPanel:
    """Evaluate every pairwise and global measure at one parameter point."""
    spec = family_spec(family, p)
    rho4 = evolve_four_partite(spec, kappa_t)
    pairwise = {}
    for pair in PAIR_NAMES:
        rho = pair_state(spec, kappa_t, pair)
        pairwise[pair] = (negativity(rho, (0,)), min_luo_fu(rho))
    global_negativity = negativity(rho4, GLOBAL_CUT)
    global_min = min_bipartition(rho4, GLOBAL_CUT)
    m_indicator = 0.25 - sum(nv * nv for nv, _ in pairwise.values())
    m_prime = global_min - sum(mv for _, mv in pairwise.values())
    return DistributionPanel(p, kappa_t, pairwise, global_negativity,
                             global_min, m_indicator, m_prime)


# -- negativity distribution ---------------------------------------------------

def negativity_monogamy(p: float, kappa_t: float, family: str = "dim4") -> float:
    """Squared-negativity indicator: (global negativity)^2 minus the four
    squared pairwise negativities, all pairs evaluated numerically.

    The global negativity across the cut is 0.5 at every time (the evolution
    is local to each side of the cut), so its square enters as the constant
    1/4.  Nonnegative everywhere when the squared negativity is monogamous.
    """
    spec = family_spec(family, p)
    total = 0.25
    for pair in PAIR_NAMES:
        n_pair = negativity(pair_state(spec, kappa_t, pair), (0,))
        total -= n_pair * n_pair
    return total


def negativity_monogamy_closed(p: float, kappa_t: float) -> float:
    """Same indicator assembled from the closed-form pair negativities.

    Only the qudit-dimension-4 family has printed closed forms; the two
    reservoir-side pairs follow from the cavity-side ones by interchanging
    the survival and leakage amplitudes.
    """
    par = damping_amplitudes(kappa_t)
    n_cc = negativity_c1c2_from_amps(p, par.xi, par.chi)
    n_cr = negativity_c1r2_from_amps(p, par.xi, par.chi)
    n_rc = negativity_c1r2_from_amps(p, par.chi, par.xi)
    n_rr = negativity_c1c2_from_amps(p, par.chi, par.xi)
    return 0.25 - n_cc * n_cc - n_cr * n_cr - n_rc * n_rc - n_rr * n_rr


# -- MIN distribution -----------------------------------------------------------

def min_distribution(p: float, kappa_t: float, family: str = "dim4") -> float:
    """MIN distribution indicator: global MIN minus the four pairwise MINs.

    Everything is computed numerically from the evolved four-partite state,
    so this works for all three families.  The result may take either sign;
    a negative value signals polygamous MIN sharing.
    """
    spec = family_spec(family, p)
    rho4 = evolve_four_partite(spec, kappa_t)
    total = min_bipartition(rho4, GLOBAL_CUT)
    for pair in PAIR_NAMES:
        total -= min_luo_fu(pair_state(spec, kappa_t, pair))
    return total


def min_distribution_closed(p: float, kappa_t: float,
                            family: str = "dim4") -> float:
    """Closed form of the MIN distribution indicator, dim4 family only.

    q xi^2 chi^2 (g1 - sqrt(3) p) with g1 = q (1 - chi^2 + chi^4), q = 1 - p.
    The sign of (g1 - sqrt(3) p) decides monogamous versus polygamous
    sharing; the prefactor vanishes at both time endpoints and at p = 1.
    """
    if family != "dim4":
        raise ValueError("no closed distribution form beyond the dim4 family; "
                         "use min_distribution for dim6/dim8")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    par = damping_amplitudes(kappa_t)
    q = 1.0 - p
    c2 = par.chi * par.chi
    g1 = q * (1.0 - c2 + c2 * c2)
    return q * par.xi * par.xi * c2 * (g1 - math.sqrt(3.0) * p)


def squared_min_indicator(p: float, kappa_t: float,
                          family: str = "dim4") -> float:
    """(global MIN)^2 minus the sum of squared pairwise MINs at one point."""
    spec = family_spec(family, p)
    rho4 = evolve_four_partite(spec, kappa_t)
    total = min_bipartition(rho4, GLOBAL_CUT) ** 2
    for pair in PAIR_NAMES:
        total -= min_luo_fu(pair_state(spec, kappa_t, pair)) ** 2
    return total


# -- grid scans ------------------------------------------------------------------

def worker_count() -> int:
    """Parallel width for grid scans, from the environment or machine size."""
    raw = os.environ.get(WORKER_ENV)
    if raw is not None and raw.strip():
        n = int(raw)
        if n < 1:
            raise ValueError(f"{WORKER_ENV} must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


def _map_points(fn, points):
    # order-preserving map; each point is pure, so any worker count yields
    # the identical result list
    points = list(points)
    workers = worker_count()
    if workers <= 1 or len(points) < 2 * workers:
        return [fn(pt) for pt in points]
    chunk = max(1, len(points) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points, chunksize=chunk))


def _sq_min_point(args):
    family, p, kt = args
    return squared_min_indicator(p, kt, family)


def _neg_mono_point(args):
    family, p, kt = args
    return negativity_monogamy(p, kt, family)


def _min_dist_point(args):
    family, p, kt = args
    return min_distribution(p, kt, family)


def _scan_report(points, values) -> dict:
    # reduce by the (value, p, kt) key so ties resolve lexicographically and
    # the report never depends on evaluation order
    best = None
    for (_family, p, kt), val in zip(points, values):
        key = (val, p, kt)
        if best is None or key < best:
            best = key
    return {"min_value_of_indicator": best[0], "argmin": (best[1], best[2])}


def _grid_points(family: str, p_grid, kt_grid):
    p_list = [float(v) for v in p_grid]
    kt_list = [float(v) for v in kt_grid]
    if not p_list or not kt_list:
        raise ValueError("scan grids must be nonempty")
    return [(family, p, kt) for p in p_list for kt in kt_list]


def squared_min_scan(family: str, p_grid, kt_grid) -> dict:
    """Scan the squared-MIN indicator over a grid; report its minimum.

    Returns {"min_value_of_indicator": value, "argmin": (p, kappa_t)}.  A
    minimum at or above roughly -1e-9 supports monogamy of the squared MIN;
    no analytic proof is attempted.
    """
    points = _grid_points(family, p_grid, kt_grid)
    return _scan_report(points, _map_points(_sq_min_point, points))


def negativity_monogamy_scan(family: str, p_grid, kt_grid) -> dict:
    """Scan the squared-negativity indicator over a grid; report its minimum."""
    points = _grid_points(family, p_grid, kt_grid)
    return _scan_report(points, _map_points(_neg_mono_point, points))


def min_distribution_curve(p: float, kt_grid, family: str = "dim4") -> list:
    """MIN distribution indicator along a time grid at fixed p."""
    points = [(family, float(p), float(kt)) for kt in kt_grid]
    return _map_points(_min_dist_point, points)


def default_grids() -> tuple:
    """Full scan grids: p in steps of 0.01, kappa_t in steps of 0.02 up to 6
    plus a sparse late-time tail.  Built from integer indices so repeated
    runs construct bit-identical grids."""
    p_grid = [i / 100.0 for i in range(101)]
    kt_grid = [i * 0.02 for i in range(301)] + [8.0, 10.0, 15.0, 20.0]
    return p_grid, kt_grid


def fast_grids() -> tuple:
    """Coarse counterpart of default_grids for quick validation runs."""
    p_grid = [i / 10.0 for i in range(11)]
    kt_grid = [i * 0.25 for i in range(25)] + [8.0, 20.0]
    return p_grid, kt_grid


# -- curve census ------------------------------------------------------------------

def _count_strict_maxima(values, tol: float = PEAK_PLATEAU_TOL) -> int:
    # compress neighbors equal within tol into one run, then require a run
    # strictly above both neighbors; boundary runs never count
    runs = []
    for v in values:
        if runs and abs(v - runs[-1]) <= tol:
            continue
        runs.append(v)
    count = 0
    for k in range(1, len(runs) - 1):
        if runs[k] > runs[k - 1] and runs[k] > runs[k + 1]:
            count += 1
    return count


def peak_census(measure: str, pair: str, p: float) -> int:
    """Count strict local maxima of a measure of the cavity-reservoir cross
    pair as a function of time, dim4 family.

    Samples the closed-form curve on [0, 6] with step 1e-3, clamps values
    below 1e-12 to exactly 0 so dead intervals are flat, merges plateaus,
    and excludes both endpoints.
    """
    if pair != "c1r2":
        raise ValueError(f"peak census is defined for the c1r2 pair, got {pair!r}")
    if measure not in ("negativity", "min"):
        raise ValueError(f"measure must be 'negativity' or 'min', got {measure!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n = int(round(PEAK_GRID_SPAN / PEAK_GRID_STEP))
    values = []
    for i in range(n + 1):
        par = damping_amplitudes(i * PEAK_GRID_STEP)
        if measure == "negativity":
            v = negativity_c1r2_from_amps(p, par.xi, par.chi)
        else:
            v = min_c1r2_from_amps(p, par.xi, par.chi)
        values.append(0.0 if v < PEAK_VALUE_CLAMP else v)
    return _count_strict_maxima(values)


def min_pair_curve_gap(p: float, kt_grid=None, family: str = "dim4") -> float:
    """Largest pointwise gap between the MINs of the two cross pairs.

    Both curves are evaluated numerically.  At p = 1 the two pairs play
    symmetric roles and the gap collapses to rounding noise.
    """
    if kt_grid is None:
        kt_grid = [i * 0.01 for i in range(601)]
    spec = family_spec(family, p)
    gap = 0.0
    for kt in kt_grid:
        a = min_luo_fu(pair_state(spec, kt, "c1r2"))
        b = min_luo_fu(pair_state(spec, kt, "r1c2"))
        gap = max(gap, abs(a - b))
    return gap


def esb_time(p: float, family: str = "dim4") -> float:
    """Time at which the reservoir-reservoir negativity first rises above
    1e-10 (entanglement sudden birth), refined by bisection to 1e-8.

    The phenomenon has no printed formula; this is a pure grid-plus-bisection
    detector on the numerically evolved pair state.
    """
    spec = family_spec(family, p)

    def born(kt: float) -> bool:
        return negativity(pair_state(spec, kt, "r1r2"), (0,)) > ESB_THRESHOLD

    step = 0.01
    lo = 0.0
    hi = None
    for i in range(1, 2001):
        kt = i * step
        if born(kt):
            hi = kt
            break
        lo = kt
    if hi is None:
        raise RuntimeError(f"no sudden birth below kappa_t = 20 at p = {p}")
    while hi - lo > ESB_TIME_TOL:
        mid = 0.5 * (lo + hi)
        if born(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
