"""Negativity, closed partial-transpose spectra, and sudden-death boundaries.

The closed-form spectra below are wired for the three studied mixing families
(dim4, dim6, dim8); every expression is cross-checked against the dense
eigensolver in the test suite, so the two routes stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import _check_p, damping_amplitudes, family_spec, pair_state
from .linalg import DensityMatrix, Spectrum, partial_transpose, trace_norm

NEGATIVITY_CLAMP = 1e-12

ESD_BRACKET = (1e-6, 20.0)
ESD_TIME_TOL = 1e-10

_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)
_SQRT7 = math.sqrt(7.0)


def _clamp(value: float) -> float:
    return 0.0 if value < NEGATIVITY_CLAMP else value


def negativity(rho: DensityMatrix, cut: Sequence[int]) -> float:
    """Entanglement negativity across the bipartition `cut` | rest.

    `cut` lists the subsystem positions that get transposed; the result is
    (trace norm of the partial transpose - 1)/2.  Values below
    NEGATIVITY_CLAMP are clamped to exactly 0.0 so sudden-death detection is
    deterministic.
    """
    indices = sorted({int(i) for i in cut})
    n = rho.n_subsystems
    if not indices or len(indices) == n:
        raise ValueError("cut must be a nonempty proper subset of the subsystems")
    if indices[0] < 0 or indices[-1] >= n:
        raise ValueError(f"cut indices {indices} out of range for {n} subsystems")
    pt = rho
    for k in indices:
        pt = partial_transpose(pt, k)
    return _clamp(0.5 * (trace_norm(pt) - 1.0))


def negativity_from_eigs(eigs) -> float:
    """Negativity from a full partial-transpose spectrum: -sum of negative parts."""
    total = 0.0
    for e in eigs:
        if e < 0.0:
            total -= e
    return _clamp(total)


# -- closed-form spectrum, cavity-cavity pair of the dim4 family ------------

def _pt_eigs_c1c2(p: float, xi: float, chi: float,
                  c_variant: str = "chi8") -> tuple[float, ...]:
    """The eight cavity-cavity partial-transpose eigenvalues, unsorted.

    Order: the two uncoupled populations, then the three 2x2 blocks as
    (minus, plus) pairs.  Only entries 2, 4 and 6 (0-based) can turn negative;
    the region classifier and the boundary solvers address them by position.

    c_variant selects the discriminant of the last block: "chi8" uses a
    chi**8 middle term, "chi2" a chi**2 one.  Only one of the two can agree
    with the dense eigensolver; the validation report states which (it is
    "chi8" -- with chi**2 the spectrum is wrong already at second order in
    time).
    """
    q = 1.0 - p
    x2 = xi * xi
    c2 = chi * chi
    x4 = x2 * x2
    c4 = c2 * c2
    c8 = c4 * c4
    x6 = x4 * x2

    disc_a = (1.0 - 2.0 * p) ** 2 + 24.0 * q * q * c4
    # the square on (1 - p) is forced by the 2x2 block carrying this pair:
    # with a single power the p-independent zero of lam5 and the unit initial
    # trace norm both fail against the eigensolver
    disc_b = q * q * x6 * x6 * (1.0 + c4)
    if c_variant == "chi8":
        disc_c = (p * p + q * (1.0 + (2.0 * _SQRT3 - 1.0) * p) * c4
                  + 5.0 * q * q * c8 + q * q * c4 * c8)
    elif c_variant == "chi2":
        disc_c = (p * p + q * (1.0 + (2.0 * _SQRT3 - 1.0) * p) * c4
                  + 5.0 * q * q * c2 + q * q * c4 * c8)
    else:
        raise ValueError(f"unknown c_variant: {c_variant!r}")

    root_a = math.sqrt(disc_a)
    root_b = math.sqrt(disc_b)
    root_c = math.sqrt(disc_c)

    lam1 = 0.5 * q * x4 * x4
    lam2 = 0.5 * (p + c4 + c8 - p * c8)
    lam3 = 0.25 * x4 * (1.0 + 6.0 * q * c4 - root_a)
    lam4 = 0.25 * x4 * (1.0 + 6.0 * q * c4 + root_a)
    lam5 = 0.5 * (2.0 * q * x6 * c2 - root_b)
    lam6 = 0.5 * (2.0 * q * x6 * c2 + root_b)
    lam7 = 0.5 * x2 * (c2 * (1.0 + 2.0 * q * c4) - root_c)
    lam8 = 0.5 * x2 * (c2 * (1.0 + 2.0 * q * c4) + root_c)
    return (lam1, lam2, lam3, lam4, lam5, lam6, lam7, lam8)


def pt_spectrum_c1c2_closed(p: float, kappa_t: float,
                            c_variant: str = "chi8") -> Spectrum:
    """Closed-form spectrum of the partially transposed cavity-cavity state
    (dim4 family), sorted ascending."""
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    return np.sort(np.array(_pt_eigs_c1c2(p, par.xi, par.chi, c_variant)))


def negativity_c1c2_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cavity-cavity negativity as a function of the raw damping
    amplitudes; the (p, xi, chi) signature plugs into swap_xi_chi."""
    return negativity_from_eigs(_pt_eigs_c1c2(p, xi, chi))


def negativity_c1c2_closed(p: float, kappa_t: float) -> float:
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    return negativity_c1c2_from_amps(p, par.xi, par.chi)


# -- closed-form spectrum, cavity-reservoir cross pair of the dim4 family ---

def _pt_eigs_c1r2(p: float, xi: float, chi: float) -> tuple[float, ...]:
    """The eight cross-pair partial-transpose eigenvalues, unsorted (same
    pairing convention as _pt_eigs_c1c2)."""
    q = 1.0 - p
    x2 = xi * xi
    c2 = chi * chi
    x4 = x2 * x2
    c4 = c2 * c2
    c6 = c4 * c2
    c8 = c4 * c4
    c10 = c8 * c2
    c12 = c8 * c4
    c14 = c8 * c6
    x8 = x4 * x4
    s3 = _SQRT3

    par_b1 = (7.0 - 5.0 * p) * c4 - 10.0 * q * c6 + (4.0 - 4.0 * p) * c8
    par_b2 = ((16.0 - 8.0 * s3) * p
              + (14.0 - 24.0 * (2.0 - s3) * p) * c2
              - 8.0 * (8.0 - (10.0 - 3.0 * s3) * p) * c4
              + (123.0 - (111.0 - 8.0 * s3) * p) * c6
              - (104.0 - 96.0 * p) * c8
              + 28.0 * q * c10
              + (8.0 - 8.0 * p) * c12
              - 4.0 * q * c14)
    par_b3 = -(8.0 - 7.0 * p) * c4 + 12.0 * q * c6 - 6.0 * q * c8
    # the closing term enters with a plus sign: this discriminant is the
    # (population gap)^2 + 4*(coherence)^2 of a 2x2 block and must stay
    # nonnegative, which the minus variant violates early in the evolution
    par_b4 = ((3.0 - 2.0 * p) ** 2
              - (36.0 - 2.0 * (23.0 - 6.0 * p) * p) * c2
              + (64.0 - 96.0 * p + 33.0 * p * p) * c4
              - 12.0 * q * (4.0 - 3.0 * p) * c6
              + 12.0 * q * q * c8)
    par_b5 = c8 * (9.0 * x8 + 4.0 * x2 * c2 - 6.0 * x4 * c4 + c8)

    lam1 = 0.5 * q * x2 * c6
    lam2 = 0.5 * (1.0 + x2 * c2) * (p + q * x4)
    root34 = math.sqrt(1.0 - q * c2 * par_b2)
    base34 = 1.0 - 2.0 * c2 + par_b1
    lam3 = 0.25 * (base34 - root34)
    lam4 = 0.25 * (base34 + root34)
    root56 = math.sqrt(c4 * par_b4)
    base56 = (3.0 - 2.0 * p) * c2 + par_b3
    lam5 = 0.25 * (base56 - root56)
    lam6 = 0.25 * (base56 + root56)
    root78 = math.sqrt(q * q * par_b5)
    base78 = q * c4 * (3.0 * x4 + c4)
    lam7 = 0.25 * (base78 - root78)
    lam8 = 0.25 * (base78 + root78)
    return (lam1, lam2, lam3, lam4, lam5, lam6, lam7, lam8)


def pt_spectrum_c1r2_closed(p: float, kappa_t: float) -> Spectrum:
    """Closed-form spectrum of the partially transposed cavity/far-reservoir
    state (dim4 family), sorted ascending."""
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    return np.sort(np.array(_pt_eigs_c1r2(p, par.xi, par.chi)))


def negativity_c1r2_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cross-pair negativity from raw amplitudes (swap-ready)."""
    return negativity_from_eigs(_pt_eigs_c1r2(p, xi, chi))


def negativity_c1r2_closed(p: float, kappa_t: float) -> float:
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    return negativity_c1r2_from_amps(p, par.xi, par.chi)


# -- dim6 family: the four sign-changing eigenvalues ------------------------

def negative_eigs_dim6_closed(p: float, kappa_t: float) -> np.ndarray:
    """The four cavity-cavity partial-transpose eigenvalues of the dim6
    family that can turn negative.

    Order: the three (1 - p)-weighted candidates (which share the
    p-independent root chi**4 = 1/5), then the mixing-branch eigenvalue whose
    root carries the p dependence.  Each entry matches one eigenvalue of the
    12x12 partial transpose; the other eight stay nonnegative.
    """
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    xi, chi = par.xi, par.chi
    q = 1.0 - p
    x2 = xi * xi
    c2 = chi * chi
    c4 = c2 * c2
    c8 = c4 * c4
    x4 = x2 * x2
    x6 = x4 * x2
    x8 = x4 * x4

    lam_a = 0.5 * q * x8 * x2 * (3.0 * c2 - math.sqrt(1.0 + 4.0 * c4))
    lam_b = 0.25 * q * x8 * (1.0 + 15.0 * c4
                             - math.sqrt(1.0 + 70.0 * c4 + 25.0 * c8))
    lam_c = q * x6 * c2 * (1.0 + 5.0 * c4 - math.sqrt(1.0 + 15.0 * c4))
    h1 = x4 * (p * p + 2.0 * _SQRT5 * q * p * c8
               + q * q * (4.0 * c4 * c8 + 13.0 * c8 * c8 + 4.0 * c8 * c8 * c4))
    lam_d = 0.5 * (x2 * c2 * (c4 * (2.0 + 3.0 * c4)
                              + p * (1.0 - 2.0 * c4 - 3.0 * c8))
                   - math.sqrt(h1))
    return np.array([lam_a, lam_b, lam_c, lam_d])


def negativity_dim6_closed(p: float, kappa_t: float) -> float:
    """Closed-form cavity-cavity negativity of the dim6 family."""
    return negativity_from_eigs(negative_eigs_dim6_closed(p, kappa_t))


# -- sudden-death boundaries -------------------------------------------------

@dataclass(frozen=True)
class EsdCase:
    """Sudden-death geometry of one mixing family.

    For dim6/dim8 the boundary is flat below threshold_p (all boundary
    eigenvalues vanish at the same leak fraction, chi**4 = 1/5 resp. 1/7);
    dim4 has no flat segment, so both extras are None there.
    """

    system: str
    threshold_p: float | None
    plateau_time: float | None


ESD_CASES = {
    "dim4": EsdCase("dim4", None, None),
    "dim6": EsdCase("dim6", (347.0 - 125.0 * _SQRT5) / 1922.0,
                    math.log((5.0 + _SQRT5) / 4.0)),
    "dim8": EsdCase("dim8", (8669.0 - 2401.0 * _SQRT7) / 370191.0,
                    math.log((7.0 + _SQRT7) / 6.0)),
}

ESD_TIME_DIM4_P0 = math.log((3.0 + _SQRT3) / 2.0)


def esd_case(system) -> EsdCase:
    if isinstance(system, EsdCase):
        return system
    try:
        return ESD_CASES[system]
    except KeyError:
        raise ValueError(f"unknown family: {system!r}") from None


def _mixing_branch_eig(rho_pair: DensityMatrix) -> float:
    """Smaller eigenvalue of the partial-transpose block that couples the
    two single-excitation populations through the double-occupation
    coherence.

    This is the only 2x2 block whose zero crossing depends on the mixing
    probability beyond the shared plateau, in every family; computing it
    straight from the matrix elements gives a branch-resolved boundary
    detector that needs no closed form.
    """
    d = rho_pair.dims[1]
    m = rho_pair.data
    d1 = m[d, d].real
    d2 = m[1, 1].real
    g = m[0, d + 1].real
    return 0.5 * (d1 + d2) - math.hypot(0.5 * (d1 - d2), g)


def _bisect_time(f: Callable[[float], float], lo: float, hi: float,
                 tol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo >= 0.0 or fhi <= 0.0:
        raise ValueError("boundary bracket does not straddle a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def esd_boundary(system, p: float) -> float:
    """Time at which the cavity-cavity entanglement of the family dies.

    p = 1 (pure Bell limit) never loses entanglement at finite time and
    returns math.inf.  For dim6/dim8 with p at or below the family threshold
    the boundary sits on the p-independent plateau; beyond it the mixing
    branch is tracked, by closed form (dim4, dim6) or numerically from the
    pair state (dim8).
    """
    case = esd_case(system)
    _check_p(p)
    if p == 1.0:
        return math.inf
    if case.threshold_p is not None and p <= case.threshold_p:
        return case.plateau_time

    if case.system == "dim4":
        def branch(kt: float) -> float:
            par = damping_amplitudes(kt)
            return _pt_eigs_c1c2(p, par.xi, par.chi)[6]
    elif case.system == "dim6":
        def branch(kt: float) -> float:
            return float(negative_eigs_dim6_closed(p, kt)[3])
    else:
        spec = family_spec(case.system, p)

        def branch(kt: float) -> float:
            return _mixing_branch_eig(pair_state(spec, kt, "c1c2"))

    lo, hi = ESD_BRACKET
    return _bisect_time(branch, lo, hi, ESD_TIME_TOL)


def esd_threshold_recovered(system) -> float:
    """Recover the plateau/branch intersection probability numerically.

    Solves, in p, for the mixing-branch eigenvalue to vanish exactly at the
    plateau time; above the root the branch outlives the plateau.  Agreement
    with EsdCase.threshold_p validates the stated closed-form constants.
    """
    case = esd_case(system)
    if case.plateau_time is None:
        raise ValueError("dim4 has no plateau to intersect")
    t_star = case.plateau_time

    if case.system == "dim6":
        def branch_at_plateau(p: float) -> float:
            return float(negative_eigs_dim6_closed(p, t_star)[3])
    else:
        def branch_at_plateau(p: float) -> float:
            return _mixing_branch_eig(
                pair_state(family_spec(case.system, p), t_star, "c1c2"))

    lo, hi = 1e-4, 0.2  # the branch value decreases through 0 as p grows
    if branch_at_plateau(lo) <= 0.0 or branch_at_plateau(hi) >= 0.0:
        raise ValueError("threshold bracket does not straddle a sign change")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if branch_at_plateau(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def esd_line_p(system, kappa_t: float) -> float:
    """Probability on the sudden-death line at a given time (closed form).

    Defined only on the line's own parameter range (at and beyond the
    earliest death time of the family); used to cross-check the bisection
    route, not to drive it.
    """
    case = esd_case(system)
    par = damping_amplitudes(kappa_t)
    u = par.chi ** 4

    if case.system == "dim4":
        disc = 3.0 - 2.0 * _SQRT3 + 4.0 * (2.0 - _SQRT3) * u + u * u
        num = 1.0 - _SQRT3 + 3.0 * u - 3.0 * u * u + math.sqrt(disc)
        den = 1.0 - 2.0 * _SQRT3 + 1.0 / u + 5.0 * u - 3.0 * u * u
        return num / den
    if case.system == "dim6":
        c4 = u
        c8 = c4 * c4
        c12 = c8 * c4
        c16 = c8 * c8
        c20 = c16 * c4
        j1 = 4.0 - 2.0 * _SQRT5 + 3.0 * (3.0 - _SQRT5) * c4 + 2.0 * c8
        j2 = 2.0 - _SQRT5 + 3.0 * c4 + c8 - 5.0 * c12
        num = math.sqrt(2.0) * c8 * math.sqrt(j1) + c8 * j2
        den = (1.0 - c4 + 2.0 * (2.0 - _SQRT5) * c8 + 6.0 * c12 + c16
               - 5.0 * c20)
        return num / den
    c4 = u
    c8 = c4 * c4
    c12 = c8 * c4
    c16 = c8 * c8
    c24 = c12 * c12
    c28 = c24 * c4
    k1 = 3.0 - _SQRT7 + 4.0 * c4 + c12 - 7.0 * c16
    k2 = 15.0 - 6.0 * _SQRT7 + 8.0 * (4.0 - _SQRT7) * c4 + 9.0 * c8
    num = c12 * (k1 + math.sqrt(k2))
    den = 1.0 - c4 + 2.0 * (3.0 - _SQRT7) * c12 + 8.0 * c16 + c24 - 7.0 * c28
    return num / den


# -- region classifier (dim4) ------------------------------------------------

REGION_LABELS = ("I", "II", "III", "IV")


def esd_region_classifier(p: float, kappa_t: float, *,
                          zero_tol: float = 1e-10) -> str:
    """Label a (p, kappa_t) point of the dim4 family by how many of the three
    sign-changing partial-transpose eigenvalues are negative: three -> "I",
    two -> "II", one -> "III", none -> "IV" (zero negativity).

    The three eigenvalues vanish in a fixed nested order as time grows, so
    counting reduces to checking them from the innermost out.
    """
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    eigs = _pt_eigs_c1c2(p, par.xi, par.chi)
    lam3, lam5, lam7 = eigs[2], eigs[4], eigs[6]
    total_neg = -(min(lam3, 0.0) + min(lam5, 0.0) + min(lam7, 0.0))
    if total_neg <= zero_tol:
        return "IV"
    if lam3 < 0.0:
        return "I"
    if lam5 < 0.0:
        return "II"
    return "III"
