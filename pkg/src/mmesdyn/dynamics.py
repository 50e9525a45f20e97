"""Dissipative dynamics of entangled photon states in leaky cavities.

Two high-Q cavities, each coupled to its own zero-temperature reservoir,
start out sharing a mixed maximally entangled state (MMES): an equal-weight
mixture of two-component Bell-like states whose second mode uses photon
numbers 2(m-1) and 2m-1 for component index m.  Under amplitude damping a
cavity Fock state |n> with an empty reservoir evolves into a binomial
superposition over how many photons have leaked, with survival amplitude
xi = exp(-kappa*t/2) and leakage amplitude chi = sqrt(1 - exp(-kappa*t)).
The module builds the exact four-partite (c1, r1, c2, r2) state at any time
and the closed-form reduced matrices used by the measure modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import DensityMatrix

__all__ = [
    "ChannelParams",
    "MmesSpec",
    "FAMILY_INDICES",
    "FAMILIES",
    "damping_amplitudes",
    "family_spec",
    "build_mmes",
    "damp_fock_component",
    "evolved_components",
    "evolve_four_partite",
    "pair_state",
    "PAIR_NAMES",
    "analytic_rho_c1c2",
    "analytic_rho_c1r2",
    "swap_xi_chi",
]

MAX_FOCK = 7

# two-component mixing families studied here, keyed by the dimension of the
# second mode: component indices {1,2} -> 2x4, {1,3} -> 2x6, {1,4} -> 2x8
FAMILY_INDICES = {"dim4": (1, 2), "dim6": (1, 3), "dim8": (1, 4)}
FAMILIES = tuple(FAMILY_INDICES)

PAIR_NAMES = ("c1c2", "c1r2", "r1c2", "r1r2")
_PAIR_AXES = {"c1c2": (0, 2), "c1r2": (0, 3), "r1c2": (1, 2), "r1r2": (1, 3)}


@dataclass(frozen=True)
class ChannelParams:
    """Amplitude-damping amplitudes at dimensionless time kappa_t.

    xi is the photon survival amplitude, chi the leakage amplitude;
    xi**2 + chi**2 == 1 to within 1e-14 by construction.
    """

    kappa_t: float
    xi: float
    chi: float

    def __post_init__(self):
        if not (0.0 <= self.xi <= 1.0 and 0.0 <= self.chi <= 1.0):
            raise ValueError(f"amplitudes must lie in [0, 1]: xi={self.xi}, chi={self.chi}")
        if abs(self.xi**2 + self.chi**2 - 1.0) > 1e-14:
            raise ValueError("xi^2 + chi^2 must equal 1")


def damping_amplitudes(kappa_t: float) -> ChannelParams:
    """Survival/leakage amplitude pair for a scaled interaction time.

    Raises ValueError for negative or non-finite kappa_t.
    """
    kappa_t = float(kappa_t)
    if not math.isfinite(kappa_t) or kappa_t < 0.0:
        raise ValueError(f"kappa_t must be finite and nonnegative, got {kappa_t}")
    xi = math.exp(-kappa_t / 2.0)
    chi = math.sqrt(-math.expm1(-kappa_t))
    return ChannelParams(kappa_t, xi, chi)


@dataclass(frozen=True)
class MmesSpec:
    """Mixture weights and component indices of an MMES.

    Component m is (|0, 2(m-1)> + |1, 2m-1>)/sqrt(2); qudit_dim is derived as
    twice the largest component index, the smallest second-mode dimension that
    holds every component.
    """

    probabilities: tuple[float, ...]
    component_indices: tuple[int, ...]
    qudit_dim: int = field(init=False)

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        idx = tuple(int(i) for i in self.component_indices)
        if len(probs) != len(idx) or not probs:
            raise ValueError("probabilities and component_indices must be equal-length and nonempty")
        if any(p < 0.0 or p > 1.0 for p in probs):
            raise ValueError(f"probabilities must lie in [0, 1]: {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {sum(probs)}")
        if len(set(idx)) != len(idx) or any(i < 1 for i in idx):
            raise ValueError(f"component indices must be distinct positive integers: {idx}")
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "component_indices", idx)
        object.__setattr__(self, "qudit_dim", 2 * max(idx))


def family_spec(family: str, p: float) -> MmesSpec:
    """Two-component MmesSpec with weights (p, 1-p) for a named family."""
    if family not in FAMILY_INDICES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return MmesSpec((p, 1.0 - p), FAMILY_INDICES[family])


def _mmes_component(index: int, qudit_dim: int) -> np.ndarray:
    vec = np.zeros((2, qudit_dim))
    base = 2 * (index - 1)
    vec[0, base] = vec[1, base + 1] = 1.0 / math.sqrt(2.0)
    return vec


def build_mmes(spec: MmesSpec) -> DensityMatrix:
    """Initial 2 x qudit_dim mixed maximally entangled state."""
    d = spec.qudit_dim
    rho = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    for prob, index in zip(spec.probabilities, spec.component_indices):
        v = _mmes_component(index, d).reshape(-1)
        rho += prob * np.outer(v, v)
    return DensityMatrix(rho, (2, d), ("c1", "c2"))


def damp_fock_component(n: int, params: ChannelParams, dim: int | None = None) -> np.ndarray:
    """Joint cavity-reservoir amplitudes evolved from an n-photon Fock state.

    Returns a real (dim, dim) array out[n-j, j] = sqrt(C(n, j)) xi^(n-j) chi^j,
    the amplitude for j photons having leaked into the reservoir.  dim defaults
    to the smallest size n + 1.  n is limited to MAX_FOCK.
    """
    n = int(n)
    if not 0 <= n <= MAX_FOCK:
        raise ValueError(f"photon number must be in 0..{MAX_FOCK}, got {n}")
    if dim is None:
        dim = n + 1
    if dim < n + 1:
        raise ValueError(f"dim {dim} too small for {n} photons")
    out = np.zeros((dim, dim))
    for j in range(n + 1):
        out[n - j, j] = math.sqrt(math.comb(n, j)) * params.xi ** (n - j) * params.chi**j
    return out


def evolved_components(spec: MmesSpec, kappa_t: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Mixture weights and evolved pure components as (2, 2, d, d) tensors.

    Component m of the MMES evolves into
    (|phi_0>_{c1r1} |phi_{2m-2}>_{c2r2} + |phi_1>_{c1r1} |phi_{2m-1}>_{c2r2}) / sqrt(2)
    where phi_n is the damped n-photon amplitude tensor.  Axis order is
    (c1, r1, c2, r2).
    """
    params = damping_amplitudes(kappa_t)
    d = spec.qudit_dim
    phi0 = damp_fock_component(0, params, 2)
    phi1 = damp_fock_component(1, params, 2)
    components = []
    for index in spec.component_indices:
        low = damp_fock_component(2 * (index - 1), params, d)
        high = damp_fock_component(2 * index - 1, params, d)
        psi = (np.multiply.outer(phi0, low) + np.multiply.outer(phi1, high)) / math.sqrt(2.0)
        components.append(psi)
    return np.asarray(spec.probabilities), components


def evolve_four_partite(spec: MmesSpec, kappa_t: float) -> DensityMatrix:
    """Exact four-partite state at time kappa_t, dims (2, 2, d, d)."""
    weights, components = evolved_components(spec, kappa_t)
    d = spec.qudit_dim
    side = 4 * d * d
    rho = np.zeros((side, side), dtype=np.complex128)
    for w, psi in zip(weights, components):
        v = psi.reshape(side)
        rho += w * np.outer(v, v)
    return DensityMatrix(rho, (2, 2, d, d), ("c1", "r1", "c2", "r2"))


def pair_state(spec: MmesSpec, kappa_t: float, pair: str) -> DensityMatrix:
    """Reduced state of one cavity/reservoir pair, dims (2, d).

    Contracts the evolved pure components directly instead of assembling the
    full four-partite matrix; identical to partial_trace(evolve_four_partite)
    but much cheaper inside parameter scans.
    """
    if pair not in _PAIR_AXES:
        raise ValueError(f"unknown pair {pair!r}, expected one of {PAIR_NAMES}")
    keep = _PAIR_AXES[pair]
    weights, components = evolved_components(spec, kappa_t)
    acc = None
    for w, psi in zip(weights, components):
        ket = [0, 1, 2, 3]
        bra = [i + 4 if i in keep else i for i in range(4)]
        out = [keep[0], keep[1], keep[0] + 4, keep[1] + 4]
        red = w * np.einsum(psi, ket, psi.conj(), bra, out)
        acc = red if acc is None else acc + red
    d = spec.qudit_dim
    side = 2 * d
    labels = (pair[:2], pair[2:])
    return DensityMatrix(acc.reshape(side, side), (2, d), labels)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def analytic_rho_c1c2(p: float, kappa_t: float) -> DensityMatrix:
    """Closed-form cavity-cavity reduced state for the dim4 family.

    Sparse 8x8 matrix in the basis |c1 c2> ordered |00>, |01>, ..., |13>:
    diagonal plus the three coherences (|00><11|, |01><12|, |02><13|).
    """
    p = _check_p(p)
    par = damping_amplitudes(kappa_t)
    xi2 = par.xi**2
    chi2 = par.chi**2
    xi4, xi6, xi8 = xi2**2, xi2**3, xi2**4
    chi4, chi8 = chi2**2, chi2**4
    q = 1.0 - p

    diag = np.array([
        (p + chi4 + chi8 - p * chi8) / 2.0,
        xi2 * chi2 * (2.0 - p + 3.0 * q * chi4) / 2.0,
        q * xi4 * (1.0 + 3.0 * chi4) / 2.0,
        q * xi6 * chi2 / 2.0,
        xi2 * chi2 * (p + chi4 - p * chi4) / 2.0,
        xi4 * (p + 3.0 * q * chi4) / 2.0,
        3.0 * q * xi6 * chi2 / 2.0,
        q * xi8 / 2.0,
    ])
    rho = np.diag(diag.astype(np.complex128))
    rho[0, 5] = rho[5, 0] = xi2 * (p + math.sqrt(3.0) * q * chi4) / 2.0
    rho[1, 6] = rho[6, 1] = math.sqrt(1.5) * q * xi4 * chi2
    rho[2, 7] = rho[7, 2] = q * xi6 / 2.0
    return DensityMatrix(rho, (2, 4), ("c1", "c2"))


def analytic_rho_c1r2(p: float, kappa_t: float) -> DensityMatrix:
    """Closed-form cavity-1/reservoir-2 reduced state for the dim4 family.

    Same 8x8 sparsity pattern as analytic_rho_c1c2, basis |c1 r2>.
    """
    p = _check_p(p)
    par = damping_amplitudes(kappa_t)
    xi, chi = par.xi, par.chi
    xi2, chi2 = xi**2, chi**2
    xi4, xi8 = xi2**2, xi2**4
    chi4, chi6, chi8 = chi2**2, chi2**3, chi2**4
    q = 1.0 - p

    diag = np.array([
        (p + q * xi4) * (1.0 + xi2 * chi2) / 2.0,
        (2.0 * q * xi2 * chi2 + (p + 3.0 * q * xi4) * chi4) / 2.0,
        q * chi4 * (1.0 + 3.0 * xi2 * chi2) / 2.0,
        q * chi8 / 2.0,
        (xi8 + p * (xi4 - xi8)) / 2.0,
        xi2 * chi2 * (p + 3.0 * q * xi4) / 2.0,
        3.0 * q * xi4 * chi4 / 2.0,
        q * xi2 * chi6 / 2.0,
    ])
    rho = np.diag(diag.astype(np.complex128))
    rho[0, 5] = rho[5, 0] = xi * chi * (p + math.sqrt(3.0) * q * xi4) / 2.0
    rho[1, 6] = rho[6, 1] = math.sqrt(1.5) * q * xi**3 * chi**3
    rho[2, 7] = rho[7, 2] = q * xi * chi**5 / 2.0
    return DensityMatrix(rho, (2, 4), ("c1", "r2"))


def swap_xi_chi(measure_fn: Callable[[float, float, float], float],
                p: float, kappa_t: float) -> float:
    """Evaluate a closed-form measure with the two amplitudes interchanged.

    measure_fn takes (p, xi, chi).  Swapping survival and leakage amplitudes
    maps cavity-side quantities onto their reservoir-side mirrors, e.g. the
    reservoir-reservoir negativity from the cavity-cavity one.
    """
    par = damping_amplitudes(kappa_t)
    return measure_fn(p, par.chi, par.xi)
