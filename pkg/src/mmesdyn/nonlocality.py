"""Measurement-induced nonlocality for qubit x qudit states.

Three independent routes are kept side by side: the closed two-branch
formula evaluated from correlation invariants (min_luo_fu), the printed
closed-form evolutions for the studied families (min_closed_form), and a
direct maximization over marginal-preserving measurements (min_brute_force).
The test suite plays them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import _check_p, build_mmes, damping_amplitudes, family_spec
from .linalg import DensityMatrix, eigvals_hermitian, hs_norm_sq, purity

X_TOL = 1e-9
SUPPORT_TOL = 1e-12

_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)
_SQRT7 = math.sqrt(7.0)

PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
)


# -- operator bases ----------------------------------------------------------

def ggm_basis(d: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Generalized Gell-Mann basis for dimension d: the d^2 - 1 traceless
    Hermitian operators plus the identity companion I/sqrt(d).

    Order: symmetric pair operators (lexicographic j < k), antisymmetric pair
    operators, then the diagonal family.  Everything is normalized to unit
    Hilbert-Schmidt norm, so together with the companion they form an
    orthonormal operator basis.
    """
    if not 2 <= d <= 8:
        raise ValueError(f"ggm_basis supports 2 <= d <= 8, got {d}")
    ops: list[np.ndarray] = []
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = m[k, j] = inv_sqrt2
            ops.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = -1.0j * inv_sqrt2
            m[k, j] = 1.0j * inv_sqrt2
            ops.append(m)
    for l in range(1, d):
        # entries 1,...,1,-l then zeros, divided by sqrt(l(l+1)) so the
        # l = 1 member is well defined and unit-normalized
        v = np.zeros(d)
        v[:l] = 1.0
        v[l] = -float(l)
        ops.append(np.diag(v / math.sqrt(l * (l + 1.0))).astype(np.complex128))
    companion = np.eye(d, dtype=np.complex128) / math.sqrt(d)
    return ops, companion


def pauli_pauli_basis() -> tuple[list[np.ndarray], np.ndarray]:
    """Two-qubit product-Pauli basis for d = 4: the 15 operators
    (sigma_a x sigma_b)/2 with (a, b) != (0, 0), ordered by index 4a + b,
    plus the identity companion I/2."""
    ops = []
    for a in range(4):
        for b in range(4):
            if a == 0 and b == 0:
                continue
            ops.append(np.kron(PAULI[a], PAULI[b]) / 2.0)
    return ops, np.eye(4, dtype=np.complex128) / 2.0


def _b_side_basis(basis_tag: str, d: int):
    if basis_tag == "ggm":
        return ggm_basis(d)
    if basis_tag == "pauli_pauli":
        if d != 4:
            raise ValueError("pauli_pauli basis exists only for d = 4")
        return pauli_pauli_basis()
    raise ValueError(f"unknown basis_tag: {basis_tag!r}")


# -- Bloch decomposition -----------------------------------------------------

@dataclass(frozen=True)
class BlochForm:
    """Local vectors and correlation matrix of a qubit x qudit state in an
    orthonormal product-operator basis."""

    x: np.ndarray          # (3,) qubit-side vector
    y: np.ndarray          # (d^2-1,) qudit-side vector
    corr: np.ndarray       # (3, d^2-1) correlation matrix
    basis_tag: str


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction of a qubit von Neumann measurement."""

    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if n.shape != (3,) or abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
            raise ValueError("measurement direction must be a unit 3-vector")
        n.setflags(write=False)
        object.__setattr__(self, "n", n)


def _require_2xd(rho: DensityMatrix) -> int:
    if rho.n_subsystems != 2 or rho.dims[0] != 2:
        raise ValueError(f"expected a qubit x qudit state, got dims {rho.dims}")
    return rho.dims[1]


def bloch_decompose(rho: DensityMatrix, basis_tag: str = "ggm") -> BlochForm:
    """Expand a 2 x d state over sigma_i/sqrt(2) and the chosen d-side basis:
    x_i = tr[rho (X_i x I/sqrt(d))], y_j = tr[rho (I/sqrt(2) x Y_j)],
    corr_ij = tr[rho (X_i x Y_j)]."""
    d = _require_2xd(rho)
    ys, companion = _b_side_basis(basis_tag, d)
    xs = [s / math.sqrt(2.0) for s in PAULI[1:]]
    eye_b = np.eye(d) / math.sqrt(d)
    eye_a = PAULI[0] / math.sqrt(2.0)
    m = rho.data
    x = np.array([np.trace(np.kron(xi, eye_b) @ m).real for xi in xs])
    y = np.array([np.trace(np.kron(eye_a, yj) @ m).real for yj in ys])
    corr = np.array([[np.trace(np.kron(xi, yj) @ m).real for yj in ys]
                     for xi in xs])
    return BlochForm(x, y, corr, basis_tag)


def bloch_reconstruct(form: BlochForm) -> np.ndarray:
    """Rebuild the density matrix from its Bloch data (exact inverse of
    bloch_decompose for any valid input)."""
    d = int(round(math.sqrt(form.y.size + 1)))
    ys, _ = _b_side_basis(form.basis_tag, d)
    xs = [s / math.sqrt(2.0) for s in PAULI[1:]]
    eye_b = np.eye(d) / math.sqrt(d)
    eye_a = PAULI[0] / math.sqrt(2.0)
    out = np.kron(eye_a, eye_b) / math.sqrt(2.0 * d)
    for i, xi in enumerate(xs):
        out = out + form.x[i] * np.kron(xi, eye_b)
    for j, yj in enumerate(ys):
        out = out + form.y[j] * np.kron(eye_a, yj)
    for i, xi in enumerate(xs):
        for j, yj in enumerate(ys):
            out = out + form.corr[i, j] * np.kron(xi, yj)
    return out


# -- the closed two-branch formula -------------------------------------------

def _pauli_correlation_ops(rho: DensityMatrix) -> list[np.ndarray]:
    """R_i = tr_A[(sigma_i/sqrt(2) x I) rho]: everything the correlation
    matrix can see of the qudit side, without picking a qudit basis."""
    d = rho.dims[1]
    t = rho.data.reshape(2, d, 2, d)
    return [np.einsum("ac,cbad->bd", sig / math.sqrt(2.0), t)
            for sig in PAULI[1:]]


def min_luo_fu(rho: DensityMatrix) -> float:
    """Measurement-induced nonlocality of a 2 x d state.

    Uses the correlation-invariant form: with M = T T^t (3 x 3, assembled
    basis-free from the R_i via Parseval), the value is tr M minus either the
    component along the qubit Bloch vector (when it is nonzero) or the
    smallest eigenvalue of M (degenerate marginal).
    """
    d = _require_2xd(rho)
    rs = _pauli_correlation_ops(rho)
    traces = np.array([np.trace(r).real for r in rs])
    m = np.empty((3, 3))
    for i in range(3):
        for k in range(i, 3):
            val = np.vdot(rs[k], rs[i]).real - traces[i] * traces[k] / d
            m[i, k] = m[k, i] = val
    x = traces / math.sqrt(d)
    x_norm = float(np.linalg.norm(x))
    if x_norm > X_TOL:
        xhat = x / x_norm
        value = float(np.trace(m) - xhat @ m @ xhat)
    else:
        value = float(np.trace(m) - eigvals_hermitian(m)[0])
    return value if value > 0.0 else 0.0


def min_bipartition(rho: DensityMatrix, a_side) -> float:
    """MIN across the bipartition a_side | rest of a multipartite state whose
    a_side marginal has rank at most 2.

    Marginal-preserving rank-1 measurements must be eigenbases of the a_side
    marginal, and its kernel projectors annihilate the state, so the problem
    collapses exactly onto the 2-dimensional support: rotate it onto a qubit
    and hand over to min_luo_fu.  Rank 1 means the state is a product across
    the cut (MIN 0); rank above 2 is out of scope and raises.
    """
    n = rho.n_subsystems
    a = sorted({int(i) for i in a_side})
    if not a or len(a) == n:
        raise ValueError("a_side must be a nonempty proper subset")
    if a[0] < 0 or a[-1] >= n:
        raise ValueError(f"a_side indices {a} out of range")
    b = [i for i in range(n) if i not in a]
    dims = rho.dims
    da = int(np.prod([dims[i] for i in a]))
    db = int(np.prod([dims[i] for i in b]))
    perm = a + b
    tens = rho.data.reshape(dims + dims)
    mat = tens.transpose(perm + [i + n for i in perm]).reshape(da, db, da, db)

    rho_a = np.einsum("abcb->ac", mat)
    evals, evecs = np.linalg.eigh(rho_a)
    rank = int(np.sum(evals > SUPPORT_TOL))
    if rank > 2:
        raise ValueError("a_side marginal has rank above 2; the qubit-side "
                         "formula does not apply")
    if rank <= 1:
        return 0.0
    v = evecs[:, -2:]  # isometry onto the 2-dimensional support
    restricted = np.einsum("ak,abcd,cl->kbld", v.conj(), mat, v)
    reduced = DensityMatrix(restricted.reshape(2 * db, 2 * db), (2, db))
    return min_luo_fu(reduced)


# -- closed-form evolutions ----------------------------------------------------

def min_c1c2_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cavity-cavity MIN of the dim4 family from raw amplitudes
    (swap-ready signature)."""
    x4 = xi ** 4
    c4 = chi ** 4
    f = x4 * x4 + 6.0 * x4 * c4 + 3.0 * c4 * c4
    g = _SQRT3 * c4
    return 0.5 * x4 * (f - 2.0 * p * (f - g) + p * p * (1.0 - 2.0 * g + f))


def min_c1r2_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cavity/far-reservoir MIN of the dim4 family (swap-ready)."""
    q = 1.0 - p
    x4 = xi ** 4
    c4 = chi ** 4
    f1 = (3.0 * x4 * x4 + 6.0 * x4 * c4 + c4 * c4) * q * q
    return 0.5 * xi * xi * chi * chi * (p * p + 2.0 * _SQRT3 * p * q * x4 + f1)


def min_dim6_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cavity-cavity MIN of the dim6 family (swap-ready)."""
    q = 1.0 - p
    x4 = xi ** 4
    x8 = x4 * x4
    x12 = x8 * x4
    x16 = x8 * x8
    c4 = chi ** 4
    c8 = c4 * c4
    c12 = c8 * c4
    c16 = c8 * c8
    l1 = 2.0 * q * (_SQRT5 * p + 30.0 * q * x8) * c8
    l2 = q * q * (20.0 * x12 * c4 + 40.0 * x4 * c12 + 5.0 * c16)
    return 0.5 * x4 * (x16 + p * (p - (2.0 - p) * x16) + l1 + l2)


def min_dim8_from_amps(p: float, xi: float, chi: float) -> float:
    """Closed-form cavity-cavity MIN of the dim8 family (swap-ready)."""
    q = 1.0 - p
    x4 = xi ** 4
    x8 = x4 * x4
    x12 = x8 * x4
    x16 = x8 * x8
    x20 = x16 * x4
    x24 = x12 * x12
    c4 = chi ** 4
    c8 = c4 * c4
    c12 = c8 * c4
    c16 = c8 * c8
    c20 = c16 * c4
    c24 = c12 * c12
    l3 = (p * (p - (2.0 - p) * x24)
          + 2.0 * q * (_SQRT7 * p + 350.0 * q * x12) * c12)
    l4 = (42.0 * x20 * c4 + 315.0 * x16 * c8 + 525.0 * x8 * c16
          + 126.0 * x4 * c20 + 7.0 * c24)
    return 0.5 * x4 * (x24 + l3 + q * q * l4)


def min_initial(p: float) -> float:
    """MIN of every undamped family state: (p - 1/2)^2 + 1/4, half the purity."""
    return (p - 0.5) ** 2 + 0.25


def min_global_closed(p: float) -> float:
    """MIN across the near|far bipartition of the evolved four-partite state;
    the evolution is a local unitary on that cut, so the value stays at its
    initial (1 - 2p + 2p^2)/2 for all times."""
    return 0.5 * (1.0 - 2.0 * p + 2.0 * p * p)


_CLOSED_FAMILIES = ("c1c2_dim4", "c1r2_dim4", "global", "c1c2_dim6",
                    "c1c2_dim8", "initial")


def min_closed_form(family: str, p: float, kappa_t: float) -> float:
    """Dispatch the printed closed-form MIN evolutions by family label."""
    _check_p(p)
    par = damping_amplitudes(kappa_t)
    if family == "c1c2_dim4":
        return min_c1c2_from_amps(p, par.xi, par.chi)
    if family == "c1r2_dim4":
        return min_c1r2_from_amps(p, par.xi, par.chi)
    if family == "global":
        return min_global_closed(p)
    if family == "c1c2_dim6":
        return min_dim6_from_amps(p, par.xi, par.chi)
    if family == "c1c2_dim8":
        return min_dim8_from_amps(p, par.xi, par.chi)
    if family == "initial":
        return min_initial(p)
    raise ValueError(f"unknown closed-form family: {family!r}")


# -- brute-force measurement oracle -------------------------------------------

def _disturbance(rho: DensityMatrix, n: np.ndarray) -> float:
    """Squared Hilbert-Schmidt displacement caused by measuring the qubit
    along Bloch direction n."""
    d = rho.dims[1]
    proj_up = 0.5 * (PAULI[0] + n[0] * PAULI[1] + n[1] * PAULI[2]
                     + n[2] * PAULI[3])
    proj_dn = PAULI[0] - proj_up
    eye_b = np.eye(d, dtype=np.complex128)
    a = np.kron(proj_up, eye_b)
    b = np.kron(proj_dn, eye_b)
    m = rho.data
    measured = a @ m @ a + b @ m @ b
    return hs_norm_sq(m - measured)


def _sphere_direction(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi),
                     math.cos(theta)])


def _golden_max(f, lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = f(d)
    mid = 0.5 * (lo + hi)
    return mid, f(mid)


def min_brute_force(rho: DensityMatrix, n_grid: int = 4096) -> float:
    """Maximize the measurement disturbance directly over marginal-preserving
    qubit von Neumann measurements.

    A qubit marginal with nonzero Bloch vector admits exactly one preserving
    measurement (along the vector), so that case is a single evaluation.  A
    degenerate marginal admits every direction; those are scanned on a
    Fibonacci sphere lattice of n_grid points and polished with two rounds of
    golden-section refinement on the spherical coordinates.  Every candidate
    is an exact disturbance, so the result can only undershoot the true
    maximum, never exceed it.
    """
    d = _require_2xd(rho)
    if n_grid < 1000:
        raise ValueError("n_grid must be at least 1000")
    t = rho.data.reshape(2, d, 2, d)
    marginal = np.einsum("abcb->ac", t)
    bloch = np.array([np.trace(PAULI[k] @ marginal).real for k in (1, 2, 3)])
    b_norm = float(np.linalg.norm(bloch))
    if b_norm > X_TOL:
        return max(_disturbance(rho, bloch / b_norm), 0.0)

    idx = np.arange(n_grid)
    z = 1.0 - 2.0 * (idx + 0.5) / n_grid
    theta = np.arccos(z)
    phi = idx * math.pi * (3.0 - math.sqrt(5.0))
    best_val = -1.0
    best = (0.0, 0.0)
    for th, ph in zip(theta, phi):
        val = _disturbance(rho, _sphere_direction(th, ph))
        if val > best_val:
            best_val = val
            best = (float(th), float(ph))

    th0, ph0 = best
    delta = 4.0 / math.sqrt(n_grid)
    for _ in range(2):
        th0, v_th = _golden_max(
            lambda t_: _disturbance(rho, _sphere_direction(t_, ph0)),
            max(th0 - delta, 0.0), min(th0 + delta, math.pi))
        ph0, v_ph = _golden_max(
            lambda p_: _disturbance(rho, _sphere_direction(th0, p_)),
            ph0 - delta, ph0 + delta)
        best_val = max(best_val, v_th, v_ph)
        delta /= 10.0
    return max(best_val, 0.0)


# -- continuity and endpoint checks --------------------------------------------

def min_continuity_check(p: float) -> dict:
    """Extrapolate the closed cavity-cavity MIN to time 0+ and compare with
    the undamped value.

    Evaluates at kappa_t = 1e-2 ... 1e-7 and runs a ratio-10 Richardson
    tableau; the gap to (p - 1/2)^2 + 1/4 confirms the two branches of the
    formula join continuously at the start of the evolution.
    """
    _check_p(p)
    hs = [10.0 ** (-k) for k in range(2, 8)]
    tab = [min_closed_form("c1c2_dim4", p, h) for h in hs]
    for j in range(1, len(tab)):
        fac = 10.0 ** j
        for i in range(len(tab) - 1, j - 1, -1):
            tab[i] = (fac * tab[i] - tab[i - 1]) / (fac - 1.0)
    limit = tab[-1]
    at_zero = min_initial(p)
    return {"limit_value": limit, "value_at_zero": at_zero,
            "gap": abs(limit - at_zero)}


def min_initial_purity_relation(p: float, family: str) -> tuple[float, float]:
    """(numeric MIN of the undamped family state, half its purity); the two
    must agree for every family and p."""
    rho = build_mmes(family_spec(family, p))
    return (min_luo_fu(rho), 0.5 * purity(rho))
