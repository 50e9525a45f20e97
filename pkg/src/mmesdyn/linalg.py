"""Dense linear algebra for small multipartite density matrices.

Everything here works on explicit numpy matrices; subsystem structure is
carried by the DensityMatrix wrapper so partial traces and transposes can
reshape without callers doing index arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DensityMatrix",
    "Spectrum",
    "HERMITICITY_TOL",
    "tensor",
    "partial_trace",
    "partial_transpose",
    "eigvals_hermitian",
    "trace_norm",
    "hs_norm_sq",
    "purity",
    "check_state",
    "random_density_matrix",
    "random_unitary",
]

# A Spectrum is a plain float64 array of real eigenvalues sorted ascending.
Spectrum = np.ndarray

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Square complex matrix plus the tensor factorization of its index.

    Parameters
    ----------
    data : ndarray
        Square matrix; cast to complex128 and frozen.
    dims : tuple of int
        Subsystem dimensions in tensor order; their product must equal the
        matrix side.
    labels : tuple of str, optional
        Subsystem names, e.g. ("c1", "r1", "c2", "r2").

    The wrapper does structural validation only.  Objects that must be
    physical states (unit trace, Hermitian, positive) are checked separately
    with check_state, because partial transposes share this container while
    having negative eigenvalues.
    """

    data: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128)
        dims = tuple(int(d) for d in self.dims)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {data.shape}")
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive integers: {dims}")
        side = math.prod(dims)
        if side != data.shape[0]:
            raise ValueError(f"dims {dims} imply side {side}, matrix side is {data.shape[0]}")
        labels = self.labels
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != len(dims):
                raise ValueError("labels and dims must have the same length")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def side(self) -> int:
        return self.data.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.data
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product; dims concatenate, labels concatenate when both present."""
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = a.labels + b.labels
    return DensityMatrix(np.kron(a.data, b.data), a.dims + b.dims, labels)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in `keep`.

    Parameters
    ----------
    keep : sequence of int
        Indices of the subsystems to retain.  Their original tensor order is
        preserved regardless of the order given here.
    """
    n = rho.n_subsystems
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("must keep at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if len(keep) == n:
        return rho
    keep_set = set(keep)
    tens = rho.data.reshape(rho.dims + rho.dims)
    # ket axis i is labeled i; bra axis i reuses label i when traced out
    sub = list(range(n)) + [i + n if i in keep_set else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(tens, sub, out)
    side = math.prod(rho.dims[i] for i in keep)
    labels = tuple(rho.labels[i] for i in keep) if rho.labels is not None else None
    return DensityMatrix(reduced.reshape(side, side), tuple(rho.dims[i] for i in keep), labels)


def partial_transpose(rho: DensityMatrix, subsystem: int) -> DensityMatrix:
    """Transpose a single tensor factor.

    The result is Hermitian with the same trace whenever the input is, but is
    generally not positive; it is returned in the same DensityMatrix container
    without any state validation.
    """
    n = rho.n_subsystems
    subsystem = int(subsystem)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range for {n} subsystems")
    tens = rho.data.reshape(rho.dims + rho.dims)
    tens = np.swapaxes(tens, subsystem, subsystem + n)
    return DensityMatrix(tens.reshape(rho.side, rho.side), rho.dims, rho.labels)


def eigvals_hermitian(m) -> Spectrum:
    """Real eigenvalues of a Hermitian matrix, sorted ascending.

    Raises ValueError if the input deviates from Hermiticity by more than
    HERMITICITY_TOL in max norm.
    """
    a = _as_matrix(m)
    dev = float(np.abs(a - a.conj().T).max())
    if dev > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(a)


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(eigvals_hermitian(m)).sum())


def hs_norm_sq(m) -> float:
    """Squared Hilbert-Schmidt norm tr(M^dag M) = sum |m_ij|^2."""
    a = _as_matrix(m)
    return float(np.vdot(a, a).real)


def purity(rho) -> float:
    """tr(rho^2) for a state; equals its squared Hilbert-Schmidt norm."""
    return hs_norm_sq(rho)


def check_state(rho, tol: float = HERMITICITY_TOL) -> None:
    """Raise ValueError unless rho is a physical state within `tol`.

    Checks Hermiticity, unit trace, and eigenvalues >= -tol.
    """
    a = _as_matrix(rho)
    dev = float(np.abs(a - a.conj().T).max())
    if dev > tol:
        raise ValueError(f"state is not Hermitian (max deviation {dev:.3e})")
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > tol:
        raise ValueError(f"state trace is {tr}, expected 1")
    lo = float(np.linalg.eigvalsh(a)[0])
    if lo < -tol:
        raise ValueError(f"state has negative eigenvalue {lo:.3e}")


def random_density_matrix(dims: Sequence[int], rng: np.random.Generator,
                          rank: int | None = None) -> DensityMatrix:
    """Random full- or fixed-rank state (normalized Ginibre G G^dag)."""
    dims = tuple(int(d) for d in dims)
    side = math.prod(dims)
    if rank is None:
        rank = side
    g = rng.standard_normal((side, rank)) + 1j * rng.standard_normal((side, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fixing."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
