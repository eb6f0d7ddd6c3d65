"""Density matrices: spectra, von Neumann entropy, trace distance, Ky Fan sums.

All operators are finite complex matrices.  Spectral statements are
basis-independent; eigenvectors inside a degenerate cluster are whatever
orthonormal basis the solver returns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitVector
from .seqmaj import MajorizationVerdict, ProbVector, is_majorized, shannon_entropy

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
EIG_FLOOR = -1e-9
RECONSTRUCTION_TOL = 1e-8


def _as_complex(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.matrix
    return np.asarray(m, dtype=complex)


def _hermitian_defect(m: np.ndarray) -> tuple[float, tuple[int, int]]:
    dev = np.abs(m - m.conj().T)
    idx = np.unravel_index(np.argmax(dev), dev.shape)
    return float(dev[idx]), (int(idx[0]), int(idx[1]))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian positive semidefinite complex matrix with unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("density matrix must be square")
        defect, pair = _hermitian_defect(arr)
        if defect > HERMITIAN_TOL:
            raise NotHermitian(
                f"worst entry pair {pair}/{pair[::-1]} deviates by {defect}")
        tr = arr.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1")
        lo = float(np.linalg.eigvalsh(arr).min())
        if lo < EIG_FLOOR:
            raise ValueError(f"negative eigenvalue {lo}")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending with matching unitary eigenvector columns.

    Eigenvalues are kept as a raw real vector (not a ProbVector) because the
    solver also serves indefinite Hermitian inputs such as state differences.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(h) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    arr = _as_complex(h)
    defect, pair = _hermitian_defect(arr)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"worst entry pair {pair} deviates by {defect}")
    sym = (arr + arr.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    recon = (vecs * vals) @ vecs.conj().T
    if np.abs(recon - sym).max() > RECONSTRUCTION_TOL:
        raise ArithmeticError("eigendecomposition failed to reconstruct input")
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def spectrum(rho: DensityMatrix) -> ProbVector:
    """Eigenvalues of a state, clamped to [0, 1] and sorted descending."""
    vals = eig_hermitian(rho).eigenvalues
    vals = np.clip(vals, 0.0, 1.0)
    if abs(vals.sum() - 1.0) > 1e-8:
        raise ValueError(f"clamped spectrum sums to {vals.sum()}, not 1")
    return ProbVector(vals, normalized=True)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) in bits; equals the Shannon entropy of the spectrum."""
    return shannon_entropy(spectrum(rho))


def state_majorized(rho1: DensityMatrix, rho2: DensityMatrix,
                    tol: float = 1e-9) -> MajorizationVerdict:
    """Spectral majorization of states; dimensions may differ (zero-padded)."""
    return is_majorized(spectrum(rho1), spectrum(rho2), tol)


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Trace norm of the difference: sum of absolute eigenvalues."""
    a = _as_complex(rho1)
    b = _as_complex(rho2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} vs {b.shape}")
    return float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def ky_fan_sum(a, k: int) -> float:
    """Sum of the k largest eigenvalues of a Hermitian matrix.

    This equals the maximum of tr(A P) over rank-k orthogonal projections P.
    """
    arr = _as_complex(a)
    defect, pair = _hermitian_defect(arr)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"worst entry pair {pair} deviates by {defect}")
    if not 1 <= k <= arr.shape[0]:
        raise ValueError(f"k={k} out of range 1..{arr.shape[0]}")
    vals = np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)
    return float(vals[-k:].sum())


def l1_equivalent(rho1: DensityMatrix, rho2: DensityMatrix,
                  tol: float = 1e-9) -> bool:
    """True when the nonzero spectra agree as sorted multisets within tol."""
    s1 = spectrum(rho1).entries
    s2 = spectrum(rho2).entries
    s1 = s1[s1 > tol]
    s2 = s2[s2 > tol]
    d = max(s1.size, s2.size, 1)
    s1 = np.pad(s1, (0, d - s1.size))
    s2 = np.pad(s2, (0, d - s2.size))
    return bool(np.abs(s1 - s2).max() <= tol)


def pure_state(x) -> DensityMatrix:
    """Rank-one projection onto a unit vector."""
    v = np.asarray(x, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise NotUnitVector(f"norm {norm} is not 1")
    return DensityMatrix(np.outer(v, v.conj()))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_density(d: int, rng: np.random.Generator,
                   spec=None) -> DensityMatrix:
    """Random state with the requested spectrum (default: flat simplex sample).

    The eigenbasis is Haar random, so the output is deterministic for a fixed
    generator state and full-rank exactly when all requested eigenvalues are
    positive.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if spec is None:
        vals = rng.dirichlet(np.ones(d))
    else:
        vals = spec.entries if isinstance(spec, ProbVector) else np.asarray(spec, dtype=float)
        if vals.ndim != 1 or vals.size > d or np.any(vals < 0):
            raise ValueError("spectrum must be <= d non-negative reals")
        if abs(vals.sum() - 1.0) > 1e-9:
            raise ValueError(f"spectrum sums to {vals.sum()}, not 1")
        vals = np.pad(vals, (0, d - vals.size))
    vals = -np.sort(-vals)
    v = haar_unitary(d, rng)
    rho = (v * vals) @ v.conj().T
    return DensityMatrix((rho + rho.conj().T) / 2.0)
