"""GUE and Haar-isospectral sampling, the minor process, and rigidity diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hive_gt import GTPattern
from ..spectra import SpecTuple, as_array, semicircle_quantiles
from .jacobi import EighResult, jacobi_eigh
from .rng import RngStream

RIGIDITY_FLAG = 10.0


def _herm_from_parts(diag: np.ndarray, re: np.ndarray, im: np.ndarray, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    iu = np.triu_indices(n, 1)
    m[iu] = re + 1j * im
    m = m + m.conj().T
    m[np.diag_indices(n)] = diag
    return m


def sample_gue_unit(n: int, rng: RngStream) -> np.ndarray:
    """M with real N(0,1) diagonal and complex off-diagonal entries of variance 1."""
    k = n * (n - 1) // 2
    diag = rng.normal(n)
    off = rng.normal(2 * k, scale=math.sqrt(0.5))
    return _herm_from_parts(diag, off[:k], off[k:], n)


def sample_gue(n: int, sigma: float, rng: RngStream) -> np.ndarray:
    """A = sqrt(sigma^2 n) M, i.e. A / sqrt(sigma^2 n) is unit-variance GUE."""
    if n < 1 or not sigma > 0:
        raise ValueError(f"need n >= 1 and sigma > 0, got n={n}, sigma={sigma}")
    return math.sqrt(sigma * sigma * n) * sample_gue_unit(n, rng)


def eigh(m, backend: str = "jacobi") -> tuple[SpecTuple, np.ndarray]:
    """Spectrum (non-increasing) and unitary eigenvectors of one Hermitian matrix.

    ``backend="numpy"`` swaps in LAPACK; the default is the in-repo Jacobi solver.
    """
    m = np.asarray(m)
    if backend == "jacobi":
        r = jacobi_eigh(m)
        w, v = r.values, r.vectors
    elif backend == "numpy":
        w, v = np.linalg.eigh(m, UPLO="U")
        w, v = w[::-1].copy(), v[:, ::-1].copy()
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return SpecTuple(w, tol=1e-12 * (1 + float(np.max(np.abs(w))))), v


def eigvals_batch(m: np.ndarray, backend: str = "jacobi") -> np.ndarray:
    """Non-increasing eigenvalues of a stack of Hermitian matrices."""
    if backend == "jacobi":
        return jacobi_eigh(m, vectors=False).values
    if backend == "numpy":
        return np.linalg.eigvalsh(m, UPLO="U")[..., ::-1].copy()
    raise ValueError(f"unknown backend {backend!r}")


def minor_spectra(m: np.ndarray, backend: str = "jacobi") -> list[np.ndarray]:
    """Row k (k = 1..n) holds the spectra of the leading k x k minors, shape (..., k)."""
    m = np.asarray(m)
    n = m.shape[-1]
    rows = [np.real(m[..., :1, 0]).copy()]
    for k in range(2, n + 1):
        rows.append(eigvals_batch(m[..., :k, :k], backend))
    return rows


def _clamp_interlacing(rows: list[np.ndarray]) -> None:
    """Project rounding-level interlacing violations away (each is O(eps ||A||))."""
    for k in range(len(rows) - 1):
        lo, hi = rows[k + 1][..., 1:], rows[k + 1][..., :-1]
        rows[k] = np.minimum(np.maximum(rows[k], lo), hi)


def minor_process(m, backend: str = "jacobi", clamp: bool = False) -> GTPattern | list[GTPattern]:
    """GT pattern whose k-th row is the spectrum of the leading k x k minor.

    Accepts one matrix or a stack; a stack returns a list of patterns.
    Eigenvalues are exact up to solver rounding, so interlacing can fail by
    a few ulps; ``clamp=True`` moves such entries onto the nearest bound
    (off by default: no perturbation is applied to sampled spectra).
    """
    m = np.asarray(m)
    single = m.ndim == 2
    rows = minor_spectra(m[None] if single else m, backend)
    if clamp:
        _clamp_interlacing(rows)
    flat = np.concatenate(rows, axis=-1)
    n = m.shape[-1]
    pats = [GTPattern(n, f, validate=False) for f in flat]
    return pats[0] if single else pats


def haar_unitary(n: int, rng: RngStream) -> np.ndarray:
    """Haar unitary from QR of a complex Ginibre matrix, phases of diag(R) removed."""
    z = (rng.normal((n, n)) + 1j * rng.normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    ph = d / np.where(np.abs(d) > 0, np.abs(d), 1.0)
    return q * ph[None, :]


def haar_isospectral(lam, rng: RngStream) -> np.ndarray:
    """U diag(lam) U* with U Haar on U(n); Hermitian symmetry is exact."""
    lam = as_array(lam)
    u = haar_unitary(lam.size, rng)
    a = (u * lam[None, :]) @ u.conj().T
    up = np.triu(a, 1)
    out = up + up.conj().T
    out[np.diag_indices(lam.size)] = np.real(np.diagonal(a))
    return out


# ---- rigidity -----------------------------------------------------------------

@dataclass
class RigidityReport:
    n: int
    scale: float
    classical: np.ndarray  # classical location matched to lambda_i (decreasing order)
    max_norm_dev: np.ndarray  # per i, max over samples
    flag_at: float = RIGIDITY_FLAG
    flags: np.ndarray = field(init=False)

    def __post_init__(self):
        self.flags = self.max_norm_dev > self.flag_at

    @property
    def passed(self) -> bool:
        return not bool(np.any(self.flags))

    def rows(self):
        """(i, gamma_i, max_norm_dev, flag) with i 1-based."""
        return [
            (i + 1, float(self.classical[i]), float(self.max_norm_dev[i]), bool(self.flags[i]))
            for i in range(self.n)
        ]


def rigidity_report(samples, sigma: float, flag_at: float = RIGIDITY_FLAG) -> RigidityReport:
    """max_samples |lambda_i - sigma sqrt(n) gamma_i| min(i, n-i+1)^{1/3} / (n^{1/3} log^2 n).

    Samples are spectra in non-increasing order, so lambda_i is matched with
    the (n - i + 1)-th classical location, the increasing quantile sequence
    read backwards.
    """
    x = np.array([as_array(s) for s in samples], dtype=float)
    if x.ndim != 2:
        raise ValueError("all samples must have the same length")
    n = x.shape[1]
    gamma = semicircle_quantiles(n)[::-1]
    i = np.arange(1, n + 1)
    weight = np.minimum(i, n - i + 1) ** (1 / 3) / (n ** (1 / 3) * max(math.log(n), 1.0) ** 2)
    dev = np.abs(x - sigma * math.sqrt(n) * gamma[None, :]) * weight[None, :]
    return RigidityReport(n, sigma, gamma, dev.max(axis=0), flag_at)
