"""Parallel-ordered complex Jacobi eigensolver for stacks of Hermitian matrices.

A sweep visits every index pair once, grouped by the round-robin schedule
into rounds of disjoint pairs; all rotations of one round are applied at
once.  Each batch item stops rotating as soon as all of its off-diagonal
entries are below ``threshold * ||A||_F``, so an item's result does not
depend on what else shares its batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

THRESHOLD = 1e-14
MAX_SWEEPS = 40


class ConvergenceError(RuntimeError):
    def __init__(self, sweeps: int, off_ratio: np.ndarray):
        worst = float(np.max(off_ratio)) if off_ratio.size else 0.0
        super().__init__(
            f"Jacobi did not converge in {sweeps} sweeps: "
            f"{off_ratio.size} matrices left, worst max|a_pq|/||A||_F = {worst:.3e}"
        )
        self.sweeps = sweeps
        self.off_ratio = off_ratio


@dataclass(frozen=True)
class EighResult:
    values: np.ndarray  # (..., n), non-increasing
    vectors: np.ndarray | None  # (..., n, n), column k pairs with values[..., k]
    sweeps: int


def round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint pairs (p < q) covering every pair of 0..n-1 exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _hermitize(a: np.ndarray) -> np.ndarray:
    """Rebuild from the upper triangle so symmetry is exact."""
    up = np.triu(a, 1)
    d = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    out = up + np.conj(np.swapaxes(up, -1, -2))
    idx = np.arange(a.shape[-1])
    out[..., idx, idx] = d
    return out


def _offdiag_max(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.max(np.abs(a[:, mask]), axis=-1) if n > 1 else np.zeros(a.shape[0])


def _jacobi_core(a: np.ndarray, want_vectors: bool, threshold: float, max_sweeps: int):
    b, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=complex), (b, n, n)).copy() if want_vectors else None
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    tol = threshold * fro
    rounds = round_robin(n)
    active = np.flatnonzero(_offdiag_max(a) > tol)
    sweeps = 0
    while active.size:
        if sweeps >= max_sweeps:
            raise ConvergenceError(sweeps, _offdiag_max(a[active]) / np.where(fro[active] > 0, fro[active], 1))
        sweeps += 1
        A = a[active]
        V = v[active] if want_vectors else None
        t_act = tol[active][:, None]
        for P, Q in rounds:
            apq = A[:, P, Q]
            mag = np.abs(apq)
            rot = mag > t_act
            if not rot.any():
                continue
            safe = np.where(rot, mag, 1.0)
            phase = np.where(rot, apq / safe, 1.0)  # e^{i phi}
            app = A[:, P, P].real
            aqq = A[:, Q, Q].real
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(rot, t, 0.0)
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            cc, ss, ph = c[..., None], s[..., None], phase[..., None]
            # columns: A <- A G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
            colp = A[:, :, P]
            colq = A[:, :, Q]
            cT, sT, pT = c[:, None, :], s[:, None, :], phase[:, None, :]
            A[:, :, P] = cT * colp - sT * np.conj(pT) * colq
            A[:, :, Q] = sT * colp + cT * np.conj(pT) * colq
            # rows: A <- G^H A
            rowp = A[:, P, :]
            rowq = A[:, Q, :]
            A[:, P, :] = cc * rowp - ss * ph * rowq
            A[:, Q, :] = ss * rowp + cc * ph * rowq
            # the rotated entries are zero in exact arithmetic
            A[:, P, Q] = np.where(rot, 0.0, A[:, P, Q])
            A[:, Q, P] = np.where(rot, 0.0, A[:, Q, P])
            A[:, P, P] = A[:, P, P].real
            A[:, Q, Q] = A[:, Q, Q].real
            if want_vectors:
                vp = V[:, :, P]
                vq = V[:, :, Q]
                V[:, :, P] = cT * vp - sT * np.conj(pT) * vq
                V[:, :, Q] = sT * vp + cT * np.conj(pT) * vq
        a[active] = A
        if want_vectors:
            v[active] = V
        still = _offdiag_max(A) > tol[active]
        active = active[still]
    return a, v, sweeps


def jacobi_eigh(
    a,
    vectors: bool = True,
    threshold: float = THRESHOLD,
    max_sweeps: int = MAX_SWEEPS,
) -> EighResult:
    """Eigen-decomposition of one Hermitian matrix or a stack of them.

    Only the upper triangle of the input is read.  Eigenvalues are returned
    in non-increasing order.
    """
    a = np.asarray(a)
    single = a.ndim == 2
    if single:
        a = a[None]
    if a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    lead = a.shape[:-2]
    n = a.shape[-1]
    work = _hermitize(a.astype(complex).reshape(-1, n, n))
    work, v, sweeps = _jacobi_core(work, vectors, threshold, max_sweeps)
    w = np.real(np.diagonal(work, axis1=-2, axis2=-1)).copy()
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1).reshape(lead + (n,))
    if vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=-1).reshape(lead + (n, n))
    if single:
        w = w[0]
        v = v[0] if vectors else None
    return EighResult(w, v, sweeps)
