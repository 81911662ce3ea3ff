"""Real-valued expansion and SVD subchannel decomposition.

A complex m x n system y = H x + z maps to the real 2m x 2n system
[[Re H, -Im H], [Im H, Re H]] acting on stacked [Re x; Im x]. Singular
values of the real expansion come in duplicated pairs, one per complex
mode, so the real decomposition exposes 2 * rank(H) usable subchannels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def real_expand(h: np.ndarray) -> np.ndarray:
    """Real 2m x 2n block expansion of a complex m x n matrix."""
    h = np.asarray(h)
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


@dataclass
class SubchannelDecomposition:
    """SVD of a real channel: full orthonormal u/v plus retained gains.

    sigma holds the singular values above rel_tol * sigma_max (the usable
    subchannels); sigma_full keeps the whole spectrum so the product
    u @ diag(sigma_full) @ v.T reconstructs the input exactly.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    sigma_full: np.ndarray

    @property
    def n_sub(self) -> int:
        return self.sigma.size


def svd_subchannels(
    h_real: np.ndarray, rel_tol: float = 1e-6
) -> SubchannelDecomposition:
    """Full SVD with deterministic sign convention and small-gain truncation.

    Signs: the largest-magnitude entry of each left singular vector is made
    positive (u and v columns flip together, product unchanged). Retained
    sigma keeps values > rel_tol times the largest.
    """
    u, s, vh = np.linalg.svd(np.asarray(h_real, dtype=float))
    v = vh.T
    k = min(u.shape[1], v.shape[1])
    for i in range(k):
        j = int(np.argmax(np.abs(u[:, i])))
        if u[j, i] < 0:
            u[:, i] = -u[:, i]
            v[:, i] = -v[:, i]
    smax = s[0] if s.size else 0.0
    keep = s > rel_tol * smax if smax > 0 else np.zeros(s.shape, dtype=bool)
    return SubchannelDecomposition(u=u, sigma=s[keep], v=v, sigma_full=s)


def effective_channel(
    h_real_true: np.ndarray, u_est: np.ndarray, v_est: np.ndarray
) -> np.ndarray:
    """Post-combining channel G = u_est^T H v_est.

    With u/v from the true channel's SVD, G is diag(sigma) padded to shape;
    with estimated CSI the off-diagonal entries are the residual
    inter-subchannel interference.
    """
    return u_est.T @ np.asarray(h_real_true, dtype=float) @ v_est
