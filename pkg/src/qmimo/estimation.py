"""Pilot-based channel estimation from low-resolution observations.

Pilots occupy n_pilot uses of the coherence block. The receiver's one-bit
ADC pool is repurposed during training as uniform per-real-dimension
quantizers: with n_adc comparators and n_r receive antennas each real
dimension gets n_adc / (2 n_r) bits per use.

Estimators work in the angular domain H = A_r G A_t^H with unitary 2-D DFT
dictionaries matched to the planar array geometry, where mmWave channels
with few clusters make G approximately sparse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .channel import ChannelDrop, Upa
from .receiver import QuantizerSpec, quantize_batch

_NORM_CONST = 1.0 / np.sqrt(2.0 * np.pi)


def _phi(x):
    return _NORM_CONST * np.exp(-0.5 * x * x)


def angular_dictionary(geom: Upa) -> np.ndarray:
    """Unitary DFT dictionary whose columns sample the array manifold.

    Atom m of an N-element line has phase 2*pi*p*m/N, i.e. directional
    frequency u = 2m/N at half-wavelength spacing. The 2-D dictionary is
    the Kronecker product in the same row-major element order as
    upa_response.
    """

    def dft(n: int) -> np.ndarray:
        p = np.arange(n)
        return np.exp(2j * np.pi * np.outer(p, p) / n) / np.sqrt(n)

    return np.kron(dft(geom.rows), dft(geom.cols))


def estimation_bits_per_dim(n_adc: int, n_r: int) -> int:
    """Uniform split of the comparator pool over 2 n_r real dimensions."""
    bits = n_adc // (2 * n_r)
    if bits < 1:
        raise ValueError("not enough comparators for one bit per dimension")
    return bits


def gen_pilots(
    rng: np.random.Generator, n_t: int, n_pilot: int, power: float = 1.0
) -> np.ndarray:
    """QPSK pilot matrix (n_t x n_pilot), every column of power `power`."""
    sym = (
        rng.integers(0, 2, (n_t, n_pilot)) * 2 - 1
        + 1j * (rng.integers(0, 2, (n_t, n_pilot)) * 2 - 1)
    ) / np.sqrt(2.0)
    return np.sqrt(power / n_t) * sym


def agc_quantizer(y: np.ndarray, n_bits: int) -> QuantizerSpec:
    """Uniform quantizer spanning 3x the RMS of the real dimensions."""
    sigma_u = np.sqrt(0.5 * np.mean(np.abs(y) ** 2))
    return QuantizerSpec.uniform(n_bits, 3.0 * max(sigma_u, 1e-12))


def quantize_observations(
    y: np.ndarray, spec: QuantizerSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Per-real-dimension bins of a complex array: (re_bins, im_bins)."""
    return (
        quantize_batch(y.real, spec.thresholds),
        quantize_batch(y.imag, spec.thresholds),
    )


def dequantize(bins_re: np.ndarray, bins_im: np.ndarray, spec: QuantizerSpec):
    return spec.points[bins_re] + 1j * spec.points[bins_im]


def bussgang_gain(spec: QuantizerSpec, sigma_u: float) -> tuple[float, float]:
    """Linearization Q(u) = alpha*u + d for u ~ N(0, sigma_u^2).

    Returns (alpha, distortion variance sigma_d^2) per real dimension.
    """
    s = max(sigma_u, 1e-12)
    t = np.concatenate([[-np.inf], spec.thresholds / s, [np.inf]])
    pdf = np.where(np.isfinite(t), _phi(np.where(np.isfinite(t), t, 0.0)), 0.0)
    cdf = ndtr(t)
    e_uq = s * np.sum(spec.points * (pdf[:-1] - pdf[1:]))
    e_q2 = np.sum(spec.points**2 * np.diff(cdf))
    alpha = e_uq / s**2
    sigma_d_sq = max(e_q2 - alpha**2 * s**2, 0.0)
    return float(alpha), float(sigma_d_sq)


def estimate_bussgang_lmmse(
    y: np.ndarray,
    pilots: np.ndarray,
    rx: Upa,
    tx: Upa,
    beta: float,
    n_bits: int,
    noise_var: float = 2.0,
    quantized: bool = True,
) -> np.ndarray:
    """Linear MMSE channel estimate from quantized pilot observations.

    The quantizer is linearized as alpha*y + d (Bussgang), the distortion
    folded into the noise budget, and the angular coefficients solved
    row-wise; the unitary receive rotation makes one shared n_t x n_t
    system serve all rows. With quantized=False the raw observations are
    used (alpha = 1, no distortion), which isolates the estimator itself.
    """
    a_r = angular_dictionary(rx)
    a_t = angular_dictionary(tx)
    if quantized:
        spec = agc_quantizer(y, n_bits)
        sigma_u = np.sqrt(0.5 * np.mean(np.abs(y) ** 2))
        alpha, sigma_d_sq = bussgang_gain(spec, sigma_u)
        y_q = dequantize(*quantize_observations(y, spec), spec)
        nu = alpha**2 * noise_var + 2.0 * sigma_d_sq
    else:
        alpha, nu = 1.0, noise_var
        y_q = y
    r_ang = a_r.conj().T @ y_q
    w = a_t.conj().T @ pilots
    c = beta**2  # prior per-entry variance of the angular channel
    gram = (alpha**2 * c) * (w @ w.conj().T)
    reg = nu + 1e-6 * (np.trace(gram).real / w.shape[0] + nu)
    g_hat = (alpha * c) * r_ang @ w.conj().T @ np.linalg.inv(
        gram + reg * np.eye(w.shape[0])
    )
    return a_r @ g_hat @ a_t.conj().T


def _trunc_moments(mu, s, a, b):
    """Mean/variance of N(mu, s^2) truncated to (a, b], vectorized."""
    alpha = (a - mu) / s
    beta = (b - mu) / s
    z = ndtr(beta) - ndtr(alpha)
    pa = np.where(np.isfinite(alpha), _phi(np.where(np.isfinite(alpha), alpha, 0.0)), 0.0)
    pb = np.where(np.isfinite(beta), _phi(np.where(np.isfinite(beta), beta, 0.0)), 0.0)
    tiny = z < 1e-12
    zs = np.where(tiny, 1.0, z)
    h = (pa - pb) / zs
    mean = mu + s * h
    lo = np.where(np.isfinite(alpha), alpha, beta)
    hi = np.where(np.isfinite(beta), beta, alpha)
    g = (np.where(np.isfinite(alpha), alpha, 0.0) * pa
         - np.where(np.isfinite(beta), beta, 0.0) * pb) / zs
    var = s**2 * np.maximum(1.0 + g - h**2, 1e-12)
    # degenerate window: all mass is (numerically) outside, clamp to the
    # nearest edge
    edge = np.clip(mu, np.where(np.isfinite(a), a, mu), np.where(np.isfinite(b), b, mu))
    mean = np.where(tiny, edge, mean)
    var = np.where(tiny, s**2 * 1e-12, var)
    del lo, hi
    return mean, var, z


@dataclass
class GampResult:
    h_hat: np.ndarray
    iterations: int
    converged: bool
    rho: float
    psi: float


def estimate_gamp_em(
    y: np.ndarray,
    pilots: np.ndarray,
    rx: Upa,
    tx: Upa,
    beta: float,
    n_bits: int,
    noise_var: float = 2.0,
    max_iter: int = 50,
    damp: float = 0.5,
    tol: float = 1e-5,
) -> GampResult:
    """EM-tuned Bernoulli-Gaussian GAMP estimate from quantized pilots.

    Generalized approximate message passing on the angular coefficients
    with a sparsity-inducing prior whose activity rho and active variance
    psi are re-fit by EM each iteration. The output channel inverts the
    per-real-dimension uniform quantizer through truncated-Gaussian
    moments. Scalar variances, damped updates, best-iterate fallback by
    observation log-likelihood.
    """
    a_r = angular_dictionary(rx)
    a_t = angular_dictionary(tx)
    spec = agc_quantizer(y, n_bits)
    bins_re, bins_im = quantize_observations(y, spec)
    edges = np.concatenate([[-np.inf], spec.thresholds, [np.inf]])
    lo_re, hi_re = edges[bins_re], edges[bins_re + 1]
    lo_im, hi_im = edges[bins_im], edges[bins_im + 1]

    w = a_t.conj().T @ pilots
    n_t, n_p = w.shape
    n_r = rx.n
    col_pow = float(np.mean(np.sum(np.abs(w) ** 2, axis=0)))
    omega = float(np.sum(np.abs(w) ** 2) / n_t)  # avg coupling per unknown
    sig2 = noise_var / 2.0  # per real dim

    rho, psi = 0.1, beta**2 / 0.1
    x_hat = np.zeros((n_r, n_t), dtype=complex)
    tau_x = rho * psi
    s_hat = np.zeros((n_r, n_p), dtype=complex)
    tau_s = 0.0
    best_ll, best_x = -np.inf, x_hat.copy()
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        # output linear step: P = A_r X W with Onsager correction
        tau_p = max(col_pow * tau_x, 1e-30)
        p = a_r @ x_hat @ w - tau_p * s_hat
        # posterior of the noiseless entry given its quantization bin,
        # handled per real dimension
        s_tot2 = tau_p / 2.0 + sig2
        s_tot = np.sqrt(s_tot2)
        k = (tau_p / 2.0) / s_tot2
        m_re, v_re, z_re = _trunc_moments(p.real, s_tot, lo_re, hi_re)
        m_im, v_im, z_im = _trunc_moments(p.imag, s_tot, lo_im, hi_im)
        z_hat = (p.real + k * (m_re - p.real)) + 1j * (p.imag + k * (m_im - p.imag))
        tau_z = float(
            np.mean((tau_p / 2.0) * (1 - k) + k**2 * v_re)
            + np.mean((tau_p / 2.0) * (1 - k) + k**2 * v_im)
        )
        ll = float(np.sum(np.log(np.maximum(z_re, 1e-300)))
                   + np.sum(np.log(np.maximum(z_im, 1e-300))))
        if ll > best_ll:
            best_ll, best_x = ll, x_hat.copy()
        s_new = (z_hat - p) / tau_p
        tau_s_new = max((1.0 - tau_z / tau_p) / tau_p, 1e-30)
        s_hat = damp * s_new + (1 - damp) * s_hat
        tau_s = damp * tau_s_new + (1 - damp) * tau_s

        # input linear step
        tau_r = 1.0 / max(omega * tau_s, 1e-30)
        r = x_hat + tau_r * (a_r.conj().T @ s_hat @ w.conj().T)
        # Bernoulli-Gaussian denoiser with EM refit of (rho, psi)
        v_act = psi * tau_r / (psi + tau_r)
        m_act = (psi / (psi + tau_r)) * r
        log_ratio = (
            np.log(max(rho, 1e-12)) - np.log(max(1 - rho, 1e-12))
            + np.log(tau_r / (psi + tau_r))
            + np.abs(r) ** 2 * (1.0 / tau_r - 1.0 / (psi + tau_r))
        )
        pi = 1.0 / (1.0 + np.exp(-np.clip(log_ratio, -500, 500)))
        x_new = pi * m_act
        e2 = pi * (v_act + np.abs(m_act) ** 2)
        tau_x_new = float(np.mean(e2 - np.abs(x_new) ** 2))
        dx = np.linalg.norm(x_new - x_hat) / max(np.linalg.norm(x_hat), 1e-12)
        x_hat = damp * x_new + (1 - damp) * x_hat
        tau_x = max(damp * tau_x_new + (1 - damp) * tau_x, 1e-30)
        rho = float(np.clip(np.mean(pi), 1e-4, 1 - 1e-4))
        psi = float(np.sum(e2) / max(np.sum(pi), 1e-12))
        if dx < tol:
            converged = True
            break

    x_final = x_hat if converged else best_x
    return GampResult(
        h_hat=a_r @ x_final @ a_t.conj().T,
        iterations=it,
        converged=converged,
        rho=rho,
        psi=psi,
    )


def nmse_db(h_hat: np.ndarray, h_true: np.ndarray, floor_db: float = -200.0) -> float:
    """Normalized squared error in dB, floored for numerically exact hits."""
    denom = np.linalg.norm(h_true) ** 2
    if denom == 0:
        raise ValueError("reference channel has zero norm")
    err = np.linalg.norm(h_hat - h_true) ** 2 / denom
    if err <= 10 ** (floor_db / 10):
        return floor_db
    return float(10.0 * np.log10(err))


def estimate_channel(
    rng: np.random.Generator,
    drop: ChannelDrop,
    n_pilot: int = 512,
    n_adc: int = 96,
    method: str = "lmmse",
) -> tuple[np.ndarray, float]:
    """Simulate one training phase; returns (H_hat, nmse in dB).

    Draws pilots and receiver noise, quantizes with the training-time ADC
    pool, runs the chosen estimator.
    """
    h = drop.channel()
    x = gen_pilots(rng, drop.tx.n, n_pilot)
    noise = (
        rng.standard_normal((drop.rx.n, n_pilot))
        + 1j * rng.standard_normal((drop.rx.n, n_pilot))
    )
    y = h @ x + noise
    bits = estimation_bits_per_dim(n_adc, drop.rx.n)
    if method == "lmmse":
        h_hat = estimate_bussgang_lmmse(y, x, drop.rx, drop.tx, drop.beta, bits)
    elif method == "gamp":
        h_hat = estimate_gamp_em(y, x, drop.rx, drop.tx, drop.beta, bits).h_hat
    else:
        raise ValueError(f"unknown estimation method: {method}")
    return h_hat, nmse_db(h_hat, h)
