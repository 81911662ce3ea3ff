"""Real expansion and SVD subchannel structure."""

import numpy as np
import pytest

from qmimo.channel import Upa, channel_matrix, draw_paths
from qmimo.subchannels import effective_channel, real_expand, svd_subchannels


def _random_h(seed, m=4, n=6):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def test_real_expand_scalar_block():
    h = np.array([[2.0 + 3.0j]])
    assert np.array_equal(real_expand(h), np.array([[2.0, -3.0], [3.0, 2.0]]))


def test_real_expand_norm_doubles():
    h = _random_h(0)
    assert np.linalg.norm(real_expand(h)) ** 2 == pytest.approx(
        2 * np.linalg.norm(h) ** 2, rel=1e-12
    )


def test_real_expand_action_matches_complex():
    rng = np.random.default_rng(1)
    h = _random_h(1)
    x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    y = h @ x
    xr = np.concatenate([x.real, x.imag])
    yr = real_expand(h) @ xr
    assert np.allclose(yr, np.concatenate([y.real, y.imag]), atol=1e-12)


def test_singular_values_duplicated_pairs():
    dec = svd_subchannels(real_expand(_random_h(2)))
    s = dec.sigma_full
    assert np.allclose(s[0::2], s[1::2], rtol=1e-8)


def test_reconstruction_and_orthonormality():
    hr = real_expand(_random_h(3))
    dec = svd_subchannels(hr)
    m, n = hr.shape
    assert np.allclose(dec.u @ dec.u.T, np.eye(m), atol=1e-10)
    assert np.allclose(dec.v @ dec.v.T, np.eye(n), atol=1e-10)
    smat = np.zeros((m, n))
    np.fill_diagonal(smat, dec.sigma_full)
    assert np.allclose(dec.u @ smat @ dec.v.T, hr, atol=1e-10)


def test_truncation_drops_tiny_gains():
    h = np.diag([1.0, 1e-9, 0.5, 1e-12])
    dec = svd_subchannels(h)
    assert dec.n_sub == 2
    assert np.allclose(np.sort(dec.sigma), [0.5, 1.0])
    assert dec.sigma_full.size == 4


def test_zero_matrix():
    dec = svd_subchannels(np.zeros((4, 4)))
    assert dec.n_sub == 0


def test_sign_convention_deterministic():
    hr = real_expand(_random_h(4))
    d1 = svd_subchannels(hr)
    d2 = svd_subchannels(hr.copy())
    assert np.array_equal(d1.u, d2.u)
    assert np.array_equal(d1.v, d2.v)
    # convention: the dominant entry of each left vector is positive
    for i in range(d1.sigma.size):
        assert d1.u[np.argmax(np.abs(d1.u[:, i])), i] > 0


def test_effective_channel_diagonal_under_perfect_csi():
    hr = real_expand(_random_h(5))
    dec = svd_subchannels(hr)
    g = effective_channel(hr, dec.u, dec.v)
    s = dec.sigma.size
    assert np.allclose(np.diag(g)[:s], dec.sigma, atol=1e-8)
    off = g[:s, :s] - np.diag(np.diag(g)[:s])
    assert np.max(np.abs(off)) < 1e-8


def test_effective_channel_mismatch_shrinks_with_error():
    rng = np.random.default_rng(6)
    rx, tx = Upa(2, 2), Upa(2, 2)
    h = channel_matrix(draw_paths(rng), rx, tx, beta=1.0)
    hr = real_expand(h)
    delta = rng.standard_normal(h.shape) + 1j * rng.standard_normal(h.shape)
    offs = []
    for eps in (1e-1, 1e-3, 1e-5):
        dec = svd_subchannels(real_expand(h + eps * delta))
        g = effective_channel(hr, dec.u, dec.v)
        s = dec.sigma.size
        offs.append(np.max(np.abs(g[:s, :s] - np.diag(np.diag(g)[:s]))))
    assert offs[0] > offs[1] > offs[2]
    assert offs[2] < 1e-3 * np.linalg.norm(hr)
