"""Multiplication operators acting on coefficient windows.

A bounded function sigma on the unit circle with Fourier coefficients s_j
acts on basis coefficients by discrete convolution, d_m = sum_j s_j c_{m-j}.
Given every s_j with j in the range reachable from the window, the output
window is exact; whatever lands outside it is returned as leaked mass.
"""

import numpy as np
from scipy.signal import fftconvolve


def convolve_symbol(coeffs, symbol, j0, n_out):
    """Apply a multiplier to a coefficient window.

    Parameters
    ----------
    coeffs : ndarray, shape (2 N_in, k)
        Input coefficients on [-N_in, N_in).
    symbol : ndarray, shape (L,) or (L, k, k)
        Symbol coefficients for frequencies j0, ..., j0 + L - 1.  A 1-d
        symbol is a scalar multiplier.
    j0 : int
    n_out : int
        Output truncation.

    Returns
    -------
    out : ndarray, shape (2 n_out, k)
    leak : float
        Squared mass of computed output entries outside the window.
    """
    n_in = coeffs.shape[0] // 2
    k = coeffs.shape[1]
    if symbol.ndim == 1:
        full = fftconvolve(coeffs, symbol[:, None], axes=0)
    else:
        full = np.zeros((coeffs.shape[0] + symbol.shape[0] - 1, k), dtype=complex)
        for a in range(k):
            for b in range(k):
                col = symbol[:, a, b]
                if np.any(col):
                    full[:, a] += fftconvolve(coeffs[:, b], col)
    # full[q] is the coefficient of index m = q + j0 - n_in
    m_first = j0 - n_in
    out = np.zeros((2 * n_out, k), dtype=complex)
    lo = max(-n_out, m_first)
    hi = min(n_out, m_first + full.shape[0])
    if hi > lo:
        out[lo + n_out : hi + n_out] = full[lo - m_first : hi - m_first]
    # summed directly: subtracting the kept mass from the total leaves roundoff
    outside = np.ones(full.shape[0], dtype=bool)
    if hi > lo:
        outside[lo - m_first : hi - m_first] = False
    leak = float(np.sum(np.abs(full[outside]) ** 2))
    return out, leak


def dense_block_toeplitz(symbol, j0, n):
    """Matrix of the compressed multiplier on the window [-n, n).

    Rows and columns are ordered as ``coeffs.reshape(-1)``, i.e. basis index
    major and K-component minor.
    """
    if symbol.ndim == 1:
        symbol = symbol[:, None, None]
    L, k, _ = symbol.shape
    idx = np.arange(-n, n)
    diff = idx[:, None] - idx[None, :]  # j = m - n'
    pos = diff - j0
    valid = (pos >= 0) & (pos < L)
    blocks = np.zeros((2 * n, 2 * n, k, k), dtype=complex)
    blocks[valid] = symbol[pos[valid]]
    return blocks.transpose(0, 2, 1, 3).reshape(2 * n * k, 2 * n * k)
