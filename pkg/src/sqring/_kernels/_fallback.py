"""Numpy implementation of the Wigner grid kernel.

Batched over grid points: the input phases e^{-i n theta} are built by a
cumulative product (cheaper than per-element exp), and the two rotations
through the real eigenbasis Q run as real GEMMs on the split real/imaginary
parts.
"""

import numpy as np

_CHUNK = 4096  # grid points per batch; bounds the dim x chunk temporaries


def wigner_grid(lam, q, qt, psi, t, theta, prefactor):
    dim = psi.shape[0]
    signs = 1.0 - 2.0 * (np.arange(dim) % 2)
    out = np.empty(t.shape[0], dtype=float)
    for lo in range(0, t.shape[0], _CHUNK):
        hi = min(lo + _CHUNK, t.shape[0])
        step = np.exp(-1j * theta[lo:hi])
        powers = np.ones((dim, hi - lo), dtype=complex)
        powers[1:] = step
        np.cumprod(powers, axis=0, out=powers)
        u = psi[:, None] * powers
        c = (qt @ u.real) + 1j * (qt @ u.imag)
        c *= np.exp(1j * np.outer(lam, t[lo:hi]))
        pr = q @ c.real
        pi = q @ c.imag
        out[lo:hi] = (signs[:, None] * (pr * pr + pi * pi)).sum(axis=0)
    out *= prefactor
    return out
