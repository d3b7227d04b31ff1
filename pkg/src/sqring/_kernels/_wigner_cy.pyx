# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled Wigner grid kernel.  Per phase-space point: a phase recurrence
# builds the rotated state, two real-matrix/complex-vector products rotate
# it through the displacement eigenbasis, and a parity-weighted norm is
# accumulated.  Parallel over grid points.

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange, threadid
from libc.math cimport cos, sin

cnp.import_array()


def wigner_grid(double[::1] lam,
                double[:, ::1] q,
                double[:, ::1] qt,
                double complex[::1] psi,
                double[::1] t,
                double[::1] theta,
                double prefactor,
                int num_threads):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t npts = t.shape[0]
    cdef Py_ssize_t j, n, k, tid
    cdef double tt, arg, acc, s, zr, zi
    cdef double step_re, step_im, cur_re, cur_im, tmp_re
    cdef double ph_re, ph_im, pr, pi

    if num_threads < 1:
        num_threads = 1

    out_np = np.empty(npts, dtype=np.float64)
    scratch_np = np.empty((num_threads, 4, dim), dtype=np.float64)
    cdef double[::1] out = out_np
    cdef double[:, :, ::1] scratch = scratch_np

    for j in prange(npts, nogil=True, schedule="static", num_threads=num_threads):
        tid = threadid()
        tt = t[j]
        # rotated state u = psi_n e^{-i n theta} via the phase recurrence
        step_re = cos(theta[j])
        step_im = -sin(theta[j])
        cur_re = 1.0
        cur_im = 0.0
        for n in range(dim):
            scratch[tid, 0, n] = psi[n].real * cur_re - psi[n].imag * cur_im
            scratch[tid, 1, n] = psi[n].real * cur_im + psi[n].imag * cur_re
            tmp_re = cur_re * step_re - cur_im * step_im
            cur_im = cur_re * step_im + cur_im * step_re
            cur_re = tmp_re
        # c = e^{i t L} Q^T u
        for k in range(dim):
            zr = 0.0
            zi = 0.0
            for n in range(dim):
                zr = zr + qt[k, n] * scratch[tid, 0, n]
                zi = zi + qt[k, n] * scratch[tid, 1, n]
            arg = lam[k] * tt
            ph_re = cos(arg)
            ph_im = sin(arg)
            scratch[tid, 2, k] = zr * ph_re - zi * ph_im
            scratch[tid, 3, k] = zr * ph_im + zi * ph_re
        # parity-weighted norm of Q c
        acc = 0.0
        s = 1.0
        for n in range(dim):
            pr = 0.0
            pi = 0.0
            for k in range(dim):
                pr = pr + q[n, k] * scratch[tid, 2, k]
                pi = pi + q[n, k] * scratch[tid, 3, k]
            acc = acc + s * (pr * pr + pi * pi)
            s = -s
        out[j] = prefactor * acc

    return out_np
