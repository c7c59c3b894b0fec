"""Numba gate kernels over dense little-endian amplitude arrays.

Each kernel mutates the amplitude array in place and writes every element
exactly once, so the parallel variants are bit-identical to the sequential
ones.  Small states dispatch to the sequential build (thread launch overhead
dominates below ~2^16 amplitudes).
"""

import numpy as np
from numba import njit, prange

_PARALLEL_THRESHOLD = 1 << 16


def _su2_impl(amps, q, u00, u01, u10, u11):
    half = amps.shape[0] >> 1
    step = 1 << q
    mask = step - 1
    for t in prange(half):
        i0 = ((t >> q) << (q + 1)) | (t & mask)
        i1 = i0 | step
        a = amps[i0]
        b = amps[i1]
        amps[i0] = u00 * a + u01 * b
        amps[i1] = u10 * a + u11 * b


def _rx_pair_impl(amps, q, r, c, s):
    # RX(2*theta)xRX(2*theta) with c=cos(theta), s=sin(theta) on qubits q < r.
    # Explicit real arithmetic (the coefficients are real or pure imaginary)
    # and block-structured iteration keep the loop SIMD- and cache-friendly.
    n = amps.shape[0]
    bq = 1 << q
    br = 1 << r
    cc = c * c
    cs = c * s
    ss = s * s
    n_hi = n >> (r + 1)
    for h in prange(n_hi):
        hi = h << (r + 1)
        for mid in range(hi, hi + br, bq << 1):
            for i00 in range(mid, mid + bq):
                i01 = i00 | bq
                i10 = i00 | br
                i11 = i01 | br
                a00 = amps[i00]
                a01 = amps[i01]
                a10 = amps[i10]
                a11 = amps[i11]
                u_re = a01.real + a10.real
                u_im = a01.imag + a10.imag
                v_re = a00.real + a11.real
                v_im = a00.imag + a11.imag
                amps[i00] = complex(
                    cc * a00.real - ss * a11.real + cs * u_im,
                    cc * a00.imag - ss * a11.imag - cs * u_re,
                )
                amps[i01] = complex(
                    cc * a01.real - ss * a10.real + cs * v_im,
                    cc * a01.imag - ss * a10.imag - cs * v_re,
                )
                amps[i10] = complex(
                    cc * a10.real - ss * a01.real + cs * v_im,
                    cc * a10.imag - ss * a01.imag - cs * v_re,
                )
                amps[i11] = complex(
                    cc * a11.real - ss * a00.real + cs * u_im,
                    cc * a11.imag - ss * a00.imag - cs * u_re,
                )


def _cnot_impl(amps, control, target):
    lo = control if control < target else target
    hi = target if control < target else control
    quarter = amps.shape[0] >> 2
    blo = 1 << lo
    bhi = 1 << hi
    bc = 1 << control
    bt = 1 << target
    for t in prange(quarter):
        x = ((t >> lo) << (lo + 1)) | (t & (blo - 1))
        x = ((x >> hi) << (hi + 1)) | (x & (bhi - 1))
        i = x | bc
        j = i | bt
        tmp = amps[i]
        amps[i] = amps[j]
        amps[j] = tmp


def _qubit_phase_impl(amps, q, p0, p1):
    n = amps.shape[0]
    for i in prange(n):
        if (i >> q) & 1:
            amps[i] *= p1
        else:
            amps[i] *= p0


def _zz_phase_impl(amps, u, v, p_same, p_diff):
    n = amps.shape[0]
    for i in prange(n):
        if ((i >> u) ^ (i >> v)) & 1:
            amps[i] *= p_diff
        else:
            amps[i] *= p_same


def _diag_table_impl(amps, values, table, offset):
    # amps[i] *= table[values[i] + offset]
    n = amps.shape[0]
    for i in prange(n):
        amps[i] *= table[values[i] + offset]


def _copy_zz_phase_impl(dst, src, u, v, p_re, p_im):
    # dst[i] = src[i] * (p_re + 1j*p_im) where bits u,v agree, conjugate phase otherwise
    n = src.shape[0]
    for i in prange(n):
        a = src[i]
        if ((i >> u) ^ (i >> v)) & 1:
            dst[i] = complex(a.real * p_re + a.imag * p_im, a.imag * p_re - a.real * p_im)
        else:
            dst[i] = complex(a.real * p_re - a.imag * p_im, a.imag * p_re + a.real * p_im)


@njit(cache=True, fastmath=True)
def _expect_diag(amps, values):
    # sum_i |amps[i]|^2 * values[i], sequential loop for deterministic summation
    acc = 0.0
    for i in range(amps.shape[0]):
        a = amps[i]
        acc += (a.real * a.real + a.imag * a.imag) * values[i]
    return acc


_su2_seq = njit(cache=True)(_su2_impl)
_su2_par = njit(cache=True, parallel=True)(_su2_impl)
_rx_pair_seq = njit(cache=True, fastmath=True)(_rx_pair_impl)
_rx_pair_par = njit(cache=True, fastmath=True, parallel=True)(_rx_pair_impl)
_cnot_seq = njit(cache=True)(_cnot_impl)
_cnot_par = njit(cache=True, parallel=True)(_cnot_impl)
_qubit_phase_seq = njit(cache=True, fastmath=True)(_qubit_phase_impl)
_qubit_phase_par = njit(cache=True, fastmath=True, parallel=True)(_qubit_phase_impl)
_zz_phase_seq = njit(cache=True, fastmath=True)(_zz_phase_impl)
_zz_phase_par = njit(cache=True, fastmath=True, parallel=True)(_zz_phase_impl)
_diag_table_seq = njit(cache=True, fastmath=True)(_diag_table_impl)
_diag_table_par = njit(cache=True, fastmath=True, parallel=True)(_diag_table_impl)
_copy_zz_phase_seq = njit(cache=True, fastmath=True)(_copy_zz_phase_impl)
_copy_zz_phase_par = njit(cache=True, fastmath=True, parallel=True)(_copy_zz_phase_impl)


def apply_su2(amps, q, u00, u01, u10, u11):
    k = _su2_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _su2_seq
    k(amps, q, complex(u00), complex(u01), complex(u10), complex(u11))


def apply_rx_pair(amps, q, r, c, s):
    k = _rx_pair_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _rx_pair_seq
    k(amps, q, r, float(c), float(s))


def apply_cnot(amps, control, target):
    k = _cnot_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _cnot_seq
    k(amps, control, target)


def apply_qubit_phase(amps, q, p0, p1):
    k = _qubit_phase_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _qubit_phase_seq
    k(amps, q, complex(p0), complex(p1))


def apply_zz_phase(amps, u, v, p_same, p_diff):
    k = _zz_phase_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _zz_phase_seq
    k(amps, u, v, complex(p_same), complex(p_diff))


def apply_diag_table(amps, values, table, offset):
    k = _diag_table_par if amps.shape[0] >= _PARALLEL_THRESHOLD else _diag_table_seq
    k(amps, values, table, offset)


def copy_with_zz_phase(dst, src, u, v, p_same):
    """dst = src with exp(-i*delta*Z_u Z_v) applied, p_same = e^{-i*delta}."""
    k = _copy_zz_phase_par if src.shape[0] >= _PARALLEL_THRESHOLD else _copy_zz_phase_seq
    k(dst, src, u, v, float(p_same.real), float(p_same.imag))


def expect_diag(amps, values) -> float:
    return float(_expect_diag(amps, values))
