"""Gate kernels operating in-place on dense complex amplitude buffers.

Two implementations are provided: numba-jitted loops (default) and a
vectorized pure-numpy path. Set ``VQPREP_BACKEND=numpy`` before import to
force the numpy path, e.g. on platforms without numba or for benchmarking
(see benchmarks/kernel_benchmark.py).

Bit convention: qubit 0 is the most significant bit of the basis index,
so qubit q addresses stride ``2**(n_qubits - 1 - q)``.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND = os.environ.get("VQPREP_BACKEND", "numba").lower()
if BACKEND not in ("numba", "numpy"):
    raise ValueError(f"VQPREP_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")


def _np_apply_1q(amps, n_qubits, qubit, m00, m01, m10, m11):
    a = np.moveaxis(amps.reshape((2,) * n_qubits), qubit, 0)
    a0 = a[0].copy()
    a[0] = m00 * a0 + m01 * a[1]
    a[1] = m10 * a0 + m11 * a[1]


def _np_apply_mcz(amps, n_qubits, mask):
    idx = np.arange(amps.shape[0])
    amps[(idx & mask) == mask] *= -1.0


def _np_apply_c1q(amps, n_qubits, control, target, m00, m01, m10, m11):
    a = np.moveaxis(amps.reshape((2,) * n_qubits), (control, target), (0, 1))
    b0 = a[1, 0].copy()
    a[1, 0] = m00 * b0 + m01 * a[1, 1]
    a[1, 1] = m10 * b0 + m11 * a[1, 1]


def _loop_apply_1q(amps, n_qubits, qubit, m00, m01, m10, m11):
    stride = 1 << (n_qubits - 1 - qubit)
    period = stride << 1
    for base in range(0, amps.shape[0], period):
        for off in range(base, base + stride):
            i1 = off + stride
            a0 = amps[off]
            a1 = amps[i1]
            amps[off] = m00 * a0 + m01 * a1
            amps[i1] = m10 * a0 + m11 * a1


def _loop_apply_mcz(amps, n_qubits, mask):
    for i in range(amps.shape[0]):
        if i & mask == mask:
            amps[i] = -amps[i]


def _loop_apply_c1q(amps, n_qubits, control, target, m00, m01, m10, m11):
    cbit = 1 << (n_qubits - 1 - control)
    stride = 1 << (n_qubits - 1 - target)
    for i0 in range(amps.shape[0]):
        if (i0 & cbit) and not (i0 & stride):
            i1 = i0 + stride
            a0 = amps[i0]
            a1 = amps[i1]
            amps[i0] = m00 * a0 + m01 * a1
            amps[i1] = m10 * a0 + m11 * a1


if BACKEND == "numba":
    from numba import njit

    _sig_1q = "void(complex128[::1], int64, int64, complex128, complex128, complex128, complex128)"
    _sig_mcz = "void(complex128[::1], int64, int64)"
    _sig_c1q = "void(complex128[::1], int64, int64, int64, complex128, complex128, complex128, complex128)"

    apply_1q = njit(_sig_1q, cache=True)(_loop_apply_1q)
    apply_mcz = njit(_sig_mcz, cache=True)(_loop_apply_mcz)
    apply_c1q = njit(_sig_c1q, cache=True)(_loop_apply_c1q)
else:
    apply_1q = _np_apply_1q
    apply_mcz = _np_apply_mcz
    apply_c1q = _np_apply_c1q
