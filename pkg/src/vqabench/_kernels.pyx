# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels.

Amplitudes are little-endian: bit ``q`` of a basis index is qubit ``q``.
All functions update ``state`` in place.
"""


def apply_1q(double complex[::1] state, int target,
             double complex m00, double complex m01,
             double complex m10, double complex m11,
             long long ctrl_mask=0):
    """Apply a 2x2 matrix to ``target`` on every basis pair whose control bits are all set."""
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t half = dim >> 1
    cdef long long stride = 1LL << target
    cdef long long low = stride - 1
    cdef Py_ssize_t k
    cdef long long i, j
    cdef double complex a, b
    with nogil:
        for k in range(half):
            i = ((k >> target) << (target + 1)) | (k & low)
            if (i & ctrl_mask) != ctrl_mask:
                continue
            j = i | stride
            a = state[i]
            b = state[j]
            state[i] = m00 * a + m01 * b
            state[j] = m10 * a + m11 * b


def apply_x(double complex[::1] state, int target, long long ctrl_mask=0):
    """Controlled bit flip (X, CNOT, Toffoli) as an amplitude swap."""
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t half = dim >> 1
    cdef long long stride = 1LL << target
    cdef long long low = stride - 1
    cdef Py_ssize_t k
    cdef long long i, j
    cdef double complex a
    with nogil:
        for k in range(half):
            i = ((k >> target) << (target + 1)) | (k & low)
            if (i & ctrl_mask) != ctrl_mask:
                continue
            j = i | stride
            a = state[i]
            state[i] = state[j]
            state[j] = a
