"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and in-place semantics; used when the extension is not built.
"""


def _pair_views(state, target, ctrl_mask):
    n = state.shape[0].bit_length() - 1
    psi = state.reshape((2,) * n)
    idx = [slice(None)] * n
    q = 0
    mask = ctrl_mask
    while mask:
        if mask & 1:
            idx[n - 1 - q] = 1
        mask >>= 1
        q += 1
    idx0 = list(idx)
    idx1 = list(idx)
    idx0[n - 1 - target] = 0
    idx1[n - 1 - target] = 1
    return psi, tuple(idx0), tuple(idx1)


def apply_1q(state, target, m00, m01, m10, m11, ctrl_mask=0):
    psi, i0, i1 = _pair_views(state, target, ctrl_mask)
    a = psi[i0].copy()
    b = psi[i1]
    psi[i0] = m00 * a + m01 * b
    psi[i1] = m10 * a + m11 * b


def apply_x(state, target, ctrl_mask=0):
    psi, i0, i1 = _pair_views(state, target, ctrl_mask)
    a = psi[i0].copy()
    psi[i0] = psi[i1]
    psi[i1] = a


__all__ = ["apply_1q", "apply_x"]
