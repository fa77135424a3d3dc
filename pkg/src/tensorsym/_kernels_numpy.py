"""Pure-numpy fallbacks for the elimination kernels.

Selected by ``TENSORSYM_BACKEND=numpy`` or when numba is unavailable.  The
algorithms are identical to ``_kernels_numba`` (same pivot rule: first nonzero
row), only the row updates are vectorized instead of JIT loops, so both
backends produce the same RREF bit for bit.
"""

import numpy as np

BACKEND_NAME = "numpy"


def rref_mod(M, p):
    """Gauss-Jordan over GF(p) on an int64 array; see the numba twin."""
    rows, cols = M.shape
    piv = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr], c:] = M[[pr, r], c:]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r, c:] = M[r, c:] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            M[hit, c:] = (M[hit, c:] - np.outer(col[hit], M[r, c:])) % p
        piv.append(c)
        r += 1
        if r == rows:
            break
    return M, r, np.array(piv, np.int64)


def rref_int(M):
    """Fraction-free integer Gauss-Jordan with gcd reduction; see the numba twin."""
    rows, cols = M.shape
    limit = float(2 ** 62)
    rmax = np.abs(M).max(axis=1).astype(np.float64) if cols else np.zeros(rows)
    piv = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
            rmax[[r, pr]] = rmax[[pr, r]]
        g = int(np.gcd.reduce(M[r]))
        if g > 1:
            M[r] //= g
        if M[r, c] < 0:
            M[r] = -M[r]
        rmax[r] = float(np.abs(M[r]).max())
        b = int(M[r, c])
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            bound = float(b) * rmax[hit] + np.abs(col[hit]).astype(np.float64) * rmax[r]
            if (bound >= limit).any():
                return False, r, np.array(piv, np.int64)
            # the update rescales the whole row, so it must cover every column
            M[hit] = b * M[hit] - np.outer(col[hit], M[r])
            gs = np.gcd.reduce(np.abs(M[hit]), axis=1)
            gs[gs == 0] = 1
            M[hit] //= gs[:, None]
            rmax[hit] = np.abs(M[hit]).max(axis=1).astype(np.float64)
        piv.append(c)
        r += 1
        if r == rows:
            break
    return True, r, np.array(piv, np.int64)
