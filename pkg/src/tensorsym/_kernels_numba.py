"""JIT-compiled elimination kernels (the hot loops of every solve).

Both kernels are exact: ``rref_mod`` does Gauss-Jordan over GF(p) on int64
residues, ``rref_int`` does fraction-free Gauss-Jordan over the integers with
per-row gcd reduction and an overflow guard.  The pure-numpy twins live in
``_kernels_numpy``; outputs must match entry for entry.
"""

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def _modpow(base, exp, p):
    r = 1
    b = base % p
    while exp > 0:
        if exp & 1:
            r = r * b % p
        b = b * b % p
        exp >>= 1
    return r


@njit(cache=True)
def _gcd64(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b != 0:
        a, b = b, a % b
    return a


@njit(cache=True)
def rref_mod(M, p):
    """Reduce M in place to reduced row-echelon form over GF(p).

    Parameters
    ----------
    M : int64 2-d array, entries in [0, p)
        Overwritten with the RREF.
    p : int
        Prime modulus, p < 2**31 so products fit int64.

    Returns
    -------
    (M, rank, pivot_columns)
    """
    rows, cols = M.shape
    piv = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(c, cols):
                t = M[r, j]
                M[r, j] = M[pr, j]
                M[pr, j] = t
        inv = _modpow(M[r, c], p - 2, p)
        for j in range(c, cols):
            M[r, j] = M[r, j] * inv % p
        for i in range(rows):
            f = M[i, c]
            if i != r and f != 0:
                for j in range(c, cols):
                    M[i, j] = (M[i, j] - f * M[r, j]) % p
        piv[r] = c
        r += 1
        if r == rows:
            break
    return M, r, piv[:r]


@njit(cache=True)
def rref_int(M):
    """Fraction-free Gauss-Jordan over the integers, in place.

    Pivot rows end up with a positive pivot entry and zeros above and below
    every pivot; dividing row i by its pivot value yields the rational RREF.
    Every row update is ``row <- pivot*row - row[c]*pivot_row`` followed by a
    gcd reduction, so entries stay exact integers throughout.

    Returns
    -------
    (ok, rank, pivot_columns)
        ok=False means an update could have exceeded int64 (caller must fall
        back to arbitrary precision); M is then partially reduced garbage.
    """
    rows, cols = M.shape
    limit = float(2 ** 62)
    rmax = np.zeros(rows, np.float64)
    for i in range(rows):
        m = 0
        for j in range(cols):
            v = M[i, j]
            if v < 0:
                v = -v
            if v > m:
                m = v
        rmax[i] = m
    piv = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                t = M[r, j]
                M[r, j] = M[pr, j]
                M[pr, j] = t
            tm = rmax[r]
            rmax[r] = rmax[pr]
            rmax[pr] = tm
        g = 0
        for j in range(cols):
            g = _gcd64(g, M[r, j])
            if g == 1:
                break
        if g > 1:
            for j in range(cols):
                M[r, j] //= g
        if M[r, c] < 0:
            for j in range(cols):
                M[r, j] = -M[r, j]
        m = 0
        for j in range(cols):
            v = M[r, j]
            if v < 0:
                v = -v
            if v > m:
                m = v
        rmax[r] = m
        b = M[r, c]
        fb = float(b)
        for i in range(rows):
            a = M[i, c]
            if i == r or a == 0:
                continue
            fa = float(a) if a >= 0 else float(-a)
            if fb * rmax[i] + fa * rmax[r] >= limit:
                return False, r, piv[:r]
            # the update rescales the whole row, so it must cover every column
            for j in range(cols):
                M[i, j] = b * M[i, j] - a * M[r, j]
            g = 0
            for j in range(cols):
                g = _gcd64(g, M[i, j])
                if g == 1:
                    break
            m = 0
            if g > 1:
                for j in range(cols):
                    M[i, j] //= g
                    v = M[i, j]
                    if v < 0:
                        v = -v
                    if v > m:
                        m = v
            else:
                for j in range(cols):
                    v = M[i, j]
                    if v < 0:
                        v = -v
                    if v > m:
                        m = v
            rmax[i] = float(m)
        piv[r] = c
        r += 1
        if r == rows:
            break
    return True, r, piv[:r]
