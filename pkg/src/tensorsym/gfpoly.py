"""Polynomial arithmetic over GF(p), just enough for extension-field tables.

Polynomials are coefficient lists, low degree first, entries in [0, p).
Used by the galois-dot tensor builder: it needs the lexicographically least
monic irreducible of degree e (coefficients compared low degree first) and the
multiplication table of GF(p^e) in the power basis 1, x, ..., x^(e-1).
"""

from __future__ import annotations

from itertools import product

from .errors import ValidationError


def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def poly_mod(f, m, p):
    # m monic
    f = list(f)
    dm = len(m) - 1
    while len(f) - 1 >= dm and f:
        lead = f[-1]
        if lead:
            shift = len(f) - 1 - dm
            for i in range(dm + 1):
                f[shift + i] = (f[shift + i] - lead * m[i]) % p
        f.pop()
    return _trim(f)


def poly_powmod(f, e, m, p):
    result = [1]
    base = poly_mod(f, m, p)
    while e > 0:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def poly_sub(f, g, p):
    n = max(len(f), len(g))
    out = [
        ((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p
        for i in range(n)
    ]
    return _trim(out)


def poly_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        # make g monic, then reduce
        inv = pow(g[-1], p - 2, p)
        gm = [c * inv % p for c in g]
        f, g = g, poly_mod(f, gm, p)
    return f


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p) -> bool:
    """Deterministic test: x^(p^e) = x mod f, and no factor of smaller degree."""
    e = len(f) - 1
    if e < 1 or f[-1] != 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    xq = poly_powmod(x, p ** e, f, p)
    if poly_sub(xq, x, p):
        return False
    for q in _prime_factors(e):
        xr = poly_powmod(x, p ** (e // q), f, p)
        g = poly_gcd(f, poly_sub(xr, x, p), p)
        if len(g) - 1 > 0:
            return False
    return True


def least_irreducible(p, e):
    """Lex-least monic irreducible of degree e over GF(p), low coefficients first."""
    if e == 1:
        return [0, 1]
    for tail in product(range(p), repeat=e):
        f = list(tail) + [1]
        if is_irreducible(f, p):
            return f
    raise ValidationError(f"no irreducible of degree {e} over GF({p})")  # unreachable


def ext_mul_table(p, e):
    """Structure constants of GF(p^e): table[i][j][k] = coeff of x^k in x^i * x^j."""
    f = least_irreducible(p, e)
    table = [[None] * e for _ in range(e)]
    for i in range(e):
        for j in range(e):
            prod = [0] * (i + j) + [1]
            red = poly_mod(prod, f, p)
            table[i][j] = red + [0] * (e - len(red))
    return table
