"""Shared fixtures and randomized-input helpers."""

import random

import pytest

from tensorsym.linalg import Matrix, inverse, rref
from tensorsym.scalar import gf, rationals
from tensorsym.tensor import Frame, Tensor, builtin, is_fully_nondegenerate, kron


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # trigger JIT compilation once so timed tests measure the math, not numba
    rref(Matrix.from_rows(gf(5), [[1, 2], [3, 4]]))
    rref(Matrix.from_rows(rationals(), [[1, 2], [3, 4]]))


@pytest.fixture(scope="session")
def q():
    return rationals()


@pytest.fixture(scope="session")
def f5():
    return gf(5)


@pytest.fixture(scope="session")
def f101():
    return gf(101)


def random_matrix(field, rows, cols, rng, lo=-4, hi=4):
    if field.is_prime_field:
        p = field.characteristic
        return Matrix.from_rows(field, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
    return Matrix.from_rows(field, [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        if inverse(m) is not None:
            return m


def random_tensor(field, dims, rng, density=0.6):
    entries = {}
    ranges = [range(d) for d in dims]

    def walk(prefix, pos):
        if pos == len(dims):
            if rng.random() < density:
                val = rng.randrange(1, field.characteristic) if field.is_prime_field else rng.randint(1, 4)
                entries[tuple(prefix)] = val
            return
        for i in ranges[pos]:
            walk(prefix + [i], pos + 1)

    walk([], 0)
    return Tensor(field, Frame(tuple(dims)), entries)


def random_fully_nondegenerate(field, dims, rng, tries=200):
    for _ in range(tries):
        t = random_tensor(field, dims, rng)
        if t.entries and is_fully_nondegenerate(t).ok:
            return t
    raise RuntimeError(f"no fully nondegenerate tensor found for dims {dims}")


def corpus(include_heavy=True):
    """The worked-example tensors, with the fields the checks run over."""
    out = [
        ("ghz", builtin("ghz", field=gf(101))),
        ("w", builtin("w", field=gf(101))),
        ("matmul234", builtin("matmul", (2, 3, 4), field=gf(101))),
    ]
    if include_heavy:
        out.append(
            ("cubic-sl2", kron(builtin("extcube4", field=gf(7)), builtin("sl2scaled", field=gf(7))))
        )
        out.append(
            (
                "fig5",
                kron(
                    builtin("galois-dot", (5, 2, 3), field=gf(5)),
                    builtin("galois-dot", (5, 3, 1), field=gf(5)),
                ),
            )
        )
    return out
