"""Finite-dimensional algebras from operator subspaces, and tensor comparison.

``structure_constants`` multiplies out the canonical basis of a centroid or
nucleus (or brackets a derivation algebra) and re-expands every product in the
basis, which both yields the multiplication table and proves closure.  The
Jacobson radical is the kernel of the trace form of the left regular
representation, valid over the rationals or over GF(p) with p > dim; smaller
characteristics report "unknown".
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import ClosureError, UsageError
from .linalg import Matrix, Subspace, member, nullspace, vector, zero_vector
from .opset import OperatorSubspace, TransverseOperator, op_to_vector
from .tensor import as_tensor_set


def _tensordot(field, a, b, axes):
    out = np.tensordot(a, b, axes=axes)
    if field.is_prime_field:
        return out % field.characteristic
    return out


def _zeros3(field, n):
    if field.is_prime_field:
        return np.zeros((n, n, n), np.int64)
    from fractions import Fraction

    arr = np.empty((n, n, n), object)
    arr[:] = Fraction(0)
    return arr


@dataclass
class AlgebraPresentation:
    """Structure constants const[i, j, k]: coeff of basis k in (basis i * basis j)."""

    field: object
    kind: str  # centroid | nucleus | derivation-bracket
    dim: int
    labels: tuple
    const: np.ndarray  # (dim, dim, dim)
    unital: bool
    identity_coords: np.ndarray | None

    def product_coords(self, x, y):
        if self.dim == 0:
            return zero_vector(self.field, 0)
        xy = np.tensordot(np.asarray(x), np.tensordot(np.asarray(y), self.const, axes=([0], [1])), axes=([0], [0]))
        if self.field.is_prime_field:
            xy = xy % self.field.characteristic
        return xy

    def left_mult_matrix(self, x) -> Matrix:
        if self.dim == 0:
            return Matrix.zeros(self.field, 0, 0)
        m = _tensordot(self.field, np.asarray(x), self.const, axes=([0], [0]))
        return Matrix(self.field, m.T.copy())  # [l, j] = coeff of e_l in x * e_j

    def is_commutative(self) -> bool:
        c, ct = self.const, np.swapaxes(self.const, 0, 1)
        if self.field.is_prime_field:
            return bool(np.array_equal(c, ct))
        return all(a == b for a, b in zip(c.flat, ct.flat))

    def is_associative(self) -> bool:
        lhs = _tensordot(self.field, self.const, self.const, axes=([2], [0]))
        rhs = _tensordot(self.field, self.const, self.const, axes=([2], [1]))
        rhs = np.transpose(rhs, (2, 0, 1, 3))
        if self.field.is_prime_field:
            rhs = rhs % self.field.characteristic
            return bool(np.array_equal(lhs, rhs))
        return all(a == b for a, b in zip(lhs.flat, rhs.flat))

    def jacobi_holds(self) -> bool:
        d = _tensordot(self.field, self.const, self.const, axes=([2], [0]))
        total = d + np.transpose(d, (1, 2, 0, 3)) + np.transpose(d, (2, 0, 1, 3))
        if self.field.is_prime_field:
            total = total % self.field.characteristic
            return not total.any()
        return all(x == 0 for x in total.flat)


_PRODUCT_KINDS = ("centroid", "nucleus", "derivation-bracket")


def _basis_product(kind, pair, x: TransverseOperator, y: TransverseOperator):
    """Multiply two operators under the kind's convention."""
    field = x.field
    if kind == "derivation-bracket":
        comps = {
            a: x.component(a) @ y.component(a) - y.component(a) @ x.component(a)
            for a in x.support | y.support
        }
        return TransverseOperator(x.frame, field, comps)
    if kind == "nucleus" and pair is not None and pair[0] != 0:
        a, b = pair
        return TransverseOperator(
            x.frame,
            field,
            {a: y.component(a) @ x.component(a), b: x.component(b) @ y.component(b)},
        )
    comps = {a: x.component(a) @ y.component(a) for a in x.support | y.support}
    return TransverseOperator(x.frame, field, comps)


def structure_constants(V: OperatorSubspace, kind: str) -> AlgebraPresentation:
    """Expand all basis products in the basis; closure failure is an error.

    Product conventions: centroid and nucleus pairs containing slot 0 compose
    componentwise; a nucleus pair {a, b} with 0 < a < b composes opposite on
    the a side; derivation-bracket takes componentwise commutators (a Lie
    presentation: associativity is skipped, Jacobi is checked instead).
    """
    if kind not in _PRODUCT_KINDS:
        raise UsageError(f"unknown algebra kind {kind!r}")
    pair = None
    if kind == "nucleus":
        if len(V.slots) != 2:
            raise UsageError("nucleus presentation needs a pair-supported subspace")
        pair = (min(V.slots), max(V.slots))
    field = V.field
    n = V.dim
    ops = V.operators()
    const = _zeros3(field, n)
    for i in range(n):
        for j in range(n):
            prod = _basis_product(kind, pair, ops[i], ops[j])
            vec = op_to_vector(prod, V.slots)
            ok, coords = member(vec, V.space)
            if not ok:
                raise ClosureError(
                    f"product of basis elements {i} and {j} left the span "
                    f"({kind} on slots {V.slots})",
                    pair=(i, j),
                )
            const[i, j, :] = coords
    unital = False
    identity_coords = None
    if kind != "derivation-bracket":
        ident = TransverseOperator(
            V.frame, field, {a: Matrix.identity(field, V.frame.dim(a)) for a in V.slots}
        )
        ok, coords = member(op_to_vector(ident, V.slots), V.space)
        if ok:
            unital = True
            identity_coords = coords
    pres = AlgebraPresentation(
        field=field,
        kind=kind,
        dim=n,
        labels=tuple(f"b{i}" for i in range(n)),
        const=const,
        unital=unital,
        identity_coords=identity_coords,
    )
    if kind == "derivation-bracket":
        if not pres.jacobi_holds():
            raise ClosureError("bracket presentation violates the Jacobi identity")
    elif not pres.is_associative():
        raise ClosureError(f"{kind} presentation is not associative")
    return pres


# ---------------------------------------------------------------------------
# Radical via the trace form
# ---------------------------------------------------------------------------


def _trace_gram(A: AlgebraPresentation) -> Matrix:
    # T(x, y) = trace of left multiplication by xy
    tr = np.array([0] * A.dim, object) if not A.field.is_prime_field else np.zeros(A.dim, np.int64)
    for m in range(A.dim):
        s = A.field.zero
        for j in range(A.dim):
            s = A.field.add(s, A.const[m, j, j])
        tr[m] = s
    g = _tensordot(A.field, A.const, tr, axes=([2], [0]))
    return Matrix(A.field, g)


def radical_known(A: AlgebraPresentation) -> bool:
    """Dickson's criterion: characteristic 0 or p > dim."""
    return (not A.field.is_prime_field) or A.field.characteristic > A.dim


def radical_subspace(A: AlgebraPresentation) -> Subspace | None:
    """Kernel of the trace form in algebra coordinates, when the criterion applies."""
    if A.kind == "derivation-bracket":
        raise UsageError("radical is defined here for associative presentations")
    if not radical_known(A):
        return None
    if A.dim == 0:
        return Subspace.zero(A.field, 0)
    return nullspace(_trace_gram(A))


def radical_dim(A: AlgebraPresentation):
    """Dimension of the Jacobson radical, or None when the guard fails."""
    rad = radical_subspace(A)
    return None if rad is None else rad.dim


def semisimple_quotient(A: AlgebraPresentation) -> AlgebraPresentation:
    """Structure constants of A modulo its radical, on the non-pivot coordinates."""
    rad = radical_subspace(A)
    if rad is None:
        raise UsageError("radical unknown in this characteristic")
    piv = set(rad.pivots)
    keep = [i for i in range(A.dim) if i not in piv]
    n = len(keep)

    def project(vec):
        vec = vector(A.field, list(vec))
        for r, pc in enumerate(rad.pivots):
            f = vec[pc]
            if f != A.field.zero:
                row = rad.basis.row(r)
                for c in range(A.dim):
                    vec[c] = A.field.sub(vec[c], A.field.mul(f, row[c]))
        return [vec[i] for i in keep]

    const = _zeros3(A.field, n)
    for i, bi in enumerate(keep):
        for j, bj in enumerate(keep):
            prod = project(A.const[bi, bj, :])
            for k in range(n):
                const[i, j, k] = prod[k]
    ident = None
    unital = False
    if A.unital and A.identity_coords is not None:
        ident_p = project(A.identity_coords)
        unital = True
        ident = vector(A.field, ident_p)
    return AlgebraPresentation(
        field=A.field,
        kind=A.kind,
        dim=n,
        labels=tuple(f"q{i}" for i in range(n)),
        const=const,
        unital=unital,
        identity_coords=ident,
    )


# ---------------------------------------------------------------------------
# Fingerprints and comparison
# ---------------------------------------------------------------------------


def minpoly_degree(A: AlgebraPresentation, coords) -> int:
    """Degree of the minimal polynomial of left multiplication by the element.

    Krylov loop on the flattened powers of L with incremental reduction
    against the pivots found so far; the first dependent power is the degree.
    """
    if A.dim == 0:
        return 0
    field = A.field
    L = A.left_mult_matrix(vector(field, list(coords)))
    n = L.rows
    power = Matrix.identity(field, n)
    pivots = []  # (pivot column, reduced row)
    for k in range(n + 1):
        v = power.data.reshape(-1).copy()
        for pc, row in pivots:
            f = v[pc]
            if f != field.zero:
                if field.is_prime_field:
                    v = (v - f * row) % field.characteristic
                else:
                    v = v - f * row
        nz = [j for j in range(len(v)) if v[j] != field.zero]
        if not nz:
            return k
        lead = nz[0]
        inv = field.inv(v[lead])
        if field.is_prime_field:
            v = v * inv % field.characteristic
        else:
            v = v * inv
        # keep the pivot rows mutually reduced so one sweep is a full reduction
        for idx, (pc, row) in enumerate(pivots):
            f = row[lead]
            if f != field.zero:
                if field.is_prime_field:
                    pivots[idx] = (pc, (row - f * v) % field.characteristic)
                else:
                    pivots[idx] = (pc, row - f * v)
        pivots.append((lead, v))
        power = power @ L
    return n  # the minimal polynomial degree never exceeds the dimension


@dataclass(frozen=True)
class AlgebraFingerprint:
    """Basis-independent summary used to tell algebras (hence tensors) apart."""

    dim: int
    commutative: bool
    radical_dim: int | None  # None = unknown (characteristic too small)
    semisimple_dim: int | None
    minpoly_degrees: tuple
    seed: int

    @property
    def generic_minpoly_degree(self):
        return max(self.minpoly_degrees) if self.minpoly_degrees else 0

    def key(self):
        """The comparison key: stable under frame basis change.

        The full multiset of sampled min-poly degrees depends on the sampled
        elements, so only its maximum (the generic degree, with overwhelming
        probability) participates in comparisons.
        """
        return (
            self.dim,
            self.commutative,
            self.radical_dim,
            self.semisimple_dim,
            self.generic_minpoly_degree,
        )

    def to_json_dict(self):
        return {
            "dim": self.dim,
            "commutative": self.commutative,
            "radical_dim": "unknown" if self.radical_dim is None else self.radical_dim,
            "semisimple_dim": "unknown" if self.semisimple_dim is None else self.semisimple_dim,
            "minpoly_degrees": list(self.minpoly_degrees),
            "seed": self.seed,
        }


def _sample_count(field):
    # small fields need more draws before one hits a generic element
    if not field.is_prime_field:
        return 8
    p = field.characteristic
    if p <= 7:
        return 24
    if p <= 31:
        return 12
    return 8


def fingerprint(V: OperatorSubspace, kind: str, seed: int = 0) -> AlgebraFingerprint:
    """Deterministic fingerprint of the algebra carried by an operator subspace."""
    A = structure_constants(V, kind)
    commutative = A.is_commutative()
    rad = None if kind == "derivation-bracket" else radical_dim(A)
    semi = None if rad is None else A.dim - rad
    rng = random.Random(seed)
    degrees = []
    if A.dim:
        for _ in range(_sample_count(A.field)):
            if A.field.is_prime_field:
                coords = [rng.randrange(A.field.characteristic) for _ in range(A.dim)]
            else:
                coords = [rng.randint(-9, 9) for _ in range(A.dim)]
            degrees.append(minpoly_degree(A, coords))
    return AlgebraFingerprint(
        dim=A.dim,
        commutative=commutative,
        radical_dim=rad,
        semisimple_dim=semi,
        minpoly_degrees=tuple(sorted(degrees)),
        seed=seed,
    )


@dataclass
class CompareResult:
    distinguished: bool
    witness: str | None

    def __str__(self):
        if self.distinguished:
            return f"distinguished (witness: {self.witness})"
        return "not distinguished by these invariants"


def compare(S1, S2, sigma, seed: int = 0) -> CompareResult:
    """Distinguish two tensor sets by frames, dimension diagrams, and fingerprints.

    Never claims equivalence: these invariants are necessary, not sufficient.
    """
    from .chain import build_chain

    S1 = as_tensor_set(S1)
    S2 = as_tensor_set(S2)
    if S1.field != S2.field:
        raise UsageError("compare needs both tensor sets over the same field")
    if S1.frame.dims != S2.frame.dims:
        return CompareResult(
            True, f"frame dims {list(S1.frame.dims)} vs {list(S2.frame.dims)}"
        )
    r1 = build_chain(S1, sigma)
    r2 = build_chain(S2, sigma)
    for t1, t2 in zip(r1.terms, r2.terms):
        for (sub1, v1), (sub2, v2) in zip(t1.summands, t2.summands):
            if v1.dim != v2.dim:
                label = "derivation algebra" if t1.level == 1 else f"level-{t1.level} summand {{{','.join(map(str, sub1))}}}"
                return CompareResult(True, f"{label} dim {v1.dim} vs {v2.dim}")
    if r1.coker_dim != r2.coker_dim:
        return CompareResult(True, f"cokernel dim {r1.coker_dim} vs {r2.coker_dim}")
    v = S1.valence
    # fingerprint the term subspaces the chains already solved for
    terms = []
    if v >= 2:
        top1 = r1.term(v + 1).summands[0][1]
        top2 = r2.term(v + 1).summands[0][1]
        terms.append(("centroid", f"centroid {{{','.join(map(str, range(v + 1)))}}}", top1, top2))
    for ((a, b), n1), (_, n2) in zip(r1.term(2).summands, r2.term(2).summands):
        terms.append(("nucleus", f"nucleus {{{a},{b}}}", n1, n2))
    fields = ("dim", "commutative", "radical_dim", "semisimple_dim", "generic minpoly degree")
    for kind, label, va, vb in terms:
        fa = fingerprint(va, kind, seed=seed)
        fb = fingerprint(vb, kind, seed=seed)
        for name, x, y in zip(fields, fa.key(), fb.key()):
            if x is None or y is None:
                continue  # unknown radical cannot distinguish
            if x != y:
                return CompareResult(True, f"{label} {name} {x} vs {y}")
    return CompareResult(False, None)
