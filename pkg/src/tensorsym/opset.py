"""Linear operator sets of a tensor set: derivations, nuclei, centroids.

A transverse operator is one square matrix per frame slot.  Each homogeneous
linear law sum_a c_a * x_a (with x_0 acting by post-composition) imposes, on
every member tensor and every tuple of standard basis vectors, one linear
equation per output coordinate on the operator entries.  ``solve_laws``
assembles those equations sparsely and returns the nullspace as a canonical
``OperatorSubspace`` supported on the law's slots.

Coordinates: the ambient space of a subspace supported on slots A is the
concatenation of the vectorized (row-major) slot blocks, slots in descending
order, matching the (w_v, ..., w_0) tuple convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import UsageError, ValidationError
from .linalg import (
    Matrix,
    Subspace,
    inverse,
    member,
    nullspace,
    vec_product,
    vector,
    zero_vector,
)
from .tensor import Tensor, TensorSet, as_tensor_set, eval_basis, evaluate


@dataclass(frozen=True)
class LinearLaw:
    """A law sum coeff_a * x_a == 0, solved on operators supported on `support`.

    The support is the slot set the operators may be nonzero on; coefficients
    are implicitly zero on support slots they do not mention (a centroid pair
    law constrains two slots of a larger support).
    """

    support: frozenset
    coefficients: tuple  # ((slot, coeff), ...) sorted by slot descending

    @classmethod
    def of(cls, coeffs: dict, support=None):
        if not coeffs:
            raise ValidationError("law needs at least one coefficient")
        support = frozenset(coeffs) if support is None else frozenset(support)
        if not set(coeffs) <= support:
            raise ValidationError("law coefficients must live inside the support")
        items = tuple(sorted(coeffs.items(), key=lambda kv: -kv[0]))
        return cls(support, items)

    def coeff_map(self, field):
        out = {a: field.coerce(c) for a, c in self.coefficients}
        if all(c == field.zero for c in out.values()):
            raise ValidationError("law has all coefficients zero in this field")
        return out


def derivation_law(valence: int) -> LinearLaw:
    """x_v + ... + x_1 - x_0 on the full slot set."""
    coeffs = {a: 1 for a in range(1, valence + 1)}
    coeffs[0] = -1
    return LinearLaw.of(coeffs)


def nucleus_law(a: int, b: int, support=None) -> LinearLaw:
    """x_a - x_b on the pair {a, b} (or a larger stated support), a < b."""
    if a >= b:
        raise UsageError(f"nucleus law needs a < b, got ({a}, {b})")
    return LinearLaw.of({a: 1, b: -1}, support=support)


def centroid_laws(slots) -> list:
    slots = sorted(slots)
    if len(slots) < 2:
        raise UsageError("centroid needs at least two slots")
    return [nucleus_law(a, b, support=slots) for a, b in combinations(slots, 2)]


def local_derivation_law(slots) -> LinearLaw:
    slots = set(slots)
    if not slots:
        raise UsageError("local derivation law needs a nonempty slot set")
    coeffs = {a: 1 for a in slots if a != 0}
    if 0 in slots:
        coeffs[0] = -1
    return LinearLaw.of(coeffs, support=slots)


# ---------------------------------------------------------------------------
# Transverse operators
# ---------------------------------------------------------------------------


class TransverseOperator:
    """One square matrix per slot; slots absent from `components` act as zero."""

    __slots__ = ("frame", "field", "components")

    def __init__(self, frame, field, components: dict):
        self.frame = frame
        self.field = field
        comps = {}
        for slot, mat in components.items():
            d = frame.dim(slot)
            if mat.shape != (d, d):
                raise UsageError(
                    f"slot {slot} component is {mat.shape}, expected ({d}, {d})"
                )
            comps[int(slot)] = mat
        self.components = comps

    def component(self, slot) -> Matrix:
        mat = self.components.get(slot)
        if mat is None:
            d = self.frame.dim(slot)
            return Matrix.zeros(self.field, d, d)
        return mat

    def component_or_identity(self, slot) -> Matrix:
        mat = self.components.get(slot)
        if mat is None:
            return Matrix.identity(self.field, self.frame.dim(slot))
        return mat

    @property
    def support(self):
        return frozenset(self.components)

    def scale(self, c):
        return TransverseOperator(
            self.frame, self.field, {a: m.scale(c) for a, m in self.components.items()}
        )

    def with_component(self, slot, mat):
        comps = dict(self.components)
        comps[slot] = mat
        return TransverseOperator(self.frame, self.field, comps)

    def __eq__(self, other):
        if not isinstance(other, TransverseOperator):
            return NotImplemented
        if self.frame != other.frame or self.field != other.field:
            return False
        slots = set(self.components) | set(other.components)
        return all(self.component(a) == other.component(a) for a in slots)

    def __repr__(self):
        return f"TransverseOperator(slots {sorted(self.components)})"


def slot_blocks(frame, slots_desc):
    """(offset, size) of each slot's vectorized block in the ambient space."""
    blocks = {}
    off = 0
    for a in slots_desc:
        d = frame.dim(a)
        blocks[a] = (off, d)
        off += d * d
    return blocks, off


def op_to_vector(op: TransverseOperator, slots_desc):
    blocks, ambient = slot_blocks(op.frame, slots_desc)
    out = zero_vector(op.field, ambient)
    for a in slots_desc:
        off, d = blocks[a]
        out[off : off + d * d] = op.component(a).data.reshape(-1)
    return out


def op_from_vector(frame, field, slots_desc, vec):
    blocks, ambient = slot_blocks(frame, slots_desc)
    if len(vec) != ambient:
        raise UsageError(f"vector length {len(vec)} != ambient {ambient}")
    comps = {}
    for a in slots_desc:
        off, d = blocks[a]
        comps[a] = Matrix(field, np.array(vec[off : off + d * d]).reshape(d, d).copy())
    return TransverseOperator(frame, field, comps)


class OperatorSubspace:
    """Solution space of a family of laws, supported on a fixed slot set."""

    __slots__ = ("frame", "field", "slots", "space", "laws", "constraint")

    def __init__(self, frame, field, slots_desc, space: Subspace, laws=(), constraint=None):
        self.frame = frame
        self.field = field
        self.slots = tuple(slots_desc)
        self.space = space
        self.laws = tuple(laws)
        # assembled equation matrix, kept on request so callers can recheck
        # candidate members against the raw law equations
        self.constraint = constraint

    @property
    def support(self):
        return frozenset(self.slots)

    @property
    def dim(self):
        return self.space.dim

    @property
    def ambient_dim(self):
        return self.space.ambient_dim

    def basis_operator(self, i) -> TransverseOperator:
        return op_from_vector(self.frame, self.field, self.slots, self.space.basis.row(i))

    def operators(self):
        return [self.basis_operator(i) for i in range(self.dim)]

    def operator_from_coords(self, coords) -> TransverseOperator:
        vec = vec_product(self.field, self.space.basis.transpose().data, vector(self.field, coords))
        return op_from_vector(self.frame, self.field, self.slots, vec)

    def coords_of(self, op: TransverseOperator):
        """Coordinates of op in the canonical basis, or None if outside."""
        ok, coords = member(op_to_vector(op, self.slots), self.space)
        return coords if ok else None

    def __repr__(self):
        return f"OperatorSubspace(slots {self.slots}, dim {self.dim})"


# ---------------------------------------------------------------------------
# The solver
# ---------------------------------------------------------------------------


def _domain_strides(frame):
    v = frame.valence
    strides = [0] * v
    s = 1
    for pos in range(v - 1, -1, -1):
        strides[pos] = s
        s *= frame.dims[pos]
    return strides


def solve_laws(S, laws, keep_constraint: bool = False) -> OperatorSubspace:
    """All transverse operators supported on the laws' slots killing every law.

    Equations are generated over standard basis tuples only; multilinearity
    makes this equivalent to the universally quantified condition.
    """
    S = as_tensor_set(S)
    laws = list(laws)
    if not laws:
        raise UsageError("need at least one law")
    support = laws[0].support
    for law in laws[1:]:
        if law.support != support:
            raise UsageError("all laws must share one support")
    for a in support:
        if not 0 <= a <= S.valence:
            raise UsageError(f"slot {a} outside the frame")
    field = S.field
    frame = S.frame
    slots_desc = tuple(sorted(support, reverse=True))
    blocks, ambient = slot_blocks(frame, slots_desc)
    strides = _domain_strides(frame)
    v = frame.valence
    zero = field.zero

    rows = {}

    def bump(key, col, val):
        row = rows.get(key)
        if row is None:
            row = rows[key] = {}
        cur = row.get(col)
        new = field.add(cur, val) if cur is not None else val
        if new == zero:
            row.pop(col, None)
        else:
            row[col] = new

    for li, law in enumerate(laws):
        coeffs = law.coeff_map(field)
        for ti, t in enumerate(S.members):
            for idx, val in t.entries.items():
                k = idx[v]
                base_flat = sum(idx[pos] * strides[pos] for pos in range(v))
                for a, lam in coeffs.items():
                    if lam == zero:
                        continue
                    if a == 0:
                        c = field.mul(lam, val)
                        col0 = blocks[0][0]
                        d0 = frame.out_dim
                        for m in range(d0):
                            bump((li, ti, base_flat, m), col0 + m * d0 + k, c)
                    else:
                        pos = v - a
                        d = frame.dims[pos]
                        c = field.mul(lam, val)
                        off = blocks[a][0] + idx[pos] * d
                        anchor = base_flat - idx[pos] * strides[pos]
                        for j in range(d):
                            bump((li, ti, anchor + j * strides[pos], k), off + j, c)

    # row order and duplicates never change the RREF; deduping and sorting the
    # short rows of sparse systems speeds elimination a lot, while for dense
    # systems (e.g. after a random change of basis) it costs more than it saves
    total_items = sum(map(len, rows.values()))
    sparse = total_items <= 8 * max(len(rows), 1)
    if field.is_prime_field and not sparse:
        M = np.zeros((len(rows), ambient), np.int64)
        for i, row in enumerate(rows.values()):
            if row:
                cols = np.fromiter(row.keys(), np.int64, len(row))
                vals = np.fromiter(row.values(), np.int64, len(row))
                M[i, cols] = vals
        M = M[M.any(axis=1)]
    else:
        unique = sorted({tuple(sorted(row.items())) for row in rows.values() if row})
        if field.is_prime_field:
            M = np.zeros((len(unique), ambient), np.int64)
        else:
            M = Matrix.zeros(field, len(unique), ambient).data
        for i, row in enumerate(unique):
            for col, val in row:
                M[i, col] = val
    system = Matrix(field, M)
    space = nullspace(system)
    return OperatorSubspace(
        frame, field, slots_desc, space, laws,
        constraint=system if keep_constraint else None,
    )


def derivations(S, keep_constraint: bool = False) -> OperatorSubspace:
    S = as_tensor_set(S)
    return solve_laws(S, [derivation_law(S.valence)], keep_constraint=keep_constraint)


def nucleus(S, a: int, b: int) -> OperatorSubspace:
    S = as_tensor_set(S)
    if not 0 <= a < b <= S.valence:
        raise UsageError(f"nucleus needs 0 <= a < b <= {S.valence}, got ({a}, {b})")
    return solve_laws(S, [nucleus_law(a, b)])


def centroid(S, slots) -> OperatorSubspace:
    S = as_tensor_set(S)
    slots = sorted(set(slots))
    if any(not 0 <= a <= S.valence for a in slots):
        raise UsageError("centroid slots outside the frame")
    return solve_laws(S, centroid_laws(slots))


def local_derivations(S, slots) -> OperatorSubspace:
    S = as_tensor_set(S)
    slots = sorted(set(slots))
    if not slots or any(not 0 <= a <= S.valence for a in slots):
        raise UsageError("local derivation slots must be a nonempty subset of the frame")
    return solve_laws(S, [local_derivation_law(slots)])


def restrict(V: OperatorSubspace, slots) -> Subspace:
    """Image of the coordinate projection of V onto a subset of its support."""
    slots = set(slots)
    if not slots or not slots <= V.support:
        raise UsageError(f"restriction slots {sorted(slots)} not inside support {sorted(V.support)}")
    sub_desc = tuple(sorted(slots, reverse=True))
    blocks, _ = slot_blocks(V.frame, V.slots)
    cols = []
    for a in sub_desc:
        off, d = blocks[a]
        cols.extend(range(off, off + d * d))
    if V.dim == 0:
        return Subspace.zero(V.field, sum(V.frame.dim(a) ** 2 for a in sub_desc))
    proj = V.space.basis.data[:, cols]
    return Subspace.from_matrix(Matrix(V.field, proj.copy()))


# ---------------------------------------------------------------------------
# Direct (assembly-free) verification and autotopisms
# ---------------------------------------------------------------------------


def law_defect(t: Tensor, law: LinearLaw, op: TransverseOperator, domain_idx):
    """Value of the law at one basis tuple, computed through evaluate()."""
    field = t.field
    coeffs = law.coeff_map(field)
    v = t.valence
    acc = zero_vector(field, t.frame.out_dim)
    for a, lam in coeffs.items():
        if lam == field.zero:
            continue
        if a == 0:
            img = vec_product(field, op.component(0).data, eval_basis(t, domain_idx))
        else:
            pos = v - a
            vecs = []
            for q in range(v):
                if q == pos:
                    vecs.append(list(op.component(a).data[:, domain_idx[q]]))
                else:
                    e = [field.zero] * t.frame.dims[q]
                    e[domain_idx[q]] = field.one
                    vecs.append(e)
            img = evaluate(t, vecs)
        for m in range(len(acc)):
            acc[m] = field.add(acc[m], field.mul(lam, img[m]))
    return acc


def operator_satisfies(S, laws, op: TransverseOperator) -> bool:
    """Independent check of a solution: evaluates every law on every basis tuple."""
    S = as_tensor_set(S)
    zero = S.field.zero
    domain_ranges = [range(d) for d in S.frame.domain_dims]
    for t in S.members:
        for law in laws:
            for idx in product(*domain_ranges):
                defect = law_defect(t, law, op, idx)
                if any(x != zero for x in defect):
                    return False
    return True


def is_autotopism(S, alpha: TransverseOperator):
    """Does alpha_0 <t|u> = <t|alpha_v u_v, ..., alpha_1 u_1> hold on all basis tuples?

    Components absent from alpha act as the identity.  Returns (ok, reason);
    a non-invertible component reports False with the offending slot.
    """
    S = as_tensor_set(S)
    field = S.field
    v = S.valence
    comps = {}
    for a in range(v + 1):
        g = alpha.component_or_identity(a)
        if inverse(g) is None:
            return False, f"slot {a} component is not invertible"
        comps[a] = g
    for t in S.members:
        for idx in product(*[range(d) for d in S.frame.domain_dims]):
            vecs = [list(comps[v - pos].data[:, idx[pos]]) for pos in range(v)]
            rhs = evaluate(t, vecs)
            lhs = vec_product(field, comps[0].data, eval_basis(t, idx))
            if field.is_prime_field:
                if not np.array_equal(lhs, rhs):
                    return False, f"evaluation mismatch at basis tuple {idx}"
            elif any(a_ != b_ for a_, b_ in zip(lhs, rhs)):
                return False, f"evaluation mismatch at basis tuple {idx}"
    return True, None
