import random
from itertools import product

import pytest

from tensorsym.errors import UsageError, ValidationError
from tensorsym.linalg import Matrix, Subspace, member, nullspace, subspace_compare
from tensorsym.opset import (
    LinearLaw,
    TransverseOperator,
    centroid,
    derivation_law,
    derivations,
    is_autotopism,
    law_defect,
    local_derivation_law,
    local_derivations,
    nucleus,
    nucleus_law,
    op_from_vector,
    op_to_vector,
    operator_satisfies,
    restrict,
    slot_blocks,
    solve_laws,
)
from tensorsym.scalar import gf, rationals
from tensorsym.tensor import Frame, Tensor, TensorSet, builtin

from conftest import random_fully_nondegenerate

Q = rationals()


def oracle_solution_space(S, laws):
    """Independent route: one column of law defects per unit operator direction.

    Stacks law_defect over every (law, basis tuple) for each elementary matrix
    direction of the support, then takes the kernel.  Shares no code with the
    solver's index-juggling assembly.
    """
    S = TensorSet([S]) if not isinstance(S, TensorSet) else S
    field = S.field
    frame = S.frame
    slots_desc = tuple(sorted(laws[0].support, reverse=True))
    blocks, ambient = slot_blocks(frame, slots_desc)
    columns = []
    domain = [range(d) for d in frame.domain_dims]
    for k in range(ambient):
        vec = [field.zero] * ambient
        vec[k] = field.one
        op = op_from_vector(frame, field, slots_desc, vec)
        col = []
        for t in S.members:
            for law in laws:
                for idx in product(*domain):
                    col.extend(list(law_defect(t, law, op, idx)))
        columns.append(col)
    m = Matrix.from_rows(field, columns)  # rows = directions
    return nullspace(Matrix(field, m.transpose().data.copy()))


@pytest.mark.parametrize("field", [Q, gf(5)])
def test_solver_matches_oracle_on_small_corpus(field):
    cases = [
        (builtin("ghz", field=field), [derivation_law(2)]),
        (builtin("w", field=field), [derivation_law(2)]),
        (builtin("ghz", field=field), [nucleus_law(1, 2)]),
        (builtin("w", field=field), [nucleus_law(0, 1)]),
        (builtin("ghz", field=field), [nucleus_law(a, b, support=[0, 1, 2]) for a, b in ((0, 1), (0, 2), (1, 2))]),
        (builtin("matmul", (2, 2, 2), field=field), [derivation_law(2)]),
    ]
    for t, laws in cases:
        got = solve_laws(t, laws)
        want = oracle_solution_space(t, laws)
        assert subspace_compare(got.space, want)[0] == "equal"


def test_derivations_ghz_explicit_basis():
    # hand elimination: (diag(a,b), diag(c,d), diag(a+c, b+d))
    d = derivations(builtin("ghz", field=Q))
    assert d.dim == 4
    assert d.slots == (2, 1, 0)
    explicit = []
    for a, b, c, dd in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]:
        row = [a, 0, 0, b] + [c, 0, 0, dd] + [a + c, 0, 0, b + dd]
        explicit.append(row)
    want = Subspace.from_rows(Q, 12, explicit)
    assert subspace_compare(d.space, want)[0] == "equal"


def test_derivations_dims_match_worked_examples():
    assert derivations(builtin("w", field=Q)).dim == 5
    assert derivations(builtin("matmul", (2, 3, 4), field=gf(101))).dim == 28


def test_nucleus_dims_matmul():
    mm = builtin("matmul", (2, 3, 4), field=gf(101))
    assert nucleus(mm, 0, 1).dim == 16
    assert nucleus(mm, 0, 2).dim == 4
    assert nucleus(mm, 1, 2).dim == 9
    assert nucleus(builtin("ghz", field=Q), 1, 2).dim == 2


def test_nucleus_slot_validation():
    mm = builtin("ghz", field=Q)
    with pytest.raises(UsageError):
        nucleus(mm, 1, 1)
    with pytest.raises(UsageError):
        nucleus(mm, 0, 3)


def test_centroid_dims():
    assert centroid(builtin("ghz", field=Q), [0, 1, 2]).dim == 2
    assert centroid(builtin("w", field=Q), [0, 1, 2]).dim == 2
    assert centroid(builtin("matmul", (2, 3, 4), field=gf(101)), [0, 1, 2]).dim == 1
    with pytest.raises(UsageError):
        centroid(builtin("ghz", field=Q), [1])


def test_local_derivations():
    ghz = builtin("ghz", field=Q)
    assert local_derivations(ghz, [1, 2]).dim == 2
    mm = builtin("matmul", (2, 3, 4), field=gf(101))
    assert local_derivations(mm, [0]).dim == 0  # fullness forces w_0 = 0
    # on the full slot set, the law is the derivation law
    full = local_derivations(ghz, [0, 1, 2])
    der = derivations(ghz)
    assert subspace_compare(full.space, der.space)[0] == "equal"


def test_nucleus_local_derivation_sign_bijection():
    # negating the a-component maps Nuc(a,b) onto Der_{a,b} for 0 < a < b
    for t in (builtin("ghz", field=Q), builtin("matmul", (2, 2, 2), field=gf(5))):
        nuc = nucleus(t, 1, 2)
        loc = local_derivations(t, [1, 2])
        assert nuc.dim == loc.dim
        flipped = []
        for i in range(nuc.dim):
            op = nuc.basis_operator(i)
            neg = op.with_component(1, -op.component(1))
            flipped.append(list(op_to_vector(neg, nuc.slots)))
        if flipped:
            want = Subspace.from_rows(t.field, loc.space.ambient_dim, flipped)
            assert subspace_compare(want, loc.space)[0] == "equal"


def test_solve_laws_rejects_bad_input():
    ghz = builtin("ghz", field=Q)
    with pytest.raises(ValidationError):
        LinearLaw.of({})
    with pytest.raises(ValidationError):
        LinearLaw.of({3: 1}, support=[1, 2])
    with pytest.raises(UsageError):
        solve_laws(ghz, [])
    with pytest.raises(UsageError):
        solve_laws(ghz, [nucleus_law(0, 1), nucleus_law(0, 2)])


def test_all_zero_law_in_field():
    t5 = builtin("ghz", field=gf(5))
    with pytest.raises(ValidationError):
        solve_laws(t5, [LinearLaw.of({1: 5, 2: 10}, support=[1, 2])])


def test_x0_alone_on_full_tensor_is_zero():
    mm = builtin("matmul", (2, 3, 4), field=Q)
    v = solve_laws(mm, [LinearLaw.of({0: 1})])
    assert v.dim == 0


def test_soundness_reverification():
    # every returned basis element satisfies its laws through the eval oracle
    mm = builtin("matmul", (2, 3, 4), field=gf(101))
    for vspace, laws in [
        (derivations(mm), [derivation_law(2)]),
        (nucleus(mm, 0, 2), [nucleus_law(0, 2)]),
        (centroid(mm, [0, 1, 2]), [nucleus_law(a, b, support=[0, 1, 2]) for a, b in ((0, 1), (0, 2), (1, 2))]),
    ]:
        for i in range(vspace.dim):
            assert operator_satisfies(mm, laws, vspace.basis_operator(i))


def test_bracket_closure():
    for t in (builtin("ghz", field=Q), builtin("w", field=gf(101))):
        der = derivations(t)
        law = [derivation_law(t.valence)]
        for i in range(der.dim):
            for j in range(i + 1, der.dim):
                x, y = der.basis_operator(i), der.basis_operator(j)
                br = TransverseOperator(
                    t.frame,
                    t.field,
                    {
                        a: x.component(a) @ y.component(a) - y.component(a) @ x.component(a)
                        for a in der.slots
                    },
                )
                ok, _ = member(op_to_vector(br, der.slots), der.space)
                assert ok


def test_centroid_componentwise_commutativity():
    for t in (builtin("w", field=Q), builtin("matmul", (2, 3, 4), field=gf(101))):
        cen = centroid(t, range(t.valence + 1))
        ops = cen.operators()
        for x in ops:
            for y in ops:
                for a in cen.slots:
                    assert x.component(a) @ y.component(a) == y.component(a) @ x.component(a)


def test_scale_invariance_of_solutions():
    rng = random.Random(2)
    t = random_fully_nondegenerate(gf(7), (2, 2, 2), rng)
    for lam in (2, 3, 6):
        scaled = t.scale(lam)
        a = derivations(t)
        b = derivations(scaled)
        assert subspace_compare(a.space, b.space)[0] == "equal"
        na = nucleus(t, 0, 1)
        nb = nucleus(scaled, 0, 1)
        assert subspace_compare(na.space, nb.space)[0] == "equal"


def test_restrict():
    ghz = builtin("ghz", field=Q)
    d = derivations(ghz)
    r0 = restrict(d, [0])
    # all 2x2 diagonal matrices
    want = Subspace.from_rows(Q, 4, [[1, 0, 0, 0], [0, 0, 0, 1]])
    assert subspace_compare(r0, want)[0] == "equal"
    full = restrict(d, [0, 1, 2])
    assert subspace_compare(full, d.space)[0] == "equal"
    mm = builtin("matmul", (2, 3, 4), field=gf(101))
    assert restrict(nucleus(mm, 1, 2), [2]).dim == 9
    with pytest.raises(UsageError):
        restrict(d, [3])
    with pytest.raises(UsageError):
        restrict(nucleus(mm, 1, 2), [])


def test_restriction_rank_nullity_on_derivations():
    # projecting the derivation algebra onto slots A loses exactly the
    # derivations supported on the complement
    from itertools import chain, combinations

    rng = random.Random(13)
    tensors = [
        builtin("ghz", field=Q),
        builtin("w", field=gf(101)),
        random_fully_nondegenerate(gf(5), (2, 2, 2), rng),
        random_fully_nondegenerate(gf(5), (2, 3, 2, 2), rng),
    ]
    for t in tensors:
        v = t.valence
        der = derivations(t)
        slots = list(range(v + 1))
        subsets = chain.from_iterable(combinations(slots, k) for k in range(1, v + 1))
        for sub in subsets:
            comp = [a for a in slots if a not in sub]
            if not comp:
                continue
            projected = restrict(der, sub)
            vanishing = local_derivations(t, comp)
            assert projected.dim + vanishing.dim == der.dim, (t, sub)


def test_empty_tensor_set_is_usage_error():
    with pytest.raises(UsageError):
        TensorSet([])


def test_solve_laws_multiple_members():
    # the joint solution is the intersection of the individual ones
    f = gf(5)
    t1 = builtin("ghz", field=f)
    t2 = builtin("w", field=f)
    joint = derivations(TensorSet([t1, t2]))
    d1 = derivations(t1)
    d2 = derivations(t2)
    assert joint.dim <= min(d1.dim, d2.dim)
    for i in range(joint.dim):
        op = joint.basis_operator(i)
        assert operator_satisfies(t1, [derivation_law(2)], op)
        assert operator_satisfies(t2, [derivation_law(2)], op)


def test_dims_agree_across_fields():
    # integer-entry tensors: solution dimensions over Q equal those over a
    # prime too large for any elimination coefficient to vanish mod p
    big = gf(1000003)
    for name, params in (("ghz", ()), ("w", ()), ("matmul", (2, 3, 4))):
        tq = builtin(name, params, field=Q)
        tp = builtin(name, params, field=big)
        assert derivations(tq).dim == derivations(tp).dim
        for a, b in ((0, 1), (0, 2), (1, 2)):
            assert nucleus(tq, a, b).dim == nucleus(tp, a, b).dim
        assert centroid(tq, [0, 1, 2]).dim == centroid(tp, [0, 1, 2]).dim


def test_factor_tensor_derivation_algebras():
    # the two kron factors of the non-associative example have known algebras:
    # Der(extcube4) = K^2 + gl_4, Der(sl2scaled) = K + K + gl_3, and every
    # proper local derivation algebra off the core slots is K^{|A|-1}
    from itertools import combinations

    ext = builtin("extcube4", field=gf(7))
    assert derivations(ext).dim == 18
    for k in (2, 3):
        for sub in combinations(range(4), k):
            assert local_derivations(ext, sub).dim == k - 1
    sl2 = builtin("sl2scaled", field=gf(7))
    assert derivations(sl2).dim == 11
    assert local_derivations(sl2, [0, 1, 2]).dim == 10  # K + gl_3
    for sub in combinations(range(4), 2):
        assert local_derivations(sl2, sub).dim == 1
    for sub in ((0, 1, 3), (0, 2, 3), (1, 2, 3)):
        assert local_derivations(sl2, sub).dim == 2


def test_toy_multiplication_tensor():
    # <t|: K x K -> K by multiplication: Der is the tangent plane
    # {(l2, l1, l2+l1)}, each nucleus and the centroid are one-dimensional
    from itertools import combinations

    toy = Tensor(Q, Frame((1, 1, 1)), {(0, 0, 0): 1})
    assert derivations(toy).dim == 2
    for a, b in combinations(range(3), 2):
        assert nucleus(toy, a, b).dim == 1
    assert centroid(toy, [0, 1, 2]).dim == 1


def test_is_autotopism_examples():
    ghz = builtin("ghz", field=Q)
    ident = TransverseOperator(ghz.frame, Q, {})
    assert is_autotopism(ghz, ident) == (True, None)
    m = Matrix.from_rows(Q, [[3, 0], [0, 3]])
    m2 = Matrix.from_rows(Q, [[9, 0], [0, 9]])
    scale = TransverseOperator(ghz.frame, Q, {2: m, 1: m, 0: m2})
    assert is_autotopism(ghz, scale)[0]
    swap = Matrix.from_rows(Q, [[0, 1], [1, 0]])
    assert is_autotopism(ghz, TransverseOperator(ghz.frame, Q, {2: swap, 1: swap, 0: swap}))[0]
    # wrong slot-0 power is not an autotopism
    bad = TransverseOperator(ghz.frame, Q, {2: m, 1: m, 0: m})
    ok, why = is_autotopism(ghz, bad)
    assert not ok and "mismatch" in why


def test_is_autotopism_noninvertible_reports_reason():
    ghz = builtin("ghz", field=Q)
    sing = Matrix.from_rows(Q, [[1, 0], [0, 0]])
    ok, why = is_autotopism(ghz, TransverseOperator(ghz.frame, Q, {2: sing}))
    assert not ok and "slot 2" in why


def test_operator_subspace_coords_roundtrip():
    der = derivations(builtin("ghz", field=gf(7)))
    op = der.operator_from_coords([1, 2, 3, 4])
    coords = der.coords_of(op)
    assert coords is not None and list(coords) == [1, 2, 3, 4]
    outside = TransverseOperator(der.frame, der.field, {2: Matrix.from_rows(gf(7), [[0, 1], [0, 0]])})
    assert der.coords_of(outside) is None
