"""Chain complexes of amalgamated centroids, nuclei, and derivations.

For a tensor set of valence v the terms are, top to bottom: the centroid
summands over all slot subsets of size k (k = v+1 down to 3), the nucleus
summands over all pairs, and the derivation algebra.  The maps restrict each
summand to its size-(k-1) subsets with signs from a SignFunction; the bottom
map places each nucleus pair into the derivation algebra with the anchor
signs.  Exactness at each junction is decided by comparing the kernel of the
outgoing map with the image of the incoming one as subspaces, and the
cokernel dimension at the derivation end counts outer derivations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field
from itertools import combinations

import numpy as np

from .errors import InternalInvariantError, UsageError
from .linalg import (
    Matrix,
    Subspace,
    column_space,
    inverse,
    member,
    nullspace,
    subspace_compare,
    vector,
    zero_vector,
)
from .opset import (
    OperatorSubspace,
    TransverseOperator,
    centroid,
    derivations,
    is_autotopism,
    nucleus,
    op_to_vector,
    slot_blocks,
)
from .orientation import SignFunction
from .tensor import as_tensor_set, is_fully_nondegenerate


@dataclass
class ChainTerm:
    """Direct sum of operator subspaces at one level, summands in lex order."""

    level: int
    summands: list  # [(subset tuple, OperatorSubspace)]

    @property
    def total_dim(self):
        return sum(v.dim for _, v in self.summands)

    def offsets(self):
        out = {}
        off = 0
        for sub, v in self.summands:
            out[sub] = off
            off += v.dim
        return out


@dataclass
class ChainMap:
    from_level: int
    to_level: int
    matrix: Matrix  # target coords x source coords

    @property
    def rank(self):
        from .linalg import rank as _rank

        return _rank(self.matrix)


@dataclass
class Junction:
    at: int
    dim_ker: int
    dim_im: int
    exact: bool


@dataclass
class ChainReport:
    valence: int
    field_name: str
    frame_dims: tuple
    fully_nondegenerate: bool
    guaranteed: bool
    terms: list  # ChainTerm, top level first; the derivation term has level 1
    maps: list  # ChainMap, top first
    junctions: list  # Junction, top first
    der_dim: int
    coker_dim: int
    map_ranks: list = dataclass_field(default_factory=list)

    def term(self, level) -> ChainTerm:
        for t in self.terms:
            if t.level == level:
                return t
        raise UsageError(f"no term at level {level}")

    def to_json_dict(self):
        return {
            "valence": self.valence,
            "field": self.field_name,
            "dims": list(self.frame_dims),
            "fully_nondegenerate": self.fully_nondegenerate,
            "guaranteed": self.guaranteed,
            "terms": [
                {
                    "level": t.level,
                    "summands": [
                        {"subset": list(sub), "dim": v.dim} for sub, v in t.summands
                    ],
                    "total": t.total_dim,
                }
                for t in self.terms
            ],
            "maps": [
                {"from": m.from_level, "to": m.to_level, "rank": r}
                for m, r in zip(self.maps, self.map_ranks)
            ],
            "junctions": [
                {
                    "at": j.at,
                    "dim_ker": j.dim_ker,
                    "dim_im": j.dim_im,
                    "exact": j.exact,
                }
                for j in self.junctions
            ],
            "der_dim": self.der_dim,
            "coker_dim": self.coker_dim,
        }


def _term_vector_of_image(term: ChainTerm, pieces):
    """Assemble target-term coordinates from per-summand image operators.

    pieces maps subset -> (sign, operator restricted to that subset).  Raises
    if any image fails membership of its summand: that means the sign
    function or the solver is broken, never the input.
    """
    field = None
    offsets = term.offsets()
    out = None
    for sub, vspace in term.summands:
        if field is None:
            field = vspace.field
            out = zero_vector(field, term.total_dim)
        piece = pieces.get(sub)
        if piece is None:
            continue
        sign, op = piece
        vec = op_to_vector(op, vspace.slots)
        if sign < 0:
            vec = vector(field, [field.neg(x) for x in vec])
        ok, coords = member(vec, vspace.space)
        if not ok:
            raise InternalInvariantError(
                f"image does not lie in the level-{term.level} summand {sub}"
            )
        off = offsets[sub]
        out[off : off + len(coords)] = coords
    return out


def _restrict_op(op: TransverseOperator, slots):
    return TransverseOperator(
        op.frame, op.field, {a: op.component(a) for a in slots}
    )


def _build_step_map(source: ChainTerm, target: ChainTerm, sigma: SignFunction) -> Matrix:
    """The restriction-sum map from level k+1 to level k (both >= 2)."""
    field = source.summands[0][1].field
    cols = []
    for sub, vspace in source.summands:
        for i in range(vspace.dim):
            op = vspace.basis_operator(i)
            pieces = {}
            for drop in sub:
                b_sub = tuple(x for x in sub if x != drop)
                sign = sigma.value(b_sub, sub)
                pieces[b_sub] = (sign, _restrict_op(op, b_sub))
            cols.append(_term_vector_of_image(target, pieces))
    if not cols:
        return Matrix.zeros(field, target.total_dim, 0)
    return Matrix(field, np.column_stack(cols))


def _sparse_rows(mat: Matrix):
    """Nonzero (column, value) pairs per row; the law systems are very sparse."""
    zero = mat.field.zero
    rows = []
    for i in range(mat.rows):
        row = mat.data[i]
        rows.append([(j, row[j]) for j in range(mat.cols) if row[j] != zero])
    return rows


def _violates(sparse_rows, vec, field):
    zero = field.zero
    for row in sparse_rows:
        acc = zero
        for j, c in row:
            x = vec[j]
            if x != zero:
                acc = field.add(acc, field.mul(c, x))
        if acc != zero:
            return True
    return False


def _law_checker(constraint: Matrix | None, field):
    """Exact residual test against the assembled law equations."""
    if constraint is None or not constraint.rows:
        return None
    if field.is_prime_field:
        from .linalg import mat_product

        def check(vec):
            res = mat_product(field, constraint.data, np.asarray(vec).reshape(-1, 1))
            return bool(res.any())

        return check
    rows = _sparse_rows(constraint)
    return lambda vec: _violates(rows, vec, field)


def _build_bottom_map(source: ChainTerm, der: OperatorSubspace, sigma: SignFunction,
                      der_constraint: Matrix | None) -> Matrix:
    """The map from the nucleus level into the derivation algebra."""
    field = der.field
    violates = _law_checker(der_constraint, field)
    cols = []
    for (a, b), vspace in source.summands:
        sa = sigma.value((a,), (a, b))
        sb = sigma.value((b,), (a, b))
        for i in range(vspace.dim):
            op = vspace.basis_operator(i)
            placed = TransverseOperator(
                der.frame,
                field,
                {a: op.component(a).scale(sa), b: op.component(b).scale(sb)},
            )
            vec = op_to_vector(placed, der.slots)
            if violates is not None and violates(vec):
                raise InternalInvariantError(
                    f"image of nucleus {(a, b)} violates the derivation law"
                )
            ok, coords = member(vec, der.space)
            if not ok:
                raise InternalInvariantError(
                    f"image of nucleus {(a, b)} is outside the derivation algebra"
                )
            cols.append(coords)
    if not cols:
        return Matrix.zeros(field, der.dim, 0)
    return Matrix(field, np.column_stack(cols))


def build_chain(S, sigma: SignFunction) -> ChainReport:
    """Compute all terms, the sign-twisted maps, and per-junction verdicts."""
    S = as_tensor_set(S)
    v = S.valence
    if sigma.valence != v:
        raise UsageError(f"sigma has valence {sigma.valence}, tensor set has {v}")
    nondeg = is_fully_nondegenerate(S)

    levels = list(range(v + 1, 2, -1)) + [2]
    terms = []
    for k in levels:
        if k >= 3:
            summands = [
                (sub, centroid(S, sub)) for sub in combinations(range(v + 1), k)
            ]
        else:
            summands = [
                ((a, b), nucleus(S, a, b)) for a, b in combinations(range(v + 1), 2)
            ]
        terms.append(ChainTerm(k, summands))

    der = derivations(S, keep_constraint=True)
    der_term = ChainTerm(1, [(tuple(range(v + 1)), der)])

    maps = []
    for i in range(len(terms) - 1):
        maps.append(
            ChainMap(terms[i].level, terms[i + 1].level,
                     _build_step_map(terms[i], terms[i + 1], sigma))
        )
    maps.append(ChainMap(2, 1, _build_bottom_map(terms[-1], der, sigma, der.constraint)))

    # chain property: consecutive compositions vanish identically
    for up, down in zip(maps, maps[1:]):
        comp = down.matrix @ up.matrix
        if not comp.is_zero():
            raise InternalInvariantError(
                f"maps {up.from_level}->{up.to_level}->{down.to_level} do not compose to zero"
            )

    ranks = [m.rank for m in maps]
    junctions = []
    for i, term in enumerate(terms):
        out_map = maps[i]
        ker = nullspace(out_map.matrix)
        if i == 0:
            im = Subspace.zero(ker.field, term.total_dim)
        else:
            im = column_space(maps[i - 1].matrix)
        verdict, dk, di = subspace_compare(ker, im)
        junctions.append(Junction(term.level, dk, di, verdict == "equal"))

    coker = der.dim - ranks[-1]
    return ChainReport(
        valence=v,
        field_name=str(S.field),
        frame_dims=S.frame.dims,
        fully_nondegenerate=nondeg.ok,
        guaranteed=nondeg.ok,
        terms=terms + [der_term],
        maps=maps,
        junctions=junctions,
        der_dim=der.dim,
        coker_dim=coker,
        map_ranks=ranks,
    )


def dimension_diagram(report: ChainReport, as_json: bool = False):
    """Per-level summand dimensions in lex order, plus totals and verdicts."""
    if as_json:
        return report.to_json_dict()
    lines = [
        f"valence {report.valence}, frame dims {list(report.frame_dims)}, field {report.field_name}",
        f"fully nondegenerate: {report.fully_nondegenerate}"
        + ("" if report.guaranteed else " (exactness not guaranteed)"),
    ]
    names = {2: "Nuc", 1: "Der"}
    for term in report.terms:
        label = names.get(term.level, f"Cen_{term.level}")
        if term.level == 1:
            lines.append(f"  {label}: {term.total_dim}")
            continue
        parts = ", ".join(
            "{" + ",".join(str(x) for x in sub) + "}:" + str(v.dim)
            for sub, v in term.summands
        )
        lines.append(f"  {label} [{parts}] total {term.total_dim}")
    for j in report.junctions:
        lines.append(
            f"  junction at level {j.at}: dim ker {j.dim_ker}, dim im {j.dim_im}, "
            + ("exact" if j.exact else "NOT exact")
        )
    lines.append(f"  cokernel at Der: {report.coker_dim}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Unit-group spot checks
# ---------------------------------------------------------------------------


@dataclass
class PairUnitReport:
    pair: tuple
    nucleus_dim: int
    samples: int
    autotopism_failures: int
    product_samples: int
    product_failures: int
    inconclusive: bool
    note: str | None = None


@dataclass
class UnitCheckReport:
    seed: int
    pairs: list
    ok: bool
    inconclusive: bool


def _random_unit(vspace: OperatorSubspace, rng, tries):
    """Rejection-sample an element with invertible components; None if exhausted."""
    field = vspace.field
    p = field.characteristic
    for _ in range(tries):
        if field.is_prime_field:
            coords = [rng.randrange(p) for _ in range(vspace.dim)]
        else:
            coords = [rng.randint(-9, 9) for _ in range(vspace.dim)]
        op = vspace.operator_from_coords(coords)
        invs = {a: inverse(op.component(a)) for a in vspace.slots}
        if all(m is not None for m in invs.values()):
            return op, invs
    return None, None


def _embed_unit(pair, op, invs, frame, field) -> TransverseOperator:
    """The unit-group embedding into autotopisms: invert the low slot when it is not 0."""
    a, b = pair
    if a == 0:
        comps = {0: op.component(0), b: op.component(b)}
    else:
        comps = {a: invs[a], b: op.component(b)}
    return TransverseOperator(frame, field, comps)


def _nucleus_product(pair, x, y, frame, field) -> TransverseOperator:
    """Ring product of nucleus elements; the low slot composes opposite when not 0."""
    a, b = pair
    if a == 0:
        comps = {0: x.component(0) @ y.component(0), b: x.component(b) @ y.component(b)}
    else:
        comps = {a: y.component(a) @ x.component(a), b: x.component(b) @ y.component(b)}
    return TransverseOperator(frame, field, comps)


def unit_check(S, sigma: SignFunction, sample_count: int = 50, seed: int = 0) -> UnitCheckReport:
    """Sample nucleus units, embed them, and confirm they are autotopisms.

    Also checks multiplicativity of the embedding on sample_count // 2 pairs.
    The sigma argument is only valence-checked; the embedding itself carries
    no signs.
    """
    S = as_tensor_set(S)
    if sample_count < 1:
        raise UsageError("sample_count must be >= 1")
    if sigma.valence != S.valence:
        raise UsageError("sigma valence does not match the tensor set")
    rng = random.Random(seed)
    tries = 64
    reports = []
    for a, b in combinations(range(S.valence + 1), 2):
        vspace = nucleus(S, a, b)
        fails = 0
        prod_fails = 0
        inconclusive = False
        note = None
        done = 0
        units = []
        for _ in range(sample_count):
            op, invs = _random_unit(vspace, rng, tries)
            if op is None:
                inconclusive = True
                note = "could not sample an invertible element; try a larger field"
                break
            alpha = _embed_unit((a, b), op, invs, S.frame, S.field)
            ok, _why = is_autotopism(S, alpha)
            if not ok:
                fails += 1
            units.append((op, invs, alpha))
            done += 1
        n_pairs = sample_count // 2 if len(units) >= 2 else 0
        checked_pairs = 0
        if not inconclusive:
            for _ in range(n_pairs):
                x = units[rng.randrange(len(units))]
                y = units[rng.randrange(len(units))]
                prod = _nucleus_product((a, b), x[0], y[0], S.frame, S.field)
                # products of invertible components stay invertible
                pinv = {s: inverse(prod.component(s)) for s in vspace.slots}
                left = _embed_unit((a, b), prod, pinv, S.frame, S.field)
                right_comps = {
                    s: x[2].component_or_identity(s) @ y[2].component_or_identity(s)
                    for s in (a, b)
                }
                right = TransverseOperator(S.frame, S.field, right_comps)
                if left != right:
                    prod_fails += 1
                checked_pairs += 1
        reports.append(
            PairUnitReport(
                pair=(a, b),
                nucleus_dim=vspace.dim,
                samples=done,
                autotopism_failures=fails,
                product_samples=checked_pairs,
                product_failures=prod_fails,
                inconclusive=inconclusive,
                note=note,
            )
        )
    any_inconclusive = any(r.inconclusive for r in reports)
    ok = all(
        r.autotopism_failures == 0 and r.product_failures == 0 for r in reports
    ) and not any_inconclusive
    return UnitCheckReport(seed=seed, pairs=reports, ok=ok, inconclusive=any_inconclusive)
