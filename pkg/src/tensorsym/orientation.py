"""Sign functions on the subset lattice of the slot set.

The chain maps between amalgamated operator algebras need a function sigma on
covering pairs (A, A u {b}) of subsets of {0, ..., v} with values +-1 such
that (i) it is total, (ii) the singleton-to-pair values follow a fixed anchor
table, and (iii) around every diamond {C, C u a, C u b, C u {a,b}} the two
paths carry opposite sign products.  Writing sigma = (-1)^x turns (iii) into
one GF(2) parity equation per diamond, so construction is a single exact
GF(2) elimination; the anchors enter as forced equations and the free
variables are set to 0, which yields the lexicographically least valid
assignment (variables ordered by (subset, added element); the elimination
runs on reversed columns so the forced-zero variables are the lex-earliest).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import backend
from .errors import InternalInvariantError, UsageError, ValidationError

MAX_VALENCE = 12  # 2**(v+1) vertices; the parity system grows fast


def _subsets(ground):
    out = [()]
    for x in ground:
        out += [s + (x,) for s in out]
    return sorted(out)


def edge_list(valence: int):
    """All covering pairs (A, b) with A a subset of [valence], b not in A, in lex order."""
    ground = list(range(valence + 1))
    edges = []
    for sub in _subsets(ground):
        in_sub = set(sub)
        for b in ground:
            if b not in in_sub:
                edges.append((sub, b))
    edges.sort()
    return edges


@dataclass
class SignFunction:
    """Total map from covering pairs of subsets of [valence] to {+1, -1}."""

    valence: int
    signs: dict  # (sorted tuple A, b) -> +-1

    def value(self, lower, upper) -> int:
        lo = tuple(sorted(lower))
        up = tuple(sorted(upper))
        added = set(up) - set(lo)
        if len(up) != len(lo) + 1 or len(added) != 1 or not set(lo) <= set(up):
            raise UsageError(f"({lo}, {up}) is not a covering pair")
        return self.signs[(lo, added.pop())]

    def dump_lines(self):
        out = []
        for (sub, b), sgn in sorted(self.signs.items()):
            lo = ",".join(str(x) for x in sub) or "-"
            up = ",".join(str(x) for x in sorted(sub + (b,)))
            out.append(f"{{{lo}}} -> {{{up}}} : {'+1' if sgn > 0 else '-1'}")
        return out


def _anchor_value(a: int, b: int, start: int) -> int:
    """Required sign on the edge {start} -> {a, b} for 0 <= a < b."""
    if start == a:
        return 1 if a == 0 else -1
    return 1


def build_sigma(valence: int, max_valence: int = MAX_VALENCE) -> SignFunction:
    """Solve the anchor + diamond parity system over GF(2), free variables zero.

    The result is verified exhaustively before it is returned; a failure would
    mean the parity encoding is wrong, so it raises rather than reports.
    """
    if not 1 <= valence <= max_valence:
        raise ValidationError(f"valence must be in [1, {max_valence}], got {valence}")
    edges = edge_list(valence)
    eidx = {e: i for i, e in enumerate(edges)}
    n = len(edges)
    ground = list(range(valence + 1))

    equations = []  # (list of edge ids, rhs bit)
    for a, b in combinations(ground, 2):
        equations.append(([eidx[((a,), b)]], 0 if _anchor_value(a, b, a) > 0 else 1))
        equations.append(([eidx[((b,), a)]], 0 if _anchor_value(a, b, b) > 0 else 1))
    for sub in _subsets(ground):
        rest = [x for x in ground if x not in sub]
        for a, b in combinations(rest, 2):
            ca = tuple(sorted(sub + (a,)))
            cb = tuple(sorted(sub + (b,)))
            equations.append(
                (
                    [eidx[(sub, a)], eidx[(ca, b)], eidx[(sub, b)], eidx[(cb, a)]],
                    1,
                )
            )

    # columns reversed so that zeroing the free variables is the lex-least solution
    M = np.zeros((len(equations), n + 1), np.int64)
    for r, (cols, rhs) in enumerate(equations):
        for c in cols:
            M[r, n - 1 - c] ^= 1
        M[r, n] = rhs
    R, rnk, piv = backend.rref_mod(M, 2)
    if any(c == n for c in piv):
        raise InternalInvariantError("sigma parity system is infeasible")
    x = np.zeros(n, np.int64)
    for i in range(rnk):
        x[int(piv[i])] = R[i, n]
    signs = {}
    for e, i in eidx.items():
        signs[e] = -1 if x[n - 1 - i] else 1
    sf = SignFunction(valence, signs)
    rep = verify_sigma(sf)
    if not rep.ok:
        raise InternalInvariantError(f"constructed sigma fails: {rep.first_violation}")
    return sf


def tau(sf: SignFunction, C, a: int, b: int) -> int:
    """sigma(C, Ca) sigma(Ca, Cab) + sigma(C, Cb) sigma(Cb, Cab) as an integer."""
    C = tuple(sorted(C))
    if a == b or a in C or b in C:
        raise UsageError(f"tau needs distinct a, b outside C, got C={C}, a={a}, b={b}")
    ca = tuple(sorted(C + (a,)))
    cb = tuple(sorted(C + (b,)))
    cab = tuple(sorted(C + (a, b)))
    return sf.value(C, ca) * sf.value(ca, cab) + sf.value(C, cb) * sf.value(cb, cab)


@dataclass(frozen=True)
class DiamondReport:
    """One diamond {C, C+a, C+b, C+{a,b}} with its parity value tau in {-2, 0, 2}."""

    C: tuple
    a: int
    b: int
    tau: int


def diamond(sf: SignFunction, C, a: int, b: int) -> DiamondReport:
    return DiamondReport(tuple(sorted(C)), a, b, tau(sf, C, a, b))


@dataclass
class SigmaReport:
    ok: bool
    total: bool
    anchors_ok: bool
    diamonds_checked: int
    first_violation: str | None
    first_diamond: DiamondReport | None = None


def verify_sigma(sf: SignFunction) -> SigmaReport:
    """Exhaustive check of totality, the anchor table, and every diamond."""
    ground = list(range(sf.valence + 1))
    expected = set(edge_list(sf.valence))
    total = set(sf.signs) == expected and all(v in (1, -1) for v in sf.signs.values())
    if not total:
        missing = sorted(expected - set(sf.signs))[:1]
        bad = f"missing edge {missing[0]}" if missing else "extra or non-unit values"
        return SigmaReport(False, False, False, 0, bad)
    anchors_ok = True
    violation = None
    for a, b in combinations(ground, 2):
        checks = [((a,), b, _anchor_value(a, b, a)), ((b,), a, _anchor_value(a, b, b))]
        for lo, added, want in checks:
            if sf.signs[(lo, added)] != want:
                anchors_ok = False
                violation = f"anchor sigma({{{lo[0]}}}, {{{a},{b}}}) != {want:+d}"
                break
        if not anchors_ok:
            break
    checked = 0
    if anchors_ok:
        for sub in _subsets(ground):
            rest = [x for x in ground if x not in sub]
            for a, b in combinations(rest, 2):
                checked += 1
                d = diamond(sf, sub, a, b)
                if d.tau != 0:
                    violation = f"tau({sub}, {a}, {b}) = {d.tau} != 0"
                    return SigmaReport(False, True, True, checked, violation, d)
    ok = total and anchors_ok and violation is None
    return SigmaReport(ok, total, anchors_ok, checked, violation)
