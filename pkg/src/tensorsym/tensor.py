"""Tensors as sparse grids of exact scalars, plus the example generators.

A tensor of valence v is a multilinear map taking one vector from each domain
slot v, ..., 1 to a vector in slot 0.  Entries are stored sparsely in a dict
keyed by index tuples (i_v, ..., i_1, k); absent means zero.  Slot a of the
frame has dimension ``frame.dim(a)``; tuple position j corresponds to slot
v - j, the last position to slot 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError, ValidationError
from .gfpoly import ext_mul_table
from .linalg import Matrix, rank, vector, zero_vector
from .scalar import FieldSpec, gf


@dataclass(frozen=True)
class Frame:
    """Dimensions (d_v, ..., d_1, d_0) of the spaces a tensor acts on."""

    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) < 2:
            raise ValidationError("frame needs at least valence 1 (two spaces)")
        if any(d < 1 for d in self.dims):
            raise ValidationError(f"frame dims must be positive: {self.dims}")

    @property
    def valence(self):
        return len(self.dims) - 1

    def dim(self, slot):
        if not 0 <= slot <= self.valence:
            raise UsageError(f"slot {slot} outside [0, {self.valence}]")
        return self.dims[self.valence - slot]

    @property
    def domain_dims(self):
        return self.dims[:-1]

    @property
    def out_dim(self):
        return self.dims[-1]


class Tensor:
    """Sparse exact tensor over a fixed field and frame."""

    __slots__ = ("field", "frame", "entries")

    def __init__(self, field: FieldSpec, frame: Frame, entries):
        self.field = field
        self.frame = frame
        clean = {}
        width = frame.valence + 1
        for idx, val in entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != width:
                raise ValidationError(f"index {idx} has {len(idx)} positions, expected {width}")
            for pos, i in enumerate(idx):
                if not 0 <= i < frame.dims[pos]:
                    raise ValidationError(f"index {idx} out of range in position {pos}")
            val = field.coerce(val)
            if val != field.zero:
                if idx in clean:
                    raise ValidationError(f"duplicate entry at {idx}")
                clean[idx] = val
        self.entries = clean

    @property
    def valence(self):
        return self.frame.valence

    def __repr__(self):
        return f"Tensor({self.field}, dims {self.frame.dims}, {len(self.entries)} entries)"

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.field == other.field
            and self.frame == other.frame
            and self.entries == other.entries
        )

    def scale(self, c):
        c = self.field.coerce(c)
        return Tensor(
            self.field,
            self.frame,
            {idx: self.field.mul(v, c) for idx, v in self.entries.items()},
        )


class TensorSet:
    """A nonempty collection of tensors sharing one field and frame."""

    __slots__ = ("field", "frame", "members")

    def __init__(self, members):
        members = list(members)
        if not members:
            raise UsageError("tensor set must be nonempty")
        first = members[0]
        for t in members[1:]:
            if t.field != first.field or t.frame != first.frame:
                raise UsageError("tensor set members must share field and frame")
        self.field = first.field
        self.frame = first.frame
        self.members = members

    @classmethod
    def of(cls, *tensors):
        return cls(tensors)

    @property
    def valence(self):
        return self.frame.valence


def as_tensor_set(obj) -> TensorSet:
    if isinstance(obj, TensorSet):
        return obj
    if isinstance(obj, Tensor):
        return TensorSet([obj])
    raise UsageError(f"expected Tensor or TensorSet, got {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Evaluation and flattening
# ---------------------------------------------------------------------------


def evaluate(t: Tensor, vectors):
    """Contract t against one coordinate vector per domain slot (slot v first)."""
    v = t.valence
    if len(vectors) != v:
        raise UsageError(f"need {v} vectors, got {len(vectors)}")
    vecs = []
    for pos, u in enumerate(vectors):
        u = list(u)
        if len(u) != t.frame.dims[pos]:
            raise UsageError(
                f"vector for slot {v - pos} has length {len(u)}, expected {t.frame.dims[pos]}"
            )
        vecs.append([t.field.coerce(x) for x in u])
    out = zero_vector(t.field, t.frame.out_dim)
    f = t.field
    for idx, val in t.entries.items():
        c = val
        for pos in range(v):
            c = f.mul(c, vecs[pos][idx[pos]])
            if c == f.zero:
                break
        else:
            out[idx[v]] = f.add(out[idx[v]], c)
    return out


def eval_basis(t: Tensor, domain_idx):
    """Evaluation at a tuple of standard basis vectors, by direct lookup."""
    out = zero_vector(t.field, t.frame.out_dim)
    for k in range(t.frame.out_dim):
        val = t.entries.get(domain_idx + (k,))
        if val is not None:
            out[k] = val
    return out


def _stride_after(dims, pos):
    s = 1
    for d in dims[pos + 1:]:
        s *= d
    return s


def flatten(t: Tensor, slot: int) -> Matrix:
    """One-slot flattening whose rank detects degeneracy in that slot.

    For slot a != 0: rows indexed by the slot-a coordinate, columns by all the
    remaining positions; a left kernel vector is a u_a annihilating t.  For
    slot 0: rows indexed by the output coordinate, columns by domain tuples;
    the row space is the image of the evaluation map.
    """
    v = t.valence
    if not 0 <= slot <= v:
        raise UsageError(f"slot {slot} outside [0, {v}]")
    pos_a = v - slot
    dims = t.frame.dims
    other_positions = [p for p in range(v + 1) if p != pos_a]
    ncols = 1
    for p in other_positions:
        ncols *= dims[p]
    m = Matrix.zeros(t.field, dims[pos_a], ncols)
    strides = {}
    s = 1
    for p in reversed(other_positions):
        strides[p] = s
        s *= dims[p]
    for idx, val in t.entries.items():
        col = sum(idx[p] * strides[p] for p in other_positions)
        m.data[idx[pos_a], col] = val
    return m


@dataclass
class NondegeneracyReport:
    """Per-slot verdicts: slot a != 0 nondegenerate, slot 0 full."""

    ok: bool
    slot_ok: dict
    slot_rank: dict


def is_fully_nondegenerate(ts) -> NondegeneracyReport:
    """Joint flattening ranks across all members decide each slot."""
    ts = as_tensor_set(ts)
    slot_ok = {}
    slot_rank = {}
    for slot in range(ts.valence + 1):
        mats = [flatten(t, slot) for t in ts.members]
        joint = Matrix(ts.field, np.hstack([m.data for m in mats]))
        r = rank(joint)
        d = ts.frame.dim(slot)
        slot_rank[slot] = r
        slot_ok[slot] = r == d
    return NondegeneracyReport(all(slot_ok.values()), slot_ok, slot_rank)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def kron(t: Tensor, s: Tensor) -> Tensor:
    """Slotwise tensor product: frame dims multiply, indices pair row-major."""
    if t.valence != s.valence:
        raise UsageError(f"valence mismatch: {t.valence} vs {s.valence}")
    if t.field != s.field:
        raise UsageError("kron factors must share the field")
    dims = tuple(a * b for a, b in zip(t.frame.dims, s.frame.dims))
    entries = {}
    f = t.field
    for ti, tv in t.entries.items():
        for si, sv in s.entries.items():
            idx = tuple(a * ds + b for a, b, ds in zip(ti, si, s.frame.dims))
            entries[idx] = f.mul(tv, sv)
    return Tensor(f, Frame(dims), entries)


def transform(t: Tensor, mats) -> Tensor:
    """Frame change of basis: slot-0 matrix post-composes, domain matrices pre-compose.

    mats is one invertible Matrix per slot, ordered (g_v, ..., g_1, g_0); the
    result t' satisfies <t'|u> = g_0 <t| g_v u_v, ..., g_1 u_1>.
    """
    v = t.valence
    if len(mats) != v + 1:
        raise UsageError(f"need {v + 1} matrices, got {len(mats)}")
    for pos, g in enumerate(mats):
        d = t.frame.dims[pos]
        if g.shape != (d, d):
            raise UsageError(f"matrix {pos} has shape {g.shape}, expected ({d}, {d})")
    f = t.field
    entries = {}
    dims = t.frame.dims
    g0 = mats[v]

    def add_entry(idx, val):
        if val == f.zero:
            return
        cur = entries.get(idx)
        new = f.add(cur, val) if cur is not None else val
        if new == f.zero:
            entries.pop(idx, None)
        else:
            entries[idx] = new

    for idx, val in t.entries.items():
        # distribute each stored entry over the transformed basis vectors
        partial = [((), val)]
        for pos in range(v):
            g = mats[pos]
            nxt = []
            for pref, c in partial:
                col = idx[pos]
                for j in range(dims[pos]):
                    w = g.data[col, j]
                    if w != f.zero:
                        nxt.append((pref + (j,), f.mul(c, w)))
            partial = nxt
        k = idx[v]
        for m_out in range(dims[v]):
            w = g0.data[m_out, k]
            if w == f.zero:
                continue
            for pref, c in partial:
                add_entry(pref + (m_out,), f.mul(c, w))
    return Tensor(f, t.frame, entries)


# ---------------------------------------------------------------------------
# Built-in example tensors
# ---------------------------------------------------------------------------


def _ghz(field):
    return Tensor(field, Frame((2, 2, 2)), {(0, 0, 0): 1, (1, 1, 1): 1})


def _w(field):
    return Tensor(field, Frame((2, 2, 2)), {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})


def _matmul(field, a, b, c):
    if min(a, b, c) < 1:
        raise ValidationError("matmul dims must be >= 1")
    entries = {}
    for i in range(a):
        for j in range(b):
            for k in range(c):
                entries[(i * b + j, j * c + k, i * c + k)] = 1
    return Tensor(field, Frame((a * b, b * c, a * c)), entries)


_TRIPLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def _perm_sign(seq):
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _extcube4(field):
    if field.is_prime_field and field.characteristic == 2:
        raise ValidationError("extcube4 needs characteristic != 2")
    entries = {}
    for i in range(4):
        for j in range(4):
            for k in range(4):
                if len({i, j, k}) != 3:
                    continue
                out = _TRIPLES.index(tuple(sorted((i, j, k))))
                entries[(i, j, k, out)] = _perm_sign((i, j, k))
    return Tensor(field, Frame((4, 4, 4, 4)), entries)


def _sl2scaled(field):
    """(k, X, Y) -> k[X, Y] on basis {e, h, f}: [e,f]=h, [h,e]=2e, [h,f]=-2f."""
    if field.is_prime_field and field.characteristic == 2:
        raise ValidationError("sl2scaled needs characteristic != 2")
    e, h, f = 0, 1, 2
    brackets = {
        (e, h): {e: -2},
        (h, e): {e: 2},
        (e, f): {h: 1},
        (f, e): {h: -1},
        (h, f): {f: -2},
        (f, h): {f: 2},
    }
    entries = {}
    for (x, y), out in brackets.items():
        for basis, coeff in out.items():
            entries[(0, x, y, basis)] = coeff
    return Tensor(field, Frame((1, 3, 3, 3)), entries)


def _galois_dot(field, p, e, pos):
    """Dot product on (GF(p^e))^2 as a GF(p)-trilinear tensor.

    The bilinear core maps (x, y) . (u, v) = xu + yv over the extension,
    written over GF(p) via the power-basis multiplication table; a 1-dim
    scalar slot is inserted at slot ``pos`` of the resulting valence-3 frame.
    """
    if not field.is_prime_field or field.characteristic != p:
        raise ValidationError(f"galois-dot({p},{e},{pos}) needs the field gf({p})")
    if e < 1:
        raise ValidationError("extension degree must be >= 1")
    if pos not in (1, 2, 3):
        raise ValidationError("scalar slot position must be 1, 2, or 3")
    table = ext_mul_table(p, e)
    core = {}  # (i, j, k) over dims (2e, 2e, e)
    for block in range(2):
        for i in range(e):
            for j in range(e):
                for k in range(e):
                    c = table[i][j][k]
                    if c:
                        core[(block * e + i, block * e + j, k)] = c
    # insert the scalar slot: valence becomes 3, slot `pos` has dimension 1
    dims3 = []
    entries = {}
    core_dims = (2 * e, 2 * e, e)
    insert_at = 3 - pos  # tuple position of the new slot
    dims3 = list(core_dims[:2])
    dims3.insert(insert_at, 1)
    dims3.append(core_dims[2])
    for (i, j, k), c in core.items():
        idx = [i, j]
        idx.insert(insert_at, 0)
        idx.append(k)
        entries[tuple(idx)] = c
    return Tensor(field, Frame(tuple(dims3)), entries)


_BUILTINS = ("ghz", "w", "matmul", "extcube4", "sl2scaled", "galois-dot")


def builtin(name: str, params=(), field: FieldSpec | None = None) -> Tensor:
    """Construct a named example tensor; see _BUILTINS for the catalogue."""
    if field is None:
        raise UsageError("builtin() needs a field")
    try:
        params = tuple(int(x) for x in params)
    except (TypeError, ValueError):
        raise ValidationError(f"builtin parameters must be integers, got {params!r}") from None
    if name == "ghz":
        return _ghz(field)
    if name == "w":
        return _w(field)
    if name == "matmul":
        if len(params) != 3:
            raise ValidationError("matmul takes three dimensions a b c")
        return _matmul(field, *params)
    if name == "extcube4":
        return _extcube4(field)
    if name == "sl2scaled":
        return _sl2scaled(field)
    if name == "galois-dot":
        if len(params) != 3:
            raise ValidationError("galois-dot takes p e pos")
        return _galois_dot(field, *params)
    raise ValidationError(f"unknown builtin {name!r} (have {', '.join(_BUILTINS)})")


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def parse_tensor(text: str, source: str = "<string>") -> Tensor:
    """Parse the line-based tensor format; raises ValidationError with line numbers."""

    def fail(lineno, msg):
        raise ValidationError(f"{source}:{lineno}: {msg}")

    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise ValidationError(f"{source}: empty tensor file")
    it = iter(lines)

    lineno, header = next(it)
    if header != "tensor v1":
        fail(lineno, f"expected 'tensor v1', got {header!r}")

    try:
        lineno, fieldline = next(it)
    except StopIteration:
        fail(lineno, "missing 'field' line")
    parts = fieldline.split()
    if parts[0] != "field":
        fail(lineno, f"expected 'field ...', got {fieldline!r}")
    if parts[1:] == ["rational"]:
        field = FieldSpec("rational", 0)
    elif len(parts) == 3 and parts[1] == "gf":
        try:
            field = gf(int(parts[2]))
        except (ValueError, ValidationError) as exc:
            fail(lineno, str(exc))
    else:
        fail(lineno, f"bad field line {fieldline!r}")

    try:
        lineno, valline = next(it)
    except StopIteration:
        fail(lineno, "missing 'valence' line")
    vparts = valline.split()
    if len(vparts) != 2 or vparts[0] != "valence" or not vparts[1].isdigit():
        fail(lineno, f"bad valence line {valline!r}")
    valence = int(vparts[1])
    if valence < 1:
        fail(lineno, "valence must be >= 1")

    try:
        lineno, dimline = next(it)
    except StopIteration:
        fail(lineno, "missing 'dims' line")
    dparts = dimline.split()
    if dparts[0] != "dims":
        fail(lineno, f"expected 'dims ...', got {dimline!r}")
    if len(dparts) != valence + 2:
        fail(lineno, f"dims needs {valence + 1} values, got {len(dparts) - 1}")
    try:
        dims = tuple(int(x) for x in dparts[1:])
        frame = Frame(dims)
    except (ValueError, ValidationError) as exc:
        fail(lineno, str(exc))

    entries = {}
    for lineno, body in it:
        eparts = body.split()
        if eparts[0] != "entry":
            fail(lineno, f"expected 'entry ...', got {body!r}")
        if len(eparts) != valence + 3:
            fail(lineno, f"entry needs {valence + 1} indices and a value")
        try:
            idx = tuple(int(x) for x in eparts[1:-1])
        except ValueError:
            fail(lineno, f"bad index in {body!r}")
        for pos, i in enumerate(idx):
            if not 0 <= i < dims[pos]:
                fail(lineno, f"index {i} out of range for position {pos} (dim {dims[pos]})")
        if idx in entries:
            fail(lineno, f"duplicate entry at {idx}")
        try:
            val = field.parse(eparts[-1])
        except ValidationError as exc:
            fail(lineno, str(exc))
        if val == field.zero:
            fail(lineno, "explicit zero entries are not stored; remove the line")
        entries[idx] = val
    return Tensor(field, frame, entries)


def format_tensor(t: Tensor) -> str:
    lines = ["tensor v1"]
    if t.field.is_prime_field:
        lines.append(f"field gf {t.field.characteristic}")
    else:
        lines.append("field rational")
    lines.append(f"valence {t.valence}")
    lines.append("dims " + " ".join(str(d) for d in t.frame.dims))
    for idx in sorted(t.entries):
        val = t.field.format(t.entries[idx])
        lines.append("entry " + " ".join(str(i) for i in idx) + " " + val)
    return "\n".join(lines) + "\n"


def load_tensor(path) -> Tensor:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tensor(fh.read(), source=str(path))


def save_tensor(t: Tensor, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_tensor(t))
