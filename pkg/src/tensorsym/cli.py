"""Command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 internal invariant
violation, 3 inconclusive result under --strict (e.g. radical unknown in a
small characteristic).
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from .algstruct import compare, fingerprint
from .chain import build_chain, dimension_diagram, unit_check
from .errors import InternalInvariantError, TensorSymError, UsageError, ValidationError
from .opset import centroid, derivations, nucleus
from .orientation import build_sigma, verify_sigma
from .scalar import gf, rationals
from .tensor import (
    builtin,
    format_tensor,
    is_fully_nondegenerate,
    kron,
    load_tensor,
    save_tensor,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_INCONCLUSIVE = 3


def _parse_field(text):
    text = text.strip().lower()
    if text == "rational":
        return rationals()
    if text.startswith("gf:"):
        try:
            return gf(int(text[3:]))
        except ValueError:
            raise ValidationError(f"bad field spec {text!r}") from None
    raise ValidationError(f"bad field spec {text!r} (use rational or gf:P)")


def _emit_json(obj):
    print(json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2))


def _cmd_validate(args):
    t = load_tensor(args.file)
    rep = is_fully_nondegenerate(t)
    print(f"ok: valence {t.valence}, dims {list(t.frame.dims)}, field {t.field}, "
          f"{len(t.entries)} entries")
    for slot in sorted(rep.slot_ok):
        what = "full" if slot == 0 else "nondegenerate"
        verdict = "yes" if rep.slot_ok[slot] else f"NO (rank {rep.slot_rank[slot]})"
        print(f"  slot {slot} {what}: {verdict}")
    print(f"fully nondegenerate: {'yes' if rep.ok else 'no'}")
    return EXIT_OK


def _fingerprint_entries(t, seed):
    v = t.valence
    out = []
    for k in range(v + 1, 2, -1):
        for sub in combinations(range(v + 1), k):
            out.append(("centroid", sub, centroid(t, sub)))
    for a, b in combinations(range(v + 1), 2):
        out.append(("nucleus", (a, b), nucleus(t, a, b)))
    return [(kind, sub, fingerprint(space, kind, seed=seed)) for kind, sub, space in out]


def _cmd_invariants(args):
    t = load_tensor(args.file)
    der = derivations(t)
    fps = _fingerprint_entries(t, args.seed)
    unknown = any(fp.radical_dim is None for _, _, fp in fps)
    if args.json:
        _emit_json(
            {
                "field": str(t.field),
                "dims": list(t.frame.dims),
                "der_dim": der.dim,
                "seed": args.seed,
                "fingerprints": [
                    {"kind": kind, "subset": list(sub), **fp.to_json_dict()}
                    for kind, sub, fp in fps
                ],
            }
        )
    else:
        print(f"derivation algebra dim: {der.dim} (seed {args.seed})")
        for kind, sub, fp in fps:
            rad = "unknown" if fp.radical_dim is None else fp.radical_dim
            print(
                f"{kind} {{{','.join(map(str, sub))}}}: dim {fp.dim}, "
                f"{'commutative' if fp.commutative else 'noncommutative'}, radical {rad}"
            )
    if unknown and args.strict:
        print("inconclusive: radical unknown in this characteristic; rerun over gf:101 or larger", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_sequence(args):
    t = load_tensor(args.file)
    sigma = build_sigma(t.valence)
    report = build_chain(t, sigma)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        print(dimension_diagram(report))
    return EXIT_OK


def _cmd_compare(args):
    t1 = load_tensor(args.file1)
    t2 = load_tensor(args.file2)
    if t1.field != t2.field:
        raise UsageError("tensors live over different fields")
    # sigma is only consulted once the frames agree
    result = compare(t1, t2, build_sigma(t1.valence), seed=args.seed)
    if args.json:
        _emit_json(
            {
                "distinguished": result.distinguished,
                "witness": result.witness,
                "seed": args.seed,
            }
        )
    else:
        print(str(result))
    return EXIT_OK


def _cmd_sigma(args):
    sf = build_sigma(args.valence)
    if args.verify:
        rep = verify_sigma(sf)
        families = [rep.total, rep.anchors_ok, rep.first_violation is None]
        if rep.ok:
            print(f"sigma OK: all {sum(families)}-of-3 condition families pass "
                  f"({rep.diamonds_checked} diamonds)")
        else:
            print(f"sigma FAILED: {rep.first_violation}")
            return EXIT_INTERNAL
    if args.dump:
        for line in sf.dump_lines():
            print(line)
    if not args.verify and not args.dump:
        print(f"built sigma for valence {args.valence}: {len(sf.signs)} covering pairs")
    return EXIT_OK


def _cmd_gen(args):
    field = _parse_field(args.field)
    if args.name == "kron":
        if len(args.params) != 2:
            raise ValidationError("gen kron needs two tensor files")
        t = kron(load_tensor(args.params[0]), load_tensor(args.params[1]))
    else:
        t = builtin(args.name, tuple(args.params), field=field)
    if args.out:
        save_tensor(t, args.out)
        print(f"wrote {args.out}: dims {list(t.frame.dims)}, {len(t.entries)} entries")
    else:
        sys.stdout.write(format_tensor(t))
    return EXIT_OK


def _cmd_aut_check(args):
    t = load_tensor(args.file)
    sigma = build_sigma(t.valence)
    rep = unit_check(t, sigma, sample_count=args.samples, seed=args.seed)
    print(f"seed {rep.seed}")
    for pr in rep.pairs:
        status = "ok" if pr.autotopism_failures == 0 and pr.product_failures == 0 else "FAIL"
        if pr.inconclusive:
            status = f"inconclusive ({pr.note})"
        print(
            f"pair {pr.pair}: nucleus dim {pr.nucleus_dim}, {pr.samples} units, "
            f"{pr.product_samples} products: {status}"
        )
    if rep.inconclusive:
        return EXIT_INCONCLUSIVE if args.strict else EXIT_OK
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def make_parser():
    ap = argparse.ArgumentParser(
        prog="tensorsym",
        description="Exact symmetry algebras and chain complexes of tensors.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a tensor file and report nondegeneracy")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("invariants", help="dims and fingerprints of Der, nuclei, centroid")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when a radical is unknown in this characteristic")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("sequence", help="build the chain complex and verify exactness")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sequence)

    p = sub.add_parser("compare", help="distinguish two tensors by their invariants")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sigma", help="build or verify a sign function")
    p.add_argument("--valence", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=_cmd_sigma)

    p = sub.add_parser("gen", help="generate a builtin tensor (or kron of two files)")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--field", default="gf:101")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("aut-check", help="unit-group spot checks of the nuclei")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_aut_check)

    return ap


def run(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except TensorSymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
