"""Command-line interface: ``kseg <command> ...``.

Exit status is 0 on success, 1 on a domain error (printed as
``error: CODE: message``) and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bench, checks
from .algebra import Element, Signature, add, conjugate, grade_project, mask_from_indices, mul_naive
from .errors import FormatError, KsegError, SignatureMismatchError
from .spectral import REAL, enumerate_idempotents, invert, is_invertible, mul_fast, spectrum
from .structure import canonicalize, canonicalize_inverse, tensor_embed, tensor_permutation
from .textio import blade_name, format_number, from_json, parse_element, parse_signature, print_element, to_json


class UsageError(Exception):
    pass


def _signature_arg(text: str) -> Signature:
    try:
        return parse_signature(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_seed() -> int:
    env = os.environ.get("KSEG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"KSEG_SEED must be an integer, got {env!r}") from None


def _load_document(path: str) -> Element:
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    return from_json(doc)


def _elements(args, sigs: list[Signature], count: int) -> list[Element]:
    exprs = list(args.exprs)
    paths = list(args.json or [])
    if len(exprs) + len(paths) != count:
        raise UsageError(f"{args.command} takes {count} element(s), got {len(exprs) + len(paths)}")
    if len(sigs) == 1:
        sigs = sigs * count
    out = [parse_element(text, sig) for text, sig in zip(exprs, sigs)]
    for path, sig in zip(paths, sigs[len(exprs):]):
        u = _load_document(path)
        if u.sig != sig:
            raise SignatureMismatchError(f"{path} holds an element of {u.sig}, expected {sig}")
        out.append(u)
    return out


def _emit(u: Element, args) -> None:
    if args.json_out:
        print(json.dumps(to_json(u, sparse=args.sparse)))
    else:
        print(print_element(u))


def _cmd_mul(args):
    u, v = _elements(args, [args.sig], 2)
    _emit(mul_naive(u, v) if args.strategy == "naive" else mul_fast(u, v), args)


def _cmd_add(args):
    u, v = _elements(args, [args.sig], 2)
    _emit(add(u, v), args)


def _cmd_conj(args):
    (u,) = _elements(args, [args.sig], 1)
    indices = [int(x) for x in args.mask.split(",") if x.strip()] if args.mask else []
    try:
        mask = mask_from_indices(indices, u.sig.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(conjugate(u, mask), args)


def _cmd_grade(args):
    (u,) = _elements(args, [args.sig], 1)
    _emit(grade_project(u, args.k), args)


def _cmd_spectrum(args):
    (u,) = _elements(args, [args.sig], 1)
    s = spectrum(u)
    if args.json_out:
        values = s.values.tolist() if s.kind == REAL else s.pairs.tolist()
        doc = {"format": 1, "kind": s.kind, "sig": [u.sig.p, u.sig.q], "values": values}
        if args.tol is not None:
            doc["invertible"] = is_invertible(u, args.tol)
        print(json.dumps(doc))
        return
    for mask, value in zip(s.masks, s.values):
        name = blade_name(int(mask), u.sig.n, compact=False)
        if s.kind == REAL:
            print(f"{name}\t{format_number(value)}")
        else:
            print(f"{name}\t{format_number(value.real)}\t{format_number(value.imag)}")
    if args.tol is not None:
        print("invertible: " + ("yes" if is_invertible(u, args.tol) else "no"))


def _cmd_inv(args):
    (u,) = _elements(args, [args.sig], 1)
    _emit(invert(u, args.tol), args)


def _cmd_canon(args):
    if args.inverse:
        (u,) = _elements(args, [Signature(0, args.sig.n)], 1)
        _emit(canonicalize_inverse(u, args.sig), args)
    else:
        (u,) = _elements(args, [args.sig], 1)
        _emit(canonicalize(u), args)


def _cmd_tensor(args):
    if len(args.sig) != 2:
        raise UsageError("tensor needs --sig twice, one per factor")
    u, v = _elements(args, args.sig, 2)
    if args.show_permutation:
        perm = tensor_permutation(u.sig, v.sig)
        print("permutation: " + ",".join(str(k + 1) for k in perm), file=sys.stderr)
    _emit(tensor_embed(u, v), args)


def _cmd_idempotents(args):
    for u in enumerate_idempotents(args.sig, args.max_count):
        _emit(u, args)


def _cmd_verify(args):
    seed = args.seed if args.seed is not None else _default_seed()
    results = checks.run_checks(args.n_max, seed)
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.label}"
        if r.detail:
            line += f"  [{r.detail}]"
        print(line)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed (n_max={args.n_max}, seed={seed})")
    return 1 if failed else 0


def _cmd_bench(args):
    if args.n_min > args.n_max:
        raise UsageError("--n-min exceeds --n-max")
    seed = args.seed if args.seed is not None else _default_seed()
    rows = bench.run(args.n_min, args.n_max, args.reps, seed, args.kind)
    bench.write_csv(rows)


def _add_element_args(parser, with_sig=True):
    if with_sig:
        parser.add_argument("--sig", type=_signature_arg, required=True, metavar="P,Q")
    parser.add_argument("exprs", nargs="*", metavar="EXPR", help="element expressions")
    parser.add_argument("--json", action="append", metavar="PATH",
                        help="read an element document (repeatable; '-' for stdin)")
    parser.add_argument("--json-out", action="store_true", help="print JSON documents")
    parser.add_argument("--sparse", action="store_true", help="sparse coeffs in --json-out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kseg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", help="product of two elements")
    _add_element_args(p)
    p.add_argument("--strategy", choices=("naive", "fast"), default="fast")
    p.set_defaults(func=_cmd_mul)

    p = sub.add_parser("add", help="sum of two elements")
    _add_element_args(p)
    p.set_defaults(func=_cmd_add)

    p = sub.add_parser("conj", help="conjugate negating the generators in --mask")
    _add_element_args(p)
    p.add_argument("--mask", default="", help="comma-separated 1-based generator indices")
    p.set_defaults(func=_cmd_conj)

    p = sub.add_parser("grade", help="grade-k projection")
    _add_element_args(p)
    p.add_argument("-k", "--grade", dest="k", type=int, required=True)
    p.set_defaults(func=_cmd_grade)

    p = sub.add_parser("spectrum", help="direct-sum coordinates of an element")
    _add_element_args(p)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("inv", help="multiplicative inverse")
    _add_element_args(p)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_inv)

    p = sub.add_parser("canon", help="carry an element of K(p,q) to K(0,n)")
    _add_element_args(p)
    p.add_argument("--inverse", action="store_true",
                   help="read an element of K(0,n) and carry it back to --sig")
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("tensor", help="tensor product of two elements")
    p.add_argument("--sig", type=_signature_arg, action="append", required=True, metavar="P,Q")
    _add_element_args(p, with_sig=False)
    p.add_argument("--show-permutation", action="store_true",
                   help="print the generator relabeling to stderr")
    p.set_defaults(func=_cmd_tensor)

    p = sub.add_parser("idempotents", help="list every idempotent")
    p.add_argument("--sig", type=_signature_arg, required=True, metavar="P,Q")
    p.add_argument("--max-count", type=int, default=1 << 16)
    p.add_argument("--json-out", action="store_true")
    p.add_argument("--sparse", action="store_true")
    p.set_defaults(func=_cmd_idempotents)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="time naive versus fast multiplication (CSV)")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--kind", choices=("real", "complex", "mixed"), default="real")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except FormatError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except KsegError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"error: Usage: {exc}", file=sys.stderr)
        return 2
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
