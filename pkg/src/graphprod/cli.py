"""Command-line interface.

Exit codes: 0 positive verdict, 1 negative verdict, 2 input or structural
error, 3 bounded or unknown result.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .conjugacy import are_conjugate, conjugacy_oracle
from .errors import GuardExceeded, VerificationError
from .formats import ParseError, format_witness, parse_class, parse_map, parse_presentation, parse_witness
from .graph import central_vertices, format_vertex_set, irreducible_components, minimal_coneless_subsets
from .homs import DEFAULT_EXP_BOUND, decide_inner
from .residual import AlreadyConjugate, SeparationWitness, separate_conjugacy, verify_witness
from .words import format_word, parse_word, reduce

POSITIVE, NEGATIVE, INPUT_ERROR, UNKNOWN = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, message: str, code: int = INPUT_ERROR):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(f"cannot read {path}: {exc.strerror}") from None


def _presentation(path: str):
    try:
        return parse_presentation(_read(path))
    except ParseError as exc:
        raise _Fail(f"{path}: {exc}") from None


def _word(p, text: str):
    try:
        return reduce(p, parse_word(p, text))
    except ValueError as exc:
        raise _Fail(f"word {text!r}: {exc}") from None


def _verdict(tag: str, word=None) -> str:
    if word is None:
        return tag
    text = format_word(word)
    return f"{tag} {text}" if text else tag


def cmd_reduce(args):
    p = _presentation(args.presentation)
    return POSITIVE, format_word(_word(p, args.word))


def cmd_conj(args):
    p = _presentation(args.presentation)
    x, y = _word(p, args.x), _word(p, args.y)
    ans = are_conjugate(p, x, y)
    line = _verdict("CONJUGATE", ans.conjugator) if ans else "NOT_CONJUGATE"
    code = POSITIVE if ans else NEGATIVE
    if args.oracle is not None:
        found = conjugacy_oracle(p, x, y, args.oracle, args.exp_bound)
        # the oracle is complete for its bound only: agreement means it does not
        # find a conjugator the criterion missed
        agree = found is None or bool(ans)
        shown = "none" if found is None else (format_word(found) or "identity")
        line += f" | oracle L={args.oracle}: {shown} ({'agree' if agree else 'DISAGREE'})"
        if not agree:
            code = INPUT_ERROR
    return code, line


def cmd_decide_inner(args):
    p = _presentation(args.presentation)
    try:
        f = parse_map(_read(args.map), p)
    except ParseError as exc:
        raise _Fail(f"{args.map}: {exc}") from None
    d = decide_inner(f, args.exp_bound)
    if d.verdict == "inner":
        return POSITIVE, _verdict("INNER", d.conjugator)
    if d.verdict == "not_inner":
        return NEGATIVE, _verdict("NOT_INNER", d.witness)
    return UNKNOWN, "BOUNDED_ONLY"


def _set_list(sets) -> str:
    return ",".join(format_vertex_set(s) for s in sets) if sets else "none"


def cmd_analyze(args):
    p = _presentation(args.presentation)
    g = p.graph
    central = sorted(central_vertices(g))
    line = "central: {}; coneless: {}; components: {}".format(
        ",".join(map(str, central)) if central else "none",
        _set_list(minimal_coneless_subsets(g)),
        _set_list(irreducible_components(g)))
    return POSITIVE, line


def cmd_separate(args):
    p = _presentation(args.presentation)
    try:
        cls = parse_class(args.cls)
    except ValueError as exc:
        raise _Fail(str(exc)) from None
    x, y = _word(p, args.x), _word(p, args.y)
    res = separate_conjugacy(p, x, y, cls)
    if isinstance(res, AlreadyConjugate):
        return NEGATIVE, _verdict("ALREADY_CONJUGATE", res.conjugator)
    if not isinstance(res, SeparationWitness):
        return UNKNOWN, "UNKNOWN"
    text = format_witness(res)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return POSITIVE, f"WITNESS {res.kind} {args.output}"
    return POSITIVE, text.rstrip("\n")


def cmd_verify_witness(args):
    try:
        w = parse_witness(_read(args.witness))
    except ParseError as exc:
        raise _Fail(f"{args.witness}: {exc}") from None
    report = verify_witness(w)
    if report.ok:
        return POSITIVE, "VALID"
    return NEGATIVE, "INVALID: " + "; ".join(report.violations)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphprod", description="Graph products of groups.")
    ap.add_argument("--report", metavar="PATH", help="write a JSON run report")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_presentation(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("-p", "--presentation", required=True)
        sp.set_defaults(fn=fn)
        return sp

    sp = with_presentation("reduce", cmd_reduce, "print the normal form of a word")
    sp.add_argument("word")

    sp = with_presentation("conj", cmd_conj, "decide conjugacy of two words")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--oracle", type=int, metavar="L", help="cross-check by brute force up to length L")
    sp.add_argument("--exp-bound", type=int, default=3, help="Z exponent bound for the oracle")

    sp = with_presentation("decide-inner", cmd_decide_inner, "decide whether a vertex map is inner")
    sp.add_argument("-m", "--map", required=True)
    sp.add_argument("--exp-bound", type=int, default=DEFAULT_EXP_BOUND)

    with_presentation("analyze", cmd_analyze, "central vertices, coneless sets, components")

    sp = with_presentation("separate", cmd_separate, "finite quotient separating two conjugacy classes")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--class", dest="cls", default="all", help="'all' or a prime p")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("verify-witness", help="re-check a separation witness file")
    sp.add_argument("witness")
    sp.set_defaults(fn=cmd_verify_witness)
    return ap


def run(argv) -> tuple[int, str]:
    """Parse and execute; returns (exit code, output text) without printing."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return (INPUT_ERROR if exc.code else POSITIVE), ""
    return _dispatch(args)


def _dispatch(args) -> tuple[int, str]:
    try:
        return args.fn(args)
    except _Fail as exc:
        return exc.code, f"error: {exc}"
    except GuardExceeded as exc:
        return INPUT_ERROR, f"error: guard exceeded: {exc}"
    except VerificationError as exc:
        return INPUT_ERROR, f"error: verification failed: {exc}"
    except ValueError as exc:  # includes precondition failures
        return INPUT_ERROR, f"error: {exc}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else POSITIVE
    code, out = _dispatch(args)
    stream = sys.stderr if out.startswith("error: ") else sys.stdout
    print(out, file=stream)
    if args.report:
        payload = {"command": argv, "exit_code": code, "output": out, "seed": 0,
                   "elapsed_seconds": round(time.perf_counter() - start, 6)}
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
