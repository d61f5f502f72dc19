"""Command-line front end.

Exit status: 0 on success, 1 on usage errors (bad flags, out-of-range
positions, bad fingerprint parameters), 2 when an input grammar or map file
fails to parse or validate.
"""
from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional, Sequence

from .errors import (BadParams, EmptyImage, GrammarFormatError, InvalidGrammar, IslpError,
                     OutOfRange, TooLarge)
from .grammar import (Grammar, format_grammar, parse_grammar, symbols_to_bytes, text_to_symbols,
                      validate)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_input(path: Optional[str]) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(args, check: bool = True) -> Grammar:
    g = parse_grammar(_read_input(args.grammar).decode("ascii"))
    if check:
        problems = validate(g)
        if problems:
            raise InvalidGrammar(problems)
    return g


def _emit_grammar(g: Grammar, path: Optional[str]) -> None:
    text = format_grammar(g)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_bytes(data: bytes) -> None:
    sys.stdout.flush()
    sys.stdout.buffer.write(data + b"\n")
    sys.stdout.buffer.flush()


def parse_symbol(token: str) -> int:
    """A single character stands for its byte value; anything longer must be an integer."""
    if len(token) == 1:
        return ord(token)
    try:
        return int(token)
    except ValueError:
        raise UsageError(f"expected one character or an integer symbol, got {token!r}")


def parse_map(data: bytes) -> Dict[int, List[int]]:
    """Morphism file: one ``<char> <image>`` pair per line; ``#`` starts a comment."""
    phi: Dict[int, List[int]] = {}
    for lineno, raw in enumerate(data.split(b"\n"), 1):
        line = raw.rstrip(b"\r")
        if not line.strip() or line.startswith(b"#"):
            continue
        parts = line.split(None, 1)
        if len(parts[0]) != 1:
            raise GrammarFormatError(f"map line {lineno}: key must be one byte")
        image = parts[1].strip() if len(parts) > 1 else b""
        if not image:
            raise EmptyImage(f"map line {lineno}: empty image for {parts[0]!r}")
        phi[parts[0][0]] = text_to_symbols(image)
    return phi


def _trace_lines(nav, l: int) -> None:
    trace: list = []
    nav.access(l, trace=trace)
    for step in trace:
        print(f"{step.i} {step.r} {step.offset}")


def cmd_validate(args) -> int:
    g = _load(args, check=False)
    problems = validate(g)
    if problems:
        for v in problems:
            print(v, file=sys.stderr)
        return 2
    print(f"ok rules={len(g.rules)} size={g.size} n={g.n} height={g.height} degree={g.degree}")
    return 0


def cmd_build_naive(args) -> int:
    from .builder import build_naive

    data = _read_input(args.input)
    g = build_naive(text_to_symbols(data), seed=args.seed)
    _emit_grammar(g, args.output)
    return 0


def cmd_gen(args) -> int:
    from .oracles import gen_family

    text, g = gen_family(args.family, args.param)
    if args.text_out:
        with open(args.text_out, "wb") as fh:
            fh.write(symbols_to_bytes(text))
    _emit_grammar(g, args.output)
    return 0


def _stats_line(g: Grammar, b: Grammar) -> str:
    return f"{g.size} {b.size} {g.height} {b.height} {g.n}"


def cmd_balance(args) -> int:
    from .balancer import balance

    g = _load(args)
    b = balance(g)
    _emit_grammar(b, args.output)
    if args.stats:
        print(_stats_line(g, b), file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    from .balancer import balance

    g = _load(args)
    print(_stats_line(g, balance(g)))
    return 0


def cmd_access(args) -> int:
    from .navigator import Navigator

    nav = Navigator(_load(args))
    for l in args.positions:
        if args.trace:
            _trace_lines(nav, l)
        _write_bytes(symbols_to_bytes([nav.access(l)]))
    return 0


def cmd_extract(args) -> int:
    from .navigator import Navigator

    nav = Navigator(_load(args))
    if args.trace:
        _trace_lines(nav, args.l)
    _write_bytes(symbols_to_bytes(nav.extract(args.l, args.length)))
    return 0


def cmd_rmq(args) -> int:
    from .queries import QueryIndex

    pos, val = QueryIndex(_load(args)).rmq(args.p, args.q)
    print(pos, val)
    return 0


def cmd_nsv(args) -> int:
    from .queries import QueryIndex

    print(QueryIndex(_load(args)).nsv(args.p, args.value))
    return 0


def cmd_psv(args) -> int:
    from .queries import QueryIndex

    print(QueryIndex(_load(args)).psv(args.p, args.value))
    return 0


def cmd_kr(args) -> int:
    from .composable import MERSENNE_61, KarpRabin, kr_base_from_seed
    from .transforms import to_rlslp

    mu = args.mu if args.mu is not None else MERSENNE_61
    c = args.c if args.c is not None else kr_base_from_seed(args.seed, mu)
    g = to_rlslp(_load(args))
    print(KarpRabin(g, c, mu).fingerprint(args.i, args.j))
    return 0


def cmd_reverse(args) -> int:
    from .transforms import reverse

    _emit_grammar(reverse(_load(args)), args.output)
    return 0


def cmd_morph(args) -> int:
    from .transforms import apply_morphism

    with open(args.mapfile, "rb") as fh:
        phi = parse_map(fh.read())
    _emit_grammar(apply_morphism(_load(args), phi), args.output)
    return 0


def cmd_edit(args) -> int:
    from .transforms import EditOp, edit

    if args.op == "delete":
        if args.char is not None:
            raise UsageError("delete takes no character")
        op = EditOp("delete", args.pos)
    else:
        if args.char is None:
            raise UsageError(f"{args.op} needs a character")
        op = EditOp(args.op, args.pos, parse_symbol(args.char))
    _emit_grammar(edit(_load(args), op), args.output)
    return 0


def cmd_measures(args) -> int:
    from .oracles import measures

    data = _read_input(args.file)
    if not data:
        raise UsageError("empty text")
    print(measures(text_to_symbols(data)).line())
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    tsv, files = write_report(args.out)
    sys.stdout.write(tsv)
    for path in files:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="islp", description="Iterated straight-line programs: build, balance, query, transform.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_grammar(p):
        p.add_argument("-g", "--grammar", help="grammar file (default: stdin)")
        return p

    def with_output(p):
        p.add_argument("-o", "--output", help="output grammar file (default: stdout)")
        return p

    p = with_grammar(sub.add_parser("validate", help="check a grammar file"))
    p.set_defaults(func=cmd_validate)

    p = with_output(sub.add_parser("build-naive", help="grammar for a raw text file (run collapsing + pair merging)"))
    p.add_argument("input", nargs="?", help="raw text file (default: stdin)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build_naive)

    p = with_output(sub.add_parser("gen", help="generate a text family and its grammar"))
    p.add_argument("family", choices=("s_k", "fibonacci", "thue_morse_prefix"))
    p.add_argument("param", type=int)
    p.add_argument("--text-out", help="also write the raw text here")
    p.set_defaults(func=cmd_gen)

    p = with_output(with_grammar(sub.add_parser("balance", help="rebuild with logarithmic height")))
    p.add_argument("--stats", action="store_true", help="print the stats line on stderr")
    p.set_defaults(func=cmd_balance)

    p = with_grammar(sub.add_parser("stats", help="print size_in size_out height_in height_out n"))
    p.set_defaults(func=cmd_stats)

    p = with_grammar(sub.add_parser("access", help="symbols at the given positions"))
    p.add_argument("positions", type=int, nargs="+")
    p.add_argument("--trace", action="store_true", help="print 'i r offset' per iteration rule")
    p.set_defaults(func=cmd_access)

    p = with_grammar(sub.add_parser("extract", help="substring starting at l"))
    p.add_argument("l", type=int)
    p.add_argument("length", type=int)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = with_grammar(sub.add_parser("rmq", help="leftmost minimum of T[p..q]: position and value"))
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_rmq)

    for name, func, blurb in (("nsv", cmd_nsv, "smallest q >= p with T[q] < value, or n+1"),
                              ("psv", cmd_psv, "largest q <= p with T[q] < value, or 0")):
        p = with_grammar(sub.add_parser(name, help=blurb))
        p.add_argument("p", type=int)
        p.add_argument("value", type=int)
        p.set_defaults(func=func)

    p = with_grammar(sub.add_parser("kr", help="Karp-Rabin fingerprint of T[i..j]"))
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--mu", type=int, help="prime modulus (default 2^61-1)")
    p.add_argument("--c", type=int, help="base (default: drawn from --seed)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kr)

    p = with_output(with_grammar(sub.add_parser("reverse", help="grammar of the reversed text")))
    p.set_defaults(func=cmd_reverse)

    p = with_output(with_grammar(sub.add_parser("morph", help="apply a symbol-to-string map")))
    p.add_argument("mapfile")
    p.set_defaults(func=cmd_morph)

    p = with_output(with_grammar(sub.add_parser("edit", help="one substitution, insertion or deletion")))
    p.add_argument("op", choices=("substitute", "insert_before", "insert_after", "delete"))
    p.add_argument("pos", type=int)
    p.add_argument("char", nargs="?")
    p.set_defaults(func=cmd_edit)

    p = sub.add_parser("measures", help="print n delta z r r_dollar of a raw text")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("report", help="write report.tsv and figures")
    p.add_argument("--out", default="report", help="output directory (default: ./report)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidGrammar as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return 2
    except (GrammarFormatError, EmptyImage, UnicodeDecodeError) as exc:
        print(f"islp: {exc}", file=sys.stderr)
        return 2
    except (UsageError, OutOfRange, BadParams, TooLarge, OSError) as exc:
        print(f"islp: {exc}", file=sys.stderr)
        return 1
    except IslpError as exc:
        print(f"islp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
