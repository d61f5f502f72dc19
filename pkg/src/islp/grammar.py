"""Grammar types for SLPs, RLSLPs and iterated SLPs (ISLPs).

A grammar is a table of rules indexed by symbol id.  Three rule shapes exist:

* ``Terminal(ch)``: the symbol expands to the single alphabet value ``ch``.
* ``Binary(left, right)``: concatenation of two symbols.
* ``Iteration(k1, k2, factors)``: the product over ``i = k1..k2`` (downwards when
  ``k1 > k2``) of ``B_1^(i^c_1) ... B_t^(i^c_t)`` where ``factors`` lists the
  ``(B_j, c_j)`` pairs.  A run ``B^t`` is ``Iteration(1, t, ((B, 0),))``.

Alphabet values are integers ``1..sigma``; raw text maps each byte to its value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import CapExceeded, GrammarFormatError, InvalidGrammar, LengthOverflow
from .power_sums import PowerSumTable, build_bernoulli, power_sum

MAX_LENGTH = 1 << 62


@dataclass(frozen=True)
class Terminal:
    ch: int

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class Binary:
    left: int
    right: int

    @property
    def size(self) -> int:
        return 2


@dataclass(frozen=True)
class Iteration:
    k1: int
    k2: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def size(self) -> int:
        return 2 + 2 * len(self.factors)

    @property
    def count(self) -> int:
        """Number of blocks (iteration values)."""
        return abs(self.k2 - self.k1) + 1

    @property
    def descending(self) -> bool:
        return self.k1 > self.k2

    def values(self) -> range:
        """Iteration values in expansion order."""
        if self.k1 <= self.k2:
            return range(self.k1, self.k2 + 1)
        return range(self.k1, self.k2 - 1, -1)

    def value_at(self, u: int) -> int:
        """Iteration value of the ``u``-th block (0-based, expansion order)."""
        return self.k1 + u if self.k1 <= self.k2 else self.k1 - u

    @property
    def is_run(self) -> bool:
        """True when the rule is an RLSLP run ``B^t``."""
        return len(self.factors) == 1 and self.factors[0][1] == 0


Rule = Union[Terminal, Binary, Iteration]


def run(symbol: int, times: int) -> Iteration:
    """The run-length rule ``symbol^times``."""
    return Iteration(1, times, ((symbol, 0),))


def children(rule: Rule) -> Tuple[int, ...]:
    """Child symbols in right-hand-side order (with repetitions)."""
    if isinstance(rule, Binary):
        return (rule.left, rule.right)
    if isinstance(rule, Iteration):
        return tuple(b for b, _ in rule.factors)
    return ()


@dataclass(frozen=True)
class Violation:
    kind: str
    symbol: Optional[int]
    message: str

    def __str__(self) -> str:
        where = "" if self.symbol is None else f" at symbol {self.symbol}"
        return f"{self.kind}{where}: {self.message}"


@dataclass(frozen=True)
class Grammar:
    """An immutable ISLP.  Derived tables are computed lazily and cached."""

    rules: Tuple[Rule, ...]
    start: int
    sigma: int

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __len__(self) -> int:
        return len(self.rules)

    @cached_property
    def degree(self) -> int:
        return max((c for r in self.rules if isinstance(r, Iteration) for _, c in r.factors), default=0)

    @cached_property
    def power_table(self) -> PowerSumTable:
        return build_bernoulli(self.degree)

    @cached_property
    def topo_order(self) -> Tuple[int, ...]:
        order = topological_order(self)
        if order is None:
            raise InvalidGrammar([Violation("cycle", None, "rule graph has a cycle")])
        return tuple(order)

    @cached_property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(compute_lengths(self))

    @property
    def n(self) -> int:
        return self.lengths[self.start]

    @property
    def size(self) -> int:
        return grammar_size(self)

    @cached_property
    def height(self) -> int:
        return height(self)

    @property
    def is_rlslp(self) -> bool:
        return all(r.is_run for r in self.rules if isinstance(r, Iteration))

    def expand(self, symbol: Optional[int] = None, cap: int = 10**7) -> List[int]:
        return expand(self, self.start if symbol is None else symbol, cap)


def topological_order(g: Grammar) -> Optional[List[int]]:
    """Children-before-parents order of all symbols, or ``None`` if cyclic."""
    n = len(g.rules)
    state = [0] * n  # 0 new, 1 on stack, 2 done
    order: List[int] = []
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, iter(children(g.rules[root])))]
        state[root] = 1
        while stack:
            sym, it = stack[-1]
            for ch in it:
                if not 0 <= ch < n:
                    continue
                if state[ch] == 1:
                    return None
                if state[ch] == 0:
                    state[ch] = 1
                    stack.append((ch, iter(children(g.rules[ch]))))
                    break
            else:
                stack.pop()
                state[sym] = 2
                order.append(sym)
    return order


def occurrence_counts(rule: Iteration, table: PowerSumTable) -> Dict[int, int]:
    """How many times each symbol occurs in the unfolded right-hand side."""
    lo, hi = min(rule.k1, rule.k2), max(rule.k1, rule.k2)
    counts: Dict[int, int] = {}
    for b, c in rule.factors:
        counts[b] = counts.get(b, 0) + power_sum(table, c, hi) - power_sum(table, c, lo - 1)
    return counts


def compute_lengths(g: Grammar) -> List[int]:
    """Expansion length of every symbol, without unfolding any iteration."""
    table = g.power_table
    lengths = [0] * len(g.rules)
    for sym in g.topo_order:
        rule = g.rules[sym]
        if isinstance(rule, Terminal):
            value = 1
        elif isinstance(rule, Binary):
            value = lengths[rule.left] + lengths[rule.right]
        else:
            value = sum(lengths[b] * k for b, k in occurrence_counts(rule, table).items())
        if value >= MAX_LENGTH:
            raise LengthOverflow(f"symbol {sym} expands to {value} >= 2^62 symbols")
        lengths[sym] = value
    return lengths


def grammar_size(g: Grammar) -> int:
    return sum(r.size for r in g.rules)


def height(g: Grammar) -> int:
    """Depth of the unfolded derivation tree; a terminal has height 1."""
    h = [0] * len(g.rules)
    for sym in g.topo_order:
        rule = g.rules[sym]
        h[sym] = 1 + max((h[c] for c in children(rule)), default=0)
    return h[g.start]


def validate(g: Grammar) -> List[Violation]:
    """Return every structural violation; an empty list means well-formed."""
    out: List[Violation] = []
    n = len(g.rules)
    if n == 0:
        return [Violation("empty", None, "grammar has no rules")]
    if g.sigma < 1:
        out.append(Violation("alphabet", None, f"sigma must be positive, got {g.sigma}"))
    if not 0 <= g.start < n:
        out.append(Violation("dangling", None, f"start symbol {g.start} out of range"))
    for sym, rule in enumerate(g.rules):
        if isinstance(rule, Terminal):
            if not 1 <= rule.ch <= g.sigma:
                out.append(Violation("alphabet", sym, f"terminal {rule.ch} outside [1..{g.sigma}]"))
            continue
        if isinstance(rule, Iteration):
            if not rule.factors:
                out.append(Violation("empty-factors", sym, "iteration rule has no factors"))
            if rule.k1 < 1 or rule.k2 < 1:
                out.append(Violation("bounds", sym, f"iteration bounds must be >= 1, got {rule.k1}..{rule.k2}"))
            for b, c in rule.factors:
                if c < 0:
                    out.append(Violation("exponent", sym, f"negative exponent {c}"))
        for ch in children(rule):
            if not 0 <= ch < n:
                out.append(Violation("dangling", sym, f"reference to undefined symbol {ch}"))
            elif ch == sym:
                out.append(Violation("cycle", sym, "symbol references itself"))
    if out:
        return out
    if topological_order(g) is None:
        return [Violation("cycle", None, "rule graph has a cycle")]
    try:
        compute_lengths(g)
    except LengthOverflow as exc:
        out.append(Violation("overflow", None, str(exc)))
    return out


def check(g: Grammar) -> Grammar:
    """Raise :class:`InvalidGrammar` unless ``g`` is well-formed."""
    violations = validate(g)
    if violations:
        raise InvalidGrammar(violations)
    return g


def expand(g: Grammar, symbol: int, cap: int = 10**7) -> List[int]:
    """The exact expansion of ``symbol``; refuses anything longer than ``cap``."""
    length = g.lengths[symbol]
    if length > cap:
        raise CapExceeded(f"symbol {symbol} expands to {length} > cap {cap}")
    needed = set()
    stack = [symbol]
    while stack:
        s = stack.pop()
        if s in needed:
            continue
        needed.add(s)
        stack.extend(children(g.rules[s]))
    memo: Dict[int, List[int]] = {}
    for s in g.topo_order:
        if s not in needed:
            continue
        rule = g.rules[s]
        if isinstance(rule, Terminal):
            memo[s] = [rule.ch]
        elif isinstance(rule, Binary):
            memo[s] = memo[rule.left] + memo[rule.right]
        else:
            out: List[int] = []
            for i in rule.values():
                for b, c in rule.factors:
                    out.extend(memo[b] * (i ** c))
            memo[s] = out
    return memo[symbol]


def iter_expand(g: Grammar, symbol: Optional[int] = None) -> Iterator[int]:
    """Stream the expansion left to right with an explicit stack."""
    stack: List[Iterator[int]] = [iter((g.start if symbol is None else symbol,))]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            continue
        rule = g.rules[nxt]
        if isinstance(rule, Terminal):
            yield rule.ch
        else:
            stack.append(iter_children(rule))


def iter_children(rule: Rule) -> Iterator[int]:
    """Children of the unfolded rule, in order, produced lazily."""
    if isinstance(rule, Binary):
        yield rule.left
        yield rule.right
    elif isinstance(rule, Iteration):
        for i in rule.values():
            for b, c in rule.factors:
                for _ in range(i ** c):
                    yield b


# --------------------------------------------------------------------------
# text file format

_HEADER = re.compile(r"^islp\s+(\d+)\s+(\d+)\s+(\d+)$")
_FACTOR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def format_grammar(g: Grammar) -> str:
    lines = [f"islp {len(g.rules)} {g.start} {g.sigma}"]
    for sym, rule in enumerate(g.rules):
        if isinstance(rule, Terminal):
            lines.append(f"{sym} -> term {rule.ch}")
        elif isinstance(rule, Binary):
            lines.append(f"{sym} -> bin {rule.left} {rule.right}")
        else:
            facs = " ".join(f"({b},{c})" for b, c in rule.factors)
            lines.append(f"{sym} -> iter {rule.k1} {rule.k2} {facs}")
    return "\n".join(lines) + "\n"


def parse_grammar(text: str) -> Grammar:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GrammarFormatError("empty grammar file")
    m = _HEADER.match(lines[0])
    if not m:
        raise GrammarFormatError(f"bad header line: {lines[0]!r}")
    count, start, sigma = (int(x) for x in m.groups())
    rules: List[Optional[Rule]] = [None] * count
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            lhs, rhs = ln.split("->", 1)
            sym = int(lhs)
            kind, *rest = rhs.split(None, 1)
            args = rest[0] if rest else ""
            if kind == "term":
                rule: Rule = Terminal(int(args))
            elif kind == "bin":
                left, right = args.split()
                rule = Binary(int(left), int(right))
            elif kind == "iter":
                k1, k2, facs = args.split(None, 2) if len(args.split()) > 2 else (*args.split(), "")
                factors = tuple((int(b), int(c)) for b, c in _FACTOR.findall(facs))
                if _FACTOR.sub("", facs).strip():
                    raise ValueError("malformed factor list")
                rule = Iteration(int(k1), int(k2), factors)
            else:
                raise ValueError(f"unknown rule kind {kind!r}")
        except ValueError as exc:
            raise GrammarFormatError(f"line {lineno}: {exc}: {ln!r}") from None
        if not 0 <= sym < count:
            raise GrammarFormatError(f"line {lineno}: symbol {sym} outside 0..{count - 1}")
        if rules[sym] is not None:
            raise GrammarFormatError(f"line {lineno}: symbol {sym} defined twice")
        rules[sym] = rule
    missing = [i for i, r in enumerate(rules) if r is None]
    if missing:
        raise GrammarFormatError(f"symbols without a rule: {missing[:10]}")
    return Grammar(tuple(rules), start, sigma)  # type: ignore[arg-type]


def load_grammar(path: str) -> Grammar:
    with open(path, encoding="ascii") as fh:
        return parse_grammar(fh.read())


def save_grammar(g: Grammar, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_grammar(g))


def text_to_symbols(data: bytes) -> List[int]:
    if 0 in data:
        raise ValueError("NUL bytes cannot be represented: the alphabet starts at 1")
    return list(data)


def symbols_to_bytes(symbols: Iterable[int]) -> bytes:
    return bytes(symbols)


# --------------------------------------------------------------------------
# construction helper


class GrammarBuilder:
    """Mutable scratch space for building grammars.

    Symbols may be aliased to other symbols (unit rules); :meth:`build` resolves
    aliases, drops everything unreachable from the start and renumbers.
    """

    def __init__(self, rules: Sequence[Rule] = (), sigma: int = 1):
        self.rules: List[Optional[Rule]] = list(rules)
        self.sigma = sigma
        self._alias: Dict[int, int] = {}
        self._terminals: Dict[int, int] = {}
        self._pairs: Dict[Tuple[int, int], int] = {}
        self.lengths: Dict[int, int] = {}

    def add(self, rule: Rule) -> int:
        self.rules.append(rule)
        return len(self.rules) - 1

    def terminal(self, ch: int) -> int:
        if ch not in self._terminals:
            self._terminals[ch] = self.add(Terminal(ch))
            self.sigma = max(self.sigma, ch)
        return self._terminals[ch]

    def binary(self, left: int, right: int) -> int:
        key = (self.resolve(left), self.resolve(right))
        if key not in self._pairs:
            self._pairs[key] = self.add(Binary(*key))
        return self._pairs[key]

    def iteration(self, k1: int, k2: int, factors: Sequence[Tuple[int, int]]) -> int:
        factors = tuple(factors)
        if len(factors) == 1 and (k1 == k2 == 1 or (k1 == k2 and factors[0][1] == 0)):
            return factors[0][0]
        return self.add(Iteration(k1, k2, factors))

    def concat(self, symbols: Sequence[int], weights: Optional[Sequence[int]] = None) -> int:
        """A symbol for the concatenation, as a balanced tree of binary rules.

        With ``weights`` the split point is the weighted midpoint, so heavy
        symbols end up close to the root.
        """
        symbols = list(symbols)
        if not symbols:
            raise ValueError("cannot concatenate an empty sequence")
        if weights is None:
            weights = [1] * len(symbols)
        prefix = [0]
        for w in weights:
            prefix.append(prefix[-1] + w)

        def build(lo: int, hi: int) -> int:
            if hi - lo == 1:
                return symbols[lo]
            total = prefix[hi] - prefix[lo]
            mid = lo + 1
            best = None
            for cut in range(lo + 1, hi):
                score = abs(2 * (prefix[cut] - prefix[lo]) - total)
                if best is None or score < best:
                    best, mid = score, cut
            return self.binary(build(lo, mid), build(mid, hi))

        return build(0, len(symbols))

    def replace(self, symbol: int, rule: Rule) -> None:
        self.rules[symbol] = rule

    def alias(self, symbol: int, target: int) -> None:
        if self.resolve(target) == symbol:
            raise ValueError("alias would create a cycle")
        self._alias[symbol] = target
        self.rules[symbol] = None

    def resolve(self, symbol: int) -> int:
        path = []
        while symbol in self._alias:
            path.append(symbol)
            symbol = self._alias[symbol]
        for p in path:
            self._alias[p] = symbol
        return symbol

    def _resolved(self, rule: Rule) -> Rule:
        r = self.resolve
        if isinstance(rule, Binary):
            return Binary(r(rule.left), r(rule.right))
        if isinstance(rule, Iteration):
            return Iteration(rule.k1, rule.k2, tuple((r(b), c) for b, c in rule.factors))
        return rule

    def build(self, start: int) -> Grammar:
        start = self.resolve(start)
        reach = set()
        stack = [start]
        while stack:
            s = stack.pop()
            if s in reach:
                continue
            reach.add(s)
            rule = self.rules[s]
            if rule is None:
                raise ValueError(f"symbol {s} has no rule")
            stack.extend(self.resolve(c) for c in children(rule))
        keep = sorted(reach)
        new_id = {old: i for i, old in enumerate(keep)}
        rules: List[Rule] = []
        for old in keep:
            rule = self._resolved(self.rules[old])  # type: ignore[arg-type]
            if isinstance(rule, Binary):
                rule = Binary(new_id[rule.left], new_id[rule.right])
            elif isinstance(rule, Iteration):
                rule = Iteration(rule.k1, rule.k2, tuple((new_id[b], c) for b, c in rule.factors))
            rules.append(rule)
        sigma = max([self.sigma] + [r.ch for r in rules if isinstance(r, Terminal)])
        return Grammar(tuple(rules), new_id[start], sigma)


def prune(g: Grammar) -> Grammar:
    """Drop rules unreachable from the start symbol."""
    return GrammarBuilder(g.rules, g.sigma).build(g.start)
