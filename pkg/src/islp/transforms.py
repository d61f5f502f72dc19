"""Grammar-to-grammar string transformations: reversal, morphisms, single edits.

Also holds :func:`to_rlslp`, which unfolds iteration rules into runs so that
RLSLP-only machinery (composable functions) can work on any ISLP.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

from .errors import EmptyImage, OutOfRange
from .grammar import Binary, Grammar, GrammarBuilder, Iteration, Rule, Terminal
from .navigator import IterationIndex

EDIT_KINDS = ("substitute", "insert_before", "insert_after", "delete")


def reverse(g: Grammar) -> Grammar:
    """Grammar for the reversed text, of exactly the same size."""
    rules: List[Rule] = []
    for rule in g.rules:
        if isinstance(rule, Binary):
            rules.append(Binary(rule.right, rule.left))
        elif isinstance(rule, Iteration):
            rules.append(Iteration(rule.k2, rule.k1, tuple(reversed(rule.factors))))
        else:
            rules.append(rule)
    return Grammar(tuple(rules), g.start, g.sigma)


def apply_morphism(g: Grammar, phi: Mapping[int, Sequence[int]]) -> Grammar:
    """Grammar for ``phi`` applied symbol by symbol to the text.

    Symbols missing from ``phi`` map to themselves.  Each terminal rule is
    replaced by a balanced concatenation of its image.
    """
    b = GrammarBuilder(g.rules, 1)
    for sym, rule in enumerate(g.rules):
        if not isinstance(rule, Terminal):
            continue
        image = list(phi.get(rule.ch, (rule.ch,)))
        if not image:
            raise EmptyImage(f"symbol {rule.ch} has an empty image")
        if len(image) == 1:
            b.replace(sym, Terminal(image[0]))
            b.sigma = max(b.sigma, image[0])
            continue
        pieces = [b.terminal(ch) for ch in image]
        b.alias(sym, b.concat(pieces))
    return b.build(g.start)


def morphism_text(text: Sequence[int], phi: Mapping[int, Sequence[int]]) -> List[int]:
    out: List[int] = []
    for ch in text:
        out.extend(phi.get(ch, (ch,)))
    return out


@dataclass(frozen=True)
class EditOp:
    kind: str
    position: int
    symbol: int = 0

    def __post_init__(self):
        if self.kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {self.kind!r}")

    def replacement(self, old: int) -> List[int]:
        """What the character at ``position`` turns into."""
        if self.kind == "substitute":
            return [self.symbol]
        if self.kind == "insert_before":
            return [self.symbol, old]
        if self.kind == "insert_after":
            return [old, self.symbol]
        return []

    def apply_text(self, text: Sequence[int]) -> List[int]:
        p = self.position
        return list(text[:p - 1]) + self.replacement(text[p - 1]) + list(text[p:])


def edit(g: Grammar, op: EditOp) -> Grammar:
    """Grammar for the text after one edit.

    Only the symbols on the root-to-leaf path of ``op.position`` are rebuilt.
    An iteration rule on the path is split into the blocks before, the part
    of the current block before the touched run, the copies of the run before
    and after the touched copy, the rest of the block and the blocks after;
    empty pieces are dropped.  Every symbol appears at most once on the path,
    so the grammar grows by a constant factor at most.
    """
    n = g.n
    if not 1 <= op.position <= n:
        raise OutOfRange(f"position {op.position} outside [1, {n}]")
    lengths = g.lengths
    b = GrammarBuilder(g.rules, g.sigma)
    indexes: Dict[int, IterationIndex] = {}

    def join(pieces: List[Optional[int]]) -> Optional[int]:
        kept = [p for p in pieces if p is not None]
        return b.concat(kept) if kept else None

    def copies(base: int, times: int) -> Optional[int]:
        if times <= 0:
            return None
        return base if times == 1 else b.add(Iteration(1, times, ((base, 0),)))

    def sub_iteration(k1: int, k2: int, factors) -> Optional[int]:
        return b.add(Iteration(k1, k2, tuple(factors))) if factors else None

    sym, pos = g.start, op.position
    # walk down, recording how to rebuild each level around the new child
    frames = []
    while True:
        rule = g.rules[sym]
        if isinstance(rule, Terminal):
            break
        if isinstance(rule, Binary):
            ll = lengths[rule.left]
            if pos <= ll:
                frames.append(([], [rule.right]))
                sym = rule.left
            else:
                frames.append(([rule.left], []))
                sym, pos = rule.right, pos - ll
            continue
        idx = indexes.get(sym)
        if idx is None:
            idx = indexes[sym] = IterationIndex(rule, lengths, g.power_table)
        u, r, off, _ = idx.locate(pos)
        i = idx.value_at(u)
        base = rule.factors[r - 1][0]
        bl = lengths[base]
        q = (off - 1) // bl + 1
        before = [
            sub_iteration(rule.k1, idx.value_at(u - 1), rule.factors) if u > 1 else None,
            sub_iteration(i, i, rule.factors[:r - 1]),
            copies(base, q - 1),
        ]
        after = [
            copies(base, idx.run_copies(u, r) - q),
            sub_iteration(i, i, rule.factors[r:]),
            sub_iteration(idx.value_at(u + 1), rule.k2, rule.factors) if u < idx.count else None,
        ]
        frames.append((before, after))
        sym, pos = base, off - (q - 1) * bl
    old = g.rules[sym].ch  # type: ignore[union-attr]
    node = join([b.terminal(ch) for ch in op.replacement(old)])
    for before, after in reversed(frames):
        node = join(before + [node] + after)
    if node is None:
        raise ValueError("edit would leave an empty text")
    return b.build(node)


def to_rlslp(g: Grammar) -> Grammar:
    """Equivalent grammar whose iteration rules are all runs ``B^t``.

    Each general iteration rule is unfolded into its sequence of runs
    ``B_j^(i^c_j)`` joined by a length-weighted balanced tree, so the result
    has size proportional to the number of blocks times factors.
    """
    if g.is_rlslp:
        return g
    b = GrammarBuilder(g.rules, g.sigma)
    lengths = g.lengths
    runs: Dict[tuple, int] = {}
    for sym, rule in enumerate(g.rules):
        if not isinstance(rule, Iteration) or rule.is_run:
            continue
        pieces, weights = [], []
        for i in rule.values():
            for base, c in rule.factors:
                times = i ** c
                key = (base, times)
                if key not in runs:
                    runs[key] = base if times == 1 else b.add(Iteration(1, times, ((base, 0),)))
                pieces.append(runs[key])
                weights.append(lengths[base] * times)
        b.alias(sym, b.concat(pieces, weights))
    return b.build(g.start)
