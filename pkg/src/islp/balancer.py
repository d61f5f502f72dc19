"""Height balancing for ISLPs.

The grammar is viewed as a DAG in which every iteration rule is conceptually
unfolded into its sequence of children.  Nodes are labelled with
``(floor(log2 paths-from-root), floor(log2 paths-to-sinks))``; edges between
equally labelled nodes form vertex-disjoint paths (SC-paths).  Each path
``A_0 -> ... -> A_p`` is rebuilt so that ``A_i`` derives
``suffix(left siblings) . A_p . prefix(right siblings)`` where the suffix and
prefix come from weight-balanced fragments.  Iteration rules end paths and are
kept verbatim, so exponents survive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvalidExponent, LengthOverflow
from .grammar import (MAX_LENGTH, Binary, Grammar, GrammarBuilder, Iteration, Terminal, check,
                      children, occurrence_counts)


# --------------------------------------------------------------------------
# preprocessing

def split_special_rules(g: Grammar) -> Grammar:
    """Make every iteration rule emit each of its symbols at least twice.

    ``k1 = k2 = 1`` rules become balanced concatenations.  For ``k1 = k2 >= 2``
    the exponent-free factors are pulled out as plain symbols and each maximal
    stretch of the remaining factors becomes its own single-block iteration.
    """
    builder = GrammarBuilder(g.rules, g.sigma)
    lengths = g.lengths
    for sym, rule in enumerate(g.rules):
        if not isinstance(rule, Iteration) or rule.k1 != rule.k2:
            continue
        bases = [b for b, _ in rule.factors]
        if rule.k1 == 1:
            builder.alias(sym, builder.concat(bases, [lengths[b] for b in bases]))
            continue
        if all(c > 0 for _, c in rule.factors):
            continue
        pieces: List[int] = []
        stretch: List[Tuple[int, int]] = []
        for b, c in rule.factors:
            if c > 0:
                stretch.append((b, c))
                continue
            if stretch:
                pieces.append(builder.add(Iteration(rule.k1, rule.k1, tuple(stretch))))
                stretch = []
            pieces.append(b)
        if stretch:
            pieces.append(builder.add(Iteration(rule.k1, rule.k1, tuple(stretch))))
        weights = [_piece_length(builder, p, lengths) for p in pieces]
        builder.alias(sym, builder.concat(pieces, weights))
    return builder.build(g.start)


def _piece_length(builder: GrammarBuilder, sym: int, lengths: Sequence[int]) -> int:
    if sym < len(lengths):
        return lengths[sym]
    rule = builder.rules[sym]
    assert isinstance(rule, Iteration) and rule.k1 == rule.k2
    return sum(lengths[b] * rule.k1 ** c for b, c in rule.factors)


# --------------------------------------------------------------------------
# SC-decomposition

@dataclass
class DagView:
    """Path counts, labels and SC edges of the unfolded grammar DAG."""

    paths_from_root: Dict[int, int]
    paths_to_sinks: Dict[int, int]
    label: Dict[int, Tuple[int, int]]
    sc_next: Dict[int, int] = field(default_factory=dict)  # node -> SC child
    sc_prev: Dict[int, int] = field(default_factory=dict)

    def paths(self) -> List[List[int]]:
        """All SC-paths (including single nodes), each listed top to bottom."""
        out = []
        for v in self.label:
            if v in self.sc_prev:
                continue
            path = [v]
            while path[-1] in self.sc_next:
                path.append(self.sc_next[path[-1]])
            out.append(path)
        return out


def sc_decompose(g: Grammar) -> DagView:
    reach = set()
    stack = [g.start]
    while stack:
        s = stack.pop()
        if s not in reach:
            reach.add(s)
            stack.extend(children(g.rules[s]))
    order = [s for s in reversed(g.topo_order) if s in reach]  # parents first
    pi = {s: 0 for s in reach}
    pi[g.start] = 1
    table = g.power_table
    for s in order:
        rule = g.rules[s]
        if isinstance(rule, Binary):
            pi[rule.left] += pi[s]
            pi[rule.right] += pi[s]
        elif isinstance(rule, Iteration):
            for b, k in occurrence_counts(rule, table).items():
                pi[b] += pi[s] * k
    for s, v in pi.items():
        if v >= MAX_LENGTH:
            raise LengthOverflow(f"{v} root paths reach symbol {s}")
    sinks = {s: g.lengths[s] for s in reach}
    label = {s: (pi[s].bit_length() - 1, sinks[s].bit_length() - 1) for s in reach}
    view = DagView(pi, sinks, label)
    for s in order:
        rule = g.rules[s]
        if not isinstance(rule, Binary):
            continue
        hits = [c for c in (rule.left, rule.right) if label[c] == label[s]]
        assert len(hits) <= 1, f"symbol {s} has two SC children"
        if hits:
            child = hits[0]
            assert child not in view.sc_prev, f"symbol {child} has two SC parents"
            view.sc_next[s] = child
            view.sc_prev[child] = s
    return view


# --------------------------------------------------------------------------
# weighted suffix / prefix fragments

@dataclass
class Fragment:
    """A small SLP over a weighted sequence.

    Right-hand sides are lists of items: an item ``>= 0`` is a position of the
    input sequence, an item ``< 0`` is the internal variable ``-item - 1``.
    ``exposed[j]`` is the item deriving the suffix (or prefix) at ``j``.
    """

    rules: List[List[int]]
    exposed: List[int]
    weights: List[int]

    def weight(self, item: int, _memo: Optional[Dict[int, int]] = None) -> int:
        if item >= 0:
            return self.weights[item]
        memo = _memo if _memo is not None else {}
        if item not in memo:
            memo[item] = sum(self.weight(x, memo) for x in self.rules[-item - 1])
        return memo[item]

    def expand(self, item: int) -> List[int]:
        if item >= 0:
            return [item]
        out: List[int] = []
        for x in self.rules[-item - 1]:
            out.extend(self.expand(x))
        return out

    def leaf_depths(self, item: int) -> Dict[int, int]:
        """Largest depth at which each position occurs below ``item`` (a leaf alone has depth 0)."""
        if item >= 0:
            return {item: 0}
        out: Dict[int, int] = {}
        for x in self.rules[-item - 1]:
            for leaf, d in self.leaf_depths(x).items():
                out[leaf] = max(out.get(leaf, 0), d + 1)
        return out


def build_weighted_slp(weights: Sequence[int], mode: str = "suffix") -> Fragment:
    """Fragment exposing every suffix (``mode="suffix"``) or prefix of the sequence.

    The sequence is split at its weighted midpoint ``a`` into ``u a v``; the
    balanced tree is ``[tree(u), a, tree(v)]``, the suffix starting at ``a`` is
    ``a tree(v)`` and a suffix starting inside ``u`` is a suffix of ``u``
    followed by that one.
    """
    if not weights or any(w <= 0 for w in weights):
        raise ValueError("weights must be a non-empty list of positive integers")
    if mode not in ("suffix", "prefix"):
        raise ValueError("mode must be 'suffix' or 'prefix'")
    n = len(weights)
    if mode == "prefix":
        frag = build_weighted_slp(list(reversed(weights)), "suffix")
        flip = lambda x: n - 1 - x if x >= 0 else x  # noqa: E731
        rules = [[flip(x) for x in reversed(rhs)] for rhs in frag.rules]
        exposed = [flip(frag.exposed[n - 1 - j]) for j in range(n)]
        return Fragment(rules, exposed, list(weights))

    rules: List[List[int]] = []
    prefix = [0]
    for w in weights:
        prefix.append(prefix[-1] + w)

    def new(rhs: List[int]) -> int:
        if len(rhs) == 1:
            return rhs[0]
        rules.append(rhs)
        return -len(rules)

    def build(lo: int, hi: int, want_tree: bool) -> Tuple[Optional[int], Dict[int, int]]:
        if lo >= hi:
            return None, {}
        half = prefix[lo] + (prefix[hi] - prefix[lo] + 1) // 2
        # smallest a with prefix[a+1] >= half
        a = lo
        while prefix[a + 1] < half:
            a += 1
        left, left_suf = build(lo, a, want_tree)
        right, right_suf = build(a + 1, hi, True)
        tree = new([x for x in (left, a, right) if x is not None]) if want_tree else None
        at_a = new([a, right]) if right is not None else a
        suf = dict(right_suf)
        suf[a] = at_a
        for j, s in left_suf.items():
            suf[j] = new([s, at_a])
        return tree, suf

    _, suf = build(0, n, False)
    return Fragment(rules, [suf[j] for j in range(n)], list(weights))


def _emit_fragment(builder: GrammarBuilder, frag: Fragment, symbols: Sequence[int]) -> List[int]:
    """Copy a fragment into the builder; returns the symbol of every exposed item."""
    made: Dict[int, int] = {}
    weight_memo: Dict[int, int] = {}

    def sym_of(item: int) -> int:
        if item >= 0:
            return symbols[item]
        if item not in made:
            parts = frag.rules[-item - 1]
            syms = [sym_of(x) for x in parts]
            wts = [frag.weight(x, weight_memo) for x in parts]
            made[item] = _binarize(builder, syms, wts)
        return made[item]

    return [sym_of(x) for x in frag.exposed]


def _binarize(builder: GrammarBuilder, syms: Sequence[int], wts: Sequence[int]) -> int:
    if len(syms) == 1:
        return syms[0]
    if len(syms) == 2:
        return builder.binary(syms[0], syms[1])
    if len(syms) == 3:
        if wts[0] <= wts[2]:
            return builder.binary(builder.binary(syms[0], syms[1]), syms[2])
        return builder.binary(syms[0], builder.binary(syms[1], syms[2]))
    return builder.concat(syms, wts)


# --------------------------------------------------------------------------
# balancing

@dataclass
class BalanceReport:
    size_in: int
    size_out: int
    height_in: int
    height_out: int
    n: int
    paths: int = 0

    def line(self) -> str:
        return f"{self.size_in} {self.size_out} {self.height_in} {self.height_out} {self.n}"


def balance(g: Grammar, report: Optional[List[BalanceReport]] = None) -> Grammar:
    """An equivalent grammar of height ``O(log n)``; iteration rules are kept as they are."""
    check(g)
    split = split_special_rules(g)
    view = sc_decompose(split)
    lengths = split.lengths
    builder = GrammarBuilder(split.rules, split.sigma)
    paths = view.paths()
    for path in paths:
        if len(path) < 2:
            continue
        bottom = path[-1]
        lefts: List[Tuple[int, int]] = []  # (level, symbol), top to bottom
        rights: List[Tuple[int, int]] = []
        for level, (node, nxt) in enumerate(zip(path, path[1:])):
            rule = split.rules[node]
            assert isinstance(rule, Binary)
            if rule.right == nxt:
                lefts.append((level, rule.left))
            else:
                rights.append((level, rule.right))
        rights.reverse()  # deepest first
        left_syms = _emit_fragment(builder, build_weighted_slp([lengths[s] for _, s in lefts], "suffix"),
                                   [s for _, s in lefts]) if lefts else []
        right_syms = _emit_fragment(builder, build_weighted_slp([lengths[s] for _, s in rights], "prefix"),
                                    [s for _, s in rights]) if rights else []
        left_tail = [0] * (len(lefts) + 1)  # weight of lefts[j:]
        for j in range(len(lefts) - 1, -1, -1):
            left_tail[j] = left_tail[j + 1] + lengths[lefts[j][1]]
        right_head = [0]  # weight of rights[:j]
        for _, s in rights:
            right_head.append(right_head[-1] + lengths[s])
        li = len(lefts)  # lefts[li:] sit at or below the current level
        ri = 0  # rights[:ri] sit at or below the current level
        bottom_len = lengths[bottom]
        for level in range(len(path) - 2, -1, -1):
            while li > 0 and lefts[li - 1][0] >= level:
                li -= 1
            while ri < len(rights) and rights[ri][0] >= level:
                ri += 1
            parts, wts = [], []
            if li < len(lefts):
                parts.append(left_syms[li])
                wts.append(left_tail[li])
            parts.append(bottom)
            wts.append(bottom_len)
            if ri:
                parts.append(right_syms[ri - 1])
                wts.append(right_head[ri])
            node = path[level]
            new_sym = _binarize(builder, parts, wts)
            builder.alias(node, new_sym)
    out = builder.build(split.start)
    if report is not None:
        report.append(BalanceReport(g.size, out.size, g.height, out.height, g.n, len(paths)))
    return out


def reduce_degree(g: Grammar) -> Grammar:
    """Cap exponents: single-block rules with ``k1 = k2 = 1`` lose their exponents.

    Any other exponent ``c`` with ``max(k1, k2)^c > n`` cannot belong to a
    grammar of a length-``n`` text and is rejected.
    """
    n = g.n
    rules = []
    for sym, rule in enumerate(g.rules):
        if isinstance(rule, Iteration):
            if rule.k1 == rule.k2 == 1:
                rule = Iteration(1, 1, tuple((b, 0) for b, _ in rule.factors))
            else:
                top = max(rule.k1, rule.k2)
                for _, c in rule.factors:
                    if top ** c > n:
                        raise InvalidExponent(f"symbol {sym}: {top}^{c} exceeds the text length {n}")
        rules.append(rule)
    return Grammar(tuple(rules), g.start, g.sigma)
