"""Random access and substring extraction on ISLPs.

Every iteration rule gets an :class:`IterationIndex` of ``O(t)`` words: the
per-exponent cumulative lengths ``S``, the exponent array ``C``, and the
predecessor values stored at chunk boundaries.  With it, the length of the
first ``r`` factors of a block with iteration value ``i`` (``f_r(i)``) costs
``O(d)`` operations, and the length of the first ``u`` blocks is one
polynomial evaluation.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import OutOfRange
from .grammar import Binary, Grammar, Iteration, Terminal
from .power_sums import PowerSumTable, power_sum

TERM, BIN, ITER = 0, 1, 2


def _poly_compose_linear(coeffs: Sequence[Fraction], a: int, sign: int) -> List[Fraction]:
    """Coefficients (low to high) of ``P(a + sign*u)`` given ``P`` low to high."""
    out: List[Fraction] = []
    for q in reversed(coeffs):
        # out <- out * (a + sign*u) + q
        nxt = [Fraction(0)] * (len(out) + 1)
        for deg, val in enumerate(out):
            nxt[deg] += val * a
            nxt[deg + 1] += val * sign
        nxt[0] += q
        out = nxt
    return out


def _integer_poly(coeffs: Sequence[Fraction]) -> Tuple[Tuple[int, ...], int]:
    """Low-to-high rationals -> (high-to-low integer coefficients, denominator)."""
    from math import lcm

    denom = lcm(*(q.denominator for q in coeffs)) if coeffs else 1
    return tuple(int(q * denom) for q in reversed(coeffs)), denom


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for q in coeffs:
        acc = acc * x + q
    return acc


@dataclass
class QueryStats:
    """Operation counters filled in by navigation queries."""

    steps: int = 0  # search probes plus binary descents
    calls: int = 0  # grammar nodes entered
    compositions: int = 0


@dataclass
class TraceStep:
    symbol: int
    i: int
    r: int
    offset: int  # position inside the run B_r^(i^c_r)
    block_probes: List[Tuple[int, int]] = field(default_factory=list)
    factor_probes: List[Tuple[int, int]] = field(default_factory=list)


def _search(value: Callable[[int], int], x: int, hi: int, hi_value: int, adaptive: bool,
            probes: Optional[list]) -> Tuple[int, int]:
    """Smallest ``u`` in ``1..hi`` with ``value(u) >= x``, given ``value(0) = 0 < x <= value(hi)``.

    Returns ``(u, evaluations)``.  The plain variant is a textbook lower bound;
    the adaptive one also probes the neighbour of every midpoint and stops as
    soon as it brackets ``x``.
    """
    cache = {0: 0, hi: hi_value}
    evals = 0

    def get(u: int) -> int:
        nonlocal evals
        v = cache.get(u)
        if v is None:
            v = cache[u] = value(u)
            evals += 1
            if probes is not None:
                probes.append((u, v))
        return v

    lo = 0
    if not adaptive:
        while lo < hi:
            mid = (lo + hi) // 2
            if get(mid) < x:
                lo = mid + 1
            else:
                hi = mid
        return lo, evals
    # invariant: value(lo) < x <= value(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if get(mid) < x:
            if get(mid + 1) >= x:
                return mid + 1, evals
            lo = mid + 1
        else:
            if get(mid - 1) < x:
                return mid, evals
            hi = mid - 1
    return hi, evals


class IterationIndex:
    """Navigation structure for one iteration rule."""

    def __init__(self, rule: Iteration, lengths: Sequence[int], table: PowerSumTable):
        self.rule = rule
        self.k1, self.k2 = rule.k1, rule.k2
        self.count = rule.count
        self.descending = rule.descending
        self.bases = [b for b, _ in rule.factors]
        self.C = [c for _, c in rule.factors]
        self.lens = [lengths[b] for b in self.bases]
        self.t = len(self.bases)
        self.d = max(self.C)
        self.chunk = self.d + 1

        # S[r] (1-based, S[0] = 0 unused) and chunk-boundary predecessors
        self.S = [0] * (self.t + 1)
        running = [0] * (self.d + 1)
        last = [0] * (self.d + 1)
        self.chunk_pred: List[Tuple[int, ...]] = []
        for r in range(1, self.t + 1):
            if (r - 1) % self.chunk == 0:
                self.chunk_pred.append(tuple(last))
            c = self.C[r - 1]
            running[c] += self.lens[r - 1]
            self.S[r] = running[c]
            last[c] = r
        self.totals = tuple(running)  # s_c = S[pred(t, c)]
        self.block_poly = tuple(reversed(self.totals))  # f_t(i), high to low

        # total length of the first u blocks, as a polynomial in u
        acc = [Fraction(0)] * (self.d + 2)
        for c, s in enumerate(self.totals):
            if not s:
                continue
            coeffs, denom = table.polys[c]
            p = [Fraction(q, denom) for q in reversed(coeffs)]
            if self.descending:
                shifted = _poly_compose_linear(p, self.k1, -1)
                shifted = [-q for q in shifted]
                shifted[0] += power_sum(table, c, self.k1)
            else:
                shifted = _poly_compose_linear(p, self.k1 - 1, 1)
                shifted[0] -= power_sum(table, c, self.k1 - 1)
            for deg, q in enumerate(shifted):
                acc[deg] += s * q
        self.prefix_poly, self.prefix_denom = _integer_poly(acc)
        self.table = table

        # exponent-free rules: every block is identical
        self.uniform = self.d == 0
        if self.uniform:
            self.block_len = self.totals[0]
            self.factor_ends = self.S if self.t else [0]

    # -- length functions ---------------------------------------------------
    def f_r(self, r: int, i: int) -> int:
        """Length of ``B_1^(i^c_1) ... B_r^(i^c_r)``, following the chunked predecessor walk."""
        if r <= 0:
            return 0
        j = (r - 1) // self.chunk
        rc = list(self.chunk_pred[j])
        for k in range(j * self.chunk + 1, r + 1):
            rc[self.C[k - 1]] = k
        S = self.S
        s = 0
        p = 1
        for c in range(self.d + 1):
            if rc[c]:
                s += S[rc[c]] * p
            p *= i
        return s

    def f_r_direct(self, r: int, i: int) -> int:
        """Reference: direct sum over the first ``r`` factors."""
        return sum(self.lens[j] * i ** self.C[j] for j in range(r))

    def block_length(self, i: int) -> int:
        return _horner(self.block_poly, i)

    def value_at(self, u: int) -> int:
        """Iteration value of block ``u`` (1-based)."""
        return self.k1 + u - 1 if not self.descending else self.k1 - u + 1

    def block_of_value(self, k: int) -> int:
        return k - self.k1 + 1 if not self.descending else self.k1 - k + 1

    def blocks_before(self, u: int) -> int:
        """Total length of the first ``u`` blocks (``u`` in ``0..count``)."""
        num = _horner(self.prefix_poly, u)
        return num // self.prefix_denom

    def f_plus(self, k: int) -> int:
        """Cumulative length of blocks ``k1..k`` (iteration values, either direction)."""
        return self.blocks_before(self.block_of_value(k))

    def f_plus_power_sums(self, k: int) -> int:
        """Reference: ``sum_c s_c (p_c(hi) - p_c(lo - 1))`` over the covered value range."""
        u = self.block_of_value(k)
        if u <= 0:
            return 0
        lo, hi = (self.k1, k) if not self.descending else (k, self.k1)
        return sum(s * (power_sum(self.table, c, hi) - power_sum(self.table, c, lo - 1))
                   for c, s in enumerate(self.totals))

    @property
    def total(self) -> int:
        return self.blocks_before(self.count)

    # -- location -------------------------------------------------------------
    def locate(self, l: int, adaptive: bool = True, shortcut: bool = True,
               trace: Optional[TraceStep] = None) -> Tuple[int, int, int, int]:
        """Find block ``u``, factor ``r`` and the offset of ``l`` inside run ``r``.

        Returns ``(u, r, offset, evaluations)`` with ``u``, ``r`` and ``offset``
        1-based.
        """
        if shortcut and self.uniform:
            bl = self.block_len
            u = (l - 1) // bl + 1
            l1 = l - (u - 1) * bl
            r = bisect.bisect_left(self.factor_ends, l1, 1)
            off = l1 - self.factor_ends[r - 1]
            if trace is not None:
                trace.i, trace.r, trace.offset = self.value_at(u), r, off
            return u, r, off, 1
        bprobes = trace.block_probes if trace is not None else None
        u, e1 = _search(self.blocks_before, l, self.count, self.total, adaptive, bprobes)
        l1 = l - self.blocks_before(u - 1)
        i = self.value_at(u)
        fprobes = trace.factor_probes if trace is not None else None
        r, e2 = _search(lambda r: self.f_r(r, i), l1, self.t, self.block_length(i), adaptive, fprobes)
        off = l1 - self.f_r(r - 1, i)
        if trace is not None:
            trace.i, trace.r, trace.offset = i, r, off
        return u, r, off, 1 + e1 + e2

    def run_copies(self, u: int, r: int) -> int:
        return self.value_at(u) ** self.C[r - 1]


class Navigator:
    """Access and extraction over a fixed grammar.

    ``adaptive`` selects the neighbour-probing search; ``shortcut`` lets rules
    without exponents resolve their block by division.
    """

    def __init__(self, g: Grammar, adaptive: bool = True, shortcut: bool = True):
        self.g = g
        self.adaptive = adaptive
        self.shortcut = shortcut
        self.lengths = g.lengths
        self.n = g.n
        self.kind: List[int] = []
        self.a: List[int] = []
        self.b: List[int] = []
        self.index: Dict[int, IterationIndex] = {}
        table = g.power_table
        for sym, rule in enumerate(g.rules):
            if isinstance(rule, Terminal):
                self.kind.append(TERM)
                self.a.append(rule.ch)
                self.b.append(0)
            elif isinstance(rule, Binary):
                self.kind.append(BIN)
                self.a.append(rule.left)
                self.b.append(rule.right)
            else:
                self.kind.append(ITER)
                self.a.append(0)
                self.b.append(0)
                self.index[sym] = IterationIndex(rule, self.lengths, table)

    def _check(self, l: int, length: int = 1) -> None:
        if length < 1 or l < 1 or l + length - 1 > self.n:
            raise OutOfRange(f"range [{l}, {l + length - 1}] outside [1, {self.n}]")

    def access(self, l: int, stats: Optional[QueryStats] = None,
               trace: Optional[List[TraceStep]] = None) -> int:
        """The symbol at position ``l`` (1-based)."""
        self._check(l)
        kind, a, b, lengths = self.kind, self.a, self.b, self.lengths
        sym = self.g.start
        steps = 0
        while True:
            k = kind[sym]
            if k == BIN:
                left = a[sym]
                ll = lengths[left]
                if l <= ll:
                    sym = left
                else:
                    l -= ll
                    sym = b[sym]
                steps += 1
            elif k == ITER:
                idx = self.index[sym]
                step = TraceStep(sym, 0, 0, 0) if trace is not None else None
                u, r, off, e = idx.locate(l, self.adaptive, self.shortcut, step)
                if trace is not None:
                    trace.append(step)
                steps += e
                l = (off - 1) % idx.lens[r - 1] + 1
                sym = idx.bases[r - 1]
            else:
                if stats is not None:
                    stats.steps += steps
                    stats.calls += 1
                return a[sym]

    def _children_from(self, sym: int, u: int, r: int, copy: int):
        """Whole children of iteration ``sym`` after copy ``copy`` of run ``r`` in block ``u``."""
        idx = self.index[sym]
        base = idx.bases[r - 1]
        for _ in range(copy + 1, idx.run_copies(u, r)):
            yield base
        i = idx.value_at(u)
        for rr in range(r, idx.t):
            bb = idx.bases[rr]
            for _ in range(i ** idx.C[rr]):
                yield bb
        for uu in range(u + 1, idx.count + 1):
            i = idx.value_at(uu)
            for rr in range(idx.t):
                bb = idx.bases[rr]
                for _ in range(i ** idx.C[rr]):
                    yield bb

    def _all_children(self, sym: int):
        idx = self.index[sym]
        for uu in range(1, idx.count + 1):
            i = idx.value_at(uu)
            for rr in range(idx.t):
                bb = idx.bases[rr]
                for _ in range(i ** idx.C[rr]):
                    yield bb

    def extract(self, l: int, length: int, stats: Optional[QueryStats] = None) -> List[int]:
        """``T[l .. l+length-1]``: descend to ``l``, then emit while unwinding."""
        self._check(l, length)
        kind, a, b, lengths = self.kind, self.a, self.b, self.lengths
        pending = []  # iterators over whole symbols still to the right
        sym = self.g.start
        calls = 1
        steps = 0
        while kind[sym] != TERM:
            if kind[sym] == BIN:
                left = a[sym]
                ll = lengths[left]
                if l <= ll:
                    pending.append(iter((b[sym],)))
                    sym = left
                else:
                    l -= ll
                    sym = b[sym]
                steps += 1
            else:
                idx = self.index[sym]
                u, r, off, e = idx.locate(l, self.adaptive, self.shortcut)
                steps += e
                blen = idx.lens[r - 1]
                copy = (off - 1) // blen
                pending.append(self._children_from(sym, u, r, copy))
                l = (off - 1) % blen + 1
                sym = idx.bases[r - 1]
            calls += 1
        out = [a[sym]]
        remaining = length - 1
        while remaining and pending:
            nxt = next(pending[-1], None)
            if nxt is None:
                pending.pop()
                continue
            calls += 1
            k = kind[nxt]
            if k == TERM:
                out.append(a[nxt])
                remaining -= 1
            elif k == BIN:
                pending.append(iter((a[nxt], b[nxt])))
            else:
                pending.append(self._all_children(nxt))
        if stats is not None:
            stats.calls += calls
            stats.steps += steps
        return out
