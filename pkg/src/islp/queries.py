"""Range minimum, next smaller value and previous smaller value on ISLPs.

Each symbol stores the leftmost minimum of its expansion as a pair
``(position, value)``.  Iteration rules additionally keep a sparse table over
their factor minima ``v_1..v_t`` (for range minima inside a block) and a
wavelet tree over the same string (to find the next or previous factor whose
minimum is below a threshold).
"""
from __future__ import annotations

import bisect
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import OutOfRange
from .grammar import Grammar
from .navigator import BIN, ITER, TERM, IterationIndex, Navigator, QueryStats


class SparseTableRMQ:
    """Leftmost argmin over a static list, ``O(1)`` per query after ``O(t log t)`` build."""

    def __init__(self, values: Sequence[int]):
        self.values = list(values)
        n = len(self.values)
        self.levels: List[List[int]] = [list(range(n))]
        vals = self.values
        span = 1
        while 2 * span <= n:
            prev = self.levels[-1]
            cur = []
            for i in range(n - 2 * span + 1):
                a, b = prev[i], prev[i + span]
                cur.append(a if vals[a] <= vals[b] else b)
            self.levels.append(cur)
            span *= 2

    def argmin(self, a: int, b: int) -> int:
        """Leftmost index of the minimum in ``values[a..b]`` (0-based, inclusive)."""
        k = (b - a + 1).bit_length() - 1
        level = self.levels[k]
        x, y = level[a], level[b - (1 << k) + 1]
        vx, vy = self.values[x], self.values[y]
        if vx < vy or (vx == vy and x < y):
            return x
        return y


class _WaveletNode:
    __slots__ = ("lo", "hi", "size", "rank0", "pos0", "pos1", "left", "right")


class RangeSuccessor:
    """Wavelet tree answering "first index >= a with value < v" and its mirror."""

    def __init__(self, values: Sequence[int]):
        self.alphabet = sorted(set(values))
        ranks = [bisect.bisect_left(self.alphabet, x) for x in values]
        self.root = self._build(ranks, 0, max(len(self.alphabet) - 1, 0))
        self.size = len(ranks)

    def _build(self, seq: List[int], lo: int, hi: int) -> Optional[_WaveletNode]:
        if not seq:
            return None
        node = _WaveletNode()
        node.lo, node.hi, node.size = lo, hi, len(seq)
        node.left = node.right = None
        node.rank0 = node.pos0 = node.pos1 = None
        if lo == hi:
            return node
        mid = (lo + hi) // 2
        rank0 = [0]
        pos0: List[int] = []
        pos1: List[int] = []
        for idx, x in enumerate(seq):
            if x <= mid:
                pos0.append(idx)
            else:
                pos1.append(idx)
            rank0.append(len(pos0))
        node.rank0, node.pos0, node.pos1 = rank0, pos0, pos1
        node.left = self._build([x for x in seq if x <= mid], lo, mid)
        node.right = self._build([x for x in seq if x > mid], mid + 1, hi)
        return node

    def _threshold(self, v: int) -> int:
        return bisect.bisect_left(self.alphabet, v)

    def next_smaller(self, a: int, v: int) -> Optional[int]:
        """Smallest index ``>= a`` whose value is ``< v`` (0-based), or ``None``."""
        return self._first(self.root, a, self._threshold(v))

    def prev_smaller(self, b: int, v: int) -> Optional[int]:
        """Largest index ``<= b`` whose value is ``< v`` (0-based), or ``None``."""
        return self._last(self.root, b, self._threshold(v))

    def _first(self, node: Optional[_WaveletNode], a: int, cut: int) -> Optional[int]:
        if node is None or a >= node.size or node.lo >= cut:
            return None
        if node.hi < cut:
            return a
        z = node.rank0[a]
        best = None
        hit = self._first(node.left, z, cut)
        if hit is not None:
            best = node.pos0[hit]
        hit = self._first(node.right, a - z, cut)
        if hit is not None:
            cand = node.pos1[hit]
            if best is None or cand < best:
                best = cand
        return best

    def _last(self, node: Optional[_WaveletNode], b: int, cut: int) -> Optional[int]:
        if node is None or b < 0 or node.lo >= cut:
            return None
        b = min(b, node.size - 1)
        if node.hi < cut:
            return b
        z = node.rank0[b + 1]
        best = None
        hit = self._last(node.left, z - 1, cut)
        if hit is not None:
            best = node.pos0[hit]
        hit = self._last(node.right, b - z, cut)
        if hit is not None:
            cand = node.pos1[hit]
            if best is None or cand > best:
                best = cand
        return best


class QueryIndex(Navigator):
    """Navigator plus per-symbol minima for RMQ/NSV/PSV."""

    def __init__(self, g: Grammar, adaptive: bool = True, shortcut: bool = True):
        super().__init__(g, adaptive, shortcut)
        n_sym = len(g.rules)
        self.min_pos = [0] * n_sym
        self.min_val = [0] * n_sym
        self.block_rmq: Dict[int, SparseTableRMQ] = {}
        self.block_succ: Dict[int, RangeSuccessor] = {}
        lengths = self.lengths
        for sym in g.topo_order:
            k = self.kind[sym]
            if k == TERM:
                self.min_pos[sym], self.min_val[sym] = 1, self.a[sym]
            elif k == BIN:
                left, right = self.a[sym], self.b[sym]
                if self.min_val[left] <= self.min_val[right]:
                    self.min_pos[sym], self.min_val[sym] = self.min_pos[left], self.min_val[left]
                else:
                    self.min_pos[sym] = lengths[left] + self.min_pos[right]
                    self.min_val[sym] = self.min_val[right]
            else:
                idx = self.index[sym]
                vals = [self.min_val[bb] for bb in idx.bases]
                st = self.block_rmq[sym] = SparseTableRMQ(vals)
                self.block_succ[sym] = RangeSuccessor(vals)
                j = st.argmin(0, idx.t - 1)
                # the leftmost minimum sits in the first enumerated block
                self.min_pos[sym] = idx.f_r(j, idx.value_at(1)) + self.min_pos[idx.bases[j]]
                self.min_val[sym] = vals[j]
        self._recursion_floor = 4 * g.height + 100
        self._stats: Optional[QueryStats] = None

    def _ensure_stack(self) -> None:
        if sys.getrecursionlimit() < self._recursion_floor:
            sys.setrecursionlimit(self._recursion_floor)

    def _locate(self, idx: IterationIndex, l: int) -> Tuple[int, int, int, int]:
        """``(u, r, off, run_start)``: run ``r`` of block ``u`` begins after ``run_start`` symbols."""
        u, r, off, e = idx.locate(l, self.adaptive, self.shortcut)
        if self._stats is not None:
            self._stats.steps += e
        return u, r, off, l - off

    # -- range minimum ------------------------------------------------------
    def rmq(self, p: int, q: int, stats: Optional[QueryStats] = None) -> Tuple[int, int]:
        """Leftmost position of the minimum of ``T[p..q]`` and that minimum."""
        if not 1 <= p <= q <= self.n:
            raise OutOfRange(f"range [{p}, {q}] outside [1, {self.n}]")
        self._ensure_stack()
        self._stats = stats
        try:
            return self._rmq(self.g.start, p, q)
        finally:
            self._stats = None

    def _rmq(self, sym: int, p: int, q: int) -> Tuple[int, int]:
        if p == 1 and q == self.lengths[sym]:
            return self.min_pos[sym], self.min_val[sym]
        if self._stats is not None:
            self._stats.calls += 1
        k = self.kind[sym]
        if k == BIN:
            left, right = self.a[sym], self.b[sym]
            ll = self.lengths[left]
            if q <= ll:
                return self._rmq(left, p, q)
            if p > ll:
                m, v = self._rmq(right, p - ll, q - ll)
                return m + ll, v
            m1, v1 = self._rmq(left, p, ll)
            m2, v2 = self._rmq(right, 1, q - ll)
            return (m1, v1) if v1 <= v2 else (m2 + ll, v2)
        idx = self.index[sym]
        up, rp, offp, startp = self._locate(idx, p)
        uq, rq, offq, startq = self._locate(idx, q)
        if up == uq and rp == rq:
            m, v = self._run_rmq(idx, up, rp, offp, offq)
            return startp + m, v
        best: Optional[Tuple[int, int]] = None

        def offer(pos: int, val: int) -> None:
            nonlocal best
            if best is None or val < best[1]:
                best = (pos, val)

        m, v = self._run_rmq(idx, up, rp, offp, self._run_length(idx, up, rp))
        offer(startp + m, v)
        block_start = idx.blocks_before(up - 1)
        if up == uq:
            if rq > rp + 1:
                offer(*self._factor_range_min(sym, idx, up, block_start, rp + 1, rq - 1))
        else:
            if rp < idx.t:
                offer(*self._factor_range_min(sym, idx, up, block_start, rp + 1, idx.t))
            if uq > up + 1:
                nxt_start = idx.blocks_before(up)
                offer(*self._factor_range_min(sym, idx, up + 1, nxt_start, 1, idx.t))
            if rq > 1:
                offer(*self._factor_range_min(sym, idx, uq, idx.blocks_before(uq - 1), 1, rq - 1))
        m, v = self._run_rmq(idx, uq, rq, 1, offq)
        offer(startq + m, v)
        return best  # type: ignore[return-value]

    def _run_length(self, idx: IterationIndex, u: int, r: int) -> int:
        return idx.run_copies(u, r) * idx.lens[r - 1]

    def _factor_range_min(self, sym: int, idx: IterationIndex, u: int, block_start: int,
                          r1: int, r2: int) -> Tuple[int, int]:
        """Minimum over whole runs ``r1..r2`` of block ``u``; its leftmost copy is the first one."""
        j = self.block_rmq[sym].argmin(r1 - 1, r2 - 1)
        base = idx.bases[j]
        return block_start + idx.f_r(j, idx.value_at(u)) + self.min_pos[base], self.min_val[base]

    def _run_rmq(self, idx: IterationIndex, u: int, r: int, a: int, b: int) -> Tuple[int, int]:
        """RMQ inside run ``r`` of block ``u`` for run-relative positions ``a..b``."""
        base = idx.bases[r - 1]
        L = idx.lens[r - 1]
        ca, cb = (a - 1) // L, (b - 1) // L
        oa, ob = (a - 1) % L + 1, (b - 1) % L + 1
        if ca == cb:
            m, v = self._rmq(base, oa, ob)
            return ca * L + m, v
        m, v = self._rmq(base, oa, L)
        best = (ca * L + m, v)
        if cb > ca + 1 and self.min_val[base] < best[1]:
            best = ((ca + 1) * L + self.min_pos[base], self.min_val[base])
        m, v = self._rmq(base, 1, ob)
        if v < best[1]:
            best = (cb * L + m, v)
        return best

    # -- next / previous smaller value -----------------------------------
    def nsv(self, p: int, v: int, stats: Optional[QueryStats] = None) -> int:
        """Smallest ``q >= p`` with ``T[q] < v``, or ``n + 1``."""
        if not 1 <= p <= self.n:
            raise OutOfRange(f"position {p} outside [1, {self.n}]")
        self._ensure_stack()
        self._stats = stats
        try:
            return self._nsv(self.g.start, p, v)
        finally:
            self._stats = None

    def psv(self, p: int, v: int, stats: Optional[QueryStats] = None) -> int:
        """Largest ``q <= p`` with ``T[q] < v``, or ``0``."""
        if not 1 <= p <= self.n:
            raise OutOfRange(f"position {p} outside [1, {self.n}]")
        self._ensure_stack()
        self._stats = stats
        try:
            return self._psv(self.g.start, p, v)
        finally:
            self._stats = None

    def _nsv(self, sym: int, p: int, v: int) -> int:
        length = self.lengths[sym]
        if self.min_val[sym] >= v:
            return length + 1
        if self._stats is not None:
            self._stats.calls += 1
        k = self.kind[sym]
        if k == TERM:
            return 1
        if k == BIN:
            left, right = self.a[sym], self.b[sym]
            ll = self.lengths[left]
            if p > ll:
                return ll + self._nsv(right, p - ll, v)
            res = self._nsv(left, p, v)
            if res <= ll:
                return res
            return ll + self._nsv(right, 1, v)
        idx = self.index[sym]
        u, r, off, start = self._locate(idx, p)
        base = idx.bases[r - 1]
        L = idx.lens[r - 1]
        copy = (off - 1) // L
        res = self._nsv(base, (off - 1) % L + 1, v)
        if res <= L:
            return start + copy * L + res
        if copy + 1 < idx.run_copies(u, r) and self.min_val[base] < v:
            return start + (copy + 1) * L + self._nsv(base, 1, v)
        succ = self.block_succ[sym]
        j = succ.next_smaller(r, v)  # 0-based index r is factor r+1
        if j is not None:
            return idx.blocks_before(u - 1) + idx.f_r(j, idx.value_at(u)) + self._nsv(idx.bases[j], 1, v)
        if u < idx.count:
            j = succ.next_smaller(0, v)
            return idx.blocks_before(u) + idx.f_r(j, idx.value_at(u + 1)) + self._nsv(idx.bases[j], 1, v)
        return length + 1

    def _psv(self, sym: int, p: int, v: int) -> int:
        if self.min_val[sym] >= v:
            return 0
        if self._stats is not None:
            self._stats.calls += 1
        k = self.kind[sym]
        if k == TERM:
            return 1
        if k == BIN:
            left, right = self.a[sym], self.b[sym]
            ll = self.lengths[left]
            if p <= ll:
                return self._psv(left, p, v)
            res = self._psv(right, p - ll, v)
            if res:
                return ll + res
            return self._psv(left, ll, v)
        idx = self.index[sym]
        u, r, off, start = self._locate(idx, p)
        base = idx.bases[r - 1]
        L = idx.lens[r - 1]
        copy = (off - 1) // L
        res = self._psv(base, (off - 1) % L + 1, v)
        if res:
            return start + copy * L + res
        if copy > 0 and self.min_val[base] < v:
            return start + (copy - 1) * L + self._psv(base, L, v)
        succ = self.block_succ[sym]
        j = succ.prev_smaller(r - 2, v) if r > 1 else None
        if j is not None:
            return self._last_copy_psv(idx, u, j, v)
        if u > 1:
            j = succ.prev_smaller(idx.t - 1, v)
            return self._last_copy_psv(idx, u - 1, j, v)
        return 0

    def _last_copy_psv(self, idx: IterationIndex, u: int, j: int, v: int) -> int:
        """PSV from the end of the last copy of run ``j+1`` in block ``u``."""
        i = idx.value_at(u)
        base = idx.bases[j]
        L = idx.lens[j]
        start = idx.blocks_before(u - 1) + idx.f_r(j, i) + (i ** idx.C[j] - 1) * L
        return start + self._psv(base, L, v)
