"""Brute-force measures, text families and query oracles.

Everything here works on the explicit text and is meant as ground truth for
the grammar-side algorithms.  Two implementations exist for each measure: a
suffix-array based one for texts up to ``10**5`` symbols and a naive twin for
short strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import OutOfRange, TooLarge
from .grammar import Binary, Grammar, GrammarBuilder, Iteration, Terminal

DELTA_CAP = 10**5
BWT_CAP = 10**5
LZ_CAP = 10**6
A, B = 97, 98


# --------------------------------------------------------------------------
# text families

def s_k_text(k: int) -> List[int]:
    out: List[int] = []
    for i in range(1, k + 1):
        out.extend([A] * i)
        out.append(B)
    return out


def s_k_grammar(k: int) -> Grammar:
    """``S -> prod_{i=1}^{k} A^i B`` with ``A -> a`` and ``B -> b`` (size 8)."""
    return Grammar((Iteration(1, k, ((1, 1), (2, 0))), Terminal(A), Terminal(B)), 0, B)


def fibonacci_text(m: int) -> List[int]:
    prev, cur = [A], [B]
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, cur + prev
    return cur


def fibonacci_grammar(m: int) -> Grammar:
    """Symbol ``i`` derives ``F_i``: ``F_0 = a``, ``F_1 = b``, ``F_{i+2} = F_{i+1} F_i``."""
    rules = [Terminal(A), Terminal(B)] + [Binary(i - 1, i - 2) for i in range(2, m + 1)]
    if m == 0:
        return Grammar((Terminal(A),), 0, A)
    return GrammarBuilder(rules, B).build(m)


def thue_morse_text(n: int) -> List[int]:
    return [A if bin(i).count("1") % 2 == 0 else B for i in range(n)]


def thue_morse_grammar(n: int) -> Grammar:
    """SLP for the length-``n`` prefix of the Thue-Morse word.

    ``X_{m+1} = X_m Y_m`` and ``Y_{m+1} = Y_m X_m`` give the aligned blocks;
    the prefix is the concatenation of one block per set bit of ``n``.
    """
    if n < 1:
        raise ValueError("prefix length must be positive")
    builder = GrammarBuilder(sigma=B)
    xs, ys = [builder.terminal(A)], [builder.terminal(B)]
    while (1 << len(xs)) <= n:
        x, y = xs[-1], ys[-1]
        xs.append(builder.binary(x, y))
        ys.append(builder.binary(y, x))
    pieces, weights = [], []
    offset = 0
    for level in range(len(xs) - 1, -1, -1):
        if n >> level & 1:
            even = bin(offset).count("1") % 2 == 0
            pieces.append(xs[level] if even else ys[level])
            weights.append(1 << level)
            offset += 1 << level
    return builder.build(builder.concat(pieces, weights))


FAMILIES = ("s_k", "fibonacci", "thue_morse_prefix")


def gen_family(name: str, param: int) -> Tuple[List[int], Optional[Grammar]]:
    if name == "s_k":
        return s_k_text(param), s_k_grammar(param)
    if name == "fibonacci":
        return fibonacci_text(param), fibonacci_grammar(param)
    if name == "thue_morse_prefix":
        return thue_morse_text(param), thue_morse_grammar(param)
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


# --------------------------------------------------------------------------
# suffix sorting

def _dense_ranks(a: np.ndarray) -> np.ndarray:
    _, inv = np.unique(a, return_inverse=True)
    return inv.astype(np.int64)


def suffix_array(text: Sequence[int]) -> np.ndarray:
    """Suffix array by prefix doubling (``O(n log^2 n)`` with numpy sorts)."""
    a = np.asarray(text, dtype=np.int64)
    n = len(a)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = _dense_ranks(a)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        new_flag = np.empty(n, dtype=np.int64)
        new_flag[0] = 0
        new_flag[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(new_flag)
        rank = new_rank
        if rank.max() == n - 1 or k >= n:
            return sa
        k *= 2


def rotation_order(text: Sequence[int]) -> np.ndarray:
    """Start positions of the cyclic rotations in sorted order (ties in position order)."""
    a = np.asarray(text, dtype=np.int64)
    n = len(a)
    rank = _dense_ranks(a)
    idx = np.arange(n)
    k = 1
    while True:
        second = rank[(idx + k) % n]
        order = np.lexsort((idx, second, rank))
        r1, r2 = rank[order], second[order]
        flag = np.empty(n, dtype=np.int64)
        flag[0] = 0
        flag[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.cumsum(flag)
        rank = new_rank
        if k >= n or rank.max() == n - 1:
            return order
        k *= 2


def lcp_array(text: Sequence[int], sa: np.ndarray) -> List[int]:
    """Kasai: ``lcp[j]`` is the LCP of suffixes ``sa[j-1]`` and ``sa[j]`` (``lcp[0] = 0``)."""
    s = list(text)
    n = len(s)
    rank = [0] * n
    for j, pos in enumerate(sa.tolist()):
        rank[pos] = j
    sa_list = sa.tolist()
    lcp = [0] * n
    h = 0
    for i in range(n):
        if rank[i] > 0:
            j = sa_list[rank[i] - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[rank[i]] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp


# --------------------------------------------------------------------------
# measures

def distinct_substring_counts(text: Sequence[int]) -> List[int]:
    """``counts[k]`` = number of distinct length-``k`` substrings (``counts[0]`` unused)."""
    n = len(text)
    if n > DELTA_CAP:
        raise TooLarge(f"text of length {n} exceeds the {DELTA_CAP} cap")
    sa = suffix_array(text)
    lcp = lcp_array(text, sa)
    hist = np.bincount(np.asarray(lcp, dtype=np.int64), minlength=n + 2)
    # at_least[k] = number of adjacent suffix pairs sharing a prefix of length >= k
    at_least = np.cumsum(hist[::-1])[::-1]
    return [0] + [(n - k + 1) - int(at_least[k]) for k in range(1, n + 1)]


def delta(text: Sequence[int]) -> Fraction:
    """Substring complexity ``max_k T_k / k`` as an exact fraction."""
    if not text:
        return Fraction(0)
    counts = distinct_substring_counts(text)
    return max(Fraction(counts[k], k) for k in range(1, len(text) + 1))


def delta_naive(text: Sequence[int]) -> Fraction:
    n = len(text)
    if n > 2000:
        raise TooLarge("naive delta is limited to 2000 symbols")
    t = tuple(text)
    best = Fraction(0)
    for k in range(1, n + 1):
        best = max(best, Fraction(len({t[i:i + k] for i in range(n - k + 1)}), k))
    return best


def lz76(text: Sequence[int]) -> int:
    """Greedy LZ76 phrase count; sources start before the phrase and may overlap it."""
    n = len(text)
    if n > LZ_CAP:
        raise TooLarge(f"text of length {n} exceeds the {LZ_CAP} cap")
    if n == 0:
        return 0
    s = list(text)
    sa = suffix_array(text).tolist()
    # nearest earlier-starting suffixes in lexicographic order
    prev_smaller = [-1] * n
    next_smaller = [-1] * n
    stack: List[int] = []
    for pos in sa:
        while stack and stack[-1] > pos:
            next_smaller[stack.pop()] = pos
        prev_smaller[pos] = stack[-1] if stack else -1
        stack.append(pos)

    def match(i: int, j: int) -> int:
        if j < 0:
            return 0
        h = 0
        while i + h < n and s[j + h] == s[i + h]:
            h += 1
        return h

    z = 0
    i = 0
    while i < n:
        length = max(match(i, prev_smaller[i]), match(i, next_smaller[i]))
        i += max(length, 1)
        z += 1
    return z


def lz76_naive(text: Sequence[int]) -> int:
    s = list(text)
    n = len(s)
    z = i = 0
    while i < n:
        best = 0
        for j in range(i):
            h = 0
            while i + h < n and s[j + h] == s[i + h]:
                h += 1
            best = max(best, h)
        i += max(best, 1)
        z += 1
    return z


def bwt(text: Sequence[int], with_sentinel: bool = False) -> List[int]:
    s = list(text) + ([0] if with_sentinel else [])
    n = len(s)
    if n > BWT_CAP + 1:
        raise TooLarge(f"text of length {n} exceeds the {BWT_CAP} cap")
    order = rotation_order(s).tolist()
    return [s[(i - 1) % n] for i in order]


def count_runs(seq: Sequence[int]) -> int:
    return sum(1 for j in range(len(seq)) if j == 0 or seq[j] != seq[j - 1])


def bwt_runs(text: Sequence[int], with_sentinel: bool = False) -> int:
    return count_runs(bwt(text, with_sentinel))


def bwt_runs_naive(text: Sequence[int], with_sentinel: bool = False) -> int:
    s = list(text) + ([0] if with_sentinel else [])
    n = len(s)
    rots = sorted(range(n), key=lambda i: s[i:] + s[:i])
    return count_runs([s[(i - 1) % n] for i in rots])


@dataclass(frozen=True)
class MeasureReport:
    n: int
    delta: Fraction
    z: int
    r: int
    r_dollar: int

    def line(self) -> str:
        return f"{self.n} {self.delta} {self.z} {self.r} {self.r_dollar}"


def measures(text: Sequence[int]) -> MeasureReport:
    return MeasureReport(len(text), delta(text), lz76(text), bwt_runs(text), bwt_runs(text, True))


# --------------------------------------------------------------------------
# query oracle on the explicit text

class TextOracle:
    """Linear-scan answers for every grammar query."""

    def __init__(self, text: Sequence[int]):
        self.text = np.asarray(text, dtype=np.int64)
        self.n = len(self.text)
        self._prefix: Optional[Tuple[int, int, List[int]]] = None

    def _check(self, i: int, j: int) -> None:
        if not 1 <= i <= j <= self.n:
            raise OutOfRange(f"range [{i}, {j}] outside [1, {self.n}]")

    def access(self, l: int) -> int:
        self._check(l, l)
        return int(self.text[l - 1])

    def extract(self, l: int, length: int) -> List[int]:
        self._check(l, l + length - 1)
        return self.text[l - 1:l - 1 + length].tolist()

    def rmq(self, p: int, q: int) -> Tuple[int, int]:
        self._check(p, q)
        seg = self.text[p - 1:q]
        j = int(np.argmin(seg))  # first occurrence of the minimum
        return p + j, int(seg[j])

    def nsv(self, p: int, v: int) -> int:
        self._check(p, p)
        start, width = p - 1, 64
        while start < self.n:
            seg = self.text[start:start + width]
            hits = np.flatnonzero(seg < v)
            if hits.size:
                return start + int(hits[0]) + 1
            start += width
            width *= 2
        return self.n + 1

    def psv(self, p: int, v: int) -> int:
        self._check(p, p)
        end, width = p, 64
        while end > 0:
            lo = max(0, end - width)
            hits = np.flatnonzero(self.text[lo:end] < v)
            if hits.size:
                return lo + int(hits[-1]) + 1
            end = lo
            width *= 2
        return 0

    def kr(self, i: int, j: int, c: int, mu: int) -> int:
        """``sum_{k=i}^{j} T[k] c^(k-i) mod mu`` from prefix hashes."""
        self._check(i, j)
        if self._prefix is None or self._prefix[:2] != (c, mu):
            pre = [0]
            acc, power = 0, 1
            for x in self.text.tolist():
                acc = (acc + x * power) % mu
                power = power * c % mu
                pre.append(acc)
            self._prefix = (c, mu, pre)
        pre = self._prefix[2]
        shift = pow(pow(c, i - 1, mu), -1, mu)
        return (pre[j] - pre[i - 1]) * shift % mu


def kr_horner(symbols: Sequence[int], c: int, mu: int) -> int:
    acc = 0
    for x in reversed(symbols):
        acc = (acc * c + x) % mu
    return acc
