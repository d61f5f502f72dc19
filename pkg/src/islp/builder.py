"""A naive grammar builder for raw text: run collapsing plus greedy pair merging.

The output is a valid RLSLP but nowhere near the smallest grammar; it exists
so arbitrary files can be fed to the query tools.
"""
from __future__ import annotations

import random
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

from .grammar import Grammar, GrammarBuilder, Iteration


def _collapse_runs(seq: List[int], b: GrammarBuilder, runs: Dict[Tuple[int, int], int]) -> List[int]:
    out: List[int] = []
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        times = j - i
        if times == 1:
            out.append(seq[i])
        else:
            key = (seq[i], times)
            if key not in runs:
                runs[key] = b.add(Iteration(1, times, ((seq[i], 0),)))
            out.append(runs[key])
        i = j
    return out


def _replace_pair(seq: List[int], pair: Tuple[int, int], sym: int) -> List[int]:
    out: List[int] = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
            out.append(sym)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def build_naive(text: Sequence[int], seed: int = 0, max_rounds: Optional[int] = None) -> Grammar:
    """RLSLP for ``text``.

    Each round collapses maximal runs into run rules, then replaces the most
    frequent adjacent pair by a new binary rule.  Ties between equally
    frequent pairs are broken by a generator seeded with ``seed``.  The
    leftover sequence is joined by a balanced tree.
    """
    if not text:
        raise ValueError("cannot build a grammar for the empty text")
    rng = random.Random(seed)
    b = GrammarBuilder()
    seq = [b.terminal(ch) for ch in text]
    runs: Dict[Tuple[int, int], int] = {}
    rounds = 0
    while len(seq) > 1 and (max_rounds is None or rounds < max_rounds):
        rounds += 1
        seq = _collapse_runs(seq, b, runs)
        counts = Counter(zip(seq, seq[1:]))
        if not counts:
            break
        best = max(counts.values())
        if best < 2:
            break
        pair = rng.choice(sorted(p for p, c in counts.items() if c == best))
        seq = _replace_pair(seq, pair, b.binary(*pair))
    return b.build(b.concat(seq))
