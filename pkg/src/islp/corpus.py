"""Random grammar generators and the standard test corpus."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .grammar import Binary, Grammar, Iteration, Rule, Terminal, prune


def _iteration_length(k1: int, k2: int, factors, lengths) -> int:
    lo, hi = min(k1, k2), max(k1, k2)
    return sum(lengths[b] * sum(i ** c for i in range(lo, hi + 1)) for b, c in factors)


def random_islp(seed: int, n_max: int = 10**6, d_max: int = 4, t_max: int = 8,
                alphabet: Tuple[int, ...] = (97, 98, 99, 100), rules: int = 40,
                run_only: bool = False, n_min: int = 1) -> Grammar:
    """A random valid ISLP whose text has at most ``n_max`` symbols.

    With ``run_only`` every iteration rule is a run ``B^t`` so the result is
    an RLSLP.  Descending iteration ranges are produced too.
    """
    rng = random.Random(seed)
    table: List[Rule] = [Terminal(ch) for ch in alphabet]
    lengths = [1] * len(alphabet)
    attempts = 0
    while len(table) < len(alphabet) + rules and attempts < 50 * rules:
        attempts += 1
        # prefer recent symbols so the grammar gets some depth
        def pick() -> int:
            lo = max(0, len(table) - 8)
            return rng.randrange(lo, len(table)) if rng.random() < 0.7 else rng.randrange(len(table))

        kind = rng.random()
        if kind < 0.45:
            a, b = pick(), pick()
            rule: Rule = Binary(a, b)
            length = lengths[a] + lengths[b]
        elif run_only:
            b = pick()
            times = rng.randint(2, 12)
            rule = Iteration(1, times, ((b, 0),))
            length = lengths[b] * times
        else:
            t = rng.randint(1, t_max)
            factors = tuple((pick(), rng.randint(0, d_max)) for _ in range(t))
            k1 = rng.randint(1, 4)
            k2 = k1 + rng.randint(0, 6)
            if rng.random() < 0.3:
                k1, k2 = k2, k1
            if k1 == k2 == 1 and t == 1:
                continue
            rule = Iteration(k1, k2, factors)
            length = _iteration_length(k1, k2, factors, lengths)
        if length > n_max:
            continue
        table.append(rule)
        lengths.append(length)
    eligible = [s for s in range(len(table)) if n_min <= lengths[s] <= n_max]
    start = max(eligible, key=lambda s: (lengths[s], s)) if eligible else len(table) - 1
    return prune(Grammar(tuple(table), start, max(alphabet)))


def random_rlslp(seed: int, n_max: int = 10**6, **kw) -> Grammar:
    return random_islp(seed, n_max=n_max, run_only=True, **kw)


@dataclass
class CorpusEntry:
    name: str
    grammar: Grammar


def standard_corpus(random_count: int = 10, n_large: int = 10**6) -> List[CorpusEntry]:
    """The grammars used by the acceptance suite.

    Families: ``s_k`` for several ``k <= 100``, Fibonacci SLPs up to ``F_25``,
    Thue-Morse prefixes, random ISLPs (degree <= 4, up to 8 factors) and
    random RLSLPs.
    """
    from .oracles import fibonacci_grammar, s_k_grammar, thue_morse_grammar

    out: List[CorpusEntry] = []
    for k in (4, 17, 100):
        out.append(CorpusEntry(f"s_k/{k}", s_k_grammar(k)))
    for m in (10, 18, 25):
        out.append(CorpusEntry(f"fibonacci/{m}", fibonacci_grammar(m)))
    for n in (1000, 77777):
        out.append(CorpusEntry(f"thue_morse/{n}", thue_morse_grammar(n)))
    for s in range(random_count):
        cap = n_large if s < 2 else 10**5
        out.append(CorpusEntry(f"random_islp/{s}", random_islp(1000 + s, n_max=cap, n_min=cap // 20)))
    for s in range(2):
        out.append(CorpusEntry(f"random_rlslp/{s}", random_rlslp(2000 + s, n_max=10**5, n_min=5000)))
    return out
