"""Composable substring functions on RLSLPs, with Karp-Rabin fingerprints.

A function ``f`` is composable when ``f(XY) = h(f(X), f(Y))``.  Storing
``F[A] = f(exp(A))`` per symbol lets any ``f(T[i..j])`` be assembled along two
root-to-leaf paths; runs ``B^t`` contribute their middle copies by repeated
squaring of ``F[B]``.
"""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BadParams, NotRlslp, OutOfRange
from .grammar import Binary, Grammar, Iteration, Terminal
from .navigator import QueryStats

MERSENNE_61 = (1 << 61) - 1


@dataclass(frozen=True)
class ComposableFunction:
    name: str
    eval_char: Callable[[int], Any]
    compose: Callable[[Any, Any], Any]
    identity: Any
    brute: Optional[Callable[[Sequence[int]], Any]] = None

    def of(self, symbols: Iterable[int]) -> Any:
        """Fold over an explicit string; handy as a reference."""
        acc = self.identity
        for ch in symbols:
            acc = self.compose(acc, self.eval_char(ch))
        return acc


def check_contract(f: ComposableFunction, alphabet: Sequence[int], trials: int = 200, seed: int = 0) -> None:
    """Randomized check that ``h`` is associative with ``f(empty)`` as identity."""
    rng = random.Random(seed)

    def sample() -> Any:
        return f.of(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))

    for _ in range(trials):
        x, y, z = sample(), sample(), sample()
        if f.compose(f.identity, x) != x or f.compose(x, f.identity) != x:
            raise ValueError(f"{f.name}: identity law fails for {x!r}")
        if f.compose(f.compose(x, y), z) != f.compose(x, f.compose(y, z)):
            raise ValueError(f"{f.name}: composition is not associative on {x!r}, {y!r}, {z!r}")


def length_function() -> ComposableFunction:
    return ComposableFunction("length", lambda ch: 1, lambda x, y: x + y, 0, len)


def count_function(symbol: int) -> ComposableFunction:
    return ComposableFunction(f"count[{symbol}]", lambda ch: int(ch == symbol), lambda x, y: x + y, 0,
                              lambda s: sum(1 for ch in s if ch == symbol))


@dataclass(frozen=True)
class FingerprintValue:
    """``kappa`` of a string together with ``c^length``, both modulo ``mu``."""

    kappa: int
    c_pow: int


def karp_rabin_function(c: int, mu: int = MERSENNE_61) -> ComposableFunction:
    check_kr_params(c, mu)

    def compose(x: FingerprintValue, y: FingerprintValue) -> FingerprintValue:
        return FingerprintValue((x.kappa + y.kappa * x.c_pow) % mu, x.c_pow * y.c_pow % mu)

    def brute(s: Sequence[int]) -> FingerprintValue:
        acc = 0
        for ch in reversed(s):
            acc = (acc * c + ch) % mu
        return FingerprintValue(acc, pow(c, len(s), mu))

    return ComposableFunction(f"kr[c={c},mu={mu}]", lambda ch: FingerprintValue(ch % mu, c % mu),
                              compose, FingerprintValue(0, 1), brute)


def check_kr_params(c: int, mu: int) -> None:
    from sympy import isprime

    if mu < 2 or not isprime(mu):
        raise BadParams(f"modulus {mu} is not prime")
    if c % mu == 0:
        raise BadParams("base must be non-zero modulo mu")


def kr_base_from_seed(seed: int, mu: int = MERSENNE_61) -> int:
    return random.Random(seed).randrange(2, mu - 1)


class ComposableIndex:
    """Per-symbol values ``F[A]`` and substring evaluation on an RLSLP."""

    def __init__(self, g: Grammar, f: ComposableFunction):
        for sym, rule in enumerate(g.rules):
            if isinstance(rule, Iteration) and not rule.is_run:
                raise NotRlslp(f"symbol {sym} is a general iteration rule; only runs B^t are supported")
        self.g = g
        self.f = f
        self.lengths = g.lengths
        self.n = g.n
        self.compositions = 0
        self.F: List[Any] = [None] * len(g.rules)
        for sym in g.topo_order:
            rule = g.rules[sym]
            if isinstance(rule, Terminal):
                self.F[sym] = f.eval_char(rule.ch)
            elif isinstance(rule, Binary):
                self.F[sym] = self._h(self.F[rule.left], self.F[rule.right])
            else:
                self.F[sym] = self.power(self.F[rule.factors[0][0]], rule.count)
        self.precompute_compositions = self.compositions
        self._limit = 4 * g.height + 100

    def _h(self, x: Any, y: Any) -> Any:
        self.compositions += 1
        return self.f.compose(x, y)

    def power(self, x: Any, k: int) -> Any:
        """``k``-fold composition of ``x`` by halving."""
        if k == 0:
            return self.f.identity
        if k == 1:
            return x
        if k % 2 == 0:
            half = self.power(x, k // 2)
            return self._h(half, half)
        return self._h(x, self.power(x, k - 1))

    def eval(self, i: int, j: int, stats: Optional[QueryStats] = None) -> Any:
        """``f(T[i..j])``."""
        if not 1 <= i <= j <= self.n:
            raise OutOfRange(f"range [{i}, {j}] outside [1, {self.n}]")
        if sys.getrecursionlimit() < self._limit:
            sys.setrecursionlimit(self._limit)
        before = self.compositions
        value = self._eval(self.g.start, i, j)
        if stats is not None:
            stats.compositions += self.compositions - before
        return value

    def _eval(self, sym: int, i: int, j: int) -> Any:
        if i == 1 and j == self.lengths[sym]:
            return self.F[sym]
        rule = self.g.rules[sym]
        if isinstance(rule, Binary):
            ll = self.lengths[rule.left]
            if j <= ll:
                return self._eval(rule.left, i, j)
            if i > ll:
                return self._eval(rule.right, i - ll, j - ll)
            return self._h(self._eval(rule.left, i, ll), self._eval(rule.right, 1, j - ll))
        base = rule.factors[0][0]  # type: ignore[union-attr]
        L = self.lengths[base]
        first, last = (i + L - 1) // L, (j + L - 1) // L
        if first == last:
            shift = (first - 1) * L
            return self._eval(base, i - shift, j - shift)
        value = self._eval(base, i - (first - 1) * L, L)
        if last - first - 1:
            value = self._h(value, self.power(self.F[base], last - first - 1))
        return self._h(value, self._eval(base, 1, j - (last - 1) * L))


class KarpRabin:
    """Substring fingerprints ``sum_{k=i}^{j} T[k] c^(k-i) mod mu`` on an RLSLP."""

    def __init__(self, g: Grammar, c: int, mu: int = MERSENNE_61):
        self.c, self.mu = c, mu
        self.index = ComposableIndex(g, karp_rabin_function(c, mu))

    def fingerprint(self, i: int, j: int, stats: Optional[QueryStats] = None) -> int:
        return self.index.eval(i, j, stats).kappa


def kr_fingerprint(g: Grammar, i: int, j: int, c: int, mu: int = MERSENNE_61) -> int:
    return KarpRabin(g, c, mu).fingerprint(i, j)
