import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import example_grammar
from islp.composable import (MERSENNE_61, ComposableFunction, ComposableIndex, FingerprintValue,
                             KarpRabin, check_contract, count_function, karp_rabin_function,
                             kr_base_from_seed, length_function)
from islp.corpus import random_rlslp
from islp.errors import BadParams, NotRlslp, OutOfRange
from islp.grammar import Grammar, Terminal, run
from islp.navigator import QueryStats
from islp.oracles import fibonacci_grammar, kr_horner
from islp.transforms import to_rlslp


def test_contracts_hold():
    for f in (length_function(), count_function(97), karp_rabin_function(7, 101)):
        check_contract(f, [97, 98])


def test_contract_catches_non_associative():
    minus = ComposableFunction("minus", lambda ch: ch, lambda x, y: x - y, 0)
    with pytest.raises(ValueError):
        check_contract(minus, [1, 2])


def test_bad_parameters():
    with pytest.raises(BadParams):
        karp_rabin_function(3, 100)
    with pytest.raises(BadParams):
        karp_rabin_function(101 * 5, 101)


def test_refuses_general_iteration():
    with pytest.raises(NotRlslp):
        ComposableIndex(example_grammar(), length_function())


def test_length_and_whole_text():
    g = fibonacci_grammar(15)
    idx = ComposableIndex(g, length_function())
    assert idx.eval(1, g.n) == g.n == idx.F[g.start]
    rng = random.Random(0)
    for _ in range(200):
        i = rng.randint(1, g.n)
        j = rng.randint(i, g.n)
        assert idx.eval(i, j) == j - i + 1
    with pytest.raises(OutOfRange):
        idx.eval(0, 3)


def test_count_on_fibonacci():
    g = fibonacci_grammar(18)
    text = g.expand()
    idx = ComposableIndex(g, count_function(ord("a")))
    rng = random.Random(1)
    for _ in range(500):
        i = rng.randint(1, g.n)
        j = rng.randint(i, g.n)
        assert idx.eval(i, j) == text[i - 1:j].count(ord("a"))


def test_doubling_matches_repeated_composition():
    f = karp_rabin_function(7, 101)
    g = Grammar((Terminal(2),), 0, 2)
    idx = ComposableIndex(g, f)
    x = FingerprintValue(5, 7)
    acc = f.identity
    for k in range(65):
        assert idx.power(x, k) == acc
        acc = f.compose(acc, x)


def test_kr_composition_exhaustive():
    c, mu = 7, 101
    f = karp_rabin_function(c, mu)
    words = [w for m in range(7) for w in itertools.product((1, 2), repeat=m)]
    for x in words:
        for y in words:
            if len(x) + len(y) > 6:
                continue
            assert f.compose(f.brute(x), f.brute(y)) == f.brute(x + y)
            assert f.brute(x + y).kappa == kr_horner(x + y, c, mu)


def test_single_character():
    g = Grammar((Terminal(98), run(0, 10)), 1, 98)
    assert KarpRabin(g, 12345).fingerprint(4, 4) == 98


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_kr_matches_horner(seed):
    g = random_rlslp(seed, n_max=5000)
    text = g.expand()
    c = kr_base_from_seed(seed)
    kr = KarpRabin(g, c)
    rng = random.Random(seed)
    for _ in range(100):
        i = rng.randint(1, g.n)
        j = rng.randint(i, g.n)
        st_ = QueryStats()
        assert kr.fingerprint(i, j, st_) == kr_horner(text[i - 1:j], c, MERSENNE_61)
        assert st_.compositions <= 8 * math.log2(max(2, g.n))
        # split homomorphism
        p = rng.randint(i, j)
        left = kr.index.eval(i, p)
        whole = left if p == j else kr.index.f.compose(left, kr.index.eval(p + 1, j))
        assert whole.kappa == kr.fingerprint(i, j)


def test_kr_on_unfolded_islp():
    g = example_grammar(9)
    text = g.expand()
    kr = KarpRabin(to_rlslp(g), 31, 101)
    for i in range(1, g.n + 1):
        for j in range(i, g.n + 1):
            assert kr.fingerprint(i, j) == kr_horner(text[i - 1:j], 31, 101)
