import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import example_grammar
from islp.corpus import random_islp
from islp.errors import OutOfRange
from islp.oracles import TextOracle
from islp.queries import QueryIndex, RangeSuccessor, SparseTableRMQ


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=60), st.data())
def test_sparse_table(values, data):
    rmq = SparseTableRMQ(values)
    a = data.draw(st.integers(0, len(values) - 1))
    b = data.draw(st.integers(a, len(values) - 1))
    seg = values[a:b + 1]
    assert rmq.argmin(a, b) == a + seg.index(min(seg))


@given(st.lists(st.integers(0, 9), min_size=1, max_size=60), st.data())
def test_range_successor(values, data):
    rs = RangeSuccessor(values)
    p = data.draw(st.integers(0, len(values) - 1))
    v = data.draw(st.integers(-1, 11))
    nxt = next((i for i in range(p, len(values)) if values[i] < v), None)
    prv = next((i for i in range(p, -1, -1) if values[i] < v), None)
    assert rs.next_smaller(p, v) == nxt
    assert rs.prev_smaller(p, v) == prv


def test_example_queries():
    qi = QueryIndex(example_grammar(5))
    assert qi.rmq(1, 20) == (1, 97)
    assert qi.rmq(2, 2) == (2, 98)
    assert qi.nsv(2, 98) == 3
    assert qi.nsv(20, 98) == 21
    assert qi.psv(20, 98) == 19
    assert qi.psv(1, 97) == 0
    with pytest.raises(OutOfRange):
        qi.rmq(3, 2)
    with pytest.raises(OutOfRange):
        qi.nsv(21, 100)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_queries_match_oracle(seed):
    g = random_islp(seed, n_max=3000, rules=15)
    oracle = TextOracle(g.expand())
    qi = QueryIndex(g)
    rng = random.Random(seed)
    for _ in range(150):
        p = rng.randint(1, g.n)
        q = rng.randint(p, g.n)
        v = rng.randint(96, 101)
        assert qi.rmq(p, q) == oracle.rmq(p, q)
        assert qi.nsv(p, v) == oracle.nsv(p, v)
        assert qi.psv(p, v) == oracle.psv(p, v)
