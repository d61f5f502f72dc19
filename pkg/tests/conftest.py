import pytest

from islp.corpus import standard_corpus
from islp.grammar import Binary, Grammar, Iteration, Terminal

A, B = 97, 98


def example_grammar(k2: int = 5) -> Grammar:
    """S -> prod_{i=1}^{k2} A^i B with A -> 'a', B -> 'b'."""
    return Grammar((Terminal(A), Terminal(B), Iteration(1, k2, ((0, 1), (1, 0)))), 2, B)


def example_text(k2: int = 5) -> list:
    out = []
    for i in range(1, k2 + 1):
        out += [A] * i + [B]
    return out


def polys_grammar() -> Grammar:
    """The nine-factor rule with base lengths 2, 3, 4, 7 (unary filler symbols)."""
    x = 0
    rules = [Terminal(120)]
    bases = {}
    for name, length in (("B", 2), ("C", 3), ("D", 4), ("E", 7)):
        rules.append(Iteration(1, length, ((x, 0),)))
        bases[name] = len(rules) - 1
    b, c, d, e = (bases[k] for k in "BCDE")
    rules.append(Iteration(1, 5, ((b, 1), (c, 2), (d, 1), (e, 0), (e, 0), (e, 1), (b, 2), (c, 3), (d, 0))))
    return Grammar(tuple(rules), len(rules) - 1, 120)


def figure1_grammar() -> Grammar:
    """A 13-symbol RLSLP over '0'/'1' with two runs of length 5."""
    rules = [Binary(1, 12), Binary(11, 2), Binary(5, 3), Binary(4, 6), Iteration(1, 5, ((5, 0),)),
             Binary(11, 6), Binary(7, 12), Binary(8, 12), Binary(10, 9), Iteration(1, 5, ((10, 0),)),
             Binary(11, 12), Terminal(48), Terminal(49)]
    return Grammar(tuple(rules), 0, 49)


def left_chain(n: int, ch: int = 97) -> Grammar:
    rules = [Terminal(ch)] + [Binary(i, 0) for i in range(n - 1)]
    return Grammar(tuple(rules), n - 1, ch)


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


@pytest.fixture(scope="session")
def corpus_texts(corpus):
    return {e.name: e.grammar.expand(cap=2 * 10**6) for e in corpus}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
