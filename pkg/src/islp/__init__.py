"""Iterated straight-line programs: compressed text representation with random access."""
from .errors import IslpError
from .grammar import (Binary, Grammar, GrammarBuilder, Iteration, Terminal, format_grammar,
                      load_grammar, parse_grammar, run, save_grammar, validate)
from .navigator import Navigator
from .queries import QueryIndex
from .balancer import balance
from .composable import ComposableIndex, KarpRabin
from .transforms import EditOp, apply_morphism, edit, reverse, to_rlslp

__all__ = [
    "IslpError", "Binary", "Grammar", "GrammarBuilder", "Iteration", "Terminal", "format_grammar",
    "load_grammar", "parse_grammar", "run", "save_grammar", "validate", "Navigator", "QueryIndex",
    "balance", "ComposableIndex", "KarpRabin", "EditOp", "apply_morphism", "edit", "reverse",
    "to_rlslp",
]
