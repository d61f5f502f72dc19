"""Numeric report: balancing heights, substring complexity of s_k, BWT runs of Fibonacci words.

Rows are ``series<TAB>x<TAB>y``; each series also gets a PNG.
"""
from __future__ import annotations

import math
import os
from typing import Dict, List, Optional, Tuple

from .balancer import balance
from .grammar import Binary, Grammar, Terminal
from .oracles import bwt_runs, delta, fibonacci_grammar, fibonacci_text, s_k_text

Row = Tuple[str, float, float]


def left_chain(n: int) -> Grammar:
    """SLP for ``a^n`` shaped as a left-deep chain of height ``n``."""
    rules = [Terminal(97)] + [Binary(i, 0) for i in range(n - 1)]
    return Grammar(tuple(rules), n - 1, 97)


def balance_rows(max_exp: int = 11) -> List[Row]:
    rows: List[Row] = []
    for e in range(1, max_exp + 1):
        g = left_chain(2 ** e)
        rows.append(("chain_height_in", g.n, g.height))
        rows.append(("chain_height_out", g.n, balance(g).height))
    for m in range(4, 31, 2):
        g = fibonacci_grammar(m)
        rows.append(("fibonacci_height_in", g.n, g.height))
        rows.append(("fibonacci_height_out", g.n, balance(g).height))
    return rows


def delta_rows(k_max: int = 100) -> List[Row]:
    rows: List[Row] = []
    for k in range(4, k_max + 1):
        text = s_k_text(k)
        rows.append(("s_k_delta_over_sqrt_n", len(text), float(delta(text)) / math.sqrt(len(text))))
    return rows


def fibonacci_rows(m_max: int = 20) -> List[Row]:
    rows: List[Row] = []
    for m in range(2, m_max + 1, 2):
        text = fibonacci_text(m)
        rows.append(("fibonacci_r", len(text), bwt_runs(text)))
        rows.append(("fibonacci_r_dollar", len(text), bwt_runs(text, with_sentinel=True)))
    return rows


def format_rows(rows: List[Row]) -> str:
    return "".join(f"{name}\t{x:g}\t{y:g}\n" for name, x, y in rows)


def _series(rows: List[Row]) -> Dict[str, Tuple[List[float], List[float]]]:
    out: Dict[str, Tuple[List[float], List[float]]] = {}
    for name, x, y in rows:
        xs, ys = out.setdefault(name, ([], []))
        xs.append(x)
        ys.append(y)
    return out


def _plot(path: str, rows: List[Row], ylabel: str, logx: bool = True, logy: bool = False,
          hline: Optional[float] = None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, (xs, ys) in _series(rows).items():
        ax.plot(xs, ys, marker="o", markersize=3, label=name)
    if hline is not None:
        ax.axhline(hline, color="grey", linestyle="--", linewidth=1)
    if logx:
        ax.set_xscale("log", base=2)
    if logy:
        ax.set_yscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(out_dir: str) -> Tuple[str, List[str]]:
    """Compute every series, write ``report.tsv`` and one PNG per figure.

    Returns the TSV text and the list of files written.
    """
    os.makedirs(out_dir, exist_ok=True)
    bal, dl, fib = balance_rows(), delta_rows(), fibonacci_rows()
    tsv = format_rows(bal + dl + fib)
    files = [os.path.join(out_dir, name) for name in
             ("report.tsv", "balanced_height.png", "s_k_delta.png", "fibonacci_bwt_runs.png")]
    with open(files[0], "w") as fh:
        fh.write(tsv)
    _plot(files[1], bal, "height", logy=True)
    _plot(files[2], dl, "delta / sqrt(n)", hline=0.39)
    _plot(files[3], fib, "BWT runs")
    return tsv, files
