"""Exact power sums ``p_c(k) = 1^c + 2^c + ... + k^c`` via Bernoulli numbers.

The Bernoulli table is built once per degree with exact rationals
(:class:`fractions.Fraction`).  Each power sum polynomial is then stored with
integer coefficients over a common denominator, so evaluating ``p_c(k)`` costs
``c + 2`` integer multiply-adds and one exact division.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import NonIntegerResult


def pascal_row(m: int) -> List[int]:
    """Return ``[C(m, 0), ..., C(m, m)]`` by iterating Pascal's rule."""
    row = [1]
    for _ in range(m):
        row = [1] + [row[j] + row[j + 1] for j in range(len(row) - 1)] + [1]
    return row


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


@dataclass
class OpCounter:
    """Counts arithmetic steps spent in power-sum evaluations."""

    ops: int = 0
    calls: int = 0


@dataclass(frozen=True)
class PowerSumTable:
    """Bernoulli numbers ``b_0..b_d`` and the derived power-sum polynomials.

    ``polys[c]`` holds ``(coeffs, denom)`` where ``coeffs`` are integers from the
    highest power (``k^(c+1)``) down to ``k^0`` and ``p_c(k) = poly(k) / denom``.
    """

    d: int
    bernoulli: Tuple[Fraction, ...]
    polys: Tuple[Tuple[Tuple[int, ...], int], ...] = field(repr=False)

    def power_sum(self, c: int, k: int, counter: Optional[OpCounter] = None) -> int:
        return power_sum(self, c, k, counter)


def build_bernoulli(d: int) -> PowerSumTable:
    """Solve ``sum_{j<=m} C(m+1, j) b_j = 0`` for ``b_1..b_d`` starting at ``b_0 = 1``.

    The convention is ``b_1 = -1/2``.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    b: List[Fraction] = [Fraction(1)]
    row = pascal_row(1)
    for m in range(1, d + 1):
        row = [1] + [row[j] + row[j + 1] for j in range(len(row) - 1)] + [1]  # C(m+1, .)
        acc = sum((row[j] * b[j] for j in range(m)), Fraction(0))
        b.append(-acc / row[m])
    polys = tuple(_power_sum_poly(c, b) for c in range(d + 1))
    return PowerSumTable(d=d, bernoulli=tuple(b), polys=polys)


def _power_sum_poly(c: int, b: Sequence[Fraction]) -> Tuple[Tuple[int, ...], int]:
    # p_c(k) = k^c + 1/(c+1) * sum_{j=0}^{c} C(c+1, j) b_j k^(c+1-j)   (c >= 1)
    # for c = 0 the closed form counts the i = 0 term 0^0 = 1, so p_0(k) = k.
    if c == 0:
        return (1, 0), 1
    binom = pascal_row(c + 1)
    coeffs = [Fraction(0)] * (c + 2)  # index = power of k
    for j in range(c + 1):
        coeffs[c + 1 - j] += Fraction(binom[j]) * b[j] / (c + 1)
    coeffs[c] += 1
    denom = 1
    for q in coeffs:
        denom = _lcm(denom, q.denominator)
    ints = tuple(int(q * denom) for q in reversed(coeffs))
    return ints, denom


def power_sum(table: PowerSumTable, c: int, k: int, counter: Optional[OpCounter] = None) -> int:
    """Exact ``sum_{i=1}^{k} i^c`` for ``0 <= c <= table.d`` and ``k >= 0``."""
    if c < 0 or c > table.d:
        raise ValueError(f"exponent {c} outside table degree {table.d}")
    if k < 0:
        raise ValueError("k must be non-negative")
    coeffs, denom = table.polys[c]
    acc = 0
    for q in coeffs:
        acc = acc * k + q
    if counter is not None:
        counter.calls += 1
        counter.ops += 2 * len(coeffs) + 1
    value, rem = divmod(acc, denom)
    if rem:
        raise NonIntegerResult(f"p_{c}({k}) = {acc}/{denom} is not an integer")
    return value


def power_sum_rational(table: PowerSumTable, c: int, k: int) -> Fraction:
    """Evaluate the Bernoulli closed form term by term with :class:`Fraction`.

    Slower twin of :func:`power_sum`, kept for cross-checking the integer
    polynomial representation.
    """
    if c == 0:
        return Fraction(k)
    binom = pascal_row(c + 1)
    s = sum((binom[j] * table.bernoulli[j] * Fraction(k) ** (c + 1 - j) for j in range(c + 1)), Fraction(0))
    return Fraction(k) ** c + s / (c + 1)
