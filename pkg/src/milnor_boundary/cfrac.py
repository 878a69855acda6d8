"""Negative (Hirzebruch-Jung) continued fractions.

A term sequence ``(k_1, ..., k_s)`` with ``k_i >= 2`` for ``i >= 2`` stands for

    k_1 - 1/(k_2 - 1/(... - 1/k_s))

Every reduced fraction ``a/b`` with ``b > 0`` has exactly one such expansion.
The convergent sequences ``mu`` and ``mu_tilde`` obey the three-term
recursion ``x_{i+1} = k_i x_i - x_{i-1}`` and end in ``(a, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

NCF = tuple[int, ...]


@dataclass(frozen=True)
class Convergents:
    """Sequences ``mu_0..mu_{s+1}`` and ``mu_tilde_0..mu_tilde_{s+1}``."""

    mu: tuple[int, ...]
    mu_tilde: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.mu)

    def determinants(self) -> list[int]:
        """``mu_i * mu_tilde_{i+1} - mu_{i+1} * mu_tilde_i`` for ``i = 0..s``."""
        return [
            self.mu[i] * self.mu_tilde[i + 1] - self.mu[i + 1] * self.mu_tilde[i]
            for i in range(len(self.mu) - 1)
        ]


def validate_ncf(terms: Sequence[int]) -> NCF:
    terms = tuple(int(k) for k in terms)
    for i, k in enumerate(terms[1:], start=2):
        if k < 2:
            raise ValueError(f"term k_{i} = {k} violates k_i >= 2 for i >= 2")
    return terms


def ncf_expand(a: int, b: int) -> NCF:
    """Expand ``a/b`` by greedy ceiling division.

    >>> ncf_expand(7, 5)
    (2, 2, 3)
    """
    if b <= 0:
        raise ValueError(f"denominator must be positive, got {b}")
    if gcd(abs(a), b) != 1:
        raise ValueError(f"{a}/{b} is not reduced")
    terms = []
    while True:
        k = -(-a // b)
        terms.append(k)
        a, b = b, k * b - a
        if b == 0:
            return tuple(terms)


def ncf_convergents(terms: Sequence[int]) -> Convergents:
    terms = validate_ncf(terms)
    mu = [0, 1]
    mu_t = [-1, 0]
    for k in terms:
        mu.append(k * mu[-1] - mu[-2])
        mu_t.append(k * mu_t[-1] - mu_t[-2])
    return Convergents(tuple(mu), tuple(mu_t))


def ncf_eval(terms: Sequence[int]) -> tuple[int, int]:
    """Return the reduced pair ``(a, b)`` represented by ``terms``.

    The empty sequence gives ``(1, 0)``.
    """
    conv = ncf_convergents(terms)
    return conv.mu[-1], conv.mu_tilde[-1]
