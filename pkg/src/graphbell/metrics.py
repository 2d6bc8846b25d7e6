"""Figures of merit for stabilizer Bell inequalities.

Ratios are exact :class:`fractions.Fraction` values; only the detection
efficiency threshold involves logarithms and is returned as a float.
"""

from __future__ import annotations

import math
from fractions import Fraction


class MetricError(ValueError):
    pass


def violation_ratio(q: int, bound: int) -> Fraction:
    if bound <= 0:
        raise MetricError(f"classical bound {bound} leaves the violation ratio undefined")
    return Fraction(q, bound)


def settings_signature(op) -> list[int]:
    """Number of distinct non-identity letters used at each qubit (qubit 1 first)."""
    n = op.graph.n
    seen = [set() for _ in range(n)]
    for s in op.terms():
        for k, letter in enumerate(s.pauli.letters()):
            if letter != "I":
                seen[k].add(letter)
    return [len(letters) for letters in seen]


def format_settings(settings) -> str:
    return "-".join(str(s) for s in settings)


def v_crit(D: Fraction) -> Fraction:
    """Minimal white-noise visibility that still shows a violation."""
    D = Fraction(D)
    if D <= 1:
        raise MetricError("no violation: D must exceed 1")
    return 1 / D


def eta_crit(D: Fraction, applicable: bool = False) -> float:
    """Detection-efficiency threshold ``(2 + log 2 / log D) / 4``.

    The closed form is only established for Mermin inequalities of odd-n GHZ
    states, so callers must pass ``applicable=True`` to acknowledge that.
    """
    if not applicable:
        raise MetricError("eta_crit is only established for odd-n GHZ Mermin inequalities")
    if D == math.inf:
        return 0.5
    D = Fraction(D)
    if D <= 1:
        raise MetricError("no violation: D must exceed 1")
    return (2 + math.log(2) / math.log(D)) / 4


def game_value(p: int, q: int) -> Fraction:
    """Best classical winning probability of the associated pseudotelepathy game."""
    if not 1 <= p <= q:
        raise MetricError(f"need 1 <= p <= q, got p={p}, q={q}")
    return Fraction(p, q)
