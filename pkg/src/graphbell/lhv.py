"""Deterministic local-hidden-variable bounds for sums of stabilizing operators.

An assignment fixes a value +1/-1 for every (qubit, letter) *slot*.  Slots are
numbered ``3 * qubit + {X: 0, Y: 1, Z: 2}``.  Under an assignment ``a`` the term
``s`` takes the value ``sign(s) * prod a[k, letter_k(s)]``; in additive notation
the set of terms it violates is ``offset XOR (a M)`` where row ``t`` of ``M`` is
the set of terms touching slot ``t``.  The achievable violation patterns form
an affine binary code, and ``p`` is ``q`` minus its minimum weight.

Assignments are ordered lexicographically over the slots in increasing slot
order with +1 before -1; ties between optimal assignments go to the smallest.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph_state import GraphSpec, StabilizerElement, graph_stabilizer_group
from .pauli import letter_at

SLOT_LETTERS = "XYZ"
BRUTE_FORCE_MAX_QUBITS = 4
# codeword enumeration happens in blocks of at most 2**_BLOCK_BITS rows
_BLOCK_BITS = 16


class LHVError(ValueError):
    """Assignment or operator not usable for evaluation."""


def slot_index(qubit: int, letter: str) -> int:
    return 3 * qubit + SLOT_LETTERS.index(letter)


def slot_name(slot: int) -> str:
    """``"X1"``-style label with a 1-based qubit number."""
    return f"{SLOT_LETTERS[slot % 3]}{slot // 3 + 1}"


@dataclass(frozen=True)
class LHVAssignment:
    values: Mapping[tuple[int, str], int]

    def __getitem__(self, key: tuple[int, str]) -> int:
        try:
            return self.values[key]
        except KeyError:
            raise LHVError(f"assignment has no value for slot {key}") from None

    def as_slot_dict(self) -> dict[str, int]:
        return {slot_name(slot_index(k, l)): v for (k, l), v in sorted(self.values.items())}


@functools.lru_cache(maxsize=64)
def cached_group(graph: GraphSpec) -> tuple[StabilizerElement, ...]:
    return tuple(graph_stabilizer_group(graph))


@dataclass(frozen=True)
class BellOperator:
    graph: GraphSpec
    term_masks: tuple[int, ...]

    def __post_init__(self):
        masks = tuple(sorted(set(self.term_masks)))
        if len(masks) != len(self.term_masks):
            raise LHVError("duplicate term masks")
        if not masks:
            raise LHVError("a Bell operator needs at least one term")
        if masks[0] == 0:
            raise LHVError("the identity cannot be a Bell-operator term")
        if masks[-1] >= 1 << self.graph.n:
            raise LHVError("term mask outside the stabilizer group")
        object.__setattr__(self, "term_masks", masks)

    @classmethod
    def from_masks(cls, graph: GraphSpec, masks: Iterable[int]) -> "BellOperator":
        return cls(graph, tuple(masks))

    @property
    def q(self) -> int:
        return len(self.term_masks)

    def terms(self) -> list[StabilizerElement]:
        group = cached_group(self.graph)
        return [group[m] for m in self.term_masks]


@dataclass(frozen=True)
class ClassicalBoundResult:
    p: int
    bound: int
    witness: LHVAssignment


def term_value(a: LHVAssignment, s: StabilizerElement) -> int:
    value = s.sign
    for k in range(s.pauli.n):
        letter = letter_at(s.pauli, k)
        if letter != "I":
            value *= a[k, letter]
    return value


def satisfied_count(a: LHVAssignment, op: BellOperator) -> int:
    return sum(term_value(a, s) == 1 for s in op.terms())


def _term_slots(s: StabilizerElement) -> list[int]:
    return [slot_index(k, letter_at(s.pauli, k))
            for k in range(s.pauli.n) if letter_at(s.pauli, k) != "I"]


def incidence(op: BellOperator) -> tuple[list[int], dict[int, int], int]:
    """Used slots (sorted), slot -> term bitmask, and the sign offset bitmask.

    Bit ``j`` of each bitmask refers to ``op.term_masks[j]``.
    """
    rows: dict[int, int] = {}
    offset = 0
    for j, s in enumerate(op.terms()):
        if s.sign < 0:
            offset |= 1 << j
        for slot in _term_slots(s):
            rows[slot] = rows.get(slot, 0) | 1 << j
    return sorted(rows), rows, offset


def _assignment_from_bits(slots: Sequence[int], bits: int) -> LHVAssignment:
    """Decode an integer whose most significant of ``len(slots)`` bits is slot 0."""
    s = len(slots)
    values = {}
    for i, slot in enumerate(slots):
        values[(slot // 3, SLOT_LETTERS[slot % 3])] = -1 if bits >> (s - 1 - i) & 1 else 1
    return LHVAssignment(values)


@dataclass
class AffineCode:
    """Row-reduced form of the violation-pattern code of an operator."""

    q: int
    slots: list[int]
    basis: list[int]  # codeword generators (q-bit ints), one per pivot
    offset: int
    pivots: dict[int, tuple[int, int]]  # pivot bit -> (row, assignment tag)
    kernel: list[int]  # assignment tags with zero image, reduced echelon form

    @property
    def rank(self) -> int:
        return len(self.basis)

    def solve(self, codeword: int) -> int | None:
        """Lexicographically smallest assignment bits with ``a M == codeword``."""
        row, tag = codeword, 0
        while row:
            top = row.bit_length() - 1
            if top not in self.pivots:
                return None
            prow, ptag = self.pivots[top]
            row ^= prow
            tag ^= ptag
        for k in self.kernel:
            if tag ^ k < tag:
                tag ^= k
        return tag


def affine_code_reduction(op: BellOperator) -> AffineCode:
    slots, rows, offset = incidence(op)
    s = len(slots)
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, slot in enumerate(slots):
        row, tag = rows[slot], 1 << (s - 1 - i)
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                break
            prow, ptag = pivots[top]
            row ^= prow
            tag ^= ptag
        if row:
            pivots[row.bit_length() - 1] = (row, tag)
        else:
            kernel.append(tag)
    # reduced echelon form on the kernel so greedy clearing gives the minimum
    reduced: list[int] = []
    for k in sorted(kernel, reverse=True):
        for r in reduced:
            if k ^ r < k:
                k ^= r
        if k:
            reduced = [r ^ k if r ^ k < r else r for r in reduced]
            reduced.append(k)
    reduced.sort(reverse=True)
    basis = [row for row, _ in pivots.values()]
    return AffineCode(op.q, slots, basis, offset, pivots, reduced)


def _int_to_words(v: int, words: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(words)], dtype=np.uint64)


def _span(vectors: Sequence[np.ndarray], words: int) -> np.ndarray:
    out = np.zeros((1, words), dtype=np.uint64)
    for v in vectors:
        out = np.concatenate([out, out ^ v])
    return out


def code_patterns(code: AffineCode) -> np.ndarray:
    """Every violation pattern as rows of 64-bit words (duplicates impossible)."""
    words = max(1, -(-code.q // 64))
    basis = [_int_to_words(b, words) for b in code.basis]
    patterns = _span(basis, words)
    return patterns ^ _int_to_words(code.offset, words)


def _words_to_int(row: np.ndarray) -> int:
    return sum(int(w) << (64 * i) for i, w in enumerate(row))


def min_weight_patterns(code: AffineCode) -> tuple[int, list[int]]:
    """Minimum weight of ``offset + code`` and all codewords attaining it."""
    words = max(1, -(-code.q // 64))
    basis = [_int_to_words(b, words) for b in code.basis]
    lo_basis, hi_basis = basis[:_BLOCK_BITS], basis[_BLOCK_BITS:]
    lo = _span(lo_basis, words) ^ _int_to_words(code.offset, words)
    hi = _span(hi_basis, words)
    best = None
    argbest: list[int] = []
    for h in hi:
        block = lo ^ h
        weights = np.bitwise_count(block).sum(axis=1, dtype=np.int64)
        w = int(weights.min())
        rows = block[weights == w]
        if best is None or w < best:
            best, argbest = w, []
        if w == best:
            argbest.extend(_words_to_int(r) ^ code.offset for r in rows)
    return best, argbest


def classical_bound(op: BellOperator) -> ClassicalBoundResult:
    code = affine_code_reduction(op)
    weight, codewords = min_weight_patterns(code)
    p = op.q - weight
    bits = min(code.solve(c) for c in codewords)
    return ClassicalBoundResult(p, 2 * p - op.q, _assignment_from_bits(code.slots, bits))


def direct_bound(op: BellOperator) -> ClassicalBoundResult:
    """Reference path: enumerate every assignment of the used slots."""
    slots, rows, offset = incidence(op)
    s = len(slots)
    if s > 24:
        raise LHVError(f"{s} used slots is too many for direct enumeration")
    a = np.arange(1 << s, dtype=np.int64)
    violated = np.zeros(a.shape, dtype=np.int64)
    term_slot_masks = [0] * op.q
    for i, slot in enumerate(slots):
        tag = 1 << (s - 1 - i)
        for j in range(op.q):
            if rows[slot] >> j & 1:
                term_slot_masks[j] |= tag
    for j, tmask in enumerate(term_slot_masks):
        parity = np.bitwise_count((a & tmask).astype(np.uint64)).astype(np.int64) & 1
        violated += parity ^ (offset >> j & 1)
    best = int(np.argmin(violated))
    p = op.q - int(violated[best])
    return ClassicalBoundResult(p, 2 * p - op.q, _assignment_from_bits(slots, best))


def brute_force_bound(op: BellOperator) -> ClassicalBoundResult:
    """Test oracle: all ``8**n`` assignments of every slot, evaluated term by term."""
    n = op.graph.n
    if n > BRUTE_FORCE_MAX_QUBITS:
        raise LHVError(f"brute force limited to n <= {BRUTE_FORCE_MAX_QUBITS}")
    nslots = 3 * n
    a = np.arange(1 << nslots, dtype=np.int64)
    # slot t is bit (nslots - 1 - t): integer order equals lexicographic order
    slot_bits = [(a >> (nslots - 1 - t)) & 1 for t in range(nslots)]
    satisfied = np.zeros(a.shape, dtype=np.int64)
    for s in op.terms():
        value = np.full(a.shape, s.sign, dtype=np.int64)
        for k in range(n):
            letter = letter_at(s.pauli, k)
            if letter != "I":
                value *= 1 - 2 * slot_bits[slot_index(k, letter)]
        satisfied += value == 1
    best = int(np.argmax(satisfied))
    p = int(satisfied[best])
    used = sorted({t for s in op.terms() for t in _term_slots(s)})
    values = {(t // 3, SLOT_LETTERS[t % 3]): 1 - 2 * int(slot_bits[t][best]) for t in used}
    return ClassicalBoundResult(p, 2 * p - op.q, LHVAssignment(values))
