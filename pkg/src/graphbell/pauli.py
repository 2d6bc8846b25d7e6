"""n-qubit Pauli strings in binary symplectic form with exact phase tracking.

A string is ``i**phase_exp`` times a tensor product of bare letters, where the
letter at qubit ``k`` is read off bit ``k`` of ``x_mask`` and ``z_mask``::

    (0, 0) -> I    (1, 0) -> X    (1, 1) -> Y    (0, 1) -> Z

Qubit indices are 0-based bit positions; rendered strings put qubit 0 leftmost.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_QUBITS = 16

LETTERS = "IXYZ"
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_LETTER_TO_BITS = {v: k for k, v in _BITS_TO_LETTER.items()}


class PauliError(ValueError):
    """Invalid Pauli operation (dimension mismatch, bad index, non-Hermitian)."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliString:
    n: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise PauliError(f"qubit count must be in 1..{MAX_QUBITS}, got {self.n}")
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise PauliError("mask has bits beyond the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """The string with ``letter`` at ``qubit`` and identity elsewhere."""
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        x, z = _LETTER_TO_BITS[letter]
        return cls(n, x << qubit, z << qubit)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse ``"-XYY"``, ``"+iZZ"`` or ``"XIZ"`` (qubit 0 leftmost)."""
        phase = 0
        body = label.strip()
        if body[:1] in "+-":
            phase = 0 if body[0] == "+" else 2
            body = body[1:]
        if body[:1] == "i":
            phase += 1
            body = body[1:]
        x = z = 0
        for k, ch in enumerate(body):
            try:
                xb, zb = _LETTER_TO_BITS[ch]
            except KeyError:
                raise PauliError(f"bad Pauli letter {ch!r} in {label!r}") from None
            x |= xb << k
            z |= zb << k
        return cls(len(body), x, z, phase)

    def letters(self) -> str:
        return "".join(letter_at(self, k) for k in range(self.n))

    def support(self) -> int:
        return self.x_mask | self.z_mask

    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_exp]
        return prefix + self.letters()


def _check_dims(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise PauliError(f"qubit count mismatch: {a.n} vs {b.n}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Operator product ``a @ b`` with exact phase."""
    _check_dims(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # Y = i X Z per qubit: expand both factors into X^x Z^z, commute Z_a past
    # X_b, then refold the result's XZ pairs into Y.
    phase = (
        a.phase_exp
        + b.phase_exp
        + _popcount(a.x_mask & a.z_mask)
        + _popcount(b.x_mask & b.z_mask)
        + 2 * _popcount(a.z_mask & b.x_mask)
        - _popcount(x & z)
    )
    return PauliString(a.n, x, z, phase % 4)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_dims(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) % 2 == 0


def letter_at(p: PauliString, qubit: int) -> str:
    if not 0 <= qubit < p.n:
        raise PauliError(f"qubit {qubit} out of range for n={p.n}")
    return _BITS_TO_LETTER[(p.x_mask >> qubit & 1, p.z_mask >> qubit & 1)]


def hermitian_sign(p: PauliString) -> int:
    if p.phase_exp % 2:
        raise PauliError(f"{p} is not Hermitian")
    return 1 if p.phase_exp == 0 else -1
