"""Graph-state stabilizer groups, dense state vectors and graph symmetries.

Vertices are labelled 1..n in :class:`GraphSpec` (the labelling used by the
catalog and the graph file format); generator ``g_i`` acts with ``X`` on qubit
bit ``i - 1``.  A subset of generators is an *index mask* with bit ``i - 1``
set when ``g_i`` takes part in the product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .pauli import MAX_QUBITS, PauliString, commutes, hermitian_sign, multiply

MAX_DENSE_QUBITS = 12
MAX_AUTOMORPHISM_QUBITS = 8


class GraphError(ValueError):
    """Malformed graph specification or graph file."""


class StabilizerConsistencyError(RuntimeError):
    """Generators that should commute do not (signals a construction bug)."""


@dataclass(frozen=True)
class GraphSpec:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    name: str | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise GraphError(f"vertex count must be in 1..{MAX_QUBITS}, got {self.n}")
        normalized = set()
        for edge in self.edges:
            i, j = edge
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphError(f"edge {i}-{j} outside vertices 1..{self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str | None = None):
        edges = list(edges)
        seen = set()
        for i, j in edges:
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {i}-{j}")
            seen.add(key)
        return cls(n, frozenset(edges), name)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbor_masks(self) -> list[int]:
        """Bit mask of the neighbours of each vertex, indexed from 0."""
        adj = [0] * self.n
        for i, j in self.edges:
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return adj

    def is_connected(self) -> bool:
        adj = self.neighbor_masks()
        seen, frontier = 1, 1
        while frontier:
            nxt = 0
            for v in range(self.n):
                if frontier >> v & 1:
                    nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1


def parse_graph_text(text: str, name: str | None = None) -> GraphSpec:
    """Parse the ``n <count>`` / ``e <i> <j>`` graph format."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                if n is not None:
                    raise GraphError(f"line {lineno}: repeated 'n' line")
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise GraphError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: non-integer field in {raw.strip()!r}") from None
    if n is None:
        raise GraphError("missing 'n <count>' line")
    return GraphSpec.from_edges(n, edges, name)


def load_graph_file(path: str | Path) -> GraphSpec:
    path = Path(path)
    return parse_graph_text(path.read_text(), name=path.stem)


def format_graph_text(g: GraphSpec) -> str:
    lines = [f"n {g.n}"] + [f"e {i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StabilizerElement:
    index_mask: int
    pauli: PauliString
    sign: int

    def generator_indices(self) -> list[int]:
        """1-based labels of the generators in the product."""
        return [k + 1 for k in range(self.pauli.n) if self.index_mask >> k & 1]


def generators_from_graph(g: GraphSpec) -> list[StabilizerElement]:
    out = []
    for k, nbrs in enumerate(g.neighbor_masks()):
        p = PauliString(g.n, 1 << k, nbrs)
        out.append(StabilizerElement(1 << k, p, 1))
    return out


def stabilizer_group(generators: Sequence[StabilizerElement]) -> list[StabilizerElement]:
    """All ``2**n`` products of the generators, ordered by index mask."""
    n = len(generators)
    paulis = [g.pauli for g in generators]
    for a, b in itertools.combinations(paulis, 2):
        if not commutes(a, b):
            raise StabilizerConsistencyError(f"generators {a} and {b} anticommute")
    group = [PauliString.identity(paulis[0].n)]
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        group.append(multiply(group[mask ^ (1 << top)], paulis[top]))
    return [StabilizerElement(mask, p, hermitian_sign(p)) for mask, p in enumerate(group)]


def graph_stabilizer_group(g: GraphSpec) -> list[StabilizerElement]:
    return stabilizer_group(generators_from_graph(g))


def build_state_vector(g: GraphSpec) -> np.ndarray:
    """Amplitudes of the graph state; basis index bit ``k`` is qubit ``k``."""
    if g.n > MAX_DENSE_QUBITS:
        raise GraphError(f"dense state vector limited to {MAX_DENSE_QUBITS} qubits")
    basis = np.arange(1 << g.n)
    parity = np.zeros(basis.shape, dtype=np.int64)
    for i, j in g.edges:
        parity ^= (basis >> (i - 1)) & (basis >> (j - 1)) & 1
    return np.where(parity == 1, -1.0, 1.0).astype(complex) / np.sqrt(1 << g.n)


def apply_pauli(state: np.ndarray, p: PauliString) -> np.ndarray:
    dim = state.shape[0]
    if dim != 1 << p.n:
        raise GraphError(f"state of length {dim} does not match {p.n} qubits")
    basis = np.arange(dim)
    z_parity = np.bitwise_count((basis & p.z_mask).astype(np.uint64)) & 1
    # bare letters give i^{#Y} X^x Z^z
    phase = 1j ** ((p.phase_exp + bin(p.x_mask & p.z_mask).count("1")) % 4)
    out = np.empty_like(state)
    out[basis ^ p.x_mask] = phase * np.where(z_parity == 1, -1.0, 1.0) * state
    return out


def expectation(state: np.ndarray, s: StabilizerElement | PauliString) -> float:
    """``<state| s |state>``; for a stabilizer element the sign is in its Pauli phase."""
    p = s.pauli if isinstance(s, StabilizerElement) else s
    value = np.vdot(state, apply_pauli(state, p))
    return float(value.real)


@dataclass(frozen=True)
class Automorphism:
    perm: tuple[int, ...]  # perm[v - 1] is the image of vertex v

    def apply_mask(self, mask: int) -> int:
        out = 0
        for k, image in enumerate(self.perm):
            if mask >> k & 1:
                out |= 1 << (image - 1)
        return out

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self`` after ``other``."""
        return Automorphism(tuple(self.perm[other.perm[v] - 1] for v in range(len(self.perm))))

    def inverse(self) -> "Automorphism":
        inv = [0] * len(self.perm)
        for v, image in enumerate(self.perm, 1):
            inv[image - 1] = v
        return Automorphism(tuple(inv))


def automorphisms(g: GraphSpec) -> list[Automorphism]:
    if g.n > MAX_AUTOMORPHISM_QUBITS:
        raise GraphError(f"brute-force automorphisms limited to {MAX_AUTOMORPHISM_QUBITS} vertices")
    edges = g.edges
    degrees = [bin(m).count("1") for m in g.neighbor_masks()]
    out = []
    for perm in itertools.permutations(range(1, g.n + 1)):
        if any(degrees[v] != degrees[perm[v] - 1] for v in range(g.n)):
            continue
        image = {(min(perm[i - 1], perm[j - 1]), max(perm[i - 1], perm[j - 1])) for i, j in edges}
        if image == edges:
            out.append(Automorphism(perm))
    return out


def mask_permutation_table(autos: Sequence[Automorphism], n: int) -> np.ndarray:
    """``table[a, mask]`` is the image of ``mask`` under automorphism ``a``."""
    table = np.empty((len(autos), 1 << n), dtype=np.int64)
    for a, auto in enumerate(autos):
        table[a] = [auto.apply_mask(mask) for mask in range(1 << n)]
    return table


def orbits(autos: Sequence[Automorphism], group: Sequence[StabilizerElement]) -> list[list[int]]:
    """Orbits of the non-identity index masks, each sorted, ordered by minimum."""
    n = group[0].pauli.n
    table = mask_permutation_table(autos, n)
    seen = set()
    out = []
    for mask in range(1, 1 << n):
        if mask in seen:
            continue
        orbit = sorted({int(m) for m in table[:, mask]})
        seen.update(orbit)
        out.append(orbit)
    return out
