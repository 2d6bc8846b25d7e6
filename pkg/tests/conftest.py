import functools

import numpy as np
import pytest

from graphbell.catalog import CATALOG

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PHASES = {0: 1, 1: 1j, 2: -1, 3: -1j}


def dense(p):
    """Kronecker-product matrix of a PauliString; qubit 0 is the leftmost factor."""
    out = np.array([[PHASES[p.phase_exp]]], dtype=complex)
    for letter in p.letters():
        out = np.kron(out, PAULI_MATRICES[letter])
    return out


def dense_graph_state(graph):
    """Graph state from CZ gates on |+>^n, qubit 0 leftmost (big-endian)."""
    n = graph.n
    dim = 1 << n
    psi = np.full(dim, dim ** -0.5, dtype=complex)
    for b in range(dim):
        bits = [(b >> (n - 1 - k)) & 1 for k in range(n)]
        for i, j in graph.edges:
            if bits[i - 1] and bits[j - 1]:
                psi[b] *= -1
    return psi


@functools.lru_cache(maxsize=None)
def catalog_by_name():
    return {e.name: e for e in CATALOG}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def satisfaction_table(graph):
    """``table[m, a]`` is 1 when stabilizer element ``m`` agrees with assignment ``a``.

    Assignments run over all 8**n choices of (X, Y, Z) values per qubit and are
    evaluated from the letters and sign alone.
    """
    from graphbell.lhv import cached_group

    n = graph.n
    a = np.arange(1 << (3 * n))
    table = np.zeros((1 << n, len(a)), dtype=np.int8)
    for s in cached_group(graph):
        value = np.full(len(a), s.sign)
        for k, letter in enumerate(s.pauli.letters()):
            if letter != "I":
                bit = (a >> (3 * k + "XYZ".index(letter))) & 1
                value = value * (1 - 2 * bit)
        table[s.index_mask] = value == 1
    return table


def oracle_p(table, subsets):
    """Max satisfied count for each subset (rows of 0/1 over non-identity masks)."""
    sub = np.asarray(subsets, dtype=np.float32)
    t = table[1:].astype(np.float32)
    out = [(sub[i:i + 2048] @ t).max(axis=1) for i in range(0, len(sub), 2048)]
    return np.concatenate(out).astype(np.int64)
