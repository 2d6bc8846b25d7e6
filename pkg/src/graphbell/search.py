"""Search for stabilizer Bell operators with maximal violation ratio.

A candidate is a set of non-identity stabilizer elements, all with coefficient
one.  Among candidates maximising ``D = q / (2p - q)`` only those with the
fewest terms are kept.  ``search_exhaustive`` considers every subset;
``search_symmetric`` only unions of orbits under the graph's automorphisms.
"""

from __future__ import annotations

import functools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .graph_state import (
    Automorphism,
    GraphSpec,
    automorphisms,
    build_state_vector,
    expectation,
    orbits,
)
from .lhv import (
    BellOperator,
    ClassicalBoundResult,
    LHVAssignment,
    affine_code_reduction,
    cached_group,
    classical_bound,
    code_patterns,
)
from .metrics import settings_signature, violation_ratio

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_QUBITS = 5
SYMMETRIC_MAX_QUBITS = 8
QUANTUM_TOLERANCE = 1e-9


class SearchError(ValueError):
    """Search request that cannot be honoured as configured."""


class SearchIncomplete(RuntimeError):
    """Budget exhausted; ``result`` carries the best-so-far with ``complete=False``."""

    def __init__(self, message: str, result: "SearchResult"):
        super().__init__(message)
        self.result = result


class QuantumValueMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "symmetric"
    max_q: int | None = None
    workers: int = 1
    report_all_optima: bool = True
    node_budget: int | None = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "symmetric"):
            raise SearchError(f"unknown search mode {self.mode!r}")
        if self.max_q is not None and self.max_q < 1:
            raise SearchError("max_q must be positive")
        if self.workers < 1:
            raise SearchError("workers must be at least 1")


@dataclass(frozen=True)
class InequalityRecord:
    operator: BellOperator
    p: int
    bound: int
    D: Fraction
    settings: tuple[int, ...]
    orbit_class: tuple[int, ...]
    orbit_size: int
    witness: LHVAssignment

    @property
    def q(self) -> int:
        return self.operator.q

    @property
    def term_masks(self) -> tuple[int, ...]:
        return self.operator.term_masks


@dataclass
class SearchResult:
    graph: GraphSpec
    mode: str
    records: list[InequalityRecord]
    candidates: int
    elapsed: float
    complete: bool = True
    engine: str = ""

    @property
    def D(self) -> Fraction:
        return self.records[0].D

    @property
    def q(self) -> int:
        return self.records[0].q

    @property
    def bound(self) -> int:
        return self.records[0].bound

    @property
    def raw_count(self) -> int:
        return len(self.records)

    def classes(self) -> list[InequalityRecord]:
        """One record per symmetry class, the canonical representative's own record."""
        seen = {}
        for rec in self.records:
            seen.setdefault(rec.orbit_class, rec)
        by_masks = {r.term_masks: r for r in self.records}
        return [by_masks.get(cls, rep) for cls, rep in sorted(seen.items())]

    @property
    def class_count(self) -> int:
        return len({r.orbit_class for r in self.records})


@functools.lru_cache(maxsize=32)
def _graph_data(graph: GraphSpec):
    """Automorphisms, mask permutation table and all LHV violation patterns."""
    autos = automorphisms(graph)
    full = BellOperator.from_masks(graph, range(1, 1 << graph.n))
    patterns = code_patterns(affine_code_reduction(full))
    return autos, patterns


def _pattern_bits(patterns: np.ndarray, m: int) -> np.ndarray:
    """(C, m) 0/1 matrix: bit ``j`` refers to element mask ``j + 1``."""
    out = np.zeros((len(patterns), m), dtype=np.int64)
    for j in range(m):
        word, bit = divmod(j, 64)
        out[:, j] = (patterns[:, word] >> np.uint64(bit)) & np.uint64(1)
    return out


def canonical_form(masks: Sequence[int], autos: Sequence[Automorphism]) -> tuple[tuple[int, ...], int]:
    images = {tuple(sorted(a.apply_mask(m) for m in masks)) for a in autos}
    return min(images), len(images)


def make_record(op: BellOperator, autos: Sequence[Automorphism] | None = None,
                bound: ClassicalBoundResult | None = None) -> InequalityRecord:
    if autos is None:
        autos = _graph_data(op.graph)[0]
    cb = bound or classical_bound(op)
    cls, size = canonical_form(op.term_masks, autos)
    return InequalityRecord(op, cb.p, cb.bound, violation_ratio(op.q, cb.bound),
                            tuple(settings_signature(op)), cls, size, cb.witness)


def canonicalize(record: InequalityRecord, autos: Sequence[Automorphism]) -> InequalityRecord:
    """The record of the lexicographically least automorphic image of ``record``."""
    cls, _ = canonical_form(record.term_masks, autos)
    if cls == record.term_masks:
        return record
    return make_record(BellOperator(record.operator.graph, cls), autos)


def translate(op: BellOperator, mask: int) -> BellOperator:
    """Multiply every term by the stabilizer element ``mask``.

    The classical bound of the result must be recomputed; it is not inherited.
    """
    if mask == 0:
        raise SearchError("translation mask must be non-empty")
    if mask in op.term_masks:
        raise SearchError(f"translating by {mask} turns a term into the identity")
    return BellOperator(op.graph, tuple(m ^ mask for m in op.term_masks))


def verify_quantum_value(record: InequalityRecord | BellOperator, graph: GraphSpec | None = None) -> float:
    op = record.operator if isinstance(record, InequalityRecord) else record
    graph = graph or op.graph
    state = build_state_vector(graph)
    value = sum(expectation(state, s) for s in op.terms())
    if abs(value - op.q) > QUANTUM_TOLERANCE:
        raise QuantumValueMismatch(f"<G|beta|G> = {value}, expected {op.q}")
    return value


def _records_from(graph: GraphSpec, items: list[list[int]], result: kernels.KernelResult,
                  autos) -> list[InequalityRecord]:
    records = []
    for sel in result.selections:
        masks = sorted(m for j, group in enumerate(items) if sel >> j & 1 for m in group)
        rec = make_record(BellOperator(graph, tuple(masks)), autos)
        # the kernel's integer bound and the LHV engine must agree
        if Fraction(rec.q, rec.bound) != result.ratio or rec.q != result.q:
            raise RuntimeError(f"kernel/LHV disagreement on {masks}: {rec.q}/{rec.bound} vs {result.ratio}")
        records.append(rec)
    records.sort(key=lambda r: (r.orbit_class, r.term_masks))
    return records


def _run(graph: GraphSpec, items: list[list[int]], cfg: SearchConfig, mode: str,
         use_enumeration: bool, seed: Fraction) -> SearchResult:
    autos, patterns = _graph_data(graph)
    elements = _pattern_bits(patterns, (1 << graph.n) - 1)
    counts = np.stack([elements[:, [m - 1 for m in group]].sum(axis=1) for group in items], axis=1)
    prob = kernels.Problem(np.array([len(g) for g in items]), counts, cfg.max_q)
    t0 = time.perf_counter()
    complete = True
    try:
        if use_enumeration:
            engine = "enumeration"
            res = kernels.enumerate_optima(prob, seed, cfg.workers)
        else:
            engine = "branch-and-bound"
            res = kernels.branch_and_bound(prob, seed, cfg.workers, cfg.node_budget)
    except kernels.BudgetExceeded as exc:
        res, complete = exc.partial, False
    elapsed = time.perf_counter() - t0
    log.info("%s %s: D=%s q=%s optima=%d candidates=%d %.1fs", graph.name, mode,
             res.ratio, res.q, len(res.selections), res.examined, elapsed)
    records = _records_from(graph, items, res, autos) if res.selections else []
    if not cfg.report_all_optima and records:
        records = [records[0]]
    out = SearchResult(graph, mode, records, res.examined, elapsed, complete, engine)
    if not complete:
        raise SearchIncomplete("search budget exhausted before completion", out)
    return out


def search_symmetric(graph: GraphSpec, cfg: SearchConfig | None = None) -> SearchResult:
    cfg = cfg or SearchConfig("symmetric")
    if graph.n > SYMMETRIC_MAX_QUBITS:
        raise SearchError(f"symmetric search limited to n <= {SYMMETRIC_MAX_QUBITS}")
    autos, _ = _graph_data(graph)
    items = orbits(autos, cached_group(graph))
    use_enum = len(items) <= 20
    seed = Fraction(1)
    if use_enum:
        seed = _full_group_ratio(graph, items, cfg.max_q)
    return _run(graph, items, cfg, "symmetric", use_enum, seed)


def _full_group_ratio(graph: GraphSpec, items, max_q) -> Fraction:
    """An attainable ratio to seed enumeration: the best single item or whole group."""
    best = Fraction(1)
    candidates = [sorted(m for g in items for m in g)] + [sorted(g) for g in items]
    for masks in candidates:
        if max_q is not None and len(masks) > max_q:
            continue
        cb = classical_bound(BellOperator(graph, tuple(masks)))
        best = max(best, Fraction(len(masks), cb.bound))
    return best


def search_exhaustive(graph: GraphSpec, cfg: SearchConfig | None = None) -> SearchResult:
    cfg = cfg or SearchConfig("exhaustive")
    if graph.n > EXHAUSTIVE_MAX_QUBITS and cfg.max_q is None and cfg.node_budget is None:
        raise SearchError(
            f"exhaustive search over 2^{(1 << graph.n) - 1} subsets needs max_q or a node budget")
    items = [[m] for m in range(1, 1 << graph.n)]
    if len(items) <= kernels.ENUM_MAX_ITEMS:
        # any symmetric optimum is attainable, so it is a safe filtering threshold
        seed_cfg = SearchConfig("symmetric", cfg.max_q, cfg.workers)
        sym = search_symmetric(graph, seed_cfg)
        seed = sym.D if sym.records else Fraction(1)
        return _run(graph, items, cfg, "exhaustive", True, seed)
    return _run(graph, items, cfg, "exhaustive", False, Fraction(1))


def search(graph: GraphSpec, cfg: SearchConfig) -> SearchResult:
    if cfg.mode == "exhaustive":
        return search_exhaustive(graph, cfg)
    return search_symmetric(graph, cfg)
