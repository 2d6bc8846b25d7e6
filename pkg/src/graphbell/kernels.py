"""Exact maximisation of the violation ratio over unions of items.

Both engines work on the same abstract problem.  There are ``m`` items (single
stabilizer elements, or orbits of them); item ``j`` contributes ``weights[j]``
terms, of which ``counts[c, j]`` are violated by the LHV pattern ``c``.  For a
selection ``T`` with ``q = sum(weights[T])`` and ``k_c = sum(counts[c, T])``
the classical bound is ``max_c (q - 2 k_c)`` and the ratio is ``q / bound``.

:func:`enumerate_optima` visits every selection; :func:`branch_and_bound`
prunes with Lagrangian certificates taken from LP duals.  The LP is only a
source of multipliers: every pruning decision is re-checked in integer
arithmetic, so the result is exact whatever the LP tolerances.

Both return every selection with maximal ratio and minimal ``q`` among those.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

ENUM_MAX_ITEMS = 34
_LO_ITEMS = 16
_TABLE_ENTRIES = 1 << 25
_CERT_SCALE = 1 << 20
_POOL_SIZE = 30


class BudgetExceeded(RuntimeError):
    """The search hit its node budget; ``partial`` holds the best-so-far."""

    def __init__(self, message: str, partial: "KernelResult"):
        super().__init__(message)
        self.partial = partial


@dataclass
class KernelResult:
    ratio: Fraction
    q: int
    selections: list[int]  # item bitmasks, sorted
    examined: int
    complete: bool = True


@dataclass
class Problem:
    weights: np.ndarray  # (m,) int64
    counts: np.ndarray  # (C, m) int64
    max_q: int | None = None

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.int64)
        counts = np.unique(np.asarray(self.counts, dtype=np.int64), axis=0)
        self.counts = _drop_dominated(counts)

    @property
    def m(self) -> int:
        return len(self.weights)

    def evaluate(self, selection: int) -> tuple[int, int]:
        """``(q, bound)`` of an item bitmask, in exact integers."""
        idx = [j for j in range(self.m) if selection >> j & 1]
        q = int(self.weights[idx].sum())
        k = int(self.counts[:, idx].sum(axis=1).min())
        return q, q - 2 * k


def _drop_dominated(counts: np.ndarray) -> np.ndarray:
    """Remove patterns that violate a superset of another pattern's counts."""
    if len(counts) <= 1:
        return counts
    keep = []
    for c in range(len(counts)):
        le = np.all(counts <= counts[c], axis=1)
        le[c] = False
        # strictly dominated rows never attain the minimum alone; duplicates were merged
        if not le.any():
            keep.append(c)
    return counts[keep]


class _Incumbent:
    """Best ratio and its minimal-q selections, shared between workers."""

    def __init__(self, seed: Fraction):
        self.ratio = seed
        self.q = None
        self.selections: set[int] = set()
        self.lock = threading.Lock()

    def offer(self, selection: int, q: int, bound: int) -> None:
        ratio = Fraction(q, bound)
        with self.lock:
            if ratio > self.ratio or (self.q is None and ratio == self.ratio):
                self.ratio, self.q, self.selections = ratio, q, {selection}
            elif ratio == self.ratio:
                if q < self.q:
                    self.q, self.selections = q, {selection}
                elif q == self.q:
                    self.selections.add(selection)

    def snapshot(self) -> tuple[Fraction, int | None]:
        with self.lock:
            return self.ratio, self.q

    def result(self, examined: int, complete: bool = True) -> KernelResult:
        return KernelResult(self.ratio, self.q or 0, sorted(self.selections), examined, complete)


def _greedy_order(prob: Problem, ratio: Fraction, rng: np.random.Generator) -> np.ndarray:
    """Pattern order that rejects random selections as early as possible."""
    C, m = prob.counts.shape
    sample = rng.random((4096, m)) < 0.5
    q = sample @ prob.weights
    k = sample.astype(np.int64) @ prob.counts.T  # (S, C)
    reject = ratio.denominator * q[:, None] < ratio.numerator * (q[:, None] - 2 * k)
    order = []
    alive = np.ones(len(sample), dtype=bool)
    remaining = set(range(C))
    while alive.any() and remaining:
        rem = sorted(remaining)
        hits = reject[alive][:, rem].sum(axis=0)
        best = rem[int(np.argmax(hits))]
        if hits.max() == 0:
            break
        order.append(best)
        remaining.discard(best)
        alive &= ~reject[:, best]
    return np.array(order + sorted(remaining), dtype=np.int64)


def enumerate_optima(prob: Problem, seed: Fraction = Fraction(1), workers: int = 1) -> KernelResult:
    """Visit all ``2**m - 1`` selections, keeping those with ratio >= the running best.

    ``seed`` must be a ratio known to be attainable (it only filters out
    selections that cannot be optimal).  Ties at the seed are kept.
    """
    m = prob.m
    if m > ENUM_MAX_ITEMS:
        raise ValueError(f"enumeration limited to {ENUM_MAX_ITEMS} items, got {m}")
    C = len(prob.counts)
    lo_bits = max(1, min(m, _LO_ITEMS, int(math.log2(_TABLE_ENTRIES // max(C, 1)))))
    hi_bits = m - lo_bits
    w, K = prob.weights, prob.counts
    order = _greedy_order(prob, seed, np.random.default_rng(0))

    lo = np.arange(1 << lo_bits, dtype=np.int64)
    lo_q = np.zeros(lo.shape, dtype=np.int64)
    lo_k = np.zeros((C, lo.size), dtype=np.int32)
    for j in range(lo_bits):
        span = 1 << j
        lo_q[span:2 * span] = lo_q[:span] + w[j]
        lo_k[:, span:2 * span] = lo_k[:, :span] + K[:, j:j + 1]
    lo_k = lo_k[order]
    hi_w = w[lo_bits:]
    hi_K = K[order][:, lo_bits:]
    max_q = prob.max_q

    def run(start: int, stop: int) -> _Incumbent:
        inc = _Incumbent(seed)
        for hi in range(start, stop):
            bits = np.array([hi >> j & 1 for j in range(hi_bits)], dtype=np.int64)
            qh = int(hi_w @ bits) if hi_bits else 0
            kh = hi_K @ bits if hi_bits else np.zeros(C, dtype=np.int64)
            num, den = inc.ratio.numerator, inc.ratio.denominator
            cand = lo
            q = lo_q + qh
            for c in range(C):
                k = lo_k[c, cand] + kh[c]
                keep = den * q >= num * (q - 2 * k)
                cand, q = cand[keep], q[keep]
                if cand.size == 0:
                    break
            for sel_lo, qq in zip(cand.tolist(), q.tolist()):
                if qq == 0 or (max_q is not None and qq > max_q):
                    continue
                sel = (hi << lo_bits) | sel_lo
                inc.offer(sel, *prob.evaluate(sel))
        return inc

    n_hi = 1 << hi_bits
    if workers <= 1 or n_hi == 1:
        parts = [run(0, n_hi)]
    else:
        chunks = min(n_hi, 8 * workers)
        edges = [n_hi * i // chunks for i in range(chunks + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda i: run(edges[i], edges[i + 1]), range(chunks)))
    merged = _Incumbent(seed)
    for part in parts:
        for sel in part.selections:
            merged.offer(sel, *prob.evaluate(sel))
    return merged.result((1 << m) - 1)


@dataclass
class _Certificate:
    nu: np.ndarray  # integer combination of pattern value vectors
    scale: int  # total multiplier weight


@dataclass
class _Worker:
    prob: Problem
    inc: _Incumbent
    budget: int | None
    counter: list
    values: np.ndarray = field(init=False)
    active: set = field(init=False)
    pool: list = field(default_factory=list)

    def __post_init__(self):
        self.values = self.prob.weights[None, :] - 2 * self.prob.counts  # (C, m)
        scores = self.values.sum(axis=1)
        self.active = set(np.argsort(-scores, kind="stable")[: self.prob.m].tolist())

    def _tick(self):
        with self.inc.lock:
            self.counter[0] += 1
            over = self.budget is not None and self.counter[0] > self.budget
        if over:
            raise BudgetExceeded("node budget exhausted", self.inc.result(self.counter[0], False))

    def _lp(self, chosen: list[int], free: list[int]):
        """Charnes-Cooper relaxation; returns (y scaled so chosen items are 1, duals)."""
        V = self.values.astype(float)
        w = self.prob.weights.astype(float)
        nf = len(free)
        C = len(V)
        while True:
            act = sorted(self.active)
            Va = V[act]
            cost = -np.concatenate([w[free], [w[chosen].sum()]])
            rows = [np.hstack([Va[:, free], Va[:, chosen].sum(axis=1, keepdims=True)])]
            rhs = [np.ones(len(act))]
            if nf:
                rows.append(np.hstack([np.eye(nf), -np.ones((nf, 1))]))
                rhs.append(np.zeros(nf))
            if self.prob.max_q is not None:
                rows.append(np.concatenate([w[free], [w[chosen].sum() - self.prob.max_q]])[None, :])
                rhs.append(np.zeros(1))
            res = linprog(cost, A_ub=np.vstack(rows), b_ub=np.concatenate(rhs),
                          bounds=[(0, None)] * (nf + 1), method="highs")
            if res.status == 3 and len(self.active) < C:
                self.active.update(range(C))
                continue
            if res.status != 0:
                return None, None
            x = res.x
            y = np.zeros(self.prob.m)
            y[free] = x[:nf]
            y[chosen] = x[-1]
            slack = V @ y - 1.0
            bad = np.nonzero(slack > 1e-9)[0]
            if bad.size == 0 or len(self.active) == C:
                duals = np.zeros(C)
                duals[act] = np.maximum(-res.ineqlin.marginals[: len(act)], 0.0)
                t = x[-1]
                return (y / t if t > 1e-12 else y), duals
            self.active.update(bad[np.argsort(-slack[bad])[:20]].tolist())

    def _certificate(self, duals: np.ndarray) -> _Certificate | None:
        top = duals.max()
        if top <= 0:
            return None
        mu = np.rint(duals / top * _CERT_SCALE).astype(np.int64)
        return _Certificate(mu @ self.values, int(mu.sum()))

    def _refutes(self, cert: _Certificate, chosen: list[int], free: list[int], ratio: Fraction,
                 allow_tie: bool) -> bool:
        """True when no completion reaches the incumbent ratio (or ties it, if not allowed).

        For multipliers ``mu >= 0`` the classical bound of any selection ``S``
        is at least ``nu(S) / scale``, so ``q(S) * scale - ratio * nu(S) < 0``
        for every completion proves ``q / bound < ratio``.  ``ratio`` and
        ``allow_tie`` must come from one snapshot: another thread may raise the
        incumbent in between, and a stale ``best_q`` would then forbid ties
        that the new incumbent needs.
        """
        num, den = ratio.numerator, ratio.denominator
        w = self.prob.weights
        base = den * cert.scale * int(w[chosen].sum()) - num * int(cert.nu[chosen].sum())
        gains = den * cert.scale * w[free] - num * cert.nu[free]
        best = base + int(gains[gains > 0].sum())
        return best < 0 or (not allow_tie and best <= 0)

    def solve(self, chosen: list[int], free: list[int]) -> None:
        self._tick()
        prob = self.prob
        q_chosen = int(prob.weights[chosen].sum())
        if prob.max_q is not None and q_chosen > prob.max_q:
            return
        if chosen:
            sel = sum(1 << j for j in chosen)
            q, bound = prob.evaluate(sel)
            self.inc.offer(sel, q, bound)
        if not free:
            return
        ratio, best_q = self.inc.snapshot()
        allow_tie = best_q is None or q_chosen < best_q
        y = None
        if chosen and ratio > 0:
            if any(self._refutes(c, chosen, free, ratio, allow_tie) for c in self.pool):
                return
            y, duals = self._lp(chosen, free)
            cert = self._certificate(duals) if duals is not None else None
            if cert is not None:
                self.pool.insert(0, cert)
                del self.pool[_POOL_SIZE:]
                if self._refutes(cert, chosen, free, ratio, allow_tie):
                    return
        if y is None:
            j = max(free, key=lambda i: (prob.weights[i], -i))
            include_first = True
        else:
            j = min(free, key=lambda i: (abs(y[i] - 0.5), -prob.weights[i], i))
            include_first = y[j] >= 0.5
        rest = [i for i in free if i != j]
        for include in ((True, False) if include_first else (False, True)):
            self.solve(sorted(chosen + [j]) if include else chosen, rest)


def branch_and_bound(prob: Problem, seed: Fraction = Fraction(1), workers: int = 1,
                     node_budget: int | None = None) -> KernelResult:
    inc = _Incumbent(seed)
    counter = [0]
    free = list(range(prob.m))
    if workers <= 1:
        _Worker(prob, inc, node_budget, counter).solve([], free)
        return inc.result(counter[0])
    # split on the heaviest items into independent subtrees
    depth = min(prob.m, max(1, math.ceil(math.log2(4 * workers))))
    split = sorted(free, key=lambda i: (-prob.weights[i], i))[:depth]
    rest = [i for i in free if i not in split]
    jobs = [[split[b] for b in range(depth) if mask >> b & 1] for mask in range(1 << depth)]

    def run(chosen):
        worker = _Worker(prob, inc, node_budget, counter)
        if chosen:
            worker.solve(sorted(chosen), rest)
        else:
            worker.solve([], rest)
        return True

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, jobs))
    return inc.result(counter[0])
