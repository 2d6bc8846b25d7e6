"""Human and machine renderings of search results, and the table verifier.

The machine format is JSON lines: one ``"kind": "record"`` object per optimum
followed by a single ``"kind": "summary"`` object.  Timing and candidate
counts are written only on request so that output is reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .catalog import CATALOG, CatalogEntry, catalog_entry
from .graph_state import GraphSpec
from .lhv import BellOperator, LHVAssignment, classical_bound, satisfied_count
from .metrics import eta_crit, format_settings, game_value, v_crit
from .pauli import hermitian_sign
from .search import (
    InequalityRecord,
    SearchConfig,
    SearchResult,
    _graph_data,
    search,
    verify_quantum_value,
)

# "and N more" tallies printed next to the listed inequality
LISTED_MORE = {"y5": 32, "rc5": 105, "e6": 37, "no15": 6, "no16": 3}


class ReportError(ValueError):
    """Malformed or self-inconsistent result document."""


def is_odd_star(graph: GraphSpec) -> bool:
    """Odd-n GHZ graph: one hub joined to every other vertex and nothing else."""
    if graph.n % 2 == 0 or len(graph.edges) != graph.n - 1:
        return False
    degrees = [0] * (graph.n + 1)
    for a, b in graph.edges:
        degrees[a] += 1
        degrees[b] += 1
    return max(degrees) == graph.n - 1


def render_expanded(record: InequalityRecord | BellOperator) -> str:
    masks = record.term_masks
    n = (record.operator if isinstance(record, InequalityRecord) else record).graph.n
    parts = []
    for m in masks:
        parts.append("·".join(f"g{k + 1}" for k in range(n) if m >> k & 1))
    return " + ".join(parts)


def render_paulis(record: InequalityRecord | BellOperator) -> str:
    op = record.operator if isinstance(record, InequalityRecord) else record
    out = []
    for s in op.terms():
        if hermitian_sign(s.pauli) != s.sign:
            raise ReportError(f"sign mismatch on term {s.index_mask}")
        out.append(str(s.pauli))
    return " ".join(out)


def render_operator(record: InequalityRecord | BellOperator) -> tuple[str, str]:
    return render_expanded(record), render_paulis(record)


def metrics_block(record: InequalityRecord) -> dict:
    out = {"D": record.D, "game_value": game_value(record.p, record.q)}
    if record.D > 1:
        out["V_crit"] = v_crit(record.D)
        if is_odd_star(record.operator.graph):
            out["eta_crit"] = eta_crit(record.D, applicable=True)
    return out


@dataclass
class ResultDocument:
    graph: GraphSpec
    mode: str
    records: list[InequalityRecord]
    complete: bool = True
    candidates: int = 0
    elapsed: float = 0.0
    engine: str = ""

    @classmethod
    def from_result(cls, result: SearchResult) -> "ResultDocument":
        doc = cls(result.graph, result.mode, list(result.records), result.complete,
                  result.candidates, result.elapsed, result.engine)
        doc.check()
        return doc

    @property
    def raw_count(self) -> int:
        return len(self.records)

    @property
    def class_count(self) -> int:
        return len({r.orbit_class for r in self.records})

    def check(self) -> None:
        """Recompute quantum value and classical bound for every record."""
        for rec in self.records:
            verify_quantum_value(rec)
            cb = classical_bound(rec.operator)
            if (cb.p, cb.bound) != (rec.p, rec.bound):
                raise ReportError(f"stale bound for {rec.term_masks}: {cb.p} vs {rec.p}")
            if satisfied_count(rec.witness, rec.operator) != rec.p:
                raise ReportError(f"witness does not attain p for {rec.term_masks}")


def format_text(doc: ResultDocument, stats: bool = False) -> str:
    g = doc.graph
    edges = " ".join(f"{a}-{b}" for a, b in g.sorted_edges())
    lines = [f"graph {g.name or '?'} (n={g.n}) edges {edges}",
             f"mode {doc.mode}  complete {'yes' if doc.complete else 'NO'}"]
    if not doc.records:
        lines.append("no optimum found")
        return "\n".join(lines) + "\n"
    best = doc.records[0]
    lines.append(f"optima {doc.raw_count} raw, {doc.class_count} up to graph automorphism")
    lines.append(f"D = {best.D}  q = {best.q}  p = {best.p}  bound 2p-q = {best.bound}")
    m = metrics_block(best)
    extra = [f"game value p/q = {m['game_value']}"]
    if "V_crit" in m:
        extra.insert(0, f"V_crit = {m['V_crit']}")
    if "eta_crit" in m:
        extra.append(f"eta_crit = {m['eta_crit']:.6f}")
    lines.append("  ".join(extra))
    for i, rec in enumerate(doc.records, 1):
        expanded, paulis = render_operator(rec)
        lines.append(f"[{i}] settings {format_settings(rec.settings)}  orbit size {rec.orbit_size}")
        lines.append(f"    beta  = {expanded}")
        lines.append(f"    terms = {paulis}")
        wit = " ".join(f"{k}={v:+d}" for k, v in rec.witness.as_slot_dict().items())
        lines.append(f"    LHV witness: {wit}")
    if stats:
        lines.append(f"engine {doc.engine}  candidates {doc.candidates}  time {doc.elapsed:.2f}s")
    return "\n".join(lines) + "\n"


def _graph_fields(g: GraphSpec) -> dict:
    return {"graph": g.name, "n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def format_machine(doc: ResultDocument, stats: bool = False) -> str:
    counts = {"raw": doc.raw_count, "classes": doc.class_count}
    lines = []
    for rec in doc.records:
        obj = {"kind": "record", **_graph_fields(doc.graph), "mode": doc.mode,
               "term_masks": list(rec.term_masks), "q": rec.q, "p": rec.p, "bound": rec.bound,
               "D_num": rec.D.numerator, "D_den": rec.D.denominator,
               "settings": list(rec.settings), "witness": rec.witness.as_slot_dict(),
               "orbit_class": list(rec.orbit_class), "orbit_size": rec.orbit_size,
               "counts": counts}
        lines.append(json.dumps(obj, sort_keys=True))
    summary = {"kind": "summary", **_graph_fields(doc.graph), "mode": doc.mode,
               "complete": doc.complete, "counts": counts}
    if stats:
        summary["stats"] = {"engine": doc.engine, "candidates": doc.candidates,
                            "elapsed": round(doc.elapsed, 3)}
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


def _witness_from(slots: dict) -> LHVAssignment:
    values = {}
    for name, v in slots.items():
        values[(int(name[1:]) - 1, name[0])] = int(v)
    return LHVAssignment(values)


def parse_machine(text: str) -> ResultDocument:
    """Rebuild a document from :func:`format_machine` output and re-check it."""
    objs = [json.loads(line) for line in text.splitlines() if line.strip()]
    summaries = [o for o in objs if o.get("kind") == "summary"]
    if len(summaries) != 1:
        raise ReportError("expected exactly one summary object")
    s = summaries[0]
    graph = GraphSpec.from_edges(s["n"], [tuple(e) for e in s["edges"]], s["graph"])
    records = []
    for o in objs:
        if o.get("kind") != "record":
            continue
        op = BellOperator(graph, tuple(o["term_masks"]))
        if o["q"] != op.q:
            raise ReportError(f"q={o['q']} but {op.q} term masks")
        rec = InequalityRecord(op, o["p"], o["bound"], Fraction(o["D_num"], o["D_den"]),
                               tuple(o["settings"]), tuple(o["orbit_class"]), o["orbit_size"],
                               _witness_from(o["witness"]))
        if rec.bound != 2 * rec.p - rec.q or rec.D != Fraction(rec.q, rec.bound):
            raise ReportError(f"inconsistent p/bound/D for {rec.term_masks}")
        records.append(rec)
    stats = s.get("stats", {})
    doc = ResultDocument(graph, s["mode"], records, s["complete"], stats.get("candidates", 0),
                         stats.get("elapsed", 0.0), stats.get("engine", ""))
    doc.check()
    return doc


def designated_mode(entry: CatalogEntry) -> str:
    return "exhaustive" if entry.n <= 5 else "symmetric"


def settings_match(records: Iterable[InequalityRecord], printed: str, autos) -> str | None:
    """``"exact"``, ``"permuted"`` (by a graph automorphism) or None."""
    target = tuple(int(x) for x in printed.split("-"))
    records = list(records)
    if any(r.settings == target for r in records):
        return "exact"
    for r in records:
        for a in autos:
            # qubit v carries the settings of its preimage
            moved = [0] * len(target)
            for v, img in enumerate(a.perm):
                moved[img - 1] = r.settings[v]
            if tuple(moved) == target:
                return "permuted"
    return None


@dataclass
class VerifyRow:
    entry: CatalogEntry
    mode: str
    result: SearchResult
    D_ok: bool
    bound_ok: bool
    q_ok: bool | None  # None when the table row is not internally consistent
    settings: str | None
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.D_ok and self.bound_ok and self.q_ok is not False

    def tally(self) -> str | None:
        listed = LISTED_MORE.get(self.entry.name)
        if listed is None:
            return None
        raw, cls = self.result.raw_count, self.result.class_count
        conventions = []
        if raw == listed + 1:
            conventions.append("raw optima = listed + N")
        if cls == listed + 1:
            conventions.append("classes = listed + N")
        if raw == listed:
            conventions.append("raw optima = N")
        if cls == listed:
            conventions.append("classes = N")
        found = "; ".join(conventions) if conventions else "no convention matches"
        return f"table 'and {listed} more' vs raw {raw}, classes {cls}: {found}"


def verify_entry(entry: CatalogEntry, workers: int = 1, mode: str | None = None) -> VerifyRow:
    mode = mode or designated_mode(entry)
    graph = entry.graph()
    res = search(graph, SearchConfig(mode, workers=workers))
    ResultDocument.from_result(res)
    autos = _graph_data(graph)[0]
    q_ok = None if entry.q is None else res.q == entry.q
    warnings = []
    if entry.note:
        warnings.append(entry.note)
    if entry.q is None:
        warnings.append(f"q not compared; search found q={res.q}")
    match = settings_match(res.records, entry.settings, autos)
    if match is None:
        found = sorted({format_settings(r.settings) for r in res.records})
        warnings.append(f"settings {entry.settings} not among optima ({', '.join(found)})")
    return VerifyRow(entry, mode, res, res.D == entry.D, res.bound == entry.bound, q_ok,
                     match, warnings)


def verify_catalog(names: Iterable[str] | None = None, workers: int = 1,
                   progress: Callable[[VerifyRow], None] | None = None) -> list[VerifyRow]:
    entries = [catalog_entry(n) for n in names] if names else list(CATALOG)
    rows = []
    for entry in entries:
        row = verify_entry(entry, workers)
        rows.append(row)
        if progress:
            progress(row)
    return rows


def format_verify_row(row: VerifyRow) -> str:
    e, r = row.entry, row.result
    status = "MATCH" if row.ok else "MISMATCH"
    q_part = "q n/a" if row.q_ok is None else f"q {r.q} vs {e.q}"
    line = (f"{status:8s} no{e.number:<2d} {e.name:5s} {row.mode:10s} D {r.D} vs {e.D}  "
            f"bound {r.bound} vs {e.bound}  {q_part}  "
            f"settings {format_settings(r.records[0].settings)} vs {e.settings}  "
            f"optima {r.raw_count} raw {r.class_count} classes")
    out = [line]
    out += [f"    warning: {w}" for w in row.warnings]
    tally = row.tally()
    if tally:
        out.append(f"    tally: {tally}")
    return "\n".join(out)


def format_verify_summary(rows: list[VerifyRow]) -> str:
    d_ok = sum(r.D_ok for r in rows)
    ok = sum(r.ok for r in rows)
    return f"{d_ok}/{len(rows)} D-values matched, {ok}/{len(rows)} rows fully matched"

