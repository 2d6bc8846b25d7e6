"""Catalog of the 18 graph-state classes with 3 <= n <= 6 and their reference data.

The edge list is authoritative.  ``printed_generators`` and ``beta`` are kept
verbatim from the published tables (Table I for n <= 5, Table II for n = 6) so
that :func:`validate_catalog` and the test-suite can compare against them.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .graph_state import GraphError, GraphSpec, generators_from_graph


def _star(n):
    return [(1, k) for k in range(2, n + 1)]


def _path(n):
    return [(k, k + 1) for k in range(1, n)]


def _ring(n):
    return _path(n) + [(1, n)]


def _ring_generators(n):
    out = []
    for i in range(n):
        row = ["I"] * n
        row[i] = "X"
        row[(i - 1) % n] = row[(i + 1) % n] = "Z"
        out.append("".join(row))
    return out


def _path_generators(n):
    out = []
    for i in range(n):
        row = ["I"] * n
        row[i] = "X"
        if i > 0:
            row[i - 1] = "Z"
        if i < n - 1:
            row[i + 1] = "Z"
        out.append("".join(row))
    return out


def _star_generators(n):
    first = "X" + "Z" * (n - 1)
    rest = ["Z" + "I" * (k - 2) + "X" + "I" * (n - k) for k in range(2, n + 1)]
    return [first] + rest


def _ghz6_beta():
    pairs = ["g%dg%d" % c for c in itertools.combinations(range(2, 7), 2)]
    quads = ["g%dg%dg%dg%d" % c for c in itertools.combinations(range(2, 7), 4)]
    return "g1(1+" + "+".join(pairs + quads) + ")"


@dataclass(frozen=True)
class CatalogEntry:
    number: int
    name: str
    n: int
    edges: tuple
    printed_generators: tuple  # one letter string per generator, qubit 1 leftmost
    beta: str  # first listed Bell operator, in the expression syntax of expand_beta
    q: int | None  # None where the printed expansion is inconsistent with (bound, D)
    bound: int
    D: Fraction
    settings: str
    note: str = ""

    @property
    def aliases(self) -> tuple[str, ...]:
        key = f"no{self.number}"
        return (key,) if key == self.name else (self.name, key)

    @property
    def annotated(self) -> bool:
        return bool(self.note)

    def graph(self) -> GraphSpec:
        return GraphSpec.from_edges(self.n, self.edges, self.name)


CATALOG: tuple[CatalogEntry, ...] = (
    # Table I
    CatalogEntry(2, "ghz3", 3, tuple(_star(3)), tuple(_star_generators(3)),
                 "g1(1+g2)(1+g3)", 4, 2, Fraction(2), "2-2-2"),
    CatalogEntry(3, "ghz4", 4, tuple(_star(4)), tuple(_star_generators(4)),
                 "g1(1+g2g3+g2g4+g3g4)", 4, 2, Fraction(2), "1-2-2-2"),
    CatalogEntry(4, "lc4", 4, tuple(_path(4)), tuple(_path_generators(4)),
                 "(1+g1)g2(1+g3)", 4, 2, Fraction(2), "2-2-2-1"),
    CatalogEntry(5, "ghz5", 5, tuple(_star(5)), tuple(_star_generators(5)),
                 "g1(1+g2)(1+g3)(1+g4)(1+g5)", 16, 4, Fraction(4), "2-2-2-2-2"),
    CatalogEntry(6, "y5", 5, ((1, 2), (2, 3), (2, 5), (3, 4)),
                 ("XZIII", "ZXIIZ", "IZXZI", "IIZXI", "IZIIX"),
                 "g2((1+g1+g5)(1+g3+g3g4)+(1+g1g5)g4)+(g1+g5)g3(1+g4)",
                 15, 7, Fraction(15, 7), "3-3-3-3-2",
                 "printed g2 omits Z3 although g3 carries Z2; Y-shaped graph 1-2,2-3,2-5,3-4 used"),
    CatalogEntry(7, "lc5", 5, tuple(_path(5)), tuple(_path_generators(5)),
                 "(1+g1)((1+g2)g3(1+g4)+g2g4)(1+g5)", 20, 8, Fraction(5, 2), "3-3-3-3-3"),
    CatalogEntry(8, "rc5", 5, tuple(_ring(5)), tuple(_ring_generators(5)),
                 "ODD+g1g2+g2g3+g3g4+g4g5+g5g1", 21, 9, Fraction(7, 3), "3-3-3-3-3"),
    # Table II
    CatalogEntry(9, "ghz6", 6, tuple(_star(6)), tuple(_star_generators(6)),
                 _ghz6_beta(), 16, 4, Fraction(4), "1-2-2-2-2-2"),
    CatalogEntry(10, "no10", 6, ((1, 6), (2, 6), (3, 6), (4, 5), (5, 6)),
                 ("XIIIIZ", "IXIIIZ", "IIXIIZ", "IIIXZI", "IIIZXZ", "ZZZIZX"),
                 "(1+g1)(1+g2)(1+g3)(1+g5)g6", 16, 4, Fraction(4), "2-2-2-1-2-2"),
    CatalogEntry(11, "h6", 6, ((1, 6), (2, 6), (3, 5), (4, 5), (5, 6)),
                 ("XIIIIZ", "IXIIIZ", "IIXIZI", "IIIXZI", "IIZZXI", "ZZIIIX"),
                 "g1(1+g2)(1+g3)(1+g4)(1+g5)g6", 16, 4, Fraction(4), "1-2-3-3-3-2",
                 "printed g5, g6 omit the 5-6 crossbar letters; H graph with edge 5-6 used"),
    CatalogEntry(12, "y6", 6, ((1, 2), (2, 3), (2, 6), (3, 4), (4, 5)),
                 ("XZIIII", "ZXZIIZ", "IZXZII", "IIZXZI", "IIIZXI", "IZIIIX"),
                 "(1+g1)g2(1+g3)g4(1+g5)(1+g6)", 16, 4, Fraction(4), "2-2-1-2-2-2"),
    CatalogEntry(13, "e6", 6, ((1, 2), (2, 3), (3, 4), (3, 6), (4, 5)),
                 ("XZIIII", "ZXZIII", "IZXZIZ", "IIZXZI", "IIIZXI", "IIZIIX"),
                 "(1+g3+g3g6)((1+g1)g2+g4(1+g5)+(1+g1)g2g4(1+g5))",
                 24, 8, Fraction(3), "2-3-3-3-2-2"),
    CatalogEntry(14, "lc6", 6, tuple(_path(6)), tuple(_path_generators(6)),
                 "(1+g1)g2(1+g3)(1+g4)g5(1+g6)", 16, 4, Fraction(4), "2-2-3-3-2-2"),
    CatalogEntry(15, "no15", 6, ((1, 6), (2, 4), (3, 4), (3, 6), (4, 5), (5, 6)),
                 ("XIIIIZ", "IXIZII", "IIXZIZ", "IZZXZI", "IIIZXZ", "ZIZIZX"),
                 "(g3+g5)(1+g1)(1+g2)(1+g4)(1+g6)+(1+g3g5)(g4+g2g4+g6+g1g6)",
                 40, 16, Fraction(5, 2), "3-3-3-3-3-3"),
    CatalogEntry(16, "no16", 6, ((1, 2), (2, 3), (2, 4), (3, 4), (3, 6), (4, 5)),
                 ("XZIIII", "ZXZZII", "IZXZIZ", "IZZXZI", "IIIZXI", "IIZIIX"),
                 "g3(1+g1+g2+g1g2+g4+g5+g4g5)(1+g6)+(1+g1)g2(1+g5+g6)"
                 "+g4(1+g5)(1+g1+g6)+(1+g1)g2g4(1+g5)",
                 None, 12, Fraction(3), "3-3-3-3-3-3",
                 "printed expansion has 30 terms but bound 12 with D=3 needs 36; q not checked"),
    CatalogEntry(17, "no17", 6, ((1, 2), (1, 5), (1, 6), (2, 3), (3, 4), (4, 5)),
                 ("XZIIIZ", "ZXZIII", "IZXZII", "IIZXZI", "ZIIZXI", "ZIIIIX"),
                 "(g1(1+g2g5)(g3+g4)+(1+g1)(g2+g5)(1+g3g4))(1+g6)",
                 24, 8, Fraction(3), "3-3-3-3-3-3",
                 "printed g1 omits Z5 although g5 carries Z1; 5-cycle plus pendant used"),
    CatalogEntry(18, "rc6", 6, tuple(_ring(6)), tuple(_ring_generators(6)),
                 "S-1-g1-g2-g3-g4-g5-g6-g1g3g5-g2g4g6", 55, 19, Fraction(55, 19), "3-3-3-3-3-3"),
    CatalogEntry(19, "no19", 6,
                 ((1, 2), (1, 3), (1, 6), (2, 3), (2, 5), (3, 4), (4, 5), (4, 6), (5, 6)),
                 ("XZZIIZ", "ZXZIZI", "ZZXZII", "IIZXZZ", "IZIZXZ", "ZIIZZX"),
                 "g1g4+g3g6+g1g3g4g6+g2(g4+g6+g4g6)+g5(g1+g3+g1g3)"
                 "+(g2+g5)(g3g4+g1g6+g1g3g4g6)+g2g5(g1g4(1+g3+g6)+g3g6(1+g1+g4))",
                 21, 9, Fraction(7, 3), "3-3-3-3-3-3"),
)

_BY_NAME = {alias: entry for entry in CATALOG for alias in entry.aliases}


def catalog_entry(name: str) -> CatalogEntry:
    try:
        return _BY_NAME[name.strip().lower()]
    except KeyError:
        raise GraphError(f"unknown catalog graph {name!r}") from None


def catalog_lookup(name: str) -> GraphSpec:
    return catalog_entry(name).graph()


def catalog_names() -> list[str]:
    return [entry.name for entry in CATALOG]


@dataclass(frozen=True)
class Discrepancy:
    graph: str
    generator: int  # 1-based
    printed: str
    derived: str


def validate_catalog() -> list[Discrepancy]:
    """Compare graph-derived generators against the printed table generators."""
    out = []
    for entry in CATALOG:
        for k, gen in enumerate(generators_from_graph(entry.graph())):
            derived = gen.pauli.letters()
            if derived != entry.printed_generators[k]:
                out.append(Discrepancy(entry.name, k + 1, entry.printed_generators[k], derived))
    return out


_TOKEN = re.compile(r"\s*(ODD|S|g\d+|1|[-+()])")


def expand_beta(text: str, n: int) -> dict[int, int]:
    """Expand a table expression into ``{index_mask: coefficient}``.

    Grammar: sums and differences of juxtaposed factors; a factor is ``1``,
    a generator ``gK``, a parenthesised expression, ``S`` (every group element)
    or ``ODD`` (every product of an odd number of generators).  Products of
    stabilizer elements compose their index masks by XOR.
    """
    tokens = []
    pos = 0
    text = text.replace("·", "")
    while pos < len(text.rstrip()):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        idx += 1
        return tokens[idx - 1]

    def mul(a: Counter, b: Counter) -> Counter:
        out = Counter()
        for ma, ca in a.items():
            for mb, cb in b.items():
                out[ma ^ mb] += ca * cb
        return out

    def expr() -> Counter:
        total = Counter()
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        while True:
            for mask, c in term().items():
                total[mask] += sign * c
            if peek() in ("+", "-"):
                sign = -1 if take() == "-" else 1
            else:
                return total

    def term() -> Counter:
        acc = factor()
        while peek() not in (None, "+", "-", ")"):
            acc = mul(acc, factor())
        return acc

    def factor() -> Counter:
        tok = take()
        if tok == "1":
            return Counter({0: 1})
        if tok == "S":
            return Counter({m: 1 for m in range(1 << n)})
        if tok == "ODD":
            return Counter({m: 1 for m in range(1 << n) if bin(m).count("1") % 2})
        if tok and tok.startswith("g"):
            k = int(tok[1:])
            if not 1 <= k <= n:
                raise ValueError(f"generator {tok} out of range for n={n}")
            return Counter({1 << (k - 1): 1})
        if tok == "(":
            inner = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {tok!r}")

    result = expr()
    if peek() is not None:
        raise ValueError(f"trailing input at token {peek()!r}")
    return {m: c for m, c in sorted(result.items()) if c}


def beta_masks(entry: CatalogEntry) -> list[int]:
    """Term masks of the entry's listed Bell operator (coefficients must be 0/1)."""
    coeffs = expand_beta(entry.beta, entry.n)
    bad = {m: c for m, c in coeffs.items() if c != 1}
    if bad:
        raise ValueError(f"{entry.name}: non-unit coefficients {bad}")
    return sorted(coeffs)
