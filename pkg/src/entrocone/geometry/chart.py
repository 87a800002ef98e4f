"""The base simplex of the non-Ingleton cone: fifteen vertices, their dual
covectors, Abelian group representatives, and an exact verifier.

Only one vertex per D2-orbit is tabulated; the rest are images under
transposing 1,2 and/or 3,4.  Two tabulated rows do not survive verification
as printed (the a3 triple coordinates and the a5 representative).  For those
families the vertex is re-derived from its dual face and orbit size, searching
over single-coin representatives, and flagged ``reconciled``.  The printed
data is kept alongside for audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from ..groups import (FiniteAbelianGroup, GroupDiagram, exact_entropy_vector,
                      minimal_group_diagram, prime_base, span)
from .cones import in_cone, is_extremal, non_ingleton_cone, smc
from .vectors import (D2, EntropyVector, InfoVector, info_cmi, info_cond, info_mi,
                      ingleton_vectors, lambda4, lambda4_vector, pair, s4_act)

# (cyclic orders, generator lists of H_1..H_4)
Rep = tuple[tuple[int, ...], tuple[tuple[tuple[int, ...], ...], ...]]

Z2_TRIVIAL: tuple = ()
Z2_WHOLE: tuple = ((1,),)


def _dual(label: str) -> InfoVector:
    s = lambda4()
    return {
        "[1|234]": lambda: info_cond(s, 1, 234),
        "[3|124]": lambda: info_cond(s, 3, 124),
        "[1:3|2]": lambda: info_cmi(s, 1, 3, 2),
        "[1:2|4]": lambda: info_cmi(s, 1, 2, 4),
        "[3:4]": lambda: info_mi(s, 3, 4),
        "[3:4|1]": lambda: info_cmi(s, 3, 4, 1),
        "[1:2|34]": lambda: info_cmi(s, 1, 2, 34),
        "-ing(12;34)": lambda: -ingleton_vectors()[0],
    }[label]().named(label)


@dataclass(frozen=True)
class PrintedRow:
    index: int
    coords: tuple[int, ...]
    dual: str
    rep: Rep | None
    orbit: tuple[int, ...]


PRINTED_ROWS = (
    PrintedRow(1, (1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1), "[1|234]",
               ((2,), (Z2_TRIVIAL, Z2_WHOLE, Z2_WHOLE, Z2_WHOLE)), (1, 2)),
    PrintedRow(3, (0, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1), "[3|124]",
               ((2,), (Z2_WHOLE, Z2_TRIVIAL, Z2_WHOLE, Z2_WHOLE)), (3, 4)),
    PrintedRow(5, (1, 1, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1), "[1:3|2]",
               ((2,), (Z2_TRIVIAL, Z2_TRIVIAL, Z2_WHOLE, Z2_WHOLE)), (5, 6, 7, 8)),
    PrintedRow(9, (1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1), "[1:2|4]",
               ((2,), (Z2_TRIVIAL, Z2_TRIVIAL, Z2_TRIVIAL, Z2_WHOLE)), (9, 10)),
    PrintedRow(11, (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1), "[3:4]",
               ((2,), (Z2_TRIVIAL, Z2_TRIVIAL, Z2_TRIVIAL, Z2_TRIVIAL)), (11,)),
    PrintedRow(12, (1, 0, 1, 1, 1, 2, 2, 1, 1, 2, 2, 2, 2, 2, 2), "[3:4|1]",
               ((2, 2), (((1, 0),), ((1, 0), (0, 1)), ((0, 1),), ((1, 1),))), (12, 13)),
    PrintedRow(14, (1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3), "[1:2|34]",
               ((3, 3, 3), (((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1)),
                            ((0, 0, 1), (1, 0, 0)), ((1, 1, 0), (0, 1, 1)))), (14,)),
    PrintedRow(15, (2, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4), "-ing(12;34)", None, (15,)),
)


def rep_diagram(rep: Rep) -> GroupDiagram:
    orders, gens = rep
    g = FiniteAbelianGroup(orders)
    return minimal_group_diagram(g, [span(g, h) for h in gens])


def rep_vector(rep: Rep) -> EntropyVector:
    gd = rep_diagram(rep)
    return exact_entropy_vector(gd, prime_base(gd.ambient))


def permute_rep(perm, rep: Rep) -> Rep:
    """Relabel variables: the new ``H_{perm(k)}`` is the old ``H_k``."""
    orders, gens = rep
    out = [None] * 4
    for k in range(4):
        out[perm[k] - 1] = gens[k]
    return orders, tuple(out)


def d2_orbit(v: EntropyVector) -> list[tuple]:
    """Distinct images under D2, in the fixed order id, (12), (34), (12)(34)."""
    seen: list[tuple] = []
    for g in D2:
        img = s4_act(g, v).values
        if img not in seen:
            seen.append(img)
    return seen


def _orbit_elements(v: EntropyVector) -> list[tuple]:
    """First D2 element producing each new image."""
    seen, elems = [], []
    for g in D2:
        img = s4_act(g, v).values
        if img not in seen:
            seen.append(img)
            elems.append(g)
    return elems


def reconcile(row: PrintedRow, face_covectors: list[InfoVector]) -> tuple[EntropyVector, Rep]:
    """Re-derive an orbit representative from its dual face label.

    Searches single-coin representatives (Z2; H_1..H_4 each trivial or whole)
    for the unique vector with ``<a, alpha_row> = 1``, vanishing on the
    Ingleton face and on the other rows' covectors, and with a D2-orbit of the
    tabulated size.
    """
    alpha = _dual(row.dual)
    ing = ingleton_vectors()[0]
    found = []
    for choice in product((Z2_TRIVIAL, Z2_WHOLE), repeat=4):
        rep: Rep = ((2,), tuple(choice))
        a = rep_vector(rep)
        if pair(a, alpha) != 1 or pair(a, ing) != 0:
            continue
        if any(pair(a, c) != 0 for c in face_covectors):
            continue
        if len(d2_orbit(a)) != len(row.orbit):
            continue
        found.append((a, rep))
    if len(found) != 1:
        raise RuntimeError(f"reconciliation of a{row.index} found {len(found)} candidates")
    return found[0]


@dataclass(frozen=True)
class SimplexChart:
    vertices: tuple[EntropyVector, ...]
    covectors: tuple[InfoVector, ...]
    origin: tuple[str, ...]
    reps: tuple[Rep | None, ...]
    printed: dict = field(default_factory=dict, compare=False)

    def row(self, i: int):
        return self.vertices[i - 1], self.covectors[i - 1], self.origin[i - 1], self.reps[i - 1]


def _self_consistent(row: PrintedRow) -> bool:
    """A tabulated row is kept verbatim only if it is Shannon, sits on the
    Ingleton face, and matches its own representative."""
    a = lambda4_vector(row.coords)
    if not in_cone(a, smc(lambda4())):
        return False
    if row.rep is None:
        return True
    return pair(a, ingleton_vectors()[0]) == 0 and rep_vector(row.rep) == a


@lru_cache(maxsize=2)
def ning_chart(verbatim: bool = False) -> SimplexChart:
    """The fifteen vertices and covectors.  With ``verbatim`` every row is
    taken as printed, even where it fails verification."""
    rows = {r.index: r for r in PRINTED_ROWS}
    good = [r for r in PRINTED_ROWS if verbatim or _self_consistent(r)]
    # covectors of rows kept verbatim (with their orbits) pin down the rest
    good_covectors = []
    for r in good:
        alpha = _dual(r.dual)
        for g in _orbit_elements(lambda4_vector(r.coords)):
            good_covectors.append(s4_act(g, alpha))
    vertices: dict[int, EntropyVector] = {}
    covectors: dict[int, InfoVector] = {}
    origin: dict[int, str] = {}
    reps: dict[int, Rep | None] = {}
    for r in PRINTED_ROWS:
        if r in good:
            a, rep, tag = lambda4_vector(r.coords), r.rep, "tabulated"
        else:
            others = [c for c in good_covectors]
            a, rep = reconcile(r, others)
            tag = "reconciled"
        alpha = _dual(r.dual)
        elems = _orbit_elements(a)
        if len(elems) != len(r.orbit) and not verbatim:
            raise RuntimeError(f"a{r.index}: D2-orbit size {len(elems)} != {len(r.orbit)}")
        for k, idx in enumerate(r.orbit):
            g = elems[k] if k < len(elems) else D2[k]
            vertices[idx] = s4_act(g, a)
            covectors[idx] = s4_act(g, alpha).named(_perm_name(g, r.dual))
            origin[idx] = tag if k == 0 else f"{tag}-orbit"
            reps[idx] = None if rep is None else permute_rep(g, rep)
    printed = {r.index: (lambda4_vector(r.coords), r.rep) for r in rows.values()}
    return SimplexChart(tuple(vertices[i] for i in range(1, 16)),
                        tuple(covectors[i] for i in range(1, 16)),
                        tuple(origin[i] for i in range(1, 16)),
                        tuple(reps[i] for i in range(1, 16)),
                        printed)


def _perm_name(perm, label: str) -> str:
    table = {str(k): str(perm[k - 1]) for k in range(1, 5)}
    out = []
    buf = ""
    # permute each maximal run of digits as a subset
    for ch in label + " ":
        if ch.isdigit():
            buf += ch
            continue
        if buf:
            out.append("".join(sorted(table[c] for c in buf)))
            buf = ""
        out.append(ch)
    return "".join(out).rstrip()


def alpha_coords(f: EntropyVector, chart: SimplexChart | None = None) -> tuple:
    """Coefficients of ``f`` in the vertex basis (via the dual covectors)."""
    chart = chart or ning_chart()
    return tuple(pair(f, alpha) for alpha in chart.covectors)


def from_alpha(alpha, chart: SimplexChart | None = None) -> EntropyVector:
    chart = chart or ning_chart()
    out = EntropyVector.zero(lambda4())
    for x, a in zip(alpha, chart.vertices):
        out = out + a * x
    return out


def in_ning(f: EntropyVector, chart: SimplexChart | None = None, tolerance=0) -> bool:
    return all(x >= -tolerance for x in alpha_coords(f, chart))


@dataclass(frozen=True)
class CheckResult:
    row: int
    check: int
    passed: bool
    detail: str = ""


CHECK_NAMES = {1: "duality", 2: "shannon", 3: "ingleton-face", 4: "representative",
               5: "extremal"}


@dataclass
class ChartReport:
    results: list[CheckResult]
    notes: list[str]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def lines(self) -> list[str]:
        out = [f"a{r.row:<2} {CHECK_NAMES[r.check]:<14} {'PASS' if r.passed else 'FAIL'}"
               + (f"  {r.detail}" if r.detail else "") for r in self.results]
        return out + [f"note: {n}" for n in self.notes]


def expanded(v: InfoVector) -> str:
    terms = []
    for obj, c in zip(v.shape.objects, v.coeffs):
        if c:
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            terms.append(f"{sign}{mag}[{obj}]")
    return "".join(terms).lstrip("+") or "0"


def verify_chart(chart: SimplexChart | None = None, rows=None) -> ChartReport:
    """Exact checks per row: duality with every covector, Shannon membership,
    Ingleton face, group representative, extremality in the non-Ingleton cone."""
    chart = chart or ning_chart()
    rows = list(rows or range(1, 16))
    shannon = smc(lambda4())
    ning = non_ingleton_cone()
    ing = ingleton_vectors()[0]
    results = []
    for i in rows:
        a, alpha, tag, rep = chart.row(i)
        bad = [(j + 1, pair(a, chart.covectors[j])) for j in range(15)
               if pair(a, chart.covectors[j]) != (1 if j + 1 == i else 0)]
        results.append(CheckResult(i, 1, not bad, "" if not bad else
                                   f"<a{i}, alpha_j> wrong at {bad}"))
        m = in_cone(a, shannon)
        results.append(CheckResult(i, 2, m.member, "" if m.member else
                                   f"{expanded(m.witness)} = {m.value} < 0"))
        expect = -1 if i == 15 else 0
        val = pair(a, ing)
        results.append(CheckResult(i, 3, val == expect, "" if val == expect else
                                   f"ing(12;34) = {val}, expected {expect}"))
        if i <= 14:
            if rep is None:
                results.append(CheckResult(i, 4, False, "no representative"))
            else:
                got = rep_vector(rep)
                results.append(CheckResult(i, 4, got == a, "" if got == a else
                                           f"representative gives {got}"))
        if not in_cone(a, ning):
            results.append(CheckResult(i, 5, False, "not in the non-Ingleton cone"))
        else:
            ok = is_extremal(a, ning)
            results.append(CheckResult(i, 5, ok, "" if ok else "active rank below 14"))
    notes = []
    for r in PRINTED_ROWS:
        members = [k for k in r.orbit if k in rows]
        if members and chart.origin[r.index - 1].startswith("reconciled"):
            old, _ = chart.printed[r.index]
            new = chart.vertices[r.index - 1]
            notes.append(f"a{r.index}-family reconciled: printed {old} -> {new}, "
                         f"representative {chart.reps[r.index - 1]}")
    return ChartReport(results, notes)


def printed_row_certificate(index: int) -> tuple[InfoVector, object] | None:
    """Most violated Shannon generator for a printed row, if any."""
    coords = next(r.coords for r in PRINTED_ROWS if r.index == index)
    m = in_cone(lambda4_vector(coords), smc(lambda4()))
    return None if m.member else (m.witness, m.value)
