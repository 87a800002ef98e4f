"""Inner-bound exploration of the four-variable entropic region in the
coordinates of the non-Ingleton simplex chart.

Points come from random dyadic joints on four variables and from random
Abelian group diagrams.  A local search hunts for Ingleton violators, and
``PhiTable`` records the largest normalized ``alpha15`` seen over a grid of
``(alpha5, ..., alpha14)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .diagrams import (Diagram, entropy_vector, expand_terminal, full_diagram,
                       joint_distribution, pairing_sign)
from .errors import InvariantViolation, SizeLimit
from .geometry.chart import alpha_coords, ning_chart, rep_diagram
from .geometry.cones import in_cone, smc
from .geometry.vectors import EntropyVector, ingleton_vectors, lambda4, pair
from .groups import (FiniteAbelianGroup, exact_entropy_vector, minimal_group_diagram,
                     prime_base, span)
from .indexing import lambda_set
from .spaces import FiniteProbabilitySpace, entropy

DYADIC = 1024
MAX_SUPPORT = 6
SHANNON_TOL = 1e-9
KEY_DIGITS = 9
VALUE_DIGITS = 12
GROUP_ORDERS = ((2,), (3,), (4,), (2, 2), (2, 4), (3, 3), (2, 2, 2), (4, 4), (2, 2, 4),
                (9,), (3, 9), (2, 2, 2, 2), (8,), (2, 8), (27,), (3, 3, 3))


@dataclass(frozen=True)
class SamplePoint:
    source: dict
    entropy_vector: EntropyVector
    alpha: tuple
    in_smc: bool
    ingleton_min: float

    @property
    def id(self) -> str:
        return self.source["id"]

    @property
    def alpha15(self) -> float:
        return float(self.alpha[14])


def _point(vec: EntropyVector, source: dict) -> SamplePoint:
    ok = bool(in_cone(vec, smc(lambda4()), tolerance=SHANNON_TOL))
    if not ok:
        raise InvariantViolation(f"entropy vector of {source['id']} is not Shannon")
    ing = min(float(pair(vec, v)) for v in ingleton_vectors())
    return SamplePoint(source, vec, alpha_coords(vec), ok, ing)


def _joint_json(joint: Mapping[tuple, Fraction]) -> list:
    return [[list(t), str(w)] for t, w in sorted(joint.items())]


def point_from_joint(joint: Mapping[tuple, object], source: dict | None = None, base=2) -> SamplePoint:
    """Sample point of the full diagram of a 4-variable joint law."""
    joint = {tuple(str(x) for x in t): Fraction(w) for t, w in joint.items() if Fraction(w)}
    d = full_diagram(joint)
    src = dict(source or {"id": "joint"})
    src.setdefault("kind", "distribution")
    src["joint"] = _joint_json(joint_distribution(d))
    src["base"] = base
    return _point(entropy_vector(d, base), src)


def point_from_group(cyclic_orders: Sequence[int], terminals: Sequence[Sequence[Sequence[int]]],
                     source: dict | None = None) -> SamplePoint:
    """Exact sample point of a minimal Abelian group diagram, in base ``p``
    for a ``p``-group."""
    g = FiniteAbelianGroup(tuple(cyclic_orders))
    gd = minimal_group_diagram(g, [span(g, gens) for gens in terminals])
    base = prime_base(g)
    src = dict(source or {"id": "group"})
    src.update(kind="group", cyclic_orders=list(g.cyclic_orders),
               terminals=[[list(x) for x in gens] for gens in terminals], base=base)
    return _point(exact_entropy_vector(gd, base), src)


def rederive(source: Mapping) -> SamplePoint:
    """Rebuild a sample point from its JSON descriptor."""
    if source["kind"] == "group":
        return point_from_group(source["cyclic_orders"], source["terminals"], dict(source))
    joint = {tuple(t): Fraction(w) for t, w in source["joint"]}
    return point_from_joint(joint, dict(source), source.get("base", 2))


def _random_dyadic_joint(rng: random.Random, sizes: Sequence[int]) -> dict[tuple, Fraction]:
    cells = list(product(*(range(k) for k in sizes)))
    k = rng.randint(1, min(len(cells), 16))
    chosen = sorted(rng.sample(range(len(cells)), k))
    cuts = sorted(rng.sample(range(1, DYADIC), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [DYADIC])]
    return {cells[c]: Fraction(n, DYADIC) for c, n in zip(chosen, parts)}


def sample_distributions(seed: int, count: int,
                         support_sizes: Sequence[int] = (2, 2, 2, 2)) -> Iterator[SamplePoint]:
    """Random dyadic joints (denominator 1024) on four variables."""
    sizes = tuple(support_sizes)
    if len(sizes) != 4 or not all(1 <= k <= MAX_SUPPORT for k in sizes):
        raise SizeLimit(f"need four support sizes in 1..{MAX_SUPPORT}")
    rng = random.Random(seed)
    for i in range(count):
        joint = _random_dyadic_joint(rng, sizes)
        yield point_from_joint(joint, {"id": f"d{seed}-{i}", "seed": seed, "index": i})


def table_points() -> list[SamplePoint]:
    """Group representatives of the fifteen chart vertices."""
    chart = ning_chart()
    out = []
    for i, rep in enumerate(chart.reps, start=1):
        if rep is None:
            continue
        orders, gens = rep
        out.append(point_from_group(orders, gens, {"id": f"a{i}"}))
    return out


def _random_subgroup_gens(rng: random.Random, orders: tuple[int, ...]) -> list[list[int]]:
    return [[rng.randrange(m) for m in orders] for _ in range(rng.randint(0, 2))]


def sample_group_points(seed: int, count: int, order_cap: int = 64,
                        include_table: bool = False) -> Iterator[SamplePoint]:
    """Random minimal group diagrams over small Abelian p-groups."""
    if order_cap > 4096:
        raise SizeLimit("order cap exceeds 4096")
    if include_table:
        yield from table_points()
    choices = [o for o in GROUP_ORDERS if math.prod(o) <= order_cap]
    if not choices:
        raise SizeLimit(f"no tabulated group has order <= {order_cap}")
    rng = random.Random(seed)
    for i in range(count):
        orders = rng.choice(choices)
        terms = [_random_subgroup_gens(rng, orders) for _ in range(4)]
        yield point_from_group(orders, terms, {"id": f"g{seed}-{i}", "seed": seed, "index": i})


# -- Ingleton-violation search ------------------------------------------------

class _FastAlpha15:
    """Float ``alpha15`` of a count vector on ``{0,1}^4`` (counts sum to 1024)."""

    def __init__(self):
        shape = lambda4()
        self.cells = list(product(range(2), repeat=4))
        cov = ning_chart().covectors[14]
        self.terms = []
        for o, c in zip(shape.objects, cov.coeffs):
            if not c:
                continue
            idx = sorted(lambda_set(o))
            keys = [sum(t[k - 1] << n for n, k in enumerate(idx)) for t in self.cells]
            self.terms.append((float(c), keys, 1 << len(idx)))

    def __call__(self, counts: Sequence[int]) -> float:
        total = 0.0
        for c, keys, width in self.terms:
            marg = [0] * width
            for k, n in zip(keys, counts):
                marg[k] += n
            h = math.log2(DYADIC) - sum(n * math.log2(n) for n in marg if n) / DYADIC
            total += c * h
        return total


def _random_counts(rng: random.Random) -> list[int]:
    cuts = sorted(rng.sample(range(1, DYADIC), 15))
    return [b - a for a, b in zip([0] + cuts, cuts + [DYADIC])]


@dataclass(frozen=True)
class SearchResult:
    best: SamplePoint
    iterations: int
    restarts: int

    @property
    def violator(self) -> bool:
        return self.best.alpha15 > 0

    def ingleton_sign(self) -> int:
        """Exact sign of ``ing(12;34)`` at the best point."""
        joint = {tuple(t): Fraction(w) for t, w in self.best.source["joint"]}
        return pairing_sign(full_diagram(joint), ingleton_vectors()[0])


def maximize_alpha15(seed: int, budget: int, starts: int = 8, patience: int = 4000) -> SearchResult:
    """Hill climbing on dyadic joints of four bits: move a random dyadic amount
    of mass between two cells, keep the move if ``alpha15`` grows, and restart
    after ``patience`` rejected moves."""
    rng = random.Random(seed)
    score = _FastAlpha15()
    seeds = [_random_counts(rng) for _ in range(starts)]
    vals = [score(c) for c in seeds]
    k = max(range(starts), key=lambda i: vals[i])
    cur, cur_val = seeds[k], vals[k]
    best, best_val = list(cur), cur_val
    stale, restarts = 0, 0
    for _ in range(budget):
        src = rng.choice([i for i, n in enumerate(cur) if n])
        dst = rng.randrange(15)
        dst += dst >= src
        amount = min(cur[src], 1 << rng.randrange(9))
        cand = list(cur)
        cand[src] -= amount
        cand[dst] += amount
        val = score(cand)
        if val > cur_val:
            cur, cur_val, stale = cand, val, 0
            if val > best_val:
                best, best_val = list(cand), val
        else:
            stale += 1
            if stale >= patience:
                cur = _random_counts(rng)
                cur_val, stale = score(cur), 0
                restarts += 1
    joint = {t: Fraction(n, DYADIC) for t, n in zip(score.cells, best) if n}
    point = point_from_joint(joint, {"id": f"s{seed}-{budget}", "kind": "search",
                                     "seed": seed, "budget": budget})
    return SearchResult(point, budget, restarts)


# -- expansion ----------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionReport:
    before: EntropyVector
    after: EntropyVector
    alpha_before: tuple
    alpha_after: tuple
    noise_entropies: tuple

    @property
    def alpha_deltas(self) -> tuple:
        return tuple(b - a for a, b in zip(self.alpha_before, self.alpha_after))

    def to_json(self) -> dict:
        return {"alpha_before": [str(x) for x in self.alpha_before],
                "alpha_after": [str(x) for x in self.alpha_after],
                "alpha_delta": [str(x) for x in self.alpha_deltas],
                "noise_entropy": [str(x) for x in self.noise_entropies]}


def expansion_sweep(diagram: Diagram, noises: Sequence[FiniteProbabilitySpace],
                    base=2, tol: float = 1e-9) -> ExpansionReport:
    """Expand each terminal ``i`` of a Lambda_4 diagram by ``noises[i-1]`` and
    check that every ``[I]`` grows by the noise entropy summed over ``I``."""
    if len(noises) != 4:
        raise ValueError("need one noise space per terminal")
    shape = lambda4()
    if diagram.shape != shape:
        raise ValueError("expansion sweep needs a Lambda_4 diagram")
    out = diagram
    for i, noise in enumerate(noises, start=1):
        if len(noise) > 1:
            out = expand_terminal(out, str(i), noise)
    before, after = entropy_vector(diagram, base), entropy_vector(out, base)
    ents = tuple(entropy(n, base) for n in noises)
    for o, x, y in zip(shape.objects, before.values, after.values):
        want = math.fsum(ents[k - 1] for k in lambda_set(o))
        if abs(float(y) - float(x) - want) > tol:
            raise InvariantViolation(f"[{o}] moved by {float(y) - float(x)}, expected {want}")
    a0, a1 = alpha_coords(before), alpha_coords(after)
    for j, (x, y) in enumerate(zip(a0, a1), start=1):
        want = ents[j - 1] if j <= 4 else 0.0
        if abs(float(y) - float(x) - want) > tol:
            raise InvariantViolation(f"alpha{j} moved by {float(y) - float(x)}, expected {want}")
    return ExpansionReport(before, after, a0, a1, ents)


# -- the Phi table ------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Bucket width for normalized coordinates, and which alphas form the key
    (1-based).  The default key is ``alpha5..alpha14``; passing
    ``range(1, 15)`` gives the diagnostic table that also resolves
    ``alpha1..alpha4``."""

    resolution: float = 0.1
    key_indices: tuple[int, ...] = tuple(range(5, 15))

    def __post_init__(self):
        object.__setattr__(self, "key_indices", tuple(self.key_indices))
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")


def normalizer(alpha: Sequence) -> float:
    """``alpha5 + ... + alpha15``: the scale used for 1-homogeneity.  It
    ignores ``alpha1..alpha4`` so that expanding terminals leaves it fixed."""
    return math.fsum(float(x) for x in alpha[4:])


@dataclass
class PhiTable:
    grid: GridSpec = field(default_factory=GridSpec)
    entries: dict[tuple[int, ...], tuple[float, str]] = field(default_factory=dict)
    witnesses: dict[str, dict] = field(default_factory=dict)
    skipped: int = 0

    def key(self, alpha: Sequence) -> tuple[tuple[int, ...], float] | None:
        s = normalizer(alpha)
        if s <= 1e-12:
            return None
        res = self.grid.resolution
        # rounding first keeps float noise from moving points across bucket
        # edges or changing the stored maximum
        k = tuple(math.floor(round(float(alpha[i - 1]) / s / res, KEY_DIGITS) + 0.5)
                  for i in self.grid.key_indices)
        return k, round(float(alpha[14]) / s, VALUE_DIGITS) + 0.0

    def add(self, point: SamplePoint) -> None:
        kv = self.key(point.alpha)
        if kv is None:
            self.skipped += 1
            return
        k, v = kv
        self._offer(k, v, point.id, point.source)

    def _offer(self, k, v, wid, source):
        old = self.entries.get(k)
        # ties go to the smaller witness id so merging is order-independent
        if old is None or v > old[0] or (v == old[0] and wid < old[1]):
            self.entries[k] = (v, wid)
            self.witnesses[wid] = source
            if old is not None and old[1] != wid and \
                    all(w != old[1] for _, w in self.entries.values()):
                del self.witnesses[old[1]]

    def merge(self, other: "PhiTable") -> "PhiTable":
        if other.grid != self.grid:
            raise ValueError("tables on different grids")
        out = PhiTable(self.grid, dict(self.entries), dict(self.witnesses),
                       self.skipped + other.skipped)
        for k, (v, wid) in other.entries.items():
            out._offer(k, v, wid, other.witnesses[wid])
        out.witnesses = {w: out.witnesses[w] for _, w in out.entries.values()}
        return out

    def value(self, k) -> float | None:
        e = self.entries.get(tuple(k))
        return None if e is None else e[0]

    def origin_value(self) -> float | None:
        return self.value((0,) * len(self.grid.key_indices))

    def header(self) -> list[str]:
        return [f"bucket_alpha{i}" for i in self.grid.key_indices] + ["max_alpha15", "witness_id"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for k in sorted(self.entries):
            v, wid = self.entries[k]
            w.writerow(list(k) + [repr(v), wid])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, grid: GridSpec | None = None) -> "PhiTable":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        idx = tuple(int(h[len("bucket_alpha"):]) for h in header[:-2])
        grid = grid or GridSpec(key_indices=idx)
        out = cls(grid)
        for r in body:
            out.entries[tuple(int(x) for x in r[:-2])] = (float(r[-2]), r[-1])
        return out

    def witnesses_json(self) -> str:
        return json.dumps({k: self.witnesses[k] for k in sorted(self.witnesses)},
                          indent=1, sort_keys=True)


def phi_inner_bound(dataset: Iterable[SamplePoint], grid: GridSpec | None = None) -> PhiTable:
    """Largest ``alpha15 / s`` per bucket of ``alpha_k / s`` over the dataset,
    with ``s`` from :func:`normalizer`."""
    table = PhiTable(grid or GridSpec())
    for p in dataset:
        table.add(p)
    return table
