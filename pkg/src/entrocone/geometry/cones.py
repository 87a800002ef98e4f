"""Polyhedral cones given by inequality generators: membership, rank
certificates and exact double-description enumeration of extremal rays."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from ..errors import NotInCone, SizeLimit, ShapeMismatch
from ..indexing import IndexingCategory
from .vectors import (EntropyVector, InfoVector, ingleton_vectors, lambda4, pair, s4_act,
                      shannon_generators, symmetric_group)

MAX_DD_DIM = 31
MAX_DD_ROWS = 2000


@dataclass(frozen=True)
class ConeSpec:
    """The cone ``{f : <f, v> >= 0 for every generator v}``."""

    shape: IndexingCategory
    generators: tuple[InfoVector, ...]
    name: str = ""

    def __post_init__(self):
        seen = {}
        for v in self.generators:
            if v.shape != self.shape:
                raise ShapeMismatch("generator on a different shape")
            if not v.is_zero() and v.coeffs not in seen:
                seen[v.coeffs] = v
        object.__setattr__(self, "generators", tuple(seen.values()))

    def __len__(self):
        return len(self.generators)

    def __or__(self, other: "ConeSpec") -> "ConeSpec":
        return ConeSpec(self.shape, self.generators + other.generators,
                        f"{self.name}+{other.name}")


@lru_cache(maxsize=None)
def smc(shape: IndexingCategory) -> ConeSpec:
    return ConeSpec(shape, tuple(shannon_generators(shape)), "smc")


@lru_cache(maxsize=None)
def abc() -> ConeSpec:
    """Shannon plus the six Ingleton inequalities on Lambda_4."""
    return ConeSpec(lambda4(), tuple(shannon_generators(lambda4()) + ingleton_vectors()), "abc")


@lru_cache(maxsize=None)
def non_ingleton_cone() -> ConeSpec:
    """Shannon plus the reversed Ingleton inequality ``-ing(12;34) >= 0``."""
    ing = ingleton_vectors()[0]
    return ConeSpec(lambda4(), tuple(shannon_generators(lambda4())) + (-ing,), "ning")


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: InfoVector | None = None
    value: object = None

    def __bool__(self):
        return self.member


def in_cone(f: EntropyVector, spec: ConeSpec, tolerance=0) -> Membership:
    """Every generator pairs to at least ``-tolerance``; on failure the most
    violated generator is returned as the witness."""
    worst, worst_val = None, None
    for v in spec.generators:
        x = pair(f, v)
        if worst_val is None or x < worst_val:
            worst, worst_val = v, x
    if worst_val is None or worst_val >= -tolerance:
        return Membership(True)
    return Membership(False, worst, worst_val)


def primitive(values: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign preserved)."""
    fr = [Fraction(x) for x in values]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank by fraction-free elimination on Python integers."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncol = len(work[0])
    rank = 0
    for col in range(ncol):
        piv = next((k for k in range(rank, len(work)) if work[k][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        p = work[rank]
        for k in range(rank + 1, len(work)):
            r = work[k]
            f = r[col]
            if f:
                new = [p[c] * f - r[c] * p[col] for c in range(ncol)]
                g = 0
                for x in new:
                    g = gcd(g, x)
                work[k] = [x // g for x in new] if g else new
        rank += 1
        if rank == len(work):
            break
    return rank


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _invert(rows: list[tuple[int, ...]]) -> list[list[Fraction]]:
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(k for k in range(col, n) if m[k][col])
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for k in range(n):
            if k != col and m[k][col]:
                f = m[k][col]
                m[k] = [a - f * b for a, b in zip(m[k], m[col])]
    return [r[n:] for r in m]


def _ordered_rows(spec: ConeSpec) -> list[tuple[int, ...]]:
    rows = {}
    for v in spec.generators:
        r = primitive(v.coeffs)
        rows.setdefault(r, None)
    # fewest nonzeros first, ties by first appearance
    return sorted(rows, key=lambda r: sum(1 for x in r if x))


def extremal_ray_ints(spec: ConeSpec) -> list[tuple[int, ...]]:
    """Double description: insert inequalities one at a time, combining
    adjacent rays across each new hyperplane.  Adjacency is decided by the
    rank of the inequalities active at both rays."""
    d = len(spec.shape)
    if d > MAX_DD_DIM:
        raise SizeLimit(f"dimension {d} exceeds {MAX_DD_DIM}")
    rows = _ordered_rows(spec)
    if len(rows) > MAX_DD_ROWS:
        raise SizeLimit(f"{len(rows)} inequalities exceeds {MAX_DD_ROWS}")
    # initial simplicial cone from the first d independent rows
    basis: list[int] = []
    for k, r in enumerate(rows):
        if integer_rank([rows[b] for b in basis] + [r]) > len(basis):
            basis.append(k)
            if len(basis) == d:
                break
    if len(basis) < d:
        raise ValueError("cone is not pointed: the inequalities have rank below the dimension")
    inv = _invert([rows[b] for b in basis])
    order = basis + [k for k in range(len(rows)) if k not in set(basis)]
    processed: list[tuple[int, ...]] = [rows[b] for b in basis]
    rays: list[tuple[tuple[int, ...], int]] = []
    for col in range(d):
        vec = primitive([inv[r][col] for r in range(d)])
        zmask = sum(1 << m for m in range(d) if m != col)
        rays.append((vec, zmask))

    rank_cache: dict[int, int] = {}

    def adjacent(mask: int) -> bool:
        if mask.bit_count() < d - 2:
            return False
        if mask not in rank_cache:
            rank_cache[mask] = integer_rank([processed[m] for m in range(len(processed))
                                             if mask >> m & 1])
        return rank_cache[mask] == d - 2

    for k in order[d:]:
        a = rows[k]
        bit = 1 << len(processed)
        processed.append(a)
        pos, zero, neg = [], [], []
        for vec, z in rays:
            s = _dot(a, vec)
            if s > 0:
                pos.append((vec, z, s))
            elif s < 0:
                neg.append((vec, z, s))
            else:
                zero.append((vec, z | bit))
        if not neg:
            rays = [(v, z) for v, z, _ in pos] + zero
            continue
        new = []
        for pv, pz, ps in pos:
            for nv, nz, ns in neg:
                common = pz & nz
                if adjacent(common):
                    vec = primitive([ps * y - ns * x for x, y in zip(pv, nv)])
                    new.append((vec, common | bit))
        rays = [(v, z) for v, z, _ in pos] + zero + new
    return sorted({v for v, _ in rays}, key=lambda v: (sum(v), v))


def extremal_rays(spec: ConeSpec) -> list[EntropyVector]:
    """All extremal rays as primitive integer vectors, deterministically ordered."""
    return [EntropyVector(spec.shape, tuple(Fraction(x) for x in v))
            for v in extremal_ray_ints(spec)]


def active_rank(ray: EntropyVector, spec: ConeSpec) -> int:
    active = [primitive(v.coeffs) for v in spec.generators if pair(ray, v) == 0]
    return integer_rank(active)


def is_extremal(ray: EntropyVector, spec: ConeSpec) -> bool:
    """True iff the generators vanishing at ``ray`` have rank ``dim - 1``."""
    m = in_cone(ray, spec)
    if not m:
        raise NotInCone(f"ray violates {m.witness} (value {m.value})")
    return active_rank(ray, spec) == len(spec.shape) - 1


def canonical_form(ray: EntropyVector, group) -> tuple:
    return min(s4_act(g, ray).values for g in group)


def orbits(rays: Sequence[EntropyVector], group=None) -> list[list[EntropyVector]]:
    """Partition rays into orbits of a permutation group (default: full S_n)."""
    if group is None:
        n = max(len(o) for o in rays[0].shape.objects) if rays else 1
        group = symmetric_group(n)
    classes: dict[tuple, list[EntropyVector]] = {}
    for r in rays:
        classes.setdefault(canonical_form(r, group), []).append(r)
    return sorted(classes.values(), key=lambda c: (len(c), min(x.values for x in c)))
