"""Finite Abelian groups, diagrams of subgroups, and the homogeneous
diagrams of cosets they define."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from typing import Mapping, Sequence

from .diagrams import Diagram
from .errors import ShapeMismatch, SizeLimit
from .geometry.vectors import EntropyVector
from .indexing import IndexingCategory, lambda_n, lambda_set
from .spaces import FiniteProbabilitySpace

MAX_ORDER = 4096
MAX_GROUP_N = 6

Element = tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The product of cyclic groups ``Z_{m_1} x ... x Z_{m_k}``."""

    cyclic_orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cyclic_orders", tuple(int(m) for m in self.cyclic_orders))
        if any(m < 2 for m in self.cyclic_orders):
            raise ValueError("cyclic factors must have order at least 2")
        if self.order > MAX_ORDER:
            raise SizeLimit(f"group order {self.order} exceeds {MAX_ORDER}")

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @cached_property
    def elements(self) -> list[Element]:
        return list(product(*(range(m) for m in self.cyclic_orders)))

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.cyclic_orders))

    def neg(self, a: Element) -> Element:
        return tuple(-x % m for x, m in zip(a, self.cyclic_orders))

    def element(self, values: Sequence[int]) -> Element:
        if len(values) != self.rank:
            raise ValueError(f"element {values} has the wrong length for rank {self.rank}")
        return tuple(int(v) % m for v, m in zip(values, self.cyclic_orders))

    def chi(self, k: int) -> Element:
        """The k-th standard generator (1-based)."""
        return tuple(int(i == k - 1) for i in range(self.rank))


def elementary(p: int, k: int) -> FiniteAbelianGroup:
    return FiniteAbelianGroup((p,) * k)


@dataclass(frozen=True)
class Subgroup:
    group: FiniteAbelianGroup
    generators: tuple[Element, ...]
    elements: frozenset[Element]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, (), self.elements & other.elements)


def span(group: FiniteAbelianGroup, generators: Sequence[Sequence[int]] = ()) -> Subgroup:
    gens = tuple(group.element(g) for g in generators)
    seen = {group.zero}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = group.add(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return Subgroup(group, gens, frozenset(seen))


def whole(group: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(group, tuple(group.chi(k) for k in range(1, group.rank + 1)),
                    frozenset(group.elements))


def trivial(group: FiniteAbelianGroup) -> Subgroup:
    return span(group, ())


@dataclass(frozen=True)
class GroupDiagram:
    shape: IndexingCategory
    ambient: FiniteAbelianGroup
    subgroup_at: Mapping[str, Subgroup]
    terminals: tuple[Subgroup, ...] = ()

    def __post_init__(self):
        for o in self.shape.objects:
            if o not in self.subgroup_at:
                raise ShapeMismatch(f"no subgroup at {o!r}")
        for i, j in self.shape.arrows():
            if not self.subgroup_at[i] <= self.subgroup_at[j]:
                raise ShapeMismatch(f"H_{i} is not contained in H_{j}")


def minimal_group_diagram(group: FiniteAbelianGroup, terminals: Sequence[Subgroup]) -> GroupDiagram:
    """Lambda_n diagram with ``H_I`` the intersection of the terminal ``H_i``."""
    n = len(terminals)
    if not 1 <= n <= MAX_GROUP_N:
        raise SizeLimit(f"need 1 <= n <= {MAX_GROUP_N} terminal subgroups")
    shape = lambda_n(n)
    at = {o: reduce(lambda a, b: a & b, (terminals[k - 1] for k in sorted(lambda_set(o))))
          for o in shape.objects}
    return GroupDiagram(shape, group, at, tuple(terminals))


def _coset_labels(group: FiniteAbelianGroup, sub: Subgroup) -> dict[Element, str]:
    out: dict[Element, str] = {}
    for g in group.elements:
        if g in out:
            continue
        name = ".".join(map(str, g))
        for h in sub.elements:
            out[group.add(g, h)] = name
    return out


def realize(gd: GroupDiagram) -> Diagram:
    """Cosets ``G/H_i`` with uniform weights; reductions are coset coarsenings."""
    g = gd.ambient
    if g.order > MAX_ORDER:
        raise SizeLimit(f"group order {g.order} exceeds {MAX_ORDER}")
    names = {x: ".".join(map(str, x)) for x in g.elements}
    underlying = FiniteProbabilitySpace(tuple((names[x], Fraction(1, g.order)) for x in g.elements))
    labelings = {}
    for o in gd.shape.objects:
        cos = _coset_labels(g, gd.subgroup_at[o])
        labelings[o] = {names[x]: cos[x] for x in g.elements}
    return Diagram.from_initial(gd.shape, underlying, labelings)


def _exact_log_int(n: int, base) -> Fraction | None:
    if base == math.e:
        return None
    base = Fraction(base)
    k, x = 0, Fraction(n)
    while x > 1 and (x / base).denominator == 1:
        x /= base
        k += 1
    return Fraction(k) if x == 1 else None


def exact_entropy_vector(gd: GroupDiagram, base=2) -> EntropyVector:
    """Coordinate at ``I`` is ``log_base |G| / |H_I|``; exact when every index
    is a power of ``base``."""
    idx = [gd.ambient.order // gd.subgroup_at[o].order for o in gd.shape.objects]
    exact = [_exact_log_int(m, base) for m in idx]
    if all(x is not None for x in exact):
        return EntropyVector(gd.shape, tuple(exact))
    return EntropyVector(gd.shape, tuple(math.log(m) / math.log(base) for m in idx))


def prime_base(group: FiniteAbelianGroup) -> int:
    """The unique prime dividing the group order."""
    primes = set()
    for m in group.cyclic_orders:
        q = 2
        while m > 1:
            while m % q == 0:
                primes.add(q)
                m //= q
            q += 1
    if len(primes) != 1:
        raise ValueError(f"group order {group.order} is not a prime power")
    return primes.pop()


def group_diagram_from_json(data: dict) -> GroupDiagram:
    g = FiniteAbelianGroup(tuple(data["cyclic_orders"]))
    return minimal_group_diagram(g, [span(g, gens) for gens in data["terminals"]])


def group_diagram_to_json(gd: GroupDiagram) -> dict:
    if not gd.terminals:
        raise ValueError("only minimal Lambda_n group diagrams have a JSON form")
    return {"cyclic_orders": list(gd.ambient.cyclic_orders),
            "terminals": [[list(x) for x in h.generators] for h in gd.terminals]}


def abelian_groups(order_cap: int) -> list[FiniteAbelianGroup]:
    """One group per isomorphism class of order ``<= order_cap``, in
    invariant-factor form ``m_1 | m_2 | ...``, ordered by order then factors."""
    if order_cap > MAX_ORDER:
        raise SizeLimit(f"order cap {order_cap} exceeds {MAX_ORDER}")
    out = []

    def grow(prefix: tuple[int, ...], prod: int):
        if prefix:
            out.append(prefix)
        last = prefix[-1] if prefix else 1
        m = 2 if not prefix else last
        while prod * m <= order_cap:
            if m % last == 0:
                grow(prefix + (m,), prod * m)
            m += 1

    grow((), 1)
    out.sort(key=lambda t: (math.prod(t), t))
    return [FiniteAbelianGroup(t) for t in out]


def subgroups(group: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, built by adjoining one generator at a time."""
    seen = {frozenset([group.zero]): trivial(group)}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for h in frontier:
            for g in group.elements:
                if g in h.elements:
                    continue
                k = span(group, h.generators + (g,))
                if k.elements not in seen:
                    seen[k.elements] = k
                    nxt.append(k)
        frontier = nxt
    return sorted(seen.values(), key=lambda h: (h.order, sorted(h.elements)))


def _integer_root(x: int, k: int) -> int | None:
    r = round(x ** (1 / k))
    for c in (r - 1, r, r + 1):
        if c >= 1 and c ** k == x:
            return c
    return None


def find_group_realization(ray: EntropyVector, order_cap: int = 64
                           ) -> tuple[GroupDiagram, int] | None:
    """A minimal Abelian group diagram over Lambda_n whose entropy vector in
    some integer base ``q`` equals the integer ray exactly, i.e.
    ``|G| / |H_I| = q ** ray[I]``.  Returns ``(diagram, q)`` or ``None``."""
    shape = ray.shape
    n = max(len(o) for o in shape.objects)
    target = [int(x) for x in ray.values]
    if any(Fraction(x) != t for x, t in zip(ray.values, target)) or min(target) < 0:
        raise ValueError("expected a nonnegative integer ray")
    pos = [k for k, t in enumerate(target) if t > 0]
    if not pos:
        return None
    sets = [lambda_set(o) for o in shape.objects]
    single = [target[shape.index(str(k))] for k in range(1, n + 1)]
    for g in abelian_groups(order_cap):
        subs = subgroups(g)
        by_index: dict[int, list[Subgroup]] = {}
        for h in subs:
            by_index.setdefault(g.order // h.order, []).append(h)
        for q in range(2, g.order + 1):
            if any(q ** t > g.order for t in target):
                break
            # terminal k must have index q ** ray[{k}] in G
            choices = [by_index.get(q ** t, []) for t in single]
            if not all(choices):
                continue
            for terms in product(*choices):
                ok = True
                for s, t in zip(sets, target):
                    inter = reduce(lambda a, b: a & b,
                                   (terms[k - 1].elements for k in s))
                    if len(inter) * q ** t != g.order:
                        ok = False
                        break
                if ok:
                    return minimal_group_diagram(g, terms), q
    return None
