"""Indexing categories: finite posets in which every pair of objects has a
minimal common ancestor.

An arrow ``i -> j`` means ``i`` is an ancestor of ``j`` (the space at ``i``
reduces to the space at ``j``).  Ancestry is stored as one bitmask of
descendants per object, so every query is a couple of integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import NoInitialObject, NoMinimalCommonAncestor, NotAPoset, SizeLimit

MAX_OBJECTS = 255
MAX_LAMBDA = 8


@dataclass(frozen=True)
class Fan:
    apex: str
    left: str
    right: str


@dataclass(frozen=True, eq=False)
class IndexingCategory:
    objects: tuple[str, ...]
    # descendants[k] has bit m set iff objects[k] is an ancestor of objects[m]
    descendants: tuple[int, ...]
    _index: dict = field(repr=False, compare=False)
    _mca: dict = field(repr=False, compare=False)

    def __eq__(self, other):
        if not isinstance(other, IndexingCategory):
            return NotImplemented
        return self.objects == other.objects and self.descendants == other.descendants

    def __hash__(self):
        return hash((self.objects, self.descendants))

    def __len__(self):
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def __contains__(self, obj):
        return obj in self._index

    def index(self, obj: str) -> int:
        return self._index[obj]

    def is_ancestor(self, i: str, j: str) -> bool:
        return bool(self.descendants[self._index[i]] >> self._index[j] & 1)

    @property
    def initial(self) -> str:
        return self._mca["__initial__"]

    def descendants_of(self, i: str) -> list[str]:
        mask = self.descendants[self._index[i]]
        return [o for k, o in enumerate(self.objects) if mask >> k & 1]

    def arrows(self) -> list[tuple[str, str]]:
        """Covering relations (the Hasse diagram), in object order."""
        out = []
        for a, i in enumerate(self.objects):
            below = self.descendants[a] & ~(1 << a)
            for b, j in enumerate(self.objects):
                if not below >> b & 1:
                    continue
                # j is covered by i if no k strictly between them
                between = below & ~(1 << b)
                if not any(between >> k & 1 and self.descendants[k] >> b & 1
                           for k in range(len(self.objects))):
                    out.append((i, j))
        return out

    def ancestor_pairs(self) -> list[tuple[str, str]]:
        """All pairs ``(i, j)`` with ``i`` a proper ancestor of ``j``."""
        return [(i, j) for a, i in enumerate(self.objects)
                for b, j in enumerate(self.objects)
                if a != b and self.descendants[a] >> b & 1]

    def to_json(self) -> dict:
        return {"objects": list(self.objects),
                "arrows": [list(a) for a in self.arrows()]}


def _build(objects, desc) -> IndexingCategory:
    index = {o: k for k, o in enumerate(objects)}
    cat = IndexingCategory(tuple(objects), tuple(desc), index, {})
    n = len(objects)
    if n == 0:
        raise NoInitialObject("empty category has no initial object")
    full = (1 << n) - 1
    initial = [objects[k] for k in range(n) if desc[k] == full]
    if not initial:
        raise NoInitialObject("no object is an ancestor of every object")
    cat._mca["__initial__"] = initial[0]
    anc = [sum(1 << k for k in range(n) if desc[k] >> m & 1) for m in range(n)]
    size = [bin(d).count("1") for d in desc]
    for a in range(n):
        for b in range(a, n):
            common = anc[a] & anc[b]
            # the minimal common ancestor, if any, has the fewest descendants
            best = min((k for k in range(n) if common >> k & 1), key=size.__getitem__)
            if common & ~anc[best]:
                raise NoMinimalCommonAncestor(objects[a], objects[b])
            cat._mca[(objects[a], objects[b])] = objects[best]
            cat._mca[(objects[b], objects[a])] = objects[best]
    return cat


def validate(objects, ancestry) -> IndexingCategory:
    """Validate a relation given as a boolean matrix ``ancestry[a][b]``
    (``objects[a]`` is an ancestor of ``objects[b]``).  Reflexivity is added.
    """
    objects = list(objects)
    n = len(objects)
    if n > MAX_OBJECTS:
        raise SizeLimit(f"{n} objects exceeds the cap of {MAX_OBJECTS}")
    if len(set(objects)) != n:
        raise ValueError("object identifiers must be distinct")
    desc = []
    for a in range(n):
        mask = 1 << a
        for b in range(n):
            if ancestry[a][b]:
                mask |= 1 << b
        desc.append(mask)
    for a, b in combinations(range(n), 2):
        if desc[a] >> b & 1 and desc[b] >> a & 1:
            raise NotAPoset("antisymmetry", objects[a], objects[b])
    for a in range(n):
        for b in range(n):
            if desc[a] >> b & 1 and desc[b] & ~desc[a]:
                c = next(c for c in range(n) if desc[b] >> c & 1 and not desc[a] >> c & 1)
                raise NotAPoset("transitivity", objects[a], objects[c])
    return _build(objects, desc)


def transitive_closure(objects, arrows) -> list[list[bool]]:
    index = {o: k for k, o in enumerate(objects)}
    n = len(objects)
    reach = [[a == b for b in range(n)] for a in range(n)]
    for i, j in arrows:
        reach[index[i]][index[j]] = True
    for k in range(n):
        for a in range(n):
            if reach[a][k]:
                row_k = reach[k]
                row_a = reach[a]
                for b in range(n):
                    if row_k[b]:
                        row_a[b] = True
    return reach


def from_arrows(objects, arrows) -> IndexingCategory:
    """Build a category from a DAG (any generating set of arrows)."""
    objects = list(objects)
    known = set(objects)
    for i, j in arrows:
        if i not in known or j not in known:
            raise ValueError(f"arrow ({i!r}, {j!r}) mentions an undeclared object")
    return validate(objects, transitive_closure(objects, arrows))


def from_json(data: dict) -> IndexingCategory:
    return from_arrows(data["objects"], [tuple(a) for a in data["arrows"]])


def subset_label(subset) -> str:
    return "".join(str(k) for k in sorted(subset))


def lambda_subsets(n: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of {1..n}: by size, then lexicographically."""
    items = range(1, n + 1)
    return [c for r in range(1, n + 1) for c in combinations(items, r)]


@lru_cache(maxsize=None)
def lambda_n(n: int) -> IndexingCategory:
    """The poset of nonempty subsets of {1..n} under reverse inclusion."""
    if not 1 <= n <= MAX_LAMBDA:
        raise SizeLimit(f"lambda_n needs 1 <= n <= {MAX_LAMBDA}, got {n}")
    subsets = lambda_subsets(n)
    objects = [subset_label(s) for s in subsets]
    sets = [frozenset(s) for s in subsets]
    ancestry = [[sa >= sb for sb in sets] for sa in sets]
    return validate(objects, ancestry)


def lambda_set(obj: str) -> frozenset[int]:
    """Inverse of :func:`subset_label` for objects of a lambda_n category."""
    return frozenset(int(c) for c in obj)


def minimal_common_ancestor(cat: IndexingCategory, i: str, j: str) -> str:
    return cat._mca[(i, j)]


def minimal_fan(cat: IndexingCategory, i: str, j: str) -> Fan:
    return Fan(minimal_common_ancestor(cat, i, j), i, j)


def ideal(cat: IndexingCategory, i: str) -> IndexingCategory:
    """Full subcategory on ``i`` and its descendants."""
    keep = cat.descendants_of(i)
    pos = [cat.index(o) for o in keep]
    ancestry = [[bool(cat.descendants[a] >> b & 1) for b in pos] for a in pos]
    return validate(keep, ancestry)


def terminal_objects(cat: IndexingCategory) -> list[str]:
    return [o for k, o in enumerate(cat.objects) if cat.descendants[k] == 1 << k]
