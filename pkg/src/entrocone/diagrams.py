"""Commutative diagrams of finite probability spaces.

Every indexing category has an initial object and every reduction is onto,
so a diagram is determined by its initial space together with the composite
reductions out of it.  Most constructions here therefore build an
"underlying" space plus one labelling function per object and hand both to
:meth:`Diagram.from_initial`, which derives the spaces by pushforward and the
arrow maps by factoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import (NotADistribution, NotAnIsomorphism, NotCommutative, ShapeMismatch,
                     SizeLimit, ZeroWeightAtom)
from .geometry.vectors import EntropyVector, InfoVector
from .indexing import (Fan, IndexingCategory, from_arrows, lambda_n, lambda_set,
                       lambda_subsets, minimal_common_ancestor, subset_label,
                       terminal_objects)
from .spaces import (PAIR, POINT_LABEL, FiniteProbabilitySpace, entropy, exact_entropy,
                     pushforward, validate_reduction)

MAX_FULL_N = 6
MAX_ATOMS = 10**6
MAX_HOMOGENEITY_ATOMS = 64
SEP = ","


@dataclass(frozen=True, eq=False)
class Diagram:
    shape: IndexingCategory
    spaces: Mapping[str, FiniteProbabilitySpace]
    maps: Mapping[tuple[str, str], Mapping[str, str]]
    _proj: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, shape: IndexingCategory, spaces, maps) -> "Diagram":
        """Validate spaces and arrow maps.  ``maps`` must cover every covering
        arrow of ``shape``; extra arrows are checked against the composites."""
        for o in shape.objects:
            if o not in spaces:
                raise ShapeMismatch(f"no space at object {o!r}")
        maps = {tuple(k): dict(v) for k, v in maps.items()}
        for (i, j) in maps:
            if not shape.is_ancestor(i, j) or i == j:
                raise ShapeMismatch(f"({i!r}, {j!r}) is not an arrow of the shape")
        covering = shape.arrows()
        for i, j in covering:
            if (i, j) not in maps:
                raise ShapeMismatch(f"no reduction on arrow ({i!r}, {j!r})")
            validate_reduction(spaces[i], spaces[j], maps[(i, j)])
        d = cls(shape, dict(spaces), {a: maps[a] for a in covering})
        d._check_commutative(maps)
        return d

    def _check_commutative(self, given):
        shape = self.shape
        succ: dict[str, list[str]] = {o: [] for o in shape.objects}
        for i, j in shape.arrows():
            succ[i].append(j)
        comp: dict[tuple[str, str], dict[str, str]] = {}
        order = sorted(shape.objects, key=lambda o: len(shape.descendants_of(o)))
        for i in order:
            for k in shape.descendants_of(i):
                if k == i:
                    continue
                ref = None
                for j in succ[i]:
                    if not shape.is_ancestor(j, k):
                        continue
                    m = self.maps[(i, j)]
                    cand = m if j == k else {x: comp[(j, k)][m[x]] for x in m}
                    if ref is None:
                        ref = cand
                    elif cand != ref:
                        raise NotCommutative(f"paths from {i!r} to {k!r} disagree")
                comp[(i, k)] = ref
                if (i, k) in given and given[(i, k)] != {x: ref[x] for x in given[(i, k)]}:
                    raise NotCommutative(f"arrow ({i!r}, {k!r}) disagrees with its composite")
        init = shape.initial
        self._proj.update({k: comp[(init, k)] for k in shape.objects if k != init})
        self._proj[init] = {x: x for x in self.spaces[init].labels}

    @classmethod
    def from_initial(cls, shape: IndexingCategory, underlying: FiniteProbabilitySpace,
                     labelings: Mapping[str, Mapping[str, str] | Callable[[str], str]]
                     ) -> "Diagram":
        """Spaces are pushforwards of ``underlying``; ``labelings[o]`` sends an
        underlying atom to its atom at ``o``.  Raises NotCommutative if some
        arrow does not factor."""
        lab = {}
        for o in shape.objects:
            f = labelings[o]
            get = f.__getitem__ if isinstance(f, Mapping) else f
            lab[o] = {x: get(x) for x in underlying.labels}
        spaces = {o: pushforward(underlying, lab[o].__getitem__) for o in shape.objects}
        maps = {}
        for i, j in shape.arrows():
            m: dict[str, str] = {}
            for x in underlying.labels:
                a, b = lab[i][x], lab[j][x]
                if m.setdefault(a, b) != b:
                    raise NotCommutative(f"arrow ({i!r}, {j!r}) does not factor")
            maps[(i, j)] = m
        d = cls(shape, spaces, maps)
        init = shape.initial
        to_init: dict[str, str] = {}
        for x in underlying.labels:
            to_init.setdefault(lab[init][x], x)
        for o in shape.objects:
            d._proj[o] = {a: lab[o][x] for a, x in to_init.items()}
        # the initial space must determine every other space
        for x in underlying.labels:
            for o in shape.objects:
                if d._proj[o][lab[init][x]] != lab[o][x]:
                    raise NotCommutative(f"initial object does not reduce to {o!r}")
        return d

    @property
    def initial_space(self) -> FiniteProbabilitySpace:
        return self.spaces[self.shape.initial]

    def projection(self, obj: str) -> dict[str, str]:
        """The reduction from the initial space to the space at ``obj``."""
        return self._proj[obj]

    def reduction(self, i: str, j: str) -> dict[str, str]:
        """Composite reduction along ``i -> j``."""
        if i == j:
            return {x: x for x in self.spaces[i].labels}
        if not self.shape.is_ancestor(i, j):
            raise ShapeMismatch(f"{i!r} is not an ancestor of {j!r}")
        pi, pj = self._proj[i], self._proj[j]
        return {pi[x]: pj[x] for x in pi}

    def total_atoms(self) -> int:
        return sum(len(s) for s in self.spaces.values())

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(),
                "spaces": {o: self.spaces[o].to_json() for o in self.shape.objects},
                "maps": [{"arrow": [i, j], "map": m} for (i, j), m in self.maps.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        from .indexing import from_json as shape_from_json
        shape = shape_from_json(data["shape"])
        spaces = {o: FiniteProbabilitySpace.from_json(s) for o, s in data["spaces"].items()}
        maps = {tuple(e["arrow"]): e["map"] for e in data["maps"]}
        return cls.build(shape, spaces, maps)


def single_space(space: FiniteProbabilitySpace, name: str = "1") -> Diagram:
    """A space viewed as a diagram over the one-object category."""
    shape = from_arrows([name], [])
    return Diagram.from_initial(shape, space, {name: lambda x: x})


def _atom_label(values: Sequence[str]) -> str:
    return SEP.join(values)


def full_diagram(joint: Mapping[Sequence[str], object]) -> Diagram:
    """The Lambda_n diagram of all joint marginals of a distribution on n-tuples."""
    rows = [(tuple(str(v) for v in t), Fraction(w)) for t, w in joint.items()]
    if not rows:
        raise NotADistribution("empty support")
    n = len(rows[0][0])
    if not 1 <= n <= MAX_FULL_N:
        raise SizeLimit(f"full diagrams need 1 <= n <= {MAX_FULL_N}, got {n}")
    merged: dict[tuple[str, ...], Fraction] = {}
    for t, w in rows:
        if len(t) != n:
            raise NotADistribution("tuples of different lengths")
        if any(SEP in v for v in t):
            raise NotADistribution(f"values may not contain {SEP!r}")
        merged[t] = merged.get(t, Fraction(0)) + w
    underlying = FiniteProbabilitySpace.from_weights(
        (_atom_label(t), w) for t, w in merged.items())
    keys = {_atom_label(t): t for t in merged}
    shape = lambda_n(n)
    labelings = {}
    for subset in lambda_subsets(n):
        idx = [k - 1 for k in subset]
        labelings[subset_label(subset)] = {
            lbl: _atom_label([t[k] for k in idx]) for lbl, t in keys.items()}
    return Diagram.from_initial(shape, underlying, labelings)


def joint_distribution(diagram: Diagram) -> dict[tuple[str, ...], Fraction]:
    """For a Lambda_n diagram: the law of the n terminal variables."""
    n = _lambda_degree(diagram.shape)
    projs = [diagram.projection(str(k)) for k in range(1, n + 1)]
    out: dict[tuple[str, ...], Fraction] = {}
    for x, w in diagram.initial_space.atoms:
        t = tuple(p[x] for p in projs)
        out[t] = out.get(t, Fraction(0)) + w
    return out


def full_diagram_from_json(data: dict) -> Diagram:
    joint = {tuple(e["tuple"]): Fraction(e["weight"]) for e in data["support"]}
    d = full_diagram(joint)
    if _lambda_degree(d.shape) != data["n"]:
        raise NotADistribution("tuple length does not match n")
    return d


def full_diagram_to_json(diagram: Diagram) -> dict:
    n = _lambda_degree(diagram.shape)
    return {"n": n, "support": [{"tuple": list(t), "weight": str(w)}
                                for t, w in joint_distribution(diagram).items()]}


def _lambda_degree(shape: IndexingCategory) -> int:
    n = max(len(o) for o in shape.objects)
    if n > 8 or shape != lambda_n(n):
        raise ShapeMismatch("expected a Lambda_n shape")
    return n


def entropy_vector(diagram: Diagram, base=2) -> EntropyVector:
    """Entropies of all spaces; exact rationals when every coordinate is."""
    spaces = [diagram.spaces[o] for o in diagram.shape.objects]
    exact = [exact_entropy(s, base) for s in spaces]
    if all(x is not None for x in exact):
        return EntropyVector(diagram.shape, tuple(exact))
    return EntropyVector(diagram.shape, tuple(entropy(s, base) for s in spaces))


MAX_SIGN_DENOMINATOR = 2**16


def pairing_sign(diagram: Diagram, v: InfoVector) -> int:
    """Exact sign of ``<ent(diagram), v>`` for rational weights.

    With ``D`` a common denominator of the weights and coefficients,
    ``D * <ent, v> = -log prod_o prod_x p_o(x)^(D c_o p_o(x))`` and the product
    has integer exponents, so the sign is a comparison of two integers.
    """
    if v.shape != diagram.shape:
        raise ShapeMismatch("covector on a different shape")
    terms = [(diagram.spaces[o], Fraction(c)) for o, c in zip(v.shape.objects, v.coeffs) if c]
    den = 1
    for space, c in terms:
        den = math.lcm(den, c.denominator, *(w.denominator for _, w in space.atoms))
    if den > MAX_SIGN_DENOMINATOR:
        raise SizeLimit(f"common denominator {den} too large for an exact sign")
    num_side, den_side = 1, 1
    for space, c in terms:
        for _, w in space.atoms:
            e = c * den * w
            assert e.denominator == 1
            e = int(e)
            if e > 0:
                num_side *= w.numerator ** e
                den_side *= w.denominator ** e
            elif e < 0:
                num_side *= w.denominator ** -e
                den_side *= w.numerator ** -e
    # the pairing is -log(num_side / den_side) / D
    return (num_side < den_side) - (num_side > den_side)


def tensor_diagrams(x: Diagram, y: Diagram) -> Diagram:
    if x.shape != y.shape:
        raise ShapeMismatch("tensor needs diagrams of the same shape")
    sx, sy = x.initial_space, y.initial_space
    if len(sx) * len(sy) > MAX_ATOMS:
        raise SizeLimit("tensor product too large")
    atoms = []
    origin = {}
    for a, v in sx.atoms:
        for b, w in sy.atoms:
            lbl = f"{a}{PAIR}{b}"
            atoms.append((lbl, v * w))
            origin[lbl] = (a, b)
    underlying = FiniteProbabilitySpace(tuple(atoms))
    labelings = {}
    for o in x.shape.objects:
        px, py = x.projection(o), y.projection(o)
        labelings[o] = {lbl: f"{px[a]}{PAIR}{py[b]}" for lbl, (a, b) in origin.items()}
    return Diagram.from_initial(x.shape, underlying, labelings)


def power_diagram(x: Diagram, n: int) -> Diagram:
    if n < 1:
        raise ValueError("power_diagram needs n >= 1")
    if len(x.initial_space) ** n > MAX_ATOMS:
        raise SizeLimit(f"{len(x.initial_space)}**{n} atoms exceeds {MAX_ATOMS}")
    out = x
    for _ in range(n - 1):
        out = tensor_diagrams(out, x)
    return out


def constant_diagram(shape: IndexingCategory, space: FiniteProbabilitySpace,
                     support: Sequence[str] | None = None) -> Diagram:
    """``space`` at every object in ``support`` (default: all), a point elsewhere.
    ``support`` must be closed under taking ancestors."""
    keep = set(shape.objects if support is None else support)
    for o in keep:
        for a in shape.objects:
            if shape.is_ancestor(a, o) and a not in keep:
                raise ShapeMismatch("support must be closed under ancestors")
    labelings = {o: (lambda x: x) if o in keep else (lambda x: POINT_LABEL)
                 for o in shape.objects}
    return Diagram.from_initial(shape, space, labelings)


@dataclass(frozen=True)
class TwoFanOfDiagrams:
    """``left <- apex -> right`` with objectwise reductions forming natural
    transformations."""

    apex: Diagram
    left: Diagram
    right: Diagram
    to_left: Mapping[str, Mapping[str, str]]
    to_right: Mapping[str, Mapping[str, str]]

    def __post_init__(self):
        shape = self.apex.shape
        if self.left.shape != shape or self.right.shape != shape:
            raise ShapeMismatch("fan of diagrams over different shapes")
        for foot, legs in ((self.left, self.to_left), (self.right, self.to_right)):
            for o in shape.objects:
                validate_reduction(self.apex.spaces[o], foot.spaces[o], legs[o])
            for i, j in shape.arrows():
                top, bottom = self.apex.maps[(i, j)], foot.maps[(i, j)]
                for z in self.apex.spaces[i].labels:
                    if bottom[legs[i][z]] != legs[j][top[z]]:
                        raise NotCommutative(f"naturality square fails on arrow ({i!r}, {j!r})")


def coupling_fan(left: Diagram, right: Diagram,
                 joint: Mapping[tuple[str, str], Fraction]) -> TwoFanOfDiagrams:
    """The objectwise-minimal fan induced by a joint law on the initial spaces."""
    atoms, origin = [], {}
    for (a, b), w in joint.items():
        if w:
            lbl = f"{a}{PAIR}{b}"
            atoms.append((lbl, Fraction(w)))
            origin[lbl] = (a, b)
    underlying = FiniteProbabilitySpace(tuple(atoms))
    labelings, to_left, to_right = {}, {}, {}
    for o in left.shape.objects:
        pl, pr = left.projection(o), right.projection(o)
        labelings[o] = {lbl: f"{pl[a]}{PAIR}{pr[b]}" for lbl, (a, b) in origin.items()}
        to_left[o], to_right[o] = {}, {}
        for lbl, (a, b) in origin.items():
            to_left[o][labelings[o][lbl]] = pl[a]
            to_right[o][labelings[o][lbl]] = pr[b]
    apex = Diagram.from_initial(left.shape, underlying, labelings)
    return TwoFanOfDiagrams(apex, left, right, to_left, to_right)


def minimize_fan(fan):
    """Replace the apex by its image in the product of the feet.

    Accepts a :class:`TwoFanOfDiagrams`, or a diagram whose shape is a single
    two-fan of spaces (three objects: the apex and two terminal feet).
    """
    if isinstance(fan, TwoFanOfDiagrams):
        init = fan.apex.shape.initial
        joint: dict[tuple[str, str], Fraction] = {}
        for z, w in fan.apex.initial_space.atoms:
            key = (fan.to_left[init][z], fan.to_right[init][z])
            joint[key] = joint.get(key, Fraction(0)) + w
        return coupling_fan(fan.left, fan.right, joint)
    shape = fan.shape
    feet = terminal_objects(shape)
    if len(shape) != 3 or len(feet) != 2:
        raise ShapeMismatch("minimize_fan expects a two-fan")
    top = shape.initial
    l, r = feet
    pl, pr = fan.projection(l), fan.projection(r)
    labelings = {top: lambda z: f"{pl[z]}{PAIR}{pr[z]}", l: pl.__getitem__, r: pr.__getitem__}
    return Diagram.from_initial(shape, fan.initial_space, labelings)


def is_minimal(diagram: Diagram) -> bool:
    """Every minimal fan of the shape is sent to a minimal fan of spaces."""
    shape = diagram.shape
    objs = shape.objects
    for a, i in enumerate(objs):
        for j in objs[a + 1:]:
            top = minimal_common_ancestor(shape, i, j)
            if top in (i, j):
                continue
            red_i, red_j = diagram.reduction(top, i), diagram.reduction(top, j)
            images = {(red_i[z], red_j[z]) for z in diagram.spaces[top].labels}
            if len(images) != len(diagram.spaces[top]):
                return False
    return True


def condition(diagram: Diagram, u_obj: str, u: str) -> Diagram:
    """Restrict to the fiber over atom ``u`` of the space at ``u_obj``."""
    space = diagram.spaces[u_obj]
    if u not in space:
        raise ZeroWeightAtom(f"{u!r} is not an atom of positive weight at {u_obj!r}")
    proj = diagram.projection(u_obj)
    mass = space[u]
    fiber = FiniteProbabilitySpace(tuple((x, w / mass) for x, w in diagram.initial_space.atoms
                                         if proj[x] == u))
    return Diagram.from_initial(diagram.shape, fiber,
                                {o: diagram.projection(o) for o in diagram.shape.objects})


def conditional_entropy_vector(diagram: Diagram, u_obj: str, base=2) -> EntropyVector:
    """``sum_u p(u) ent(diagram | u)``."""
    total = None
    for u, w in diagram.spaces[u_obj].atoms:
        v = entropy_vector(condition(diagram, u_obj, u), base) * w
        total = v if total is None else total + v
    if total.exact:
        return total
    return EntropyVector(total.shape, tuple(float(x) for x in total.values))


@dataclass(frozen=True)
class AdmissibleFan:
    fan: Fan
    reduced: bool


def _is_iso(diagram: Diagram, i: str, j: str) -> bool:
    red = diagram.reduction(i, j)
    return len(diagram.spaces[i]) == len(diagram.spaces[j]) == len(set(red.values()))


def find_admissible_fans(diagram: Diagram) -> list[AdmissibleFan]:
    """Minimal sub-fans ``X <- Z -> U`` with ``U`` terminal.  Degenerate fans
    where ``X`` is an ancestor of ``U`` are skipped."""
    shape = diagram.shape
    out = []
    for u in terminal_objects(shape):
        for x in shape.objects:
            if x == u or shape.is_ancestor(x, u):
                continue
            z = minimal_common_ancestor(shape, x, u)
            out.append(AdmissibleFan(Fan(z, x, u), _is_iso(diagram, z, x)))
    return out


def collapse_arrow(diagram: Diagram, arrow: tuple[str, str]) -> Diagram:
    """Identify the two ends of an isomorphism; the source name is kept."""
    i, j = arrow
    shape = diagram.shape
    if i == j or not shape.is_ancestor(i, j):
        raise ShapeMismatch(f"({i!r}, {j!r}) is not an arrow")
    if not _is_iso(diagram, i, j):
        raise NotAnIsomorphism(f"reduction {i!r} -> {j!r} is not an isomorphism")
    objects = [o for o in shape.objects if o != j]
    arrows = set()
    for a, b in shape.arrows():
        a2, b2 = (i if a == j else a), (i if b == j else b)
        if a2 != b2:
            arrows.add((a2, b2))
    new_shape = from_arrows(objects, sorted(arrows))
    return Diagram.from_initial(new_shape, diagram.initial_space,
                                {o: diagram.projection(o) for o in objects})


def expand_terminal(diagram: Diagram, terminal, noise: FiniteProbabilitySpace) -> Diagram:
    """Tensor an independent ``noise`` into the terminal space ``terminal`` and
    every space above it; all other spaces are unchanged."""
    shape = diagram.shape
    t = str(terminal)
    if t not in terminal_objects(shape):
        raise ShapeMismatch(f"{t!r} is not a terminal object")
    if len(diagram.initial_space) * len(noise) > MAX_ATOMS:
        raise SizeLimit("expanded diagram too large")
    above = [o for o in shape.objects if shape.is_ancestor(o, t)]
    return tensor_diagrams(diagram, constant_diagram(shape, noise, above))


def _search_isomorphism(d1: Diagram, d2: Diagram, fix: tuple[str, str] | None = None
                        ) -> dict[str, str] | None:
    """Backtracking search for a weight-preserving bijection of initial spaces
    inducing well-defined bijections at every object."""
    objs = d1.shape.objects
    xs = d1.initial_space.labels
    ys = d2.initial_space.labels
    if len(xs) != len(ys):
        return None
    w1, w2 = d1.initial_space.weights, d2.initial_space.weights
    p1 = [d1.projection(o) for o in objs]
    p2 = [d2.projection(o) for o in objs]
    fwd = [dict() for _ in objs]
    bwd = [dict() for _ in objs]
    sigma: dict[str, str] = {}
    used: set[str] = set()
    order = list(xs)
    if fix is not None:
        order.remove(fix[0])
        order.insert(0, fix[0])

    def assign(x, y):
        added = []
        for k in range(len(objs)):
            a, b = p1[k][x], p2[k][y]
            fa, bb = fwd[k].get(a), bwd[k].get(b)
            if fa is None and bb is None:
                fwd[k][a] = b
                bwd[k][b] = a
                added.append(k)
            elif fa != b or bb != a:
                for m in added:
                    del bwd[m][fwd[m].pop(p1[m][x])]
                return None
        return added

    def go(pos):
        if pos == len(order):
            return True
        x = order[pos]
        cands = [fix[1]] if fix is not None and pos == 0 else ys
        for y in cands:
            if y in used or w1[x] != w2[y]:
                continue
            added = assign(x, y)
            if added is None:
                continue
            sigma[x] = y
            used.add(y)
            if go(pos + 1):
                return True
            used.discard(y)
            del sigma[x]
            for m in added:
                del bwd[m][fwd[m].pop(p1[m][x])]
        return False

    return dict(sigma) if go(0) else None


def are_isomorphic(d1: Diagram, d2: Diagram) -> bool:
    if d1.shape != d2.shape:
        return False
    if any(d1.spaces[o].sorted_weights() != d2.spaces[o].sorted_weights()
           for o in d1.shape.objects):
        return False
    if len(d1.initial_space) > MAX_HOMOGENEITY_ATOMS:
        raise SizeLimit(f"isomorphism search is capped at {MAX_HOMOGENEITY_ATOMS} initial atoms")
    return _search_isomorphism(d1, d2) is not None


def is_homogeneous(diagram: Diagram) -> bool:
    """Brute force: some automorphism carries a fixed initial atom to every
    other one.  Transitivity on the initial space passes down every reduction."""
    space = diagram.initial_space
    if len(space) > MAX_HOMOGENEITY_ATOMS:
        raise SizeLimit(f"homogeneity test is capped at {MAX_HOMOGENEITY_ATOMS} initial atoms")
    if len(set(space.weights.values())) > 1:
        return False
    x0 = space.labels[0]
    return all(_search_isomorphism(diagram, diagram, (x0, y)) is not None
               for y in space.labels)
