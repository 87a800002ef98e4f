"""Functions on objects (entropy vectors) and formal combinations of objects
(information vectors), with the pairing between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from numbers import Rational
from typing import Iterable, Sequence

from ..errors import ShapeMismatch, SizeLimit
from ..indexing import (IndexingCategory, lambda_n, lambda_set, minimal_common_ancestor,
                        subset_label)

MAX_SHANNON_N = 5


def _exact(x) -> bool:
    return isinstance(x, Rational)


def _fmt(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


@dataclass(frozen=True)
class EntropyVector:
    """A real function on the objects of ``shape``, stored in object order."""

    shape: IndexingCategory
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.shape):
            raise ShapeMismatch(f"{len(self.values)} values for {len(self.shape)} objects")

    @classmethod
    def from_mapping(cls, shape, mapping):
        return cls(shape, tuple(mapping[o] for o in shape.objects))

    @classmethod
    def zero(cls, shape):
        return cls(shape, (Fraction(0),) * len(shape))

    def __getitem__(self, obj):
        return self.values[self.shape.index(str(obj))]

    def as_dict(self) -> dict:
        return dict(zip(self.shape.objects, self.values))

    @property
    def exact(self) -> bool:
        return all(_exact(x) for x in self.values)

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("vectors live on different shapes")

    def __add__(self, other):
        self._check(other)
        return EntropyVector(self.shape, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._check(other)
        return EntropyVector(self.shape, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, c):
        return EntropyVector(self.shape, tuple(c * a for a in self.values))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.values)

    def max_abs_diff(self, other) -> float:
        self._check(other)
        return max(abs(float(a) - float(b)) for a, b in zip(self.values, other.values))

    def to_strings(self) -> list[str]:
        return [_fmt(x) for x in self.values]

    def __str__(self):
        if self.shape == lambda_n(4):
            v = self.to_strings()
            return f"({','.join(v[:4])}; {','.join(v[4:10])}; {','.join(v[10:14])}; {v[14]})"
        return "(" + ", ".join(self.to_strings()) + ")"


@dataclass(frozen=True)
class InfoVector:
    """A formal combination ``sum c_i [i]`` with exact rational coefficients."""

    shape: IndexingCategory
    coeffs: tuple[Fraction, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def from_terms(cls, shape, terms: Iterable[tuple[str, object]], name=""):
        c = [Fraction(0)] * len(shape)
        for obj, x in terms:
            c[shape.index(str(obj))] += Fraction(x)
        return cls(shape, tuple(c), name)

    @classmethod
    def zero(cls, shape):
        return cls(shape, (Fraction(0),) * len(shape), "0")

    def __getitem__(self, obj):
        return self.coeffs[self.shape.index(str(obj))]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support_size(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("vectors live on different shapes")

    def __add__(self, other):
        self._check(other)
        return InfoVector(self.shape, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          f"{self.name}+{other.name}")

    def __sub__(self, other):
        self._check(other)
        return InfoVector(self.shape, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
                          f"{self.name}-{other.name}")

    def __mul__(self, c):
        c = Fraction(c)
        return InfoVector(self.shape, tuple(c * a for a in self.coeffs), f"{c}*{self.name}")

    __rmul__ = __mul__

    def __neg__(self):
        return InfoVector(self.shape, tuple(-a for a in self.coeffs), f"-{self.name}")

    def named(self, name: str) -> "InfoVector":
        return InfoVector(self.shape, self.coeffs, name)

    def __str__(self):
        return self.name or repr(self.coeffs)


def pair(f: EntropyVector, v: InfoVector):
    """``<f, v> = sum_i v_i f(i)``; exact when ``f`` is exact."""
    if f.shape != v.shape:
        raise ShapeMismatch("pairing across different shapes")
    if f.exact:
        return sum((c * x for c, x in zip(v.coeffs, f.values) if c), Fraction(0))
    return sum(float(c) * float(x) for c, x in zip(v.coeffs, f.values) if c)


def info_base(shape, i) -> InfoVector:
    i = str(i)
    return InfoVector.from_terms(shape, [(i, 1)], f"[{i}]")


def info_cond(shape, i, j) -> InfoVector:
    i, j = str(i), str(j)
    top = minimal_common_ancestor(shape, i, j)
    return InfoVector.from_terms(shape, [(top, 1), (j, -1)], f"[{i}|{j}]")


def info_mi(shape, i, j) -> InfoVector:
    i, j = str(i), str(j)
    top = minimal_common_ancestor(shape, i, j)
    return InfoVector.from_terms(shape, [(i, 1), (j, 1), (top, -1)], f"[{i}:{j}]")


def info_cmi(shape, i, j, k) -> InfoVector:
    i, j, k = str(i), str(j), str(k)
    ik = minimal_common_ancestor(shape, i, k)
    jk = minimal_common_ancestor(shape, j, k)
    top = minimal_common_ancestor(shape, ik, jk)
    return InfoVector.from_terms(shape, [(ik, 1), (jk, 1), (k, -1), (top, -1)],
                                 f"[{i}:{j}|{k}]")


def shannon_generators(shape: IndexingCategory) -> list[InfoVector]:
    """The nonzero, deduplicated Shannon-type vectors of ``shape``."""
    n_obj = len(shape)
    if n_obj > 2**MAX_SHANNON_N - 1:
        raise SizeLimit(f"Shannon generators are capped at {2**MAX_SHANNON_N - 1} objects")
    objs = shape.objects
    found: dict[tuple, InfoVector] = {}

    def add(v):
        if not v.is_zero() and v.coeffs not in found:
            found[v.coeffs] = v

    for i in objs:
        add(info_base(shape, i))
    for i in objs:
        for j in objs:
            add(info_cond(shape, i, j))
    for i in objs:
        for j in objs:
            add(info_mi(shape, i, j))
    for i in objs:
        for j in objs:
            for k in objs:
                add(info_cmi(shape, i, j, k))
    return list(found.values())


def lambda4() -> IndexingCategory:
    return lambda_n(4)


def ingleton(i, j, k, l) -> InfoVector:
    """``ing(ij;kl) = -[i:j] + [i:j|k] + [i:j|l] + [k:l]`` on Lambda_4."""
    s = lambda4()
    v = -info_mi(s, i, j) + info_cmi(s, i, j, k) + info_cmi(s, i, j, l) + info_mi(s, k, l)
    return v.named(f"ing({i}{j};{k}{l})")


def ingleton_vectors() -> list[InfoVector]:
    out = []
    for i, j in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]:
        k, l = [x for x in (1, 2, 3, 4) if x not in (i, j)]
        out.append(ingleton(i, j, k, l))
    return out


def spc() -> EntropyVector:
    """The special ray spc(12;34) of the submodular cone."""
    return lambda4_vector([2, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4])


def lambda4_vector(coords: Sequence) -> EntropyVector:
    return EntropyVector(lambda4(), tuple(Fraction(x) if not isinstance(x, float) else x
                                          for x in coords))


def _lambda_degree(shape) -> int:
    n = max(len(o) for o in shape.objects)
    if shape != lambda_n(n):
        raise ShapeMismatch("permutation action needs a Lambda_n shape")
    return n


def permute_object(perm: Sequence[int], obj: str) -> str:
    """Image of a subset under ``k -> perm[k-1]``."""
    return subset_label(perm[k - 1] for k in lambda_set(obj))


def s4_act(perm: Sequence[int], x):
    """Permutation action on vectors over Lambda_n: the result has at ``perm(S)``
    the value the input had at ``S``."""
    shape = x.shape
    n = _lambda_degree(shape)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    src = x.values if isinstance(x, EntropyVector) else x.coeffs
    out = [None] * len(shape)
    for obj, val in zip(shape.objects, src):
        out[shape.index(permute_object(perm, obj))] = val
    if isinstance(x, EntropyVector):
        return EntropyVector(shape, tuple(out))
    return InfoVector(shape, tuple(out), x.name)


def symmetric_group(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(1, n + 1)))


D2 = [(1, 2, 3, 4), (2, 1, 3, 4), (1, 2, 4, 3), (2, 1, 4, 3)]
