"""Finite probability spaces with exact rational weights, and reductions
(measure-preserving maps) between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import NotADistribution, NotMeasurePreserving, SizeLimit, UnknownLabel

PAIR = "⋈"
POINT_LABEL = "*"
MAX_POWER_ATOMS = 10**6


def as_fraction(w) -> Fraction:
    if isinstance(w, float):
        raise TypeError("weights must be exact; pass a Fraction, int or 'p/q' string")
    return Fraction(w)


@dataclass(frozen=True)
class FiniteProbabilitySpace:
    atoms: tuple[tuple[str, Fraction], ...]
    _weights: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_weights", dict(self.atoms))

    @classmethod
    def from_weights(cls, weights: Mapping[str, object] | Iterable[tuple[str, object]]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        atoms = []
        seen = set()
        for label, w in items:
            label = str(label)
            w = as_fraction(w)
            if label in seen:
                raise NotADistribution(f"duplicate label {label!r}")
            seen.add(label)
            if w < 0:
                raise NotADistribution(f"negative weight {w} at {label!r}")
            if w > 0:
                atoms.append((label, w))
        total = sum((w for _, w in atoms), Fraction(0))
        if total != 1:
            raise NotADistribution(f"weights sum to {total}, not 1")
        return cls(tuple(atoms))

    @classmethod
    def uniform(cls, labels: Iterable[str]):
        labels = [str(x) for x in labels]
        return cls.from_weights((x, Fraction(1, len(labels))) for x in labels)

    @classmethod
    def point(cls, label: str = POINT_LABEL):
        return cls(((label, Fraction(1)),))

    @property
    def weights(self) -> dict[str, Fraction]:
        return self._weights

    @property
    def labels(self) -> list[str]:
        return [x for x, _ in self.atoms]

    def __len__(self):
        return len(self.atoms)

    def __getitem__(self, label: str) -> Fraction:
        return self._weights[label]

    def __contains__(self, label) -> bool:
        return label in self._weights

    def sorted_weights(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self._weights.values()))

    def to_json(self) -> dict:
        return {"atoms": [{"label": x, "weight": str(w)} for x, w in self.atoms]}

    @classmethod
    def from_json(cls, data: dict):
        return cls.from_weights((a["label"], Fraction(a["weight"])) for a in data["atoms"])


def coin(p=Fraction(1, 2), labels=("0", "1")) -> FiniteProbabilitySpace:
    p = as_fraction(p)
    return FiniteProbabilitySpace.from_weights({labels[0]: 1 - p, labels[1]: p})


def pushforward(space: FiniteProbabilitySpace, fn: Callable[[str], str]) -> FiniteProbabilitySpace:
    out: dict[str, Fraction] = {}
    for label, w in space.atoms:
        key = fn(label)
        out[key] = out.get(key, Fraction(0)) + w
    return FiniteProbabilitySpace(tuple(out.items()))


def _log(x: float, base) -> float:
    if base == 2:
        return math.log2(x)
    if base == math.e:
        return math.log(x)
    return math.log(x) / math.log(base)


def _check_base(base):
    if isinstance(base, float) and base != math.e:
        raise ValueError("float bases other than e are not supported; pass an int or Fraction")
    if base <= 1:
        raise ValueError(f"base must exceed 1, got {base}")


def entropy_of_weights(weights: Iterable[Fraction], base=2) -> float:
    _check_base(base)
    probs = [float(w) for w in weights if w > 0]
    return math.fsum(-p * _log(p, base) for p in probs if p > 0) + 0.0


def entropy(space: FiniteProbabilitySpace, base=2) -> float:
    """Shannon entropy, in units of ``log(base)``."""
    return entropy_of_weights(space.weights.values(), base)


def _exact_log(w: Fraction, base: Fraction) -> int | None:
    """Integer ``k`` with ``w == base**-k``, if any."""
    if w == 1:
        return 0
    k = round(-math.log(float(w)) / math.log(float(base)))
    for cand in (k - 1, k, k + 1):
        if cand >= 0 and base ** (-cand) == w:
            return cand
    return None


def exact_weights_entropy(weights: Iterable[Fraction], base) -> Fraction | None:
    if base == math.e:
        return None
    base = Fraction(base)
    total = Fraction(0)
    for w in weights:
        k = _exact_log(w, base)
        if k is None:
            return None
        total += w * k
    return total


def exact_entropy(space: FiniteProbabilitySpace, base=2) -> Fraction | None:
    """Entropy as an exact rational when every weight is an integer power of
    ``1/base``; otherwise ``None``."""
    _check_base(base)
    return exact_weights_entropy(space.weights.values(), base)


def tensor(x: FiniteProbabilitySpace, y: FiniteProbabilitySpace) -> FiniteProbabilitySpace:
    """Independent product; labels become ``"a⋈b"``."""
    return FiniteProbabilitySpace(tuple((f"{a}{PAIR}{b}", v * w)
                                        for a, v in x.atoms for b, w in y.atoms))


def power(x: FiniteProbabilitySpace, n: int) -> FiniteProbabilitySpace:
    if n < 0:
        raise ValueError("power needs n >= 0")
    if len(x) ** n > MAX_POWER_ATOMS:
        raise SizeLimit(f"{len(x)}**{n} atoms exceeds {MAX_POWER_ATOMS}")
    if n == 0:
        return FiniteProbabilitySpace.point()
    out = x
    for _ in range(n - 1):
        out = tensor(out, x)
    return out


@dataclass(frozen=True)
class Reduction:
    source: FiniteProbabilitySpace
    target: FiniteProbabilitySpace
    map: Mapping[str, str]

    def __call__(self, label: str) -> str:
        return self.map[label]

    def is_isomorphism(self) -> bool:
        return len(set(self.map[x] for x in self.source.labels)) == len(self.source) \
            and len(self.source) == len(self.target)


def validate_reduction(source: FiniteProbabilitySpace, target: FiniteProbabilitySpace,
                       mapping: Mapping[str, str]) -> Reduction:
    for label in source.labels:
        if label not in mapping:
            raise UnknownLabel(f"map is undefined on source atom {label!r}")
        if mapping[label] not in target:
            raise UnknownLabel(f"source atom {label!r} maps to unknown target atom {mapping[label]!r}")
    got: dict[str, Fraction] = {}
    for label, w in source.atoms:
        t = mapping[label]
        got[t] = got.get(t, Fraction(0)) + w
    for t, w in target.atoms:
        if got.get(t, Fraction(0)) != w:
            raise NotMeasurePreserving(t, w, got.get(t, Fraction(0)))
    return Reduction(source, target, {x: mapping[x] for x in source.labels})


def _binary_entropy(p: float) -> float:
    return 0.0 if p <= 0 or p >= 1 else -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def space_with_entropy(bits: float, tol: float = 1e-6, depth: int = 40) -> FiniteProbabilitySpace:
    """A dyadic space whose entropy is within ``tol`` bits of ``bits``:
    a uniform space on ``2^k`` atoms times a biased coin for the remainder."""
    if bits < 0:
        raise ValueError("entropy must be nonnegative")
    k = int(math.floor(bits))
    rest = bits - k
    out = FiniteProbabilitySpace.uniform([str(i) for i in range(2 ** k)]) if k else FiniteProbabilitySpace.point()
    if rest <= tol:
        return out
    # bisect on p = m / 2^depth in (0, 1/2], where the binary entropy increases
    lo, hi = 0, 2 ** (depth - 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _binary_entropy(mid / 2 ** depth) < rest:
            lo = mid
        else:
            hi = mid
    m = min((lo, hi), key=lambda x: abs(_binary_entropy(x / 2 ** depth) - rest))
    c = coin(Fraction(m, 2 ** depth))
    return tensor(out, c) if k else c
