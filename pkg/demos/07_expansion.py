"""Expanding terminals of a four-variable diagram by independent noise moves
only the first four simplex coordinates."""
from fractions import Fraction as F

from entrocone.diagrams import full_diagram
from entrocone.explorer import expansion_sweep, sample_distributions
from entrocone.spaces import FiniteProbabilitySpace, coin

p = next(sample_distributions(3, 1))
d = full_diagram({tuple(t): F(w) for t, w in p.source["joint"]})
noises = [coin(), FiniteProbabilitySpace.point(), coin(F(1, 8)), FiniteProbabilitySpace.uniform("abc")]
rep = expansion_sweep(d, noises)
for j, (a, b) in enumerate(zip(rep.alpha_before, rep.alpha_after), start=1):
    print(f"alpha{j:<2} {float(a):+.6f} -> {float(b):+.6f}")
print("noise entropies:", [round(h, 6) for h in rep.noise_entropies])
