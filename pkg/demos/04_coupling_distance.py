"""Intrinsic entropy distance between diagrams.

ikd minimizes the entropy defect of a coupling over all joint laws of the two
initial spaces.  The defect is concave in the joint, so checking the vertices
of the transport polytope is enough.
"""
from fractions import Fraction as F

from entrocone.coupling import (aikd_upper, entropy_lipschitz_gap, ikd_exact, ikd_greedy,
                                transport_vertices)
from entrocone.spaces import FiniteProbabilitySpace, coin

point = FiniteProbabilitySpace.point()
u4 = FiniteProbabilitySpace.uniform("abcd")
print("ikd(coin, point)     =", ikd_exact(coin(), point).value)
print("ikd(uniform4, coin)  =", ikd_exact(u4, coin()).value)

x = FiniteProbabilitySpace.from_weights({"a": F(1, 2), "b": F(1, 3), "c": F(1, 6)})
y = FiniteProbabilitySpace.from_weights({"p": F(3, 4), "q": F(1, 4)})
print("vertices of the 3x2 transport polytope:", len(transport_vertices(
    [w for _, w in x.atoms], [w for _, w in y.atoms])))
best = ikd_exact(x, y)
print(f"exact  {best.value:.6f}  coupling {best.coupling.to_json()['joint']}")
print(f"greedy {ikd_greedy(x, y).value:.6f}")
print(f"lower bound from entropies {entropy_lipschitz_gap(x, y):.6f}")

est = aikd_upper(coin(), coin(F(1, 3)), n_max=4)
print("ikd_greedy(X^n, Y^n)/n:", [round(t, 4) for t in est.terms])
