"""Diagrams of probability spaces and their entropy vectors.

A joint law on n variables gives a diagram over the lattice of subsets of
{1..n}: the space at I is the marginal of the variables in I.  Its entropy
vector lists H(X_I) for every nonempty I.
"""
from fractions import Fraction as F
from itertools import product

from entrocone.diagrams import (condition, conditional_entropy_vector, entropy_vector,
                                expand_terminal, full_diagram, tensor_diagrams)
from entrocone.spaces import coin

# Two fair bits and their XOR: any two determine the third.
xor = full_diagram({(a, b, str(int(a) ^ int(b))): F(1, 4) for a, b in product("01", repeat=2)})
print("objects:", xor.shape.objects)
print("H(X_I): ", entropy_vector(xor))

# Entropy is additive under tensor products.
print("tensor square:", entropy_vector(tensor_diagrams(xor, xor)))

# Conditioning on one value of X3 leaves X1 and X2 perfectly correlated.
c = condition(xor, "3", "0")
print("given X3 = 0:", entropy_vector(c))
print("H(X_I | X3): ", conditional_entropy_vector(xor, "3"))

# Expanding a terminal by independent noise adds its entropy to every
# coordinate that contains it and nothing else.
e = expand_terminal(xor, "1", coin(F(1, 4)))
print("X1 expanded by a 1/4-coin:", entropy_vector(e))
