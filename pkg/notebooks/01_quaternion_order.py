# %% [markdown]
# # The maximal order behind the code
#
# Codewords are elements of the order Gamma = Z[w] + i Z[w] inside the
# quaternion algebra (-1, -3)_Q.  Everything here is exact rational
# arithmetic; floats only appear once an element is embedded as a 2x2
# complex matrix.

# %%
from fractions import Fraction

import numpy as np

from eal.algebra import (
    EISENSTEIN_ALGEBRA,
    EisensteinInteger,
    GammaElement,
    Quaternion,
    embed_gamma,
    gamma_to_quaternion,
    left_mult_matrix,
    quaternion_mul,
    reduced_norm,
)

I = Quaternion(0, 1)
J = Quaternion(0, 0, 1)
print("ij =", quaternion_mul(I, J, EISENSTEIN_ALGEBRA))
print("ji =", quaternion_mul(J, I, EISENSTEIN_ALGEBRA))
print("j^2 =", quaternion_mul(J, J, EISENSTEIN_ALGEBRA))

# %% [markdown]
# The reduced norm is the determinant of the left-multiplication matrix.

# %%
q = Quaternion(Fraction(1, 2), 2, Fraction(-3, 2), 1)
print("Nrd(q) =", reduced_norm(q, EISENSTEIN_ALGEBRA))
print("det(M_q) =", np.linalg.det(left_mult_matrix(q, EISENSTEIN_ALGEBRA)))

# %% [markdown]
# An order element x0 + i x1 embeds as the Alamouti block.  Its determinant
# is N(x0) + N(x1), an integer, so nonzero codewords have determinant at
# least 1.

# %%
g = GammaElement(EisensteinInteger(0, 1), EisensteinInteger(1, 0))
print(embed_gamma(g).round(6))
print("N(x0) + N(x1) =", g.norm, " Nrd =", reduced_norm(gamma_to_quaternion(g), EISENSTEIN_ALGEBRA))

# %%
rng = np.random.default_rng(0)
for _ in range(5):
    a = GammaElement(*(EisensteinInteger(*map(int, rng.integers(-5, 6, 2))) for _ in range(2)))
    b = GammaElement(*(EisensteinInteger(*map(int, rng.integers(-5, 6, 2))) for _ in range(2)))
    ab = quaternion_mul(gamma_to_quaternion(a), gamma_to_quaternion(b), EISENSTEIN_ALGEBRA)
    print(a.norm, "*", b.norm, "=", reduced_norm(ab, EISENSTEIN_ALGEBRA))
