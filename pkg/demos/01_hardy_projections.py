"""Splitting a function into its upper and lower Hardy parts.

In the rational basis phi_n(lam) = (lam - i)^n / (sqrt(pi) (lam + i)^(n+1))
the indices n >= 0 span H^2_+ and n < 0 span H^2_-, so projecting is just
zeroing half of the coefficients.  We check this against a direct
quadrature of the Cauchy integral.
"""

import numpy as np

from laxphillips import cauchy_project_oracle, evaluate_upper, hardy_project
from laxphillips.rational import RationalFunction

g = RationalFunction([0.3 - 0.7j, -0.5 + 1.2j, 1.1 - 0.4j], [[1.0], [0.5j], [-0.7]])
f = g.coefficients(512)
plus = hardy_project(f, "plus")
minus = hardy_project(f, "minus")
print(f"||f||^2 = {f.norm_squared():.12f}")
print(f"||Q+ f||^2 + ||Q- f||^2 = {plus.norm_squared() + minus.norm_squared():.12f}")

for z in (1j, 0.5 + 0.5j, -1 + 2j):
    basis = evaluate_upper(f, z)[0]
    quad = cauchy_project_oracle(g, z)[0]
    print(f"(Q+ f)({z}): basis {basis:.10f}   quadrature {quad:.10f}   gap {abs(basis - quad):.1e}")

# poles below the axis belong to H^2_+; that part is known in closed form too
print("closed-form plus part at i:", g.plus_part()(1j)[0])
