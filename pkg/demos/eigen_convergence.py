"""Ground state of the Robin Laplacian on [0, 1] and its convergence.

The continuum eigenvalue comes from separation of variables: the first
eigenfunction is cos(mu x) + (c/mu) sin(mu x), and mu solves
tan(mu) = 2 mu c / (mu^2 - c^2). The discrete eigenvalue converges at
second order, and the discrete eigenfunction stays strictly positive even
when c is large and the boundary values shrink toward zero.
"""
from __future__ import annotations

import math

from robinrd import assemble, build_interval, build_rectangle, certify_positivity, first_eigenpair
from robinrd.spectral import robin_eigenvalue_interval

c = 1.0
exact = robin_eigenvalue_interval(c)
print(f"continuum lambda1 for c={c}: {exact:.12f}")

prev = None
for n in (65, 129, 257, 513, 1025):
    pair = first_eigenpair(assemble(build_interval(n, 1.0), c))
    err = abs(pair.lambda1 - exact)
    order = "" if prev is None else f"  order {math.log2(prev / err):.3f}"
    print(f"n={n:5d}  lambda1={pair.lambda1:.12f}  error={err:.3e}{order}")
    prev = err

# The square's eigenvalue is the sum of two interval eigenvalues.
sq = first_eigenpair(assemble(build_rectangle(65, 65, 1.0, 1.0), c))
print(f"\nunit square, 65x65: lambda1={sq.lambda1:.8f}, twice the interval value={2 * exact:.8f}")

print("\nsmallest nodal value of phi1 (normalized to unit integral):")
for c in (0.1, 1.0, 10.0, 100.0, 1e6):
    rep = certify_positivity(first_eigenpair(assemble(build_interval(257, 1.0), c)))
    print(f"  c={c:<9g} min phi1={rep.minimum:.4e} at x={rep.location[0]:.3f}")
