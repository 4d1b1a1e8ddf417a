"""2-D gravity surveying: how the rank and error grow with the grid.

Run: python demos/gravity2d.py
"""

import numpy as np

import randtls

print(f"{'grid':>4} {'n':>5} {'rank':>5} {'err':>10}")
for grid in (8, 16, 24):
    prob = randtls.make_gravity_2d(grid, d=0.25)
    sol = randtls.solve_randomized_tls(prob.op, prob.b, randtls.RangeFinderConfig(tolerance=1e-3))
    err = np.linalg.norm(sol.x - prob.x_true) / np.linalg.norm(prob.x_true)
    print(f"{grid:>4} {prob.n:>5} {sol.rank:>5} {err:10.3e}")

# deeper sources smooth the data more, so fewer directions are needed
for d in (0.1, 0.25, 0.5):
    s = randtls.singular_values(randtls.make_gravity_2d(12, d=d).matrix())
    print(f"d = {d:<4}: numerical rank at 1e-3 relative = {np.sum(s > 1e-3 * s[0])}")
