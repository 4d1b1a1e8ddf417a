"""Walk through one randomized core-reduction solve on the shaw problem.

Run: python demos/core_reduction.py
"""

import numpy as np

import randtls

prob = randtls.make_problem_1d("shaw", 512)
cfg = randtls.RangeFinderConfig(tolerance=1e-3, power=1, seed=0)

# adaptive sampling: probes stop once the window of residuals is small
basis = randtls.adaptive_rangefinder(prob.op, cfg)
print(f"range finder kept {basis.rank} directions after {basis.probes_used} probes")

# approximate SVD from the basis, then the bordered diagonal core
svd = randtls.randomized_svd(prob.op, cfg)
core = randtls.build_core(svd, prob.b)
print("core singular values:", np.array2string(core.sigma, precision=3))
print("projected rhs phi   :", np.array2string(core.phi, precision=3))
print(f"phi_tail = {core.phi_tail:.3e}")

# closed-form solution of the core and the smallest singular value of C
y, smin = randtls.solve_core_closed_form(core)
dense_smin = randtls.singular_values(core.augmented())[-1]
print(f"sigma_min(C): closed form {smin:.6e}, dense SVD {dense_smin:.6e}")

x = randtls.back_transform(core, y)
err = np.linalg.norm(x - prob.x_true) / np.linalg.norm(prob.x_true)
print(f"relative error vs x_true: {err:.3e}")

# the one-call version gives the same answer
sol = randtls.solve_randomized_tls(prob.op, prob.b, cfg)
print("one-call solve agrees:", np.allclose(sol.x, x))
