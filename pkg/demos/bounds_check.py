"""Compare observed errors with the probabilistic bounds.

Range bound on a synthetic spectrum, then the residual bound on shaw.
Run: python demos/bounds_check.py
"""

import numpy as np

import randtls
from randtls.experiments import range_bound_trials

print("range bound, sigma_j = 0.7^(j-1), n = 64, k = 10, s = 5, delta = 0.01")
print(f"{'p':>2} {'q':>2} {'bound':>10} {'worst seen':>11} {'violations':>10}")
for q in range(3):
    for p in (0, 5):
        viol, bound, worst = range_bound_trials(p=p, q=q, trials=100)
        print(f"{p:>2} {q:>2} {bound:10.3e} {worst:11.3e} {viol:>10}")

prob = randtls.make_problem_1d("shaw", 256)
sigma = randtls.singular_values(prob.matrix())
ratios = []
for seed in range(30):
    sol = randtls.solve_randomized_tls(prob.op, prob.b, randtls.RangeFinderConfig(seed=seed))
    k = max(sol.rank - 5, 0)
    rep = randtls.bound_report(sigma, sol, k, sol.rank - k, 0, 1, 0.01)
    ratios.append(sol.residual_norm / rep.residual_bound)
print(f"\nshaw(256) residual / bound over 30 seeds: max {max(ratios):.2e}")
print(f"c1 = {rep.c1:.3f}, c_delta = {rep.c_delta:.3e} at k = {rep.k}")
