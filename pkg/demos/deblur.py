"""Deblur a block image through a matrix-free Kronecker operator.

The blur A = A_r (x) A_c is never formed; the solver only calls A x and A^T y.
Run: python demos/deblur.py   (add --show to plot with matplotlib)
"""

import sys

import numpy as np

import randtls

grid = 32
prob = randtls.make_blur(grid)
sol = randtls.solve_randomized_tls(prob.op, prob.b, randtls.RangeFinderConfig(tolerance=0.1))
err = np.linalg.norm(sol.x - prob.x_true) / np.linalg.norm(prob.x_true)
print(f"grid {grid}: rank {sol.rank}, relative error {err:.3f}, residual {sol.residual_norm:.2e}")

blurred = prob.b.reshape(grid, grid, order="F")
restored = sol.x.reshape(grid, grid, order="F")
truth = prob.x_true.reshape(grid, grid, order="F")
print(f"sharpness (max |gradient|): true {np.abs(np.diff(truth)).max():.2f}, "
      f"blurred {np.abs(np.diff(blurred)).max():.2f}, restored {np.abs(np.diff(restored)).max():.2f}")

if "--show" in sys.argv:
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(9, 3))
    for ax, img, title in zip(axes, (truth, blurred, restored), ("true", "blurred", "restored")):
        ax.imshow(img, cmap="gray")
        ax.set_title(title)
        ax.axis("off")
    plt.show()
