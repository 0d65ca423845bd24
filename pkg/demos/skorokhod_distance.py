"""J1 distance versus uniform distance, with the optimal time change."""

import numpy as np

from cadlag_qv import CadlagPath, j1_distance_compact, uniform_distance
from cadlag_qv.skorokhod import j1_distance_grid_oracle, j1_objective

x = CadlagPath.step([(0.3, 1.0), (0.6, -0.5)], 1.0)
y = CadlagPath.step([(0.35, 1.1), (0.62, -0.5)], 1.0)

d, lam = j1_distance_compact(x, y)
print(f"uniform distance: {uniform_distance(x, y):.6g}")
print(f"J1 distance:      {d:.6g}")
print(f"grid oracle:      {j1_distance_grid_oracle(x, y):.6g}")
print("time change anchors (t -> lambda(t)):")
for a, b in lam.anchors():
    print(f"  {a:.6f} -> {b:.6f}")
print(f"objective at the witness: {j1_objective(x, y, lam):.6g}")

# moving a jump by h costs exactly h when the sizes agree
for h in (0.001, 0.01, 0.1):
    z = CadlagPath.step([(0.3 + h, 1.0), (0.6, -0.5)], 1.0)
    print(f"shift {h:g}: J1 {j1_distance_compact(x, z, with_witness=False)[0]:.6g}, "
          f"uniform {uniform_distance(x, z):g}")
