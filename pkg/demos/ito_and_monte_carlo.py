"""Pathwise Itô residuals on one path, then ensemble diagnostics.

Set CADLAG_QV_THREADS to spread the ensemble over worker threads; results
do not change.
"""

from cadlag_qv import CadlagPath, PartitionScheme
from cadlag_qv.calculus import ito_residual, polynomial
from cadlag_qv.mc import Ensemble, ProcessModel, cauchy_in_probability, sample_path, ucp_vs_j1

dyadic = PartitionScheme("dyadic")
cube = polynomial([0, 0, 0, 1], "v^3")

w = sample_path(ProcessModel("brownian"), 2024)
x = w + CadlagPath.step([(0.4321, 1.0)], 1.0)
print("Itô residual of v^3 at t=1 on a Brownian path with one unit jump")
for n in range(8, 15):
    print(f"  level {n:2d}: {ito_residual(cube, x, dyadic, n, 1.0):+.3e}")

levels = range(8, 13)
brownian = Ensemble(ProcessModel("brownian", resolution=14), 100, 7)
poisson = Ensemble(ProcessModel("poisson", rate=2.0), 100, 7)
rep = cauchy_in_probability(brownian, dyadic, levels, eps=0.1)
print("\nBrownian Cauchy fractions, J1 eps=0.1:", [round(v, 3) for v in rep.fractions])
print("mean q_n(1):", [round(v, 4) for v in rep.extra["mean_q_at_horizon"]])
for name, e in (("brownian", brownian), ("poisson", poisson)):
    r = ucp_vs_j1(e, dyadic, levels, eps=0.1)
    print(f"{name:9s} uniform misses {[round(v, 2) for v in r.uniform]} -> {r.verdict}")
