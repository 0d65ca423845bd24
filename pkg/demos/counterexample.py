"""Why q_n and not p_n: a unit step at an irrational time.

The jump at t0 = sqrt(2)/2 is never a dyadic point. q_n books the covering
increment at its left endpoint and so sees the jump by time t0; p_n waits
for the right endpoint, which always lies beyond t0.
"""

import math

from cadlag_qv import CadlagPath, PartitionScheme, p_n, q_n, qv_limit, s_n, uniform_distance
from cadlag_qv.skorokhod import j1_distance_compact

t0 = math.sqrt(2) / 2
x = CadlagPath.step([(t0, 1.0)], 1.0)
dyadic = PartitionScheme("dyadic")

print(f"{'n':>3} {'q_n(t0)':>8} {'s_n(t0)':>8} {'p_n(t0)':>8} {'uniform':>8} {'J1':>10}")
dec, report = qv_limit(x, dyadic, range(4, 13), tol=0.01)
for n in range(4, 13):
    p = dyadic.generate(n)
    q = q_n(x, p)
    u = uniform_distance(q, dec.total)
    d, _ = j1_distance_compact(q, dec.total)
    print(f"{n:>3} {q.evaluate(t0):>8g} {s_n(x, p, t0):>8g} {p_n(x, p).evaluate(t0):>8g} {u:>8g} {d:>10.3g}")

print(f"\nlimit mode: {report.mode}")
print(f"jump part: {dec.jump_part}; continuous part at 1: {dec.continuous_part.evaluate(1.0)}")
