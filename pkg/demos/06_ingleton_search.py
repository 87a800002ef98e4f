"""Searching for entropy vectors outside the Abelian cone, and the Phi table.

Hill climbing on joint laws of four bits finds a distribution that violates
the Ingleton inequality.  Its sign is certified exactly, without floats.
"""
from entrocone.explorer import (GridSpec, maximize_alpha15, phi_inner_bound,
                                sample_distributions, sample_group_points)

r = maximize_alpha15(seed=1, budget=20000)
print(f"best alpha15 = {r.best.alpha15:.6f} after {r.iterations} moves, {r.restarts} restarts")
print("exact sign of ing(12;34):", r.ingleton_sign())
print("support:", r.best.source["joint"])

points = list(sample_distributions(0, 300)) + list(sample_group_points(0, 300)) + [r.best]
table = phi_inner_bound(points, GridSpec(resolution=0.25))
print(f"\n{len(table.entries)} buckets, {table.skipped} points on the a1..a4 face")
top = sorted(table.entries.items(), key=lambda kv: -kv[1][0])[:5]
for key, (v, wid) in top:
    print(f"  {key}  max alpha15/s = {v:+.4f}  ({wid})")
