"""Extremal rays of the Shannon cone on four variables, with and without the
Ingleton inequalities, by exact double description.  Takes about half a
minute."""
import time

from entrocone.geometry.cones import abc, extremal_rays, orbits, smc
from entrocone.geometry.vectors import lambda4, spc

for name, spec in (("Shannon", smc(lambda4())), ("Shannon + Ingleton", abc())):
    t = time.perf_counter()
    rays = extremal_rays(spec)
    orbs = orbits(rays)
    print(f"{name}: {len(rays)} rays in {len(orbs)} S4-orbits "
          f"({time.perf_counter() - t:.1f}s)")
    for o in orbs:
        print(f"  size {len(o)}: {o[0]}")
    print("  spc is a ray:", spc() in rays)
