"""Atlas geometry: the 25 ellipses and their amplitude-scaled endpoints.

Prints the audit table, shows how endpoint pairs stretch with r, and (if
matplotlib is around) draws the ellipses 10x magnified with a sample pair.
"""

import math

from chromavib import atlas_table, builtin_atlas, endpoints, interpolate_ellipse
from chromavib.colorimetry import Chromaticity

atlas = builtin_atlas()
print(atlas_table().rstrip())

e13 = atlas[12]
print(f"\nellipse 13: center ({e13.center.x}, {e13.center.y}), "
      f"a={e13.a}, b={e13.b}, theta={e13.theta_deg} deg")
for r in (0.0, 1.0, 5.0, 24.4):
    ep = endpoints(e13, r)
    sep = math.hypot(ep.plus.x - ep.minus.x, ep.plus.y - ep.minus.y)
    print(f"  r={r:5.1f}: plus ({ep.plus.x:.6f}, {ep.plus.y:.6f})  "
          f"minus ({ep.minus.x:.6f}, {ep.minus.y:.6f})  |pair| = {sep:.6f} = 2ra")

# A synthetic ellipse anywhere on the diagram, interpolated from the atlas.
probe = Chromaticity(0.33, 0.33)
synth = interpolate_ellipse(probe, atlas)
print(f"\ninterpolated at ({probe.x}, {probe.y}): "
      f"a={synth.a:.5f}, b={synth.b:.5f}, theta={synth.theta_deg:.1f} deg")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Ellipse as MplEllipse
except ImportError:
    print("\n(matplotlib not installed; skipping the plot)")
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(6, 6))
for e in atlas:
    # matplotlib rotates counterclockwise from +x; our axis direction is
    # (sin theta, cos theta), i.e. theta measured from +y toward +x
    ax.add_patch(MplEllipse(
        (e.center.x, e.center.y), 20 * e.a, 20 * e.b,
        angle=90.0 - e.theta_deg, fill=False, lw=0.8,
    ))
    ax.plot(e.center.x, e.center.y, "k.", ms=2)
ep = endpoints(e13, 24.4)
ax.plot([ep.plus.x, ep.minus.x], [ep.plus.y, ep.minus.y], "r-", lw=1)
ax.set_xlim(0, 0.75)
ax.set_ylim(0, 0.85)
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_title("MacAdam ellipses (10x) and one r=24.4 pair")
fig.savefig("demos/ellipses.png", dpi=150)
print("\nwrote demos/ellipses.png")
