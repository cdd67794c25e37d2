"""Gamut accounting: which colors survive at Y=0.4 and the default sweep.

Only 8 of the 25 ellipse centers are displayable in sRGB at the working
luminance, and each color's usable amplitude range differs -- near-white
centers take r=40+, saturated ones barely r=8. The default stimulus set
adapts each color's 8-point grid to its own reach.
"""

from chromavib import builtin_atlas, default_stimulus_set, max_in_gamut_r, rank_displayable
from chromavib.pairs import CenterOutOfGamut

atlas = builtin_atlas()

print("center displayability at Y=0.4:")
for e in atlas:
    try:
        reach = max_in_gamut_r(e, 0.4, r_hi=50.0)
        print(f"  e{e.id:<2d} ({e.center.x:.3f}, {e.center.y:.3f})  "
              f"displayable, max r = {reach:7.3f}")
    except CenterOutOfGamut:
        print(f"  e{e.id:<2d} ({e.center.x:.3f}, {e.center.y:.3f})  out of gamut")

ranked = rank_displayable(atlas, 0.4)
print(f"\n{len(ranked)} displayable colors, ranked by amplitude reach: "
      f"{[e.id for e, _ in ranked]}")

sset = default_stimulus_set()
print(f"\ndefault sweep: {len(sset.pairs)} pairs, {len(sset.rejected)} rejected")
for nid in sset.color_ids:
    rs = sset.r_grid[nid]
    print(f"  e{nid:<2d} grid: {rs[0]:.1f} .. {rs[-1]:.2f}  ({len(rs)} amplitudes)")

print("\nfirst three pairs as the display sees them:")
for p in sset.pairs[:3]:
    print(f"  e{p.source_id} r={p.r:.2f}: {p.plus_srgb.codes()} <-> "
          f"{p.minus_srgb.codes()}  fused {p.fused_srgb.codes()}")
