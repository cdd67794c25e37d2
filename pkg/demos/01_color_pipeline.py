"""Walk one color through every station of the conversion pipeline.

Shows the forward chain xyY -> XYZ -> linear sRGB -> 8-bit codes, the exact
round trips, and what "out of gamut" looks like for a saturated green that
sRGB cannot reproduce.
"""

from chromavib import (
    Chromaticity,
    XYZ_to_linear_sRGB,
    chromaticity_of,
    encoded_to_linear,
    in_gamut,
    linear_to_encoded,
    xyY_to_XYZ,
)

# A near-white chromaticity at the working luminance.
c = Chromaticity(0.3050, 0.3230)
Y = 0.4

t = xyY_to_XYZ(c, Y)
print(f"xyY ({c.x}, {c.y}, Y={Y})")
print(f"  -> XYZ     ({t.X:.6f}, {t.Y:.6f}, {t.Z:.6f})")

lin = XYZ_to_linear_sRGB(t)
print(f"  -> linear  ({lin.r:.6f}, {lin.g:.6f}, {lin.b:.6f})  in gamut: {in_gamut(lin)}")

enc = linear_to_encoded(lin)
print(f"  -> encoded {enc.codes()}")

back = encoded_to_linear(enc)
print(f"  <- decoded ({back.r:.6f}, {back.g:.6f}, {back.b:.6f})")
print(f"  re-encoded {linear_to_encoded(back).codes()}  (identity on codes)")

round_trip = chromaticity_of(t)
print(f"  chromaticity recovered: ({round_trip.x:.15f}, {round_trip.y:.15f})")

# D65 white is the display's white point: linear (1,1,1) to a few 1e-4.
white = XYZ_to_linear_sRGB(xyY_to_XYZ(Chromaticity(0.3127, 0.3290), 1.0))
print(f"\nD65 white -> linear ({white.r:.6f}, {white.g:.6f}, {white.b:.6f})")

# A spectral-ish green: inside the xy diagram, outside the sRGB triangle.
green = Chromaticity(0.150, 0.680)
glin = XYZ_to_linear_sRGB(xyY_to_XYZ(green, Y))
print(f"\nsaturated green {green.x, green.y} -> linear "
      f"({glin.r:.4f}, {glin.g:.4f}, {glin.b:.4f})  in gamut: {in_gamut(glin)}")
print("negative red channel = not displayable; the pair generator rejects it")
