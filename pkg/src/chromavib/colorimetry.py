"""Conversions among xyY, CIE XYZ, linear sRGB and 8-bit encoded sRGB.

The pipeline runs in one direction for stimulus generation:

    Chromaticity (x, y) + luminance Y  ->  TristimulusXYZ  ->  LinearRGB  ->  EncodedSRGB

and each station is available as its own function so every step stays testable.
Luminance is display-relative: Y=1 is the display's white, not an absolute
cd/m^2 level.  All conversions assume the D65 white point and the CIE 1931
2-degree observer; since source and destination share D65 there is no
chromatic-adaptation step.

Everything here is a pure function over small immutable values, safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Tolerances: CHROMA_EPS guards divisions by y or X+Y+Z; GAMUT_EPS absorbs
# float noise at the gamut boundary (values inside the band are clamped,
# values beyond it are rejected rather than clipped, because clipping would
# silently change the stimulus chromaticity).
CHROMA_EPS = 1e-10
GAMUT_EPS = 1e-9

# XYZ -> linear sRGB, IEC 61966-2-1 (sRGB), D65, 2-degree observer.
# The standard's published 7-digit coefficients are pinned verbatim; deriving
# the matrix from the primaries' chromaticities gives values that differ from
# these in the 4th decimal, and the published numbers are the interoperable
# convention.
XYZ_TO_LINEAR_SRGB = (
    (3.2406255, -1.5372080, -0.4986286),
    (-0.9689307, 1.8757561, 0.0415175),
    (0.0557101, -0.2040211, 1.0569959),
)


class DegenerateChromaticity(ValueError):
    """y is (numerically) zero, so the xyY -> XYZ division is undefined."""


class ZeroTristimulus(ValueError):
    """X+Y+Z is (numerically) zero, so chromaticity is undefined."""


class OutOfGamut(ValueError):
    """A linear RGB value lies outside [0, 1] beyond tolerance.

    ``channels`` names the offending channel(s); ``where`` optionally labels
    which stimulus endpoint produced the value (set by the pair generator).
    """

    def __init__(self, channels: tuple[str, ...], where: str | None = None):
        self.channels = channels
        self.where = where
        loc = f"{where} endpoint: " if where else ""
        super().__init__(f"{loc}channel(s) {','.join(channels)} outside [0, 1]")


@dataclass(frozen=True)
class Chromaticity:
    """CIE (x, y) point. Valid points satisfy x >= 0, y > 0, x + y <= 1."""

    x: float
    y: float

    @property
    def is_valid(self) -> bool:
        return self.x >= 0.0 and self.y > 0.0 and self.x + self.y <= 1.0


@dataclass(frozen=True)
class TristimulusXYZ:
    X: float
    Y: float
    Z: float


@dataclass(frozen=True)
class LinearRGB:
    """Linear-light channel values. In gamut iff every channel is in [0, 1]."""

    r: float
    g: float
    b: float

    def channels(self) -> tuple[float, float, float]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class EncodedSRGB:
    """Gamma-encoded 8-bit sRGB codes, each in 0..255."""

    r8: int
    g8: int
    b8: int

    def __post_init__(self):
        for name, v in (("r8", self.r8), ("g8", self.g8), ("b8", self.b8)):
            if not isinstance(v, int) or not 0 <= v <= 255:
                raise ValueError(f"{name}={v!r} is not an integer in 0..255")

    def codes(self) -> tuple[int, int, int]:
        return (self.r8, self.g8, self.b8)


def xyY_to_XYZ(c: Chromaticity, Y: float) -> TristimulusXYZ:
    """Lift a chromaticity to tristimulus values at luminance Y.

    X = x*Y/y, Z = (1-x-y)*Y/y; the returned Y is the argument, untouched.

    Raises DegenerateChromaticity when c.y <= 1e-10.
    """
    if c.y <= CHROMA_EPS:
        raise DegenerateChromaticity(f"y={c.y!r} too close to zero")
    return TristimulusXYZ(c.x * Y / c.y, Y, (1.0 - c.x - c.y) * Y / c.y)


def chromaticity_of(t: TristimulusXYZ) -> Chromaticity:
    """Project tristimulus values back to the (x, y) diagram.

    Raises ZeroTristimulus when X+Y+Z <= 1e-10.
    """
    s = t.X + t.Y + t.Z
    if s <= CHROMA_EPS:
        raise ZeroTristimulus(f"X+Y+Z={s!r} too close to zero")
    return Chromaticity(t.X / s, t.Y / s)


def XYZ_to_linear_sRGB(t: TristimulusXYZ) -> LinearRGB:
    """Apply the pinned XYZ -> linear sRGB matrix.

    No clipping: out-of-gamut inputs yield channels outside [0, 1], which is
    exactly what `in_gamut` inspects.
    """
    m = XYZ_TO_LINEAR_SRGB
    return LinearRGB(
        m[0][0] * t.X + m[0][1] * t.Y + m[0][2] * t.Z,
        m[1][0] * t.X + m[1][1] * t.Y + m[1][2] * t.Z,
        m[2][0] * t.X + m[2][1] * t.Y + m[2][2] * t.Z,
    )


def in_gamut(l: LinearRGB) -> bool:
    """True iff every channel is within [0, 1] up to GAMUT_EPS."""
    lo, hi = -GAMUT_EPS, 1.0 + GAMUT_EPS
    return lo <= l.r <= hi and lo <= l.g <= hi and lo <= l.b <= hi


def _out_channels(l: LinearRGB) -> tuple[str, ...]:
    lo, hi = -GAMUT_EPS, 1.0 + GAMUT_EPS
    return tuple(
        name for name, v in zip("rgb", l.channels()) if not lo <= v <= hi
    )


def _encode_channel(v: float) -> int:
    # Standard sRGB transfer, then round-half-up to an 8-bit code.
    if v <= 0.0031308:
        u = 12.92 * v
    else:
        u = 1.055 * v ** (1.0 / 2.4) - 0.055
    return int(math.floor(u * 255.0 + 0.5))


def linear_to_encoded(l: LinearRGB) -> EncodedSRGB:
    """Gamma-encode an in-gamut linear color to 8-bit sRGB codes.

    Channels within GAMUT_EPS of [0, 1] are clamped; anything further out
    raises OutOfGamut (clipping would alter the chromaticity being displayed).
    """
    bad = _out_channels(l)
    if bad:
        raise OutOfGamut(bad)
    clamped = (min(max(v, 0.0), 1.0) for v in l.channels())
    r8, g8, b8 = (_encode_channel(v) for v in clamped)
    return EncodedSRGB(r8, g8, b8)


def _decode_channel(code: int) -> float:
    u = code / 255.0
    if u <= 0.04045:
        return u / 12.92
    return ((u + 0.055) / 1.055) ** 2.4


def encoded_to_linear(e: EncodedSRGB) -> LinearRGB:
    """Invert the sRGB transfer; encode(decode(code)) == code for all codes."""
    return LinearRGB(
        _decode_channel(e.r8), _decode_channel(e.g8), _decode_channel(e.b8)
    )
