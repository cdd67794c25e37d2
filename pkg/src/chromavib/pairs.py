"""Displayable color-vibration pairs and r-sweep stimulus sets.

A pair is the two major-axis endpoints of a MacAdam ellipse at amplitude
ratio r, lifted to luminance Y and encoded for an sRGB display, together with
the fused color (the center chromaticity at the same Y) that an observer sees
when the two alternate above the fusion frequency.

Gamut handling is strict: a pair either converts cleanly or is rejected with
a machine-readable reason.  Because the displayable region at fixed Y is
convex in xy, the in-gamut amplitudes for any ellipse form a prefix interval
[0, r*], which `max_in_gamut_r` locates by bisection.

The default color choice (top eight ellipses by gamut reach) is a mechanical
stand-in: at Y=0.4 exactly eight centers are displayable at all, so the rule
reduces to "every displayable color", but any other selection can be passed
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colorimetry import (
    Chromaticity,
    EncodedSRGB,
    LinearRGB,
    OutOfGamut,
    XYZ_to_linear_sRGB,
    in_gamut,
    linear_to_encoded,
    xyY_to_XYZ,
)
from .macadam import (
    ChromaticityOutOfDiagram,
    MacAdamEllipse,
    builtin_atlas,
    endpoints,
)

DEFAULT_LUMINANCE = 0.4

# Default sweep construction: rank ellipses by how far their major axis can
# stretch before leaving the gamut, keep the best DEFAULT_COLOR_COUNT, and
# give each a linear grid from R_MIN up to GRID_HEADROOM of its own limit,
# capped at R_CAP.
DEFAULT_COLOR_COUNT = 8
DEFAULT_GRID_SIZE = 8
R_MIN = 1.0
R_CAP = 40.0
GRID_HEADROOM = 0.95
RANKING_R_HI = 50.0


class CenterOutOfGamut(OutOfGamut):
    """The ellipse center itself is not displayable at this luminance."""


@dataclass(frozen=True)
class ColorVibrationPair:
    source_id: int
    r: float
    Y: float
    plus_xy: Chromaticity
    minus_xy: Chromaticity
    plus_srgb: EncodedSRGB
    minus_srgb: EncodedSRGB
    fused_srgb: EncodedSRGB


@dataclass(frozen=True)
class Rejection:
    source_id: int
    r: float
    reason: str


@dataclass(frozen=True)
class StimulusSet:
    """Every requested (color, r) lands in exactly one of pairs / rejected."""

    pairs: tuple[ColorVibrationPair, ...]
    rejected: tuple[Rejection, ...]
    r_grid: dict[int, tuple[float, ...]]
    Y: float

    @property
    def color_ids(self) -> list[int]:
        return sorted(self.r_grid)


def _linear_of(c: Chromaticity, Y: float) -> LinearRGB:
    return XYZ_to_linear_sRGB(xyY_to_XYZ(c, Y))


def make_pair(e: MacAdamEllipse, r: float, Y: float = DEFAULT_LUMINANCE) -> ColorVibrationPair:
    """Build one displayable pair, or raise.

    Raises ChromaticityOutOfDiagram (endpoint left the diagram) or OutOfGamut
    tagged with the offending endpoint and channels.
    """
    if not 0.0 < Y <= 1.0:
        raise ValueError(f"Y must be in (0, 1], got {Y}")
    ep = endpoints(e, r)
    encoded = {}
    for label, c in (("center", e.center), ("plus", ep.plus), ("minus", ep.minus)):
        lin = _linear_of(c, Y)
        if not in_gamut(lin):
            bad = tuple(
                name
                for name, v in zip("rgb", lin.channels())
                if not -1e-9 <= v <= 1.0 + 1e-9
            )
            raise OutOfGamut(bad, where=label)
        encoded[label] = linear_to_encoded(lin)
    return ColorVibrationPair(
        source_id=e.id,
        r=r,
        Y=Y,
        plus_xy=ep.plus,
        minus_xy=ep.minus,
        plus_srgb=encoded["plus"],
        minus_srgb=encoded["minus"],
        fused_srgb=encoded["center"],
    )


def _pair_ok(e: MacAdamEllipse, r: float, Y: float) -> bool:
    try:
        make_pair(e, r, Y)
        return True
    except (OutOfGamut, ChromaticityOutOfDiagram):
        return False


def max_in_gamut_r(
    e: MacAdamEllipse, Y: float = DEFAULT_LUMINANCE, r_hi: float = RANKING_R_HI
) -> float:
    """Largest r in [0, r_hi] whose pair is displayable, to 1e-6.

    Relies on the prefix-interval property of the displayable amplitudes.
    Raises CenterOutOfGamut when even r=0 fails.
    """
    if r_hi <= 0.0:
        raise ValueError(f"r_hi must be > 0, got {r_hi}")
    if not _pair_ok(e, 0.0, Y):
        raise CenterOutOfGamut((), where=f"center of ellipse {e.id}")
    if _pair_ok(e, r_hi, Y):
        return r_hi
    lo, hi = 0.0, r_hi
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if _pair_ok(e, mid, Y):
            lo = mid
        else:
            hi = mid
    return lo


def _rejection_reason(e: MacAdamEllipse, r: float, Y: float) -> str:
    try:
        make_pair(e, r, Y)
    except ChromaticityOutOfDiagram as err:
        label = "plus" if "plus" in str(err) else "minus"
        return f"out-of-diagram:{label}"
    except OutOfGamut as err:
        if err.where == "center":
            return "center-out-of-gamut"
        return f"out-of-gamut:{err.where}:{''.join(err.channels)}"
    raise AssertionError("pair unexpectedly succeeded")


def build_stimulus_set(
    colors: list[MacAdamEllipse],
    r_grid: dict[int, list[float]],
    Y: float = DEFAULT_LUMINANCE,
) -> StimulusSet:
    """Attempt every (color, r); failures become data, not errors.

    Output ordering is deterministic: ascending (ellipse id, r).
    """
    pairs: list[ColorVibrationPair] = []
    rejected: list[Rejection] = []
    for e in sorted(colors, key=lambda el: el.id):
        for r in sorted(r_grid.get(e.id, ())):
            try:
                pairs.append(make_pair(e, r, Y))
            except (OutOfGamut, ChromaticityOutOfDiagram):
                rejected.append(Rejection(e.id, r, _rejection_reason(e, r, Y)))
    grid = {nid: tuple(sorted(rs)) for nid, rs in r_grid.items()}
    return StimulusSet(tuple(pairs), tuple(rejected), grid, Y)


def rank_displayable(
    atlas: list[MacAdamEllipse] | None = None,
    Y: float = DEFAULT_LUMINANCE,
    r_hi: float = RANKING_R_HI,
) -> list[tuple[MacAdamEllipse, float]]:
    """(ellipse, max_in_gamut_r) for every atlas ellipse whose center is
    displayable at Y, sorted by descending reach (ties by id)."""
    ranked = []
    for e in atlas if atlas is not None else builtin_atlas():
        try:
            ranked.append((e, max_in_gamut_r(e, Y, r_hi)))
        except CenterOutOfGamut:
            continue
    ranked.sort(key=lambda t: (-t[1], t[0].id))
    return ranked


def default_r_grid(max_r: float, size: int = DEFAULT_GRID_SIZE) -> list[float]:
    """`size` amplitudes linearly spaced from R_MIN to min(R_CAP, headroom*max_r)."""
    top = max(min(R_CAP, GRID_HEADROOM * max_r), R_MIN)
    if size == 1:
        return [R_MIN]
    step = (top - R_MIN) / (size - 1)
    return [R_MIN + i * step for i in range(size)]


def default_stimulus_set(
    Y: float = DEFAULT_LUMINANCE,
    color_count: int = DEFAULT_COLOR_COUNT,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> StimulusSet:
    """The stock sweep: top `color_count` displayable ellipses, each with a
    `grid_size`-point amplitude grid scaled to its own gamut reach."""
    chosen = rank_displayable(Y=Y)[:color_count]
    grid = {e.id: default_r_grid(mr, grid_size) for e, mr in chosen}
    return build_stimulus_set([e for e, _ in chosen], grid, Y)


# --- JSON round trip ------------------------------------------------------

def pair_to_dict(p: ColorVibrationPair) -> dict:
    return {
        "source_id": p.source_id,
        "r": p.r,
        "Y": p.Y,
        "plus_xy": [p.plus_xy.x, p.plus_xy.y],
        "minus_xy": [p.minus_xy.x, p.minus_xy.y],
        "plus_srgb": list(p.plus_srgb.codes()),
        "minus_srgb": list(p.minus_srgb.codes()),
        "fused_srgb": list(p.fused_srgb.codes()),
    }


def pair_from_dict(d: dict) -> ColorVibrationPair:
    return ColorVibrationPair(
        source_id=d["source_id"],
        r=d["r"],
        Y=d["Y"],
        plus_xy=Chromaticity(*d["plus_xy"]),
        minus_xy=Chromaticity(*d["minus_xy"]),
        plus_srgb=EncodedSRGB(*d["plus_srgb"]),
        minus_srgb=EncodedSRGB(*d["minus_srgb"]),
        fused_srgb=EncodedSRGB(*d["fused_srgb"]),
    )


def stimulus_set_to_dict(s: StimulusSet) -> dict:
    return {
        "schema_version": 1,
        "Y": s.Y,
        "colors": s.color_ids,
        "r_grid": {str(nid): list(rs) for nid, rs in sorted(s.r_grid.items())},
        "pairs": [pair_to_dict(p) for p in s.pairs],
        "rejected": [
            {"source_id": rj.source_id, "r": rj.r, "reason": rj.reason}
            for rj in s.rejected
        ],
    }


def stimulus_set_from_dict(d: dict) -> StimulusSet:
    return StimulusSet(
        pairs=tuple(pair_from_dict(p) for p in d["pairs"]),
        rejected=tuple(
            Rejection(rj["source_id"], rj["r"], rj["reason"]) for rj in d["rejected"]
        ),
        r_grid={int(k): tuple(v) for k, v in d["r_grid"].items()},
        Y=d["Y"],
    )
