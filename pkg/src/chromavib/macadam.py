"""The 25 MacAdam ellipses and geometry derived from them.

Each ellipse is a just-noticeable-difference region on the xy chromaticity
diagram: center, major/minor semi-axes, rotation.  Pair endpoints are placed
along the major axis scaled by an amplitude ratio r:

    p+/-(r) = center +/- r * a * (sin(theta), cos(theta))

Note the axis direction convention: sin on x, cos on y.  theta is stored in
degrees exactly as tabulated (so the dataset stays bit-comparable to its
source) and converted to radians only where used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .colorimetry import Chromaticity

# id, cx, cy, a, b, theta_deg -- major/minor SEMI-axis lengths in xy units.
_MACADAM_1942 = (
    (1, 0.1600, 0.0570, 0.00085, 0.00035, 62.5),
    (2, 0.1870, 0.1180, 0.00220, 0.00055, 77.0),
    (3, 0.2530, 0.1250, 0.00250, 0.00050, 55.5),
    (4, 0.1500, 0.6800, 0.00960, 0.00230, 105.0),
    (5, 0.1310, 0.5210, 0.00470, 0.00200, 112.5),
    (6, 0.2120, 0.5500, 0.00580, 0.00230, 100.0),
    (7, 0.2580, 0.4500, 0.00500, 0.00200, 92.0),
    (8, 0.1520, 0.3650, 0.00380, 0.00190, 110.0),
    (9, 0.2800, 0.3850, 0.00400, 0.00150, 75.5),
    (10, 0.3800, 0.4980, 0.00440, 0.00120, 70.0),
    (11, 0.1600, 0.2000, 0.00210, 0.00095, 104.0),
    (12, 0.2280, 0.2500, 0.00310, 0.00090, 72.0),
    (13, 0.3050, 0.3230, 0.00230, 0.00090, 58.0),
    (14, 0.3850, 0.3930, 0.00380, 0.00160, 65.5),
    (15, 0.4720, 0.3990, 0.00320, 0.00140, 51.0),
    (16, 0.5270, 0.3500, 0.00260, 0.00130, 20.0),
    (17, 0.4750, 0.3000, 0.00290, 0.00110, 28.5),
    (18, 0.5100, 0.2360, 0.00240, 0.00120, 29.5),
    (19, 0.5960, 0.2830, 0.00260, 0.00130, 13.0),
    (20, 0.3440, 0.2840, 0.00230, 0.00090, 60.0),
    (21, 0.3900, 0.2370, 0.00250, 0.00100, 47.0),
    (22, 0.4410, 0.1980, 0.00280, 0.00095, 34.5),
    (23, 0.2780, 0.2230, 0.00240, 0.00055, 57.5),
    (24, 0.3000, 0.1630, 0.00290, 0.00060, 54.0),
    (25, 0.3650, 0.1530, 0.00360, 0.00095, 40.0),
)


class ChromaticityOutOfDiagram(ValueError):
    """A computed endpoint left {x >= 0, y > 0, x + y <= 1}."""


@dataclass(frozen=True)
class MacAdamEllipse:
    """One discrimination ellipse. id 0 marks a synthetic (interpolated) one."""

    id: int
    center: Chromaticity
    a: float
    b: float
    theta_deg: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0 and self.a >= self.b):
            raise ValueError(f"axes must satisfy a >= b > 0, got a={self.a}, b={self.b}")
        if not 0.0 <= self.theta_deg < 180.0:
            raise ValueError(f"theta_deg={self.theta_deg} outside [0, 180)")


@dataclass(frozen=True)
class EndpointPair:
    """Major-axis endpoints at ratio r; midpoint is the source ellipse center."""

    plus: Chromaticity
    minus: Chromaticity
    source_id: int
    r: float


def builtin_atlas() -> list[MacAdamEllipse]:
    """The 25 tabulated ellipses, ids 1..25, values exactly as tabulated."""
    return [
        MacAdamEllipse(n, Chromaticity(cx, cy), a, b, th)
        for n, cx, cy, a, b, th in _MACADAM_1942
    ]


def endpoint_coords(
    e: MacAdamEllipse, r: float
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Raw (plus, minus) coordinates from the axis formula, unvalidated.

    This is the computational core of `endpoints`; it applies the formula even
    where the result leaves the chromaticity diagram, which is useful for
    auditing the geometry itself.
    """
    th = math.radians(e.theta_deg)
    dx = r * e.a * math.sin(th)
    dy = r * e.a * math.cos(th)
    cx, cy = e.center.x, e.center.y
    return (cx + dx, cy + dy), (cx - dx, cy - dy)


def endpoints(e: MacAdamEllipse, r: float) -> EndpointPair:
    """Scaled major-axis endpoint pair for ratio r >= 0.

    Raises ChromaticityOutOfDiagram if either endpoint leaves the diagram.
    """
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    (px, py), (mx, my) = endpoint_coords(e, r)
    plus, minus = Chromaticity(px, py), Chromaticity(mx, my)
    for label, c in (("plus", plus), ("minus", minus)):
        if not c.is_valid:
            raise ChromaticityOutOfDiagram(
                f"{label} endpoint ({c.x:.6f}, {c.y:.6f}) of ellipse {e.id} "
                f"at r={r:g} leaves the xy diagram"
            )
    return EndpointPair(plus, minus, e.id, r)


def metric_matrix(e: MacAdamEllipse) -> tuple[tuple[float, float], tuple[float, float]]:
    """Inverse-covariance form of the ellipse: {d : d^T M d <= 1}.

    Built from the same axis convention as the endpoint formula, i.e. the
    major axis points along (sin theta, cos theta).
    """
    th = math.radians(e.theta_deg)
    ux, uy = math.sin(th), math.cos(th)
    vx, vy = math.cos(th), -math.sin(th)
    la, lb = 1.0 / (e.a * e.a), 1.0 / (e.b * e.b)
    m01 = la * ux * uy + lb * vx * vy
    return (
        (la * ux * ux + lb * vx * vx, m01),
        (m01, la * uy * uy + lb * vy * vy),
    )


def _axes_from_metric(
    m: tuple[tuple[float, float], tuple[float, float]]
) -> tuple[float, float, float]:
    # Closed-form symmetric 2x2 eigendecomposition; the smaller eigenvalue
    # carries the major axis.
    p, q, s = m[0][0], m[0][1], m[1][1]
    half_tr = 0.5 * (p + s)
    disc = math.sqrt(max(half_tr * half_tr - (p * s - q * q), 0.0))
    lmin, lmax = half_tr - disc, half_tr + disc
    if abs(q) > 1e-30:
        ux, uy = lmin - s, q
    else:
        ux, uy = (1.0, 0.0) if p <= s else (0.0, 1.0)
    norm = math.hypot(ux, uy)
    ux, uy = ux / norm, uy / norm
    a = 1.0 / math.sqrt(lmin)
    b = 1.0 / math.sqrt(lmax)
    theta = math.degrees(math.atan2(ux, uy)) % 180.0
    return a, b, theta


def interpolate_ellipse(
    p: Chromaticity, atlas: list[MacAdamEllipse]
) -> MacAdamEllipse:
    """Synthesize an ellipse at an arbitrary chromaticity.

    Atlas ellipses are averaged in metric-matrix space with inverse
    squared-distance weights; averaging the matrices rather than (a, b, theta)
    avoids angle-wraparound artifacts.  If p coincides with an atlas center
    (within 1e-9) that ellipse's shape is returned unchanged.  The result
    carries id 0 to mark it synthetic, except in the coincident case.
    """
    if not atlas:
        raise ValueError("atlas must be non-empty")
    if not p.is_valid:
        raise ValueError(f"({p.x}, {p.y}) is not a valid chromaticity")

    for e in atlas:
        if math.hypot(p.x - e.center.x, p.y - e.center.y) <= 1e-9:
            return MacAdamEllipse(e.id, p, e.a, e.b, e.theta_deg)

    acc = [[0.0, 0.0], [0.0, 0.0]]
    total = 0.0
    for e in atlas:
        d2 = (p.x - e.center.x) ** 2 + (p.y - e.center.y) ** 2
        w = 1.0 / (d2 + 1e-9)
        m = metric_matrix(e)
        for i in range(2):
            for j in range(2):
                acc[i][j] += w * m[i][j]
        total += w
    mean = tuple(tuple(v / total for v in row) for row in acc)
    a, b, theta = _axes_from_metric(mean)
    return MacAdamEllipse(0, p, a, b, theta)


def atlas_table(atlas: list[MacAdamEllipse] | None = None) -> str:
    """Plain-text audit dump: one row per ellipse (id cx cy a b theta_deg)."""
    rows = ["# id      cx      cy        a        b  theta_deg"]
    for e in atlas if atlas is not None else builtin_atlas():
        rows.append(
            f"{e.id:4d}  {e.center.x:.4f}  {e.center.y:.4f}  "
            f"{e.a:.5f}  {e.b:.5f}  {e.theta_deg:9.1f}"
        )
    return "\n".join(rows) + "\n"
