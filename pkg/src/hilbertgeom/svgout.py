"""Deterministic SVG rendering for bodies, balls, covers, and packings.

Output is a fixed 1000 x 1000 viewport with the y axis flipped so that the
mathematical orientation (counterclockwise positive) matches the picture.
All coordinates are printed with 6 decimals and elements are emitted in a
fixed order, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import ConvexBody
from .cover import CoverPiece, SphereField, TWO_PI

VIEW = 1000.0
MARGIN = 40.0

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#bcbd22",
)


class Frame:
    """Affine world-to-viewport map with a flipped y axis."""

    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
        self.scale = (VIEW - 2.0 * MARGIN) / span
        self.cx = 0.5 * (lo[0] + hi[0])
        self.cy = 0.5 * (lo[1] + hi[1])

    def map(self, p) -> tuple[float, float]:
        x = VIEW / 2.0 + (p[0] - self.cx) * self.scale
        y = VIEW / 2.0 - (p[1] - self.cy) * self.scale
        return x, y

    def pts(self, P: np.ndarray) -> str:
        return " ".join("%.6f,%.6f" % self.map(p) for p in P)


def _polyline(frame: Frame, P: np.ndarray, color: str, width: float, closed: bool) -> str:
    tag = "polygon" if closed else "polyline"
    return (
        f'<{tag} points="{frame.pts(P)}" fill="none" '
        f'stroke="{color}" stroke-width="{width:.6f}"/>'
    )


def _dot(frame: Frame, p, color: str, radius: float) -> str:
    x, y = frame.map(p)
    return f'<circle cx="{x:.6f}" cy="{y:.6f}" r="{radius:.6f}" fill="{color}"/>'


def _document(lines: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW:.0f}" '
        f'height="{VIEW:.0f}" viewBox="0 0 {VIEW:.0f} {VIEW:.0f}">'
    )
    body = "\n".join(lines)
    return f"{head}\n{body}\n</svg>\n"


def _frame_for(body: ConvexBody) -> tuple[Frame, np.ndarray]:
    outline = body.outline(512)
    lo, hi = body.bounding_box()
    return Frame(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)), outline


def render_body(body: ConvexBody) -> str:
    frame, outline = _frame_for(body)
    return _document([_polyline(frame, outline, "#000000", 2.0, True)])


def fmt6(v: float) -> str:
    # round first so negative dust prints as 0.000000, not -0.000000
    return "%.6f" % (round(float(v), 6) + 0.0)


def coord_header(label: str, points: np.ndarray) -> str:
    coords = " ".join(f"{fmt6(p[0])},{fmt6(p[1])}" for p in np.asarray(points, dtype=float))
    return f"<!-- {label}: {coords} -->"


def render_ball(body: ConvexBody, ball_points: np.ndarray, center) -> str:
    frame, outline = _frame_for(body)
    pts = np.asarray(ball_points, dtype=float)
    lines = [
        coord_header("ball-samples", pts),
        _polyline(frame, outline, "#000000", 2.0, True),
        _polyline(frame, pts, PALETTE[0], 1.5, True),
        _dot(frame, center, PALETTE[1], 3.0),
    ]
    return _document(lines)


def render_cover(body: ConvexBody, pieces: list[CoverPiece], arc_samples: int = 256) -> str:
    frame, outline = _frame_for(body)
    lines = [_polyline(frame, outline, "#000000", 2.0, True)]
    if pieces:
        field = SphereField(body, pieces[0].base)
        lines.append(_dot(frame, pieces[0].base, "#000000", 3.0))
        for p in pieces:
            # pieces are colored by level parity so neighbours contrast
            color = PALETTE[p.level % 2]
            if p.level == 0:
                thetas = p.width * np.arange(arc_samples + 1) / arc_samples
                lines.append(_polyline(frame, field.points(thetas, p.r_outer), color, 1.5, False))
                continue
            thetas = p.theta_start + p.width * np.arange(arc_samples + 1) / arc_samples
            lines.append(_polyline(frame, field.points(thetas, p.r_outer), color, 1.5, False))
            ts = np.linspace(p.r_inner, p.r_outer, 16)
            for th in (p.theta_start, p.theta_end):
                side = field.points(np.full(ts.shape, th % TWO_PI if th >= TWO_PI else th), ts)
                lines.append(_polyline(frame, side, color, 1.0, False))
    return _document(lines)


def render_packing(body: ConvexBody, points: np.ndarray, center) -> str:
    frame, outline = _frame_for(body)
    lines = [_polyline(frame, outline, "#000000", 2.0, True)]
    lines.append(_dot(frame, center, PALETTE[1], 4.0))
    for p in np.asarray(points, dtype=float):
        lines.append(_dot(frame, p, PALETTE[0], 2.5))
    return _document(lines)
