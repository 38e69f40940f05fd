"""Seeded rejection samplers for interior points and metric balls."""

from __future__ import annotations

import numpy as np

from .bodies import ConvexBody
from .metric import ball_boundary, distance_pairs

_MAX_ROUNDS = 200


def sample_interior(
    body: ConvexBody,
    n: int,
    rng: np.random.Generator,
    clearance: float = 0.0,
) -> np.ndarray:
    """Draw n points with signed gap below -clearance, uniformly from the box."""
    lo, hi = body.bounding_box()
    out = np.empty((0, body.dimension))
    for _ in range(_MAX_ROUNDS):
        if out.shape[0] >= n:
            break
        cand = rng.uniform(lo, hi, size=(max(2 * n, 64), body.dimension))
        keep = body.signed_gap(cand) < -max(clearance, body.boundary_tol())
        out = np.vstack([out, cand[keep]])
    if out.shape[0] < n:
        raise RuntimeError("rejection sampling failed; clearance too large for the body")
    return out[:n]


def ball_box(body: ConvexBody, center, t: float, n_probe: int = 128) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean bounding box of the sampled metric sphere about center."""
    bb = ball_boundary(body, center, t, n_probe)
    return bb.samples.min(axis=0), bb.samples.max(axis=0)


def ball_candidates(
    body: ConvexBody,
    center,
    t: float,
    attempts: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Box-rejection draw: `attempts` box samples filtered to the metric ball.

    The returned count is random; it is the accepted subset of exactly
    ``attempts`` uniform draws from the bounding box of the ball boundary.
    """
    c = np.asarray(center, dtype=float)
    lo, hi = ball_box(body, c, t)
    cand = rng.uniform(lo, hi, size=(int(attempts), body.dimension))
    keep = body.signed_gap(cand) < -body.boundary_tol()
    cand = cand[keep]
    C = np.broadcast_to(c, cand.shape)
    keep2 = distance_pairs(body, C, cand) <= t
    return cand[keep2]


def sample_ball(
    body: ConvexBody,
    center,
    t: float,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw exactly n points of the closed metric ball B(center, t)."""
    out = np.empty((0, body.dimension))
    for _ in range(_MAX_ROUNDS):
        if out.shape[0] >= n:
            break
        got = ball_candidates(body, center, t, max(2 * n, 64), rng)
        out = np.vstack([out, got])
    if out.shape[0] < n:
        raise RuntimeError("metric ball rejection sampling failed to fill the request")
    return out[:n]
