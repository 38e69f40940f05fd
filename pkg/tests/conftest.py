import numpy as np
import pytest

from hilbertgeom import Disk, Ellipsoid, HalfspacePolytope, Polygon


def make_heptagon(seed: int = 99) -> Polygon:
    """Random convex 7-gon: jittered angles on a circle of radius 1.3."""
    rng = np.random.default_rng(seed)
    ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, 7))
    return Polygon(np.c_[1.3 * np.cos(ang), 1.3 * np.sin(ang)])


@pytest.fixture
def unit_disk():
    return Disk((0.0, 0.0), 1.0)


@pytest.fixture
def square():
    return Polygon([(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)])


@pytest.fixture
def ellipse21():
    return Ellipsoid((0.0, 0.0), (2.0, 1.0))


@pytest.fixture
def heptagon():
    return make_heptagon()


@pytest.fixture
def square_polytope():
    # same body as `square`, but held as halfspaces
    return HalfspacePolytope(
        [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)],
        [1.0, 1.0, 1.0, 1.0],
    )


@pytest.fixture(params=["disk", "square", "ellipse", "heptagon"])
def any_body(request, unit_disk, square, ellipse21, heptagon):
    return {
        "disk": unit_disk,
        "square": square,
        "ellipse": ellipse21,
        "heptagon": heptagon,
    }[request.param]
