import numpy as np
import pytest

from cpai import parse

VARS2 = ("x", "y")
VARS3 = ("x", "y", "z")


@pytest.fixture(scope="session")
def quadrilateral():
    return parse("1+x+x^2+x*y+x^2*y", VARS2)


@pytest.fixture(scope="session")
def paraboloid():
    return parse("1-2*x+x^2+1-2*y+y^2-z", VARS3)


@pytest.fixture(scope="session")
def pinched_edge():
    return parse("z-y-(x-1)^2", VARS3)


@pytest.fixture(scope="session")
def pyramid():
    return parse("1+x+y+x*y+z", VARS3)


def random_torus_point(rng, d, low=0.4, high=1.6):
    """A random complex point with all coordinates bounded away from 0."""
    radii = rng.uniform(low, high, size=d)
    angles = rng.uniform(0, 2 * np.pi, size=d)
    return tuple(r * np.exp(1j * a) for r, a in zip(radii, angles))


def solve_last_coordinate(H, partial_point):
    """Numeric completions of a point to the zero set: roots of H in its
    last variable with the other coordinates fixed."""
    d = H.dimension
    coeffs = {}
    for m, c in H.terms():
        w = complex(c)
        for z, e in zip(partial_point, m[: d - 1]):
            w *= complex(z) ** e
        coeffs[m[d - 1]] = coeffs.get(m[d - 1], 0j) + w
    low = min(coeffs)
    high = max(coeffs)
    poly = np.zeros(high - low + 1, dtype=complex)
    for e, c in coeffs.items():
        poly[e - low] = c
    roots = np.roots(poly[::-1])
    return [complex(r) for r in roots if abs(r) > 1e-9]
