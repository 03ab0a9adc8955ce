"""Random inputs for sweeps and property checks."""

from __future__ import annotations

import numpy as np

from .algebra import MatPoly, Poly
from .dynsys import FiniteSystem, orbit_data
from .norms import CrossedElement


def random_function(rng: np.random.Generator, n: int, density: float = 1.0) -> np.ndarray:
    f = rng.normal(size=n) + 1j * rng.normal(size=n)
    if density < 1.0:
        f *= rng.random(n) < density
    return f


def random_poly(rng: np.random.Generator, sys: FiniteSystem, side: str,
                max_degree: int = 4, density: float = 1.0) -> Poly:
    """Poly with a uniform random degree and complex Gaussian coefficients."""
    d = int(rng.integers(0, max_degree + 1))
    return Poly(sys, side, {k: random_function(rng, sys.n, density) for k in range(d + 1)})


def random_radical_poly(rng: np.random.Generator, sys: FiniteSystem, side: str,
                        max_degree: int = 3) -> Poly:
    """Poly whose coefficients all vanish on the eventual image."""
    off = 1.0 - orbit_data(sys).eventual_image.indicator()
    d = int(rng.integers(0, max_degree + 1))
    return Poly(sys, side, {k: random_function(rng, sys.n) * off for k in range(d + 1)})


def random_matpoly(rng: np.random.Generator, sys: FiniteSystem, side: str, nu: int = 2,
                   max_degree: int = 3) -> MatPoly:
    d = int(rng.integers(0, max_degree + 1))
    return MatPoly([[Poly(sys, side, {k: random_function(rng, sys.n) for k in range(d + 1)})
                     for _ in range(nu)] for _ in range(nu)])


def random_crossed(rng: np.random.Generator, sys: FiniteSystem, max_degree: int = 3
                   ) -> CrossedElement:
    return CrossedElement(sys, {k: random_function(rng, sys.n)
                                for k in range(-max_degree, max_degree + 1)})


def random_system(rng: np.random.Generator, n_max: int, permutation: bool = False
                  ) -> FiniteSystem:
    n = int(rng.integers(1, n_max + 1))
    if permutation:
        return FiniteSystem(tuple(int(v) for v in rng.permutation(n)))
    return FiniteSystem(tuple(int(v) for v in rng.integers(0, n, size=n)))
