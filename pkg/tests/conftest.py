import random

import numpy as np
import pytest
from hypothesis import strategies as st

from websterlab.scalars import Coefficient
from websterlab.sphere import SpherePoly
from websterlab.structures import rossi_structure, standard_structure

SMALL = st.fractions(min_value=-3, max_value=3, max_denominator=4)
COEFF = st.builds(lambda a, b: Coefficient(a, b), SMALL, SMALL)


@st.composite
def sphere_polys(draw, max_degree=3, max_terms=4):
    n = draw(st.integers(0, max_terms))
    raw = []
    for _ in range(n):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=4, max_size=4))
        while sum(exps) > max_degree:
            i = exps.index(max(exps))
            exps[i] -= 1
        raw.append((tuple(exps), draw(COEFF)))
    return SpherePoly.normalize(raw)


def random_poly(rng: random.Random, max_degree=4, terms=4, real=False) -> SpherePoly:
    raw = []
    for _ in range(terms):
        exps = [0, 0, 0, 0]
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(4)] += 1
        c = Coefficient(rng.randint(-4, 4), rng.randint(-4, 4))
        raw.append((tuple(exps), c))
    f = SpherePoly.normalize(raw)
    return f + f.conj() if real else f


def random_unit_vectors(n: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return [(complex(a, b), complex(c, d)) for a, b, c, d in v]


def quadrature_euclidean(f: SpherePoly, n_eta: int = 24, n_xi: int = 24) -> complex:
    """Hopf coordinates ``z1 = cos(eta) e^{i xi1}``, ``z2 = sin(eta) e^{i xi2}``.

    ``dV = cos(eta) sin(eta) d eta d xi1 d xi2``; Gauss-Legendre in eta and the
    trapezoid rule in the angles, exact for trigonometric polynomials of low degree.
    """
    x, w = np.polynomial.legendre.leggauss(n_eta)
    eta = (x + 1) * np.pi / 4
    w_eta = w * np.pi / 4
    xi = np.arange(n_xi) * 2 * np.pi / n_xi
    e1, x1, x2 = np.meshgrid(eta, xi, xi, indexing="ij")
    z1 = np.cos(e1) * np.exp(1j * x1)
    z2 = np.sin(e1) * np.exp(1j * x2)
    vals = np.zeros_like(z1)
    for (a1, a2, b1, b2), c in f.items():
        vals = vals + complex(c) * z1**a1 * z2**a2 * np.conj(z1) ** b1 * np.conj(z2) ** b2
    jac = np.cos(e1) * np.sin(e1)
    weights = w_eta[:, None, None] * (2 * np.pi / n_xi) ** 2
    return complex(np.sum(vals * jac * weights))


def pythagorean_s(rng: random.Random) -> str:
    m = rng.randint(2, 7)
    n = rng.randint(1, m - 1)
    sign = rng.choice((1, -1))
    return f"{sign * (m * m - n * n)}/{2 * m * n}"


@pytest.fixture(scope="session")
def std():
    return standard_structure()


@pytest.fixture(scope="session")
def rossi34():
    return rossi_structure("3/4")
