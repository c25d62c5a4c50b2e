import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from graphspec import graph_core as gc


def named_corpus():
    """Base graphs used throughout: K2..K4, C3..C6, K_{1,3}, K_{1,4}, P3..P5, Petersen."""
    graphs = {f"K{n}": gc.complete(n) for n in (2, 3, 4)}
    graphs.update({f"C{n}": gc.cycle(n) for n in (3, 4, 5, 6)})
    graphs.update({"K1,3": gc.star(4), "K1,4": gc.star(5)})
    graphs.update({f"P{n}": gc.path(n) for n in (3, 4, 5)})
    graphs["Petersen"] = gc.petersen()
    return graphs


CORPUS = named_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def random_connected_graph(rng: random.Random, p: int, density: float | None = None) -> gc.Graph:
    """Random spanning tree plus random extra edges."""
    order = list(range(p))
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)]) for i in range(1, p)]
    dens = rng.random() if density is None else density
    edges += [e for e in combinations(range(p), 2) if rng.random() < dens * 0.5]
    return gc.from_edge_list(p, edges)


@st.composite
def graphs(draw, min_p=1, max_p=8):
    p = draw(st.integers(min_p, max_p))
    pairs = list(combinations(range(p), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return gc.from_edge_list(p, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def connected_graphs(draw, min_p=2, max_p=8):
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.integers(min_p, max_p))
    return random_connected_graph(random.Random(seed), p)


def charpoly_exact(a) -> list[Fraction]:
    """Characteristic polynomial coefficients (leading 1 first) by Faddeev-LeVerrier over Q."""
    n = len(a)
    a = [[Fraction(int(x)) for x in row] for row in a]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        prod = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        m = [[prod[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    return coeffs


# Structure matrices S with M(op(G)) = S (x) M(G), transcribed from the block forms.


def splitting_structure(m):
    s = np.zeros((m + 1, m + 1))
    s[0, :] = 1
    s[:, 0] = 1
    return s


def shadow_structure(m):
    return np.ones((m, m))


def h1_structure(m, pair=None):
    i, j = pair if pair is not None else (0, m - 1)
    s = np.ones((m, m))
    s[i, i] = 0
    s[j, j] = 0
    return s


def h2_structure(m):
    s = np.eye(m)
    s[0, :] = 1
    s[:, 0] = 1
    return s


def h3_structure(m):
    s = h2_structure(m)
    s[0, 0] = 0
    return s


def dup_structure(m):
    return np.fliplr(np.eye(2**m))
