"""Random small diagrams for fuzzing and property tests."""

import random
from fractions import Fraction

from topozx.diagram import DiagramBuilder, X, Z

PHASES = [Fraction(0), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3, 2), Fraction(1, 4)]


def random_diagram(rng: random.Random, max_vertices: int = 10, max_boundaries: int = 6, phases=PHASES):
    n_bound = rng.randint(0, max_boundaries)
    budget = max(max_vertices - n_bound, 1)
    n_spiders = rng.randint(1, budget)
    b = DiagramBuilder()
    spiders = [b.add_vertex(rng.choice((Z, X)), rng.choice(phases)) for _ in range(n_spiders)]
    edges = []
    for _ in range(rng.randint(0, 2 * n_spiders)):
        u, v = rng.choice(spiders), rng.choice(spiders)
        if u == v and rng.random() < 0.7:
            continue
        edges.append((u, v))
    # keep the spiders mostly connected
    for i in range(1, n_spiders):
        if rng.random() < 0.7:
            edges.append((spiders[rng.randrange(i)], spiders[i]))
    spare = max_vertices - n_spiders - n_bound
    for u, v in edges:
        if spare > 0 and rng.random() < 0.3:
            h = b.h()
            b.add_edge(u, h)
            b.add_edge(h, v)
            spare -= 1
        else:
            b.add_edge(u, v)
    for _ in range(n_bound):
        s = rng.choice(spiders)
        if spare > 0 and rng.random() < 0.2:
            h = b.h()
            b.add_edge(s, h)
            s = h
            spare -= 1
        v = b.add_input() if rng.random() < 0.5 else b.add_output()
        b.add_edge(v, s)
    return b.freeze()
