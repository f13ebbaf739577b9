"""Small society builders shared by the test modules."""
from __future__ import annotations

import random

from societykit.generators import crosscap_chords, ladder, planar_chords, random_society
from societykit.graph_core import Path
from societykit.society import Society, build_society


def chord_society(perm):
    """Path i joins X1[i] to X2[perm[i]] through one private middle vertex.

    Members i < j cross exactly when perm[i] < perm[j].
    """
    n = len(perm)
    om = list(range(2 * n))
    V, E, P = list(om), [], []
    for i, j in enumerate(perm):
        mid = 2 * n + i
        V.append(mid)
        E += [(i, mid), (mid, n + j)]
        P.append([i, mid, n + j])
    soc = build_society(V, E, om)
    paths = [Path.from_vertices(soc.graph, p) for p in P]
    return soc, paths, tuple(om[:n]), tuple(om[n:])


def tight_family(p: int, q: int):
    """Planar part of order p-2 beside a crosscap of order q-1, with no crossings between them."""
    c, k = q - 1, p - 2
    u = list(range(c))
    v = list(range(c, 2 * c))
    x = list(range(2 * c, 2 * c + k))
    y = list(range(2 * c + 2 * k - 1, 2 * c + k - 1, -1))
    chords = list(zip(u, v)) + list(zip(x, y))
    soc = build_society(range(2 * c + 2 * k), chords, range(2 * c + 2 * k))
    paths = [Path.from_vertices(soc.graph, list(e)) for e in chords]
    return soc, paths


def spine_society(rng: random.Random, n: int) -> Society:
    """A ladder-like society of depth about n with a few random shortcuts between rungs."""
    om = list(range(2 * n))
    V, E = list(om), []
    for i in range(n):
        m = ("m", i)
        V.append(m)
        E += [(i, m), (m, 2 * n - 1 - i)]
        if i:
            E.append((("m", i - 1), m))
    for _ in range(rng.randint(0, 3)):
        i = rng.randrange(n)
        E.append((("m", i), ("m", min(n - 1, i + rng.randint(2, 4)))))
    for _ in range(rng.randint(0, 2)):
        E.append((("m", rng.randrange(n)), rng.randrange(2 * n)))
    return build_society(V, E, om)


def gm9_corpus(seed: int) -> Society:
    """Societies with at most 40 vertices drawn from five families."""
    rng = random.Random(seed)
    kind = seed % 5
    if kind == 0:
        return random_society(rng, rng.randint(4, 40))
    if kind == 1:
        return crosscap_chords(rng.randint(2, 13))
    if kind == 2:
        return planar_chords(rng.randint(2, 13))
    if kind == 3:
        return ladder(rng.randint(2, 13))
    return spine_society(rng, rng.randint(4, 13))
