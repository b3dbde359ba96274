"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own algorithms: alpha by
memoized subset enumeration over Python-int bitsets, rank by plain-list
row reduction. They exist so the fast implementations have something honest
to be measured against.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np
import pytest

import capsep


def alpha_by_enumeration(adj_rows: list[int]) -> int:
    """Maximum independent set size by enumerating subsets (memoized)."""
    n = len(adj_rows)
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        return max(best(rest), 1 + best(rest & ~adj_rows[v]))

    result = best(full)
    best.cache_clear()
    return result


def rank_by_row_reduction(matrix, p: int) -> int:
    """Textbook RREF over F_p on plain Python lists."""
    rows = [[int(x) % p for x in row] for row in np.asarray(matrix)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def random_explicit_graph(n: int, edge_prob: float, seed: int) -> capsep.BitGraph:
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < edge_prob]
    length = max(1, (n - 1).bit_length())
    return capsep.BitGraph(length, range(n), ("explicit", edges), family="R")


@pytest.fixture(scope="session")
def g11():
    return capsep.build_G(11)


@pytest.fixture(scope="session")
def h11():
    return capsep.build_H(11)


@pytest.fixture(scope="session")
def paley12():
    return capsep.paley_one(11)


@pytest.fixture(scope="session")
def h11_cert(h11, paley12):
    rep = capsep.ortho_rep_H(11)
    packing = capsep.pack_cliques(rep.graph, capsep.clique_from_hadamard_H(paley12))
    return capsep.cert_from_packing(rep, packing)


@pytest.fixture(scope="session")
def g11_cert(paley12):
    rep = capsep.ortho_rep_G(11)
    packing = capsep.pack_cliques(rep.graph, capsep.clique_from_hadamard_G(paley12))
    return capsep.cert_from_packing(rep, packing)
