"""Orthonormal representations, Hadamard-seeded cliques, and clique packings.

All certificate-grade checks here are exact: representation vectors are stored
as integer sign vectors with a common normalizer n+1 (the true unit vector is
row / sqrt(n+1)), so orthogonality on edges is an integer dot product equal to
zero, with no tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .bitgraph import BitGraph, BitVertex, build_G, build_H
from .errors import ConstructionError, InvalidParameterError
from .hadamard import HadamardMatrix, normalize


def _sign_rows(bits: np.ndarray, n: int) -> np.ndarray:
    """Rows (-1)^{x_1}, ..., (-1)^{x_n} for each vertex word, as int8."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    b = ((bits[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.int8)
    return (1 - 2 * b).astype(np.int8)


@dataclass(frozen=True)
class OrthoRep:
    """Orthonormal representation with exact integer coordinates.

    ``matrix`` has one row per graph vertex (same order); the unit vector of
    vertex i is ``matrix[i] / sqrt(normalizer)``. For the weight-(n+1)/2
    family every row is additionally orthogonal to the appended-ones vector,
    recorded by ``hyperplane_certified``.
    """

    graph: BitGraph
    dim: int
    normalizer: int
    matrix: np.ndarray
    hyperplane_certified: bool = False

    def vector(self, i: int) -> np.ndarray:
        return self.matrix[i]

    def verify(self) -> None:
        """Exact norm and edge-orthogonality check over all vertices/edges."""
        w = self.matrix.astype(np.int64)
        k = (self.graph.n + 1) // 2
        bits = self.graph.bits_array
        nv = self.graph.vertex_count
        step = max(1, (1 << 22) // max(nv, 1))
        for lo in range(0, nv, step):
            hi = min(nv, lo + step)
            gram = w[lo:hi] @ w.T
            norms = gram[np.arange(hi - lo), np.arange(lo, hi)]
            if not (norms == self.normalizer).all():
                bad = lo + int(np.argmax(norms != self.normalizer))
                raise ConstructionError(f"vertex {bad} has squared norm != 1")
            adj = np.bitwise_count(bits[lo:hi, None] ^ bits[None, :]) == k
            if gram[adj].any():
                i, j = np.argwhere(adj & (gram != 0))[0]
                raise ConstructionError(f"edge ({lo + int(i)}, {int(j)}) not orthogonal")

    def reduced(self) -> tuple[np.ndarray, np.ndarray]:
        """Float coordinates in an orthonormal basis of the ones-hyperplane.

        Returns (basis, coords): basis is (dim x dim-1) with orthonormal
        columns spanning the hyperplane orthogonal to the all-ones vector;
        coords rows are the representation vectors in that basis. Inner
        products are preserved; only available when the hyperplane membership
        was certified.
        """
        if not self.hyperplane_certified:
            raise InvalidParameterError("representation does not lie in a hyperplane")
        d = self.dim
        v = np.ones(d)
        # Householder reflection sending v/|v| to e_0; remaining columns span v-perp.
        u = v / np.linalg.norm(v)
        u[0] -= 1.0
        q = np.eye(d) - 2.0 * np.outer(u, u) / (u @ u)
        basis = q[:, 1:]
        coords = (self.matrix / math.sqrt(self.normalizer)) @ basis
        return basis, coords

    def to_json(self) -> dict:
        return {
            "graph": self.graph.graph_ref(),
            "dim": self.dim,
            "normalizer": self.normalizer,
            "vectors": {self.graph.vertex_label(i): self.matrix[i].tolist()
                        for i in range(self.graph.vertex_count)},
        }


def _rep_for(graph: BitGraph) -> np.ndarray:
    n = graph.n
    signs = _sign_rows(graph.bits_array, n)
    ones = np.ones((graph.vertex_count, 1), dtype=np.int8)
    return np.hstack([signs, ones])


def ortho_rep_H(n: int) -> OrthoRep:
    """(n+1)-dimensional representation of the even-weight graph."""
    graph = build_H(n)
    rep = OrthoRep(graph, n + 1, n + 1, _rep_for(graph))
    rep.verify()
    return rep


def ortho_rep_G(n: int) -> OrthoRep:
    """Ambient (n+1)-dim representation of the weight-(n+1)/2 graph.

    Also certifies that every vector is orthogonal to the appended-ones
    vector, so the span has dimension at most n; reduced float coordinates
    are available via ``reduced()``.
    """
    graph = build_G(n)
    mat = _rep_for(graph)
    sums = mat.astype(np.int64).sum(axis=1)
    if sums.any():
        bad = int(np.argmax(sums != 0))
        raise ConstructionError(f"vertex {bad} not orthogonal to the ones vector")
    rep = OrthoRep(graph, n + 1, n + 1, mat, hyperplane_certified=True)
    rep.verify()
    return rep


# -- Hadamard-seeded cliques --------------------------------------------------


def _clique_rows_from_hadamard(h: HadamardMatrix) -> tuple[int, list[int]]:
    m = h.size
    if m < 4 or m % 2 != 0:
        raise InvalidParameterError(
            f"need an even Hadamard size >= 4 to seed a clique, got {m}")
    n = m - 1
    core = normalize(h).entries[1:, 1:]
    verts = []
    for row in core:
        bits = 0
        for j in range(n):
            if row[j] == -1:
                bits |= 1 << (n - 1 - j)
        verts.append(bits)
    return n, verts


def _check_clique_bits(verts: list[int], n: int, expect_weight: int | None):
    k = (n + 1) // 2
    for i, b in enumerate(verts):
        if expect_weight is not None and b.bit_count() != expect_weight:
            raise ConstructionError(f"row {i} has weight {b.bit_count()}, want {expect_weight}")
        for j in range(i + 1, len(verts)):
            if (b ^ verts[j]).bit_count() != k:
                raise ConstructionError(
                    f"rows {i},{j} at distance {(b ^ verts[j]).bit_count()}, want {k}")


def clique_from_hadamard_G(h: HadamardMatrix) -> list[BitVertex]:
    """n mutually adjacent weight-(n+1)/2 vertices from a size-(n+1) Hadamard.

    Normalizes, strips the all-ones border, and maps -1 entries to 1-bits.
    The pairwise-distance property is verified without materializing the
    graph, so this works at sizes like 164 where the graph itself does not.
    """
    n, verts = _clique_rows_from_hadamard(h)
    _check_clique_bits(verts, n, expect_weight=(n + 1) // 2)
    return [BitVertex(b, n) for b in verts]


def clique_from_hadamard_H(h: HadamardMatrix) -> list[BitVertex]:
    """The G-clique plus the all-zeros string: n+1 mutually adjacent even-weight vertices."""
    n, verts = _clique_rows_from_hadamard(h)
    verts = [0] + verts
    _check_clique_bits(verts, n, expect_weight=None)
    for b in verts:
        if b.bit_count() % 2 != 0:
            raise ConstructionError("clique vertex with odd weight")
    return [BitVertex(b, n) for b in verts]


# -- packings ----------------------------------------------------------------


@dataclass(frozen=True)
class CliquePacking:
    """Pairwise-disjoint cliques of one fixed size in a packed graph."""

    graph: BitGraph
    clique_size: int
    cliques: tuple[tuple[int, ...], ...]  # vertex words, each clique sorted
    target: int
    target_met: bool

    @property
    def count(self) -> int:
        return len(self.cliques)

    def verify(self) -> None:
        """Independent re-check: clique-ness, membership, and disjointness."""
        k = (self.graph.n + 1) // 2
        seen: set[int] = set()
        for c, clique in enumerate(self.cliques):
            if len(clique) != self.clique_size:
                raise ConstructionError(f"clique {c} has size {len(clique)}")
            for b in clique:
                if b not in self.graph:
                    raise ConstructionError(f"clique {c} vertex {b:#b} not in graph")
                if b in seen:
                    raise ConstructionError(f"vertex {b:#b} reused across cliques")
                seen.add(b)
            for i in range(len(clique)):
                for j in range(i + 1, len(clique)):
                    if (clique[i] ^ clique[j]).bit_count() != k:
                        raise ConstructionError(
                            f"clique {c} pair ({i},{j}) not adjacent")

    def to_json(self) -> dict:
        n = self.graph.n
        return {
            "graph": self.graph.graph_ref(),
            "clique_size": self.clique_size,
            "count": self.count,
            "target": self.target,
            "target_met": self.target_met,
            "cliques": [[format(b, f"0{n}b") for b in c] for c in self.cliques],
        }


def _permute_bits(bits: int, perm: list[int], n: int) -> int:
    # destination coordinate d takes source coordinate perm[d]
    out = 0
    for dst in range(n):
        if (bits >> (n - 1 - perm[dst])) & 1:
            out |= 1 << (n - 1 - dst)
    return out


def pack_cliques(g: BitGraph, seed: list[BitVertex], budget: int = 10**6,
                 rng_seed: int = 0) -> CliquePacking:
    """Greedy disjoint packing by images of a seed clique under automorphisms.

    The weight-(n+1)/2 graph is vertex transitive under coordinate
    permutations; the even-weight graph under translations x -> x xor z. For
    the latter the 2^(n-1) translations are enumerated in increasing order,
    which makes the packing maximal within the family and hence guaranteed to
    reach ceil(|V|/d^2); for the former, permutations come from a seeded
    pseudorandom stream capped by ``budget``, and falling short is reported
    via ``target_met`` rather than papered over.
    """
    if g.family not in ("G", "H"):
        raise InvalidParameterError(f"packing is defined for families G/H, got {g.family}")
    n = g.n
    k = (n + 1) // 2
    seed_bits = []
    for v in seed:
        if v.len != n:
            raise InvalidParameterError("seed vertex length does not match graph")
        if v.bits not in g:
            raise InvalidParameterError(f"seed vertex {v} not in graph")
        seed_bits.append(v.bits)
    _check_clique_bits(seed_bits, n, expect_weight=None)
    d = len(seed_bits)
    target = math.ceil(g.vertex_count / (d * d))

    used: set[int] = set()
    cliques: list[tuple[int, ...]] = []

    def try_add(image: list[int]) -> None:
        if len(set(image)) == d and not used.intersection(image):
            used.update(image)
            cliques.append(tuple(sorted(image)))

    if g.family == "H":
        for z in g.bits_array.tolist():
            try_add([b ^ z for b in seed_bits])
            if len(cliques) >= target:
                break
    else:
        rng = random.Random(rng_seed)
        perm = list(range(n))
        for _ in range(budget):
            try_add([_permute_bits(b, perm, n) for b in seed_bits])
            if len(cliques) >= target:
                break
            rng.shuffle(perm)

    packing = CliquePacking(g, d, tuple(cliques), target, len(cliques) >= target)
    packing.verify()
    return packing


# -- explicit independent sets ------------------------------------------------


@dataclass(frozen=True)
class RestrictedSet:
    """Weight-(n+1)/2 strings supported on the first n-k coordinates."""

    n: int
    k: int
    vertices: tuple[BitVertex, ...]
    verified: bool
    witness: tuple[BitVertex, BitVertex] | None

    def __len__(self):
        return len(self.vertices)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "size": len(self.vertices),
                "verified": self.verified,
                "witness": None if self.witness is None else
                [str(v) for v in self.witness],
                "vertices": [str(v) for v in self.vertices]}


def restricted_independent_set(n: int, k: int | None = None) -> RestrictedSet:
    """Candidate independent set with zeros on the last k coordinates.

    Defaults to k = ceil((n+1)/4): with k trailing zeros two members meet in
    at least k+1 coordinates, while an edge needs the intersection to be
    exactly (n+1)/4, so k+1 > (n+1)/4 rules edges out. Independence is
    verified by exhaustive pair check regardless, and a witness edge is
    returned instead of a verdict when the set fails.
    """
    if n % 2 == 0 or n < 3:
        raise InvalidParameterError(f"n must be odd and >= 3, got {n}")
    if k is None:
        k = -(-(n + 1) // 4)
    if not 0 <= k < n:
        raise InvalidParameterError(f"k must be in [0, {n}), got {k}")
    w = (n + 1) // 2
    from itertools import combinations
    verts: list[int] = []
    for positions in combinations(range(k, n), w):
        b = 0
        for pos in positions:
            b |= 1 << pos
        verts.append(b)
    verts.sort()
    dist = w
    witness = None
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if (verts[i] ^ verts[j]).bit_count() == dist:
                witness = (BitVertex(verts[i], n), BitVertex(verts[j], n))
                break
        if witness:
            break
    return RestrictedSet(n, k, tuple(BitVertex(b, n) for b in verts),
                         witness is None, witness)
