"""Bitstring-vertex graphs: Hamming-distance families, cycles, and strong products.

Vertices are fixed-length binary strings packed into machine words. Coordinate
i (1-based, reading the string left to right) lives at bit position len-i, so
``str(BitVertex(0b011, 3)) == "011"`` and "the last k coordinates" are the low
k bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameterError, ResourceLimitError

MAX_BITLEN = 63
MAX_VERTICES = 10**7
# Dense adjacency (bitset rows / boolean matrix) only below this vertex count.
DENSE_ADJACENCY_CAP = 16384
# Standalone vertices may be longer than graph strings: clique extraction from
# a size-164 Hadamard matrix produces 163-bit vertices with no graph behind them.
MAX_VERTEX_BITLEN = 10001


@dataclass(frozen=True)
class BitVertex:
    """A binary string of length ``len`` packed into the integer ``bits``."""

    bits: int
    len: int

    def __post_init__(self):
        if not 1 <= self.len <= MAX_VERTEX_BITLEN:
            raise InvalidParameterError(
                f"bit length must be in [1, {MAX_VERTEX_BITLEN}], got {self.len}")
        if self.bits < 0 or self.bits >> self.len:
            raise InvalidParameterError(
                f"bits 0b{self.bits:b} do not fit in {self.len} positions")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return format(self.bits, f"0{self.len}b")


def hamming_distance(x: BitVertex, y: BitVertex) -> int:
    """Number of coordinates where x and y differ."""
    if x.len != y.len:
        raise InvalidParameterError(f"length mismatch: {x.len} vs {y.len}")
    return (x.bits ^ y.bits).bit_count()


def _pairwise_distance_block(bits: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Hamming distances between bits[lo:hi] and all of bits (uint64 words)."""
    return np.bitwise_count(bits[lo:hi, None] ^ bits[None, :])


def _pack_bool_rows(mat: np.ndarray) -> list[int]:
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class BitGraph:
    """Simple undirected graph on bitstring vertices.

    Adjacency is either ``("distance", k)`` (u ~ v iff d(u, v) = k) or an
    explicit edge set over vertex indices. Instances are immutable after
    construction; adjacency caches are built lazily.
    """

    def __init__(self, n: int, bits: Sequence[int], rule, family: str | None = None):
        bits = list(bits)
        if len(set(bits)) != len(bits):
            raise InvalidParameterError("duplicate vertices")
        if len(bits) > MAX_VERTICES:
            raise ResourceLimitError(
                f"{len(bits)} vertices exceeds the materialization cap {MAX_VERTICES}")
        if sorted(bits) != bits:
            bits = sorted(bits)
        self.n = n
        self.family = family
        self._bits = np.asarray(bits, dtype=np.uint64)
        self._index = {b: i for i, b in enumerate(bits)}
        kind = rule[0]
        if kind == "distance":
            self._distance = int(rule[1])
            self._edge_set = None
        elif kind == "explicit":
            self._distance = None
            edges = set()
            for u, v in rule[1]:
                if u == v:
                    raise InvalidParameterError("self-loop in explicit edge set")
                if not (0 <= u < len(bits) and 0 <= v < len(bits)):
                    raise InvalidParameterError("edge endpoint out of range")
                edges.add((min(u, v), max(u, v)))
            self._edge_set = frozenset(edges)
        else:
            raise InvalidParameterError(f"unknown adjacency rule {kind!r}")
        self._adj_bool = None
        self._adj_rows = None
        self._vertices = None

    # -- basic accessors ---------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._bits)

    @property
    def bits_array(self) -> np.ndarray:
        return self._bits

    def vertex(self, i: int) -> BitVertex:
        return BitVertex(int(self._bits[i]), self.n)

    @property
    def vertices(self) -> list[BitVertex]:
        if self._vertices is None:
            self._vertices = [BitVertex(int(b), self.n) for b in self._bits]
        return self._vertices

    def index_of(self, v) -> int:
        b = v.bits if isinstance(v, BitVertex) else int(v)
        try:
            return self._index[b]
        except KeyError:
            raise InvalidParameterError(f"vertex {b:#b} not in graph") from None

    def __contains__(self, v) -> bool:
        b = v.bits if isinstance(v, BitVertex) else int(v)
        return b in self._index

    def vertex_label(self, i: int) -> str:
        if self.family == "C":
            return str(int(self._bits[i]))
        return format(int(self._bits[i]), f"0{self.n}b")

    # -- adjacency ---------------------------------------------------------

    def is_adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        if self._distance is not None:
            x = int(self._bits[i]) ^ int(self._bits[j])
            return x.bit_count() == self._distance
        return (min(i, j), max(i, j)) in self._edge_set

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency, cached. Guarded by the dense cap."""
        if self._adj_bool is None:
            nv = self.vertex_count
            if nv > DENSE_ADJACENCY_CAP:
                raise ResourceLimitError(
                    f"dense adjacency for {nv} vertices exceeds cap {DENSE_ADJACENCY_CAP}")
            mat = np.zeros((nv, nv), dtype=bool)
            if self._distance is not None:
                step = max(1, (1 << 24) // max(nv, 1))
                for lo in range(0, nv, step):
                    hi = min(nv, lo + step)
                    mat[lo:hi] = _pairwise_distance_block(self._bits, lo, hi) == self._distance
                np.fill_diagonal(mat, False)
            else:
                for u, v in self._edge_set:
                    mat[u, v] = mat[v, u] = True
            mat.setflags(write=False)
            self._adj_bool = mat
        return self._adj_bool

    def adjacency_rows(self) -> list[int]:
        """Adjacency as one bitset int per vertex, aligned to vertex order."""
        if self._adj_rows is None:
            self._adj_rows = _pack_bool_rows(self.adjacency_matrix())
        return self._adj_rows

    def degree(self, i: int) -> int:
        return self.adjacency_rows()[i].bit_count()

    @property
    def edge_count(self) -> int:
        if self._edge_set is not None:
            return len(self._edge_set)
        return int(np.count_nonzero(self.adjacency_matrix())) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges as index pairs (i, j) with i < j."""
        if self._edge_set is not None:
            yield from sorted(self._edge_set)
        else:
            mat = self.adjacency_matrix()
            for i, j in zip(*np.triu_indices_from(mat, k=1)):
                if mat[i, j]:
                    yield int(i), int(j)

    # -- export ------------------------------------------------------------

    def descriptor(self) -> dict:
        n = self.vertex_count if self.family in ("C", "K") else self.n
        d = {"family": self.family, "n": n, "vertex_count": self.vertex_count}
        try:
            d["edge_count"] = self.edge_count
        except ResourceLimitError:
            d["edge_count"] = None
        return d

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.vertex_count} {self.edge_count}"]
        for i in range(self.vertex_count):
            lines.append(f"c v {i + 1} {self.vertex_label(i)}")
        for i, j in self.edges():
            lines.append(f"e {i + 1} {j + 1}")
        return "\n".join(lines) + "\n"

    def graph_ref(self) -> str:
        if self.family in ("C", "K"):
            return f"{self.family}{self.vertex_count}"
        return f"{self.family or 'X'}{self.n}"

    def __repr__(self):
        return f"BitGraph({self.graph_ref()}, |V|={self.vertex_count})"


# -- constructors ------------------------------------------------------------


def _require_odd_n(n: int):
    if n % 2 == 0 or not 3 <= n <= MAX_BITLEN:
        raise InvalidParameterError(f"n must be odd with 3 <= n <= {MAX_BITLEN}, got {n}")


def _weight_w_bits(n: int, w: int) -> list[int]:
    out = []
    for positions in combinations(range(n), w):
        b = 0
        for pos in positions:
            b |= 1 << pos
        out.append(b)
    out.sort()
    return out


def build_G(n: int) -> BitGraph:
    """Graph on length-n strings of weight (n+1)/2, edges at distance (n+1)/2."""
    _require_odd_n(n)
    w = (n + 1) // 2
    if math.comb(n, w) > MAX_VERTICES:
        raise ResourceLimitError(f"C({n},{w}) vertices exceed cap {MAX_VERTICES}")
    return BitGraph(n, _weight_w_bits(n, w), ("distance", w), family="G")


def build_H(n: int) -> BitGraph:
    """Graph on length-n strings of even weight, edges at distance (n+1)/2."""
    _require_odd_n(n)
    if 2 ** (n - 1) > MAX_VERTICES:
        raise ResourceLimitError(f"2^{n - 1} vertices exceed cap {MAX_VERTICES}")
    # An even-weight string is its first n-1 coordinates plus a parity bit.
    ys = np.arange(2 ** (n - 1), dtype=np.uint64)
    bits = (ys << np.uint64(1)) | (np.bitwise_count(ys) & np.uint64(1))
    return BitGraph(n, bits.tolist(), ("distance", (n + 1) // 2), family="H")


def build_orthogonality_graph(n: int) -> BitGraph:
    """Graph on all length-n strings, edges at distance n/2 (n even)."""
    if n % 2 != 0 or not 2 <= n <= 24:
        raise InvalidParameterError(f"n must be even with 2 <= n <= 24, got {n}")
    if 2**n > MAX_VERTICES:
        raise ResourceLimitError(f"2^{n} vertices exceed cap {MAX_VERTICES}")
    return BitGraph(n, range(2**n), ("distance", n // 2), family="O")


def build_cycle(n: int) -> BitGraph:
    """Cycle on n index vertices (the BitVertex carries the index)."""
    if n < 3:
        raise InvalidParameterError(f"cycle needs n >= 3, got {n}")
    length = max(1, (n - 1).bit_length())
    edges = [(i, (i + 1) % n) for i in range(n)]
    return BitGraph(length, range(n), ("explicit", edges), family="C")


def build_complete(n: int) -> BitGraph:
    """Complete graph on n index vertices (K_1 allowed)."""
    if n < 1:
        raise InvalidParameterError(f"complete graph needs n >= 1, got {n}")
    length = max(1, (n - 1).bit_length())
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return BitGraph(length, range(n), ("explicit", edges), family="K")


# -- strong products ---------------------------------------------------------


class ProductGraph:
    """Strong product of factor graphs, with on-demand adjacency.

    Vertices are tuples of factor indices, flattened to a single index in
    row-major order. Explicit adjacency is materialized only below the dense
    cap; above it only the pairwise oracle is available.
    """

    def __init__(self, factors: Sequence):
        if not factors:
            raise InvalidParameterError("product needs at least one factor")
        self.factors = list(factors)
        count = 1
        for f in self.factors:
            count *= f.vertex_count
            if count > MAX_VERTICES:
                raise ResourceLimitError(
                    f"product would exceed the {MAX_VERTICES}-vertex cap")
        self._count = count
        self.family = "product"
        self.n = sum(f.n for f in self.factors)
        self._adj_bool = None
        self._adj_rows = None

    @property
    def vertex_count(self) -> int:
        return self._count

    def parts(self, i: int) -> tuple[int, ...]:
        out = []
        for f in reversed(self.factors):
            out.append(i % f.vertex_count)
            i //= f.vertex_count
        return tuple(reversed(out))

    def flatten(self, parts: Sequence[int]) -> int:
        if len(parts) != len(self.factors):
            raise InvalidParameterError("part count does not match factor count")
        i = 0
        for f, pi in zip(self.factors, parts):
            if not 0 <= pi < f.vertex_count:
                raise InvalidParameterError("part index out of range")
            i = i * f.vertex_count + pi
        return i

    def is_adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        for f, a, b in zip(self.factors, self.parts(i), self.parts(j)):
            if a != b and not f.is_adjacent(a, b):
                return False
        return True

    def adjacency_matrix(self) -> np.ndarray:
        if self._adj_bool is None:
            if self._count > DENSE_ADJACENCY_CAP:
                raise ResourceLimitError(
                    f"dense adjacency for {self._count} vertices exceeds cap")
            mat = None
            for f in self.factors:
                closed = f.adjacency_matrix() | np.eye(f.vertex_count, dtype=bool)
                mat = closed if mat is None else np.kron(mat, closed)
            np.fill_diagonal(mat, False)
            mat.setflags(write=False)
            self._adj_bool = mat
        return self._adj_bool

    def adjacency_rows(self) -> list[int]:
        if self._adj_rows is None:
            self._adj_rows = _pack_bool_rows(self.adjacency_matrix())
        return self._adj_rows

    def degree(self, i: int) -> int:
        return self.adjacency_rows()[i].bit_count()

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adjacency_matrix())) // 2

    def vertex_label(self, i: int) -> str:
        parts = self.parts(i)
        return "(" + ",".join(f.vertex_label(p) for f, p in zip(self.factors, parts)) + ")"

    def descriptor(self) -> dict:
        d = {"family": "product", "n": self.n, "vertex_count": self._count}
        try:
            d["edge_count"] = self.edge_count
        except ResourceLimitError:
            d["edge_count"] = None
        return d

    def graph_ref(self) -> str:
        return "x".join(f.graph_ref() for f in self.factors)

    def __repr__(self):
        return f"ProductGraph({self.graph_ref()}, |V|={self._count})"


def strong_product(g, h) -> ProductGraph:
    """Strong product: coordinates pairwise equal-or-adjacent, not all equal."""
    factors = (g.factors if isinstance(g, ProductGraph) else [g]) + \
              (h.factors if isinstance(h, ProductGraph) else [h])
    return ProductGraph(factors)


def strong_power(g, k: int) -> ProductGraph:
    if k < 1:
        raise InvalidParameterError(f"power must be >= 1, got {k}")
    return ProductGraph([g] * k)
