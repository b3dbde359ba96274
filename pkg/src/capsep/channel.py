"""Noisy channels, confusability graphs, and entanglement-assisted protocols.

The protocol construction follows the one-shot scheme: sender and receiver
share a maximally entangled state of local dimension d; to send message i the
sender measures with the rank-one projectors onto the i-th clique's
representation vectors, transmits her outcome through the channel, and the
receiver measures with projectors grouped by which clique could have produced
the channel output. Orthogonality across cliques through every shared output
makes the decoding exact.

For the maximally entangled state, Tr((A (x) B) rho) = Tr(A B^T)/d; matrices
are kept at local dimension d and the d^2-dimensional state is only
materialized for small d to cross-check that identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitgraph import BitGraph
from .entcert import EntCert
from .errors import InvalidParameterError, ProtocolError, ResourceLimitError

ROW_SUM_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
ZERO_ERROR_TOL = 1e-9
DENSE_EXPORT_CAP = 10**6
EXPLICIT_STATE_MAX_DIM = 8


class Channel:
    """Discrete memoryless channel with sparse row storage.

    ``rows`` holds, per input, the indices of outputs with positive
    probability and those probabilities; each row must sum to one.
    """

    def __init__(self, inputs: list[str], outputs: list[str],
                 rows: list[tuple[np.ndarray, np.ndarray]]):
        if len(rows) != len(inputs):
            raise InvalidParameterError("one probability row per input required")
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self._rows = []
        for x, (idx, probs) in enumerate(rows):
            idx = np.asarray(idx, dtype=np.int64)
            probs = np.asarray(probs, dtype=np.float64)
            if (probs < 0).any():
                raise InvalidParameterError(f"negative probability in row {x}")
            if idx.size and (idx.min() < 0 or idx.max() >= len(outputs)):
                raise InvalidParameterError(f"output index out of range in row {x}")
            if abs(probs.sum() - 1.0) > ROW_SUM_TOL:
                raise InvalidParameterError(
                    f"row {x} sums to {probs.sum()}, not 1")
            keep = probs > 0
            self._rows.append((idx[keep], probs[keep]))
        self._supports = [frozenset(idx.tolist()) for idx, _ in self._rows]

    @classmethod
    def from_dense(cls, inputs, outputs, matrix) -> "Channel":
        matrix = np.asarray(matrix, dtype=np.float64)
        rows = [(np.nonzero(matrix[x])[0], matrix[x][matrix[x] > 0])
                for x in range(matrix.shape[0])]
        return cls(inputs, outputs, rows)

    @property
    def input_count(self) -> int:
        return len(self.inputs)

    def support(self, x: int) -> frozenset:
        return self._supports[x]

    def row(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        return self._rows[x]

    def prob(self, x: int, t: int) -> float:
        idx, probs = self._rows[x]
        hit = np.nonzero(idx == t)[0]
        return float(probs[hit[0]]) if hit.size else 0.0

    def sample_output(self, x: int, rng: np.random.Generator) -> int:
        idx, probs = self._rows[x]
        return int(rng.choice(idx, p=probs / probs.sum()))

    def output_members(self) -> dict[int, list[int]]:
        """Map output index -> inputs that can produce it."""
        members: dict[int, list[int]] = {}
        for x, (idx, _) in enumerate(self._rows):
            for t in idx.tolist():
                members.setdefault(t, []).append(x)
        return members

    def to_json(self) -> dict:
        if len(self.inputs) * len(self.outputs) > DENSE_EXPORT_CAP:
            raise ResourceLimitError("channel too large for dense JSON export")
        dense = np.zeros((len(self.inputs), len(self.outputs)))
        for x, (idx, probs) in enumerate(self._rows):
            dense[x, idx] = probs
        return {"inputs": self.inputs, "outputs": self.outputs,
                "rows": dense.tolist()}


def pentagon_channel() -> Channel:
    """Five inputs, five outputs, input x reaching outputs x and x+1 mod 5."""
    inputs = [str(i) for i in range(5)]
    outputs = list("abcde")
    rows = [(np.array([x, (x + 1) % 5]), np.array([0.5, 0.5])) for x in range(5)]
    return Channel(inputs, outputs, rows)


def confusability_graph(c: Channel) -> BitGraph:
    """Graph on channel inputs; an edge where two inputs share an output."""
    edges = set()
    for members in c.output_members().values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                edges.add((members[a], members[b]))
    return BitGraph(max(1, (c.input_count - 1).bit_length()),
                    range(c.input_count), ("explicit", sorted(edges)), family="C")


def canonical_channel(g) -> Channel:
    """Channel whose confusability graph is exactly g.

    Inputs are the vertices; outputs are the vertices plus the edges; input u
    reaches its own private output and one shared output per incident edge,
    uniformly. The round trip through ``confusability_graph`` is verified.
    """
    nv = g.vertex_count
    outputs = [g.vertex_label(i) for i in range(nv)]
    edge_output: dict[tuple[int, int], int] = {}
    incident: list[list[int]] = [[] for _ in range(nv)]
    for i, j in g.edges():
        edge_output[(i, j)] = len(outputs)
        outputs.append(f"{g.vertex_label(i)}|{g.vertex_label(j)}")
        incident[i].append(edge_output[(i, j)])
        incident[j].append(edge_output[(i, j)])
    rows = []
    for u in range(nv):
        idx = np.array([u] + incident[u], dtype=np.int64)
        rows.append((idx, np.full(idx.size, 1.0 / idx.size)))
    chan = Channel([g.vertex_label(i) for i in range(nv)], outputs, rows)
    # Round-trip check: shared outputs are exactly the edges.
    got = confusability_graph(chan)
    for i, j in got.edges():
        if not g.is_adjacent(i, j):
            raise InvalidParameterError("canonical channel round-trip mismatch")
    if got.edge_count != len(edge_output):
        raise InvalidParameterError("canonical channel round-trip mismatch")
    return chan


def check_zero_error_code(c: Channel, words: list[tuple[int, ...]]):
    """True iff every pair of words has a coordinate with disjoint supports.

    Returns (ok, witness); the witness names the first confusable pair along
    with one shared output per coordinate proving confusability.
    """
    if not words:
        return True, None
    k = len(words[0])
    for w in words:
        if len(w) != k:
            raise InvalidParameterError("words must share one length")
        for s in w:
            if not 0 <= s < c.input_count:
                raise InvalidParameterError(f"input index {s} out of range")
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            shared = []
            for pos in range(k):
                common = c.support(words[a][pos]) & c.support(words[b][pos])
                if not common:
                    shared = None
                    break
                shared.append(min(common))
            if shared is not None:
                witness = {"words": [list(words[a]), list(words[b])],
                           "shared_outputs": [c.outputs[t] for t in shared]}
                return False, witness
    return True, None


# -- quantum helpers -----------------------------------------------------------


def maximally_entangled_state(d: int) -> np.ndarray:
    """Density matrix of (1/sqrt d) sum_k e_k (x) e_k, size d^2."""
    psi = np.zeros(d * d)
    for k in range(d):
        psi[k * d + k] = 1.0
    psi /= np.sqrt(d)
    return np.outer(psi, psi)


def partial_trace(m: np.ndarray, dx: int, dy: int, over: str = "x") -> np.ndarray:
    """Trace out one tensor factor of a (dx*dy) x (dx*dy) matrix."""
    t = m.reshape(dx, dy, dx, dy)
    if over == "x":
        return np.einsum("ijik->jk", t)
    if over == "y":
        return np.einsum("ijkj->ik", t)
    raise InvalidParameterError("over must be 'x' or 'y'")


def me_pair_trace(a: np.ndarray, b: np.ndarray, d: int) -> float:
    """Tr((A (x) B) rho) for the maximally entangled state: Tr(A B^T)/d."""
    return float(np.trace(a @ b.T)) / d


# -- protocols -----------------------------------------------------------------


@dataclass
class ZeroErrorReport:
    passed: bool
    max_violation: float
    instances: int
    witness: tuple | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "max_violation": self.max_violation,
                "instances": self.instances,
                "witness": list(self.witness) if self.witness else None}


@dataclass
class Protocol:
    """One-shot entanglement-assisted protocol bound to a channel.

    ``vectors[u]`` is (message, reduced unit vector) for each input u that
    some sender measurement uses; the sender POVM for message i consists of
    the rank-one projectors of that message's vectors (zero elsewhere), and
    receiver measurements are built per channel output from the inputs that
    can produce it. The completion operator I - sum_j B_t^j is folded into
    outcome 1.
    """

    channel: Channel
    dim: int
    M: int
    vectors: dict[int, tuple[int, np.ndarray]]
    shared_state: str = ""
    graph_ref: str = ""
    _members: dict[int, list[int]] = field(default_factory=dict)
    _output_members: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.shared_state:
            self.shared_state = f"maximally-entangled({self.dim})"
        self._members = {}
        for u, (i, _) in sorted(self.vectors.items()):
            self._members.setdefault(i, []).append(u)
        self._output_members = self.channel.output_members()

    def sender_measurement(self, i: int) -> dict[int, np.ndarray]:
        """POVM elements A_i^s for the inputs the message actually uses."""
        return {u: np.outer(self.vectors[u][1], self.vectors[u][1])
                for u in self._members.get(i, [])}

    def receiver_projectors(self, t: int) -> dict[int, np.ndarray]:
        """B_t^j per message j, without the completion operator."""
        out: dict[int, np.ndarray] = {}
        for u in self._output_members.get(t, []):
            if u in self.vectors:
                j, f = self.vectors[u]
                out[j] = out.get(j, np.zeros((self.dim, self.dim))) + np.outer(f, f)
        return out

    def receiver_measurement(self, t: int) -> list[np.ndarray]:
        """Full measurement for output t: outcomes 1..M, completion on 1."""
        proj = self.receiver_projectors(t)
        ops = [proj.get(j, np.zeros((self.dim, self.dim)))
               for j in range(1, self.M + 1)]
        ops[0] = ops[0] + np.eye(self.dim) - sum(ops)
        return ops

    def completeness_report(self, tol: float = COMPLETENESS_TOL,
                            output_sample: int = 256) -> dict:
        worst_sender = 0.0
        for i in self._members:
            total = sum(self.sender_measurement(i).values())
            worst_sender = max(worst_sender,
                               float(np.abs(total - np.eye(self.dim)).max()))
        # Receiver completion is exact by construction; the real constraint is
        # that the per-message projectors never overlap (sum has spectrum <= 1).
        worst_receiver = 0.0
        outputs = sorted(self._output_members)
        if len(outputs) > output_sample:
            rng = np.random.default_rng(0)
            outputs = sorted(rng.choice(outputs, size=output_sample, replace=False).tolist())
        for t in outputs:
            proj = self.receiver_projectors(t)
            if not proj:
                continue
            top = float(np.linalg.eigvalsh(sum(proj.values()))[-1])
            worst_receiver = max(worst_receiver, top - 1.0)
        passed = worst_sender <= tol and worst_receiver <= tol
        return {"passed": passed, "sender_deviation": worst_sender,
                "receiver_excess": max(worst_receiver, 0.0)}

    def zero_error_report(self, tol: float = ZERO_ERROR_TOL) -> ZeroErrorReport:
        """Exhaustive check of Tr((A_i^s (x) B_t^j) rho) = 0 for i != j, P(t|s) > 0."""
        d = self.dim
        worst = 0.0
        worst_witness = None
        instances = 0
        for i, members in self._members.items():
            for s in members:
                f_s = self.vectors[s][1]
                idx, _ = self.channel.row(s)
                for t in idx.tolist():
                    by_msg: dict[int, float] = {}
                    total = 0.0
                    for u in self._output_members.get(t, []):
                        if u in self.vectors:
                            j, f_u = self.vectors[u]
                            val = float(f_s @ f_u) ** 2
                            by_msg[j] = by_msg.get(j, 0.0) + val
                            total += val
                    for j in set(by_msg) | {1}:
                        if j == i:
                            continue
                        instances += 1
                        value = by_msg.get(j, 0.0)
                        if j == 1:
                            value += 1.0 - total  # completion operator
                        value = abs(value) / d
                        if value > worst:
                            worst = value
                            worst_witness = (i, j, self.channel.inputs[s],
                                             self.channel.outputs[t])
        passed = worst <= tol
        return ZeroErrorReport(passed, worst, instances,
                               None if passed else worst_witness)


def _vector_from_rank_one(num: np.ndarray) -> np.ndarray:
    """Unit vector f with num proportional to f f^T (sign immaterial)."""
    diag = np.diagonal(num)
    j0 = int(np.argmax(diag))
    if diag[j0] <= 0:
        raise ProtocolError("operator numerator is not a rank-one outer product")
    col = num[:, j0].astype(np.float64)
    return col / np.sqrt(float(diag[j0]) * float(np.trace(num)))


def protocol_from_cert(cert: EntCert, chan: Channel) -> Protocol:
    """Build and fully verify the protocol realizing a packing certificate.

    Accepts certificates whose rho is a scaled identity (even-weight or
    complete-graph cliques, and the one-dimensional classical embedding) or a
    scaled projector (weight-(n+1)/2 cliques); in the projector case vectors
    are re-expressed in an orthonormal basis of the projector's range, which
    preserves all inner products.
    """
    g = cert.graph
    if chan.input_count != g.vertex_count:
        raise InvalidParameterError(
            "channel inputs do not match the certificate's graph")
    labels = [g.vertex_label(i) for i in range(g.vertex_count)]
    if chan.inputs != labels:
        raise InvalidParameterError("channel input labels do not match the graph")

    vertex_message: dict[int, int] = {}
    ambient: dict[int, np.ndarray] = {}
    for (u, i), num in cert.ops.items():
        if u in vertex_message and vertex_message[u] != i:
            raise ProtocolError(f"vertex {u} carries two messages "
                                f"({vertex_message[u]} and {i})")
        vertex_message[u] = i
        ambient[u] = _vector_from_rank_one(num)

    rho = cert.rho_num
    scaled_identity = np.array_equal(rho, rho[0, 0] * np.eye(cert.dim, dtype=rho.dtype))
    if scaled_identity:
        d = cert.dim
        vectors = {u: (i, ambient[u]) for u, i in vertex_message.items()}
    else:
        evals, evecs = np.linalg.eigh(rho.astype(np.float64))
        keep = evals > evals[-1] / 2.0
        d = int(keep.sum())
        basis = evecs[:, keep]
        vectors = {u: (i, basis.T @ ambient[u]) for u, i in vertex_message.items()}
    proto = Protocol(chan, d, cert.M, vectors, graph_ref=cert.graph_ref)

    comp = proto.completeness_report()
    if not comp["passed"]:
        raise ProtocolError(f"measurement completeness violated: {comp}")
    report = proto.zero_error_report()
    if not report.passed:
        raise ProtocolError(f"zero-error condition violated by "
                            f"{report.max_violation:.3e} at {report.witness}")
    return proto


@dataclass(frozen=True)
class Transcript:
    message: int
    sender_outcome: str
    channel_output: str
    distribution: tuple[float, ...]
    decoded: int

    @property
    def correct(self) -> bool:
        return self.decoded == self.message

    def to_json(self) -> dict:
        return {"message": self.message, "sender_outcome": self.sender_outcome,
                "channel_output": self.channel_output,
                "distribution": list(self.distribution), "decoded": self.decoded,
                "correct": self.correct}


def simulate_transmission(proto: Protocol, chan: Channel, message: int,
                          seed: int = 0) -> Transcript:
    """Run the protocol once for one message with an explicit RNG seed.

    Small local dimensions go through the explicit shared state and the
    partial-trace rule; larger ones use the maximally-entangled trace
    identity, which agrees to float precision.
    """
    if message not in proto._members:
        raise InvalidParameterError(f"message {message} not in 1..{proto.M}")
    rng = np.random.default_rng(seed)
    d = proto.dim
    members = proto._members[message]
    sender = proto.sender_measurement(message)

    explicit = d <= EXPLICIT_STATE_MAX_DIM
    if explicit:
        rho = maximally_entangled_state(d)
        p = np.array([float(np.trace(np.kron(sender[s], np.eye(d)) @ rho))
                      for s in members])
    else:
        p = np.array([float(np.trace(sender[s])) / d for s in members])
    p = p / p.sum()
    s = int(rng.choice(members, p=p))
    t = chan.sample_output(s, rng)

    measurement = proto.receiver_measurement(t)
    if explicit:
        big = np.kron(sender[s], np.eye(d)) @ rho
        p_s = float(np.trace(big))
        post = partial_trace(big, d, d, over="x") / p_s
        dist = np.array([float(np.trace(b @ post)) for b in measurement])
    else:
        a = sender[s]
        p_s = float(np.trace(a)) / d
        dist = np.array([me_pair_trace(a, b, d) / p_s for b in measurement])
    dist = np.clip(dist, 0.0, None)
    decoded = int(np.argmax(dist)) + 1
    return Transcript(message, chan.inputs[s], chan.outputs[t],
                      tuple(float(x) for x in dist), decoded)
