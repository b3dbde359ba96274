import numpy as np
import pytest

import capsep
from capsep.channel import (Channel, canonical_channel, check_zero_error_code,
                            confusability_graph, maximally_entangled_state,
                            me_pair_trace, partial_trace, pentagon_channel,
                            protocol_from_cert, simulate_transmission)
from capsep.entcert import EntCert, classical_embedding
from capsep.errors import InvalidParameterError, ProtocolError


def h3_protocol():
    rep = capsep.ortho_rep_H(3)
    packing = capsep.pack_cliques(
        rep.graph, capsep.clique_from_hadamard_H(capsep.sylvester(2)))
    cert = capsep.cert_from_packing(rep, packing)
    chan = canonical_channel(cert.graph)
    return protocol_from_cert(cert, chan), chan


class TestPentagonChannel:
    def test_confusability_is_c5(self):
        got = confusability_graph(pentagon_channel())
        assert set(got.edges()) == set(capsep.build_cycle(5).edges())

    def test_neighbors_share_an_output(self):
        c = pentagon_channel()
        assert c.support(0) & c.support(1) == {1}

    def test_non_neighbors_disjoint(self):
        c = pentagon_channel()
        assert not c.support(0) & c.support(2)

    def test_rows_are_half_half(self):
        c = pentagon_channel()
        idx, probs = c.row(3)
        assert idx.tolist() == [3, 4]
        assert probs.tolist() == [0.5, 0.5]


class TestConfusabilityGraph:
    def test_noiseless_channel_is_edgeless(self):
        c = Channel.from_dense([str(i) for i in range(4)],
                               [str(i) for i in range(4)], np.eye(4))
        assert confusability_graph(c).edge_count == 0

    def test_constant_channel_is_complete(self):
        mat = np.zeros((4, 2))
        mat[:, 0] = 1.0
        c = Channel.from_dense([str(i) for i in range(4)], ["a", "b"], mat)
        assert confusability_graph(c).edge_count == 6

    def test_row_sum_validation(self):
        with pytest.raises(InvalidParameterError):
            Channel.from_dense(["0"], ["a", "b"], [[0.5, 0.6]])

    def test_dense_json_export(self):
        payload = pentagon_channel().to_json()
        assert payload["inputs"] == ["0", "1", "2", "3", "4"]
        assert payload["outputs"] == ["a", "b", "c", "d", "e"]
        assert payload["rows"][0] == [0.5, 0.5, 0.0, 0.0, 0.0]

    def test_json_export_guarded_for_huge_channels(self, h11):
        from capsep.errors import ResourceLimitError
        chan = canonical_channel(h11)
        with pytest.raises(ResourceLimitError):
            chan.to_json()


class TestCanonicalChannel:
    def test_c5_round_trip(self):
        c5 = capsep.build_cycle(5)
        chan = canonical_channel(c5)
        assert len(chan.outputs) == 5 + 5
        got = confusability_graph(chan)
        assert set(got.edges()) == set(c5.edges())

    def test_h3_round_trip_complete(self):
        h3 = capsep.build_H(3)
        chan = canonical_channel(h3)
        got = confusability_graph(chan)
        assert got.edge_count == 6

    def test_g11_round_trip(self, g11):
        chan = canonical_channel(g11)
        got = confusability_graph(chan)
        assert got.edge_count == g11.edge_count
        assert all(g11.is_adjacent(i, j) for i, j in got.edges())


class TestZeroErrorCode:
    def test_caption_code_passes(self):
        c = pentagon_channel()
        words = [(0, 2), (1, 4), (2, 1), (3, 3), (4, 0)]
        ok, witness = check_zero_error_code(c, words)
        assert ok and witness is None

    def test_confusable_pair_fails_with_witness(self):
        c = pentagon_channel()
        ok, witness = check_zero_error_code(c, [(0,), (1,)])
        assert not ok
        assert witness["shared_outputs"] == ["b"]

    def test_single_word(self):
        assert check_zero_error_code(pentagon_channel(), [(0, 0)]) == (True, None)

    def test_length_mismatch(self):
        with pytest.raises(InvalidParameterError):
            check_zero_error_code(pentagon_channel(), [(0, 1), (2,)])


class TestQuantumHelpers:
    def test_partial_trace_preserves_trace(self):
        rng = np.random.default_rng(7)
        for dx, dy in ((2, 3), (3, 3), (4, 2)):
            m = rng.normal(size=(dx * dy, dx * dy))
            assert abs(np.trace(partial_trace(m, dx, dy, "x")) - np.trace(m)) < 1e-12
            assert abs(np.trace(partial_trace(m, dx, dy, "y")) - np.trace(m)) < 1e-12

    def test_partial_trace_of_kron(self):
        rng = np.random.default_rng(8)
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(4, 4))
        got = partial_trace(np.kron(a, b), 3, 4, "x")
        assert np.abs(got - np.trace(a) * b).max() < 1e-12
        got_y = partial_trace(np.kron(a, b), 3, 4, "y")
        assert np.abs(got_y - np.trace(b) * a).max() < 1e-12

    @pytest.mark.parametrize("d", range(2, 9))
    def test_me_trace_identity_two_ways(self, d):
        rng = np.random.default_rng(d)
        rho = maximally_entangled_state(d)
        for _ in range(20):
            a = rng.normal(size=(d, d))
            a = a + a.T
            b = rng.normal(size=(d, d))
            b = b + b.T
            explicit = float(np.trace(np.kron(a, b) @ rho))
            assert abs(explicit - me_pair_trace(a, b, d)) < 1e-10


class TestProtocol:
    def test_h3_trivial_message(self):
        proto, chan = h3_protocol()
        assert proto.M == 1
        report = proto.zero_error_report()
        assert report.passed and report.instances == 0  # condition is vacuous
        tr = simulate_transmission(proto, chan, 1, seed=0)
        assert tr.decoded == 1

    def test_h3_sender_distribution_sums_to_one(self):
        proto, chan = h3_protocol()
        total = 0.0
        rho = maximally_entangled_state(proto.dim)
        for s, a in proto.sender_measurement(1).items():
            total += float(np.trace(np.kron(a, np.eye(proto.dim)) @ rho))
        assert abs(total - 1.0) < 1e-10

    def test_h3_completeness(self):
        proto, _ = h3_protocol()
        report = proto.completeness_report()
        assert report["passed"]

    def test_receiver_measurement_sums_to_identity(self):
        proto, chan = h3_protocol()
        for t in range(len(chan.outputs)):
            total = sum(proto.receiver_measurement(t))
            assert np.abs(total - np.eye(proto.dim)).max() < 1e-12

    def test_merged_cliques_rejected(self, h11_cert):
        ops = {(u, 1 if i == 2 else i): num
               for (u, i), num in h11_cert.ops.items()}
        merged = EntCert(h11_cert.graph, h11_cert.M, h11_cert.dim,
                         h11_cert.denominator, h11_cert.rho_num, ops)
        chan = canonical_channel(h11_cert.graph)
        with pytest.raises(ProtocolError):
            protocol_from_cert(merged, chan)

    def test_dependent_dim1_cert_rejected(self):
        c5 = capsep.build_cycle(5)
        one = np.array([[1]], dtype=np.int64)
        bad = EntCert(c5, 2, 1, 1, one.copy(),
                      {(0, 1): one.copy(), (1, 2): one.copy()})
        chan = canonical_channel(c5)
        with pytest.raises(ProtocolError):
            protocol_from_cert(bad, chan)

    def test_wrong_channel_rejected(self, h11_cert):
        chan = pentagon_channel()
        with pytest.raises(InvalidParameterError):
            protocol_from_cert(h11_cert, chan)

    def test_classical_protocol_decodes_by_lookup(self, g11):
        rs = capsep.restricted_independent_set(11)
        idx = [g11.index_of(v.bits) for v in rs.vertices]
        cert = classical_embedding(g11, idx)
        chan = canonical_channel(g11)
        proto = protocol_from_cert(cert, chan)
        assert proto.dim == 1
        for message in (1, 14, 28):
            tr = simulate_transmission(proto, chan, message, seed=message)
            assert tr.decoded == message

    def test_transcript_json(self):
        proto, chan = h3_protocol()
        tr = simulate_transmission(proto, chan, 1, seed=5)
        payload = tr.to_json()
        assert payload["decoded"] == 1
        assert payload["correct"] is True
        assert len(payload["distribution"]) == proto.M
        assert abs(sum(payload["distribution"]) - 1.0) < 1e-9


class TestG11Protocol:
    def test_reduced_dimension_and_zero_error(self, g11_cert):
        chan = canonical_channel(g11_cert.graph)
        proto = protocol_from_cert(g11_cert, chan)
        assert proto.dim == 11  # hyperplane rank, one below ambient
        report = proto.zero_error_report()
        assert report.passed
        for message in range(1, proto.M + 1):
            tr = simulate_transmission(proto, chan, message, seed=message)
            assert tr.decoded == message
            assert tr.distribution[message - 1] >= 1.0 - 1e-9
