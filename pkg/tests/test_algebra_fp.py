import math
import random

import numpy as np
import pytest

import capsep
from capsep.algebra_fp import (FpMatrix, build_ST,
                               dump_matrix, frankl_wilson_Q, haemers_matrix,
                               inner_product_identity_check, load_matrix,
                               monomial_basis, multilinearize, rank_fp,
                               sign_vector)
from capsep.bitgraph import BitVertex
from capsep.errors import InvalidParameterError
from conftest import rank_by_row_reduction


def random_sign_point(n, rng):
    """A +-1 point of the cube as F_p-ready integers."""
    return np.array([rng.choice((1, -1)) for _ in range(n)], dtype=np.int64)


class TestInnerProductIdentity:
    def test_self_inner_product_is_minus_one(self):
        x = BitVertex(0b11111100000, 11)
        assert inner_product_identity_check(x, x, 3) == 2  # -1 mod 3

    def test_distance_six(self):
        x = BitVertex(0b11111100000, 11)
        y = BitVertex(0b00000011111 | (1 << 10), 11)
        assert capsep.hamming_distance(x, y) == 10
        y6 = BitVertex(0b11100000111, 11)
        assert capsep.hamming_distance(x, y6) == 6
        assert inner_product_identity_check(x, y6, 3) == (-13) % 3 == 2

    def test_distance_four(self):
        x = BitVertex(0b11111100000, 11)
        y = BitVertex(0b11110011000, 11)
        assert capsep.hamming_distance(x, y) == 4
        assert inner_product_identity_check(x, y, 3) == (-9) % 3 == 0

    def test_rejects_wrong_length(self):
        x = BitVertex(0b1010, 4)
        with pytest.raises(InvalidParameterError):
            inner_product_identity_check(x, x, 3)

    def test_random_pairs_match_distance_formula(self):
        rng = random.Random(11)
        for p in (3, 5):
            n = 4 * p - 1
            for _ in range(300):
                x = BitVertex(rng.randrange(2**n), n)
                y = BitVertex(rng.randrange(2**n), n)
                d = capsep.hamming_distance(x, y)
                assert inner_product_identity_check(x, y, p) == (-2 * d - 1) % p


class TestFranklWilsonQ:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_q_at_own_vector_is_minus_one(self, p):
        rng = random.Random(p)
        n = 4 * p - 1
        for _ in range(20):
            u = sign_vector(BitVertex(rng.randrange(2**n), n), p)
            q = frankl_wilson_Q(u, p)
            assert q.evaluate(u) == (-1) % p  # Wilson's theorem

    def test_p3_value_by_hand(self):
        # <u,u> = -1, so the product is (-1)(-2) = 2 = -1 mod 3
        u = sign_vector(BitVertex(0b01101100011, 11), 3)
        assert frankl_wilson_Q(u, 3).evaluate(u) == 2

    def test_vanishes_off_minus_one(self):
        rng = random.Random(17)
        p, n = 3, 11
        hits = 0
        while hits < 200:
            u = sign_vector(BitVertex(rng.randrange(2**n), n), p)
            v = sign_vector(BitVertex(rng.randrange(2**n), n), p)
            ip = int(u @ v) % p
            if ip != p - 1:
                assert frankl_wilson_Q(u, p).evaluate(v) == 0
                hits += 1

    def test_rejects_wrong_length(self):
        with pytest.raises(InvalidParameterError):
            frankl_wilson_Q(np.ones(10, dtype=np.int64), 3)


class TestMultilinearize:
    def test_agrees_with_product_form_oracle(self):
        rng = random.Random(23)
        p, n = 3, 11
        for _ in range(30):
            u = sign_vector(BitVertex(rng.randrange(2**n), n), p)
            q = frankl_wilson_Q(u, p)
            poly = multilinearize(q)
            assert poly.degree <= p - 1
            for _ in range(40):
                v = random_sign_point(n, rng)
                assert poly.evaluate(v) == q.evaluate(v)

    def test_square_terms_collapse_to_constants(self):
        # For u = all-plus-ones, Q = t(t-1); t^2 contributes the constant n mod p.
        u = np.ones(11, dtype=np.int64)
        poly = multilinearize(frankl_wilson_Q(u, 3))
        assert poly.terms.get(0, 0) == 11 % 3 == 2

    @pytest.mark.parametrize("p", [3, 5])
    def test_degree_bound(self, p):
        n = 4 * p - 1
        rng = random.Random(p + 100)
        for _ in range(10):
            u = sign_vector(BitVertex(rng.randrange(2**n), n), p)
            assert multilinearize(frankl_wilson_Q(u, p)).degree <= p - 1


class TestBuildST:
    def test_monomial_count_n11_p3(self):
        basis = monomial_basis(11, 3)
        assert len(basis) == 1 + 11 + 55 == 67
        assert len(basis) == sum(math.comb(11, i) for i in range(3))
        assert basis == sorted(basis, key=lambda m: (bin(m).count("1"), m))

    def test_constant_monomial_column_is_ones(self, g11):
        s, t = build_ST(g11, 3)
        assert (t.data[:, 0] == 1).all()
        assert s.rows == t.rows == 462
        assert s.cols == t.cols == 67

    def test_diagonal_nonzero_everywhere(self, g11):
        s, t = build_ST(g11, 3)
        a = (s.data.astype(np.int64) @ t.data.astype(np.int64).T) % 3
        assert (np.diagonal(a) != 0).all()

    def test_rejects_wrong_n(self):
        with pytest.raises(InvalidParameterError):
            build_ST(capsep.build_G(9), 3)


class TestHaemers:
    def test_g11_fits_and_rank(self, g11):
        result = haemers_matrix(g11, 3)
        assert result.fits
        assert result.bound == 67
        rank = rank_fp(result.matrix)
        assert rank <= 67

    def test_h11_fits(self, h11):
        result = haemers_matrix(h11, 3)
        assert result.fits
        assert rank_fp(result.matrix) <= 67

    def test_diagonal_value(self, g11):
        result = haemers_matrix(g11, 3)
        # Q_u(u) = (-1)^p = -1 survives multilinearization onto the diagonal
        assert set(np.diagonal(result.matrix.data).tolist()) == {(-1) % 3}

    def test_entries_match_direct_polynomial_evaluation(self, g11):
        result = haemers_matrix(g11, 3)
        a = result.matrix.data
        rng = random.Random(29)
        for _ in range(10**3):
            i, j = rng.randrange(462), rng.randrange(462)
            poly = multilinearize(frankl_wilson_Q(g11.vertex(i), 3))
            assert int(a[i, j]) == poly.evaluate(sign_vector(g11.vertex(j), 3))

    def test_independent_set_below_rank(self, g11):
        rs = capsep.restricted_independent_set(11)
        assert rs.verified
        assert len(rs) <= rank_fp(haemers_matrix(g11, 3).matrix)


class TestRank:
    def test_identity(self):
        assert rank_fp(FpMatrix(3, np.eye(5, dtype=np.uint8))) == 5

    def test_zero(self):
        assert rank_fp(FpMatrix(3, np.zeros((4, 6), dtype=np.uint8))) == 0

    @pytest.mark.parametrize("p", [3, 5])
    def test_matches_row_reduction_oracle(self, p):
        rng = np.random.default_rng(p)
        for _ in range(25):
            rows, cols = rng.integers(1, 21, size=2)
            m = rng.integers(0, p, size=(rows, cols)).astype(np.uint8)
            assert rank_fp(FpMatrix(p, m)) == rank_by_row_reduction(m, p)

    def test_kron_rank_multiplicative(self):
        rng = np.random.default_rng(31)
        for p in (3, 5):
            for _ in range(10):
                a = rng.integers(0, p, size=(rng.integers(2, 13),
                                             rng.integers(2, 13)))
                b = rng.integers(0, p, size=(rng.integers(2, 13),
                                             rng.integers(2, 13)))
                assert rank_fp(np.kron(a, b) % p, p) == \
                    rank_fp(a % p, p) * rank_fp(b % p, p)

    def test_product_rank_bounded_by_factors(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            s = rng.integers(0, 3, size=(12, 7))
            t = rng.integers(0, 3, size=(12, 7))
            prod = (s @ t.T) % 3
            assert rank_fp(prod, 3) <= min(rank_fp(s, 3), rank_fp(t, 3))


class TestFpMatrixIO:
    def test_dump_load_round_trip(self, tmp_path, g11):
        result = haemers_matrix(g11, 3)
        path = tmp_path / "a.fpm"
        dump_matrix(result.matrix, str(path))
        loaded = load_matrix(str(path))
        assert loaded.p == 3
        assert np.array_equal(loaded.data, result.matrix.data)

    def test_bad_magic_rejected(self):
        with pytest.raises(InvalidParameterError):
            FpMatrix.from_bytes(b"XXXX" + b"\x00" * 20)

    def test_rejects_unreduced_entries(self):
        with pytest.raises(InvalidParameterError):
            FpMatrix(3, np.full((2, 2), 3, dtype=np.uint8))

    def test_rejects_composite_modulus(self):
        with pytest.raises(InvalidParameterError):
            FpMatrix(6, np.zeros((2, 2), dtype=np.uint8))
