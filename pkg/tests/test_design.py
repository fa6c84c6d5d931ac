from fractions import Fraction

import numpy as np
import pytest

from sweepanova import (
    BlockDesign,
    average_pairwise_variance,
    bib_check,
    canonical_efficiency_factors,
    concurrence,
    contrast_efficiency,
    effect_variances,
    efficiency_report,
    incidence,
    information_matrix,
    is_bib,
    is_connected,
    projector_from_design,
    reduce,
)
from sweepanova.exceptions import (
    DisconnectedDesignError,
    InvalidParametersError,
    NotAContrastError,
    UnequalBlockSizesError,
    UnequalReplicationError,
    ZeroVectorError,
)

from conftest import A_TABLE_29, random_block_design

HALF_CEF_CONTRASTS = np.array([[1, -1, 1, -1], [1, -1, -1, 1]]) / 2.0
UNIT_CEF_CONTRAST = np.array([1, 1, -1, -1]) / 2.0


def span_residual(basis, vectors):
    """Largest distance from ``vectors`` (rows) to the column span of ``basis``."""
    proj = basis @ np.linalg.pinv(basis)
    return np.abs(vectors - vectors @ proj.T).max()


class TestBlockDesign:
    def test_parameters(self, design29, design310):
        assert (design29.v, design29.b, design29.k, design29.r, design29.n) == (4, 4, 2, 2, 8)
        assert (design310.v, design310.b, design310.k, design310.r) == (7, 7, 3, 3)

    def test_unequal_block_sizes(self):
        with pytest.raises(UnequalBlockSizesError):
            BlockDesign.from_block_contents([[1, 2, 3], [1, 2], [3]])

    def test_unequal_replication(self):
        with pytest.raises(UnequalReplicationError):
            BlockDesign.from_block_contents([[1, 2], [1, 3]])

    def test_from_labels_first_appearance(self):
        d = BlockDesign.from_labels(["B", "B", "A", "A"], ["t2", "t1", "t1", "t2"])
        assert d.block_labels == ("B", "A") and d.treatment_labels == ("t2", "t1")
        np.testing.assert_array_equal(d.blocks, [0, 0, 1, 1])

    def test_same_as(self, design29):
        other = BlockDesign.from_block_contents([[1, 3], [2, 4], [2, 3], [1, 4]])
        assert design29.same_as(other)
        assert not design29.same_as(BlockDesign.from_block_contents([[1, 2], [3, 4], [1, 3], [2, 4]]))


class TestIncidence:
    def test_table_29(self, design29):
        np.testing.assert_array_equal(
            incidence(design29), [[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0], [0, 1, 0, 1]]
        )

    def test_rcbd(self, rcbd):
        np.testing.assert_array_equal(incidence(rcbd), np.ones((3, 2)))

    def test_margins(self, design310, rng):
        for d in [design310] + [random_block_design(rng) for _ in range(10)]:
            n = incidence(d)
            np.testing.assert_array_equal(n.sum(axis=1), np.full(d.v, d.r))
            np.testing.assert_array_equal(n.sum(axis=0), np.full(d.b, d.k))
            np.testing.assert_array_equal(n, d.treatment_term().design.T @ d.block_term().design)
            np.testing.assert_array_equal(concurrence(n).sum(axis=1), np.full(d.v, d.r * d.k))


class TestConcurrence:
    def test_table_29(self, design29):
        nn = concurrence(incidence(design29))
        np.testing.assert_array_equal(nn, [[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 2, 0], [1, 1, 0, 2]])

    def test_bib(self, design310):
        np.testing.assert_array_equal(concurrence(incidence(design310)), 2 * np.eye(7) + 1)

    def test_single_block(self):
        d = BlockDesign.from_block_contents([[1, 2, 3, 4]])
        np.testing.assert_array_equal(concurrence(incidence(d)), np.ones((4, 4)))


class TestConnectivity:
    def test_examples(self, design29, design310):
        assert is_connected(incidence(design29))
        assert is_connected(incidence(design310))
        assert not is_connected(np.array([[1, 0], [1, 0], [0, 1], [0, 1]]))

    def test_agrees_with_rank(self, rng):
        from sweepanova import eigh, numeric_rank

        for _ in range(30):
            d = random_block_design(rng)
            rank = numeric_rank(eigh(information_matrix(d)))
            assert is_connected(incidence(d)) == (rank == d.v - 1)
        d = BlockDesign.from_block_contents([[1, 2], [1, 2], [3, 4], [3, 4]])
        assert not is_connected(incidence(d))
        assert numeric_rank(eigh(information_matrix(d))) == 2


class TestInformationMatrix:
    def test_table_29_exact(self, design29):
        np.testing.assert_allclose(information_matrix(design29), A_TABLE_29, atol=1e-12, rtol=0)

    def test_bib(self, design310):
        expected = 7 / 9 * (np.eye(7) - np.ones((7, 7)) / 7)
        np.testing.assert_allclose(information_matrix(design310), expected, atol=1e-12)

    def test_rcbd(self, rcbd):
        np.testing.assert_allclose(information_matrix(rcbd), np.eye(3) - 1 / 3, atol=1e-15)

    def test_annihilates_ones_and_matches_sweep(self, rng):
        for _ in range(20):
            d = random_block_design(rng)
            a = information_matrix(d)
            assert np.abs(a @ np.ones(d.v)).max() <= 1e-12
            pb = projector_from_design(d.block_term().design)
            xt = reduce(d.treatment_term(), pb).matrix
            np.testing.assert_allclose(a, xt.T @ xt / d.r, atol=1e-12)


class TestCanonicalEfficiencyFactors:
    def test_table_29(self, design29):
        rep = efficiency_report(design29)
        np.testing.assert_allclose(rep.cefs, [1, 0.5, 0.5], atol=1e-10)
        assert rep.E_harmonic == pytest.approx(3 / 5, abs=1e-12)
        assert rep.min_cef == pytest.approx(0.5)
        assert not rep.is_bib and rep.lambda_ is None
        # spans, not vector identity: the 1/2 eigenspace is two-dimensional
        assert span_residual(rep.contrast_basis[:, :1], UNIT_CEF_CONTRAST[None]) <= 1e-10
        assert span_residual(rep.contrast_basis[:, 1:], HALF_CEF_CONTRASTS) <= 1e-10
        np.testing.assert_allclose(rep.contrast_basis.T @ np.ones(4), 0, atol=1e-12)

    def test_bib(self, design310):
        rep = efficiency_report(design310)
        np.testing.assert_allclose(rep.cefs, np.full(6, 7 / 9), atol=1e-10)
        assert rep.E_harmonic == pytest.approx(7 / 9, abs=1e-12)
        assert rep.is_bib and rep.lambda_ == 1 and rep.e_bib == Fraction(7, 9)

    def test_without_design_leaves_bib_fields(self, design310):
        rep = canonical_efficiency_factors(information_matrix(design310))
        assert not rep.is_bib

    def test_disconnected(self):
        d = BlockDesign.from_block_contents([[1, 2], [1, 2], [3, 4], [3, 4]])
        with pytest.raises(DisconnectedDesignError):
            efficiency_report(d)

    def test_mean_ordering_and_ranges(self, rng):
        for _ in range(30):
            d = random_block_design(rng)
            rep = efficiency_report(d)
            assert np.all(rep.cefs > 0) and np.all(rep.cefs <= 1 + 1e-9)
            if d.k < d.v:
                assert rep.min_cef < 1 - 1e-9
            assert rep.E_harmonic <= rep.geometric_mean + 1e-12
            assert rep.geometric_mean <= rep.arithmetic_mean + 1e-12
            if rep.is_bib:
                np.testing.assert_allclose(rep.cefs, float(rep.e_bib), atol=1e-10)


class TestContrastEfficiency:
    def test_table_29_contrasts(self, design29):
        a = information_matrix(design29)
        assert contrast_efficiency([1, -1, -1, 1], a) == pytest.approx(0.5, abs=1e-12)
        assert contrast_efficiency([1, 1, -1, -1], a) == pytest.approx(1.0, abs=1e-12)

    def test_bib_any_contrast(self, design310, rng):
        a = information_matrix(design310)
        for _ in range(5):
            c = rng.normal(size=7)
            assert contrast_efficiency(c - c.mean(), a) == pytest.approx(7 / 9, abs=1e-12)

    def test_errors(self, design29):
        a = information_matrix(design29)
        with pytest.raises(ZeroVectorError):
            contrast_efficiency(np.zeros(4), a)
        with pytest.raises(NotAContrastError):
            contrast_efficiency([1, 0, 0, 0], a)


class TestBibCheck:
    def test_table_310_parameters(self):
        res = bib_check(7, 3, 3)
        assert res.feasible and res.lambda_ == 1 and res.b == 7 and res.e == Fraction(7, 9)

    def test_infeasible(self):
        res = bib_check(4, 2, 2)
        assert not res.feasible and res.lambda_ == Fraction(2, 3) and res.e is None

    def test_feasible_but_nonexistent(self):
        res = bib_check(22, 7, 7)
        assert res.feasible and res.lambda_ == 2 and res.b == 22

    def test_b_less_than_v(self):
        # lambda and b are integers, but one block cannot hold a BIB on 7 treatments
        res = bib_check(7, 7, 1)
        assert res.lambda_ == 1 and res.b == 1 and not res.feasible

    def test_invalid(self):
        for args in [(1, 2, 1), (4, 1, 2), (4, 5, 2), (4, 2, 0)]:
            with pytest.raises(InvalidParametersError):
                bib_check(*args)


class TestIsBib:
    def test_examples(self, design29, design310):
        assert is_bib(design310) == (True, 1, "")
        status = is_bib(design29)
        assert not status.is_bib and "concurrences" in status.note

    def test_rcbd_rejected(self, rcbd):
        with pytest.raises(InvalidParametersError):
            is_bib(rcbd)

    def test_nonbinary(self):
        d = BlockDesign.from_block_contents([[1, 1], [2, 3], [2, 4], [3, 4]])
        status = is_bib(d)
        assert not status.is_bib and "binary" in status.note

    def test_all_pairs_design(self):
        # every pair of 4 treatments once: BIB with lambda = 1
        pairs = [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]
        assert is_bib(BlockDesign.from_block_contents(pairs)) == (True, 1, "")


class TestEffectVariances:
    def test_bib_pairwise(self, design310):
        rep = efficiency_report(design310)
        ev = effect_variances(rep, 3, 1.0)
        assert ev.pairwise_bib == pytest.approx(6 / 7, abs=1e-12)
        for i, j in [(0, 1), (2, 6), (3, 5)]:
            c = np.zeros(7)
            c[i], c[j] = 1, -1
            assert c @ ev.var_matrix @ c == pytest.approx(6 / 7, abs=1e-12)

    def test_rcbd(self, rcbd):
        ev = effect_variances(efficiency_report(rcbd), rcbd.r, 2.5)
        c = np.array([1.0, 0.0, -1.0])
        assert c @ ev.var_matrix @ c == pytest.approx(2 * 2.5 / rcbd.r, abs=1e-12)
        assert ev.pairwise_bib is None

    def test_table_29_half_cef_contrast(self, design29):
        ev = effect_variances(efficiency_report(design29), 2, 1.0)
        c = np.array([1.0, -1.0, -1.0, 1.0])
        assert c @ ev.var_matrix @ c == pytest.approx(4.0, abs=1e-12)

    def test_matches_pseudo_inverse(self, rng):
        for _ in range(10):
            d = random_block_design(rng)
            ev = effect_variances(efficiency_report(d), d.r, 1.3)
            oracle = 1.3 / d.r * np.linalg.pinv(information_matrix(d))
            np.testing.assert_allclose(ev.var_matrix, oracle, atol=1e-10)

    def test_average_variance_identity(self, design29, design310, rng):
        for d in [design29, design310] + [random_block_design(rng) for _ in range(20)]:
            rep = efficiency_report(d)
            avg = average_pairwise_variance(effect_variances(rep, d.r, 1.7).var_matrix)
            assert avg == pytest.approx(2 * 1.7 / (d.r * rep.E_harmonic), rel=1e-10)
