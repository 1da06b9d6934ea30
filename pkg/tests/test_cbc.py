import pytest

from latshift import (
    GeneratingVector,
    GuardLimitError,
    ProductBernoulliFn,
    Rank1Rule,
    cbc_construct,
    embedded_merit,
    eval_rule,
    korobov_vector,
    merit,
)
from latshift.cbc import _normalizers, _sample_candidates

from conftest import rel_err


class TestMerit:
    def test_one_dimensional_closed_form(self):
        # grid mean of B2 over 8 points: 1/(6 * 64)
        m = merit(GeneratingVector((1,), 3), 8)
        assert rel_err(m.value, 1.0 / 384.0) < 1e-12
        assert m.level == 8

    def test_matches_plain_rule_evaluation(self):
        f = ProductBernoulliFn(2)
        for z in [(1, 3), (1, 7), (3, 5)]:
            rule = Rank1Rule(4, GeneratingVector(z, 4))
            direct = eval_rule(rule, f) - 1.0
            assert rel_err(merit(GeneratingVector(z, 4), 16).value, direct) < 1e-12

    def test_extended_korobov_17797(self, table_cells):
        # the extended-level merit IS the scalar-shift bias; the two routes
        # share only the integrand, so they disagree at the float-noise
        # floor (~1e-16 absolute on a 5e-9 quantity)
        m = merit(korobov_vector(17797, 3, 16), 1 << 16)
        assert rel_err(m.value, table_cells[(3, 4, 4, 17797)][1].bias) < 1e-7

    def test_positive(self):
        for z, n in [((1,), 2), ((1, 3), 16), ((1, 5, 7), 64)]:
            assert merit(GeneratingVector(z, 6), n).value > 0.0

    def test_negation_invariance_is_exact(self):
        n = 64
        for z in range(1, n, 2):
            a = merit(GeneratingVector((1, z), 6), n).value
            b = merit(GeneratingVector((1, n - z), 6), n).value
            assert a == b

    def test_permutation_invariance_is_exact(self):
        assert (
            merit(GeneratingVector((3, 1, 5), 6), 64).value
            == merit(GeneratingVector((5, 3, 1), 6), 64).value
        )

    def test_odd_scaling_invariance(self):
        n = 64
        base = merit(GeneratingVector((1, 3), 6), n).value
        for c in range(1, n, 2):
            scaled = GeneratingVector((c % n, (3 * c) % n), 6)
            assert rel_err(merit(scaled, n).value, base) < 1e-13

    def test_agrees_with_dual_series_route(self):
        # two independent computations of Qf - 1: node-space evaluation vs
        # the truncated dual-lattice coefficient sum
        from latshift import TruncationBox, shift_error_series

        f = ProductBernoulliFn(2)
        for z, m in [((1, 3), 3), ((1, 7), 4)]:
            gv = GeneratingVector(z, m)
            series = shift_error_series(Rank1Rule(m, gv), f, None, TruncationBox(128))
            assert abs(merit(gv, 1 << m).value - series.value) <= series.tail_bound

    def test_validation(self):
        with pytest.raises(ValueError):
            merit(GeneratingVector((1,), 4), 12)  # not a power of two
        with pytest.raises(ValueError):
            merit(GeneratingVector((1,), 4), 32)  # vector too shallow
        with pytest.raises(GuardLimitError):
            merit(GeneratingVector((1,), 27), 1 << 27)


class TestEmbeddedMerit:
    def test_korobov_1267_extended_level(self):
        # (s, m, r) = (2, 5, 5): extended merit equals the scalar-shift bias
        em = embedded_merit(korobov_vector(1267, 2, 15), 5, 10)
        assert rel_err(em.extended.value, 4.4993e-9) < 1e-3
        assert em.base.level == 32 and em.extended.level == 1 << 15

    def test_degenerate_extension_uses_base_only(self):
        z = korobov_vector(17797, 2, 5)
        em = embedded_merit(z, 5, 0)
        rb, _ = _normalizers(2, 5, 0)
        assert em.combined == em.base.value / rb
        assert em.base == em.extended

    def test_ordering_matches_direct_merit_comparison(self):
        # two candidate vectors at s = 2: the combined ordering must agree
        # with the per-level merit comparison when one dominates the other
        m, sr = 2, 4
        n = 1 << (m + sr)
        good = GeneratingVector((1, 3), 6)
        bad = GeneratingVector((1, n - 1), 6)  # mirror-equivalent to (1, 1)
        em_good = embedded_merit(good, m, sr)
        em_bad = embedded_merit(bad, m, sr)
        assert merit(good, n).value < merit(bad, n).value
        assert em_good.combined < em_bad.combined


class TestCbcConstruct:
    def test_first_component_fixed(self):
        assert cbc_construct(1, 4, 8).components == (1,)

    def test_components_odd_and_in_range(self):
        z = cbc_construct(3, 3, 6)
        ext = 1 << 9
        assert z.components[0] == 1
        for c in z.components:
            assert c % 2 == 1 and 0 < c < ext

    def test_deterministic(self):
        a = cbc_construct(3, 3, 6)
        b = cbc_construct(3, 3, 6)
        assert a == b

    def test_locally_optimal_at_every_stage(self):
        # at each dimension d, the partial vector must beat every
        # single-candidate replacement of its last component
        s, m, sr = 3, 3, 6
        z = cbc_construct(s, m, sr)
        for d in (2, 3):
            partial = z.components[:d]
            chosen = embedded_merit(GeneratingVector(partial, m + sr), m, sr).combined
            for cand in range(1, 1 << (m + sr), 2):
                alt = GeneratingVector(partial[:-1] + (cand,), m + sr)
                assert chosen <= embedded_merit(alt, m, sr).combined, (d, cand)

    def test_second_component_locally_optimal(self):
        s, m, sr = 2, 3, 5
        z = cbc_construct(s, m, sr)
        chosen = embedded_merit(z, m, sr).combined
        for cand in range(1, 1 << (m + sr), 2):
            alt = GeneratingVector((1, cand), m + sr)
            assert chosen <= embedded_merit(alt, m, sr).combined

    def test_empty_candidate_set(self):
        with pytest.raises(ValueError, match="empty candidate set"):
            cbc_construct(2, 0, 0)

    def test_guards_and_validation(self):
        with pytest.raises(GuardLimitError):
            cbc_construct(2, 14, 13)
        with pytest.raises(GuardLimitError):
            cbc_construct(2, 4, 14, candidate_policy="full")
        with pytest.raises(ValueError):
            cbc_construct(2, 4, 4, candidate_policy="random")
        with pytest.raises(ValueError):
            cbc_construct(0, 4, 4)


class TestSampledPolicy:
    def test_sample_is_deterministic_odd_lower_half(self):
        n_ext = 1 << 18
        a = _sample_candidates(n_ext)
        b = _sample_candidates(n_ext)
        assert (a == b).all()
        assert len(a) == 4096
        assert all(int(c) % 2 == 1 for c in a)
        assert int(a.max()) <= n_ext // 2
        assert sorted(set(int(c) for c in a)) == [int(c) for c in a]

    def test_small_space_sample_covers_everything(self):
        n_ext = 1 << 8
        a = _sample_candidates(n_ext)
        assert len(a) == n_ext // 4
