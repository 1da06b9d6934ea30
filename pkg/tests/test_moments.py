import math
from fractions import Fraction

import pytest

from latshift import (
    DyadicPoint,
    EmbeddedPair,
    GeneratingVector,
    GuardLimitError,
    ProductBernoulliFn,
    Rank1Rule,
    eval_rule,
    extended_rule_value,
    korobov_vector,
    moments_grid_shift,
    moments_scalar_shift,
    rectangle_rule_mean,
)

from conftest import rel_err

# frozen from the exact-rational enumeration oracle (Fraction arithmetic,
# converted to float at the end); the float pipeline must agree closely
EXACT_STATS = {
    # (s, m, r, ell): (bias_grid, sd_grid, bias_scalar, sd_scalar)
    (3, 4, 4, 17797): (1.954396841702638e-3, 7.937577255576664e-4, 5.1619162835909386e-9, 8.389065803427922e-4),
    (3, 4, 4, 1267): (1.954396841702638e-3, 7.937577255576664e-4, 1.5158090747349946e-8, 8.373605029734753e-4),
    (3, 4, 4, 12915): (1.954396841702638e-3, 7.937577255576664e-4, 1.9154795114105065e-8, 8.377855040775839e-4),
    (2, 5, 5, 17797): (3.255473242865668e-4, 1.6597786406663046e-4, 1.2939601331487311e-9, 1.8194418231206588e-4),
    (2, 5, 5, 1267): (3.255473242865668e-4, 1.6597786406663046e-4, 4.4992694844216754e-9, 1.8195363287846724e-4),
    (2, 5, 5, 12915): (3.255473242865668e-4, 1.6597786406663046e-4, 1.782019947933678e-9, 1.8202272191792567e-4),
}


class TestTableCellsAgainstExactOracle:
    def test_all_cells(self, table_cells):
        for key, (grid, scalar) in table_cells.items():
            bias_v, sd_v, bias_w, sd_w = EXACT_STATS[key]
            assert rel_err(grid.bias, bias_v) < 1e-10, key
            assert rel_err(grid.sd, sd_v) < 1e-10, key
            assert rel_err(scalar.bias, bias_w) < 1e-6, key
            assert rel_err(scalar.sd, sd_w) < 1e-10, key

    def test_scheme_sds_are_comparable(self, table_cells):
        # the two schemes spend the same bit budget; their spreads stay close
        # and the grid scheme's bias is of the order of its own SD
        for grid, scalar in table_cells.values():
            assert 0.9 <= scalar.sd / grid.sd <= 1.2
            assert 1 / 5 <= abs(grid.bias) / grid.sd <= 5

    def test_reports_are_well_formed(self, table_cells):
        for grid, scalar in table_cells.values():
            for rep in (grid, scalar):
                assert rep.sd == math.sqrt(rep.variance)
                assert rep.variance >= 0.0
                assert rep.method == "enumeration"
                assert rep.mean_check_rel_err <= 1e-12
            assert grid.scheme == "grid-shift"
            assert scalar.scheme == "scalar-shift"
            assert grid.shift_space_size == scalar.shift_space_size


class TestExactRationalSpotCheck:
    def test_small_scalar_config(self):
        # full independent recomputation in exact rational arithmetic
        s, m, r, ell = 2, 3, 3, 1267
        sr = s * r
        ext = m + sr
        z = [pow(ell, i, 1 << ext) for i in range(s)]
        sixth = Fraction(1, 6)

        def fval(k):
            out = Fraction(1)
            for zi in z:
                x = Fraction((k * zi) % (1 << ext), 1 << ext)
                out *= 1 + x * x - x + sixth
            return out

        qs = []
        for w in range(1 << sr):
            acc = Fraction(0)
            for j in range(1 << m):
                acc += fval((j << sr) | w)
            qs.append(acc / (1 << m))
        mean = sum(qs) / len(qs)
        var = sum((q - mean) ** 2 for q in qs) / len(qs)

        f = ProductBernoulliFn(s)
        pair = EmbeddedPair(m, sr, korobov_vector(ell, s, ext))
        rep = moments_scalar_shift(pair, f)
        assert rel_err(rep.mean, float(mean)) < 1e-13
        assert rel_err(rep.variance, float(var)) < 1e-10
        assert rel_err(rep.mu3, float(sum((q - mean) ** 3 for q in qs) / len(qs))) < 1e-8


class TestRectangleRuleMean:
    def test_closed_form_3_4(self):
        f = ProductBernoulliFn(3)
        assert rel_err(rectangle_rule_mean(f, 3, 4), (1 + 1 / 1536) ** 3) < 1e-13

    def test_closed_form_2_5(self):
        f = ProductBernoulliFn(2)
        assert rel_err(rectangle_rule_mean(f, 2, 5), (1 + 1 / 6144) ** 2) < 1e-13

    def test_single_point_grid(self):
        f = ProductBernoulliFn(1)
        assert rectangle_rule_mean(f, 1, 0) == pytest.approx(7 / 6, rel=1e-14)

    def test_non_factorized_path_agrees(self):
        class Wrapped(ProductBernoulliFn):
            factor = None  # hide the factorization

        f = ProductBernoulliFn(2)
        w = Wrapped(2)
        assert rel_err(rectangle_rule_mean(w, 2, 4), rectangle_rule_mean(f, 2, 4)) < 1e-13

    def test_non_factorized_guard(self):
        class Wrapped(ProductBernoulliFn):
            factor = None

        with pytest.raises(GuardLimitError):
            rectangle_rule_mean(Wrapped(3), 3, 10)


class TestExtendedRuleValue:
    def test_degenerate_extension_is_base_rule(self):
        f = ProductBernoulliFn(2)
        pair = EmbeddedPair(4, 0, korobov_vector(1267, 2, 4))
        assert extended_rule_value(pair, f) == eval_rule(pair.base_rule(), f)

    def test_invariant_under_odd_scaling(self):
        # the node set is invariant under z -> c*z mod 2^ext for odd c
        s, m, sr = 2, 3, 5
        ext = m + sr
        n = 1 << ext
        f = ProductBernoulliFn(s)
        base = extended_rule_value(EmbeddedPair(m, sr, korobov_vector(17797, s, ext)), f)
        z0 = korobov_vector(17797, s, ext).components
        for c in range(1, n, 2):
            z = GeneratingVector(tuple(c * zi for zi in z0), ext)
            val = extended_rule_value(EmbeddedPair(m, sr, z), f)
            assert rel_err(val, base) < 1e-13

    def test_guard(self):
        f = ProductBernoulliFn(1)
        with pytest.raises(GuardLimitError):
            extended_rule_value(EmbeddedPair(14, 13, GeneratingVector((1,), 27)), f)


class TestIdentityCrossCheck:
    def test_fires_on_inconsistent_factorization(self):
        # a per-coordinate factor that disagrees with eval makes the
        # rectangle-rule route diverge from the enumeration route
        from latshift import IdentityCheckError
        from latshift.functions import bernoulli2

        class LyingFactor(ProductBernoulliFn):
            def factor(self, x):
                return 1.0 + bernoulli2(x) + 1e-6

        rule = Rank1Rule(3, korobov_vector(17797, 2, 3))
        with pytest.raises(IdentityCheckError):
            moments_grid_shift(rule, LyingFactor(2), 3)


class TestGuardsAndValidation:
    def test_grid_requires_r_at_least_m(self):
        f = ProductBernoulliFn(2)
        rule = Rank1Rule(4, korobov_vector(1267, 2, 4))
        with pytest.raises(ValueError, match="below rule resolution"):
            moments_grid_shift(rule, f, 3)

    def test_grid_shift_space_guard(self):
        f = ProductBernoulliFn(3)
        rule = Rank1Rule(3, korobov_vector(1267, 3, 3))
        with pytest.raises(GuardLimitError):
            moments_grid_shift(rule, f, 9)  # 2^27 shifts

    def test_scalar_shift_space_guard(self):
        f = ProductBernoulliFn(3)
        pair = EmbeddedPair(1, 27, korobov_vector(1267, 3, 28))
        with pytest.raises(GuardLimitError):
            moments_scalar_shift(pair, f)


class TestDeterminism:
    def test_thread_count_does_not_change_reports(self, monkeypatch):
        s, m, r = 2, 3, 3
        f = ProductBernoulliFn(s)
        rule = Rank1Rule(m, korobov_vector(17797, s, m))
        pair = EmbeddedPair(m, s * r, korobov_vector(17797, s, m + s * r))
        monkeypatch.setenv("LATSHIFT_THREADS", "1")
        a = (moments_grid_shift(rule, f, r), moments_scalar_shift(pair, f))
        monkeypatch.setenv("LATSHIFT_THREADS", "4")
        b = (moments_grid_shift(rule, f, r), moments_scalar_shift(pair, f))
        assert a == b
