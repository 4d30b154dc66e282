import numpy as np
import pytest

from complexity_atlas.errors import ValidationError
from complexity_atlas.inequality import expected_gini, pgi_table, whatif
from conftest import make_adv, make_shares
from oracles import expected_gini_oracle, pgi_oracle


def random_instance(rng, n_c, n_p, gini_coverage=1.0):
    m = (rng.random((n_c, n_p)) < 0.5).astype(int)
    m[:, 0] = 1  # every country exports P00 so no empty baskets
    v = rng.random((n_c, n_p)) * m + rng.random((n_c, n_p)) * 0.1
    s = v / v.sum(axis=1, keepdims=True)
    gini = [
        float(rng.uniform(0.2, 0.6)) if rng.random() < gini_coverage else None
        for _ in range(n_c)
    ]
    return make_adv(m), make_shares(s), gini


class TestPgiTable:
    def test_constant_gini_gives_constant_pgi(self):
        adv = make_adv([[1, 1], [1, 0]])
        s = make_shares([[0.5, 0.5], [1.0, 0.0]])
        table = pgi_table(adv, s, {"C00": 0.4, "C01": 0.4})
        assert table.pgi("P00") == pytest.approx(0.4, abs=1e-15)
        assert table.pgi("P01") == pytest.approx(0.4, abs=1e-15)

    def test_hand_example(self):
        # {A: s=0.5, g=0.30}, {B: s=0.1, g=0.50} -> (0.15+0.05)/0.6
        adv = make_adv([[1], [1]])
        s = make_shares([[0.5], [0.1]])
        table = pgi_table(adv, s, {"C00": 0.30, "C01": 0.50})
        assert table.pgi("P00") == pytest.approx(0.2 / 0.6, rel=1e-12)
        assert table.entries["P00"].n_p == pytest.approx(0.6, rel=1e-12)

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            adv, s, gini = random_instance(
                rng, int(rng.integers(3, 12)), int(rng.integers(3, 15)), 0.8
            )
            gmap = {c: g for c, g in zip(adv.countries, gini) if g is not None}
            table = pgi_table(adv, s, gmap)
            oracle_pgi, oracle_np = pgi_oracle(adv.m, s.values, gini)
            got_products = {adv.products.index(p) for p in table.entries}
            assert got_products == set(oracle_pgi)
            for p, e in table.entries.items():
                j = adv.products.index(p)
                assert e.pgi == pytest.approx(oracle_pgi[j], abs=1e-12)
                assert e.n_p == pytest.approx(oracle_np[j], abs=1e-12)

    def test_bounds_exact(self):
        rng = np.random.default_rng(67)
        for _ in range(50):
            adv, s, gini = random_instance(rng, 8, 10)
            gmap = dict(zip(adv.countries, gini))
            table = pgi_table(adv, s, gmap)
            for e in table.entries.values():
                ginis = [c.gini for c in e.contributors]
                assert min(ginis) <= e.pgi <= max(ginis)

    def test_scale_invariance_single_country(self):
        # Rescaling one country's raw exports leaves every PGI unchanged:
        # shares absorb the scale before the table sees anything.
        from complexity_atlas.matrix import shares as share_op
        from conftest import make_exports

        rng = np.random.default_rng(71)
        v = rng.random((5, 7)) + 0.05
        m = (rng.random((5, 7)) < 0.6).astype(int)
        m[:, 0] = 1
        gmap = {f"C{i:02d}": 0.3 + 0.03 * i for i in range(5)}
        t1 = pgi_table(make_adv(m), share_op(make_exports(v)), gmap)
        v2 = v.copy()
        v2[3] *= 8.0  # power of two: exact share equality
        t2 = pgi_table(make_adv(m), share_op(make_exports(v2)), gmap)
        for p in t1.entries:
            assert t1.pgi(p) == t2.pgi(p)

    def test_uncovered_product_excluded(self):
        adv = make_adv([[1, 1], [0, 1]])
        s = make_shares([[0.5, 0.5], [0.0, 1.0]])
        table = pgi_table(adv, s, {"C01": 0.5})  # C00 has no Gini
        assert "P00" in table.excluded_products
        assert "P01" in table.entries

    def test_weighted_mean_identity(self):
        # sum_p N_p PGI_p == sum over RCA cells of s*gini (restricted to
        # covered countries): both equal the same double sum.
        rng = np.random.default_rng(73)
        for _ in range(20):
            adv, s, gini = random_instance(rng, 7, 9, 0.7)
            gmap = {c: g for c, g in zip(adv.countries, gini) if g is not None}
            table = pgi_table(adv, s, gmap)
            lhs = sum(e.n_p * e.pgi for e in table.entries.values())
            rhs = 0.0
            for i, c in enumerate(adv.countries):
                if c not in gmap:
                    continue
                for j in range(len(adv.products)):
                    if adv.m[i, j]:
                        rhs += s.values[i, j] * gmap[c]
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestExpectedGini:
    def test_single_product(self):
        adv = make_adv([[1]])
        s = make_shares([[1.0]])
        table = pgi_table(adv, s, {"C00": 0.37})
        assert expected_gini("C00", adv, s, table) == pytest.approx(0.37, abs=1e-15)

    def test_equal_weight_midpoint(self):
        adv = make_adv([[1, 1], [1, 0], [0, 1]])
        s = make_shares([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]])
        table = pgi_table(adv, s, {"C01": 0.40, "C02": 0.50})
        # C00 lacks Gini but still has an expected value over its basket.
        eg = expected_gini("C00", adv, s, table)
        p0, p1 = table.pgi("P00"), table.pgi("P01")
        assert eg == pytest.approx((p0 + p1) / 2, abs=1e-12)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(79)
        for _ in range(50):
            adv, s, gini = random_instance(rng, 6, 8, 0.8)
            gmap = {c: g for c, g in zip(adv.countries, gini) if g is not None}
            table = pgi_table(adv, s, gmap)
            pgis = {adv.products.index(p): e.pgi for p, e in table.entries.items()}
            for i, c in enumerate(adv.countries):
                got = expected_gini(c, adv, s, table)
                want = expected_gini_oracle(i, adv.m, s.values, pgis)
                if want is None:
                    assert got is None
                else:
                    assert got == pytest.approx(want, abs=1e-12)

    def test_no_eligible_products_is_missing(self):
        adv = make_adv([[1, 0], [0, 1]])
        s = make_shares([[1.0, 0.0], [0.0, 1.0]])
        table = pgi_table(adv, s, {"C01": 0.5})  # only P01 covered
        assert expected_gini("C00", adv, s, table) is None


class TestWhatIf:
    def setup_method(self):
        self.adv = make_adv([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        self.s = make_shares(
            [[0.625, 0.25, 0.125], [0.125, 0.5, 0.375], [0.25, 0.125, 0.625]]
        )
        self.gini = {"C00": 0.30, "C01": 0.45, "C02": 0.55}
        self.table = pgi_table(self.adv, self.s, self.gini)

    def test_empty_edits_zero_delta(self):
        res = whatif("C00", [], [], self.adv, self.s, self.table)
        assert res.delta == 0.0
        assert res.baseline == res.scenario

    def test_removing_high_pgi_lowers_eg(self):
        pgis = {p: self.table.pgi(p) for p in ("P00", "P01")}
        worst = max(pgis, key=pgis.get)
        res = whatif("C00", [], [worst], self.adv, self.s, self.table)
        assert res.delta < 0

    def test_single_edit_delta_sign(self):
        # Adding mass at a product above the baseline EG raises it and
        # below lowers it.
        base = expected_gini("C01", self.adv, self.s, self.table)
        res = whatif("C01", ["P00"], [], self.adv, self.s, self.table)
        if self.table.pgi("P00") > base:
            assert res.delta > 0
        else:
            assert res.delta < 0

    def test_added_weight_is_world_mean(self):
        res = whatif("C01", ["P00"], [], self.adv, self.s, self.table)
        entry = self.table.entries["P00"]
        assert res.added[0].share == pytest.approx(
            entry.n_p / len(entry.contributors), abs=1e-15
        )

    def test_user_supplied_share(self):
        res = whatif("C01", {"P00": 0.5}, [], self.adv, self.s, self.table)
        assert res.added[0].share == 0.5

    def test_add_remove_overlap_rejected(self):
        with pytest.raises(ValidationError):
            whatif("C00", ["P01"], ["P01"], self.adv, self.s, self.table)

    def test_add_existing_rejected(self):
        with pytest.raises(ValidationError):
            whatif("C00", ["P00"], [], self.adv, self.s, self.table)

    def test_remove_absent_rejected(self):
        with pytest.raises(ValidationError):
            whatif("C00", [], ["P02"], self.adv, self.s, self.table)

    def test_empty_scenario_basket_rejected(self):
        with pytest.raises(ValidationError):
            whatif("C00", [], ["P00", "P01"], self.adv, self.s, self.table)

    def test_unknown_product_rejected(self):
        with pytest.raises(ValidationError):
            whatif("C00", ["ZZZZ"], [], self.adv, self.s, self.table)

    def test_commodity_to_machinery_shift_lowers_eg(self):
        # A country moving out of two high-PGI commodities into low-PGI
        # machinery sees its expected Gini fall.
        m = np.array(
            [
                [1, 1, 0, 0],  # the shifting country: commodities only
                [1, 1, 0, 0],
                [0, 0, 1, 1],
                [0, 0, 1, 1],
            ]
        )
        s = np.array(
            [
                [0.5, 0.5, 0.0, 0.0],
                [0.5, 0.5, 0.0, 0.0],
                [0.0, 0.0, 0.5, 0.5],
                [0.0, 0.0, 0.5, 0.5],
            ]
        )
        gini = {"C00": 0.52, "C01": 0.50, "C02": 0.32, "C03": 0.30}
        adv = make_adv(m)
        sm = make_shares(s)
        table = pgi_table(adv, sm, gini)
        res = whatif(
            "C00", ["P02", "P03"], ["P00", "P01"], adv, sm, table
        )
        assert res.baseline > 0.45
        assert res.scenario < 0.35
        assert res.delta < 0
