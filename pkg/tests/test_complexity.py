import math

import numpy as np
import pytest

from complexity_atlas.complexity import (
    CouplingMatrix,
    eci,
    entropy,
    fitness,
    hhi,
    pci,
)
from complexity_atlas.errors import AtlasError, DegenerateEigenvalueError
from conftest import make_adv, make_shares
from oracles import (
    eci_oracle,
    fitness_oracle,
    pci_oracle,
    random_connected_m,
    second_eigenvalue_gap,
)


def ranks(scores: dict) -> list[str]:
    return [c for c, _ in sorted(scores.items(), key=lambda t: -t[1])]


class TestEci:
    def test_nested_ordering_matches_dense_oracle(self, nested_adv):
        res = eci(nested_adv)
        oracle = eci_oracle(nested_adv.m, nested_adv.diversity.astype(float))
        got = np.array([res.scores[c] for c in nested_adv.countries])
        np.testing.assert_allclose(got, oracle, atol=1e-10)
        assert ranks(res.scores) == ["C1", "C2", "C3"]

    def test_standardization(self, nested_adv):
        res = eci(nested_adv)
        vals = np.array([v for v in res.scores.values()])
        assert abs(vals.mean()) < 1e-9
        assert abs(vals.std() - 1.0) < 1e-9

    def test_interchangeable_countries_equal_scores(self):
        m = np.array([[1, 1, 0], [1, 1, 0], [1, 0, 1]])
        res = eci(make_adv(m))
        assert res.scores["C00"] == pytest.approx(res.scores["C01"], abs=1e-12)

    def test_row_stochastic_coupling(self, nested_adv):
        res = eci(nested_adv)
        ones = res.coupling.mtilde.sum(axis=1)
        assert np.abs(ones - 1.0).max() < 1e-9

    def test_permutation_invariance(self):
        rng = np.random.default_rng(23)
        m = random_connected_m(rng, 8, 12)
        assert m is not None
        res = eci(make_adv(m))
        perm = rng.permutation(8)
        # Same rows under permuted country labels: same score per row.
        res_p = eci(make_adv(m[perm]))
        for orig, permuted in enumerate(perm):
            assert res.scores[f"C{permuted:02d}"] == pytest.approx(
                res_p.scores[f"C{orig:02d}"], abs=1e-9
            )

    def test_disconnected_largest_component(self):
        # A nested 3-country block on P0..P2 plus an isolated pair sharing
        # P3: the larger block is ranked, the pair is missing.
        m = np.zeros((5, 4), dtype=int)
        m[0, 0] = m[0, 1] = m[0, 2] = 1
        m[1, 0] = m[1, 1] = 1
        m[2, 0] = 1
        m[3, 3] = m[4, 3] = 1
        res = eci(make_adv(m))
        assert set(res.excluded) == {"C03", "C04"}
        assert res.scores["C03"] is None
        ranked = [v for v in res.scores.values() if v is not None]
        assert len(ranked) == 3
        assert abs(np.mean(ranked)) < 1e-9 and abs(np.std(ranked) - 1) < 1e-9

    def test_untrimmed_rejected(self):
        with pytest.raises(AtlasError):
            eci(make_adv([[1, 0], [0, 0]]))

    def test_degenerate_second_eigenvalue_errors(self):
        # Three interchangeable country pairs, each with a private product,
        # all sharing one hub: eigenvalues {1, 1/2, 1/2, 0, 0, 0}, so the
        # ranking eigenvector is not identified.
        m = np.array(
            [
                [1, 1, 0, 0],
                [1, 1, 0, 0],
                [1, 0, 1, 0],
                [1, 0, 1, 0],
                [1, 0, 0, 1],
                [1, 0, 0, 1],
            ]
        )
        assert second_eigenvalue_gap(m) < 1e-10
        with pytest.raises(DegenerateEigenvalueError):
            eci(make_adv(m))

    def test_coupling_requires_row_stochastic(self):
        from complexity_atlas.registry import Registry

        with pytest.raises(AtlasError):
            CouplingMatrix(
                Registry(["A", "B"]),
                np.array([[0.5, 0.4], [0.5, 0.5]]),
                np.array([1.0, -1.0]),
                0.5,
            )


class TestPci:
    def test_nested_anti_ubiquity(self, nested_adv):
        res = pci(nested_adv)
        assert ranks(res.scores) == ["P3", "P2", "P1"]
        oracle = pci_oracle(nested_adv.m)
        got = np.array([res.scores[p] for p in nested_adv.products])
        np.testing.assert_allclose(got, oracle, atol=1e-10)

    def test_identical_columns_equal_scores(self):
        m = np.array([[1, 1, 1], [1, 1, 0], [0, 0, 1]])
        res = pci(make_adv(m))
        assert res.scores["P00"] == pytest.approx(res.scores["P01"], abs=1e-12)

    def test_standardization(self, nested_adv):
        vals = np.array(list(pci(nested_adv).scores.values()))
        assert abs(vals.mean()) < 1e-9
        assert abs(vals.std() - 1.0) < 1e-9


class TestIterativeSolver:
    def test_power_matches_dense_small(self):
        rng = np.random.default_rng(31)
        checked = 0
        while checked < 40:
            n_c = int(rng.integers(4, 21))
            n_p = int(rng.integers(4, 21))
            m = random_connected_m(rng, n_c, n_p)
            if m is None or second_eigenvalue_gap(m) < 1e-6:
                continue
            adv = make_adv(m)
            dense = eci(adv, method="dense")
            power = eci(adv, method="power")
            for c in adv.countries:
                assert power.scores[c] == pytest.approx(dense.scores[c], abs=1e-8)
            checked += 1


class TestFitness:
    def test_single_cell_fixed_point(self):
        res = fitness(make_adv([[1]]))
        assert res.fitness["C00"] == 1.0
        assert res.product_quality["P00"] == 1.0
        assert res.converged

    def test_mean_one_normalization(self):
        rng = np.random.default_rng(37)
        m = random_connected_m(rng, 10, 15)
        res = fitness(make_adv(m))
        assert np.mean(list(res.fitness.values())) == pytest.approx(1.0, abs=1e-9)
        assert np.mean(list(res.product_quality.values())) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_nested_ordering_matches_diversity(self, nested_adv):
        res = fitness(nested_adv, tol=1e-12, max_iter=500)
        oracle_f, _ = fitness_oracle(nested_adv.m, iters=500)
        got = np.array([res.fitness[c] for c in nested_adv.countries])
        np.testing.assert_allclose(got, oracle_f, rtol=1e-9)
        assert ranks(res.fitness) == ["C1", "C2", "C3"]

    def test_random_connected_converges(self):
        # Cauchy behaviour of the renormalized iterates up to 50x50.
        rng = np.random.default_rng(41)
        for _ in range(5):
            m = None
            while m is None:
                m = random_connected_m(rng, 50, 50, density=0.3)
            res = fitness(make_adv(m), tol=1e-10, max_iter=5000)
            assert res.converged, "fitness iteration failed to settle"


class TestEntropyHhi:
    def test_single_product(self):
        s = make_shares([[1.0]])
        assert entropy(s)["C00"] == 0.0
        assert hhi(s)["C00"] == 1.0

    def test_uniform_four_products(self):
        s = make_shares([[0.25, 0.25, 0.25, 0.25]])
        assert entropy(s)["C00"] == pytest.approx(math.log(4), abs=1e-12)
        assert hhi(s)["C00"] == pytest.approx(0.25, abs=1e-15)

    def test_entropy_range(self):
        rng = np.random.default_rng(43)
        v = rng.random((20, 775))
        s = make_shares(v / v.sum(axis=1, keepdims=True))
        h = np.array(list(entropy(s).values()))
        assert (h >= 0).all() and (h <= math.log(775)).all()

    def test_hhi_bounds(self):
        rng = np.random.default_rng(47)
        v = rng.random((10, 30))
        s = make_shares(v / v.sum(axis=1, keepdims=True))
        vals = np.array(list(hhi(s).values()))
        assert (vals >= 1 / 30 - 1e-12).all() and (vals <= 1.0).all()

    def test_concentration_moves_opposite(self):
        # Moving share mass from a smaller to a larger product raises HHI
        # and lowers entropy.
        rng = np.random.default_rng(53)
        for _ in range(50):
            row = rng.random(6)
            row /= row.sum()
            i, j = np.argsort(row)[0], np.argsort(row)[-1]
            delta = row[i] * rng.random()
            moved = row.copy()
            moved[i] -= delta
            moved[j] += delta
            s = make_shares(np.vstack([row, row]))
            s.values[1] = moved
            h = entropy(s)
            c = hhi(s)
            assert c["C01"] >= c["C00"] - 1e-12
            assert h["C01"] <= h["C00"] + 1e-12
