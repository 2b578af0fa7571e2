from fractions import Fraction

import numpy as np
import pytest

from chromacode import colorings as col
from chromacode.codes import CodeSet
from chromacode.colorings import coordinate_colorings, enumerate_proper, make_coloring
from chromacode.errors import OutOfRange, PreconditionFail, QTooLarge
from chromacode.graphs import complete_graph, cycle_graph, random_regular_bipartite, tensor_power
from chromacode.regimes import (
    CERTIFIED,
    COUNTEREXAMPLE,
    UNKNOWN,
    SweepConfig,
    SweepFamily,
    bipartite_threshold,
    hoffman_bound,
    independent_size_bound,
    near_independent_partition,
    near_independent_union_bound,
    regime_map_sweep,
    regime_point_csv,
    sigma_profile,
    unique_regime_certificate,
)


class TestCertificate:
    def test_certified_point(self):
        res = unique_regime_certificate(3, Fraction(2, 3), Fraction(1, 5))
        assert res.certified
        assert res.lhs == Fraction(1, 3)
        assert res.rhs == Fraction(3, 8)

    def test_boundary_not_certified(self):
        res = unique_regime_certificate(3, Fraction(2, 3), Fraction(1, 4))
        assert not res.certified
        assert res.lhs == res.rhs == Fraction(1, 3)

    def test_lower_delta_never_certified(self):
        res = unique_regime_certificate(3, Fraction(1, 2), Fraction(1, 100))
        assert not res.certified
        assert res.lhs == Fraction(1, 2)
        assert res.rhs == Fraction(49, 99)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            unique_regime_certificate(3, Fraction(1, 4), Fraction(1, 5))
        with pytest.raises(OutOfRange):
            unique_regime_certificate(3, Fraction(2, 3), Fraction(1))

    def test_monotone_on_grid(self):
        # certified(delta, lam) implies certified at larger delta / smaller lam
        q = 3
        deltas = [Fraction(1, 2) + Fraction(k, 60) for k in range(0, 11)]
        lams = [Fraction(k, 40) for k in range(1, 16)]
        table = {
            (d, l): unique_regime_certificate(q, d, l).certified
            for d in deltas
            for l in lams
        }
        for d, l in table:
            if table[(d, l)]:
                for d2 in deltas:
                    for l2 in lams:
                        if d2 >= d and l2 <= l:
                            assert table[(d2, l2)]


class TestBipartiteThreshold:
    @pytest.mark.parametrize(
        "q,want",
        [(3, Fraction(1, 4)), (4, Fraction(1, 2)), (5, Fraction(7, 12))],
    )
    def test_values(self, q, want):
        assert bipartite_threshold(q) == want


class TestSigmaProfile:
    def test_identity_pair(self):
        C5 = cycle_graph(5)
        X = make_coloring(C5, 3, [0, 1, 0, 1, 2])
        prof = sigma_profile(C5, X, X)
        idx = prof.sigmas.index((0, 1, 2))
        assert prof.w[idx] == 1.0
        assert prof.e_cross[idx] == 0.0

    def test_layered_pair_max_overlap(self):
        G = random_regular_bipartite(10, 3, seed=2)
        X, Y = col.layered_bipartite_pair(G, 3)
        prof = sigma_profile(G, X, Y)
        assert max(prof.w) == pytest.approx(0.5)

    def test_random_pairs_on_tensor(self):
        T = tensor_power(3, 2)
        cols = enumerate_proper(T, 3)
        rng = np.random.default_rng(1)
        for _ in range(20):
            i, j = rng.integers(0, len(cols), size=2)
            sigma_profile(T, cols[i], cols[j])  # raises on any violation

    def test_q_cap(self):
        G = random_regular_bipartite(9, 2, seed=0)
        X = col.sample_bipartite_biased(G, 9, 0.0, seed=1)
        with pytest.raises(QTooLarge):
            sigma_profile(G, X, X)


class TestUnionBound:
    def test_bipartite_parts(self, fixture_graphs):
        G = fixture_graphs["K33"]
        A = [v for v in range(G.n) if G.part_labels[v] == 0]
        B = [v for v in range(G.n) if G.part_labels[v] == 1]
        bound, actual, ok = near_independent_union_bound(G, A, B, gamma=0.5, xi=1.0)
        assert ok and actual == pytest.approx(1.0) and bound >= 3.0

    def test_tensor_color_classes(self):
        # two coordinate-color classes: independent 3-sets with e(A,B) = 1/3
        T = tensor_power(3, 2)
        X = coordinate_colorings(3, 2, T)[0]
        A = [v for v in range(T.n) if X.colors[v] == 0]
        B = [v for v in range(T.n) if X.colors[v] == 1]
        bound, actual, ok = near_independent_union_bound(
            T, A, B, gamma=1 / 3, xi=1 / 3
        )
        assert ok
        assert actual == pytest.approx(1 / 3)

    def test_precondition_failures(self):
        T = tensor_power(3, 2)
        with pytest.raises(PreconditionFail):
            near_independent_union_bound(T, [0], [1], gamma=0.5, xi=1.0)
        X = coordinate_colorings(3, 2, T)[0]
        A = [v for v in range(T.n) if X.colors[v] == 0]
        B = [v for v in range(T.n) if X.colors[v] == 1]
        with pytest.raises(PreconditionFail):
            near_independent_union_bound(T, A, B, gamma=1 / 3, xi=0.0)


class TestPartition:
    def test_coordinate_pair_classes(self):
        T = tensor_power(3, 2)
        members = tuple(coordinate_colorings(3, 2, T))
        report = near_independent_partition(T, CodeSet(members, Fraction(2, 3)), 0.05)
        assert report.heavy_classes == 9
        assert report.light_weight == 0.0
        # every class is a single vertex; agreeing classes connect everything
        assert len(report.components) == 1
        assert report.components[0].w == pytest.approx(1.0)

    def test_relabeled_pair_gives_color_classes(self):
        C5 = cycle_graph(5)
        X = make_coloring(C5, 3, [0, 1, 0, 1, 2])
        code = CodeSet((X, X.relabeled((1, 2, 0))), Fraction(0))
        report = near_independent_partition(C5, code, 0.05)
        assert report.heavy_classes == 3
        assert len(report.components) == 3
        for comp in report.components:
            assert comp.e_within == 0.0  # color classes are independent

    def test_gamma_one_empty(self):
        T = tensor_power(3, 2)
        members = tuple(coordinate_colorings(3, 2, T))
        report = near_independent_partition(T, CodeSet(members, Fraction(0)), 1.0)
        assert report.components == ()
        assert report.light_weight <= report.light_weight_bound

    def test_light_weight_bound(self, fixture_graphs):
        G = fixture_graphs["rb16"]
        members = tuple(
            col.sample_bipartite_biased(G, 3, 0.2, seed=(3, i)) for i in range(2)
        )
        for gamma in (0.01, 0.1, 0.3):
            report = near_independent_partition(G, CodeSet(members, Fraction(0)), gamma)
            assert report.light_weight <= report.light_weight_bound + 1e-12


class TestIndependentSizeBound:
    def test_bipartite_part_equality(self, fixture_graphs):
        G = fixture_graphs["K33"]
        w, e, ok = independent_size_bound(G, [0, 1, 2])
        assert ok and w == pytest.approx(0.5) and e == 0.0

    def test_whole_vertex_set(self, fixture_graphs):
        G = fixture_graphs["petersen"]
        w, e, ok = independent_size_bound(G, range(G.n))
        assert ok and w == 1.0 and e == 1.0

    def test_k4_triangle(self):
        w, e, ok = independent_size_bound(complete_graph(4), [0, 1, 2])
        assert ok and w == pytest.approx(0.75) and e == pytest.approx(0.5)

    def test_random_subsets(self, fixture_graphs):
        rng = np.random.default_rng(17)
        for G in fixture_graphs.values():
            if G.d == 0:
                continue
            for _ in range(200):
                size = int(rng.integers(0, G.n + 1))
                A = rng.choice(G.n, size=size, replace=False)
                assert independent_size_bound(G, A)[2]


class TestHoffman:
    def test_complete_graphs_tight(self):
        for q in (3, 4, 5, 6):
            assert hoffman_bound(complete_graph(q)) == pytest.approx(q, abs=1e-8)

    def test_bipartite_two(self, fixture_graphs):
        assert hoffman_bound(fixture_graphs["K33"]) == pytest.approx(2.0, abs=1e-8)

    def test_c5(self):
        assert hoffman_bound(cycle_graph(5)) == pytest.approx(2.2360679, abs=1e-6)


class TestSweep:
    def test_smoke_grid_counts(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)),
            lambda_grid=(Fraction(1, 5), Fraction(2, 5), Fraction(9, 10)),
            families=(),
        )
        rows = list(regime_map_sweep(config))
        assert len(rows) == 9

    def test_certified_point_in_grid(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(2, 3),),
            lambda_grid=(Fraction(1, 5),),
            families=(),
        )
        (row,) = list(regime_map_sweep(config))
        assert row.classification == CERTIFIED

    def test_counterexample_via_layered_pair(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(1, 2),),
            lambda_grid=(Fraction(9, 10),),
            families=(SweepFamily("layered-pair", {"d": 6, "m": 10}),),
            seed=5,
        )
        (row,) = list(regime_map_sweep(config))
        assert row.classification == COUNTEREXAMPLE
        assert row.evidence["min_dist"] == row.evidence["n"] // 2

    def test_unknown_without_evidence(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(13, 24),),
            lambda_grid=(Fraction(1, 2),),
            families=(),
        )
        (row,) = list(regime_map_sweep(config))
        assert row.classification == UNKNOWN

    def test_csv_shape(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(2, 3),),
            lambda_grid=(Fraction(1, 5), Fraction(1, 2)),
            families=(),
        )
        for row in regime_map_sweep(config):
            line = regime_point_csv(row)
            assert len(line.split(",")) == 9

    def test_skip_resume_keys(self):
        config = SweepConfig(
            q=3,
            delta_grid=(Fraction(1, 2), Fraction(2, 3)),
            lambda_grid=(Fraction(1, 5),),
            families=(),
        )
        full = list(regime_map_sweep(config))
        rest = list(regime_map_sweep(config, skip={("1/2", "1/5")}))
        assert len(full) == 2 and len(rest) == 1
        assert regime_point_csv(rest[0]) == regime_point_csv(full[1])
