import numpy as np
import pytest

from gracereg import (
    LaplacianMatrix,
    build_graph,
    extreme_eigenvalues,
    laplacian,
    quadratic_form,
    read_edge_list,
    signed_laplacian,
)
from gracereg.graph import write_edge_list

from oracles import edge_sum_quadratic, random_graph_edges


class TestBuildGraph:
    def test_single_unit_edge_degrees(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        np.testing.assert_array_equal(g.degrees, [1.0, 1.0])
        assert g.edges == [(0, 1, 1.0)]

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            build_graph([(0, 1, 1.0), (1, 0, 1.0)], p=2)

    def test_degree_is_weight_sum(self):
        g = build_graph([(0, 1, 0.5), (1, 2, 0.5)], p=3)
        np.testing.assert_allclose(g.degrees, [0.5, 1.0, 0.5])

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            build_graph([(2, 2, 1.0)], p=3)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            build_graph([(0, 1, -0.5)], p=2)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            build_graph([(0, 5, 1.0)], p=3)

    def test_zero_weight_edges_dropped(self):
        g = build_graph([(0, 1, 0.0), (1, 2, 2.0)], p=3)
        assert g.n_edges == 1
        np.testing.assert_allclose(g.degrees, [0.0, 2.0, 2.0])

    def test_missing_weight_defaults_to_one(self):
        g = build_graph([(0, 1)], p=2)
        assert g.edges == [(0, 1, 1.0)]

    def test_degrees_match_recomputation(self):
        rng = np.random.default_rng(3)
        edges = random_graph_edges(rng, 9, density=0.4, unit_weights=False)
        g = build_graph(edges, p=9)
        recomputed = np.zeros(9)
        for u, v, w in edges:
            recomputed[u] += w
            recomputed[v] += w
        np.testing.assert_array_equal(g.degrees, recomputed)


class TestLaplacian:
    def test_two_node_unit_edge(self):
        L = laplacian(build_graph([(0, 1, 1.0)], p=2))
        np.testing.assert_allclose(L.entries, [[1.0, -1.0], [-1.0, 1.0]])

    def test_isolated_vertex_row_is_zero(self):
        L = laplacian(build_graph([(0, 1, 1.0)], p=3))
        assert L.entries[2, 2] == 0.0
        np.testing.assert_array_equal(L.entries[2], 0.0)
        np.testing.assert_array_equal(L.entries[:, 2], 0.0)

    def test_star_graph_eigenvalues(self):
        # hub 0 joined to three leaves; off-diagonals -1/sqrt(3)
        g = build_graph([(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], p=4)
        L = laplacian(g)
        np.testing.assert_allclose(L.entries[0, 1:], -1 / np.sqrt(3))
        got = np.sort(np.linalg.eigvalsh(L.entries))
        np.testing.assert_allclose(got, [0.0, 1.0, 1.0, 2.0], atol=1e-12)

    def test_identity_constructor(self):
        L = LaplacianMatrix.identity(4)
        np.testing.assert_array_equal(L.entries, np.eye(4))


class TestSignedLaplacian:
    def test_all_plus_signs_identical_to_standard(self):
        rng = np.random.default_rng(11)
        edges = random_graph_edges(rng, 7, density=0.5, unit_weights=False)
        g = build_graph(edges, p=7)
        Lp = signed_laplacian(g, np.ones(7))
        np.testing.assert_array_equal(Lp.entries, laplacian(g).entries)

    def test_opposite_signs_flip_offdiagonal(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        L = signed_laplacian(g, [1, -1])
        np.testing.assert_allclose(L.entries, [[1.0, 1.0], [1.0, 1.0]])

    def test_length_mismatch_rejected(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        with pytest.raises(ValueError, match="length"):
            signed_laplacian(g, [1, 1, 1])

    def test_bad_sign_values_rejected(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        with pytest.raises(ValueError, match="signs"):
            signed_laplacian(g, [0.5, 1.0])

    def test_zero_sign_zeroes_offdiagonals_keeps_diagonal(self):
        g = build_graph([(0, 1, 1.0), (1, 2, 1.0)], p=3)
        L = signed_laplacian(g, [1, 0, 1])
        assert L.entries[1, 1] == 1.0
        assert L.entries[0, 1] == 0.0 and L.entries[1, 2] == 0.0

    @pytest.mark.parametrize("seed", range(8))
    def test_zero_signs_still_psd(self, seed):
        rng = np.random.default_rng(seed)
        p = int(rng.integers(3, 9))
        edges = random_graph_edges(rng, p, density=0.6, unit_weights=False)
        g = build_graph(edges, p=p)
        signs = rng.choice([-1, 0, 1], size=p)
        L = signed_laplacian(g, signs)
        assert np.linalg.eigvalsh(L.entries)[0] >= -1e-10

    @pytest.mark.parametrize("seed", range(6))
    def test_quadratic_form_matches_edge_sum_with_signs(self, seed):
        rng = np.random.default_rng(100 + seed)
        p = 8
        edges = random_graph_edges(rng, p, density=0.5, unit_weights=False)
        g = build_graph(edges, p=p)
        signs = rng.choice([-1, 0, 1], size=p)
        L = signed_laplacian(g, signs)
        beta = rng.standard_normal(p)
        expected = edge_sum_quadratic(g.edges, g.degrees, beta, signs=signs)
        np.testing.assert_allclose(quadratic_form(L, beta), expected, atol=1e-12)
        assert quadratic_form(L, beta) >= 0


class TestQuadraticForm:
    def test_degree_scaled_vector_in_null_space(self):
        # connected unit-weight graph: beta proportional to sqrt(degrees)
        g = build_graph([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)], p=4)
        beta = 2.5 * np.sqrt(g.degrees)
        assert abs(quadratic_form(laplacian(g), beta)) < 1e-12

    def test_two_node_opposite(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        assert quadratic_form(laplacian(g), np.array([1.0, -1.0])) == pytest.approx(4.0)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_edge_sum(self, seed):
        rng = np.random.default_rng(200 + seed)
        p = int(rng.integers(4, 10))
        edges = random_graph_edges(rng, p, density=0.5, unit_weights=False)
        g = build_graph(edges, p=p)
        beta = rng.standard_normal(p)
        expected = edge_sum_quadratic(g.edges, g.degrees, beta)
        np.testing.assert_allclose(quadratic_form(laplacian(g), beta), expected, atol=1e-12)

    def test_dimension_mismatch_rejected(self):
        g = build_graph([(0, 1, 1.0)], p=2)
        with pytest.raises(ValueError, match="length"):
            quadratic_form(laplacian(g), np.ones(3))

    @pytest.mark.parametrize("seed", range(4))
    def test_relabeling_invariance(self, seed):
        rng = np.random.default_rng(300 + seed)
        p = 7
        edges = random_graph_edges(rng, p, density=0.5, unit_weights=False)
        g = build_graph(edges, p=p)
        beta = rng.standard_normal(p)
        perm = rng.permutation(p)
        relabeled = build_graph(
            [(int(perm[u]), int(perm[v]), w) for u, v, w in g.edges], p=p
        )
        beta_perm = np.empty(p)
        beta_perm[perm] = beta
        a = quadratic_form(laplacian(g), beta)
        b = quadratic_form(laplacian(relabeled), beta_perm)
        np.testing.assert_allclose(a, b, rtol=1e-12)


class TestExtremeEigenvalues:
    def test_two_node_unit_edge(self):
        L = laplacian(build_graph([(0, 1, 1.0)], p=2))
        lo, hi = extreme_eigenvalues(L)
        assert lo == pytest.approx(0.0, abs=1e-10)
        assert hi == pytest.approx(2.0, abs=1e-10)

    def test_all_isolated_gives_zero_matrix(self):
        L = laplacian(build_graph([], p=5))
        assert extreme_eigenvalues(L) == (0.0, 0.0)

    def test_path_graph_range(self):
        g = build_graph([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], p=4)
        lo, hi = extreme_eigenvalues(L := laplacian(g))
        assert lo == pytest.approx(0.0, abs=1e-10)
        assert -1e-10 <= lo and hi <= 2 + 1e-10
        # oracle: dense symmetric eigensolver on the explicit matrix
        vals = np.linalg.eigvalsh(L.entries)
        np.testing.assert_allclose([lo, hi], [vals[0], vals[-1]], atol=1e-8)


class TestLaplacianInvariants:
    @pytest.mark.parametrize("seed", range(12))
    def test_symmetry_and_psd_random_graphs(self, seed):
        rng = np.random.default_rng(400 + seed)
        p = int(rng.integers(2, 16))
        unit = bool(rng.integers(0, 2))
        edges = random_graph_edges(rng, p, density=0.4, unit_weights=unit)
        L = laplacian(build_graph(edges, p=p))
        np.testing.assert_array_equal(L.entries, L.entries.T)
        vals = np.linalg.eigvalsh(L.entries)
        assert vals[0] >= -1e-10
        if unit:
            assert vals[-1] <= 2 + 1e-10


class TestEdgeListFile:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        edges = random_graph_edges(rng, 10, density=0.4, unit_weights=False)
        g = build_graph(edges, p=10)
        path = tmp_path / "graph.tsv"
        write_edge_list(g, path)
        g2 = read_edge_list(path, p=10)
        assert g.edges == g2.edges

    def test_comments_blanks_and_default_weight(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# covariate graph\n\n0\t1\n1\t2\t0.25\n")
        g = read_edge_list(path, p=3)
        assert g.edges == [(0, 1, 1.0), (1, 2, 0.25)]

    def test_malformed_line_reports_location(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t1\tx\n")
        with pytest.raises(ValueError, match="line 1"):
            read_edge_list(path, p=2)

    def test_bad_edge_reports_file(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t0\t1.0\n")
        with pytest.raises(ValueError, match="self-loop"):
            read_edge_list(path, p=2)
