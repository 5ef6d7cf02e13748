#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "coherent/benchmarks.hpp"
#include "coherent/operators.hpp"
#include "coherent/rng.hpp"
#include "coherent/spectral.hpp"

using namespace coherent;

namespace {

SparseMat sparse_of(const Eigen::MatrixXd& m) {
    SparseMat s = m.sparseView();
    s.makeCompressed();
    return s;
}

WeightedGraph random_directed_graph(int n, double density, std::uint64_t seed) {
    Rng rng(seed, 21);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.next_double() < density) edges.push_back({i, j, rng.next_double() + 0.05});
    return add_self_loops(build_graph(n, edges, true), 1.0);
}

} // namespace

TEST_CASE("top_eigs_symmetric") {
    SECTION("diagonal matrix with known spectrum") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
        m.diagonal() << 0.1, 0.9, 0.5, 0.3;
        SpectralDecomposition d = top_eigs_symmetric(sparse_of(m), 2);
        CHECK(d.eigenvalues[0] == Catch::Approx(0.9));
        CHECK(d.eigenvalues[1] == Catch::Approx(0.5));
        CHECK(d.eigenvectors(1, 0) == Catch::Approx(1.0));
        CHECK(d.eigenvectors(2, 1) == Catch::Approx(1.0));
        CHECK(d.residuals.maxCoeff() < 1e-12);
    }
    SECTION("asymmetric input rejected") {
        Eigen::MatrixXd m(2, 2);
        m << 0.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(top_eigs_symmetric(sparse_of(m), 1), NotSymmetric);
    }
    SECTION("k out of range rejected") {
        CHECK_THROWS_AS(top_eigs_symmetric(sparse_of(Eigen::MatrixXd::Identity(3, 3)), 4), KTooLarge);
        CHECK_THROWS_AS(top_eigs_symmetric(sparse_of(Eigen::MatrixXd::Identity(3, 3)), 0), KTooLarge);
    }
    SECTION("degenerate eigenvalues share a group id") {
        SpectralDecomposition d = top_eigs_symmetric(sparse_of(Eigen::MatrixXd::Identity(3, 3)), 3);
        CHECK(d.degeneracy_group == std::vector<int>{0, 0, 0});
    }
    SECTION("sign convention: largest-magnitude entry positive") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
        m.diagonal() << 3.0, 2.0, 1.0;
        SpectralDecomposition d = top_eigs_symmetric(sparse_of(m), 3);
        for (int c = 0; c < 3; ++c) {
            Eigen::Index imax;
            d.eigenvectors.col(c).cwiseAbs().maxCoeff(&imax);
            CHECK(d.eigenvectors(imax, c) > 0.0);
        }
    }
}

TEST_CASE("lanczos agrees with the dense solver above the crossover") {
    // block-diagonal symmetric matrix, n = 600 > crossover
    const int n = 600;
    Rng rng(3, 0x77);
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, i, rng.next_double() + 1.0);
        if (i + 1 < n && i % 3 != 0) {
            const double w = rng.next_double();
            trips.emplace_back(i, i + 1, w);
            trips.emplace_back(i + 1, i, w);
        }
    }
    SparseMat m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());

    SpectralDecomposition sparse_d = top_eigs_symmetric(m, 6, 11);
    Eigen::MatrixXd md(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md);
    Eigen::VectorXd dense_top = es.eigenvalues().reverse().head(6);
    CHECK((sparse_d.eigenvalues - dense_top).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(sparse_d.residuals.maxCoeff() < 1e-6);
    // eigenvectors match up to sign; canonicalization fixes the sign
    for (int c = 0; c < 6; ++c) {
        Eigen::VectorXd ref = es.eigenvectors().rowwise().reverse().col(c);
        Eigen::Index imax;
        ref.cwiseAbs().maxCoeff(&imax);
        if (ref(imax) < 0.0) ref *= -1.0;
        CHECK((sparse_d.eigenvectors.col(c) - ref).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("eigs_undirected_rw") {
    SECTION("path graph P_3: known transition spectrum") {
        // A = path 0-1-2, eigenvalues of P are 1, 0, -1
        WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, false);
        StochasticMatrix p = transition_matrix(g);
        SpectralDecomposition d = eigs_undirected_rw(p, out_degrees(g), 2);
        CHECK(d.eigenvalues[0] == Catch::Approx(1.0));
        CHECK(d.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(d.residuals.maxCoeff() < 1e-10);
    }
    SECTION("leading eigenvector of P is constant") {
        WeightedGraph g = build_graph(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 1.0}, {3, 0, 0.5}}, false);
        StochasticMatrix p = transition_matrix(g);
        SpectralDecomposition d = eigs_undirected_rw(p, out_degrees(g), 1);
        Eigen::VectorXd v = d.eigenvectors.col(0);
        CHECK((v.array() - v.mean()).abs().maxCoeff() < 1e-10);
    }
    SECTION("directed input rejected") {
        WeightedGraph g = add_self_loops(three_ring_graph(), 1.0);
        CHECK_THROWS_AS(eigs_undirected_rw(transition_matrix(g), out_degrees(g), 2), NotSymmetrizable);
    }
    SECTION("zero degree rejected") {
        WeightedGraph g = build_graph(3, {{0, 1, 1.0}}, false);
        StochasticMatrix p{SparseMat(3, 3), StochasticKind::RowStochastic};
        p.matrix.setIdentity();
        DegreeVector deg(3);
        deg << 1.0, 1.0, 0.0;
        CHECK_THROWS_AS(eigs_undirected_rw(p, deg, 1), ZeroDegree);
        (void)g;
    }
    SECTION("matches dense nonsymmetric eigenvalues on a random undirected graph") {
        Rng rng(5, 9);
        std::vector<Edge> edges;
        for (int i = 0; i < 15; ++i)
            for (int j = i + 1; j < 15; ++j)
                if (rng.next_double() < 0.4) edges.push_back({i, j, rng.next_double() + 0.1});
        WeightedGraph g = add_self_loops(build_graph(15, edges, false), 1.0);
        StochasticMatrix p = transition_matrix(g);
        SpectralDecomposition d = eigs_undirected_rw(p, out_degrees(g), 5);
        Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(p.matrix));
        std::vector<double> all(15);
        for (int i = 0; i < 15; ++i) all[static_cast<std::size_t>(i)] = es.eigenvalues()[i].real();
        std::sort(all.begin(), all.end(), std::greater<>());
        for (int i = 0; i < 5; ++i) CHECK(d.eigenvalues[i] == Catch::Approx(all[static_cast<std::size_t>(i)]).margin(1e-10));
    }
}

TEST_CASE("right_singular_vectors agrees with the eigen route") {
    SECTION("squared singular values equal Q's eigenvalues on random digraphs") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            WeightedGraph g = random_directed_graph(18, 0.25, seed);
            StochasticMatrix p = transition_matrix(g);
            NuVector nu = nu_vector(p);
            SpectralDecomposition svd_d = right_singular_vectors(p, nu, 4);
            SpectralDecomposition eig_d = top_eigs_symmetric(forward_backward_matrix(p).matrix, 4);
            CHECK((svd_d.eigenvalues - eig_d.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
            // vectors agree up to sign within non-degenerate groups
            for (int c = 0; c < 4; ++c) {
                if (c + 1 < 4 && eig_d.degeneracy_group[static_cast<std::size_t>(c)] ==
                                     eig_d.degeneracy_group[static_cast<std::size_t>(c + 1)])
                    continue;
                if (c > 0 && eig_d.degeneracy_group[static_cast<std::size_t>(c)] ==
                                 eig_d.degeneracy_group[static_cast<std::size_t>(c - 1)])
                    continue;
                CHECK(std::abs(std::abs(svd_d.eigenvectors.col(c).dot(eig_d.eigenvectors.col(c))) - 1.0) < 1e-8);
            }
        }
    }
    SECTION("singular nu rejected") {
        WeightedGraph g = build_graph(2, {{0, 0, 1.0}, {1, 0, 1.0}}, true);
        StochasticMatrix p = transition_matrix(g);
        CHECK_THROWS_AS(right_singular_vectors(p, nu_vector(p), 1), SingularNu);
    }
}

TEST_CASE("three-ring Q spectrum has three eigenvalues near 1") {
    WeightedGraph g = add_self_loops(three_ring_graph(), 1.0);
    StochasticMatrix q = forward_backward_matrix(transition_matrix(g));
    SpectralDecomposition d = top_eigs_symmetric(q.matrix, 4);
    CHECK(d.eigenvalues[0] == Catch::Approx(1.0).margin(1e-10));
    CHECK(d.eigenvalues[2] > 0.9);
    CHECK(d.eigenvalues[2] - d.eigenvalues[3] > 0.1);
}
