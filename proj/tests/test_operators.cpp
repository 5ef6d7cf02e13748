#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "coherent/benchmarks.hpp"
#include "coherent/operators.hpp"
#include "coherent/rng.hpp"

using namespace coherent;

namespace {

WeightedGraph random_directed_graph(int n, double density, std::uint64_t seed) {
    Rng rng(seed, 13);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.next_double() < density) edges.push_back({i, j, rng.next_double() + 0.05});
    return add_self_loops(build_graph(n, edges, true), 1.0);
}

Eigen::MatrixXd dense(const SparseMat& m) { return Eigen::MatrixXd(m); }

} // namespace

TEST_CASE("transition_matrix") {
    SECTION("undirected 2-path with self-loops") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        StochasticMatrix p = transition_matrix(g);
        CHECK(dense(p.matrix).isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));
    }
    SECTION("directed 2-cycle") {
        WeightedGraph g = build_graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true);
        StochasticMatrix p = transition_matrix(g);
        CHECK(p.matrix.coeff(0, 1) == 1.0);
        CHECK(p.matrix.coeff(1, 0) == 1.0);
        CHECK(p.matrix.coeff(0, 0) == 0.0);
    }
    SECTION("sink vertex fails without teleportation") {
        WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true);
        CHECK_THROWS_AS(transition_matrix(g), DanglingVertex);
        CHECK_THROWS_WITH(transition_matrix(g), Catch::Matchers::ContainsSubstring("vertex 2"));
    }
    SECTION("teleportation fixes dangling rows and keeps rows stochastic") {
        WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true);
        StochasticMatrix p = transition_matrix(g, 0.15);
        Eigen::VectorXd rs = dense(p.matrix).rowwise().sum();
        CHECK((rs.array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK(p.matrix.coeff(2, 0) == Catch::Approx(1.0 / 3.0));
    }
    SECTION("rows sum to 1 for random graphs") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            WeightedGraph g = random_directed_graph(20, 0.2, seed);
            StochasticMatrix p = transition_matrix(g);
            Eigen::VectorXd rs = dense(p.matrix).rowwise().sum();
            CHECK((rs.array() - 1.0).abs().maxCoeff() < Tolerances::row_sum * g.size());
        }
    }
}

TEST_CASE("nu_vector") {
    SECTION("doubly stochastic P gives all-ones nu") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        NuVector nu = nu_vector(transition_matrix(g));
        CHECK(nu.values.isApprox(Eigen::VectorXd::Ones(2)));
        CHECK(nu.invertible);
    }
    SECTION("permutation P gives all-ones nu") {
        WeightedGraph g = build_graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true);
        CHECK(nu_vector(transition_matrix(g)).values.isApprox(Eigen::VectorXd::Ones(2)));
    }
    SECTION("column without mass clears the invertibility flag") {
        // P = [[1,0],[1,0]]
        WeightedGraph g = build_graph(2, {{0, 0, 1.0}, {1, 0, 1.0}}, true);
        NuVector nu = nu_vector(transition_matrix(g));
        CHECK(nu.values[0] == 2.0);
        CHECK(nu.values[1] == 0.0);
        CHECK_FALSE(nu.invertible);
    }
    SECTION("nu sums to n") {
        WeightedGraph g = random_directed_graph(15, 0.3, 5);
        CHECK(nu_vector(transition_matrix(g)).values.sum() == Catch::Approx(15.0));
    }
}

TEST_CASE("forward_backward_matrix") {
    SECTION("2-cycle without self-loops returns walkers to their start") {
        WeightedGraph g = build_graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true);
        StochasticMatrix q = forward_backward_matrix(transition_matrix(g));
        CHECK(dense(q.matrix).isApprox(Eigen::MatrixXd::Identity(2, 2)));
        CHECK(q.kind == StochasticKind::DoublyStochasticSymmetric);
    }
    SECTION("uniform P is a fixed point") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        StochasticMatrix q = forward_backward_matrix(transition_matrix(g));
        CHECK(dense(q.matrix).isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));
    }
    SECTION("vertex without incoming mass is an error") {
        WeightedGraph g = build_graph(2, {{0, 0, 1.0}, {1, 0, 1.0}}, true);
        CHECK_THROWS_AS(forward_backward_matrix(transition_matrix(g)), SingularNu);
    }
    SECTION("doubly stochastic, symmetric, PSD for random directed graphs") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            WeightedGraph g = random_directed_graph(12 + static_cast<int>(seed), 0.15, seed);
            StochasticMatrix q = forward_backward_matrix(transition_matrix(g));
            Eigen::MatrixXd qd = dense(q.matrix);
            CHECK((qd - qd.transpose()).cwiseAbs().maxCoeff() < Tolerances::symmetry);
            CHECK((qd.rowwise().sum().array() - 1.0).abs().maxCoeff() < Tolerances::row_sum * g.size());
            CHECK((qd.colwise().sum().array() - 1.0).abs().maxCoeff() < Tolerances::row_sum * g.size());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qd);
            CHECK(es.eigenvalues().minCoeff() > -Tolerances::psd_slack);
            CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-10);
        }
    }
    SECTION("matches the dense formula P D_nu^-1 P^T") {
        WeightedGraph g = random_directed_graph(10, 0.3, 42);
        StochasticMatrix p = transition_matrix(g);
        NuVector nu = nu_vector(p);
        Eigen::MatrixXd pd = dense(p.matrix);
        Eigen::MatrixXd expected = pd * nu.values.cwiseInverse().asDiagonal() * pd.transpose();
        CHECK(dense(forward_backward_matrix(p).matrix).isApprox(expected, 1e-12));
    }
}

TEST_CASE("laplacians") {
    SECTION("identity P gives the zero random-walk Laplacian") {
        WeightedGraph g = add_self_loops(build_graph(3, {}, true), 1.0);
        Laplacian l = random_walk_laplacian(transition_matrix(g));
        CHECK(dense(l.matrix).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("uniform 2x2 P") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        Laplacian l = random_walk_laplacian(transition_matrix(g));
        Eigen::MatrixXd expected(2, 2);
        expected << 0.5, -0.5, -0.5, 0.5;
        CHECK(dense(l.matrix).isApprox(expected));
    }
    SECTION("forward-backward Laplacian rejects plain row-stochastic input") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        CHECK_THROWS_AS(forward_backward_laplacian(transition_matrix(g)), KindMismatch);
    }
    SECTION("L_fb of the uniform Q has eigenvalues {0, 1}") {
        WeightedGraph g = add_self_loops(build_graph(2, {{0, 1, 1.0}}, false), 1.0);
        Laplacian l = forward_backward_laplacian(forward_backward_matrix(transition_matrix(g)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(l.matrix));
        CHECK(es.eigenvalues()[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(es.eigenvalues()[1] == Catch::Approx(1.0));
    }
    SECTION("row sums vanish") {
        WeightedGraph g = random_directed_graph(14, 0.25, 9);
        StochasticMatrix p = transition_matrix(g);
        CHECK(dense(random_walk_laplacian(p).matrix).rowwise().sum().cwiseAbs().maxCoeff() < Tolerances::laplacian_row);
        CHECK(dense(forward_backward_laplacian(forward_backward_matrix(p)).matrix).rowwise().sum().cwiseAbs().maxCoeff() <
              Tolerances::laplacian_row);
    }
}

TEST_CASE("temporal_transition_matrix") {
    SECTION("single snapshot equals the static transition matrix") {
        TemporalGraph tg;
        tg.n = 12;
        tg.snapshots = {three_ring_graph()};
        StochasticMatrix p = temporal_transition_matrix(tg, 1.0);
        StochasticMatrix expected = transition_matrix(add_self_loops(three_ring_graph(), 1.0));
        CHECK(dense(p.matrix).isApprox(dense(expected.matrix)));
    }
    SECTION("identity snapshots compose to the identity") {
        TemporalGraph tg;
        tg.n = 4;
        tg.snapshots = {add_self_loops(build_graph(4, {}, true), 1.0), add_self_loops(build_graph(4, {}, true), 1.0)};
        StochasticMatrix p = temporal_transition_matrix(tg, 0.0);
        CHECK(dense(p.matrix).isApprox(Eigen::MatrixXd::Identity(4, 4)));
    }
    SECTION("products of row-stochastic matrices stay row-stochastic") {
        TemporalGraph tg = rotating_double_well();
        StochasticMatrix p = temporal_transition_matrix(tg, 1.0);
        Eigen::VectorXd rs = dense(p.matrix).rowwise().sum();
        CHECK((rs.array() - 1.0).abs().maxCoeff() < Tolerances::row_sum * tg.n);
    }
    SECTION("dangling vertex error names the snapshot") {
        TemporalGraph tg;
        tg.n = 2;
        tg.snapshots = {add_self_loops(build_graph(2, {}, true), 1.0), build_graph(2, {{0, 1, 1.0}}, true)};
        CHECK_THROWS_WITH(temporal_transition_matrix(tg, 0.0), Catch::Matchers::ContainsSubstring("snapshot 1"));
    }
}

TEST_CASE("P and L_rw share eigenvectors with shifted eigenvalues") {
    WeightedGraph g = add_self_loops(three_ring_graph(), 1.0);
    StochasticMatrix p = transition_matrix(g);
    Laplacian l = random_walk_laplacian(p);
    Eigen::EigenSolver<Eigen::MatrixXd> es(dense(p.matrix));
    for (int i = 0; i < 12; ++i) {
        const std::complex<double> lambda = es.eigenvalues()[i];
        Eigen::VectorXcd u = es.eigenvectors().col(i);
        Eigen::VectorXcd resid = dense(l.matrix).cast<std::complex<double>>() * u - (1.0 - lambda) * u;
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-8);
    }
}
