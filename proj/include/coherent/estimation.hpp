#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "coherent/operators.hpp"
#include "coherent/rng.hpp"
#include "coherent/spectral.hpp"

namespace coherent {

/// Start/end pairs recorded by random walkers.
struct WalkDataset {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;
    int walk_length = 1;
    std::uint64_t seed = 0;
    std::string schedule_id;
    bool equilibrated = false; // x sampled from one long stationary trajectory
};

/// Empirical covariances of one-hot features. C_xx and C_yy are diagonal by
/// construction and stored as vectors.
struct GramMatrices {
    Eigen::VectorXd cxx_diag;
    Eigen::VectorXd cyy_diag;
    SparseMat cxy;
    std::size_t m = 0;

    int size() const { return static_cast<int>(cxx_diag.size()); }
};

enum class RegularizationKind { Pseudoinverse, Tikhonov };

struct Regularization {
    RegularizationKind kind = RegularizationKind::Pseudoinverse;
    double epsilon = 1e-8;

    static Regularization pseudoinverse() { return {RegularizationKind::Pseudoinverse, 0.0}; }
    static Regularization tikhonov(double eps) {
        if (eps <= 0.0) throw NonpositiveEpsilon("tikhonov: epsilon must be positive, got " + std::to_string(eps));
        return {RegularizationKind::Tikhonov, eps};
    }
};

/// Simulates m independent walkers. Step t uses schedule[min(t, last)], so a
/// static graph passes a single matrix and time-evolving graphs pass the
/// per-step matrices. Each walker draws from its own RNG stream derived from
/// (seed, walker index); results are independent of execution order.
inline WalkDataset simulate_walks(const std::vector<StochasticMatrix>& schedule, std::size_t m, int length,
                                  const Eigen::VectorXd& init, std::uint64_t seed) {
    if (schedule.empty()) throw InvalidConfig("simulate_walks: empty schedule");
    if (length < 1) throw InvalidConfig("simulate_walks: length must be >= 1");
    const int n = schedule.front().size();
    if (init.size() != n || (init.array() < 0.0).any() || std::abs(init.sum() - 1.0) > 1e-9)
        throw InvalidDistribution("simulate_walks: init must be a distribution over " + std::to_string(n) + " vertices");

    // cumulative init for inverse-transform sampling of start vertices
    std::vector<double> init_w(init.data(), init.data() + n);

    WalkDataset d;
    d.n = n;
    d.walk_length = length;
    d.seed = seed;
    d.pairs.resize(m);

    for (std::size_t w = 0; w < m; ++w) {
        Rng rng(seed, w);
        int x = static_cast<int>(rng.sample_discrete(init_w, 1.0));
        int v = x;
        for (int t = 0; t < length; ++t) {
            const SparseMat& p = schedule[std::min<std::size_t>(static_cast<std::size_t>(t), schedule.size() - 1)].matrix;
            double u = rng.next_double();
            int next = v;
            for (SparseMat::InnerIterator it(p, v); it; ++it) {
                u -= it.value();
                next = static_cast<int>(it.col());
                if (u < 0.0) break;
            }
            v = next;
        }
        d.pairs[w] = {x, v};
    }
    return d;
}

inline GramMatrices gram_matrices(const WalkDataset& d) {
    GramMatrices g;
    g.m = d.pairs.size();
    g.cxx_diag = Eigen::VectorXd::Zero(d.n);
    g.cyy_diag = Eigen::VectorXd::Zero(d.n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(g.m);
    const double inv_m = 1.0 / static_cast<double>(g.m);
    for (const auto& [x, y] : d.pairs) {
        g.cxx_diag[x] += inv_m;
        g.cyy_diag[y] += inv_m;
        trips.emplace_back(x, y, inv_m);
    }
    g.cxy.resize(d.n, d.n);
    g.cxy.setFromTriplets(trips.begin(), trips.end());
    g.cxy.makeCompressed();
    return g;
}

namespace detail {

/// Inverse of a diagonal matrix under the chosen regularization. With the
/// pseudoinverse, zero entries map to zero.
inline Eigen::VectorXd diag_inverse(const Eigen::VectorXd& diag, const Regularization& reg) {
    Eigen::VectorXd inv(diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (reg.kind == RegularizationKind::Tikhonov) {
            inv[i] = 1.0 / (diag[i] + reg.epsilon);
        } else {
            inv[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 0.0;
        }
    }
    return inv;
}

} // namespace detail

/// K_hat = C_xx^+ C_xy; converges to P.
inline Eigen::MatrixXd estimate_koopman(const GramMatrices& g) {
    return detail::diag_inverse(g.cxx_diag, Regularization::pseudoinverse()).asDiagonal() * Eigen::MatrixXd(g.cxy);
}

/// P_hat = C_xx^+ C_yx; converges to P^T.
inline Eigen::MatrixXd estimate_pf(const GramMatrices& g) {
    return detail::diag_inverse(g.cxx_diag, Regularization::pseudoinverse()).asDiagonal() *
           Eigen::MatrixXd(g.cxy).transpose();
}

/// T_hat uses the same formula as P_hat but assumes x ~ pi (one long
/// equilibrated trajectory); the semantic difference is the caller's
/// responsibility and is tracked by WalkDataset::equilibrated.
inline Eigen::MatrixXd estimate_equilibrium_pf(const GramMatrices& g) { return estimate_pf(g); }

/// F_hat = C_xx^+ C_xy C_yy^+ C_yx; converges to Q. The output is
/// symmetrized before return; asymmetry beyond 1e-12 indicates an
/// ill-conditioned estimate and flips the warning flag if provided.
inline Eigen::MatrixXd estimate_fb(const GramMatrices& g, const Regularization& reg = Regularization::pseudoinverse(),
                                   bool* asymmetry_warning = nullptr) {
    if (reg.kind == RegularizationKind::Tikhonov && reg.epsilon <= 0.0)
        throw NonpositiveEpsilon("estimate_fb: epsilon must be positive");
    const Eigen::MatrixXd cxy(g.cxy);
    Eigen::MatrixXd f = detail::diag_inverse(g.cxx_diag, reg).asDiagonal() * cxy *
                        detail::diag_inverse(g.cyy_diag, reg).asDiagonal() * cxy.transpose();
    const double asym = (f - f.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry_warning) *asymmetry_warning = asym > 1e-12;
    return 0.5 * (f + f.transpose());
}

struct ConvergenceRow {
    std::size_t m;
    double mean_error;
    double std_error;
};

/// For each m in the grid, runs `trials` simulations, estimates F_hat, and
/// compares its second eigenvalue against the exact product-of-snapshots
/// reference. Reports the mean absolute error and standard deviation.
inline std::vector<ConvergenceRow> convergence_study(const std::vector<StochasticMatrix>& schedule,
                                                     const std::vector<std::size_t>& m_grid, int length, int trials,
                                                     std::uint64_t seed,
                                                     const Regularization& reg = Regularization::tikhonov(1e-8)) {
    if (m_grid.empty()) throw InvalidConfig("convergence_study: empty m grid");
    for (std::size_t i = 1; i < m_grid.size(); ++i)
        if (m_grid[i] <= m_grid[i - 1]) throw InvalidConfig("convergence_study: m grid must be ascending");
    if (trials < 1) throw InvalidConfig("convergence_study: trials must be >= 1");
    if (schedule.empty()) throw InvalidConfig("convergence_study: empty schedule");

    const int n = schedule.front().size();
    // Approach B reference: exact product over the walk horizon
    SparseMat product = schedule.front().matrix;
    for (int t = 1; t < length; ++t)
        product = (product * schedule[std::min<std::size_t>(static_cast<std::size_t>(t), schedule.size() - 1)].matrix).pruned();
    StochasticMatrix p_prod{product, StochasticKind::RowStochastic};
    StochasticMatrix q_ref = forward_backward_matrix(p_prod);
    const SpectralDecomposition ref = top_eigs_symmetric(q_ref.matrix, 2);
    const double lambda2_ref = ref.eigenvalues[1];

    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / n);
    std::vector<ConvergenceRow> rows;
    for (std::size_t m : m_grid) {
        double sum = 0.0, sum_sq = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t trial_seed = seed + 0x51ed2701ull * static_cast<std::uint64_t>(trial + 1) + m;
            WalkDataset d = simulate_walks(schedule, m, length, uniform, trial_seed);
            Eigen::MatrixXd f = estimate_fb(gram_matrices(d), reg);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
            const double lambda2 = es.eigenvalues().reverse()[1];
            const double err = std::abs(lambda2 - lambda2_ref);
            sum += err;
            sum_sq += err * err;
        }
        const double mean = sum / trials;
        const double var = trials > 1 ? std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1)) : 0.0;
        rows.push_back({m, mean, std::sqrt(var)});
    }
    return rows;
}

/// Serializes the pairs to "x<TAB>y" lines and the metadata to a JSON
/// sidecar next to it.
inline void save_walk_dataset(const WalkDataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("save_walk_dataset: cannot open " + path + " for writing");
    for (const auto& [x, y] : d.pairs) out << x << "\t" << y << "\n";
    std::ofstream meta(path + ".json");
    meta << "{\n  \"n\": " << d.n << ",\n  \"m\": " << d.pairs.size() << ",\n  \"walk_length\": " << d.walk_length
         << ",\n  \"seed\": " << d.seed << ",\n  \"schedule_id\": \"" << d.schedule_id << "\"\n}\n";
}

} // namespace coherent
