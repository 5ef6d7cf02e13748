#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "coherent/estimation.hpp"
#include "coherent/operators.hpp"
#include "coherent/spectral.hpp"

namespace coherent {

enum class ClusterMethod { KMeans, Seba };

constexpr int UNASSIGNED = -1;

/// Per-vertex cluster labels plus the spectrum that produced them. KMeans
/// assigns every vertex; Seba may leave vertices UNASSIGNED. Labels are
/// canonicalized: clusters are renumbered by ascending smallest member index.
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;
    ClusterMethod method = ClusterMethod::KMeans;
    SpectralDecomposition spectrum;
    bool converged = true;

    int size() const { return static_cast<int>(labels.size()); }
};

/// Rows of U = [u_1, ..., u_k]; row i is vertex i's feature vector.
struct Embedding {
    Eigen::MatrixXd rows;
};

namespace detail {

inline void canonicalize_labels(std::vector<int>& labels, int k) {
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int l : labels) {
        if (l == UNASSIGNED) continue;
        if (remap[static_cast<std::size_t>(l)] == -1) remap[static_cast<std::size_t>(l)] = next++;
    }
    for (int& l : labels)
        if (l != UNASSIGNED) l = remap[static_cast<std::size_t>(l)];
}

inline double kmeans_pass(const Eigen::MatrixXd& x, int k, Rng& rng, std::vector<int>& labels) {
    const int n = static_cast<int>(x.rows());
    Eigen::MatrixXd centers(k, x.cols());

    // k-means++ seeding
    std::vector<double> min_dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    int first = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    centers.row(0) = x.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = (x.row(i) - centers.row(c - 1)).squaredNorm();
            min_dist[static_cast<std::size_t>(i)] = std::min(min_dist[static_cast<std::size_t>(i)], d);
            total += min_dist[static_cast<std::size_t>(i)];
        }
        int pick = total > 0.0 ? static_cast<int>(rng.sample_discrete(min_dist, total))
                               : static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        centers.row(c) = x.row(pick);
    }

    labels.assign(static_cast<std::size_t>(n), 0);
    double wcss = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        wcss = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (x.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
            wcss += best_d;
        }
        if (!changed && iter > 0) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            } else {
                // empty cluster: reseed at the point farthest from its center
                int worst = 0;
                double worst_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
                    if (d > worst_d) {
                        worst_d = d;
                        worst = i;
                    }
                }
                centers.row(c) = x.row(worst);
            }
        }
    }
    return wcss;
}

} // namespace detail

/// Lloyd's iteration with k-means++ seeding and independent restarts; the
/// run with the lowest within-cluster sum of squares wins.
inline ClusterAssignment kmeans(const Embedding& e, int k, std::uint64_t seed = 0, int restarts = 10) {
    const int n = static_cast<int>(e.rows.rows());
    if (k < 1 || k > n) throw KTooLarge("kmeans: k = " + std::to_string(k) + " out of range for n = " + std::to_string(n));
    std::vector<int> best_labels;
    double best_wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r) + 0xc0ull);
        std::vector<int> labels;
        const double wcss = detail::kmeans_pass(e.rows, k, rng, labels);
        if (wcss < best_wcss) {
            best_wcss = wcss;
            best_labels = std::move(labels);
        }
    }
    detail::canonicalize_labels(best_labels, k);
    ClusterAssignment a;
    a.labels = std::move(best_labels);
    a.k = k;
    a.method = ClusterMethod::KMeans;
    return a;
}

namespace detail {

struct SebaPass {
    Eigen::MatrixXd s;
    bool converged = false;
    double objective = 0.0; // sum of column L1 norms of the unit-norm basis
};

inline SebaPass seba_pass(const Eigen::MatrixXd& v, Eigen::MatrixXd r, int max_iter, double tol) {
    const int n = static_cast<int>(v.rows());
    const int k = static_cast<int>(v.cols());
    const double mu = 0.99 / std::sqrt(static_cast<double>(n));
    SebaPass pass;
    pass.s.resize(n, k);
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::MatrixXd z = v * r.transpose();
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < n; ++i) {
                const double t = z(i, j);
                pass.s(i, j) = (t > 0.0 ? 1.0 : -1.0) * std::max(std::abs(t) - mu, 0.0);
            }
            const double norm = pass.s.col(j).norm();
            if (norm > 0.0) {
                pass.s.col(j) /= norm;
            } else {
                pass.s.col(j) = v.col(j); // thresholding wiped the column, fall back
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(pass.s.transpose() * v, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::MatrixXd r_new = svd.matrixU() * svd.matrixV().transpose();
        const double delta = (r_new - r).cwiseAbs().maxCoeff();
        r = r_new;
        if (delta < tol) {
            pass.converged = true;
            break;
        }
    }
    for (int j = 0; j < k; ++j) pass.objective += pass.s.col(j).lpNorm<1>();
    return pass;
}

} // namespace detail

/// Sparse eigenbasis approximation: rotates an orthonormal basis toward a
/// sparse nonnegative one by alternating soft-thresholding with a polar-
/// decomposition rotation update. The identity start is a fixed point when a
/// constant eigenvector is present, so several random rotation starts are
/// tried and the sparsest (lowest L1) basis wins. Vertices whose best basis
/// entry stays below half the column maximum remain UNASSIGNED.
inline std::pair<Eigen::MatrixXd, ClusterAssignment> seba(const Embedding& e, int max_iter = 5000, double tol = 1e-12,
                                                          double assign_fraction = 0.5, int restarts = 8) {
    const int n = static_cast<int>(e.rows.rows());
    const int k = static_cast<int>(e.rows.cols());

    Eigen::MatrixXd v = e.rows;
    // orthonormalize if needed
    if ((v.transpose() * v - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
        v = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    }

    detail::SebaPass best = detail::seba_pass(v, Eigen::MatrixXd::Identity(k, k), max_iter, tol);
    Rng rng(0x5eba, 0);
    for (int attempt = 1; attempt < restarts; ++attempt) {
        Eigen::MatrixXd g(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) g(i, j) = rng.next_double() - 0.5;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd r0 = qr.householderQ();
        detail::SebaPass pass = detail::seba_pass(v, r0, max_iter, tol);
        if (pass.objective < best.objective - 1e-12) best = pass;
    }
    Eigen::MatrixXd s = std::move(best.s);
    const bool converged = best.converged;

    // sign-fix and rescale each column so its maximum entry is 1
    for (int j = 0; j < k; ++j) {
        Eigen::Index imax;
        s.col(j).cwiseAbs().maxCoeff(&imax);
        if (s(imax, j) < 0.0) s.col(j) *= -1.0;
        const double top = s.col(j).maxCoeff();
        if (top > 0.0) s.col(j) /= top;
    }
    s = s.cwiseMax(0.0);

    ClusterAssignment a;
    a.labels.assign(static_cast<std::size_t>(n), UNASSIGNED);
    for (int i = 0; i < n; ++i) {
        Eigen::Index jmax;
        const double value = s.row(i).maxCoeff(&jmax);
        if (value > assign_fraction * s.col(jmax).maxCoeff()) a.labels[static_cast<std::size_t>(i)] = static_cast<int>(jmax);
    }
    detail::canonicalize_labels(a.labels, k);
    a.k = k;
    a.method = ClusterMethod::Seba;
    a.converged = converged;
    return {std::move(s), std::move(a)};
}

/// Largest eigengap heuristic: k = argmax (lambda_j - lambda_{j+1}), ties
/// broken toward smaller k.
inline int suggest_k(const Eigen::VectorXd& eigenvalues) {
    if (eigenvalues.size() < 2) throw TooFewEigenvalues("suggest_k: need at least 2 eigenvalues");
    int best = 1;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < eigenvalues.size(); ++j) {
        const double gap = eigenvalues[j] - eigenvalues[j + 1];
        if (gap > best_gap) {
            best_gap = gap;
            best = j + 1;
        }
    }
    return best;
}

namespace detail {

inline ClusterAssignment cluster_embedding(const SpectralDecomposition& spectrum, int k, ClusterMethod method,
                                           std::uint64_t seed) {
    Embedding e{spectrum.eigenvectors.leftCols(k)};
    ClusterAssignment a;
    if (method == ClusterMethod::KMeans) {
        a = kmeans(e, k, seed);
    } else {
        a = seba(e).second;
    }
    a.spectrum = spectrum;
    return a;
}

} // namespace detail

/// Undirected spectral clustering: random-walk spectrum, then clustering of
/// the eigenvector row embedding.
inline ClusterAssignment cluster_undirected(const WeightedGraph& g, int k, ClusterMethod method = ClusterMethod::KMeans,
                                            std::uint64_t seed = 0) {
    StochasticMatrix p = transition_matrix(g);
    SpectralDecomposition spectrum = eigs_undirected_rw(p, out_degrees(g), k, seed);
    return detail::cluster_embedding(spectrum, k, method, seed);
}

/// Directed spectral clustering through the forward-backward matrix:
/// self-loops -> P -> Q -> dominant eigenvectors -> clustering.
inline ClusterAssignment cluster_directed(const WeightedGraph& g, int k, ClusterMethod method = ClusterMethod::KMeans,
                                          std::uint64_t seed = 0, double self_loop_weight = 1.0) {
    StochasticMatrix p = transition_matrix(add_self_loops(g, self_loop_weight));
    StochasticMatrix q = forward_backward_matrix(p);
    SpectralDecomposition spectrum = top_eigs_symmetric(q.matrix, k, seed);
    return detail::cluster_embedding(spectrum, k, method, seed);
}

/// Data-driven estimation of Q from random walks over the snapshot schedule.
struct ApproachA {
    std::size_t walks = 5000;
    int walk_length = 100;
    double epsilon = 1e-8;
};

/// Exact product of per-snapshot transition matrices.
struct ApproachB {};

using TemporalApproach = std::variant<ApproachA, ApproachB>;

/// Coherent-set clustering of a time-evolving graph. Labels describe
/// cluster membership at the initial time.
inline ClusterAssignment cluster_temporal(const TemporalGraph& tg, int k, ClusterMethod method,
                                          const TemporalApproach& approach, double self_loop_weight = 1.0,
                                          std::uint64_t seed = 0) {
    if (tg.snapshots.empty()) throw InvalidConfig("cluster_temporal: empty temporal graph");
    SpectralDecomposition spectrum;
    if (std::holds_alternative<ApproachB>(approach)) {
        StochasticMatrix p = temporal_transition_matrix(tg, self_loop_weight);
        StochasticMatrix q = forward_backward_matrix(p);
        spectrum = top_eigs_symmetric(q.matrix, k, seed);
    } else {
        const ApproachA& cfg = std::get<ApproachA>(approach);
        std::vector<StochasticMatrix> schedule;
        schedule.reserve(tg.snapshots.size());
        for (const WeightedGraph& g : tg.snapshots)
            schedule.push_back(transition_matrix(add_self_loops(g, self_loop_weight)));
        const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(tg.n, 1.0 / tg.n);
        WalkDataset d = simulate_walks(schedule, cfg.walks, cfg.walk_length, uniform, seed);
        Eigen::MatrixXd f = estimate_fb(gram_matrices(d), Regularization::tikhonov(cfg.epsilon));
        spectrum = top_eigs_symmetric(f.sparseView(), k, seed);
    }
    return detail::cluster_embedding(spectrum, k, method, seed);
}

} // namespace coherent
