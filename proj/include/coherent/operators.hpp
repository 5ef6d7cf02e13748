#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <string>

#include "coherent/graph.hpp"

namespace coherent {

enum class StochasticKind { RowStochastic, DoublyStochasticSymmetric };
enum class LaplacianFlavor { RandomWalk, ForwardBackward };

/// Row-stochastic sparse matrix. The forward-backward matrix Q additionally
/// carries the DoublyStochasticSymmetric kind.
struct StochasticMatrix {
    SparseMat matrix;
    StochasticKind kind = StochasticKind::RowStochastic;

    int size() const { return static_cast<int>(matrix.rows()); }
};

struct Laplacian {
    SparseMat matrix;
    LaplacianFlavor flavor = LaplacianFlavor::RandomWalk;

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// Column sums of P: nu[j] is the probability mass arriving at vertex j
/// after one step from the uniform distribution (times n).
struct NuVector {
    Eigen::VectorXd values;
    bool invertible = true;

    int size() const { return static_cast<int>(values.size()); }
};

/// P = D_o^{-1} A. Without teleportation every vertex must have positive
/// out-degree. With teleportation alpha, each row is mixed with the uniform
/// distribution and dangling rows become uniform.
inline StochasticMatrix transition_matrix(const WeightedGraph& g, std::optional<double> teleport = std::nullopt) {
    const int n = g.size();
    const DegreeVector deg = out_degrees(g);
    const double alpha = teleport.value_or(0.0);
    if (teleport && (alpha <= 0.0 || alpha >= 1.0))
        throw InvalidConfig("transition_matrix: teleport probability must be in (0, 1), got " + std::to_string(alpha));
    if (!teleport) {
        for (int i = 0; i < n; ++i)
            if (deg[i] <= 0.0) throw DanglingVertex("transition_matrix: vertex " + std::to_string(i) + " has zero out-degree");
        SparseMat p = g.adjacency();
        for (int i = 0; i < p.outerSize(); ++i)
            for (SparseMat::InnerIterator it(p, i); it; ++it) it.valueRef() /= deg[it.row()];
        return {std::move(p), StochasticKind::RowStochastic};
    }
    // teleportation densifies the matrix; intended for small graphs only
    Eigen::MatrixXd dense = Eigen::MatrixXd::Constant(n, n, alpha / n);
    for (const Edge& e : edge_list(g))
        if (deg[e.src] > 0.0) dense(e.src, e.dst) += (1.0 - alpha) * e.weight / deg[e.src];
    for (int i = 0; i < n; ++i)
        if (deg[i] <= 0.0) dense.row(i).setConstant(1.0 / n);
    return {dense.sparseView(), StochasticKind::RowStochastic};
}

inline NuVector nu_vector(const StochasticMatrix& p) {
    NuVector nu;
    nu.values = Eigen::VectorXd::Zero(p.size());
    for (int i = 0; i < p.matrix.outerSize(); ++i)
        for (SparseMat::InnerIterator it(p.matrix, i); it; ++it) nu.values[it.col()] += it.value();
    nu.invertible = (nu.values.array() > Tolerances::nu_invertible).all();
    return nu;
}

/// Q = P D_nu^{-1} P^T, symmetric and doubly stochastic. Assembled as
/// M M^T with M = P D_nu^{-1/2} so the product stays sparse and the result
/// is positive semidefinite by construction.
inline StochasticMatrix forward_backward_matrix(const StochasticMatrix& p) {
    const NuVector nu = nu_vector(p);
    for (int j = 0; j < nu.size(); ++j)
        if (nu.values[j] <= Tolerances::nu_invertible)
            throw SingularNu("forward_backward_matrix: vertex " + std::to_string(j) +
                             " receives no incoming mass (add self-loops to regularize)");
    SparseMat m = p.matrix;
    for (int i = 0; i < m.outerSize(); ++i)
        for (SparseMat::InnerIterator it(m, i); it; ++it) it.valueRef() /= std::sqrt(nu.values[it.col()]);
    SparseMat q = (m * SparseMat(m.transpose())).pruned();
    q.makeCompressed();
    return {std::move(q), StochasticKind::DoublyStochasticSymmetric};
}

inline Laplacian random_walk_laplacian(const StochasticMatrix& p) {
    SparseMat id(p.size(), p.size());
    id.setIdentity();
    SparseMat l = id - p.matrix;
    l.makeCompressed();
    return {std::move(l), LaplacianFlavor::RandomWalk};
}

inline Laplacian forward_backward_laplacian(const StochasticMatrix& q) {
    if (q.kind != StochasticKind::DoublyStochasticSymmetric)
        throw KindMismatch("forward_backward_laplacian: input must be a forward-backward matrix");
    SparseMat id(q.size(), q.size());
    id.setIdentity();
    SparseMat l = id - q.matrix;
    l.makeCompressed();
    return {std::move(l), LaplacianFlavor::ForwardBackward};
}

/// Left-to-right product P^(0) P^(1) ... P^(T) of the per-snapshot
/// transition matrices, each snapshot regularized with self-loops first.
inline StochasticMatrix temporal_transition_matrix(const TemporalGraph& tg, double self_loop_weight,
                                                   std::optional<double> teleport = std::nullopt) {
    if (tg.snapshots.empty()) throw InvalidConfig("temporal_transition_matrix: empty snapshot list");
    SparseMat product;
    for (int t = 0; t < tg.length(); ++t) {
        StochasticMatrix pt;
        try {
            pt = transition_matrix(add_self_loops(tg.snapshots[static_cast<std::size_t>(t)], self_loop_weight), teleport);
        } catch (const DanglingVertex& e) {
            throw DanglingVertex(std::string(e.what()) + " (snapshot " + std::to_string(t) + ")");
        }
        if (t == 0) {
            product = std::move(pt.matrix);
        } else {
            product = (product * pt.matrix).pruned();
        }
    }
    product.makeCompressed();
    return {std::move(product), StochasticKind::RowStochastic};
}

} // namespace coherent
