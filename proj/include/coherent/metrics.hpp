#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "coherent/clustering.hpp"
#include "coherent/operators.hpp"

namespace coherent {

/// Per-cluster retained/leaked probability mass under one forward-backward
/// step.
struct LeakageReport {
    struct Entry {
        int cluster;
        double retained;
        double leaked;
    };
    std::vector<Entry> per_cluster;
    double overall = 0.0; // mass-weighted mean retained
};

/// retained(S) = (1_S^T Q 1_S) / |S|: the probability that a uniformly
/// chosen walker from S is back in S after one forward-backward step.
/// UNASSIGNED vertices are excluded.
inline LeakageReport coherence_ratio(const StochasticMatrix& q, const ClusterAssignment& assignment) {
    if (q.kind != StochasticKind::DoublyStochasticSymmetric)
        throw KindMismatch("coherence_ratio: Q must be a forward-backward matrix");
    if (assignment.size() != q.size())
        throw LengthMismatch("coherence_ratio: assignment covers " + std::to_string(assignment.size()) +
                             " vertices, Q has " + std::to_string(q.size()));
    std::vector<double> sizes(static_cast<std::size_t>(assignment.k), 0.0);
    for (int l : assignment.labels)
        if (l != UNASSIGNED) sizes[static_cast<std::size_t>(l)] += 1.0;

    std::vector<double> stay(static_cast<std::size_t>(assignment.k), 0.0);
    for (int i = 0; i < q.matrix.outerSize(); ++i)
        for (SparseMat::InnerIterator it(q.matrix, i); it; ++it) {
            const int li = assignment.labels[static_cast<std::size_t>(it.row())];
            const int lj = assignment.labels[static_cast<std::size_t>(it.col())];
            if (li != UNASSIGNED && li == lj) stay[static_cast<std::size_t>(li)] += it.value();
        }

    LeakageReport report;
    double weighted = 0.0, total = 0.0;
    for (int c = 0; c < assignment.k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] == 0.0) throw EmptyCluster("coherence_ratio: cluster " + std::to_string(c) + " is empty");
        const double retained = stay[static_cast<std::size_t>(c)] / sizes[static_cast<std::size_t>(c)];
        report.per_cluster.push_back({c, retained, 1.0 - retained});
        weighted += retained * sizes[static_cast<std::size_t>(c)];
        total += sizes[static_cast<std::size_t>(c)];
    }
    report.overall = total > 0.0 ? weighted / total : 0.0;
    return report;
}

/// Propagates per-cluster uniform indicator densities through the snapshot
/// transition matrices: rho_{t+1}^T = rho_t^T P^(t). Returns one n x k mass
/// matrix per time step, starting at t = 0.
inline std::vector<Eigen::MatrixXd> forward_mass(const TemporalGraph& tg, const ClusterAssignment& assignment,
                                                 double self_loop_weight = 1.0) {
    if (assignment.size() != tg.n) throw LengthMismatch("forward_mass: assignment length does not match vertex count");
    const int k = assignment.k;
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(tg.n, k);
    std::vector<double> sizes(static_cast<std::size_t>(k), 0.0);
    for (int l : assignment.labels)
        if (l != UNASSIGNED) sizes[static_cast<std::size_t>(l)] += 1.0;
    for (int i = 0; i < tg.n; ++i) {
        const int l = assignment.labels[static_cast<std::size_t>(i)];
        if (l != UNASSIGNED) rho(i, l) = 1.0 / sizes[static_cast<std::size_t>(l)];
    }

    std::vector<Eigen::MatrixXd> series;
    series.push_back(rho);
    for (int t = 0; t < tg.length(); ++t) {
        const StochasticMatrix pt = transition_matrix(add_self_loops(tg.snapshots[static_cast<std::size_t>(t)], self_loop_weight));
        rho = SparseMat(pt.matrix.transpose()) * rho;
        series.push_back(rho);
    }
    return series;
}

/// Rows are true classes, columns the predicted clusters plus a trailing
/// "n/a" column counting UNASSIGNED vertices.
struct ConfusionTable {
    std::vector<std::string> class_names;
    Eigen::MatrixXi counts; // classes x (k + 1); last column is n/a

    int unassigned_total() const { return counts.col(counts.cols() - 1).sum(); }
    int diagonal_total() const {
        int total = 0;
        for (int i = 0; i < counts.rows() && i < counts.cols() - 1; ++i) total += counts(i, i);
        return total;
    }
};

/// Builds the class-vs-cluster contingency table. Clusters are matched to
/// classes greedily by overlap so that the diagonal counts correct
/// assignments.
inline ConfusionTable confusion_table(const std::vector<std::string>& true_labels, const ClusterAssignment& assignment) {
    if (static_cast<int>(true_labels.size()) != assignment.size())
        throw LengthMismatch("confusion_table: label lengths differ");
    std::map<std::string, int> class_index;
    ConfusionTable table;
    for (const std::string& c : true_labels)
        if (class_index.emplace(c, static_cast<int>(class_index.size())).second) table.class_names.push_back(c);
    const int classes = static_cast<int>(class_index.size());
    const int k = assignment.k;

    Eigen::MatrixXi raw = Eigen::MatrixXi::Zero(classes, k + 1);
    for (int i = 0; i < assignment.size(); ++i) {
        const int row = class_index.at(true_labels[static_cast<std::size_t>(i)]);
        const int l = assignment.labels[static_cast<std::size_t>(i)];
        raw(row, l == UNASSIGNED ? k : l) += 1;
    }

    // greedy cluster-to-class matching by largest overlap
    std::vector<int> order(static_cast<std::size_t>(k), -1);
    std::vector<bool> cluster_used(static_cast<std::size_t>(k), false);
    std::vector<bool> class_used(static_cast<std::size_t>(classes), false);
    const int rounds = std::min(classes, k);
    for (int r = 0; r < rounds; ++r) {
        int best_c = -1, best_j = -1, best_v = -1;
        for (int c = 0; c < classes; ++c) {
            if (class_used[static_cast<std::size_t>(c)]) continue;
            for (int j = 0; j < k; ++j) {
                if (cluster_used[static_cast<std::size_t>(j)]) continue;
                if (raw(c, j) > best_v) {
                    best_v = raw(c, j);
                    best_c = c;
                    best_j = j;
                }
            }
        }
        order[static_cast<std::size_t>(best_c)] = best_j;
        class_used[static_cast<std::size_t>(best_c)] = true;
        cluster_used[static_cast<std::size_t>(best_j)] = true;
    }
    int next = rounds;
    for (int j = 0; j < k; ++j)
        if (!cluster_used[static_cast<std::size_t>(j)] && next < k) order[static_cast<std::size_t>(next++)] = j;

    table.counts = Eigen::MatrixXi::Zero(classes, k + 1);
    for (int c = 0; c < classes; ++c) {
        for (int slot = 0; slot < k; ++slot) {
            const int j = order[static_cast<std::size_t>(slot)];
            if (j >= 0) table.counts(c, slot) = raw(c, j);
        }
        table.counts(c, k) = raw(c, k);
    }
    return table;
}

/// Standard adjusted Rand index; pairs containing an UNASSIGNED entry in
/// either labeling are excluded.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw LengthMismatch("adjusted_rand_index: label lengths differ");
    std::map<std::pair<int, int>, long> cell;
    std::map<int, long> row, col;
    long m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == UNASSIGNED || b[i] == UNASSIGNED) continue;
        ++cell[{a[i], b[i]}];
        ++row[a[i]];
        ++col[b[i]];
        ++m;
    }
    auto choose2 = [](long v) { return 0.5 * static_cast<double>(v) * static_cast<double>(v - 1); };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [key, v] : cell) sum_cells += choose2(v);
    for (const auto& [key, v] : row) sum_rows += choose2(v);
    for (const auto& [key, v] : col) sum_cols += choose2(v);
    const double total = choose2(m);
    if (total == 0.0) return 1.0;
    const double expected = sum_rows * sum_cols / total;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;
    return (sum_cells - expected) / (max_index - expected);
}

} // namespace coherent
