#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coherent/errors.hpp"

namespace coherent {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

/// Sparse nonnegative weighted adjacency over n vertices. Immutable after
/// construction; all stored weights are strictly positive and the entry set
/// is symmetric iff directed == false.
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(int n, SparseMat adjacency, bool directed)
        : n_(n), adjacency_(std::move(adjacency)), directed_(directed) {}

    int size() const { return n_; }
    bool directed() const { return directed_; }
    const SparseMat& adjacency() const { return adjacency_; }
    Eigen::Index nonzeros() const { return adjacency_.nonZeros(); }

private:
    int n_ = 0;
    SparseMat adjacency_;
    bool directed_ = true;
};

/// Ordered sequence of snapshots over a fixed vertex set.
struct TemporalGraph {
    int n = 0;
    std::vector<WeightedGraph> snapshots;
    std::vector<int> times; // optional labels, empty means 0..T

    int length() const { return static_cast<int>(snapshots.size()); }
};

using DegreeVector = Eigen::VectorXd;

/// Builds a graph from an edge list. Duplicate (i, j) weights are summed,
/// zero-weight entries are dropped, and for undirected graphs missing
/// reverse edges are added with equal weight (if both directions are given
/// with different weights, the pair is symmetrized to the sum).
inline WeightedGraph build_graph(int n, const std::vector<Edge>& edges, bool directed) {
    if (n < 1) throw InvalidConfig("build_graph: vertex count must be positive, got " + std::to_string(n));
    std::map<std::pair<int, int>, double> entries;
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw IndexOutOfRange("build_graph: edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                                  ") out of range for n = " + std::to_string(n));
        if (e.weight < 0.0)
            throw NegativeWeight("build_graph: negative weight " + std::to_string(e.weight) + " on edge (" +
                                 std::to_string(e.src) + ", " + std::to_string(e.dst) + ")");
        entries[{e.src, e.dst}] += e.weight;
    }
    if (!directed) {
        std::map<std::pair<int, int>, double> sym;
        for (const auto& [key, w] : entries) {
            auto rev = std::make_pair(key.second, key.first);
            auto it = entries.find(rev);
            if (it == entries.end()) {
                sym[key] = w;
                sym[rev] = w;
            } else if (key.first <= key.second) {
                double s = (key.first == key.second) ? w : w + it->second;
                if (key.first == key.second) {
                    sym[key] = s;
                } else {
                    // both directions present: symmetrize to the pair sum
                    double v = (std::abs(w - it->second) == 0.0) ? w : s;
                    sym[key] = v;
                    sym[rev] = v;
                }
            }
        }
        entries = std::move(sym);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size());
    for (const auto& [key, w] : entries)
        if (w > 0.0) triplets.emplace_back(key.first, key.second, w);
    SparseMat a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return WeightedGraph(n, std::move(a), directed);
}

/// Increases every diagonal entry by w. Off-diagonal entries are unchanged.
inline WeightedGraph add_self_loops(const WeightedGraph& g, double w) {
    if (w < 0.0) throw NegativeWeight("add_self_loops: weight must be nonnegative, got " + std::to_string(w));
    if (w == 0.0) return g;
    SparseMat a = g.adjacency();
    SparseMat id(g.size(), g.size());
    id.setIdentity();
    a = a + w * id;
    a.makeCompressed();
    return WeightedGraph(g.size(), std::move(a), g.directed());
}

/// Row sums of the adjacency matrix.
inline DegreeVector out_degrees(const WeightedGraph& g) {
    DegreeVector d = DegreeVector::Zero(g.size());
    const SparseMat& a = g.adjacency();
    for (int i = 0; i < a.outerSize(); ++i)
        for (SparseMat::InnerIterator it(a, i); it; ++it) d[it.row()] += it.value();
    return d;
}

/// Column sums of the adjacency matrix.
inline DegreeVector in_degrees(const WeightedGraph& g) {
    DegreeVector d = DegreeVector::Zero(g.size());
    const SparseMat& a = g.adjacency();
    for (int i = 0; i < a.outerSize(); ++i)
        for (SparseMat::InnerIterator it(a, i); it; ++it) d[it.col()] += it.value();
    return d;
}

inline std::vector<Edge> edge_list(const WeightedGraph& g) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(g.nonzeros()));
    const SparseMat& a = g.adjacency();
    for (int i = 0; i < a.outerSize(); ++i)
        for (SparseMat::InnerIterator it(a, i); it; ++it)
            edges.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
    return edges;
}

} // namespace coherent
