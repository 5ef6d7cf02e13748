#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "coherent/graph.hpp"
#include "coherent/rng.hpp"

namespace coherent {

/// 12-vertex graph of three directed 4-cycles chained by weak edges:
/// cycle edges have weight 1 and the inter-cluster edges 3->4, 7->8, 11->0
/// weight 0.01. No self-loops; callers add them before clustering.
inline WeightedGraph three_ring_graph() {
    std::vector<Edge> edges;
    for (int c = 0; c < 3; ++c) {
        const int base = 4 * c;
        for (int i = 0; i < 4; ++i) edges.push_back({base + i, base + (i + 1) % 4, 1.0});
    }
    edges.push_back({3, 4, 0.01});
    edges.push_back({7, 8, 0.01});
    edges.push_back({11, 0, 0.01});
    return build_graph(12, edges, /*directed=*/true);
}

/// Sparsely connected random directed blocks with unit weights. Returns the
/// graph and the ground-truth block label per vertex.
inline std::pair<WeightedGraph, std::vector<int>> random_block_digraph(int blocks = 10, int block_size = 10,
                                                                       double intra_density = 0.5,
                                                                       int inter_edges_per_block = 2,
                                                                       std::uint64_t seed = 0) {
    if (blocks < 2) throw InvalidConfig("random_block_digraph: need at least 2 blocks");
    if (intra_density <= 0.0 || intra_density > 1.0)
        throw InvalidConfig("random_block_digraph: intra_density must be in (0, 1]");
    const int n = blocks * block_size;
    Rng rng(seed, 0xb10c);
    std::vector<Edge> edges;
    for (int b = 0; b < blocks; ++b) {
        const int base = b * block_size;
        for (int i = 0; i < block_size; ++i)
            for (int j = 0; j < block_size; ++j) {
                if (i == j) continue;
                if (rng.next_double() < intra_density) edges.push_back({base + i, base + j, 1.0});
            }
        for (int e = 0; e < inter_edges_per_block; ++e) {
            int other = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(blocks - 1)));
            if (other >= b) ++other;
            const int src = base + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(block_size)));
            const int dst = other * block_size + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(block_size)));
            edges.push_back({src, dst, 1.0});
        }
    }
    std::vector<int> truth(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) truth[static_cast<std::size_t>(v)] = v / block_size;
    return {build_graph(n, edges, /*directed=*/true), truth};
}

/// Two concentric rings with two diametrically opposite attracting arcs
/// ("wells"). Inside a well, ring edges are undirected; outside, ring edges
/// point toward the nearest well so walkers drift in. Spokes pairing
/// inner/outer neighbors are always undirected. The whole pattern rotates
/// counterclockwise by rotation_step ring positions every rotation_period
/// steps.
struct DoubleWellConfig {
    int ring_size = 12;       // vertices per ring, total 2 * ring_size
    int well_width = 6;       // vertices per attracting arc across both rings
    int rotation_period = 10; // steps between rotations
    int rotation_step = 1;    // positions rotated counterclockwise
    int total_steps = 100;    // schedule length
    int well_offset = 2;      // ring position where the first well starts at t = 0

    void validate() const {
        if (ring_size < 4 || ring_size % 2 != 0) throw InvalidConfig("DoubleWellConfig: ring_size must be even and >= 4");
        if (well_width < 2 || well_width % 2 != 0) throw InvalidConfig("DoubleWellConfig: well_width must be even and >= 2");
        if (well_width / 2 > ring_size / 2) throw InvalidConfig("DoubleWellConfig: wells overlap");
        if (rotation_period < 1 || rotation_step < 0 || total_steps < 1)
            throw InvalidConfig("DoubleWellConfig: invalid rotation/step counts");
    }
};

namespace detail {

/// Ring positions covered by the two wells at step t.
inline std::set<int> well_positions(const DoubleWellConfig& cfg, int t) {
    const int shift = (t / cfg.rotation_period) * cfg.rotation_step;
    const int per_well = cfg.well_width / 2;
    std::set<int> wells;
    for (int base : {cfg.well_offset, cfg.well_offset + cfg.ring_size / 2})
        for (int p = 0; p < per_well; ++p) wells.insert((base + shift + p) % cfg.ring_size);
    return wells;
}

inline int cyclic_distance_to_set(int p, const std::set<int>& s, int ring) {
    int best = ring;
    for (int q : s) {
        const int d = std::abs(p - q);
        best = std::min({best, d, ring - d});
    }
    return best;
}

} // namespace detail

/// Vertex indices (both rings) inside the wells at step t. Vertex 2p is the
/// inner, 2p + 1 the outer vertex at ring position p.
inline std::vector<int> double_well_gray_vertices(const DoubleWellConfig& cfg, int t) {
    std::vector<int> gray;
    for (int p : detail::well_positions(cfg, t)) {
        gray.push_back(2 * p);
        gray.push_back(2 * p + 1);
    }
    std::sort(gray.begin(), gray.end());
    return gray;
}

inline TemporalGraph rotating_double_well(const DoubleWellConfig& cfg = {}) {
    cfg.validate();
    const int ring = cfg.ring_size;
    TemporalGraph tg;
    tg.n = 2 * ring;
    for (int t = 0; t < cfg.total_steps; ++t) {
        const std::set<int> wells = detail::well_positions(cfg, t);
        std::vector<Edge> edges;
        for (int p = 0; p < ring; ++p) {
            // undirected spoke between inner and outer vertex
            edges.push_back({2 * p, 2 * p + 1, 1.0});
            edges.push_back({2 * p + 1, 2 * p, 1.0});
            const int q = (p + 1) % ring;
            const int dp = detail::cyclic_distance_to_set(p, wells, ring);
            const int dq = detail::cyclic_distance_to_set(q, wells, ring);
            auto add_ring_edge = [&edges](int from, int to) {
                edges.push_back({2 * from, 2 * to, 1.0});         // inner ring
                edges.push_back({2 * from + 1, 2 * to + 1, 1.0}); // outer ring
            };
            if (dp == 0 && dq == 0) {
                add_ring_edge(p, q);
                add_ring_edge(q, p);
            } else if (dp < dq) {
                add_ring_edge(q, p);
            } else if (dq < dp) {
                add_ring_edge(p, q);
            } else {
                add_ring_edge(p, q);
                add_ring_edge(q, p);
            }
        }
        tg.snapshots.push_back(build_graph(tg.n, edges, /*directed=*/true));
        tg.times.push_back(t);
    }
    return tg;
}

/// Quadruple-gyre flow on the 2-torus [0, 2) x [0, 2), discretized to a
/// time-evolving graph by transporting test points between boxes.
struct GyreConfig {
    double delta = 0.1;
    double omega = 2.0 * std::numbers::pi;
    int boxes_per_axis = 10;
    int points_per_box = 16; // laid out as a uniform sqrt(p) x sqrt(p) lattice
    double tau = 0.05;
    int steps = 20;
    int substeps = 10;
    // The velocity field here is the Hamiltonian field of the stream
    // function sin(pi f(t,x)) sin(pi f(t,y)). Setting diagonal_field_variant
    // uses the same argument order for both components, which degenerates to
    // dy/dt = -dx/dt; kept only for comparison.
    bool diagonal_field_variant = false;

    void validate() const {
        if (delta < 0.0 || delta >= 0.5) throw InvalidConfig("GyreConfig: delta must be in [0, 0.5)");
        if (boxes_per_axis < 2) throw InvalidConfig("GyreConfig: boxes_per_axis must be >= 2");
        const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(points_per_box))));
        if (s * s != points_per_box) throw InvalidConfig("GyreConfig: points_per_box must be a perfect square");
        if (tau <= 0.0 || steps < 1 || substeps < 1) throw InvalidConfig("GyreConfig: invalid integration parameters");
    }
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

inline double gyre_f(double t, double z, const GyreConfig& cfg) {
    const double s = cfg.delta * std::sin(cfg.omega * t);
    return s * z * z + (1.0 - 2.0 * s) * z;
}

inline double gyre_df(double t, double z, const GyreConfig& cfg) {
    const double s = cfg.delta * std::sin(cfg.omega * t);
    return 2.0 * s * z + 1.0 - 2.0 * s;
}

inline double gyre_g(double t, double z1, double z2, const GyreConfig& cfg) {
    constexpr double pi = std::numbers::pi;
    return pi * std::sin(pi * gyre_f(t, z1, cfg)) * std::cos(pi * gyre_f(t, z2, cfg)) * gyre_df(t, z2, cfg);
}

inline double wrap_torus(double z) {
    double w = std::fmod(z, 2.0);
    if (w < 0.0) w += 2.0;
    if (w >= 2.0) w = 0.0;
    return w;
}

} // namespace detail

inline Point2 gyre_velocity(double t, double x, double y, const GyreConfig& cfg = {}) {
    const double gy = cfg.diagonal_field_variant ? detail::gyre_g(t, x, y, cfg) : detail::gyre_g(t, y, x, cfg);
    return {-detail::gyre_g(t, x, y, cfg), gy};
}

/// Classical RK4 over [t0, t0 + tau] with cfg.substeps fixed substeps; the
/// result is wrapped back onto the torus.
inline Point2 integrate_flow(Point2 p, double t0, double tau, const GyreConfig& cfg = {}) {
    if (tau <= 0.0) throw InvalidConfig("integrate_flow: tau must be positive");
    const double h = tau / cfg.substeps;
    double t = t0;
    for (int s = 0; s < cfg.substeps; ++s) {
        const Point2 k1 = gyre_velocity(t, p.x, p.y, cfg);
        const Point2 k2 = gyre_velocity(t + 0.5 * h, p.x + 0.5 * h * k1.x, p.y + 0.5 * h * k1.y, cfg);
        const Point2 k3 = gyre_velocity(t + 0.5 * h, p.x + 0.5 * h * k2.x, p.y + 0.5 * h * k2.y, cfg);
        const Point2 k4 = gyre_velocity(t + h, p.x + h * k3.x, p.y + h * k3.y, cfg);
        p.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        p.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        t += h;
    }
    return {detail::wrap_torus(p.x), detail::wrap_torus(p.y)};
}

/// Boxes the torus into boxes_per_axis^2 cells (row-major over the grid,
/// rows indexed by y) and builds one snapshot per time step: edge (i, j)
/// counts the test points of box i that land in box j after one lag.
inline std::pair<TemporalGraph, std::vector<Point2>> quadruple_gyre_graph(const GyreConfig& cfg = {}) {
    cfg.validate();
    const int b = cfg.boxes_per_axis;
    const int n = b * b;
    const double box_w = 2.0 / b;
    const int lattice = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.points_per_box))));

    std::vector<Point2> centers(static_cast<std::size_t>(n));
    for (int iy = 0; iy < b; ++iy)
        for (int ix = 0; ix < b; ++ix)
            centers[static_cast<std::size_t>(iy * b + ix)] = {(ix + 0.5) * box_w, (iy + 0.5) * box_w};

    auto box_of = [&](const Point2& p) {
        int ix = std::min(b - 1, static_cast<int>(p.x / box_w));
        int iy = std::min(b - 1, static_cast<int>(p.y / box_w));
        return iy * b + ix;
    };

    TemporalGraph tg;
    tg.n = n;
    for (int t = 0; t < cfg.steps; ++t) {
        const double t0 = cfg.tau * t;
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(cfg.points_per_box));
        for (int iy = 0; iy < b; ++iy)
            for (int ix = 0; ix < b; ++ix) {
                const int src = iy * b + ix;
                for (int py = 0; py < lattice; ++py)
                    for (int px = 0; px < lattice; ++px) {
                        Point2 p{(ix + (px + 0.5) / lattice) * box_w, (iy + (py + 0.5) / lattice) * box_w};
                        const Point2 q = integrate_flow(p, t0, cfg.tau, cfg);
                        edges.push_back({src, box_of(q), 1.0});
                    }
            }
        tg.snapshots.push_back(build_graph(n, edges, /*directed=*/true));
        tg.times.push_back(t);
    }
    return {std::move(tg), std::move(centers)};
}

} // namespace coherent
