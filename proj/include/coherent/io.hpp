#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coherent/graph.hpp"

namespace coherent {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline bool blank_or_comment(const std::string& line, char comment) {
    for (char c : line) {
        if (c == comment) return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace detail

/// Parses a Matrix Market coordinate file (real or pattern, general or
/// symmetric). Symmetric storage is expanded to the full entry set and
/// 1-based indices are converted to 0-based.
inline WeightedGraph load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_matrix_market: cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw ParseError(path + ":1: empty file");
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || detail::lower(object) != "matrix")
        throw ParseError(path + ":1: not a MatrixMarket matrix header");
    if (detail::lower(format) != "coordinate") throw ParseError(path + ":1: only coordinate format is supported");
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (field == "complex") throw UnsupportedField(path + ":1: complex matrices are not supported");
    if (field != "real" && field != "integer" && field != "pattern")
        throw UnsupportedField(path + ":1: unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw UnsupportedField(path + ":1: unsupported symmetry '" + symmetry + "'");
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    int lineno = 1;
    long rows = -1, cols = -1, declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line, '%')) continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> declared)) throw ParseError(path + ":" + std::to_string(lineno) + ": bad size line");
        break;
    }
    if (rows < 0) throw ParseError(path + ": missing size line");
    if (rows != cols) throw ParseError(path + ": matrix must be square, got " + std::to_string(rows) + "x" + std::to_string(cols));

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(declared));
    long seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line, '%')) continue;
        std::istringstream ls(line);
        long i, j;
        double w = 1.0;
        if (!(ls >> i >> j)) throw ParseError(path + ":" + std::to_string(lineno) + ": bad entry line");
        if (!pattern && !(ls >> w)) throw ParseError(path + ":" + std::to_string(lineno) + ": missing value");
        if (i < 1 || j < 1 || i > rows || j > rows)
            throw ParseError(path + ":" + std::to_string(lineno) + ": index out of range (indices are 1-based)");
        ++seen;
        edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), w});
        if (symmetric && i != j) edges.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), w});
    }
    if (seen != declared)
        throw ParseError(path + ": header declares " + std::to_string(declared) + " entries, found " + std::to_string(seen));
    return build_graph(static_cast<int>(rows), edges, /*directed=*/true);
}

inline void save_matrix_market(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("save_matrix_market: cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << g.size() << " " << g.size() << " " << g.nonzeros() << "\n";
    char buf[64];
    for (const Edge& e : edge_list(g)) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", e.src + 1, e.dst + 1, e.weight);
        out << buf;
    }
}

/// Reads whitespace-separated lines "i j [w]"; w defaults to 1. The vertex
/// count is max index + 1 unless a "#n=<N>" header is present.
inline WeightedGraph load_edge_list(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_edge_list: cannot open " + path);
    std::vector<Edge> edges;
    int n = 0;
    bool explicit_n = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("#n=", 0) == 0) {
            try {
                n = std::stoi(line.substr(3));
            } catch (const std::exception&) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad #n= header");
            }
            explicit_n = true;
            continue;
        }
        if (detail::blank_or_comment(line, '#')) continue;
        std::istringstream ls(line);
        long i, j;
        double w = 1.0;
        if (!(ls >> i >> j)) throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'i j [w]'");
        ls >> w;
        if (i < 0 || j < 0) throw ParseError(path + ":" + std::to_string(lineno) + ": negative vertex index");
        edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
        if (!explicit_n) n = std::max({n, static_cast<int>(i) + 1, static_cast<int>(j) + 1});
    }
    if (n == 0) throw ParseError(path + ": no edges and no #n= header");
    return build_graph(n, edges, directed);
}

inline void save_edge_list(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("save_edge_list: cannot open " + path + " for writing");
    out << "#n=" << g.size() << "\n";
    char buf[64];
    for (const Edge& e : edge_list(g)) {
        std::snprintf(buf, sizeof(buf), "%d\t%d\t%.17g\n", e.src, e.dst, e.weight);
        out << buf;
    }
}

/// Loads a directory of snapshot_000.tsv, snapshot_001.tsv, ... edge lists.
inline TemporalGraph load_temporal_dir(const std::string& path, bool directed = true) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) throw EmptyDirectory("load_temporal_dir: " + path + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snapshot_", 0) == 0 && name.size() > 4 && name.substr(name.size() - 4) == ".tsv")
            files.push_back(entry.path());
    }
    if (files.empty()) throw EmptyDirectory("load_temporal_dir: no snapshot_*.tsv files in " + path);
    std::sort(files.begin(), files.end());

    TemporalGraph tg;
    for (const auto& f : files) {
        WeightedGraph g = load_edge_list(f.string(), directed);
        if (tg.snapshots.empty()) {
            tg.n = g.size();
        } else if (g.size() != tg.n) {
            throw InconsistentVertexCount("load_temporal_dir: " + f.string() + " has n = " + std::to_string(g.size()) +
                                          ", expected " + std::to_string(tg.n));
        }
        tg.snapshots.push_back(std::move(g));
        tg.times.push_back(static_cast<int>(tg.times.size()));
    }
    return tg;
}

inline void save_temporal_dir(const TemporalGraph& tg, const std::string& path) {
    namespace fs = std::filesystem;
    fs::create_directories(path);
    char name[32];
    for (int t = 0; t < tg.length(); ++t) {
        std::snprintf(name, sizeof(name), "snapshot_%03d.tsv", t);
        save_edge_list(tg.snapshots[static_cast<std::size_t>(t)], (fs::path(path) / name).string());
    }
}

/// Result of loading SocioPatterns-style contact data: one undirected
/// snapshot per day, the id -> dense index map, and per-student class labels.
struct ContactData {
    TemporalGraph graph;
    std::vector<long> vertex_ids;              // dense index -> original id
    std::map<long, int> id_to_index;           // original id -> dense index
    std::vector<std::string> class_of_vertex;  // dense index -> class label
};

/// Parses lines "t i j Ci Cj" and aggregates contact counts per day. The
/// day_boundaries are half-open timestamp ranges [lo, hi); contacts outside
/// every range are ignored. Empty days yield edgeless snapshots.
inline ContactData load_contact_data(const std::string& path, const std::vector<std::pair<long, long>>& day_boundaries) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_contact_data: cannot open " + path);
    if (day_boundaries.empty()) throw InvalidConfig("load_contact_data: no day boundaries given");

    struct Contact {
        long t;
        long i, j;
    };
    std::vector<Contact> contacts;
    std::map<long, std::string> class_of_id;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line, '#')) continue;
        std::istringstream ls(line);
        long t, i, j;
        std::string ci, cj;
        if (!(ls >> t >> i >> j >> ci >> cj))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 't i j Ci Cj'");
        contacts.push_back({t, i, j});
        class_of_id[i] = ci;
        class_of_id[j] = cj;
    }

    ContactData data;
    for (const auto& [id, cls] : class_of_id) {
        data.id_to_index[id] = static_cast<int>(data.vertex_ids.size());
        data.vertex_ids.push_back(id);
        data.class_of_vertex.push_back(cls);
    }
    const int n = static_cast<int>(data.vertex_ids.size());
    if (n == 0) throw ParseError(path + ": no contacts found");

    data.graph.n = n;
    for (const auto& [lo, hi] : day_boundaries) {
        std::vector<Edge> edges;
        for (const Contact& c : contacts) {
            if (c.t < lo || c.t >= hi) continue;
            int a = data.id_to_index.at(c.i);
            int b = data.id_to_index.at(c.j);
            edges.push_back({std::min(a, b), std::max(a, b), 1.0});
        }
        data.graph.snapshots.push_back(build_graph(n, edges, /*directed=*/false));
        data.graph.times.push_back(static_cast<int>(data.graph.times.size()));
    }
    return data;
}

} // namespace coherent
