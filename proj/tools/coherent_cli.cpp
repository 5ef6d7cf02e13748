// Command-line front end: clustering, benchmark generation, leakage
// evaluation, and the eigenvalue convergence study.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coherent/coherent.hpp"
#include "coherent/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Manifest {
    std::string command;
    json parameters;
    std::uint64_t seed = 0;
    json input_digests = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    json finish() const {
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return {{"command", command}, {"parameters", parameters}, {"seed", seed},
                {"input_digests", input_digests}, {"library_version", kVersion}, {"wall_time_ms", ms}};
    }
};

std::string fnv1a_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

void digest_input(Manifest& m, const std::string& path) {
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) m.input_digests[e.path().filename().string()] = fnv1a_digest(e.path().string());
    } else {
        m.input_digests[fs::path(path).filename().string()] = fnv1a_digest(path);
    }
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw coherent::ParseError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

std::vector<std::pair<long, long>> parse_day_boundaries(const std::string& spec) {
    std::vector<std::pair<long, long>> days;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw coherent::InvalidConfig("--day-boundaries: expected lo:hi pairs");
        days.emplace_back(std::stol(item.substr(0, colon)), std::stol(item.substr(colon + 1)));
    }
    return days;
}

int threads_from_env(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("COHERENT_GRAPHS_THREADS")) return std::atoi(env);
    return 0;
}

struct ClusterArgs {
    std::string input;
    std::string format = "edgelist";
    int k = 0;
    std::string method = "kmeans";
    std::string mode = "directed";
    double self_loops = 1.0;
    double epsilon = 1e-8;
    std::size_t walks = 0;
    int walk_length = 0;
    std::uint64_t seed = 0;
    std::string out = "assignment.json";
    std::string day_boundaries;
    int threads = 0;
};

int run_cluster(const ClusterArgs& args) {
    using namespace coherent;
    Eigen::setNbThreads(threads_from_env(args.threads));
    Manifest manifest;
    manifest.command = "cluster";
    manifest.seed = args.seed;
    manifest.parameters = {{"input", args.input},   {"format", args.format}, {"k", args.k},
                           {"method", args.method}, {"mode", args.mode},     {"self_loops", args.self_loops},
                           {"epsilon", args.epsilon}, {"walks", args.walks}, {"walk_length", args.walk_length}};
    digest_input(manifest, args.input);

    if (args.mode == "temporal-a" && (args.walks == 0 || args.walk_length == 0)) {
        std::cerr << "error: --mode temporal-a requires --walks and --walk-length\n";
        return 1;
    }

    const ClusterMethod method = args.method == "seba" ? ClusterMethod::Seba : ClusterMethod::KMeans;

    std::optional<TemporalGraph> temporal;
    std::optional<WeightedGraph> graph;
    if (args.format == "temporal-dir") {
        temporal = load_temporal_dir(args.input);
    } else if (args.format == "contacts") {
        if (args.day_boundaries.empty()) {
            std::cerr << "error: --format contacts requires --day-boundaries\n";
            return 1;
        }
        temporal = load_contact_data(args.input, parse_day_boundaries(args.day_boundaries)).graph;
    } else if (args.format == "mm") {
        graph = load_matrix_market(args.input);
    } else {
        graph = load_edge_list(args.input, /*directed=*/args.mode != "undirected");
    }

    if ((args.mode == "temporal-a" || args.mode == "temporal-b") && !temporal) {
        if (!graph) {
            std::cerr << "error: temporal mode requires a temporal input\n";
            return 1;
        }
        temporal = TemporalGraph{graph->size(), {*graph}, {0}};
    }

    // pick k from the eigengap when not given
    int k = args.k;
    SpectralDecomposition probe;
    auto spectrum_for_probe = [&](int want) -> SpectralDecomposition {
        if (args.mode == "undirected") {
            StochasticMatrix p = transition_matrix(*graph);
            return eigs_undirected_rw(p, out_degrees(*graph), want, args.seed);
        }
        StochasticMatrix p = args.mode == "directed"
                                 ? transition_matrix(add_self_loops(*graph, args.self_loops))
                                 : temporal_transition_matrix(*temporal, args.self_loops);
        StochasticMatrix q = forward_backward_matrix(p);
        return top_eigs_symmetric(q.matrix, want, args.seed);
    };
    if (k == 0) {
        const int n = graph ? graph->size() : temporal->n;
        probe = spectrum_for_probe(std::min(n, 12));
        k = suggest_k(probe.eigenvalues);
        std::cout << "eigengap suggestion: k = " << k << "\n";
    }

    ClusterAssignment assignment;
    if (args.mode == "undirected") {
        assignment = cluster_undirected(*graph, k, method, args.seed);
    } else if (args.mode == "directed") {
        assignment = cluster_directed(*graph, k, method, args.seed, args.self_loops);
    } else if (args.mode == "temporal-a") {
        assignment = cluster_temporal(*temporal, k, method, ApproachA{args.walks, args.walk_length, args.epsilon},
                                      args.self_loops, args.seed);
    } else {
        assignment = cluster_temporal(*temporal, k, method, ApproachB{}, args.self_loops, args.seed);
    }

    json out = to_json(assignment);
    out["manifest"] = manifest.finish();
    write_json(out, args.out);

    std::ofstream csv(args.out + ".eigenvalues.csv");
    csv << "index,eigenvalue\n";
    for (int i = 0; i < assignment.spectrum.count(); ++i) csv << i << "," << assignment.spectrum.eigenvalues[i] << "\n";
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct BenchmarkArgs {
    std::string name;
    std::string out = ".";
    std::uint64_t seed = 0;
    int blocks = 10;
    int block_size = 10;
    double intra_density = 0.5;
    int inter_edges = 2;
    int total_steps = 100;
    int gyre_steps = 20;
    int boxes = 10;
    int points = 16;
};

int run_benchmark(const BenchmarkArgs& args) {
    using namespace coherent;
    Manifest manifest;
    manifest.command = "benchmark";
    manifest.seed = args.seed;
    manifest.parameters = {{"name", args.name}, {"out", args.out}};
    fs::create_directories(args.out);

    if (args.name == "three-ring") {
        save_edge_list(three_ring_graph(), (fs::path(args.out) / "three_ring.tsv").string());
    } else if (args.name == "blocks") {
        auto [g, truth] = random_block_digraph(args.blocks, args.block_size, args.intra_density, args.inter_edges, args.seed);
        save_edge_list(g, (fs::path(args.out) / "blocks.tsv").string());
        json gt = {{"labels", truth}, {"manifest", manifest.finish()}};
        write_json(gt, (fs::path(args.out) / "ground_truth.json").string());
    } else if (args.name == "double-well") {
        DoubleWellConfig cfg;
        cfg.total_steps = args.total_steps;
        save_temporal_dir(rotating_double_well(cfg), args.out);
        json gt = {{"gray_vertices_t0", double_well_gray_vertices(cfg, 0)}, {"manifest", manifest.finish()}};
        write_json(gt, (fs::path(args.out) / "ground_truth.json").string());
    } else if (args.name == "gyre") {
        GyreConfig cfg;
        cfg.steps = args.gyre_steps;
        cfg.boxes_per_axis = args.boxes;
        cfg.points_per_box = args.points;
        auto [tg, centers] = quadruple_gyre_graph(cfg);
        save_temporal_dir(tg, args.out);
        json c = json::array();
        for (const auto& p : centers) c.push_back({p.x, p.y});
        write_json({{"box_centers", c}, {"manifest", manifest.finish()}}, (fs::path(args.out) / "box_centers.json").string());
    } else {
        std::cerr << "error: unknown benchmark '" << args.name << "'\n";
        return 1;
    }
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct LeakageArgs {
    std::string input;
    std::string labels;
    double self_loops = 1.0;
    std::string out = "leakage.json";
};

int run_leakage(const LeakageArgs& args) {
    using namespace coherent;
    Manifest manifest;
    manifest.command = "leakage";
    manifest.parameters = {{"input", args.input}, {"labels", args.labels}, {"self_loops", args.self_loops}};
    digest_input(manifest, args.input);
    digest_input(manifest, args.labels);

    TemporalGraph tg = load_temporal_dir(args.input);
    std::ifstream lin(args.labels);
    if (!lin) throw ParseError("cannot open " + args.labels);
    json lj;
    lin >> lj;
    ClusterAssignment assignment = assignment_from_json(lj);
    if (assignment.size() != tg.n) {
        std::cerr << "error: --labels length " << assignment.size() << " does not match vertex count " << tg.n << "\n";
        return 1;
    }

    StochasticMatrix p = temporal_transition_matrix(tg, args.self_loops);
    StochasticMatrix q = forward_backward_matrix(p);
    LeakageReport report = coherence_ratio(q, assignment);
    auto series = forward_mass(tg, assignment, args.self_loops);

    json out = to_json(report);
    out["manifest"] = manifest.finish();
    write_json(out, args.out);

    // per-time retained mass within each cluster's initial vertex set
    std::ofstream csv(args.out + ".mass.csv");
    csv << "t";
    for (int c = 0; c < assignment.k; ++c) csv << ",cluster_" << c;
    csv << "\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        csv << t;
        for (int c = 0; c < assignment.k; ++c) {
            double retained = 0.0;
            for (int i = 0; i < tg.n; ++i)
                if (assignment.labels[static_cast<std::size_t>(i)] == c) retained += series[t](i, c);
            csv << "," << retained;
        }
        csv << "\n";
    }
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct ConvergenceArgs {
    std::string m_grid = "500,1000,2000,5000";
    int trials = 10;
    int walk_length = 100;
    double epsilon = 1e-8;
    double self_loops = 1.0;
    std::uint64_t seed = 0;
    std::string out = "convergence.csv";
};

int run_convergence(const ConvergenceArgs& args) {
    using namespace coherent;
    std::vector<std::size_t> grid;
    std::istringstream ss(args.m_grid);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stoul(item));
    if (grid.empty()) {
        std::cerr << "error: --m-grid is empty\n";
        return 1;
    }

    TemporalGraph tg = rotating_double_well();
    std::vector<StochasticMatrix> schedule;
    for (const WeightedGraph& g : tg.snapshots) schedule.push_back(transition_matrix(add_self_loops(g, args.self_loops)));

    auto rows = convergence_study(schedule, grid, args.walk_length, args.trials, args.seed,
                                  Regularization::tikhonov(args.epsilon));
    std::ofstream csv(args.out);
    if (!csv) throw ParseError("cannot open " + args.out + " for writing");
    csv << "m,mean_error,std_error\n";
    for (const auto& row : rows) csv << row.m << "," << row.mean_error << "," << row.std_error << "\n";
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral clustering of directed and time-evolving graphs"};
    app.require_subcommand(1);

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster", "Cluster a graph or snapshot sequence");
    cluster->add_option("input", cluster_args.input, "Input file or directory")->required();
    cluster->add_option("--format", cluster_args.format, "Input format")
        ->check(CLI::IsMember({"mm", "edgelist", "temporal-dir", "contacts"}));
    cluster->add_option("--k", cluster_args.k, "Number of clusters (0 = eigengap suggestion)");
    cluster->add_option("--method", cluster_args.method)->check(CLI::IsMember({"kmeans", "seba"}));
    cluster->add_option("--mode", cluster_args.mode)
        ->check(CLI::IsMember({"undirected", "directed", "temporal-a", "temporal-b"}));
    cluster->add_option("--self-loops", cluster_args.self_loops, "Self-loop regularization weight");
    cluster->add_option("--epsilon", cluster_args.epsilon, "Tikhonov regularization (temporal-a)");
    cluster->add_option("--walks", cluster_args.walks, "Number of random walkers (temporal-a)");
    cluster->add_option("--walk-length", cluster_args.walk_length, "Walk length (temporal-a)");
    cluster->add_option("--seed", cluster_args.seed, "RNG seed");
    cluster->add_option("--out", cluster_args.out, "Output JSON path");
    cluster->add_option("--day-boundaries", cluster_args.day_boundaries, "lo:hi[,lo:hi...] for contacts format");
    cluster->add_option("--threads", cluster_args.threads, "Thread cap (default: COHERENT_GRAPHS_THREADS)");

    BenchmarkArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "Generate a benchmark graph");
    bench->add_option("name", bench_args.name, "three-ring | blocks | double-well | gyre")->required();
    bench->add_option("--out", bench_args.out, "Output directory");
    bench->add_option("--seed", bench_args.seed);
    bench->add_option("--blocks", bench_args.blocks);
    bench->add_option("--block-size", bench_args.block_size);
    bench->add_option("--intra-density", bench_args.intra_density);
    bench->add_option("--inter-edges", bench_args.inter_edges);
    bench->add_option("--total-steps", bench_args.total_steps, "double-well schedule length");
    bench->add_option("--gyre-steps", bench_args.gyre_steps);
    bench->add_option("--boxes", bench_args.boxes);
    bench->add_option("--points", bench_args.points);

    LeakageArgs leak_args;
    auto* leak = app.add_subcommand("leakage", "Coherence and forward-mass evaluation");
    leak->add_option("input", leak_args.input, "Temporal snapshot directory")->required();
    leak->add_option("--labels", leak_args.labels, "ClusterAssignment JSON")->required();
    leak->add_option("--self-loops", leak_args.self_loops);
    leak->add_option("--out", leak_args.out);

    ConvergenceArgs conv_args;
    auto* conv = app.add_subcommand("convergence", "Second-eigenvalue convergence study (double-well)");
    conv->add_option("--m-grid", conv_args.m_grid, "Comma-separated walker counts");
    conv->add_option("--trials", conv_args.trials);
    conv->add_option("--walk-length", conv_args.walk_length);
    conv->add_option("--epsilon", conv_args.epsilon);
    conv->add_option("--self-loops", conv_args.self_loops);
    conv->add_option("--seed", conv_args.seed);
    conv->add_option("--out", conv_args.out);

    try {
        app.parse(argc, argv);
        if (cluster->parsed()) return run_cluster(cluster_args);
        if (bench->parsed()) return run_benchmark(bench_args);
        if (leak->parsed()) return run_leakage(leak_args);
        if (conv->parsed()) return run_convergence(conv_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const coherent::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const coherent::EmptyDirectory& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const coherent::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
