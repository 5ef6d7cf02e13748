#pragma once

#include <json.hpp>
#include <string>

#include "coherent/clustering.hpp"
#include "coherent/metrics.hpp"

namespace coherent {

inline nlohmann::json to_json(const ClusterAssignment& a) {
    nlohmann::json labels = nlohmann::json::array();
    for (int l : a.labels) {
        if (l == UNASSIGNED) {
            labels.push_back(nullptr);
        } else {
            labels.push_back(l);
        }
    }
    nlohmann::json eigenvalues = nlohmann::json::array();
    for (int i = 0; i < a.spectrum.count(); ++i) eigenvalues.push_back(a.spectrum.eigenvalues[i]);
    return {{"k", a.k},
            {"method", a.method == ClusterMethod::KMeans ? "kmeans" : "seba"},
            {"labels", labels},
            {"eigenvalues", eigenvalues}};
}

inline ClusterAssignment assignment_from_json(const nlohmann::json& j) {
    ClusterAssignment a;
    a.k = j.at("k").get<int>();
    a.method = j.at("method").get<std::string>() == "seba" ? ClusterMethod::Seba : ClusterMethod::KMeans;
    for (const auto& l : j.at("labels")) a.labels.push_back(l.is_null() ? UNASSIGNED : l.get<int>());
    if (j.contains("eigenvalues")) {
        const auto& ev = j.at("eigenvalues");
        a.spectrum.eigenvalues.resize(static_cast<Eigen::Index>(ev.size()));
        for (std::size_t i = 0; i < ev.size(); ++i) a.spectrum.eigenvalues[static_cast<Eigen::Index>(i)] = ev[i].get<double>();
    }
    return a;
}

inline nlohmann::json to_json(const LeakageReport& r) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& e : r.per_cluster)
        clusters.push_back({{"cluster", e.cluster}, {"retained", e.retained}, {"leaked", e.leaked}});
    return {{"per_cluster", clusters}, {"overall_retained", r.overall}};
}

inline nlohmann::json to_json(const ConfusionTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < t.counts.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < t.counts.cols(); ++j) row.push_back(t.counts(i, j));
        rows.push_back(row);
    }
    return {{"classes", t.class_names}, {"counts", rows}};
}

/// Aligned-column text rendering of the confusion table.
inline std::string format_confusion_table(const ConfusionTable& t) {
    std::string out;
    std::size_t width = 8;
    for (const auto& name : t.class_names) width = std::max(width, name.size() + 2);
    auto pad = [width](const std::string& s) {
        return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
    };
    out += pad("");
    const int k = static_cast<int>(t.counts.cols()) - 1;
    for (int j = 0; j < k; ++j) out += pad("c" + std::to_string(j));
    out += pad("n/a");
    out += "\n";
    for (int i = 0; i < t.counts.rows(); ++i) {
        out += pad(t.class_names[static_cast<std::size_t>(i)]);
        for (int j = 0; j < t.counts.cols(); ++j) out += pad(std::to_string(t.counts(i, j)));
        out += "\n";
    }
    return out;
}

} // namespace coherent
