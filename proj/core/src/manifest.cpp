#include "seccorpus/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

std::uint64_t StageManifest::dropped_total() const {
    std::uint64_t total = 0;
    for (const auto& [reason, count] : dropped) total += count;
    return total;
}

std::string StageManifest::to_json() const {
    nlohmann::ordered_json j;
    j["stage"] = stage_name;
    j["docs_in"] = docs_in;
    j["docs_kept"] = docs_kept;
    j["dropped"] = dropped;
    j["bytes_in"] = bytes_in;
    j["bytes_out"] = bytes_out;
    j["wall_time_ms"] = wall_time_ms;
    if (!extras.empty()) j["extras"] = extras;
    if (!outputs.empty()) j["outputs"] = outputs;
    return j.dump(2);
}

StageManifest StageManifest::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("manifest: invalid JSON");
    StageManifest m;
    m.stage_name = j.at("stage").get<std::string>();
    m.docs_in = j.at("docs_in").get<std::uint64_t>();
    m.docs_kept = j.at("docs_kept").get<std::uint64_t>();
    if (j.contains("dropped")) {
        m.dropped = j["dropped"].get<std::map<std::string, std::uint64_t>>();
    }
    m.bytes_in = j.value("bytes_in", std::uint64_t{0});
    m.bytes_out = j.value("bytes_out", std::uint64_t{0});
    m.wall_time_ms = j.value("wall_time_ms", std::uint64_t{0});
    if (j.contains("extras")) m.extras = j["extras"].get<std::map<std::string, std::int64_t>>();
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
    if (!m.balanced()) {
        throw Error("manifest_imbalance: stage " + m.stage_name + " docs_in != docs_kept + dropped");
    }
    return m;
}

void StageManifest::save(const std::string& path) const {
    if (!balanced()) {
        throw Error("manifest_imbalance: stage " + stage_name + " docs_in != docs_kept + dropped");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("manifest: cannot write " + path);
    out << to_json() << "\n";
}

StageManifest StageManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("manifest: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

double cumulative_doc_yield(const std::vector<StageManifest>& manifests) {
    double yield = 1.0;
    bool defined = false;
    for (const StageManifest& m : manifests) {
        if (m.docs_in == 0) return -1.0;
        yield *= static_cast<double>(m.docs_kept) / static_cast<double>(m.docs_in);
        defined = true;
    }
    return defined ? yield : -1.0;
}

std::string render_yield_report(const std::vector<StageManifest>& manifests) {
    std::ostringstream out;
    out << "stage        docs_in   docs_kept     dropped    bytes_in   bytes_out   yield\n";
    char buf[160];
    for (const StageManifest& m : manifests) {
        if (m.docs_in > 0) {
            std::snprintf(buf, sizeof(buf), "%-10s %9llu   %9llu   %9llu  %10llu  %10llu  %6.1f%%\n",
                          m.stage_name.c_str(), static_cast<unsigned long long>(m.docs_in),
                          static_cast<unsigned long long>(m.docs_kept),
                          static_cast<unsigned long long>(m.dropped_total()),
                          static_cast<unsigned long long>(m.bytes_in),
                          static_cast<unsigned long long>(m.bytes_out),
                          100.0 * static_cast<double>(m.docs_kept) / static_cast<double>(m.docs_in));
        } else {
            std::snprintf(buf, sizeof(buf), "%-10s %9llu   %9llu   %9llu  %10llu  %10llu     n/a\n",
                          m.stage_name.c_str(), static_cast<unsigned long long>(m.docs_in),
                          static_cast<unsigned long long>(m.docs_kept),
                          static_cast<unsigned long long>(m.dropped_total()),
                          static_cast<unsigned long long>(m.bytes_in),
                          static_cast<unsigned long long>(m.bytes_out));
        }
        out << buf;
    }
    double yield = cumulative_doc_yield(manifests);
    if (yield >= 0.0) {
        std::snprintf(buf, sizeof(buf), "cumulative document yield: %.4f%%\n", 100.0 * yield);
        out << buf;
    } else {
        out << "cumulative document yield: n/a\n";
    }
    return out.str();
}

std::string yield_report_json(const std::vector<StageManifest>& manifests) {
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const StageManifest& m : manifests) {
        nlohmann::ordered_json stage;
        stage["stage"] = m.stage_name;
        stage["docs_in"] = m.docs_in;
        stage["docs_kept"] = m.docs_kept;
        stage["dropped"] = m.dropped;
        stage["bytes_in"] = m.bytes_in;
        stage["bytes_out"] = m.bytes_out;
        if (m.docs_in > 0) {
            stage["yield"] = static_cast<double>(m.docs_kept) / static_cast<double>(m.docs_in);
        }
        stages.push_back(stage);
    }
    nlohmann::ordered_json j;
    j["stages"] = stages;
    double yield = cumulative_doc_yield(manifests);
    if (yield >= 0.0) j["cumulative_doc_yield"] = yield;
    else j["cumulative_doc_yield"] = nullptr;
    return j.dump();
}

}  // namespace seccorpus
