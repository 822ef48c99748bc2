#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace seccorpus {

// Per-stage accounting. The conservation identity docs_in = docs_kept +
// sum(dropped) is enforced on save and load; an imbalanced manifest is a
// hard error anywhere in the pipeline.
struct StageManifest {
    std::string stage_name;
    std::uint64_t docs_in = 0;
    std::uint64_t docs_kept = 0;
    std::map<std::string, std::uint64_t> dropped;  // reason -> count
    std::uint64_t bytes_in = 0;
    std::uint64_t bytes_out = 0;
    std::uint64_t wall_time_ms = 0;
    std::map<std::string, std::int64_t> extras;
    std::vector<std::string> outputs;  // stage files, validated on resume

    void drop(const std::string& reason, std::uint64_t count = 1) { dropped[reason] += count; }
    std::uint64_t dropped_total() const;
    bool balanced() const { return docs_in == docs_kept + dropped_total(); }

    std::string to_json() const;
    static StageManifest from_json(const std::string& text);

    void save(const std::string& path) const;  // throws on imbalance
    static StageManifest load(const std::string& path);
};

// Human-readable per-stage table plus cumulative document/byte yield (the
// product of stage yields); "n/a" on zero input.
std::string render_yield_report(const std::vector<StageManifest>& manifests);

// Single machine-readable record for the same numbers.
std::string yield_report_json(const std::vector<StageManifest>& manifests);

// Cumulative document yield as a fraction; negative when undefined.
double cumulative_doc_yield(const std::vector<StageManifest>& manifests);

}  // namespace seccorpus
