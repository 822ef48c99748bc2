#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seccorpus/keyword.hpp"

namespace seccorpus {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    double precision() const;  // NaN when tp+fp == 0
    double recall() const;     // NaN when tp+fn == 0
    double f1() const;         // 0 when precision+recall == 0, NaN when undefined

    std::string report(const std::string& title = "") const;
    std::string to_json() const;
};

// Exact tp/fp/fn/tn counts; throws on length mismatch or empty input.
ConfusionMatrix evaluate_filter(const std::vector<bool>& predictions,
                                const std::vector<bool>& labels);

struct HeuristicThresholds {
    std::size_t min_chars = 64;
    double min_alpha_ratio = 0.5;        // alphanumeric / non-whitespace
    double max_repeated_line_fraction = 0.3;
    std::size_t repeated_line_min_lines = 5;
};

enum class HeuristicFlag { too_short, low_alpha_ratio, repeated_line, boilerplate_only };

const char* heuristic_flag_name(HeuristicFlag flag);

// Advisory degeneracy signals; the pipeline leaves them off by default.
std::vector<HeuristicFlag> heuristic_flags(const std::string& text,
                                           const HeuristicThresholds& thresholds = {});

// Out-of-process relevancy scoring: POST {"text": ...} to an HTTP endpoint
// that replies {"score": ...}. Drop-in alternative to the local classifier
// for anyone with a served model.
class RemoteScorer {
public:
    RemoteScorer(const std::string& base_url, const std::string& path = "/score",
                 int timeout_seconds = 30);
    double score(const std::string& text) const;  // throws Error on failure

private:
    std::string base_url_;
    std::string path_;
    int timeout_seconds_;
};

}  // namespace seccorpus
