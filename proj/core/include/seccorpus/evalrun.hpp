#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seccorpus/answer_extract.hpp"
#include "seccorpus/evalbench.hpp"
#include "seccorpus/prompts.hpp"

namespace seccorpus {

struct CompletionRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.0;
    unsigned max_tokens = 16;
    std::vector<std::string> stop;
};

class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    // Returns the completion text; throws Error on failure.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

struct ModelEndpoint {
    std::string base_url;  // e.g. http://127.0.0.1:8080
    std::string model_name = "default";
    double temperature = 0.3;  // 0 or 0.3 for replicating runs
    unsigned max_tokens = 16;
    int request_timeout_s = 60;
    unsigned retries = 2;
    std::string completion_path = "/complete";
};

// JSON-over-HTTP completion call:
//   POST {model, prompt, temperature, max_tokens, stop} -> {"text": ...}
class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(const ModelEndpoint& endpoint);
    std::string complete(const CompletionRequest& request) override;

private:
    ModelEndpoint endpoint_;
};

struct EvalSpec {
    EvalTask task = EvalTask::mcqa;
    PromptMode mode = PromptMode::fewshot_base;
    unsigned shots = 5;
    unsigned trials = 10;
    std::uint64_t base_seed = 1234;
    std::string instruction;      // zero-shot override (benchmark-provided)
    unsigned in_flight = 8;       // concurrent requests per trial
    std::string transcripts_dir;  // per-trial transcript files when set
};

struct ItemResult {
    std::string item_id;
    std::string prompt;
    std::string response;
    Extraction extraction;
    std::string gold;
    bool correct = false;
    std::string error;  // "endpoint_error" after exhausted retries
};

struct EvalSummary {
    std::string benchmark;
    std::string model;
    unsigned trials = 0;
    std::vector<double> per_trial_accuracy;
    double mean = 0.0;
    double stddev = 0.0;  // population
    double misformat_rate = 0.0;
    std::uint64_t endpoint_errors = 0;

    std::string to_json() const;
};

// One full evaluation: per trial, fresh shot seeds, bounded-concurrency
// requests, extraction and exact-match scoring. Transcripts, when enabled,
// are written item-ordered (trial_NN.jsonl) so equal seeds and a
// deterministic endpoint give byte-identical files.
EvalSummary run_eval(const std::vector<BenchmarkItem>& items,
                     const std::vector<BenchmarkItem>& shot_pool, CompletionClient& client,
                     const ModelEndpoint& endpoint, const EvalSpec& spec);

// Recount of persisted transcripts: per-trial accuracy plus misformat rate.
struct TranscriptRecount {
    std::vector<double> per_trial_accuracy;
    double misformat_rate = 0.0;
    std::uint64_t items = 0;
};
TranscriptRecount recount_transcripts(const std::string& transcripts_dir);

// Derives the shot seed of (trial, item ordinal) from the base seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t item);

}  // namespace seccorpus
