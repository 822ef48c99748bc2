#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seccorpus/manifest.hpp"

namespace seccorpus {

struct CrawlStageConfig {
    std::string seeds;
    std::uint64_t max_pages = 1000;
    int max_depth = 3;
    std::uint64_t per_domain_delay_ms = 0;
    std::uint64_t max_pages_per_domain = 1000000;
    std::string simulated_web;  // JSON site graph; empty = live HTTP
    unsigned workers = 1;
    bool respect_robots = true;
};

struct ExtractStageConfig {
    std::size_t max_bytes = 8u << 20;
    std::string pdf_command;
};

struct FilterStageConfig {
    std::string lexicon;
    std::string model;  // classifier model file, optional
    double threshold = 0.5;
    bool lang_gate = false;  // off by default for this corpus
    double lang_threshold = 0.65;
    std::string lang_model;      // char-n-gram model file, needed when gated
    bool heuristics = false;     // advisory flags as drops, off by default
    std::string score_endpoint;  // remote scorer base URL, optional
};

struct PrepareStageConfig {
    unsigned ngram = 8;
    double dup_threshold = 0.8;
    std::uint64_t bloom_bits = 1ULL << 24;
    unsigned bloom_k = 7;
    bool scrub_email = true;
    bool scrub_phone = true;
    std::map<std::string, unsigned> upsample;  // tag -> factor
    double split_ratio = 0.99;
    std::string split_salt = "seccorpus";
    std::map<std::string, std::vector<std::string>> tag_url_prefixes;
    bool persist_bloom = true;
};

struct PackStageConfig {
    std::uint32_t seq_len = 4096;
    std::string tokenizer = "byte";  // byte | vocab:FILE
    std::string tail = "pad";        // pad | drop
    std::uint64_t shard_records = 4096;
};

struct EvalStageConfig {
    std::string bench;
    std::string task = "mcqa";  // mcqa | rcm
    std::string mode = "base";  // base | instruct
    std::string endpoint;
    std::string model = "default";
    unsigned trials = 10;
    double temperature = 0.3;
    std::uint64_t seed = 1234;
    unsigned shots = 5;
    unsigned max_tokens = 16;
    std::string format;     // benchmark column-mapping JSON, optional
    std::string dev_bench;  // shot pool file, optional
};

// One structured config file drives a whole run; unknown keys are errors
// and every referenced file must exist at load time.
struct PipelineConfig {
    std::string out_root = "out";
    std::vector<std::string> stages;  // ordered subset of the known stages
    std::string input_dir;            // extract input when crawl is not run

    CrawlStageConfig crawl;
    ExtractStageConfig extract;
    FilterStageConfig filter;
    PrepareStageConfig prepare;
    PackStageConfig pack;
    EvalStageConfig eval;

    static PipelineConfig load(const std::string& path);
    static PipelineConfig from_json_text(const std::string& text, const std::string& base_dir);
};

struct StageRun {
    StageManifest manifest;
    std::string dir;     // versioned stage directory
    bool resumed = false;
};

struct PipelineResult {
    std::vector<StageRun> stages;
    std::vector<StageManifest> manifests() const;
};

// Executes stages in order. Each stage writes records plus manifest.json to
// out_root/<NN_stage>/vK; a rerun opens vK+1, while resume revalidates and
// reuses the newest complete version. Failures leave a FAILED marker and
// halt the pipeline.
PipelineResult run_pipeline(const PipelineConfig& config, bool resume);

// Newest complete version directory of a stage, if any.
std::optional<std::string> latest_stage_dir(const std::string& out_root, const std::string& stage);

// Manifests of the newest complete version of every known stage, pipeline order.
std::vector<StageManifest> collect_manifests(const std::string& out_root);

}  // namespace seccorpus
