#include "seccorpus/evalrun.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"
#include "seccorpus/hash.hpp"
#include "seccorpus/log.hpp"

namespace seccorpus {

namespace fs = std::filesystem;

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t item) {
    std::uint64_t key[3] = {base_seed, trial, item};
    return hash64(key, sizeof(key), 0xe5a1ULL);
}

HttpCompletionClient::HttpCompletionClient(const ModelEndpoint& endpoint) : endpoint_(endpoint) {}

std::string HttpCompletionClient::complete(const CompletionRequest& request) {
    nlohmann::ordered_json body;
    body["model"] = request.model;
    body["prompt"] = request.prompt;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    if (!request.stop.empty()) body["stop"] = request.stop;
    std::string payload = body.dump();

    std::string last_error;
    for (unsigned attempt = 0; attempt <= endpoint_.retries; ++attempt) {
        httplib::Client client(endpoint_.base_url);
        client.set_connection_timeout(endpoint_.request_timeout_s);
        client.set_read_timeout(endpoint_.request_timeout_s);
        auto res = client.Post(endpoint_.completion_path, payload, "application/json");
        if (!res) {
            last_error = "no response";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        auto parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("text") || !parsed["text"].is_string()) {
            last_error = "malformed response body";
            continue;
        }
        return parsed["text"].get<std::string>();
    }
    throw Error("endpoint_error: " + last_error + " from " + endpoint_.base_url);
}

std::string EvalSummary::to_json() const {
    nlohmann::ordered_json j;
    j["benchmark"] = benchmark;
    j["model"] = model;
    j["trials"] = trials;
    j["per_trial_accuracy"] = per_trial_accuracy;
    j["mean"] = mean;
    j["std"] = stddev;
    j["misformat_rate"] = misformat_rate;
    j["endpoint_errors"] = endpoint_errors;
    return j.dump();
}

namespace {

bool score_item(const BenchmarkItem& item, const Extraction& extraction) {
    if (!extraction.value) return false;
    return *extraction.value == item.gold;
}

void write_transcript(const std::string& dir, unsigned trial,
                      const std::vector<ItemResult>& results) {
    fs::create_directories(dir);
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%02u.jsonl", trial);
    std::ofstream out(fs::path(dir) / name, std::ios::trunc);
    if (!out) throw Error("transcripts: cannot write " + (fs::path(dir) / name).string());
    for (const ItemResult& r : results) {
        nlohmann::ordered_json j;
        j["trial"] = trial;
        j["item_id"] = r.item_id;
        j["prompt"] = r.prompt;
        j["response"] = r.response;
        if (r.extraction.value) j["extracted"] = *r.extraction.value;
        j["misformatted"] = r.extraction.misformatted;
        j["pattern"] = r.extraction.pattern_used;
        j["gold"] = r.gold;
        j["correct"] = r.correct;
        if (!r.error.empty()) j["error"] = r.error;
        out << j.dump() << "\n";
    }
}

}  // namespace

EvalSummary run_eval(const std::vector<BenchmarkItem>& items,
                     const std::vector<BenchmarkItem>& shot_pool, CompletionClient& client,
                     const ModelEndpoint& endpoint, const EvalSpec& spec) {
    if (items.empty()) throw Error("run_eval: no items");
    if (spec.trials < 1) throw Error("run_eval: trials must be >= 1");

    const std::vector<BenchmarkItem>& pool = shot_pool.empty() ? items : shot_pool;

    EvalSummary summary;
    summary.model = endpoint.model_name;
    summary.trials = spec.trials;

    std::uint64_t misformatted_total = 0;
    std::atomic<std::uint64_t> endpoint_errors{0};

    for (unsigned trial = 0; trial < spec.trials; ++trial) {
        std::vector<ItemResult> results(items.size());
        std::atomic<std::size_t> next_item{0};

        auto worker = [&] {
            while (true) {
                std::size_t i = next_item.fetch_add(1);
                if (i >= items.size()) return;
                const BenchmarkItem& item = items[i];
                ItemResult& r = results[i];
                r.item_id = item.item_id;
                r.gold = item.gold;

                PromptSpec prompt_spec;
                prompt_spec.mode = spec.mode;
                prompt_spec.shots = spec.shots;
                prompt_spec.instruction = spec.instruction;
                prompt_spec.rng_seed = derive_seed(spec.base_seed, trial, i);

                CompletionRequest request;
                request.model = endpoint.model_name;
                request.temperature = endpoint.temperature;
                request.max_tokens = endpoint.max_tokens;
                if (spec.mode == PromptMode::fewshot_base) {
                    r.prompt = build_fewshot_prompt(item, pool, prompt_spec);
                    // Keeps base models from continuing with invented questions.
                    request.stop = {"\n\n"};
                } else {
                    r.prompt = build_zeroshot_prompt(item, prompt_spec);
                }
                request.prompt = r.prompt;

                try {
                    r.response = client.complete(request);
                    r.extraction = spec.task == EvalTask::mcqa ? extract_mcqa_answer(r.response)
                                                               : extract_cwe_answer(r.response);
                    r.correct = score_item(item, r.extraction);
                } catch (const Error&) {
                    r.error = "endpoint_error";
                    r.correct = false;
                    r.extraction.pattern_used = "none";
                    endpoint_errors.fetch_add(1);
                }
            }
        };

        unsigned workers = std::max(1u, std::min<unsigned>(spec.in_flight,
                                                           static_cast<unsigned>(items.size())));
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();

        std::uint64_t correct = 0;
        for (const ItemResult& r : results) {
            if (r.correct) ++correct;
            if (r.error.empty() && r.extraction.misformatted) ++misformatted_total;
        }
        double accuracy = static_cast<double>(correct) / static_cast<double>(items.size());
        summary.per_trial_accuracy.push_back(accuracy);

        if (!spec.transcripts_dir.empty()) write_transcript(spec.transcripts_dir, trial, results);
        log_info("trial " + std::to_string(trial) + " accuracy " + std::to_string(accuracy));
    }

    double sum = 0.0;
    for (double a : summary.per_trial_accuracy) sum += a;
    summary.mean = sum / static_cast<double>(summary.trials);
    double var = 0.0;
    for (double a : summary.per_trial_accuracy) var += (a - summary.mean) * (a - summary.mean);
    summary.stddev = std::sqrt(var / static_cast<double>(summary.trials));
    summary.misformat_rate = static_cast<double>(misformatted_total) /
                             static_cast<double>(items.size() * spec.trials);
    summary.endpoint_errors = endpoint_errors.load();
    return summary;
}

TranscriptRecount recount_transcripts(const std::string& transcripts_dir) {
    TranscriptRecount recount;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(transcripts_dir)) {
        if (entry.path().extension() == ".jsonl" &&
            entry.path().filename().string().rfind("trial_", 0) == 0) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::uint64_t misformatted = 0;
    for (const fs::path& file : files) {
        std::ifstream in(file);
        std::uint64_t correct = 0;
        std::uint64_t total = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line);
            ++total;
            if (j.value("correct", false)) ++correct;
            if (!j.contains("error") && j.value("misformatted", false)) ++misformatted;
        }
        if (total > 0) {
            recount.per_trial_accuracy.push_back(static_cast<double>(correct) /
                                                 static_cast<double>(total));
            recount.items += total;
        }
    }
    if (recount.items > 0) {
        recount.misformat_rate = static_cast<double>(misformatted) / static_cast<double>(recount.items);
    }
    return recount;
}

}  // namespace seccorpus
