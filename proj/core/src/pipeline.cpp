#include "seccorpus/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "seccorpus/bloom.hpp"
#include "seccorpus/classifier.hpp"
#include "seccorpus/crawler.hpp"
#include "seccorpus/error.hpp"
#include "seccorpus/evalrun.hpp"
#include "seccorpus/extract.hpp"
#include "seccorpus/fetcher.hpp"
#include "seccorpus/filters.hpp"
#include "seccorpus/keyword.hpp"
#include "seccorpus/log.hpp"
#include "seccorpus/pack.hpp"
#include "seccorpus/prepare.hpp"
#include "seccorpus/records.hpp"

namespace seccorpus {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string>& known_stages() {
    static const std::vector<std::string> stages = {"crawl", "extract", "filter",
                                                    "prepare", "pack", "eval"};
    return stages;
}

int stage_ordinal(const std::string& stage) {
    const auto& stages = known_stages();
    auto it = std::find(stages.begin(), stages.end(), stage);
    return it == stages.end() ? -1 : static_cast<int>(it - stages.begin());
}

void require_keys(const nlohmann::json& j, const std::string& section,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        if (allowed.count(key) == 0) {
            throw Error("config: unknown key \"" + key + "\" in section " + section);
        }
    }
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).string();
}

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) return;
    if (!fs::exists(path)) throw Error("config: " + what + " does not exist: " + path);
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text, fs::path(path).parent_path().string());
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text, const std::string& base_dir) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("config: invalid JSON");

    require_keys(j, "<root>",
                 {"out_root", "stages", "input_dir", "crawl", "extract", "filter", "prepare",
                  "pack", "eval"});

    PipelineConfig c;
    c.out_root = resolve_path(base_dir, j.value("out_root", std::string("out")));
    c.input_dir = resolve_path(base_dir, j.value("input_dir", std::string()));

    if (!j.contains("stages") || !j["stages"].is_array() || j["stages"].empty()) {
        throw Error("config: \"stages\" must be a non-empty list");
    }
    int last_ordinal = -1;
    for (const auto& stage : j["stages"]) {
        std::string name = stage.get<std::string>();
        int ordinal = stage_ordinal(name);
        if (ordinal < 0) throw Error("config: unknown stage \"" + name + "\"");
        if (ordinal <= last_ordinal) throw Error("config: stages out of order at \"" + name + "\"");
        last_ordinal = ordinal;
        c.stages.push_back(name);
    }

    if (j.contains("crawl")) {
        const auto& s = j["crawl"];
        require_keys(s, "crawl",
                     {"seeds", "max_pages", "max_depth", "per_domain_delay_ms",
                      "max_pages_per_domain", "simulated_web", "workers", "respect_robots"});
        c.crawl.seeds = resolve_path(base_dir, s.value("seeds", std::string()));
        c.crawl.max_pages = s.value("max_pages", c.crawl.max_pages);
        c.crawl.max_depth = s.value("max_depth", c.crawl.max_depth);
        c.crawl.per_domain_delay_ms = s.value("per_domain_delay_ms", c.crawl.per_domain_delay_ms);
        c.crawl.max_pages_per_domain = s.value("max_pages_per_domain", c.crawl.max_pages_per_domain);
        c.crawl.simulated_web = resolve_path(base_dir, s.value("simulated_web", std::string()));
        c.crawl.workers = s.value("workers", c.crawl.workers);
        c.crawl.respect_robots = s.value("respect_robots", c.crawl.respect_robots);
    }
    if (j.contains("extract")) {
        const auto& s = j["extract"];
        require_keys(s, "extract", {"max_bytes", "pdf_command"});
        c.extract.max_bytes = s.value("max_bytes", c.extract.max_bytes);
        c.extract.pdf_command = s.value("pdf_command", std::string());
    }
    if (j.contains("filter")) {
        const auto& s = j["filter"];
        require_keys(s, "filter",
                     {"lexicon", "model", "threshold", "lang_gate", "lang_threshold", "lang_model",
                      "heuristics", "score_endpoint"});
        c.filter.lexicon = resolve_path(base_dir, s.value("lexicon", std::string()));
        c.filter.model = resolve_path(base_dir, s.value("model", std::string()));
        c.filter.threshold = s.value("threshold", c.filter.threshold);
        c.filter.lang_gate = s.value("lang_gate", c.filter.lang_gate);
        c.filter.lang_threshold = s.value("lang_threshold", c.filter.lang_threshold);
        c.filter.lang_model = resolve_path(base_dir, s.value("lang_model", std::string()));
        c.filter.heuristics = s.value("heuristics", c.filter.heuristics);
        c.filter.score_endpoint = s.value("score_endpoint", std::string());
    }
    if (j.contains("prepare")) {
        const auto& s = j["prepare"];
        require_keys(s, "prepare",
                     {"ngram", "dup_threshold", "bloom_bits", "bloom_k", "scrub_email",
                      "scrub_phone", "upsample", "split_ratio", "split_salt", "tag_url_prefixes",
                      "persist_bloom"});
        c.prepare.ngram = s.value("ngram", c.prepare.ngram);
        c.prepare.dup_threshold = s.value("dup_threshold", c.prepare.dup_threshold);
        c.prepare.bloom_bits = s.value("bloom_bits", c.prepare.bloom_bits);
        c.prepare.bloom_k = s.value("bloom_k", c.prepare.bloom_k);
        c.prepare.scrub_email = s.value("scrub_email", c.prepare.scrub_email);
        c.prepare.scrub_phone = s.value("scrub_phone", c.prepare.scrub_phone);
        if (s.contains("upsample")) {
            c.prepare.upsample = s["upsample"].get<std::map<std::string, unsigned>>();
            for (const auto& [tag, factor] : c.prepare.upsample) {
                if (factor < 1) throw Error("config: upsample factor for " + tag + " must be >= 1");
            }
        }
        c.prepare.split_ratio = s.value("split_ratio", c.prepare.split_ratio);
        c.prepare.split_salt = s.value("split_salt", c.prepare.split_salt);
        if (s.contains("tag_url_prefixes")) {
            c.prepare.tag_url_prefixes =
                s["tag_url_prefixes"].get<std::map<std::string, std::vector<std::string>>>();
        }
        c.prepare.persist_bloom = s.value("persist_bloom", c.prepare.persist_bloom);
    }
    if (j.contains("pack")) {
        const auto& s = j["pack"];
        require_keys(s, "pack", {"seq_len", "tokenizer", "tail", "shard_records"});
        c.pack.seq_len = s.value("seq_len", c.pack.seq_len);
        c.pack.tokenizer = s.value("tokenizer", c.pack.tokenizer);
        c.pack.tail = s.value("tail", c.pack.tail);
        if (c.pack.tail != "pad" && c.pack.tail != "drop") {
            throw Error("config: pack.tail must be pad or drop");
        }
        c.pack.shard_records = s.value("shard_records", c.pack.shard_records);
    }
    if (j.contains("eval")) {
        const auto& s = j["eval"];
        require_keys(s, "eval",
                     {"bench", "task", "mode", "endpoint", "model", "trials", "temperature",
                      "seed", "shots", "max_tokens", "format", "dev_bench"});
        c.eval.bench = resolve_path(base_dir, s.value("bench", std::string()));
        c.eval.task = s.value("task", c.eval.task);
        c.eval.mode = s.value("mode", c.eval.mode);
        c.eval.endpoint = s.value("endpoint", std::string());
        c.eval.model = s.value("model", c.eval.model);
        c.eval.trials = s.value("trials", c.eval.trials);
        c.eval.temperature = s.value("temperature", c.eval.temperature);
        c.eval.seed = s.value("seed", c.eval.seed);
        c.eval.shots = s.value("shots", c.eval.shots);
        c.eval.max_tokens = s.value("max_tokens", c.eval.max_tokens);
        c.eval.format = resolve_path(base_dir, s.value("format", std::string()));
        c.eval.dev_bench = resolve_path(base_dir, s.value("dev_bench", std::string()));
        if (c.eval.task != "mcqa" && c.eval.task != "rcm") {
            throw Error("config: eval.task must be mcqa or rcm");
        }
        if (c.eval.mode != "base" && c.eval.mode != "instruct") {
            throw Error("config: eval.mode must be base or instruct");
        }
    }

    // Referenced files must exist up front; a failure mid-pipeline wastes a run.
    for (const std::string& stage : c.stages) {
        if (stage == "crawl") {
            if (c.crawl.seeds.empty()) throw Error("config: crawl stage requires crawl.seeds");
            require_file(c.crawl.seeds, "crawl.seeds");
            require_file(c.crawl.simulated_web, "crawl.simulated_web");
        } else if (stage == "filter") {
            if (c.filter.lexicon.empty()) throw Error("config: filter stage requires filter.lexicon");
            require_file(c.filter.lexicon, "filter.lexicon");
            require_file(c.filter.model, "filter.model");
            require_file(c.filter.lang_model, "filter.lang_model");
            if (c.filter.lang_gate && c.filter.lang_model.empty()) {
                throw Error("config: filter.lang_gate requires filter.lang_model");
            }
        } else if (stage == "pack") {
            if (c.pack.tokenizer.rfind("vocab:", 0) == 0) {
                require_file(c.pack.tokenizer.substr(6), "pack.tokenizer vocab file");
            } else if (c.pack.tokenizer != "byte") {
                throw Error("config: pack.tokenizer must be byte or vocab:FILE");
            }
        } else if (stage == "eval") {
            if (c.eval.bench.empty()) throw Error("config: eval stage requires eval.bench");
            require_file(c.eval.bench, "eval.bench");
            require_file(c.eval.format, "eval.format");
            require_file(c.eval.dev_bench, "eval.dev_bench");
            if (c.eval.endpoint.empty()) throw Error("config: eval stage requires eval.endpoint");
        } else if (stage == "extract") {
            bool crawl_feeds = std::find(c.stages.begin(), c.stages.end(), std::string("crawl")) !=
                               c.stages.end();
            if (!crawl_feeds && c.input_dir.empty()) {
                throw Error("config: extract without crawl requires input_dir");
            }
            if (!c.input_dir.empty()) require_file(c.input_dir, "input_dir");
        }
    }
    return c;
}

namespace {

std::string stage_base_dir(const std::string& out_root, const std::string& stage) {
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%02d_", stage_ordinal(stage) + 1);
    return (fs::path(out_root) / (prefix + stage)).string();
}

bool version_complete(const fs::path& dir) {
    if (!fs::exists(dir / "manifest.json") || fs::exists(dir / "FAILED")) return false;
    try {
        StageManifest manifest = StageManifest::load((dir / "manifest.json").string());
        for (const std::string& output : manifest.outputs) {
            if (!fs::exists(dir / output)) return false;
        }
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::optional<fs::path> latest_complete_version(const std::string& base) {
    if (!fs::exists(base)) return std::nullopt;
    int best = -1;
    for (const auto& entry : fs::directory_iterator(base)) {
        std::string name = entry.path().filename().string();
        if (name.size() < 2 || name[0] != 'v') continue;
        int version = std::atoi(name.c_str() + 1);
        if (version > best && version_complete(entry.path())) best = version;
    }
    if (best < 0) return std::nullopt;
    return fs::path(base) / ("v" + std::to_string(best));
}

fs::path next_version_dir(const std::string& base) {
    int best = 0;
    if (fs::exists(base)) {
        for (const auto& entry : fs::directory_iterator(base)) {
            std::string name = entry.path().filename().string();
            if (name.size() >= 2 && name[0] == 'v') best = std::max(best, std::atoi(name.c_str() + 1));
        }
    }
    fs::path dir = fs::path(base) / ("v" + std::to_string(best + 1));
    fs::create_directories(dir);
    return dir;
}

struct StageTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::uint64_t elapsed_ms() const {
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - start)
                                              .count());
    }
};

StageManifest run_crawl_stage(const PipelineConfig& config, const fs::path& dir) {
    StageTimer timer;
    SimulatedWebFetcher simulated;
    HttpFetcher live;
    Fetcher* active = nullptr;
    if (!config.crawl.simulated_web.empty()) {
        simulated = SimulatedWebFetcher::load(config.crawl.simulated_web);
        active = &simulated;
    } else {
        active = &live;
    }

    RawStore store(dir.string());
    KeywordLexicon lexicon = KeywordLexicon::load(config.filter.lexicon);
    KeywordMatcher matcher(lexicon);

    CrawlBudget budget;
    budget.max_pages = config.crawl.max_pages;
    budget.max_depth = config.crawl.max_depth;
    budget.per_domain_delay_ms = config.crawl.per_domain_delay_ms;
    budget.max_pages_per_domain = config.crawl.max_pages_per_domain;

    CrawlOptions options;
    options.workers = config.crawl.workers;
    options.respect_robots = config.crawl.respect_robots;

    Crawler crawler(
        *active, store, [&matcher](const std::string& text) { return matcher.matches_any(text); },
        budget, options);
    crawler.add_seeds_file(config.crawl.seeds);
    CrawlStats stats = crawler.run();
    crawler.write_log((dir / "crawl_log.jsonl").string());

    StageManifest manifest;
    manifest.stage_name = "crawl";
    manifest.docs_in = stats.pages;
    manifest.docs_kept = stats.ok;
    if (stats.http_error > 0) manifest.dropped["http_error"] = stats.http_error;
    if (stats.fetch_error > 0) manifest.dropped["fetch_error"] = stats.fetch_error;
    if (stats.robots_skipped > 0) manifest.dropped["skipped_robots"] = stats.robots_skipped;
    manifest.bytes_in = stats.bytes_stored;
    manifest.bytes_out = stats.bytes_stored;
    manifest.extras["relevant_pass"] = static_cast<std::int64_t>(stats.relevant_pass);
    manifest.extras["relevant_fail"] = static_cast<std::int64_t>(stats.relevant_fail);
    manifest.extras["links_pushed"] = static_cast<std::int64_t>(stats.links_pushed);
    manifest.extras["links_duplicate"] = static_cast<std::int64_t>(stats.links_duplicate);
    manifest.extras["links_rejected"] = static_cast<std::int64_t>(stats.links_rejected);
    manifest.outputs = {"crawl_log.jsonl", "raw_index.jsonl"};
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

StageManifest run_extract_stage(const PipelineConfig& config, const fs::path& dir,
                                const std::optional<std::string>& crawl_dir) {
    StageTimer timer;
    ExtractConfig extract_config;
    extract_config.max_bytes = config.extract.max_bytes;
    extract_config.external_pdf_command = config.extract.pdf_command;

    struct Input {
        std::string url;
        std::string content_type;
        std::string body;
    };
    std::vector<Input> inputs;

    if (crawl_dir) {
        RawStore store(*crawl_dir);
        // The crawl log carries relevancy; extract everything stored (the
        // filter stage re-judges full text anyway).
        for (const auto& entry : RawStore::read_index(*crawl_dir)) {
            auto body = store.get(entry.body_ref);
            if (!body) continue;
            inputs.push_back({entry.url, entry.content_type, std::move(*body)});
        }
    } else {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(config.input_dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            std::ifstream in(file, std::ios::binary);
            if (!in) continue;
            std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            inputs.push_back({file.string(), "", std::move(body)});
        }
    }

    StageManifest manifest;
    manifest.stage_name = "extract";
    std::vector<DocRecord> records;
    for (const Input& input : inputs) {
        ++manifest.docs_in;
        manifest.bytes_in += input.body.size();
        ExtractOutcome outcome =
            extract_text(input.body, input.content_type, input.url, extract_config);
        if (!outcome.kept()) {
            manifest.drop(outcome.drop_reason);
            continue;
        }
        ++manifest.docs_kept;
        manifest.bytes_out += outcome.doc->text.size();
        DocRecord record;
        record.doc_id = outcome.doc->doc_id;
        record.source_url = outcome.doc->source_url;
        record.text = outcome.doc->text;
        records.push_back(std::move(record));
    }
    write_records((dir / "records.jsonl").string(), records);
    manifest.outputs = {"records.jsonl"};
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

StageManifest run_filter_stage(const PipelineConfig& config, const fs::path& dir,
                               const std::string& input_records) {
    StageTimer timer;
    KeywordLexicon lexicon = KeywordLexicon::load(config.filter.lexicon);
    KeywordMatcher matcher(lexicon);

    std::optional<LinearTextClassifier> classifier;
    if (!config.filter.model.empty()) {
        classifier = LinearTextClassifier::load(config.filter.model);
    }
    std::optional<LinearTextClassifier> lang_model;
    if (config.filter.lang_gate) {
        lang_model = LinearTextClassifier::load(config.filter.lang_model);
    }
    std::optional<RemoteScorer> remote;
    if (!config.filter.score_endpoint.empty()) {
        remote.emplace(config.filter.score_endpoint);
    }

    StageManifest manifest;
    manifest.stage_name = "filter";
    std::vector<DocRecord> kept;
    for (const DocRecord& record : read_records(input_records)) {
        ++manifest.docs_in;
        manifest.bytes_in += record.text.size();

        FilterVerdict keyword = keyword_filter(matcher, record.text);
        if (!keyword.passed) {
            manifest.drop("keyword");
            continue;
        }
        if (classifier) {
            FilterVerdict verdict = classify(*classifier, record.text, config.filter.threshold);
            if (!verdict.passed) {
                manifest.drop("classifier");
                continue;
            }
        }
        if (remote) {
            double score = remote->score(record.text);
            if (score < config.filter.threshold) {
                manifest.drop("remote_classifier");
                continue;
            }
        }
        if (lang_model) {
            double score = language_score(*lang_model, record.text);
            if (score < config.filter.lang_threshold) {
                manifest.drop("language");
                continue;
            }
        }
        if (config.filter.heuristics) {
            auto flags = heuristic_flags(record.text);
            if (!flags.empty()) {
                manifest.drop(std::string("heuristic_") + heuristic_flag_name(flags.front()));
                continue;
            }
        }
        ++manifest.docs_kept;
        manifest.bytes_out += record.text.size();
        kept.push_back(record);
    }
    write_records((dir / "records.jsonl").string(), kept);
    manifest.outputs = {"records.jsonl"};
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

StageManifest run_prepare_stage(const PipelineConfig& config, const fs::path& dir,
                                const std::string& input_records) {
    StageTimer timer;
    PrepareConfig prepare_config;
    prepare_config.ngram_words = config.prepare.ngram;
    prepare_config.dup_threshold = config.prepare.dup_threshold;
    prepare_config.scrub_email = config.prepare.scrub_email;
    prepare_config.scrub_phone = config.prepare.scrub_phone;
    prepare_config.upsample_factors = config.prepare.upsample;
    prepare_config.split_ratio = config.prepare.split_ratio;
    prepare_config.split_salt = config.prepare.split_salt;

    BloomFilter bloom(config.prepare.bloom_bits, config.prepare.bloom_k);

    StageManifest manifest;
    manifest.stage_name = "prepare";
    std::int64_t paragraphs_in = 0;
    std::int64_t paragraphs_dropped = 0;
    std::int64_t pii_replacements = 0;

    std::vector<PreparedDoc> survivors;
    for (const DocRecord& record : read_records(input_records)) {
        ++manifest.docs_in;
        manifest.bytes_in += record.text.size();

        DedupResult dedup = dedup_document(bloom, record.text, prepare_config);
        paragraphs_in += static_cast<std::int64_t>(dedup.paragraphs_in);
        paragraphs_dropped +=
            static_cast<std::int64_t>(dedup.paragraphs_in - dedup.paragraphs_kept);
        if (dedup.text.empty()) {
            manifest.drop("duplicate");
            continue;
        }

        ScrubResult scrubbed = scrub_pii(dedup.text, prepare_config);
        for (const auto& [category, count] : scrubbed.replacements) {
            pii_replacements += static_cast<std::int64_t>(count);
        }

        PreparedDoc doc;
        doc.doc_id = record.doc_id;
        doc.text = std::move(scrubbed.text);
        doc.tags = record.tags;
        for (const auto& [tag, prefixes] : config.prepare.tag_url_prefixes) {
            for (const std::string& prefix : prefixes) {
                if (record.source_url.rfind(prefix, 0) == 0 &&
                    std::find(doc.tags.begin(), doc.tags.end(), tag) == doc.tags.end()) {
                    doc.tags.push_back(tag);
                }
            }
        }
        ++manifest.docs_kept;
        survivors.push_back(std::move(doc));
    }

    std::vector<PreparedDoc> replicated = upsample(survivors, prepare_config);

    std::vector<DocRecord> out_records;
    out_records.reserve(replicated.size());
    for (const PreparedDoc& doc : replicated) {
        DocRecord record;
        record.doc_id = doc.doc_id;
        record.text = doc.text;
        record.tags = doc.tags;
        record.replica = doc.replica;
        record.bucket = split_bucket_name(
            assign_split(doc.doc_id, prepare_config.split_ratio, prepare_config.split_salt));
        manifest.bytes_out += record.text.size();
        out_records.push_back(std::move(record));
    }
    write_records((dir / "records.jsonl").string(), out_records);
    manifest.outputs = {"records.jsonl"};
    if (config.prepare.persist_bloom) {
        bloom.save((dir / "bloom.bin").string());
        manifest.outputs.push_back("bloom.bin");
    }
    manifest.extras["paragraphs_in"] = paragraphs_in;
    manifest.extras["paragraphs_dropped"] = paragraphs_dropped;
    manifest.extras["pii_replacements"] = pii_replacements;
    manifest.extras["records_out"] = static_cast<std::int64_t>(out_records.size());
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

StageManifest run_pack_stage(const PipelineConfig& config, const fs::path& dir,
                             const std::string& input_records) {
    StageTimer timer;
    auto tokenizer = make_tokenizer(config.pack.tokenizer);
    TailPolicy tail = config.pack.tail == "drop" ? TailPolicy::drop : TailPolicy::pad;

    StageManifest manifest;
    manifest.stage_name = "pack";

    std::vector<DocRecord> records = read_records(input_records);
    std::set<std::string> buckets;
    for (const DocRecord& record : records) buckets.insert(record.bucket);

    std::vector<TokenRecord> token_records;
    std::uint64_t sequences = 0;
    for (const std::string& bucket : buckets) {
        std::string sub = bucket.empty() ? "all" : bucket;
        ShardWriter writer((dir / sub).string(), config.pack.seq_len, config.pack.shard_records);
        SequencePacker packer(config.pack.seq_len, tokenizer->eos_id(), tail);
        auto emit = [&writer, &sequences](PackedSequence&& seq) {
            writer.write(seq);
            ++sequences;
        };
        for (const DocRecord& record : records) {
            if (record.bucket != bucket) continue;
            std::vector<TokenId> ids = tokenizer->tokenize(record.text);
            token_records.push_back({bucket, ids.size()});
            std::string span_id = record.doc_id;
            if (record.replica > 0) span_id += "#" + std::to_string(record.replica);
            packer.add_document(span_id, ids, emit);
        }
        packer.finish(emit);
        writer.close();
    }

    CorpusTokenStats stats = corpus_token_stats(token_records);
    for (const DocRecord& record : records) {
        ++manifest.docs_in;
        ++manifest.docs_kept;
        manifest.bytes_in += record.text.size();
    }
    manifest.bytes_out = sequences * config.pack.seq_len * sizeof(TokenId);
    manifest.extras["sequences"] = static_cast<std::int64_t>(sequences);
    manifest.extras["total_tokens"] = static_cast<std::int64_t>(stats.total_tokens);
    for (const auto& [bucket, tokens] : stats.tokens_by_bucket) {
        manifest.extras["tokens_" + (bucket.empty() ? std::string("all") : bucket)] =
            static_cast<std::int64_t>(tokens);
    }

    nlohmann::ordered_json stats_json;
    stats_json["total_tokens"] = stats.total_tokens;
    stats_json["total_docs"] = stats.total_docs;
    stats_json["tokens_by_bucket"] = stats.tokens_by_bucket;
    stats_json["docs_by_bucket"] = stats.docs_by_bucket;
    std::ofstream stats_out(dir / "stats.json", std::ios::trunc);
    stats_out << stats_json.dump(2) << "\n";

    manifest.outputs = {"stats.json"};
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

StageManifest run_eval_stage(const PipelineConfig& config, const fs::path& dir) {
    StageTimer timer;
    EvalTask task = config.eval.task == "rcm" ? EvalTask::rcm : EvalTask::mcqa;
    BenchmarkFormat format;
    if (!config.eval.format.empty()) format = BenchmarkFormat::load(config.eval.format);
    BenchmarkLoadResult bench = load_benchmark(config.eval.bench, task, format);

    std::vector<BenchmarkItem> pool;
    if (!config.eval.dev_bench.empty()) {
        pool = load_benchmark(config.eval.dev_bench, task, format).items;
    }

    ModelEndpoint endpoint;
    endpoint.base_url = config.eval.endpoint;
    endpoint.model_name = config.eval.model;
    endpoint.temperature = config.eval.temperature;
    endpoint.max_tokens = config.eval.max_tokens;

    EvalSpec spec;
    spec.task = task;
    spec.mode = config.eval.mode == "instruct" ? PromptMode::zeroshot_instruct
                                               : PromptMode::fewshot_base;
    spec.shots = config.eval.shots;
    spec.trials = config.eval.trials;
    spec.base_seed = config.eval.seed;
    spec.instruction = format.instruction;
    spec.transcripts_dir = (dir / "transcripts").string();

    HttpCompletionClient client(endpoint);
    EvalSummary summary = run_eval(bench.items, pool, client, endpoint, spec);
    summary.benchmark = config.eval.bench;

    std::ofstream out(dir / "summary.json", std::ios::trunc);
    out << summary.to_json() << "\n";

    StageManifest manifest;
    manifest.stage_name = "eval";
    manifest.docs_in = bench.items.size();
    manifest.docs_kept = bench.items.size();
    manifest.extras["trials"] = static_cast<std::int64_t>(summary.trials);
    manifest.extras["mean_accuracy_ppm"] = static_cast<std::int64_t>(summary.mean * 1e6);
    manifest.extras["endpoint_errors"] = static_cast<std::int64_t>(summary.endpoint_errors);
    manifest.outputs = {"summary.json"};
    manifest.wall_time_ms = timer.elapsed_ms();
    return manifest;
}

}  // namespace

std::optional<std::string> latest_stage_dir(const std::string& out_root, const std::string& stage) {
    auto dir = latest_complete_version(stage_base_dir(out_root, stage));
    if (!dir) return std::nullopt;
    return dir->string();
}

std::vector<StageManifest> collect_manifests(const std::string& out_root) {
    std::vector<StageManifest> manifests;
    for (const std::string& stage : known_stages()) {
        auto dir = latest_stage_dir(out_root, stage);
        if (dir) manifests.push_back(StageManifest::load((fs::path(*dir) / "manifest.json").string()));
    }
    return manifests;
}

PipelineResult run_pipeline(const PipelineConfig& config, bool resume) {
    PipelineResult result;
    std::optional<std::string> crawl_dir;
    std::string previous_records;

    for (const std::string& stage : config.stages) {
        std::string base = stage_base_dir(config.out_root, stage);

        if (resume) {
            auto existing = latest_complete_version(base);
            if (existing) {
                StageRun run;
                run.dir = existing->string();
                run.manifest = StageManifest::load((*existing / "manifest.json").string());
                run.resumed = true;
                log_info("stage " + stage + ": resumed from " + run.dir);
                if (stage == "crawl") crawl_dir = run.dir;
                if (stage == "extract" || stage == "filter" || stage == "prepare") {
                    previous_records = (*existing / "records.jsonl").string();
                }
                result.stages.push_back(std::move(run));
                continue;
            }
        }

        fs::path dir = next_version_dir(base);
        log_info("stage " + stage + ": running in " + dir.string());
        StageManifest manifest;
        try {
            if (stage == "crawl") {
                manifest = run_crawl_stage(config, dir);
                crawl_dir = dir.string();
            } else if (stage == "extract") {
                manifest = run_extract_stage(config, dir, crawl_dir);
                previous_records = (dir / "records.jsonl").string();
            } else if (stage == "filter") {
                if (previous_records.empty()) throw Error("pipeline: filter has no input records");
                manifest = run_filter_stage(config, dir, previous_records);
                previous_records = (dir / "records.jsonl").string();
            } else if (stage == "prepare") {
                if (previous_records.empty()) throw Error("pipeline: prepare has no input records");
                manifest = run_prepare_stage(config, dir, previous_records);
                previous_records = (dir / "records.jsonl").string();
            } else if (stage == "pack") {
                if (previous_records.empty()) throw Error("pipeline: pack has no input records");
                manifest = run_pack_stage(config, dir, previous_records);
            } else if (stage == "eval") {
                manifest = run_eval_stage(config, dir);
            }
            manifest.save((dir / "manifest.json").string());
        } catch (const std::exception& e) {
            std::ofstream marker(dir / "FAILED", std::ios::trunc);
            marker << e.what() << "\n";
            throw Error("stage " + stage + " failed: " + e.what());
        }

        StageRun run;
        run.dir = dir.string();
        run.manifest = std::move(manifest);
        result.stages.push_back(std::move(run));
    }
    return result;
}

std::vector<StageManifest> PipelineResult::manifests() const {
    std::vector<StageManifest> out;
    out.reserve(stages.size());
    for (const StageRun& run : stages) out.push_back(run.manifest);
    return out;
}

}  // namespace seccorpus
