#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seccorpus/fetcher.hpp"
#include "seccorpus/frontier.hpp"
#include "seccorpus/store.hpp"

namespace seccorpus {

struct CrawlBudget {
    std::uint64_t max_pages = 1000;
    int max_depth = 3;
    std::uint64_t per_domain_delay_ms = 0;
    std::uint64_t max_pages_per_domain = 1000000;
};

enum class CrawlStatus { ok, http_error, fetch_error, skipped_robots };
enum class Relevance { pass, fail, unevaluated };

const char* crawl_status_name(CrawlStatus status);
const char* relevance_name(Relevance relevance);

struct CrawlRecord {
    std::string url;
    std::string parent_url;  // empty for seeds
    std::uint64_t fetch_timestamp = 0;
    CrawlStatus status = CrawlStatus::fetch_error;
    int http_code = 0;  // set for http_error
    std::string content_type;
    std::string body_ref;  // present iff status == ok
    Relevance relevant = Relevance::unevaluated;

    std::string to_json() const;
    static CrawlRecord from_json(const std::string& line);
};

struct CrawlStats {
    std::uint64_t pages = 0;  // crawl records written
    std::uint64_t ok = 0;
    std::uint64_t http_error = 0;
    std::uint64_t fetch_error = 0;
    std::uint64_t robots_skipped = 0;
    std::uint64_t relevant_pass = 0;
    std::uint64_t relevant_fail = 0;
    std::uint64_t links_pushed = 0;
    std::uint64_t links_duplicate = 0;
    std::uint64_t links_rejected = 0;  // unparsable URLs
    std::uint64_t links_depth_pruned = 0;
    std::uint64_t domain_budget_skipped = 0;
    std::uint64_t bytes_stored = 0;
};

struct CrawlOptions {
    unsigned workers = 1;  // >1 keeps invariants but trades away byte-determinism
    bool respect_robots = true;
    std::string user_agent = "seccorpus/0.1";
};

// Seed-driven crawl over any Fetcher. Pages are stored content-addressed;
// links are extracted only from pages that pass the relevancy function.
// The frontier, visited set and record log sit behind one mutex so pops
// and pushes serialize; fetch and parse run outside it.
class Crawler {
public:
    using RelevancyFn = std::function<bool(const std::string& text)>;

    Crawler(Fetcher& fetcher, RawStore& store, RelevancyFn relevancy, CrawlBudget budget,
            CrawlOptions options = {});

    // Returns false for unparsable or duplicate seeds (counted).
    bool add_seed(const std::string& url);
    std::size_t add_seeds_file(const std::string& path);  // '#' comments, one URL per line

    CrawlStats run();

    const std::vector<CrawlRecord>& records() const { return records_; }
    void write_log(const std::string& path) const;

private:
    struct Impl;
    bool process_one();

    Fetcher& fetcher_;
    RawStore& store_;
    RelevancyFn relevancy_;
    CrawlBudget budget_;
    CrawlOptions options_;

    Frontier frontier_;
    std::map<std::string, std::string> parent_of_;
    std::map<std::string, std::uint64_t> domain_pages_;
    std::map<std::string, std::uint64_t> domain_next_allowed_ms_;
    std::map<std::string, bool> robots_allowed_cache_;  // host#path decision cache
    std::map<std::string, std::string> robots_body_cache_;
    std::vector<CrawlRecord> records_;
    CrawlStats stats_;
    std::uint64_t pages_started_ = 0;
};

}  // namespace seccorpus
