#include "seccorpus/crawler.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"
#include "seccorpus/extract.hpp"
#include "seccorpus/html.hpp"
#include "seccorpus/log.hpp"
#include "seccorpus/robots.hpp"
#include "seccorpus/url.hpp"

namespace seccorpus {

const char* crawl_status_name(CrawlStatus status) {
    switch (status) {
        case CrawlStatus::ok: return "ok";
        case CrawlStatus::http_error: return "http_error";
        case CrawlStatus::fetch_error: return "fetch_error";
        case CrawlStatus::skipped_robots: return "skipped_robots";
    }
    return "?";
}

const char* relevance_name(Relevance relevance) {
    switch (relevance) {
        case Relevance::pass: return "pass";
        case Relevance::fail: return "fail";
        case Relevance::unevaluated: return "unevaluated";
    }
    return "?";
}

std::string CrawlRecord::to_json() const {
    nlohmann::ordered_json j;
    j["url"] = url;
    if (!parent_url.empty()) j["parent_url"] = parent_url;
    j["fetch_timestamp"] = fetch_timestamp;
    j["status"] = crawl_status_name(status);
    if (status == CrawlStatus::http_error) j["http_code"] = http_code;
    j["content_type"] = content_type;
    if (status == CrawlStatus::ok) j["body_ref"] = body_ref;
    j["relevant"] = relevance_name(relevant);
    return j.dump();
}

CrawlRecord CrawlRecord::from_json(const std::string& line) {
    auto j = nlohmann::json::parse(line);
    CrawlRecord r;
    r.url = j.at("url").get<std::string>();
    r.parent_url = j.value("parent_url", std::string());
    r.fetch_timestamp = j.value("fetch_timestamp", std::uint64_t{0});
    std::string status = j.at("status").get<std::string>();
    if (status == "ok") r.status = CrawlStatus::ok;
    else if (status == "http_error") r.status = CrawlStatus::http_error;
    else if (status == "fetch_error") r.status = CrawlStatus::fetch_error;
    else if (status == "skipped_robots") r.status = CrawlStatus::skipped_robots;
    else throw Error("crawl_log: unknown status " + status);
    r.http_code = j.value("http_code", 0);
    r.content_type = j.value("content_type", std::string());
    r.body_ref = j.value("body_ref", std::string());
    std::string rel = j.value("relevant", std::string("unevaluated"));
    r.relevant = rel == "pass" ? Relevance::pass
               : rel == "fail" ? Relevance::fail
                               : Relevance::unevaluated;
    return r;
}

// Per-crawl synchronization. The frontier, visited bookkeeping, counters and
// record log mutate only under `mutex`; fetches and HTML parsing run outside
// it so workers overlap on network and CPU.
struct Crawler::Impl {
    std::mutex mutex;
    std::condition_variable cv;
    unsigned in_flight = 0;
};

Crawler::Crawler(Fetcher& fetcher, RawStore& store, RelevancyFn relevancy, CrawlBudget budget,
                 CrawlOptions options)
    : fetcher_(fetcher),
      store_(store),
      relevancy_(std::move(relevancy)),
      budget_(budget),
      options_(options) {}

bool Crawler::add_seed(const std::string& url) {
    auto normalized = normalize_url(url, "");
    if (!normalized) {
        ++stats_.links_rejected;
        return false;
    }
    auto parsed = parse_url(*normalized);
    if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) {
        ++stats_.links_rejected;
        return false;
    }
    std::string domain = registrable_domain(parsed->host);
    if (!frontier_.push(*normalized, domain, 0)) {
        ++stats_.links_duplicate;
        return false;
    }
    return true;
}

std::size_t Crawler::add_seeds_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("seeds: cannot open " + path);
    std::size_t added = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
        if (start >= line.size()) continue;
        if (add_seed(line.substr(start))) ++added;
    }
    return added;
}

namespace {

struct ClaimedEntry {
    FrontierEntry entry;
    std::string parent_url;
};

}  // namespace

// Single worker step, split in three phases around the shared lock:
// claim (locked) -> robots/delay/fetch/parse (unlocked) -> commit (locked).
bool Crawler::process_one() {
    // Phase 1: claim the next frontier entry.
    std::optional<FrontierEntry> entry;
    while (true) {
        if (pages_started_ >= budget_.max_pages) return false;
        entry = frontier_.pop();
        if (!entry) return false;
        auto& domain_count = domain_pages_[entry->domain];
        if (domain_count >= budget_.max_pages_per_domain) {
            ++stats_.domain_budget_skipped;
            continue;
        }
        ++domain_count;
        ++pages_started_;
        break;
    }

    const std::string& url = entry->url;
    auto parsed = parse_url(url);

    CrawlRecord record;
    record.url = url;
    if (auto it = parent_of_.find(url); it != parent_of_.end()) record.parent_url = it->second;

    // Robots, fetched once per host, cached for the crawl. Robots requests
    // are out of band: no crawl record, no page budget.
    bool allowed = true;
    if (options_.respect_robots && parsed) {
        std::string host_key = parsed->scheme + "://" + parsed->host +
                               (parsed->port >= 0 ? ":" + std::to_string(parsed->port) : "");
        auto cached = robots_body_cache_.find(host_key);
        if (cached == robots_body_cache_.end()) {
            FetchResult robots = fetcher_.fetch(host_key + "/robots.txt");
            std::string body = robots.ok() ? robots.body : std::string();
            cached = robots_body_cache_.emplace(host_key, std::move(body)).first;
        }
        RobotsPolicy policy = cached->second.empty()
                                  ? RobotsPolicy::allow_all()
                                  : RobotsPolicy::parse(cached->second, options_.user_agent);
        allowed = policy.is_allowed(parsed->path);
    }

    if (!allowed) {
        record.fetch_timestamp = fetcher_.now_utc_seconds();
        record.status = CrawlStatus::skipped_robots;
        records_.push_back(std::move(record));
        ++stats_.pages;
        ++stats_.robots_skipped;
        return true;
    }

    if (budget_.per_domain_delay_ms > 0) {
        auto now_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now().time_since_epoch())
                .count());
        auto& next_allowed = domain_next_allowed_ms_[entry->domain];
        if (now_ms < next_allowed) {
            std::this_thread::sleep_for(std::chrono::milliseconds(next_allowed - now_ms));
            now_ms = next_allowed;
        }
        next_allowed = now_ms + budget_.per_domain_delay_ms;
    }

    FetchResult fetched = fetcher_.fetch(url);
    record.fetch_timestamp = fetcher_.now_utc_seconds();
    record.content_type = fetched.content_type;

    if (fetched.transport_error) {
        record.status = CrawlStatus::fetch_error;
        records_.push_back(std::move(record));
        ++stats_.pages;
        ++stats_.fetch_error;
        return true;
    }
    if (!fetched.ok()) {
        record.status = CrawlStatus::http_error;
        record.http_code = fetched.status_code;
        records_.push_back(std::move(record));
        ++stats_.pages;
        ++stats_.http_error;
        return true;
    }

    record.status = CrawlStatus::ok;
    record.body_ref = store_.put(url, fetched.body, fetched.content_type);
    stats_.bytes_stored += fetched.body.size();

    DetectedFormat format = detect_format(fetched.body, fetched.content_type, url);
    std::string text = format.kind == FormatKind::html ? html_to_markdown(fetched.body)
                                                       : sanitize_utf8(fetched.body);
    bool relevant = relevancy_ ? relevancy_(text) : true;
    record.relevant = relevant ? Relevance::pass : Relevance::fail;

    if (relevant && format.kind == FormatKind::html) {
        for (const std::string& link : extract_links(fetched.body, url)) {
            if (entry->depth + 1 > budget_.max_depth) {
                ++stats_.links_depth_pruned;
                continue;
            }
            auto link_parsed = parse_url(link);
            if (!link_parsed) {
                ++stats_.links_rejected;
                continue;
            }
            std::string domain = registrable_domain(link_parsed->host);
            if (frontier_.push(link, domain, entry->depth + 1)) {
                parent_of_[link] = url;
                ++stats_.links_pushed;
            } else {
                ++stats_.links_duplicate;
            }
        }
    }

    records_.push_back(std::move(record));
    ++stats_.pages;
    ++stats_.ok;
    relevant ? ++stats_.relevant_pass : ++stats_.relevant_fail;
    return true;
}

CrawlStats Crawler::run() {
    if (options_.workers <= 1) {
        while (process_one()) {
        }
        return stats_;
    }

    Impl sync;
    std::vector<std::thread> threads;
    threads.reserve(options_.workers);

    auto worker = [this, &sync] {
        while (true) {
            ClaimedEntry claimed;
            {
                std::unique_lock<std::mutex> lock(sync.mutex);
                std::optional<FrontierEntry> entry;
                while (true) {
                    if (pages_started_ >= budget_.max_pages) {
                        sync.cv.notify_all();
                        return;
                    }
                    entry = frontier_.pop();
                    if (entry) {
                        auto& domain_count = domain_pages_[entry->domain];
                        if (domain_count >= budget_.max_pages_per_domain) {
                            ++stats_.domain_budget_skipped;
                            continue;
                        }
                        ++domain_count;
                        ++pages_started_;
                        break;
                    }
                    if (sync.in_flight == 0) {
                        sync.cv.notify_all();
                        return;
                    }
                    // A page in flight may still push new links.
                    sync.cv.wait(lock);
                }
                ++sync.in_flight;
                claimed.entry = *entry;
                if (auto it = parent_of_.find(entry->url); it != parent_of_.end()) {
                    claimed.parent_url = it->second;
                }
            }

            CrawlRecord record;
            record.url = claimed.entry.url;
            record.parent_url = claimed.parent_url;
            auto parsed = parse_url(claimed.entry.url);

            bool allowed = true;
            if (options_.respect_robots && parsed) {
                std::string host_key =
                    parsed->scheme + "://" + parsed->host +
                    (parsed->port >= 0 ? ":" + std::to_string(parsed->port) : "");
                std::string robots_body;
                bool have_body = false;
                {
                    std::lock_guard<std::mutex> lock(sync.mutex);
                    auto it = robots_body_cache_.find(host_key);
                    if (it != robots_body_cache_.end()) {
                        robots_body = it->second;
                        have_body = true;
                    }
                }
                if (!have_body) {
                    FetchResult robots = fetcher_.fetch(host_key + "/robots.txt");
                    robots_body = robots.ok() ? robots.body : std::string();
                    std::lock_guard<std::mutex> lock(sync.mutex);
                    robots_body_cache_.emplace(host_key, robots_body);
                }
                RobotsPolicy policy = robots_body.empty()
                                          ? RobotsPolicy::allow_all()
                                          : RobotsPolicy::parse(robots_body, options_.user_agent);
                allowed = policy.is_allowed(parsed->path);
            }

            if (allowed && budget_.per_domain_delay_ms > 0) {
                std::uint64_t wake_at;
                {
                    std::lock_guard<std::mutex> lock(sync.mutex);
                    auto now_ms = static_cast<std::uint64_t>(
                        std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now().time_since_epoch())
                            .count());
                    auto& next_allowed = domain_next_allowed_ms_[claimed.entry.domain];
                    wake_at = std::max(now_ms, next_allowed);
                    next_allowed = wake_at + budget_.per_domain_delay_ms;
                }
                auto now_ms = static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now().time_since_epoch())
                        .count());
                if (wake_at > now_ms) {
                    std::this_thread::sleep_for(std::chrono::milliseconds(wake_at - now_ms));
                }
            }

            FetchResult fetched;
            bool fetch_attempted = allowed;
            if (allowed) fetched = fetcher_.fetch(claimed.entry.url);

            // Parse outside the lock; commit under it.
            std::vector<std::string> links;
            bool relevant = false;
            bool is_ok = fetch_attempted && fetched.ok();
            if (is_ok) {
                DetectedFormat format =
                    detect_format(fetched.body, fetched.content_type, claimed.entry.url);
                std::string text = format.kind == FormatKind::html
                                       ? html_to_markdown(fetched.body)
                                       : sanitize_utf8(fetched.body);
                relevant = relevancy_ ? relevancy_(text) : true;
                if (relevant && format.kind == FormatKind::html) {
                    links = extract_links(fetched.body, claimed.entry.url);
                }
            }

            {
                std::lock_guard<std::mutex> lock(sync.mutex);
                record.fetch_timestamp = fetcher_.now_utc_seconds();
                record.content_type = fetched.content_type;
                if (!allowed) {
                    record.status = CrawlStatus::skipped_robots;
                    ++stats_.robots_skipped;
                } else if (fetched.transport_error) {
                    record.status = CrawlStatus::fetch_error;
                    ++stats_.fetch_error;
                } else if (!fetched.ok()) {
                    record.status = CrawlStatus::http_error;
                    record.http_code = fetched.status_code;
                    ++stats_.http_error;
                } else {
                    record.status = CrawlStatus::ok;
                    record.body_ref = store_.put(claimed.entry.url, fetched.body, fetched.content_type);
                    stats_.bytes_stored += fetched.body.size();
                    record.relevant = relevant ? Relevance::pass : Relevance::fail;
                    relevant ? ++stats_.relevant_pass : ++stats_.relevant_fail;
                    ++stats_.ok;
                    for (const std::string& link : links) {
                        if (claimed.entry.depth + 1 > budget_.max_depth) {
                            ++stats_.links_depth_pruned;
                            continue;
                        }
                        auto link_parsed = parse_url(link);
                        if (!link_parsed) {
                            ++stats_.links_rejected;
                            continue;
                        }
                        std::string domain = registrable_domain(link_parsed->host);
                        if (frontier_.push(link, domain, claimed.entry.depth + 1)) {
                            parent_of_[link] = claimed.entry.url;
                            ++stats_.links_pushed;
                        } else {
                            ++stats_.links_duplicate;
                        }
                    }
                }
                records_.push_back(std::move(record));
                ++stats_.pages;
                --sync.in_flight;
                sync.cv.notify_all();
            }
        }
    };

    for (unsigned i = 0; i < options_.workers; ++i) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
    return stats_;
}

void Crawler::write_log(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("crawl_log: cannot write " + path);
    for (const CrawlRecord& record : records_) out << record.to_json() << "\n";
}

}  // namespace seccorpus
