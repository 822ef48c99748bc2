#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

namespace seccorpus {

struct FetchResult {
    bool transport_error = false;  // DNS/connect/timeout failure, no response
    int status_code = 0;
    std::string content_type;
    std::string body;

    bool ok() const { return !transport_error && status_code >= 200 && status_code < 300; }
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual FetchResult fetch(const std::string& url) = 0;
    // Monotone timestamp for crawl records; the simulated web uses a logical
    // counter so test crawls are byte-identical across runs.
    virtual std::uint64_t now_utc_seconds() = 0;
};

// Live HTTP(S) fetcher.
class HttpFetcher final : public Fetcher {
public:
    explicit HttpFetcher(int timeout_seconds = 20, std::string user_agent = "seccorpus/0.1");
    FetchResult fetch(const std::string& url) override;
    std::uint64_t now_utc_seconds() override;

private:
    int timeout_seconds_;
    std::string user_agent_;
};

// Deterministic in-memory web for tests and offline runs. File format:
//   {"pages": {"http://a.test/": {"status": 200, "content_type": "text/html",
//              "body": "..."}, ...}}
// Unlisted URLs return 404. Fetches advance a logical clock by one second.
class SimulatedWebFetcher final : public Fetcher {
public:
    static SimulatedWebFetcher load(const std::string& path);

    void add_page(const std::string& url, int status, const std::string& content_type,
                  const std::string& body);
    FetchResult fetch(const std::string& url) override;
    std::uint64_t now_utc_seconds() override { return clock_; }

    std::uint64_t fetch_count() const { return fetches_; }

private:
    struct Page {
        int status;
        std::string content_type;
        std::string body;
    };
    std::map<std::string, Page> pages_;
    std::uint64_t clock_ = 0;
    std::uint64_t fetches_ = 0;
};

}  // namespace seccorpus
