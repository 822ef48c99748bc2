#include "seccorpus/fetcher.hpp"

#include <chrono>
#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"
#include "seccorpus/url.hpp"

namespace seccorpus {

HttpFetcher::HttpFetcher(int timeout_seconds, std::string user_agent)
    : timeout_seconds_(timeout_seconds), user_agent_(std::move(user_agent)) {}

std::uint64_t HttpFetcher::now_utc_seconds() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

FetchResult HttpFetcher::fetch(const std::string& url) {
    FetchResult result;
    auto parsed = parse_url(url);
    if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) {
        result.transport_error = true;
        return result;
    }
    std::string origin = parsed->scheme + "://" + parsed->host;
    if (parsed->port >= 0) origin += ":" + std::to_string(parsed->port);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    client.set_follow_location(true);
    client.set_default_headers({{"User-Agent", user_agent_}});

    std::string target = parsed->path.empty() ? "/" : parsed->path;
    if (!parsed->query.empty()) target += "?" + parsed->query;

    auto res = client.Get(target);
    if (!res) {
        result.transport_error = true;
        return result;
    }
    result.status_code = res->status;
    result.content_type = res->get_header_value("Content-Type");
    result.body = res->body;
    return result;
}

SimulatedWebFetcher SimulatedWebFetcher::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("simulated_web: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("pages") || !j["pages"].is_object()) {
        throw Error("simulated_web: expected {\"pages\": {url: {...}}} in " + path);
    }
    SimulatedWebFetcher fetcher;
    for (const auto& [url, page] : j["pages"].items()) {
        fetcher.add_page(url, page.value("status", 200),
                         page.value("content_type", std::string("text/html")),
                         page.value("body", std::string()));
    }
    return fetcher;
}

void SimulatedWebFetcher::add_page(const std::string& url, int status,
                                   const std::string& content_type, const std::string& body) {
    pages_[url] = Page{status, content_type, body};
}

FetchResult SimulatedWebFetcher::fetch(const std::string& url) {
    ++clock_;
    ++fetches_;
    FetchResult result;
    auto it = pages_.find(url);
    if (it == pages_.end()) {
        result.status_code = 404;
        result.content_type = "text/plain";
        return result;
    }
    if (it->second.status < 0) {  // negative status simulates transport failure
        result.transport_error = true;
        return result;
    }
    result.status_code = it->second.status;
    result.content_type = it->second.content_type;
    result.body = it->second.body;
    return result;
}

}  // namespace seccorpus
