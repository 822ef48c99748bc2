#include "seccorpus/filters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

double ConfusionMatrix::precision() const {
    if (tp + fp == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double ConfusionMatrix::recall() const {
    if (tp + fn == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionMatrix::f1() const {
    double p = precision();
    double r = recall();
    if (std::isnan(p) || std::isnan(r)) return std::numeric_limits<double>::quiet_NaN();
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

std::string ConfusionMatrix::report(const std::string& title) const {
    std::ostringstream out;
    if (!title.empty()) out << title << "\n";
    out << "                 predicted+  predicted-\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  actual+  %10llu  %10llu\n",
                  static_cast<unsigned long long>(tp), static_cast<unsigned long long>(fn));
    out << buf;
    std::snprintf(buf, sizeof(buf), "  actual-  %10llu  %10llu\n",
                  static_cast<unsigned long long>(fp), static_cast<unsigned long long>(tn));
    out << buf;
    std::snprintf(buf, sizeof(buf), "  precision %.4f  recall %.4f  f1 %.4f  n %llu\n",
                  precision(), recall(), f1(), static_cast<unsigned long long>(total()));
    out << buf;
    return out.str();
}

std::string ConfusionMatrix::to_json() const {
    nlohmann::ordered_json j{{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}};
    double p = precision();
    double r = recall();
    double f = f1();
    if (!std::isnan(p)) j["precision"] = p;
    if (!std::isnan(r)) j["recall"] = r;
    if (!std::isnan(f)) j["f1"] = f;
    return j.dump();
}

ConfusionMatrix evaluate_filter(const std::vector<bool>& predictions,
                                const std::vector<bool>& labels) {
    if (predictions.size() != labels.size()) {
        throw Error("evaluate_filter: predictions and labels differ in length");
    }
    if (predictions.empty()) throw Error("evaluate_filter: empty input");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (labels[i]) {
            predictions[i] ? ++m.tp : ++m.fn;
        } else {
            predictions[i] ? ++m.fp : ++m.tn;
        }
    }
    return m;
}

const char* heuristic_flag_name(HeuristicFlag flag) {
    switch (flag) {
        case HeuristicFlag::too_short: return "too_short";
        case HeuristicFlag::low_alpha_ratio: return "low_alpha_ratio";
        case HeuristicFlag::repeated_line: return "repeated_line";
        case HeuristicFlag::boilerplate_only: return "boilerplate_only";
    }
    return "?";
}

namespace {

const std::regex& boilerplate_line_re() {
    // Lines that are navigation/footer chrome when they stand alone.
    static const std::regex re(
        R"(^\s*(home|about( us)?|contact( us)?|login|sign (in|up)|privacy policy|terms of (use|service)|cookie[s]? (policy|notice)|copyright.*|all rights reserved\.?|menu|search|subscribe|follow us)\s*$)",
        std::regex::icase);
    return re;
}

}  // namespace

std::vector<HeuristicFlag> heuristic_flags(const std::string& text,
                                           const HeuristicThresholds& thresholds) {
    std::vector<HeuristicFlag> flags;
    if (text.size() < thresholds.min_chars) {
        flags.push_back(HeuristicFlag::too_short);
        return flags;
    }

    std::size_t alnum = 0;
    std::size_t non_ws = 0;
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) continue;
        ++non_ws;
        if (std::isalnum(c)) ++alnum;
    }
    if (non_ws > 0 &&
        static_cast<double>(alnum) / static_cast<double>(non_ws) < thresholds.min_alpha_ratio) {
        flags.push_back(HeuristicFlag::low_alpha_ratio);
    }

    std::vector<std::string> lines;
    {
        std::istringstream stream(text);
        std::string line;
        while (std::getline(stream, line)) {
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
            std::size_t start = 0;
            while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
            if (start < line.size()) lines.push_back(line.substr(start));
        }
    }

    if (lines.size() >= thresholds.repeated_line_min_lines) {
        std::unordered_map<std::string, std::size_t> line_counts;
        std::size_t max_count = 0;
        for (const std::string& line : lines) max_count = std::max(max_count, ++line_counts[line]);
        if (static_cast<double>(max_count) / static_cast<double>(lines.size()) >
            thresholds.max_repeated_line_fraction) {
            flags.push_back(HeuristicFlag::repeated_line);
        }
    }

    if (!lines.empty()) {
        std::size_t content_chars = 0;
        for (const std::string& line : lines) {
            if (!std::regex_match(line, boilerplate_line_re())) content_chars += line.size();
        }
        if (content_chars < thresholds.min_chars) flags.push_back(HeuristicFlag::boilerplate_only);
    }
    return flags;
}

RemoteScorer::RemoteScorer(const std::string& base_url, const std::string& path,
                           int timeout_seconds)
    : base_url_(base_url), path_(path), timeout_seconds_(timeout_seconds) {}

double RemoteScorer::score(const std::string& text) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    nlohmann::json body{{"text", text}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) throw Error("remote_scorer: no response from " + base_url_);
    if (res->status != 200) {
        throw Error("remote_scorer: HTTP " + std::to_string(res->status) + " from " + base_url_);
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("score") || !parsed["score"].is_number()) {
        throw Error("remote_scorer: malformed response body");
    }
    return parsed["score"].get<double>();
}

}  // namespace seccorpus
