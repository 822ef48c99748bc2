#include "seccorpus/robots.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace seccorpus {

namespace {

std::string trim(std::string s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

RobotsPolicy RobotsPolicy::allow_all() { return RobotsPolicy{}; }

RobotsPolicy RobotsPolicy::parse(std::string_view body, std::string_view user_agent) {
    std::string agent = lower(std::string(user_agent));

    std::vector<Rule> star_rules;
    std::vector<Rule> agent_rules;
    bool group_matches_star = false;
    bool group_matches_agent = false;
    bool saw_agent_group = false;
    bool in_agent_lines = false;  // consecutive user-agent lines share a group

    std::istringstream lines{std::string(body)};
    std::string raw;
    while (std::getline(lines, raw)) {
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string field = lower(trim(line.substr(0, colon)));
        std::string value = trim(line.substr(colon + 1));

        if (field == "user-agent") {
            if (!in_agent_lines) {
                group_matches_star = false;
                group_matches_agent = false;
            }
            in_agent_lines = true;
            std::string v = lower(value);
            if (v == "*") group_matches_star = true;
            if (!agent.empty() && !v.empty() && v != "*" && agent.find(v) != std::string::npos) {
                group_matches_agent = true;
                saw_agent_group = true;
            }
        } else if (field == "allow" || field == "disallow") {
            in_agent_lines = false;
            if (value.empty() && field == "disallow") continue;  // "Disallow:" means allow all
            Rule rule{value, field == "allow"};
            if (group_matches_agent) agent_rules.push_back(rule);
            else if (group_matches_star) star_rules.push_back(rule);
        } else {
            in_agent_lines = false;
        }
    }

    RobotsPolicy policy;
    policy.rules_ = saw_agent_group ? std::move(agent_rules) : std::move(star_rules);
    return policy;
}

bool RobotsPolicy::is_allowed(std::string_view path) const {
    if (path.empty()) path = "/";
    std::size_t best_len = 0;
    bool allowed = true;
    for (const Rule& rule : rules_) {
        if (rule.prefix.size() <= path.size() &&
            path.compare(0, rule.prefix.size(), rule.prefix) == 0) {
            if (rule.prefix.size() >= best_len) {
                best_len = rule.prefix.size();
                allowed = rule.allow;
            }
        }
    }
    return allowed;
}

}  // namespace seccorpus
