#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seccorpus {

// Minimal robots.txt: user-agent groups with Allow/Disallow prefix rules,
// longest-prefix-wins. Rules for "*" apply when no group names our agent.
class RobotsPolicy {
public:
    static RobotsPolicy parse(std::string_view body, std::string_view user_agent);
    static RobotsPolicy allow_all();

    bool is_allowed(std::string_view path) const;

private:
    struct Rule {
        std::string prefix;
        bool allow;
    };
    std::vector<Rule> rules_;
};

}  // namespace seccorpus
