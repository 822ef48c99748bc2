#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace seccorpus {

struct FrontierEntry {
    std::string url;
    std::string domain;  // registrable domain of url
    int depth = 0;       // seeds are 0
    std::uint64_t discovered_seq = 0;
};

// Hybrid crawl ordering: breadth-first inside a domain, depth-first across
// domains. Each domain keeps a queue ordered by (depth, discovered_seq). A
// stack of domains decides which queue is active: the top stays active until
// it drains. Seeds enter at the bottom so they are visited in seed order;
// domains discovered mid-crawl slot in directly below the active one, which
// makes the most recently discovered pending domain the next to run.
class Frontier {
public:
    // Assigns the global discovery sequence number. Returns false when the
    // URL was already enqueued or visited (caller counts it as a dup).
    bool push(const std::string& url, const std::string& domain, int depth);

    std::optional<FrontierEntry> pop();

    bool empty() const;
    std::size_t pending() const { return pending_; }
    bool seen(const std::string& url) const { return seen_.count(url) > 0; }
    std::uint64_t next_seq() const { return next_seq_; }

private:
    struct QueueKey {
        int depth;
        std::uint64_t seq;
        bool operator<(const QueueKey& o) const {
            return depth != o.depth ? depth < o.depth : seq < o.seq;
        }
    };

    std::unordered_map<std::string, std::map<QueueKey, FrontierEntry>> queues_;
    std::vector<std::string> stack_;  // back = active domain
    std::unordered_set<std::string> on_stack_;
    std::unordered_set<std::string> seen_;
    std::uint64_t next_seq_ = 0;
    std::size_t pending_ = 0;
};

}  // namespace seccorpus
