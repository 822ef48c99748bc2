#include "seccorpus/frontier.hpp"

namespace seccorpus {

bool Frontier::push(const std::string& url, const std::string& domain, int depth) {
    if (!seen_.insert(url).second) return false;

    auto& queue = queues_[domain];
    if (queue.empty() && on_stack_.count(domain) == 0) {
        if (stack_.empty()) {
            stack_.push_back(domain);
        } else if (depth == 0) {
            stack_.insert(stack_.begin(), domain);
        } else {
            stack_.insert(stack_.end() - 1, domain);
        }
        on_stack_.insert(domain);
    }

    FrontierEntry entry{url, domain, depth, next_seq_++};
    queue.emplace(QueueKey{depth, entry.discovered_seq}, entry);
    ++pending_;
    return true;
}

std::optional<FrontierEntry> Frontier::pop() {
    // Drained domains are removed lazily so a domain stays active while its
    // just-fetched page may still contribute deeper links.
    while (!stack_.empty() && queues_[stack_.back()].empty()) {
        on_stack_.erase(stack_.back());
        stack_.pop_back();
    }
    if (stack_.empty()) return std::nullopt;

    auto& queue = queues_[stack_.back()];
    auto it = queue.begin();
    FrontierEntry entry = it->second;
    queue.erase(it);
    --pending_;
    return entry;
}

bool Frontier::empty() const { return pending_ == 0; }

}  // namespace seccorpus
