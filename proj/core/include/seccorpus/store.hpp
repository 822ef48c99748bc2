#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace seccorpus {

// Content-addressed raw page store: bodies land under raw/<aa>/<address>,
// identical bodies share one file, and an append-only raw_index.jsonl maps
// url -> {body_ref, content_type}. Safe for concurrent writers of distinct
// records.
class RawStore {
public:
    explicit RawStore(const std::string& root_dir);

    // Returns the content address (body_ref).
    std::string put(const std::string& url, std::string_view body,
                    const std::string& content_type);

    std::optional<std::string> get(const std::string& body_ref) const;

    struct IndexEntry {
        std::string url;
        std::string body_ref;
        std::string content_type;
    };
    static std::vector<IndexEntry> read_index(const std::string& root_dir);

    const std::string& root() const { return root_; }

private:
    std::string root_;
    std::mutex mutex_;
};

}  // namespace seccorpus
