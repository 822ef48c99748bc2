#pragma once

#include <string>
#include <vector>

namespace seccorpus {

// The line-delimited record flowing between pipeline stages.
struct DocRecord {
    std::string doc_id;
    std::string source_url;
    std::string text;
    std::vector<std::string> tags;
    std::string bucket;   // "train"/"test" once split, else empty
    unsigned replica = 0; // replica index after upsampling

    std::string to_json() const;
    static DocRecord from_json(const std::string& line);
};

void write_records(const std::string& path, const std::vector<DocRecord>& records);
std::vector<DocRecord> read_records(const std::string& path);

}  // namespace seccorpus
