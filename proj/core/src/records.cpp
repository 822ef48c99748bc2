#include "seccorpus/records.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

std::string DocRecord::to_json() const {
    nlohmann::ordered_json j;
    j["doc_id"] = doc_id;
    if (!source_url.empty()) j["source_url"] = source_url;
    j["text"] = text;
    if (!tags.empty()) j["tags"] = tags;
    if (!bucket.empty()) j["bucket"] = bucket;
    if (replica > 0) j["replica"] = replica;
    return j.dump();
}

DocRecord DocRecord::from_json(const std::string& line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error("records: invalid JSON line");
    DocRecord r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.source_url = j.value("source_url", std::string());
    r.text = j.at("text").get<std::string>();
    if (j.contains("tags")) r.tags = j["tags"].get<std::vector<std::string>>();
    r.bucket = j.value("bucket", std::string());
    r.replica = j.value("replica", 0u);
    return r;
}

void write_records(const std::string& path, const std::vector<DocRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("records: cannot write " + path);
    for (const DocRecord& record : records) out << record.to_json() << "\n";
}

std::vector<DocRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("records: cannot open " + path);
    std::vector<DocRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) records.push_back(DocRecord::from_json(line));
    }
    return records;
}

}  // namespace seccorpus
