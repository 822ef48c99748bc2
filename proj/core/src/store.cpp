#include "seccorpus/store.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"
#include "seccorpus/hash.hpp"

namespace seccorpus {

namespace fs = std::filesystem;

RawStore::RawStore(const std::string& root_dir) : root_(root_dir) {
    fs::create_directories(fs::path(root_) / "raw");
}

std::string RawStore::put(const std::string& url, std::string_view body,
                          const std::string& content_type) {
    std::string address = content_address(body);
    fs::path dir = fs::path(root_) / "raw" / address.substr(0, 2);
    fs::path file = dir / address;

    std::lock_guard<std::mutex> lock(mutex_);
    if (!fs::exists(file)) {
        fs::create_directories(dir);
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("store_io: cannot write " + file.string());
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
    nlohmann::ordered_json entry{{"url", url}, {"body_ref", address}, {"content_type", content_type}};
    std::ofstream index(fs::path(root_) / "raw_index.jsonl", std::ios::app);
    if (!index) throw Error("store_io: cannot append raw_index.jsonl");
    index << entry.dump() << "\n";
    return address;
}

std::optional<std::string> RawStore::get(const std::string& body_ref) const {
    fs::path file = fs::path(root_) / "raw" / body_ref.substr(0, 2) / body_ref;
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<RawStore::IndexEntry> RawStore::read_index(const std::string& root_dir) {
    std::vector<IndexEntry> entries;
    std::ifstream in(fs::path(root_dir) / "raw_index.jsonl");
    if (!in) return entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        entries.push_back({j.value("url", std::string()), j.value("body_ref", std::string()),
                           j.value("content_type", std::string())});
    }
    return entries;
}

}  // namespace seccorpus
