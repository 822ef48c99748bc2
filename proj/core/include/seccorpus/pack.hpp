#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "seccorpus/tokenizer.hpp"

namespace seccorpus {

struct DocSpan {
    std::uint32_t start = 0;  // [start, end) within the sequence
    std::uint32_t end = 0;
    std::string doc_id;
};

struct PackedSequence {
    std::vector<TokenId> token_ids;  // exactly seq_len ids
    std::vector<DocSpan> doc_spans;  // ordered, non-overlapping, cover non-pad
    std::uint32_t pad_count = 0;     // > 0 only in the final sequence of a run
};

enum class TailPolicy { pad, drop };

// Greedy packer: each document contributes its ids plus one eos, split
// across sequence boundaries when needed so no token is ever dropped (pad
// policy). The pad token reuses eos_id; pad_count disambiguates.
class SequencePacker {
public:
    SequencePacker(std::uint32_t seq_len, TokenId eos_id, TailPolicy tail = TailPolicy::pad);

    // Feed documents in order; emit fires for every completed sequence.
    using Emit = std::function<void(PackedSequence&&)>;
    void add_document(const std::string& doc_id, const std::vector<TokenId>& ids, const Emit& emit);
    void finish(const Emit& emit);  // flushes the tail per policy

private:
    void append_token(TokenId id, const Emit& emit);
    void open_span(const std::string& doc_id);
    void close_span();

    std::uint32_t seq_len_;
    TokenId eos_id_;
    TailPolicy tail_;
    PackedSequence current_;
    std::string open_doc_id_;
    std::uint32_t span_start_ = 0;
    bool span_open_ = false;
};

std::vector<PackedSequence> pack_sequences(
    const std::vector<std::pair<std::string, std::vector<TokenId>>>& docs,
    std::uint32_t seq_len, TokenId eos_id, TailPolicy tail = TailPolicy::pad);

struct CorpusTokenStats {
    std::uint64_t total_tokens = 0;  // excludes the appended eos separators
    std::uint64_t total_docs = 0;
    std::map<std::string, std::uint64_t> tokens_by_bucket;
    std::map<std::string, std::uint64_t> docs_by_bucket;
};

struct TokenRecord {
    std::string bucket;  // "train", "test" or "" for unsplit corpora
    std::uint64_t tokens = 0;
};

// Exact counts over the stream; bucket maps echo the train/test ratio.
CorpusTokenStats corpus_token_stats(const std::vector<TokenRecord>& records);

// Shard files hold little-endian uint32 ids, seq_len per record; the sidecar
// JSON index lists every record's shard, offset, spans and pad count.
class ShardWriter {
public:
    ShardWriter(const std::string& out_dir, std::uint32_t seq_len,
                std::uint64_t records_per_shard = 4096);
    ~ShardWriter();

    void write(const PackedSequence& seq);
    void close();  // writes index.json

    std::uint64_t records_written() const { return records_; }

private:
    struct IndexEntry {
        std::string shard;
        std::uint64_t offset;
        std::vector<DocSpan> spans;
        std::uint32_t pad_count;
    };

    void open_next_shard();

    std::string out_dir_;
    std::uint32_t seq_len_;
    std::uint64_t records_per_shard_;
    std::uint64_t records_ = 0;
    std::uint64_t records_in_shard_ = 0;
    int shard_index_ = -1;
    std::string current_shard_name_;
    std::unique_ptr<std::ofstream> out_;
    std::vector<IndexEntry> index_;
    bool closed_ = false;
};

// Reads every record of a shard directory back, index order.
std::vector<PackedSequence> read_shards(const std::string& dir);

}  // namespace seccorpus
