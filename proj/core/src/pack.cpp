#include "seccorpus/pack.hpp"

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

SequencePacker::SequencePacker(std::uint32_t seq_len, TokenId eos_id, TailPolicy tail)
    : seq_len_(seq_len), eos_id_(eos_id), tail_(tail) {
    if (seq_len < 2) throw Error("pack_config: seq_len must be >= 2");
    current_.token_ids.reserve(seq_len);
}

void SequencePacker::open_span(const std::string& doc_id) {
    open_doc_id_ = doc_id;
    span_start_ = static_cast<std::uint32_t>(current_.token_ids.size());
    span_open_ = true;
}

void SequencePacker::close_span() {
    if (!span_open_) return;
    auto end = static_cast<std::uint32_t>(current_.token_ids.size());
    if (end > span_start_) current_.doc_spans.push_back({span_start_, end, open_doc_id_});
    span_open_ = false;
}

void SequencePacker::append_token(TokenId id, const Emit& emit) {
    current_.token_ids.push_back(id);
    if (current_.token_ids.size() == seq_len_) {
        // Sequence filled mid-document: close the span here and reopen it at
        // the start of the next sequence so the document continues unbroken.
        bool resume = span_open_;
        std::string resume_id = open_doc_id_;
        close_span();
        emit(std::move(current_));
        current_ = {};
        current_.token_ids.reserve(seq_len_);
        if (resume) open_span(resume_id);
    }
}

void SequencePacker::add_document(const std::string& doc_id, const std::vector<TokenId>& ids,
                                  const Emit& emit) {
    open_span(doc_id);
    for (TokenId id : ids) append_token(id, emit);
    append_token(eos_id_, emit);  // document separator
    close_span();
}

void SequencePacker::finish(const Emit& emit) {
    if (current_.token_ids.empty()) return;
    if (tail_ == TailPolicy::drop) {
        current_ = {};
        return;
    }
    close_span();
    current_.pad_count = seq_len_ - static_cast<std::uint32_t>(current_.token_ids.size());
    current_.token_ids.resize(seq_len_, eos_id_);
    emit(std::move(current_));
    current_ = {};
}

CorpusTokenStats corpus_token_stats(const std::vector<TokenRecord>& records) {
    CorpusTokenStats stats;
    for (const TokenRecord& record : records) {
        stats.total_tokens += record.tokens;
        ++stats.total_docs;
        stats.tokens_by_bucket[record.bucket] += record.tokens;
        ++stats.docs_by_bucket[record.bucket];
    }
    return stats;
}

std::vector<PackedSequence> pack_sequences(
    const std::vector<std::pair<std::string, std::vector<TokenId>>>& docs,
    std::uint32_t seq_len, TokenId eos_id, TailPolicy tail) {
    std::vector<PackedSequence> out;
    SequencePacker packer(seq_len, eos_id, tail);
    auto emit = [&out](PackedSequence&& seq) { out.push_back(std::move(seq)); };
    for (const auto& [doc_id, ids] : docs) packer.add_document(doc_id, ids, emit);
    packer.finish(emit);
    return out;
}

ShardWriter::ShardWriter(const std::string& out_dir, std::uint32_t seq_len,
                         std::uint64_t records_per_shard)
    : out_dir_(out_dir), seq_len_(seq_len), records_per_shard_(records_per_shard) {
    if (records_per_shard_ == 0) throw Error("pack_config: records_per_shard must be >= 1");
    std::filesystem::create_directories(out_dir_);
}

ShardWriter::~ShardWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void ShardWriter::open_next_shard() {
    ++shard_index_;
    char name[32];
    std::snprintf(name, sizeof(name), "shard_%05d.bin", shard_index_);
    current_shard_name_ = name;
    out_ = std::make_unique<std::ofstream>(std::filesystem::path(out_dir_) / current_shard_name_,
                                           std::ios::binary | std::ios::trunc);
    if (!*out_) throw Error("pack_io: cannot open shard " + current_shard_name_);
    records_in_shard_ = 0;
}

void ShardWriter::write(const PackedSequence& seq) {
    if (closed_) throw Error("pack_io: writer already closed");
    if (seq.token_ids.size() != seq_len_) throw Error("pack_io: sequence length mismatch");
    if (!out_ || records_in_shard_ == records_per_shard_) open_next_shard();

    for (TokenId id : seq.token_ids) {
        unsigned char le[4] = {
            static_cast<unsigned char>(id & 0xff),
            static_cast<unsigned char>((id >> 8) & 0xff),
            static_cast<unsigned char>((id >> 16) & 0xff),
            static_cast<unsigned char>((id >> 24) & 0xff),
        };
        out_->write(reinterpret_cast<const char*>(le), 4);
    }
    if (!*out_) throw Error("pack_io: short write to " + current_shard_name_);

    index_.push_back({current_shard_name_, records_in_shard_, seq.doc_spans, seq.pad_count});
    ++records_in_shard_;
    ++records_;
}

void ShardWriter::close() {
    if (closed_) return;
    closed_ = true;
    if (out_) out_->close();

    nlohmann::ordered_json j;
    j["seq_len"] = seq_len_;
    j["records"] = records_;
    j["entries"] = nlohmann::ordered_json::array();
    for (const IndexEntry& entry : index_) {
        nlohmann::ordered_json spans = nlohmann::ordered_json::array();
        for (const DocSpan& span : entry.spans) {
            spans.push_back({span.start, span.end, span.doc_id});
        }
        j["entries"].push_back({{"shard", entry.shard},
                                {"offset", entry.offset},
                                {"spans", spans},
                                {"pad_count", entry.pad_count}});
    }
    std::ofstream out(std::filesystem::path(out_dir_) / "index.json", std::ios::trunc);
    if (!out) throw Error("pack_io: cannot write index.json");
    out << j.dump(2) << "\n";
}

std::vector<PackedSequence> read_shards(const std::string& dir) {
    std::ifstream index_in(std::filesystem::path(dir) / "index.json");
    if (!index_in) throw Error("pack_io: cannot open index.json in " + dir);
    nlohmann::json j = nlohmann::json::parse(index_in, nullptr, false);
    if (j.is_discarded()) throw Error("pack_io: invalid index.json in " + dir);

    auto seq_len = j.at("seq_len").get<std::uint32_t>();
    std::vector<PackedSequence> out;
    std::string open_shard;
    std::ifstream shard_in;
    for (const auto& entry : j.at("entries")) {
        auto shard = entry.at("shard").get<std::string>();
        if (shard != open_shard) {
            shard_in = std::ifstream(std::filesystem::path(dir) / shard, std::ios::binary);
            if (!shard_in) throw Error("pack_io: cannot open shard " + shard);
            open_shard = shard;
        }
        auto offset = entry.at("offset").get<std::uint64_t>();
        shard_in.seekg(static_cast<std::streamoff>(offset * seq_len * 4));

        PackedSequence seq;
        seq.token_ids.resize(seq_len);
        for (std::uint32_t i = 0; i < seq_len; ++i) {
            unsigned char le[4];
            shard_in.read(reinterpret_cast<char*>(le), 4);
            seq.token_ids[i] = static_cast<TokenId>(le[0]) | (static_cast<TokenId>(le[1]) << 8) |
                               (static_cast<TokenId>(le[2]) << 16) | (static_cast<TokenId>(le[3]) << 24);
        }
        if (!shard_in) throw Error("pack_io: truncated shard " + shard);
        for (const auto& span : entry.at("spans")) {
            seq.doc_spans.push_back({span.at(0).get<std::uint32_t>(), span.at(1).get<std::uint32_t>(),
                                     span.at(2).get<std::string>()});
        }
        seq.pad_count = entry.at("pad_count").get<std::uint32_t>();
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace seccorpus
