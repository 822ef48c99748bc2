#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seccorpus/bloom.hpp"

namespace seccorpus {

struct PrepareConfig {
    unsigned ngram_words = 8;
    double dup_threshold = 0.8;  // paragraph duplicate when >= this overlap
    std::uint64_t bloom_bits = 1ULL << 24;
    unsigned bloom_hashes = 7;
    bool scrub_email = true;
    bool scrub_phone = true;
    std::map<std::string, unsigned> upsample_factors;  // tag -> factor
    double split_ratio = 0.99;
    std::string split_salt = "seccorpus";
};

// One word n-gram hash per window; paragraphs shorter than n words collapse
// to a single whole-paragraph hash.
std::vector<std::uint64_t> paragraph_fingerprint(const std::string& paragraph, unsigned ngram_words);

// Blank-line separated paragraphs, in document order.
std::vector<std::string> split_paragraphs(const std::string& text);

struct ParagraphDecision {
    std::size_t index = 0;
    bool kept = true;
    double overlap = 0.0;  // fraction of fingerprint hashes already in the filter
};

struct DedupResult {
    std::string text;  // surviving paragraphs joined with blank lines
    std::vector<ParagraphDecision> decisions;
    std::size_t paragraphs_in = 0;
    std::size_t paragraphs_kept = 0;
};

// Marks a paragraph duplicate when the present-hash fraction reaches the
// threshold, then inserts the hashes of kept paragraphs. The caller owns the
// filter exclusively for the duration of the call.
DedupResult dedup_document(BloomFilter& bloom, const std::string& text, const PrepareConfig& config);

struct ScrubResult {
    std::string text;
    std::map<std::string, std::size_t> replacements;  // category -> count
};

// Replaces emails with [EMAIL] and phone numbers with [PHONE]. IP addresses,
// CVE/CWE identifiers and hex digests stay untouched. Idempotent.
ScrubResult scrub_pii(const std::string& text, const PrepareConfig& config);

struct PreparedDoc {
    std::string doc_id;
    std::string text;
    std::vector<std::string> tags;
    unsigned replica = 0;  // 0-based index among copies of the same doc
};

// Emits each doc max(factor over its tags) times, replicas adjacent and in
// input order. Replicas share the base doc_id.
std::vector<PreparedDoc> upsample(const std::vector<PreparedDoc>& docs, const PrepareConfig& config);

enum class SplitBucket { train, test };

// Pure function of (doc_id, ratio, salt); replicas inherit the base id and
// therefore the bucket.
SplitBucket assign_split(const std::string& doc_id, double ratio, const std::string& salt);

const char* split_bucket_name(SplitBucket bucket);

}  // namespace seccorpus
