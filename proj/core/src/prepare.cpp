#include "seccorpus/prepare.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "seccorpus/hash.hpp"

namespace seccorpus {

namespace {

constexpr std::uint64_t kFingerprintSeed = 0xf19e2fULL;

std::vector<std::string> paragraph_words(const std::string& paragraph) {
    std::vector<std::string> words;
    std::string current;
    for (char c : paragraph) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::uint64_t hash_words(const std::vector<std::string>& words, std::size_t begin, std::size_t end) {
    std::string joined;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) joined.push_back('\x1f');
        joined += words[i];
    }
    return hash64(joined, kFingerprintSeed);
}

struct PhonePattern {
    std::regex re;
    int group;  // capture group holding the number itself
};

// Email first, phones after. Phone shapes are deliberately narrow so that
// IPv4 addresses (max 3-digit octets), CVE-YYYY-NNNN (4-4 digit groups) and
// hex digests (letters adjacent to digits) can never match.
const std::regex& email_re() {
    static const std::regex re(R"(([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}))");
    return re;
}

const std::vector<PhonePattern>& phone_patterns() {
    static const std::vector<PhonePattern> patterns = [] {
        std::vector<PhonePattern> out;
        // +1 (555) 123-4567, +44 20 7946 0958
        out.push_back({std::regex(R"((^|[^0-9A-Za-z.+-])(\+\d{1,3}[ .-]?\(?\d{2,4}\)?[ .-]\d{3,4}[ .-]?\d{0,4})(?=$|[^0-9A-Za-z-]))"), 2});
        // (555) 123-4567
        out.push_back({std::regex(R"((^|[^0-9A-Za-z.-])(\(\d{3}\)[ .-]?\d{3}[ .-]\d{4})(?=$|[^0-9A-Za-z-]))"), 2});
        // 555-123-4567, 555.123.4567
        out.push_back({std::regex(R"((^|[^0-9A-Za-z.-])(\d{3}[ .-]\d{3}[ .-]\d{4})(?=$|[^0-9A-Za-z.-]))"), 2});
        // +15551234567
        out.push_back({std::regex(R"((^|[^0-9A-Za-z.+-])(\+\d{7,15})(?=$|[^0-9A-Za-z-]))"), 2});
        return out;
    }();
    return patterns;
}

std::string replace_matches(const std::string& text, const std::regex& re, int group,
                            const std::string& replacement, std::size_t& count) {
    std::string out;
    out.reserve(text.size());
    auto begin = std::sregex_iterator(text.begin(), text.end(), re);
    auto end = std::sregex_iterator();
    std::size_t last = 0;
    for (auto it = begin; it != end; ++it) {
        const std::smatch& m = *it;
        std::size_t match_pos = static_cast<std::size_t>(m.position(group));
        std::size_t match_len = static_cast<std::size_t>(m.length(group));
        out.append(text, last, match_pos - last);
        out += replacement;
        last = match_pos + match_len;
        ++count;
    }
    out.append(text, last, std::string::npos);
    return out;
}

}  // namespace

std::vector<std::string> split_paragraphs(const std::string& text) {
    std::vector<std::string> paragraphs;
    std::string current;
    std::istringstream lines(text);
    std::string line;
    auto is_blank = [](const std::string& s) {
        return std::all_of(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); });
    };
    while (std::getline(lines, line)) {
        if (is_blank(line)) {
            if (!current.empty()) {
                paragraphs.push_back(std::move(current));
                current.clear();
            }
        } else {
            if (!current.empty()) current.push_back('\n');
            current += line;
        }
    }
    if (!current.empty()) paragraphs.push_back(std::move(current));
    return paragraphs;
}

std::vector<std::uint64_t> paragraph_fingerprint(const std::string& paragraph, unsigned ngram_words) {
    std::vector<std::string> words = paragraph_words(paragraph);
    std::vector<std::uint64_t> hashes;
    if (words.size() < ngram_words) {
        hashes.push_back(hash_words(words, 0, words.size()));
        return hashes;
    }
    hashes.reserve(words.size() - ngram_words + 1);
    for (std::size_t i = 0; i + ngram_words <= words.size(); ++i) {
        hashes.push_back(hash_words(words, i, i + ngram_words));
    }
    return hashes;
}

DedupResult dedup_document(BloomFilter& bloom, const std::string& text, const PrepareConfig& config) {
    DedupResult result;
    std::vector<std::string> paragraphs = split_paragraphs(text);
    result.paragraphs_in = paragraphs.size();

    std::vector<const std::string*> kept;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        std::vector<std::uint64_t> hashes = paragraph_fingerprint(paragraphs[i], config.ngram_words);
        std::size_t present = 0;
        for (std::uint64_t h : hashes) {
            if (bloom.contains(h)) ++present;
        }
        double overlap = hashes.empty() ? 0.0
                                        : static_cast<double>(present) / static_cast<double>(hashes.size());
        bool duplicate = overlap >= config.dup_threshold;
        result.decisions.push_back({i, !duplicate, overlap});
        if (duplicate) continue;
        for (std::uint64_t h : hashes) bloom.insert(h);
        kept.push_back(&paragraphs[i]);
    }

    result.paragraphs_kept = kept.size();
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0) result.text += "\n\n";
        result.text += *kept[i];
    }
    return result;
}

ScrubResult scrub_pii(const std::string& text, const PrepareConfig& config) {
    ScrubResult result;
    result.text = text;
    if (config.scrub_email) {
        std::size_t count = 0;
        result.text = replace_matches(result.text, email_re(), 1, "[EMAIL]", count);
        if (count > 0) result.replacements["email"] = count;
    }
    if (config.scrub_phone) {
        std::size_t count = 0;
        for (const PhonePattern& pattern : phone_patterns()) {
            result.text = replace_matches(result.text, pattern.re, pattern.group, "[PHONE]", count);
        }
        if (count > 0) result.replacements["phone"] = count;
    }
    return result;
}

std::vector<PreparedDoc> upsample(const std::vector<PreparedDoc>& docs, const PrepareConfig& config) {
    std::vector<PreparedDoc> out;
    out.reserve(docs.size());
    for (const PreparedDoc& doc : docs) {
        unsigned factor = 1;
        for (const std::string& tag : doc.tags) {
            auto it = config.upsample_factors.find(tag);
            if (it != config.upsample_factors.end()) factor = std::max(factor, it->second);
        }
        for (unsigned r = 0; r < factor; ++r) {
            PreparedDoc replica = doc;
            replica.replica = r;
            out.push_back(std::move(replica));
        }
    }
    return out;
}

SplitBucket assign_split(const std::string& doc_id, double ratio, const std::string& salt) {
    std::string key = salt;
    key.push_back('\x1f');
    key += doc_id;
    std::uint64_t h = hash64(key, 0x5a17ULL);
    // Top 53 bits -> uniform double in [0, 1).
    double u = static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
    return u < ratio ? SplitBucket::train : SplitBucket::test;
}

const char* split_bucket_name(SplitBucket bucket) {
    return bucket == SplitBucket::train ? "train" : "test";
}

}  // namespace seccorpus
