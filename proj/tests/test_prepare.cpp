#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "seccorpus/prepare.hpp"

using namespace seccorpus;

TEST_CASE("split_paragraphs on blank lines") {
    CHECK(split_paragraphs("a\nb\n\nc\n\n\nd") == std::vector<std::string>{"a\nb", "c", "d"});
    CHECK(split_paragraphs("").empty());
    CHECK(split_paragraphs("  \n \n").empty());
    CHECK(split_paragraphs("one") == std::vector<std::string>{"one"});
}

TEST_CASE("short paragraphs collapse to a single whole-paragraph hash") {
    PrepareConfig cfg;
    cfg.ngram_words = 8;
    auto short_fp = paragraph_fingerprint("just three words", cfg.ngram_words);
    CHECK(short_fp.size() == 1);

    // 10 words, n=8 -> 3 windows.
    auto long_fp = paragraph_fingerprint("w1 w2 w3 w4 w5 w6 w7 w8 w9 w10", cfg.ngram_words);
    CHECK(long_fp.size() == 3);

    // Deterministic across calls.
    CHECK(paragraph_fingerprint("just three words", 8) == short_fp);
}

TEST_CASE("exact repeat is removed on second sight") {
    PrepareConfig cfg;
    BloomFilter bloom(1u << 16, 5);
    std::string para = "the quick brown fox jumps over the lazy dog again and again";

    auto first = dedup_document(bloom, para, cfg);
    CHECK(first.text == para);
    CHECK(first.paragraphs_kept == 1);

    auto second = dedup_document(bloom, para, cfg);
    CHECK(second.text.empty());
    CHECK(second.paragraphs_kept == 0);
    REQUIRE(second.decisions.size() == 1);
    CHECK(second.decisions[0].overlap == 1.0);
}

TEST_CASE("half-overlapping paragraphs both survive at theta 0.8") {
    PrepareConfig cfg;
    cfg.ngram_words = 4;
    cfg.dup_threshold = 0.8;
    BloomFilter bloom(1u << 16, 5);

    // p1: words a1..a8 -> 5 4-grams. p2 shares the suffix a5..a8 plus fresh
    // words: windows overlap on fewer than 80% of hashes.
    std::string p1 = "a1 a2 a3 a4 a5 a6 a7 a8";
    std::string p2 = "a5 a6 a7 a8 b1 b2 b3 b4";
    auto r1 = dedup_document(bloom, p1, cfg);
    CHECK(r1.paragraphs_kept == 1);
    auto r2 = dedup_document(bloom, p2, cfg);
    CHECK(r2.paragraphs_kept == 1);
    // Exactly one shared window (a5 a6 a7 a8) of p2's five.
    CHECK(r2.decisions[0].overlap == doctest::Approx(0.2));
}

TEST_CASE("50% n-gram overlap keeps both at theta 0.8, drops at theta 0.5") {
    // p1 "x1..x5" with n=2 inserts 4 bigrams; p2 "x1 x2 x3 z1 z2" has 4
    // bigrams of which exactly 2 (x1x2, x2x3) are already present.
    std::string p1 = "x1 x2 x3 x4 x5";
    std::string p2 = "x1 x2 x3 z1 z2";

    PrepareConfig loose;
    loose.ngram_words = 2;
    loose.dup_threshold = 0.8;
    BloomFilter bloom_a(1u << 16, 5);
    dedup_document(bloom_a, p1, loose);
    auto kept = dedup_document(bloom_a, p2, loose);
    CHECK(kept.decisions[0].overlap == doctest::Approx(0.5));
    CHECK(kept.paragraphs_kept == 1);

    PrepareConfig tight = loose;
    tight.dup_threshold = 0.5;  // >= rule: 0.5 overlap is a duplicate
    BloomFilter bloom_b(1u << 16, 5);
    dedup_document(bloom_b, p1, tight);
    auto dropped = dedup_document(bloom_b, p2, tight);
    CHECK(dropped.paragraphs_kept == 0);
}

TEST_CASE("duplicate paragraphs drop while fresh ones in the same doc survive") {
    PrepareConfig cfg;
    BloomFilter bloom(1u << 16, 5);
    dedup_document(bloom, "first paragraph with enough words to matter here", cfg);

    auto result = dedup_document(
        bloom, "first paragraph with enough words to matter here\n\ncompletely new paragraph text",
        cfg);
    CHECK(result.paragraphs_in == 2);
    CHECK(result.paragraphs_kept == 1);
    CHECK(result.text == "completely new paragraph text");
}

TEST_CASE("dedup of an empty document is a no-op") {
    PrepareConfig cfg;
    BloomFilter bloom(1u << 16, 5);
    auto result = dedup_document(bloom, "", cfg);
    CHECK(result.text.empty());
    CHECK(result.decisions.empty());
}

TEST_CASE("scrub_pii replaces emails and phones") {
    PrepareConfig cfg;
    auto r = scrub_pii("contact bob@x.com", cfg);
    CHECK(r.text == "contact [EMAIL]");
    CHECK(r.replacements.at("email") == 1);

    auto r2 = scrub_pii("call 555-123-4567 or (202) 555-0199 today", cfg);
    CHECK(r2.text == "call [PHONE] or [PHONE] today");
    CHECK(r2.replacements.at("phone") == 2);

    auto r3 = scrub_pii("intl +1 (555) 123-4567 and compact +447911123456", cfg);
    CHECK(r3.text == "intl [PHONE] and compact [PHONE]");

    auto r4 = scrub_pii("dotted 555.123.4567", cfg);
    CHECK(r4.text == "dotted [PHONE]");
}

TEST_CASE("scrub_pii preserves security identifiers") {
    PrepareConfig cfg;
    std::string text = "CVE-2016-6335 at 10.0.0.1";
    CHECK(scrub_pii(text, cfg).text == text);

    std::string more = "CWE-89 and sha 5d41402abc4b2a76b9719d911017c592 and 192.168.100.1 "
                       "and CVE-2023-12345 published 2024-01-15";
    CHECK(scrub_pii(more, cfg).text == more);
}

TEST_CASE("scrub_pii is idempotent") {
    PrepareConfig cfg;
    std::string text = "bob@x.com 555-123-4567 +15551234567 (303) 555-7777 plain text";
    auto once = scrub_pii(text, cfg);
    auto twice = scrub_pii(once.text, cfg);
    CHECK(twice.text == once.text);
    CHECK(twice.replacements.empty());
}

TEST_CASE("scrub_pii only rewrites replacement sites") {
    PrepareConfig cfg;
    std::string text = "prefix bob@x.com middle 555-123-4567 suffix";
    auto r = scrub_pii(text, cfg);
    CHECK(r.text.substr(0, 7) == "prefix ");
    CHECK(r.text.find(" middle ") != std::string::npos);
    CHECK(r.text.substr(r.text.size() - 7) == " suffix");
}

TEST_CASE("upsample emits max-factor adjacent replicas") {
    PrepareConfig cfg;
    cfg.upsample_factors = {{"ttp", 3}, {"hq", 2}};

    std::vector<PreparedDoc> docs = {
        {"d1", "text1", {"ttp"}, 0},
        {"d2", "text2", {}, 0},
        {"d3", "text3", {"ttp", "hq"}, 0},
        {"d4", "text4", {"unknown"}, 0},
    };
    auto out = upsample(docs, cfg);
    REQUIRE(out.size() == 3 + 1 + 3 + 1);
    CHECK(out[0].doc_id == "d1");
    CHECK(out[0].replica == 0);
    CHECK(out[1].replica == 1);
    CHECK(out[2].replica == 2);
    CHECK(out[3].doc_id == "d2");
    CHECK(out[4].doc_id == "d3");  // max(3, 2) = 3 copies
    CHECK(out[6].replica == 2);
    CHECK(out[7].doc_id == "d4");
}

TEST_CASE("upsample with unit factors is the identity") {
    PrepareConfig cfg;
    std::vector<PreparedDoc> docs = {{"a", "x", {"ttp"}, 0}, {"b", "y", {}, 0}};
    auto out = upsample(docs, cfg);
    REQUIRE(out.size() == 2);
    CHECK(out[0].doc_id == "a");
    CHECK(out[1].doc_id == "b");
}

TEST_CASE("assign_split is a stable pure function") {
    CHECK(assign_split("anything", 1.0, "s") == SplitBucket::train);
    CHECK(assign_split("anything", 0.0, "s") == SplitBucket::test);
    for (int i = 0; i < 50; ++i) {
        auto a = assign_split("doc-" + std::to_string(i), 0.5, "salt");
        auto b = assign_split("doc-" + std::to_string(i), 0.5, "salt");
        CHECK(a == b);
    }
    // Salt changes the assignment of at least some ids.
    int moved = 0;
    for (int i = 0; i < 200; ++i) {
        std::string id = "doc-" + std::to_string(i);
        if (assign_split(id, 0.5, "salt1") != assign_split(id, 0.5, "salt2")) ++moved;
    }
    CHECK(moved > 0);
}

TEST_CASE("split proportion approaches the ratio") {
    int train = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (assign_split("id-" + std::to_string(i), 0.99, "prop") == SplitBucket::train) ++train;
    }
    double fraction = static_cast<double>(train) / n;
    CHECK(fraction > 0.988);
    CHECK(fraction < 0.992);
}

TEST_CASE("replicas share the base id and therefore the bucket") {
    PrepareConfig cfg;
    cfg.upsample_factors = {{"ttp", 4}};
    std::vector<PreparedDoc> docs = {{"base-doc", "text", {"ttp"}, 0}};
    auto out = upsample(docs, cfg);
    std::set<SplitBucket> buckets;
    for (const auto& doc : out) buckets.insert(assign_split(doc.doc_id, 0.5, "s"));
    CHECK(buckets.size() == 1);
}
