#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <random>

#include "seccorpus/error.hpp"
#include "seccorpus/keyword.hpp"

using namespace seccorpus;

namespace {

// Naive per-term oracle for the matcher property check.
bool naive_contains(const std::string& term, const std::string& text, bool boundary) {
    std::string lt = text;
    std::transform(lt.begin(), lt.end(), lt.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto is_word = [](unsigned char c) { return std::isalnum(c) != 0; };
    std::size_t pos = 0;
    while ((pos = lt.find(term, pos)) != std::string::npos) {
        bool left = pos == 0 || !is_word(static_cast<unsigned char>(lt[pos - 1]));
        bool right = pos + term.size() == lt.size() ||
                     !is_word(static_cast<unsigned char>(lt[pos + term.size()]));
        if (!boundary || (left && right)) return true;
        ++pos;
    }
    return false;
}

}  // namespace

TEST_CASE("absent keyword fails, present keyword passes case-insensitively") {
    auto lexicon = KeywordLexicon::from_terms({"malware"});
    KeywordMatcher matcher(lexicon);

    auto miss = keyword_filter(matcher, "no threats here");
    CHECK_FALSE(miss.passed);
    CHECK(miss.matched_terms.empty());

    auto hit = keyword_filter(matcher, "RANSOMWARE? malware!");
    CHECK(hit.passed);
    CHECK(hit.matched_terms == std::vector<std::string>{"malware"});

    CHECK(keyword_filter(matcher, "MALWARE and MaLwArE").matched_terms.size() == 1);
}

TEST_CASE("boundary terms match whole tokens only") {
    auto lexicon = KeywordLexicon::from_terms({"cia", "malware"});
    KeywordMatcher matcher(lexicon);

    CHECK_FALSE(keyword_filter(matcher, "special").passed);  // "cia" inside a word
    CHECK(keyword_filter(matcher, "the CIA triad").passed);
    CHECK(keyword_filter(matcher, "CIA").passed);
    CHECK(keyword_filter(matcher, "(cia)").passed);
    // Long terms keep substring semantics.
    CHECK(keyword_filter(matcher, "antimalware suite").passed);
}

TEST_CASE("overlapping and nested terms all fire") {
    auto lexicon = KeywordLexicon::from_terms({"sql injection", "injection", "sql"});
    KeywordMatcher matcher(lexicon);
    auto verdict = keyword_filter(matcher, "a sql injection primer");
    CHECK(verdict.matched_terms.size() == 3);
}

TEST_CASE("matcher agrees with the naive per-term scan on random inputs") {
    std::vector<std::string> terms = {"xss", "zero day", "botnet", "cve", "phishing", "rootkit"};
    auto lexicon = KeywordLexicon::from_terms(terms);
    KeywordMatcher matcher(lexicon);

    std::mt19937_64 rng(99);
    const std::string alphabet = "abcdefghij xyzov ";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        std::size_t len = rng() % 120;
        for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        if (trial % 3 == 0) text += terms[rng() % terms.size()];  // force some hits

        auto matched = matcher.match(text);
        for (const std::string& term : terms) {
            bool boundary = lexicon.boundary_terms.count(term) > 0;
            bool expected = naive_contains(term, text, boundary);
            bool got = std::find(matched.begin(), matched.end(), term) != matched.end();
            CHECK(got == expected);
        }
        CHECK(matcher.matches_any(text) == !matched.empty());
    }
}

TEST_CASE("lexicon file loads terms, comments and boundary markers") {
    auto path = std::filesystem::temp_directory_path() / "seccorpus_lexicon_test.txt";
    {
        std::ofstream out(path);
        out << "# starter terms\n";
        out << "malware\n";
        out << "!apt\n";
        out << "\n";
        out << "cross-site scripting\n";
    }
    auto lexicon = KeywordLexicon::load(path.string());
    CHECK(lexicon.terms.size() == 3);
    CHECK(lexicon.boundary_terms.count("apt") == 1);
    CHECK(lexicon.boundary_terms.count("cross-site scripting") == 0);

    KeywordMatcher matcher(lexicon);
    CHECK_FALSE(matcher.matches_any("adaptive chapter"));  // apt inside words
    CHECK(matcher.matches_any("an APT group"));
    std::filesystem::remove(path);
}

TEST_CASE("degenerate lexicons are rejected") {
    CHECK_THROWS_AS(KeywordLexicon::from_terms({""}), Error);
    CHECK_THROWS_AS(KeywordMatcher(KeywordLexicon{}), Error);
    CHECK_THROWS_AS(KeywordLexicon::load("/nonexistent/lexicon.txt"), Error);
}

TEST_CASE("the bundled starter lexicon loads and matches security text") {
    auto lexicon = KeywordLexicon::load(std::string(SECCORPUS_DATA_DIR) + "/security_lexicon.txt");
    CHECK(lexicon.terms.size() >= 150);
    KeywordMatcher matcher(lexicon);
    CHECK(matcher.matches_any("The patch fixes a remote code execution vulnerability."));
    CHECK_FALSE(matcher.matches_any("A pleasant walk in the park on a sunny day."));
}
