#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace seccorpus {

struct FilterVerdict {
    std::string filter_name;
    bool passed = false;
    double score = -1.0;  // < 0 = not applicable
    std::vector<std::string> matched_terms;
    std::string reason;

    bool has_score() const { return score >= 0.0; }
};

// Lexicon file format: one lowercase term per line, '#' comments, a '!'
// prefix forces whole-token matching. Terms at or below
// auto_boundary_max_len are boundary-matched as well (short acronyms such
// as "cia" would otherwise fire inside ordinary words).
struct KeywordLexicon {
    std::vector<std::string> terms;           // lowercase, deduplicated
    std::set<std::string> boundary_terms;     // subset of terms

    static KeywordLexicon from_terms(const std::vector<std::string>& terms,
                                     const std::vector<std::string>& boundary_terms = {},
                                     std::size_t auto_boundary_max_len = 4);
    static KeywordLexicon load(const std::string& path, std::size_t auto_boundary_max_len = 4);

    std::size_t size() const { return terms.size(); }
};

// Aho-Corasick automaton over case-folded bytes; one pass over the text
// regardless of lexicon size.
class KeywordMatcher {
public:
    explicit KeywordMatcher(const KeywordLexicon& lexicon);

    // Distinct matched terms in first-match order.
    std::vector<std::string> match(std::string_view text) const;
    bool matches_any(std::string_view text) const;

private:
    struct Node {
        int next[256];
        int fail = 0;
        int output = -1;      // term index ending here
        int output_link = -1; // next node up the suffix chain with output
    };

    void add_term(int term_index);
    void build_links();
    template <typename Visitor>  // Visitor(term_index, end_pos) -> bool (continue?)
    void scan(std::string_view text, Visitor&& visit) const;

    std::vector<std::string> terms_;
    std::vector<bool> needs_boundary_;
    std::vector<Node> nodes_;
};

// Single-pass scan; passed = at least one term present.
FilterVerdict keyword_filter(const KeywordMatcher& matcher, std::string_view text);

}  // namespace seccorpus
