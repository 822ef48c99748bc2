#include "seccorpus/keyword.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <unordered_set>

#include "seccorpus/error.hpp"

namespace seccorpus {

namespace {

inline unsigned char fold(unsigned char c) {
    return static_cast<unsigned char>(std::tolower(c));
}

inline bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

std::string lower_copy(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(fold(c)); });
    return out;
}

}  // namespace

KeywordLexicon KeywordLexicon::from_terms(const std::vector<std::string>& terms,
                                          const std::vector<std::string>& boundary_terms,
                                          std::size_t auto_boundary_max_len) {
    KeywordLexicon lexicon;
    std::unordered_set<std::string> seen;
    for (const std::string& raw : terms) {
        std::string term = lower_copy(raw);
        if (term.empty()) throw Error("lexicon: empty term");
        if (!seen.insert(term).second) continue;
        if (term.size() <= auto_boundary_max_len) lexicon.boundary_terms.insert(term);
        lexicon.terms.push_back(std::move(term));
    }
    for (const std::string& raw : boundary_terms) {
        std::string term = lower_copy(raw);
        if (seen.count(term) == 0) throw Error("lexicon: boundary term not in lexicon: " + term);
        lexicon.boundary_terms.insert(term);
    }
    return lexicon;
}

KeywordLexicon KeywordLexicon::load(const std::string& path, std::size_t auto_boundary_max_len) {
    std::ifstream in(path);
    if (!in) throw Error("lexicon: cannot open " + path);
    std::vector<std::string> terms;
    std::vector<std::string> boundary;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line[0] == '#') continue;
        if (line[0] == '!') {
            std::string term = line.substr(1);
            if (term.empty()) throw Error("lexicon: bare '!' line in " + path);
            terms.push_back(term);
            boundary.push_back(term);
        } else {
            terms.push_back(line);
        }
    }
    if (terms.empty()) throw Error("lexicon: no terms in " + path);
    return from_terms(terms, boundary, auto_boundary_max_len);
}

KeywordMatcher::KeywordMatcher(const KeywordLexicon& lexicon) {
    if (lexicon.terms.empty()) throw Error("lexicon: empty lexicon");
    terms_ = lexicon.terms;
    needs_boundary_.resize(terms_.size(), false);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        needs_boundary_[i] = lexicon.boundary_terms.count(terms_[i]) > 0;
    }

    nodes_.emplace_back();
    std::fill(std::begin(nodes_[0].next), std::end(nodes_[0].next), -1);
    for (int i = 0; i < static_cast<int>(terms_.size()); ++i) add_term(i);
    build_links();
}

void KeywordMatcher::add_term(int term_index) {
    int node = 0;
    for (unsigned char raw : terms_[static_cast<std::size_t>(term_index)]) {
        unsigned char c = fold(raw);
        if (nodes_[static_cast<std::size_t>(node)].next[c] < 0) {
            nodes_[static_cast<std::size_t>(node)].next[c] = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
            std::fill(std::begin(nodes_.back().next), std::end(nodes_.back().next), -1);
        }
        node = nodes_[static_cast<std::size_t>(node)].next[c];
    }
    nodes_[static_cast<std::size_t>(node)].output = term_index;
}

void KeywordMatcher::build_links() {
    // BFS turns the trie into a dense goto automaton: missing transitions
    // are filled with the fail target so scan() never walks fail chains.
    std::deque<int> queue;
    for (int c = 0; c < 256; ++c) {
        int child = nodes_[0].next[c];
        if (child < 0) {
            nodes_[0].next[c] = 0;
        } else {
            nodes_[static_cast<std::size_t>(child)].fail = 0;
            queue.push_back(child);
        }
    }
    while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        Node& n = nodes_[static_cast<std::size_t>(node)];
        n.output_link = nodes_[static_cast<std::size_t>(n.fail)].output >= 0
                            ? n.fail
                            : nodes_[static_cast<std::size_t>(n.fail)].output_link;
        for (int c = 0; c < 256; ++c) {
            int child = n.next[c];
            int fail_target = nodes_[static_cast<std::size_t>(n.fail)].next[c];
            if (child < 0) {
                n.next[c] = fail_target;
            } else {
                nodes_[static_cast<std::size_t>(child)].fail = fail_target;
                queue.push_back(child);
            }
        }
    }
}

template <typename Visitor>
void KeywordMatcher::scan(std::string_view text, Visitor&& visit) const {
    int state = 0;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        unsigned char c = fold(static_cast<unsigned char>(text[pos]));
        state = nodes_[static_cast<std::size_t>(state)].next[c];
        for (int hit = state; hit > 0;) {
            const Node& n = nodes_[static_cast<std::size_t>(hit)];
            if (n.output >= 0) {
                if (!visit(n.output, pos)) return;
            }
            hit = n.output_link;
        }
    }
}

std::vector<std::string> KeywordMatcher::match(std::string_view text) const {
    std::vector<std::string> matched;
    std::vector<bool> seen(terms_.size(), false);
    scan(text, [&](int term_index, std::size_t end_pos) {
        auto idx = static_cast<std::size_t>(term_index);
        if (seen[idx]) return true;
        if (needs_boundary_[idx]) {
            std::size_t start = end_pos + 1 - terms_[idx].size();
            bool left_ok = start == 0 || !is_word_char(static_cast<unsigned char>(text[start - 1]));
            bool right_ok = end_pos + 1 == text.size() ||
                            !is_word_char(static_cast<unsigned char>(text[end_pos + 1]));
            if (!left_ok || !right_ok) return true;
        }
        seen[idx] = true;
        matched.push_back(terms_[idx]);
        return true;
    });
    return matched;
}

bool KeywordMatcher::matches_any(std::string_view text) const {
    bool found = false;
    scan(text, [&](int term_index, std::size_t end_pos) {
        auto idx = static_cast<std::size_t>(term_index);
        if (needs_boundary_[idx]) {
            std::size_t start = end_pos + 1 - terms_[idx].size();
            bool left_ok = start == 0 || !is_word_char(static_cast<unsigned char>(text[start - 1]));
            bool right_ok = end_pos + 1 == text.size() ||
                            !is_word_char(static_cast<unsigned char>(text[end_pos + 1]));
            if (!left_ok || !right_ok) return true;
        }
        found = true;
        return false;
    });
    return found;
}

FilterVerdict keyword_filter(const KeywordMatcher& matcher, std::string_view text) {
    FilterVerdict verdict;
    verdict.filter_name = "keyword";
    verdict.matched_terms = matcher.match(text);
    verdict.passed = !verdict.matched_terms.empty();
    verdict.reason = verdict.passed ? "keyword_match" : "no_keyword";
    return verdict;
}

}  // namespace seccorpus
