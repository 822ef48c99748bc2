#include "seccorpus/answer_extract.hpp"

#include <cctype>
#include <regex>

namespace seccorpus {

namespace {

// std::regex icase would also fold character classes, and the fallback
// patterns must accept only UPPERCASE letters. Literals are therefore
// expanded to explicit [Xx] classes and classes stay case-exact.
std::string ci(const std::string& literal) {
    std::string out;
    for (char c : literal) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            out.push_back('[');
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            out.push_back(']');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

const std::regex& primary_re() {
    // "Answer: C", "answer:(B)", "ANSWER:  d"
    static const std::regex re(ci("answer") + R"(:\s*\(?([A-Da-d])(?:\)|\b))");
    return re;
}

const std::regex& answer_is_re() {
    // "The answer is A", "answer is: (D)"
    static const std::regex re(ci("answer") + R"(\s+)" + ci("is") + R"(:?\s*\(?([A-Z])(?:\)|\b))");
    return re;
}

const std::regex& standalone_re() {
    // "C" or "(B)" as its own token; group 2 is the letter.
    static const std::regex re(R"((^|[^A-Za-z0-9])\(?([A-Z])\)?(?=$|[^A-Za-z0-9]))");
    return re;
}

const std::regex& option_re() {
    // "Option A"
    static const std::regex re(ci("option") + R"(\s+([A-Z])\b)");
    return re;
}

const std::regex& cwe_re() {
    static const std::regex re(ci("cwe") + R"(-(\d+))");
    return re;
}

// Last occurrence of `group` across all matches, empty when none.
std::string last_match(const std::string& text, const std::regex& re, int group) {
    std::string value;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        value = it->str(static_cast<std::size_t>(group));
    }
    return value;
}

}  // namespace

Extraction extract_mcqa_answer(const std::string& response) {
    Extraction extraction;

    std::string value = last_match(response, primary_re(), 1);
    if (!value.empty()) {
        extraction.value = std::string(1, static_cast<char>(std::toupper(
                                              static_cast<unsigned char>(value[0]))));
        extraction.pattern_used = "primary";
        return extraction;
    }

    extraction.misformatted = true;

    value = last_match(response, answer_is_re(), 1);
    if (!value.empty()) {
        extraction.value = value;
        extraction.pattern_used = "answer_is";
        return extraction;
    }

    value = last_match(response, standalone_re(), 2);
    if (!value.empty()) {
        extraction.value = value;
        extraction.pattern_used = "standalone_letter";
        return extraction;
    }

    value = last_match(response, option_re(), 1);
    if (!value.empty()) {
        extraction.value = value;
        extraction.pattern_used = "option_letter";
        return extraction;
    }

    extraction.pattern_used = "none";
    return extraction;
}

Extraction extract_cwe_answer(const std::string& response) {
    Extraction extraction;
    std::string digits = last_match(response, cwe_re(), 1);
    if (digits.empty()) {
        extraction.misformatted = true;
        extraction.pattern_used = "none";
        return extraction;
    }
    extraction.value = "CWE-" + digits;
    extraction.pattern_used = "primary";
    return extraction;
}

}  // namespace seccorpus
