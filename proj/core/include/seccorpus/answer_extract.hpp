#pragma once

#include <optional>
#include <string>

namespace seccorpus {

struct Extraction {
    std::optional<std::string> value;  // "A".."Z" or "CWE-<digits>"
    bool misformatted = false;         // primary pattern missed
    std::string pattern_used;          // primary|answer_is|standalone_letter|option_letter|none
};

// MCQA answer extraction. Primary: case-insensitive "answer:" plus optional
// spaces/paren and a letter A-D. On miss the sample is misformatted and the
// fallbacks fire in order: "answer is" (uppercase A-Z), standalone uppercase
// letter optionally parenthesized, "option" + uppercase letter. The last
// occurrence within the winning pattern is taken. Letters outside A-D are
// kept and simply score as incorrect.
Extraction extract_mcqa_answer(const std::string& response);

// RCM: case-insensitive "CWE-<digits>", hyphen required, last match wins,
// result upper-cased.
Extraction extract_cwe_answer(const std::string& response);

}  // namespace seccorpus
