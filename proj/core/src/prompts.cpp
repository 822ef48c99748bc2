#include "seccorpus/prompts.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "seccorpus/error.hpp"

namespace seccorpus {

const char* const kFewshotMcqaHeader =
    "The following are multiple choice questions about computer security.";
const char* const kFewshotRcmHeader =
    "The following is a CVE description. Map it to the appropriate CWE ID.";
const char* const kZeroshotMcqaInstruction =
    "Given the following question and four candidate answers (A, B, C and D), choose the best "
    "answer. Your response should be of the following format: 'Answer: $LETTER' (without quotes) "
    "where LETTER is one of A, B, C, or D.";
const char* const kZeroshotRcmInstruction =
    "Analyze the following CVE description and map it to the appropriate CWE. Provide a brief "
    "justification for your choice. Ensure the last line of your response contains only the CWE "
    "ID.";

namespace {

std::string format_block(const BenchmarkItem& item, bool with_answer) {
    std::string block;
    if (item.task == EvalTask::mcqa) {
        block = item.question;
        for (char letter = 'A'; letter <= 'D'; ++letter) {
            block += "\n";
            block += letter;
            block += ". ";
            auto it = item.options.find(letter);
            if (it != item.options.end()) block += it->second;
        }
        if (with_answer) block += "\nAnswer: " + item.gold;
    } else {
        block = "CVE Description: " + item.question;
        if (with_answer) block += "\nAnswer: " + item.gold;
    }
    return block;
}

}  // namespace

std::vector<std::size_t> sample_shot_indices(std::size_t pool_size,
                                             const std::vector<std::size_t>& excluded,
                                             unsigned shots, std::uint64_t seed) {
    std::vector<std::size_t> candidates;
    candidates.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) {
            candidates.push_back(i);
        }
    }
    if (candidates.size() < shots) {
        throw Error("prompt_pool: need " + std::to_string(shots) + " shot examples, pool has " +
                    std::to_string(candidates.size()));
    }
    // Partial Fisher-Yates on raw engine output; std::shuffle and
    // std::uniform_int_distribution vary across standard libraries.
    std::mt19937_64 rng(seed);
    for (unsigned k = 0; k < shots; ++k) {
        std::size_t j = k + static_cast<std::size_t>(rng() % (candidates.size() - k));
        std::swap(candidates[k], candidates[j]);
    }
    candidates.resize(shots);
    return candidates;
}

std::string build_fewshot_prompt(const BenchmarkItem& item,
                                 const std::vector<BenchmarkItem>& pool,
                                 const PromptSpec& spec) {
    if (spec.mode != PromptMode::fewshot_base) {
        throw Error("prompt_spec: build_fewshot_prompt requires fewshot_base mode");
    }
    std::vector<std::size_t> excluded;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].item_id == item.item_id) excluded.push_back(i);
    }
    std::vector<std::size_t> shot_indices =
        sample_shot_indices(pool.size(), excluded, spec.shots, spec.rng_seed);

    std::string prompt = item.task == EvalTask::mcqa ? kFewshotMcqaHeader : kFewshotRcmHeader;
    for (std::size_t idx : shot_indices) {
        prompt += "\n\n";
        prompt += format_block(pool[idx], /*with_answer=*/true);
    }
    prompt += "\n\n";
    prompt += format_block(item, /*with_answer=*/false);
    if (spec.trailing_answer_cue) prompt += "\nAnswer:";
    return prompt;
}

std::string build_zeroshot_prompt(const BenchmarkItem& item, const PromptSpec& spec) {
    if (spec.mode != PromptMode::zeroshot_instruct) {
        throw Error("prompt_spec: build_zeroshot_prompt requires zeroshot_instruct mode");
    }
    std::string instruction = spec.instruction;
    if (instruction.empty()) {
        instruction = item.task == EvalTask::mcqa ? kZeroshotMcqaInstruction
                                                  : kZeroshotRcmInstruction;
    }
    return instruction + "\n\n" + format_block(item, /*with_answer=*/false);
}

}  // namespace seccorpus
