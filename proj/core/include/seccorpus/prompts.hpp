#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seccorpus/evalbench.hpp"

namespace seccorpus {

enum class PromptMode { fewshot_base, zeroshot_instruct };

struct PromptSpec {
    PromptMode mode = PromptMode::fewshot_base;
    unsigned shots = 5;            // ignored (0) in zero-shot mode
    std::string instruction;       // overrides the default zero-shot instruction
    std::uint64_t rng_seed = 0;    // shot-selection seed, fresh per trial
    bool trailing_answer_cue = false;  // append "\nAnswer:" after the target
};

// Default header/instruction strings, exposed so tests can pin them.
extern const char* const kFewshotMcqaHeader;
extern const char* const kFewshotRcmHeader;
extern const char* const kZeroshotMcqaInstruction;
extern const char* const kZeroshotRcmInstruction;

// Deterministic shot pick: seeded partial Fisher-Yates over the pool with
// the target excluded, without replacement.
std::vector<std::size_t> sample_shot_indices(std::size_t pool_size,
                                             const std::vector<std::size_t>& excluded,
                                             unsigned shots, std::uint64_t seed);

// Few-shot prompt for base models. Shot examples carry their answer line;
// the target is appended in the same format without one, so the model
// completes "Answer: X". Byte-stable for equal (item, pool, seed).
std::string build_fewshot_prompt(const BenchmarkItem& item,
                                 const std::vector<BenchmarkItem>& pool,
                                 const PromptSpec& spec);

// Zero-shot prompt for instruct models: instruction, blank line, the bare
// question (and options for MCQA). Never any system prompt or examples.
std::string build_zeroshot_prompt(const BenchmarkItem& item, const PromptSpec& spec);

}  // namespace seccorpus
