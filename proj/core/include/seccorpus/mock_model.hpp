#pragma once

#include <string>
#include <vector>

#include "seccorpus/evalbench.hpp"
#include "seccorpus/evalrun.hpp"

namespace seccorpus {

// Deterministic stand-in for a served model: identifies the target item as
// the one whose question occurs last in the prompt, then answers from the
// gold key for an exact accuracy_percent share of item ordinals (Bresenham
// spread, so 500 items at 80 give exactly 400 correct). Everything is a pure
// function of (items, prompt), which makes eval runs byte-reproducible.
class MockModel {
public:
    enum class Style { base, instruct };

    MockModel(std::vector<BenchmarkItem> items, unsigned accuracy_percent,
              Style style = Style::base);

    std::string respond(const std::string& prompt) const;

    bool answers_correctly(std::size_t ordinal) const;

private:
    std::string answer_for(std::size_t ordinal) const;

    std::vector<BenchmarkItem> items_;
    unsigned accuracy_percent_;
    Style style_;
};

// In-process CompletionClient over a MockModel; exercises the same run_eval
// path as the HTTP client minus the socket.
class MockCompletionClient final : public CompletionClient {
public:
    explicit MockCompletionClient(const MockModel& model) : model_(model) {}
    std::string complete(const CompletionRequest& request) override;

private:
    const MockModel& model_;
};

// Applies stop sequences the way a completion server would: the response is
// truncated at the first occurrence of any stop string.
std::string apply_stop_sequences(std::string text, const std::vector<std::string>& stop);

}  // namespace seccorpus
