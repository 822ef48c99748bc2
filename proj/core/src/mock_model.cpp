#include "seccorpus/mock_model.hpp"

#include <string>

namespace seccorpus {

MockModel::MockModel(std::vector<BenchmarkItem> items, unsigned accuracy_percent, Style style)
    : items_(std::move(items)), accuracy_percent_(accuracy_percent), style_(style) {}

bool MockModel::answers_correctly(std::size_t ordinal) const {
    // Bresenham spread: exactly floor(n*pct/100) correct over any prefix.
    std::uint64_t pct = accuracy_percent_;
    return (static_cast<std::uint64_t>(ordinal + 1) * pct) / 100 !=
           (static_cast<std::uint64_t>(ordinal) * pct) / 100;
}

std::string MockModel::answer_for(std::size_t ordinal) const {
    const BenchmarkItem& item = items_[ordinal];
    bool correct = answers_correctly(ordinal);
    std::string answer;
    if (item.task == EvalTask::mcqa) {
        char letter = item.gold.empty() ? 'A' : item.gold[0];
        if (!correct) letter = letter == 'D' ? 'A' : static_cast<char>(letter + 1);
        answer = std::string(1, letter);
    } else {
        if (correct) {
            answer = item.gold;
        } else {
            // Off-by-one CWE id, always wrong but shaped right.
            std::string digits = item.gold.substr(4);
            answer = "CWE-" + std::to_string(std::stoull(digits) + 1);
        }
    }

    if (style_ == Style::base) {
        return "Answer: " + answer + "\n";
    }
    if (item.task == EvalTask::mcqa) {
        return "Looking at the candidates, one stands out.\nAnswer: " + answer;
    }
    return "The description points at a specific weakness class.\n" + answer;
}

std::string MockModel::respond(const std::string& prompt) const {
    // The target is the question appearing last in the prompt (shots come
    // first, the evaluated item is the final block).
    std::size_t best_pos = std::string::npos;
    std::size_t best_ordinal = 0;
    bool found = false;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        std::size_t pos = prompt.rfind(items_[i].question);
        if (pos != std::string::npos && (!found || pos > best_pos)) {
            best_pos = pos;
            best_ordinal = i;
            found = true;
        }
    }
    if (!found) return "I cannot identify the question.";
    return answer_for(best_ordinal);
}

std::string MockCompletionClient::complete(const CompletionRequest& request) {
    return apply_stop_sequences(model_.respond(request.prompt), request.stop);
}

std::string apply_stop_sequences(std::string text, const std::vector<std::string>& stop) {
    std::size_t cut = std::string::npos;
    for (const std::string& s : stop) {
        if (s.empty()) continue;
        std::size_t pos = text.find(s);
        if (pos != std::string::npos && pos < cut) cut = pos;
    }
    if (cut != std::string::npos) text.resize(cut);
    return text;
}

}  // namespace seccorpus
