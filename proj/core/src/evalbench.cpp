#include "seccorpus/evalbench.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

const char* eval_task_name(EvalTask task) { return task == EvalTask::mcqa ? "mcqa" : "rcm"; }

BenchmarkFormat BenchmarkFormat::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("benchmark_format: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("benchmark_format: invalid JSON in " + path);

    BenchmarkFormat format;
    std::string delim = j.value("delimiter", std::string("\t"));
    if (delim.size() != 1) throw Error("benchmark_format: delimiter must be one character");
    format.delimiter = delim[0];
    format.id_column = j.value("id", format.id_column);
    format.question_column = j.value("question", format.question_column);
    if (j.contains("options")) {
        format.option_columns = j["options"].get<std::vector<std::string>>();
        if (format.option_columns.size() != 4) {
            throw Error("benchmark_format: options must list exactly 4 columns");
        }
    }
    format.gold_column = j.value("gold", format.gold_column);
    format.instruction = j.value("instruction", std::string());
    return format;
}

std::vector<std::string> split_delimited(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

const std::regex& cwe_id_re() {
    static const std::regex re(R"(^CWE-\d+$)");
    return re;
}

std::string normalize_gold_letter(std::string gold) {
    // Accept "d", " D ", "(D)".
    std::string cleaned;
    for (char c : gold) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') cleaned.push_back(c);
    }
    if (cleaned.size() == 1) {
        char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(cleaned[0])));
        if (upper >= 'A' && upper <= 'D') return std::string(1, upper);
    }
    return {};
}

std::string normalize_gold_cwe(std::string gold) {
    std::string trimmed;
    for (char c : gold) {
        if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    }
    std::string upper = trimmed;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (std::regex_match(upper, cwe_id_re())) return upper;
    // Bare digits also accepted ("89" -> "CWE-89").
    if (!trimmed.empty() && std::all_of(trimmed.begin(), trimmed.end(), [](unsigned char c) {
            return std::isdigit(c);
        })) {
        return "CWE-" + trimmed;
    }
    return {};
}

}  // namespace

BenchmarkLoadResult load_benchmark(const std::string& path, EvalTask task,
                                   const BenchmarkFormat& format, bool lenient) {
    std::ifstream in(path);
    if (!in) throw Error("benchmark_load: cannot open " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw Error("benchmark_load: empty file " + path);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();

    std::vector<std::string> header = split_delimited(header_line, format.delimiter);
    auto column_index = [&header](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };

    auto question_col = column_index(format.question_column);
    auto gold_col = column_index(format.gold_column);
    auto id_col = column_index(format.id_column);
    if (!question_col) throw Error("benchmark_load: missing column " + format.question_column);
    if (!gold_col) throw Error("benchmark_load: missing column " + format.gold_column);

    std::vector<std::size_t> option_cols;
    if (task == EvalTask::mcqa) {
        for (const std::string& name : format.option_columns) {
            auto col = column_index(name);
            if (!col) throw Error("benchmark_load: missing column " + name);
            option_cols.push_back(*col);
        }
    }

    BenchmarkLoadResult result;
    std::string line;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields = split_delimited(line, format.delimiter);
        auto field = [&fields](std::size_t idx) -> std::string {
            return idx < fields.size() ? fields[idx] : std::string();
        };

        std::string error;
        BenchmarkItem item;
        item.task = task;
        item.item_id = id_col ? field(*id_col) : std::to_string(line_number - 1);
        if (item.item_id.empty()) item.item_id = std::to_string(line_number - 1);
        item.question = field(*question_col);

        if (item.question.empty()) {
            error = "empty question";
        } else if (task == EvalTask::mcqa) {
            for (std::size_t i = 0; i < option_cols.size() && error.empty(); ++i) {
                std::string value = field(option_cols[i]);
                if (value.empty()) {
                    error = "missing option " + std::string(1, static_cast<char>('A' + i));
                } else {
                    item.options[static_cast<char>('A' + i)] = value;
                }
            }
            if (error.empty()) {
                item.gold = normalize_gold_letter(field(*gold_col));
                if (item.gold.empty()) error = "gold answer must be one of A-D";
            }
        } else {
            item.gold = normalize_gold_cwe(field(*gold_col));
            if (item.gold.empty()) error = "gold answer must look like CWE-<digits>";
        }

        if (!error.empty()) {
            std::string message = std::to_string(line_number) + ": " + error;
            if (!lenient) throw Error("benchmark_load: " + path + ":" + message);
            result.row_errors.push_back(message);
            continue;
        }
        result.items.push_back(std::move(item));
    }
    if (result.items.empty()) throw Error("benchmark_load: no valid rows in " + path);
    return result;
}

}  // namespace seccorpus
