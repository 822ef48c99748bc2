#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seccorpus {

enum class EvalTask { mcqa, rcm };

const char* eval_task_name(EvalTask task);

struct BenchmarkItem {
    std::string item_id;
    EvalTask task = EvalTask::mcqa;
    std::string question;                    // CVE description for rcm
    std::map<char, std::string> options;     // 'A'..'D', mcqa only
    std::string gold;                        // "A".."D" or "CWE-<digits>"
};

// Column mapping for delimiter-separated benchmark files with a header row.
// Loaded from JSON: {"delimiter": "\t", "id": "id", "question": "question",
// "options": ["option_a", ...], "gold": "answer", "instruction": "..."}.
struct BenchmarkFormat {
    char delimiter = '\t';
    std::string id_column = "id";           // optional; row number when absent
    std::string question_column = "question";
    std::vector<std::string> option_columns = {"option_a", "option_b", "option_c", "option_d"};
    std::string gold_column = "answer";
    std::string instruction;  // benchmark-provided zero-shot instruction, optional

    static BenchmarkFormat load(const std::string& path);
};

struct BenchmarkLoadResult {
    std::vector<BenchmarkItem> items;
    std::vector<std::string> row_errors;  // "<line>: <reason>", lenient mode only
};

// Parses an RFC4180-style delimited file (quoted fields allowed). Any row
// error fails the load unless lenient, in which case bad rows are skipped
// and reported.
BenchmarkLoadResult load_benchmark(const std::string& path, EvalTask task,
                                   const BenchmarkFormat& format = {}, bool lenient = false);

// Split one delimited line honoring double quotes. Exposed for tests.
std::vector<std::string> split_delimited(const std::string& line, char delimiter);

}  // namespace seccorpus
