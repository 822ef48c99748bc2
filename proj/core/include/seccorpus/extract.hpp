#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace seccorpus {

enum class FormatKind { html, plain_text, markdown, pdf_external, unknown };
enum class DetectSource { header_magic, content_type, extension, fallback };

struct DetectedFormat {
    FormatKind kind = FormatKind::unknown;
    DetectSource confidence = DetectSource::fallback;
};

const char* format_kind_name(FormatKind kind);

// Precedence: magic bytes > Content-Type header > URL extension > fallback
// (plain text when the body is valid UTF-8, unknown otherwise). Total.
DetectedFormat detect_format(std::string_view body, std::string_view content_type,
                             std::string_view url);

struct ExtractConfig {
    std::size_t max_bytes = 8u << 20;   // larger inputs drop with "oversize"
    std::string external_pdf_command;   // stdin bytes -> stdout markdown
};

struct ExtractedDoc {
    std::string doc_id;  // content address of the raw body
    std::string source_url;
    std::string text;  // markdown, valid UTF-8, no NUL bytes
    std::string extractor_name;
    std::size_t char_count = 0;
};

struct ExtractOutcome {
    std::optional<ExtractedDoc> doc;
    std::string drop_reason;  // set iff doc is empty

    bool kept() const { return doc.has_value(); }
};

// Deterministic: identical bytes give byte-identical output.
ExtractOutcome extract_text(std::string_view body, std::string_view content_type,
                            std::string_view url, const ExtractConfig& config = {});

}  // namespace seccorpus
