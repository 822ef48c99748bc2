#include "seccorpus/extract.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "seccorpus/hash.hpp"
#include "seccorpus/html.hpp"
#include "seccorpus/log.hpp"
#include "seccorpus/url.hpp"

namespace seccorpus {

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

std::string_view skip_leading_space(std::string_view s) {
    std::size_t i = 0;
    // UTF-8 BOM
    if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

std::optional<FormatKind> detect_by_magic(std::string_view body) {
    if (body.rfind("%PDF-", 0) == 0) return FormatKind::pdf_external;
    std::string_view head = skip_leading_space(body).substr(0, 256);
    if (starts_with_ci(head, "<!doctype html") || starts_with_ci(head, "<html") ||
        starts_with_ci(head, "<head") || starts_with_ci(head, "<body")) {
        return FormatKind::html;
    }
    // Common binary container magics: detected, but not extractable.
    static const std::string_view binary_magics[] = {
        "\x89PNG", "GIF8", "\xFF\xD8\xFF", "PK\x03\x04", "\x1F\x8B", "\x7F" "ELF", "OggS", "RIFF",
    };
    for (std::string_view magic : binary_magics) {
        if (body.size() >= magic.size() && body.compare(0, magic.size(), magic) == 0) {
            return FormatKind::unknown;
        }
    }
    return std::nullopt;
}

std::optional<FormatKind> detect_by_content_type(std::string_view content_type) {
    std::string ct;
    for (char c : content_type) {
        if (c == ';') break;
        if (!std::isspace(static_cast<unsigned char>(c))) {
            ct.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (ct.empty()) return std::nullopt;
    if (ct == "text/html" || ct == "application/xhtml+xml") return FormatKind::html;
    if (ct == "text/markdown") return FormatKind::markdown;
    if (ct == "application/pdf") return FormatKind::pdf_external;
    if (ct.rfind("text/", 0) == 0) return FormatKind::plain_text;
    return std::nullopt;
}

std::optional<FormatKind> detect_by_extension(std::string_view url) {
    auto parsed = parse_url(url);
    std::string path = parsed ? parsed->path : std::string(url);
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot == std::string::npos) return std::nullopt;
    std::string ext = name.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == "html" || ext == "htm") return FormatKind::html;
    if (ext == "md" || ext == "markdown") return FormatKind::markdown;
    if (ext == "txt" || ext == "text") return FormatKind::plain_text;
    if (ext == "pdf") return FormatKind::pdf_external;
    return std::nullopt;
}

// CRLF/CR -> LF; NULs and invalid sequences handled by sanitize_utf8.
std::string normalize_plain_text(std::string_view raw) {
    std::string text = sanitize_utf8(raw);
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

std::optional<std::string> run_external_converter(const std::string& command,
                                                  std::string_view body) {
    namespace fs = std::filesystem;
    auto stamp = hash64(body, 0xec51dULL) ^ static_cast<std::uint64_t>(::getpid());
    fs::path dir = fs::temp_directory_path();
    fs::path in_path = dir / ("seccorpus_ext_in_" + hex64(stamp));
    fs::path out_path = dir / ("seccorpus_ext_out_" + hex64(stamp));
    {
        std::ofstream out(in_path, std::ios::binary | std::ios::trunc);
        if (!out) return std::nullopt;
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
    std::string shell = command + " < '" + in_path.string() + "' > '" + out_path.string() + "'";
    int rc = std::system(shell.c_str());
    std::optional<std::string> result;
    if (rc == 0) {
        std::ifstream in(out_path, std::ios::binary);
        if (in) {
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            result = std::move(text);
        }
    } else {
        log_warn("external converter exited with status " + std::to_string(rc));
    }
    std::error_code ec;
    fs::remove(in_path, ec);
    fs::remove(out_path, ec);
    return result;
}

}  // namespace

const char* format_kind_name(FormatKind kind) {
    switch (kind) {
        case FormatKind::html: return "html";
        case FormatKind::plain_text: return "plain_text";
        case FormatKind::markdown: return "markdown";
        case FormatKind::pdf_external: return "pdf_external";
        case FormatKind::unknown: return "unknown";
    }
    return "?";
}

DetectedFormat detect_format(std::string_view body, std::string_view content_type,
                             std::string_view url) {
    if (auto kind = detect_by_magic(body)) return {*kind, DetectSource::header_magic};
    if (auto kind = detect_by_content_type(content_type)) return {*kind, DetectSource::content_type};
    if (auto kind = detect_by_extension(url)) return {*kind, DetectSource::extension};
    if (is_valid_utf8(body)) return {FormatKind::plain_text, DetectSource::fallback};
    return {FormatKind::unknown, DetectSource::fallback};
}

ExtractOutcome extract_text(std::string_view body, std::string_view content_type,
                            std::string_view url, const ExtractConfig& config) {
    ExtractOutcome outcome;
    if (body.size() > config.max_bytes) {
        outcome.drop_reason = "oversize";
        return outcome;
    }

    DetectedFormat format = detect_format(body, content_type, url);
    ExtractedDoc doc;
    doc.doc_id = content_address(body);
    doc.source_url = std::string(url);

    switch (format.kind) {
        case FormatKind::html:
            doc.text = html_to_markdown(body);
            doc.extractor_name = "html_to_markdown";
            break;
        case FormatKind::plain_text:
        case FormatKind::markdown:
            doc.text = normalize_plain_text(body);
            doc.extractor_name = "passthrough";
            break;
        case FormatKind::pdf_external: {
            if (config.external_pdf_command.empty()) {
                outcome.drop_reason = "no_external_converter";
                return outcome;
            }
            auto converted = run_external_converter(config.external_pdf_command, body);
            if (!converted) {
                outcome.drop_reason = "external_failed";
                return outcome;
            }
            doc.text = normalize_plain_text(*converted);
            doc.extractor_name = "external_pdf";
            break;
        }
        case FormatKind::unknown:
            outcome.drop_reason = "unknown_format";
            return outcome;
    }

    doc.char_count = doc.text.size();
    outcome.doc = std::move(doc);
    return outcome;
}

}  // namespace seccorpus
