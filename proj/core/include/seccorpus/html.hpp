#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seccorpus {

// Best-effort conversion of possibly malformed HTML. script/style/nav/footer
// (and head-level chrome) subtrees are dropped; h1-h6 become '#' headings,
// p paragraphs, li "- " items, pre/code fenced blocks, anchors
// "[text](href)", table rows pipe rows. Output is valid UTF-8 with at most
// one blank line between blocks.
std::string html_to_markdown(std::string_view html);

// href targets of anchor elements resolved against base, http/https only,
// in-page duplicates removed, document order preserved.
std::vector<std::string> extract_links(std::string_view html, std::string_view base_url);

// Replaces invalid UTF-8 sequences with U+FFFD and drops NUL bytes.
std::string sanitize_utf8(std::string_view bytes);

bool is_valid_utf8(std::string_view bytes);

// Decodes the common named entities plus numeric character references.
std::string decode_entities(std::string_view text);

}  // namespace seccorpus
