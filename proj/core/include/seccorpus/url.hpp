#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace seccorpus {

struct ParsedUrl {
    std::string scheme;    // lowercase
    std::string userinfo;  // without trailing '@', usually empty
    std::string host;      // lowercase
    int port = -1;         // -1 = none
    std::string path;      // starts with '/' when non-empty host present
    std::string query;     // without '?'

    std::string to_string() const;
};

// Splits an absolute URL. Fails on empty scheme, invalid scheme chars or
// an empty host for http/https. Fragments are parsed and discarded.
std::optional<ParsedUrl> parse_url(std::string_view url);

// Canonical form: scheme/host lowercased, default ports dropped, dot
// segments resolved, fragment stripped, query preserved. `raw` may be
// relative to `base`; base empty means raw must be absolute.
std::optional<std::string> normalize_url(std::string_view raw, std::string_view base);

// Public-suffix-plus-one from a bundled static suffix list. IP literals and
// single-label hosts are returned as-is.
std::string registrable_domain(std::string_view host);

}  // namespace seccorpus
