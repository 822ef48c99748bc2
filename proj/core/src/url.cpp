#include "seccorpus/url.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>
#include <vector>

namespace seccorpus {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '-' || c == '.';
    });
}

int default_port(const std::string& scheme) {
    if (scheme == "http") return 80;
    if (scheme == "https") return 443;
    return -1;
}

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (input.rfind("../", 0) == 0) {
            input.erase(0, 3);
        } else if (input.rfind("./", 0) == 0) {
            input.erase(0, 2);
        } else if (input.rfind("/./", 0) == 0) {
            input.replace(0, 3, "/");
        } else if (input == "/.") {
            input = "/";
        } else if (input.rfind("/../", 0) == 0) {
            input.replace(0, 4, "/");
            auto pos = output.find_last_of('/');
            output.erase(pos == std::string::npos ? 0 : pos);
        } else if (input == "/..") {
            input = "/";
            auto pos = output.find_last_of('/');
            output.erase(pos == std::string::npos ? 0 : pos);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            std::size_t start = input[0] == '/' ? 1 : 0;
            auto next = input.find('/', start);
            output.append(input.substr(0, next == std::string::npos ? input.size() : next));
            input.erase(0, next == std::string::npos ? input.size() : next);
        }
    }
    return output;
}

// Multi-label entries of a reduced public suffix list; single labels are
// handled by the fallback rule (last label is always a suffix).
const std::unordered_set<std::string>& multi_label_suffixes() {
    static const std::unordered_set<std::string> suffixes = {
        "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk",
        "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
        "com.au", "net.au", "org.au", "edu.au", "gov.au",
        "com.br", "net.br", "org.br", "gov.br",
        "com.cn", "net.cn", "org.cn", "gov.cn", "edu.cn",
        "co.in", "net.in", "org.in", "gov.in", "ac.in",
        "co.kr", "or.kr", "ac.kr", "go.kr",
        "co.nz", "net.nz", "org.nz", "govt.nz",
        "co.za", "org.za", "web.za", "gov.za",
        "com.mx", "org.mx", "gob.mx",
        "com.tw", "org.tw", "gov.tw",
        "com.sg", "org.sg", "gov.sg", "edu.sg",
        "com.hk", "org.hk", "gov.hk",
        "co.il", "org.il", "gov.il", "ac.il",
        "com.tr", "org.tr", "gov.tr", "edu.tr",
        "com.ar", "org.ar", "gob.ar",
        "com.ru", "org.ru", "gov.ru",
        "com.pl", "org.pl", "gov.pl", "edu.pl",
        "com.ua", "org.ua", "gov.ua",
    };
    return suffixes;
}

bool looks_like_ipv4(std::string_view host) {
    int dots = 0;
    for (char c : host) {
        if (c == '.') {
            ++dots;
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return dots == 3;
}

}  // namespace

std::string ParsedUrl::to_string() const {
    std::string out = scheme + "://";
    if (!userinfo.empty()) out += userinfo + "@";
    out += host;
    if (port >= 0 && port != default_port(scheme)) out += ":" + std::to_string(port);
    out += path.empty() ? "/" : path;
    if (!query.empty()) out += "?" + query;
    return out;
}

std::optional<ParsedUrl> parse_url(std::string_view url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
    std::string_view scheme = url.substr(0, scheme_end);
    if (!valid_scheme(scheme)) return std::nullopt;

    ParsedUrl out;
    out.scheme = to_lower(scheme);

    std::string_view rest = url.substr(scheme_end + 3);
    if (auto frag = rest.find('#'); frag != std::string_view::npos) rest = rest.substr(0, frag);

    auto authority_end = rest.find_first_of("/?");
    std::string_view authority = rest.substr(0, authority_end);
    std::string_view path_query =
        authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);

    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        out.userinfo = std::string(authority.substr(0, at));
        authority = authority.substr(at + 1);
    }

    std::string_view host = authority;
    if (!host.empty() && host[0] == '[') {  // IPv6 literal
        auto close = host.find(']');
        if (close == std::string_view::npos) return std::nullopt;
        out.host = to_lower(host.substr(0, close + 1));
        host = host.substr(close + 1);
        if (!host.empty()) {
            if (host[0] != ':') return std::nullopt;
            host = host.substr(1);
        }
    } else if (auto colon = host.rfind(':'); colon != std::string_view::npos) {
        out.host = to_lower(host.substr(0, colon));
        host = host.substr(colon + 1);
    } else {
        out.host = to_lower(host);
        host = {};
    }

    if (!host.empty()) {
        int port = 0;
        for (char c : host) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            port = port * 10 + (c - '0');
            if (port > 65535) return std::nullopt;
        }
        out.port = port;
    }

    if (out.host.empty() && (out.scheme == "http" || out.scheme == "https")) return std::nullopt;

    if (auto q = path_query.find('?'); q != std::string_view::npos) {
        out.path = std::string(path_query.substr(0, q));
        out.query = std::string(path_query.substr(q + 1));
    } else {
        out.path = std::string(path_query);
    }
    return out;
}

std::optional<std::string> normalize_url(std::string_view raw, std::string_view base) {
    if (auto frag = raw.find('#'); frag != std::string_view::npos) raw = raw.substr(0, frag);

    std::optional<ParsedUrl> parsed = parse_url(raw);
    if (!parsed) {
        // Looks absolute (has a scheme marker) but failed to parse: reject
        // rather than resolving "ht!tp::bad" as a relative path.
        if (raw.find("://") != std::string_view::npos) return std::nullopt;
        if (base.empty()) return std::nullopt;
        auto base_parsed = parse_url(base);
        if (!base_parsed) return std::nullopt;

        ParsedUrl merged = *base_parsed;
        merged.query.clear();
        if (!raw.empty() && raw[0] == '?') {
            merged.path = base_parsed->path;
            merged.query = std::string(raw.substr(1));
        } else if (!raw.empty() && raw[0] == '/') {
            std::string_view pq = raw;
            if (auto q = pq.find('?'); q != std::string_view::npos) {
                merged.path = std::string(pq.substr(0, q));
                merged.query = std::string(pq.substr(q + 1));
            } else {
                merged.path = std::string(pq);
            }
        } else if (!raw.empty()) {
            std::string_view pq = raw;
            std::string rel_path;
            if (auto q = pq.find('?'); q != std::string_view::npos) {
                rel_path = std::string(pq.substr(0, q));
                merged.query = std::string(pq.substr(q + 1));
            } else {
                rel_path = std::string(pq);
            }
            std::string base_dir = base_parsed->path;
            auto slash = base_dir.find_last_of('/');
            base_dir = slash == std::string::npos ? "/" : base_dir.substr(0, slash + 1);
            merged.path = base_dir + rel_path;
        } else {
            merged.path = base_parsed->path;
            merged.query = base_parsed->query;
        }
        parsed = merged;
    }

    if (parsed->path.empty()) {
        parsed->path = "/";
    } else {
        parsed->path = remove_dot_segments(parsed->path);
        if (parsed->path.empty() || parsed->path[0] != '/') parsed->path = "/" + parsed->path;
    }
    if (parsed->port == default_port(parsed->scheme)) parsed->port = -1;
    return parsed->to_string();
}

std::string registrable_domain(std::string_view host) {
    std::string h = to_lower(host);
    while (!h.empty() && h.back() == '.') h.pop_back();
    if (h.empty() || h[0] == '[' || looks_like_ipv4(h)) return h;

    std::vector<std::string> labels;
    std::size_t start = 0;
    while (start <= h.size()) {
        auto dot = h.find('.', start);
        labels.push_back(h.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (labels.size() <= 1) return h;

    const auto& multi = multi_label_suffixes();
    if (labels.size() >= 3) {
        std::string last2 = labels[labels.size() - 2] + "." + labels.back();
        if (multi.count(last2) > 0) {
            return labels[labels.size() - 3] + "." + last2;
        }
    }
    if (labels.size() == 2 && multi.count(h) > 0) return h;  // bare suffix
    return labels[labels.size() - 2] + "." + labels.back();
}

}  // namespace seccorpus
