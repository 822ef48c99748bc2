#include "seccorpus/html.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "seccorpus/url.hpp"

namespace seccorpus {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Tag {
    std::string name;  // lowercase
    bool closing = false;
    bool self_closing = false;
    std::vector<std::pair<std::string, std::string>> attrs;

    std::string attr(const std::string& key) const {
        for (const auto& [k, v] : attrs) {
            if (k == key) return v;
        }
        return {};
    }
};

// Tolerant SAX-style tokenizer. Raw-text elements (script/style/...) swallow
// their content up to the matching close tag so nothing inside ever surfaces
// as text. Never throws on malformed input.
class HtmlTokenizer {
public:
    explicit HtmlTokenizer(std::string_view html) : html_(html) {}

    // Returns false at end of input. Exactly one of *tag / *text is filled.
    bool next(Tag* tag, std::string* text) {
        text->clear();
        while (pos_ < html_.size()) {
            if (html_[pos_] != '<') {
                std::size_t start = pos_;
                pos_ = html_.find('<', pos_);
                if (pos_ == std::string_view::npos) pos_ = html_.size();
                *text = std::string(html_.substr(start, pos_ - start));
                return true;
            }
            if (try_skip_comment_or_decl()) continue;
            if (parse_tag(tag)) {
                if (!tag->closing && is_raw_text_element(tag->name)) skip_raw_content(tag->name);
                return true;
            }
            // Lone '<' that is not a tag: emit it as text.
            *text = "<";
            ++pos_;
            return true;
        }
        return false;
    }

private:
    static bool is_raw_text_element(const std::string& name) {
        return name == "script" || name == "style" || name == "textarea" || name == "title";
    }

    bool try_skip_comment_or_decl() {
        if (html_.compare(pos_, 4, "<!--") == 0) {
            auto end = html_.find("-->", pos_ + 4);
            pos_ = end == std::string_view::npos ? html_.size() : end + 3;
            return true;
        }
        if (pos_ + 1 < html_.size() && (html_[pos_ + 1] == '!' || html_[pos_ + 1] == '?')) {
            auto end = html_.find('>', pos_ + 1);
            pos_ = end == std::string_view::npos ? html_.size() : end + 1;
            return true;
        }
        return false;
    }

    bool parse_tag(Tag* tag) {
        std::size_t p = pos_ + 1;
        bool closing = false;
        if (p < html_.size() && html_[p] == '/') {
            closing = true;
            ++p;
        }
        std::size_t name_start = p;
        while (p < html_.size() && (std::isalnum(static_cast<unsigned char>(html_[p])) ||
                                    html_[p] == '-' || html_[p] == ':')) {
            ++p;
        }
        if (p == name_start) return false;

        tag->name = to_lower(html_.substr(name_start, p - name_start));
        tag->closing = closing;
        tag->self_closing = false;
        tag->attrs.clear();

        while (p < html_.size() && html_[p] != '>') {
            while (p < html_.size() && std::isspace(static_cast<unsigned char>(html_[p]))) ++p;
            if (p >= html_.size() || html_[p] == '>') break;
            if (html_[p] == '/') {
                tag->self_closing = true;
                ++p;
                continue;
            }
            std::size_t key_start = p;
            while (p < html_.size() && !std::isspace(static_cast<unsigned char>(html_[p])) &&
                   html_[p] != '=' && html_[p] != '>' && html_[p] != '/') {
                ++p;
            }
            std::string key = to_lower(html_.substr(key_start, p - key_start));
            std::string value;
            while (p < html_.size() && std::isspace(static_cast<unsigned char>(html_[p]))) ++p;
            if (p < html_.size() && html_[p] == '=') {
                ++p;
                while (p < html_.size() && std::isspace(static_cast<unsigned char>(html_[p]))) ++p;
                if (p < html_.size() && (html_[p] == '"' || html_[p] == '\'')) {
                    char quote = html_[p++];
                    std::size_t val_start = p;
                    while (p < html_.size() && html_[p] != quote) ++p;
                    value = std::string(html_.substr(val_start, p - val_start));
                    if (p < html_.size()) ++p;
                } else {
                    std::size_t val_start = p;
                    while (p < html_.size() && !std::isspace(static_cast<unsigned char>(html_[p])) &&
                           html_[p] != '>') {
                        ++p;
                    }
                    value = std::string(html_.substr(val_start, p - val_start));
                }
            }
            if (!key.empty()) tag->attrs.emplace_back(std::move(key), std::move(value));
        }
        pos_ = p < html_.size() ? p + 1 : html_.size();
        return true;
    }

    void skip_raw_content(const std::string& name) {
        std::string close = "</" + name;
        std::size_t p = pos_;
        while (p + close.size() <= html_.size()) {
            if (html_[p] == '<') {
                bool match = true;
                for (std::size_t i = 0; i < close.size(); ++i) {
                    if (std::tolower(static_cast<unsigned char>(html_[p + i])) != close[i]) {
                        match = false;
                        break;
                    }
                }
                if (match) {
                    auto end = html_.find('>', p);
                    pos_ = end == std::string_view::npos ? html_.size() : end + 1;
                    return;
                }
            }
            ++p;
        }
        pos_ = html_.size();
    }

    std::string_view html_;
    std::size_t pos_ = 0;
};

const std::unordered_map<std::string, std::uint32_t>& named_entities() {
    static const std::unordered_map<std::string, std::uint32_t> entities = {
        {"amp", '&'},   {"lt", '<'},     {"gt", '>'},    {"quot", '"'},
        {"apos", '\''}, {"nbsp", ' '},   {"copy", 0xA9}, {"reg", 0xAE},
        {"mdash", 0x2014}, {"ndash", 0x2013}, {"hellip", 0x2026},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
        {"times", 0xD7}, {"middot", 0xB7}, {"bull", 0x2022},
    };
    return entities;
}

void append_codepoint(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Markdown assembly out of tokenizer events.
class MarkdownBuilder {
public:
    void on_tag(const Tag& tag) {
        if (tag.closing) {
            on_close(tag.name);
        } else {
            on_open(tag);
            if (tag.self_closing && !is_void_element(tag.name)) on_close(tag.name);
        }
    }

    void on_text(const std::string& raw) {
        if (drop_depth_ > 0) return;
        if (pre_depth_ > 0) {
            pre_content_ += decode_entities(raw);
            return;
        }
        append_inline(decode_entities(raw));
    }

    std::string finish() {
        flush_block();
        std::string out;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (i > 0) {
                // Sibling list items and table rows stay in one block.
                bool tight = blocks_[i].kind != BlockKind::normal &&
                             blocks_[i].kind == blocks_[i - 1].kind;
                out += tight ? "\n" : "\n\n";
            }
            out += blocks_[i].text;
        }
        return out;
    }

private:
    static bool is_void_element(const std::string& name) {
        static const std::unordered_set<std::string> voids = {
            "br", "hr", "img", "input", "meta", "link", "area", "base", "col",
            "embed", "source", "track", "wbr",
        };
        return voids.count(name) > 0;
    }

    static bool is_dropped_element(const std::string& name) {
        static const std::unordered_set<std::string> dropped = {
            "script", "style", "nav", "footer", "head", "noscript", "template",
            "iframe", "svg",
        };
        return dropped.count(name) > 0;
    }

    static bool is_block_boundary(const std::string& name) {
        static const std::unordered_set<std::string> blocks = {
            "p", "div", "section", "article", "main", "blockquote", "ul", "ol",
            "table", "tbody", "thead", "header", "aside", "figure", "figcaption",
            "dl", "dt", "dd", "body", "html", "form", "fieldset",
        };
        return blocks.count(name) > 0;
    }

    void on_open(const Tag& tag) {
        const std::string& name = tag.name;
        if (is_dropped_element(name)) {
            ++drop_depth_;
            drop_stack_.push_back(name);
            return;
        }
        if (drop_depth_ > 0) return;

        if (name == "pre") {
            flush_block();
            ++pre_depth_;
            return;
        }
        if (pre_depth_ > 0) return;  // tags inside pre contribute nothing

        if (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6') {
            flush_block();
            heading_level_ = name[1] - '0';
        } else if (name == "li") {
            flush_block();
            in_list_item_ = true;
        } else if (name == "ul" || name == "ol") {
            flush_block();
            ++list_depth_;
        } else if (name == "tr") {
            flush_block();
            row_cells_.clear();
            in_row_ = true;
            row_has_header_cells_ = false;
        } else if (name == "td" || name == "th") {
            if (in_row_) {
                cell_.clear();
                in_cell_ = true;
                if (name == "th") row_has_header_cells_ = true;
            }
        } else if (name == "a") {
            link_href_ = tag.attr("href");
            link_text_.clear();
            in_link_ = true;
        } else if (name == "code") {
            ++code_depth_;
            append_raw("`");
        } else if (name == "br") {
            current_ += "\n";
        } else if (is_block_boundary(name)) {
            flush_block();
        }
    }

    void on_close(const std::string& name) {
        if (drop_depth_ > 0) {
            if (!drop_stack_.empty() && drop_stack_.back() == name) {
                drop_stack_.pop_back();
                --drop_depth_;
            }
            return;
        }

        if (name == "pre") {
            if (pre_depth_ > 0 && --pre_depth_ == 0) {
                emit_fence();
            }
            return;
        }
        if (pre_depth_ > 0) return;

        if (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6') {
            flush_block();
            heading_level_ = 0;
        } else if (name == "li") {
            flush_block();
            in_list_item_ = false;
        } else if (name == "ul" || name == "ol") {
            flush_block();
            if (list_depth_ > 0) --list_depth_;
        } else if (name == "td" || name == "th") {
            if (in_cell_) {
                row_cells_.push_back(trim(cell_));
                in_cell_ = false;
            }
        } else if (name == "tr") {
            emit_row();
            in_row_ = false;
        } else if (name == "table") {
            flush_block();
            table_header_emitted_ = false;
        } else if (name == "a") {
            if (in_link_) {
                in_link_ = false;
                std::string text = trim(link_text_);
                if (!text.empty() && !link_href_.empty()) {
                    append_raw("[" + text + "](" + link_href_ + ")");
                } else if (!text.empty()) {
                    append_raw(text);
                }
            }
        } else if (name == "code") {
            if (code_depth_ > 0) {
                --code_depth_;
                append_raw("`");
            }
        } else if (is_block_boundary(name)) {
            flush_block();
        }
    }

    static std::string trim(const std::string& s) {
        std::size_t b = 0;
        std::size_t e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    // Inline text: HTML whitespace runs collapse to one space.
    void append_inline(const std::string& text) {
        std::string* sink = sink_for_inline();
        for (char raw : text) {
            auto c = static_cast<unsigned char>(raw);
            if (std::isspace(c) && c != '\n') {
                if (!sink->empty() && sink->back() != ' ' && sink->back() != '\n') sink->push_back(' ');
            } else if (c == '\n') {
                if (!sink->empty() && sink->back() != ' ' && sink->back() != '\n') sink->push_back(' ');
            } else {
                sink->push_back(raw);
            }
        }
    }

    void append_raw(const std::string& text) { sink_for_inline()->append(text); }

    std::string* sink_for_inline() {
        if (in_link_) return &link_text_;
        if (in_cell_) return &cell_;
        return &current_;
    }

    void flush_block() {
        std::string text = trim(current_);
        current_.clear();
        if (text.empty()) {
            heading_level_ = 0;
            return;
        }
        // A block never carries more than one blank line internally.
        std::string collapsed;
        int newline_run = 0;
        for (char c : text) {
            if (c == '\n') {
                if (++newline_run <= 2) collapsed.push_back(c);
            } else {
                newline_run = 0;
                collapsed.push_back(c);
            }
        }
        text = std::move(collapsed);

        if (heading_level_ > 0) {
            blocks_.push_back({std::string(static_cast<std::size_t>(heading_level_), '#') + " " + text,
                               BlockKind::normal});
        } else if (in_list_item_) {
            std::string indent(list_depth_ > 1 ? (list_depth_ - 1) * 2 : 0, ' ');
            blocks_.push_back({indent + "- " + text, BlockKind::list_item});
        } else {
            blocks_.push_back({text, BlockKind::normal});
        }
    }

    void emit_fence() {
        std::string content = pre_content_;
        pre_content_.clear();
        while (!content.empty() && (content.back() == '\n' || content.back() == '\r')) content.pop_back();
        while (!content.empty() && (content.front() == '\n' || content.front() == '\r')) content.erase(0, 1);
        blocks_.push_back({"```\n" + content + "\n```", BlockKind::normal});
    }

    void emit_row() {
        if (in_cell_) {  // unterminated cell
            row_cells_.push_back(trim(cell_));
            in_cell_ = false;
        }
        if (row_cells_.empty()) return;
        std::string row = "|";
        for (const std::string& cell : row_cells_) row += " " + cell + " |";
        blocks_.push_back({row, BlockKind::table_row});
        if (row_has_header_cells_ && !table_header_emitted_) {
            std::string sep = "|";
            for (std::size_t i = 0; i < row_cells_.size(); ++i) sep += " --- |";
            blocks_.push_back({sep, BlockKind::table_row});
            table_header_emitted_ = true;
        }
        row_cells_.clear();
    }

    enum class BlockKind { normal, list_item, table_row };
    struct Block {
        std::string text;
        BlockKind kind;
    };

    std::vector<Block> blocks_;
    std::string current_;

    int drop_depth_ = 0;
    std::vector<std::string> drop_stack_;

    int heading_level_ = 0;
    int list_depth_ = 0;
    bool in_list_item_ = false;

    int pre_depth_ = 0;
    std::string pre_content_;
    int code_depth_ = 0;

    bool in_link_ = false;
    std::string link_href_;
    std::string link_text_;

    bool in_row_ = false;
    bool in_cell_ = false;
    bool row_has_header_cells_ = false;
    bool table_header_emitted_ = false;
    std::vector<std::string> row_cells_;
    std::string cell_;
};

}  // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        auto semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(text[i++]);
            continue;
        }
        std::string_view body = text.substr(i + 1, semi - i - 1);
        if (!body.empty() && body[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = body.size() > 1;
            if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
                for (std::size_t j = 2; j < body.size() && ok; ++j) {
                    auto c = static_cast<unsigned char>(body[j]);
                    if (!std::isxdigit(c)) ok = false;
                    else cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(c) ? c - '0' : std::tolower(c) - 'a' + 10);
                }
            } else {
                for (std::size_t j = 1; j < body.size() && ok; ++j) {
                    if (!std::isdigit(static_cast<unsigned char>(body[j]))) ok = false;
                    else cp = cp * 10 + static_cast<std::uint32_t>(body[j] - '0');
                }
            }
            if (ok) {
                append_codepoint(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            auto it = named_entities().find(std::string(body));
            if (it != named_entities().end()) {
                append_codepoint(out, it->second);
                i = semi + 1;
                continue;
            }
        }
        out.push_back(text[i++]);
    }
    return out;
}

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        std::uint32_t min_cp;
        if (c < 0x80) { i += 1; continue; }
        else if ((c & 0xE0) == 0xC0) { len = 2; min_cp = 0x80; }
        else if ((c & 0xF0) == 0xE0) { len = 3; min_cp = 0x800; }
        else if ((c & 0xF8) == 0xF0) { len = 4; min_cp = 0x10000; }
        else return false;
        if (i + len > bytes.size()) return false;
        std::uint32_t cp = c & (0xFF >> (len + 1));
        for (std::size_t j = 1; j < len; ++j) {
            auto cont = static_cast<unsigned char>(bytes[i + j]);
            if ((cont & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cont & 0x3F);
        }
        if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

std::string sanitize_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        if (c == 0) { ++i; continue; }
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t min_cp;
        if ((c & 0xE0) == 0xC0) { len = 2; min_cp = 0x80; }
        else if ((c & 0xF0) == 0xE0) { len = 3; min_cp = 0x800; }
        else if ((c & 0xF8) == 0xF0) { len = 4; min_cp = 0x10000; }
        else { out += "\xEF\xBF\xBD"; ++i; continue; }

        bool valid = i + len <= bytes.size();
        std::uint32_t cp = c & (0xFF >> (len + 1));
        for (std::size_t j = 1; valid && j < len; ++j) {
            auto cont = static_cast<unsigned char>(bytes[i + j]);
            if ((cont & 0xC0) != 0x80) valid = false;
            else cp = (cp << 6) | (cont & 0x3F);
        }
        if (valid && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) valid = false;
        if (valid && cp == 0) valid = false;
        if (valid) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out += "\xEF\xBF\xBD";
            ++i;
        }
    }
    return out;
}

std::string html_to_markdown(std::string_view html) {
    // Tokenize the raw bytes; text nodes are sanitized on output.
    MarkdownBuilder builder;
    Tag tag;
    std::string text;
    HtmlTokenizer tok(html);
    while (tok.next(&tag, &text)) {
        if (!text.empty()) {
            builder.on_text(sanitize_utf8(text));
        } else if (!tag.name.empty()) {
            builder.on_tag(tag);
        }
    }
    return builder.finish();
}

std::vector<std::string> extract_links(std::string_view html, std::string_view base_url) {
    std::vector<std::string> links;
    std::unordered_set<std::string> seen;
    HtmlTokenizer tok(html);
    Tag tag;
    std::string text;
    while (tok.next(&tag, &text)) {
        if (!tag.name.empty() && tag.name == "a" && !tag.closing) {
            std::string href = decode_entities(tag.attr("href"));
            if (href.empty()) continue;
            auto normalized = normalize_url(href, base_url);
            if (!normalized) continue;
            auto parsed = parse_url(*normalized);
            if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) continue;
            if (seen.insert(*normalized).second) links.push_back(*normalized);
        }
    }
    return links;
}

}  // namespace seccorpus
