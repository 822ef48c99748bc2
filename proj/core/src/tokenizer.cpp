#include "seccorpus/tokenizer.hpp"

#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "seccorpus/error.hpp"

namespace seccorpus {

std::vector<TokenId> ByteTokenizer::tokenize(std::string_view text) const {
    std::vector<TokenId> ids;
    ids.reserve(text.size());
    for (char c : text) ids.push_back(static_cast<unsigned char>(c));
    return ids;
}

std::string ByteTokenizer::detokenize(const std::vector<TokenId>& ids) const {
    std::string out;
    out.reserve(ids.size());
    for (TokenId id : ids) {
        if (id < 256) out.push_back(static_cast<char>(id));
    }
    return out;
}

namespace {

std::vector<std::string> utf8_symbols(std::string_view text) {
    std::vector<std::string> symbols;
    std::size_t i = 0;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        if (i + len > text.size()) len = 1;
        symbols.emplace_back(text.substr(i, len));
        i += len;
    }
    return symbols;
}

}  // namespace

VocabTokenizer VocabTokenizer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("vocab_io: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("vocab_io: invalid JSON in " + path);
    if (!j.contains("vocab") || !j["vocab"].is_object()) {
        throw Error("vocab_io: missing \"vocab\" object in " + path);
    }

    VocabTokenizer tok;
    TokenId max_id = 0;
    for (const auto& [token, id] : j["vocab"].items()) {
        if (!id.is_number_unsigned()) throw Error("vocab_io: non-integer id for token in " + path);
        auto value = id.get<TokenId>();
        if (!tok.vocab_.emplace(token, value).second) {
            throw Error("vocab_io: duplicate token in " + path);
        }
        max_id = std::max(max_id, value);
    }
    if (tok.vocab_.empty()) throw Error("vocab_io: empty vocab in " + path);
    tok.vocab_size_ = max_id + 1;
    tok.id_to_token_.assign(tok.vocab_size_, "");
    for (const auto& [token, id] : tok.vocab_) tok.id_to_token_[id] = token;

    if (j.contains("merges")) {
        if (!j["merges"].is_array()) throw Error("vocab_io: \"merges\" must be a list in " + path);
        std::size_t rank = 0;
        for (const auto& entry : j["merges"]) {
            if (!entry.is_string()) throw Error("vocab_io: merge entry must be a string in " + path);
            std::string merge = entry.get<std::string>();
            auto space = merge.find(' ');
            if (space == std::string::npos || space == 0 || space + 1 >= merge.size()) {
                throw Error("vocab_io: merge entry must be \"left right\" in " + path);
            }
            tok.merge_rank_[{merge.substr(0, space), merge.substr(space + 1)}] = rank++;
        }
    }

    std::string eos_token = j.value("eos_token", std::string("</s>"));
    auto eos_it = tok.vocab_.find(eos_token);
    if (eos_it == tok.vocab_.end()) {
        throw Error("vocab_io: eos token \"" + eos_token + "\" not in vocab in " + path);
    }
    tok.eos_id_ = eos_it->second;

    if (j.contains("unk_token")) {
        auto unk_it = tok.vocab_.find(j["unk_token"].get<std::string>());
        if (unk_it == tok.vocab_.end()) throw Error("vocab_io: unk token not in vocab in " + path);
        tok.unk_id_ = unk_it->second;
        tok.has_unk_ = true;
    }
    return tok;
}

std::vector<TokenId> VocabTokenizer::tokenize(std::string_view text) const {
    std::vector<std::string> symbols = utf8_symbols(text);

    // Greedy merging: repeatedly apply the present pair with the lowest rank.
    while (symbols.size() >= 2) {
        std::size_t best_rank = std::numeric_limits<std::size_t>::max();
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
            auto it = merge_rank_.find({symbols[i], symbols[i + 1]});
            if (it != merge_rank_.end() && it->second < best_rank) {
                best_rank = it->second;
                best_pos = i;
            }
        }
        if (best_rank == std::numeric_limits<std::size_t>::max()) break;
        symbols[best_pos] += symbols[best_pos + 1];
        symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
    }

    std::vector<TokenId> ids;
    ids.reserve(symbols.size());
    for (const std::string& symbol : symbols) {
        auto it = vocab_.find(symbol);
        if (it != vocab_.end()) {
            ids.push_back(it->second);
        } else if (has_unk_) {
            ids.push_back(unk_id_);
        } else {
            throw Error("vocab_tokenize: symbol not in vocab and no unk token configured");
        }
    }
    return ids;
}

std::string VocabTokenizer::detokenize(const std::vector<TokenId>& ids) const {
    std::string out;
    for (TokenId id : ids) {
        if (id < id_to_token_.size()) out += id_to_token_[id];
    }
    return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& selector) {
    if (selector == "byte") return std::make_unique<ByteTokenizer>();
    if (selector.rfind("vocab:", 0) == 0) {
        return std::make_unique<VocabTokenizer>(VocabTokenizer::load(selector.substr(6)));
    }
    throw Error("tokenizer: unknown selector \"" + selector + "\" (expected byte or vocab:FILE)");
}

}  // namespace seccorpus
