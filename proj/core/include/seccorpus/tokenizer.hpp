#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace seccorpus {

using TokenId = std::uint32_t;

class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<TokenId> tokenize(std::string_view text) const = 0;
    virtual std::string detokenize(const std::vector<TokenId>& ids) const = 0;
    virtual TokenId eos_id() const = 0;
    virtual std::uint32_t vocab_size() const = 0;
    virtual std::string name() const = 0;
};

// Reference tokenizer: one token per byte (ids 0-255), eos 256, vocab 257.
// tokenize/detokenize round-trips any byte string.
class ByteTokenizer final : public Tokenizer {
public:
    std::vector<TokenId> tokenize(std::string_view text) const override;
    std::string detokenize(const std::vector<TokenId>& ids) const override;
    TokenId eos_id() const override { return 256; }
    std::uint32_t vocab_size() const override { return 257; }
    std::string name() const override { return "byte"; }
};

// BPE-style vocab loaded from a JSON file:
//   {"vocab": {"a": 0, ...}, "merges": ["a b", ...], "eos_token": "</s>",
//    "unk_token": "<unk>"}
// Encoding applies merges greedily in rank order over UTF-8 character
// symbols. Malformed files fail at load time.
class VocabTokenizer final : public Tokenizer {
public:
    static VocabTokenizer load(const std::string& path);

    std::vector<TokenId> tokenize(std::string_view text) const override;
    std::string detokenize(const std::vector<TokenId>& ids) const override;
    TokenId eos_id() const override { return eos_id_; }
    std::uint32_t vocab_size() const override { return vocab_size_; }
    std::string name() const override { return "vocab"; }

private:
    std::map<std::string, TokenId> vocab_;
    std::vector<std::string> id_to_token_;
    std::map<std::pair<std::string, std::string>, std::size_t> merge_rank_;
    TokenId eos_id_ = 0;
    TokenId unk_id_ = 0;
    bool has_unk_ = false;
    std::uint32_t vocab_size_ = 0;
};

// "byte" or "vocab:<path>" as accepted by the CLI --tokenizer flag.
std::unique_ptr<Tokenizer> make_tokenizer(const std::string& selector);

}  // namespace seccorpus
