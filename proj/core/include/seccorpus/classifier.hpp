#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seccorpus/keyword.hpp"

namespace seccorpus {

enum class FeatureKind { word_ngrams, char_ngrams };

struct ClassifierConfig {
    FeatureKind feature_kind = FeatureKind::word_ngrams;
    unsigned ngram_lo = 1;
    unsigned ngram_hi = 2;
    std::uint32_t hash_dim = 1u << 20;  // power of two
    unsigned input_token_cap = 1024;    // words (or chars for char n-grams)
    unsigned epochs = 5;
    double learning_rate = 0.1;
    std::uint64_t seed = 42;
};

// Logistic regression over hashed n-gram counts (L2-normalized). Trained
// with plain SGD over seeded shuffles; same seed and data give identical
// weights. Immutable after construction, safe for concurrent scoring.
class LinearTextClassifier {
public:
    LinearTextClassifier(FeatureKind kind, unsigned ngram_lo, unsigned ngram_hi,
                         std::uint32_t hash_dim, unsigned input_token_cap);

    double score(std::string_view text) const;  // logistic(w.phi(text) + b) in (0,1)

    FeatureKind feature_kind() const { return kind_; }
    std::uint32_t hash_dim() const { return hash_dim_; }
    unsigned input_token_cap() const { return input_token_cap_; }
    double bias() const { return bias_; }
    void set_bias(double b) { bias_ = b; }
    const std::vector<float>& weights() const { return weights_; }

    void save(const std::string& path) const;
    static LinearTextClassifier load(const std::string& path);

    // Sparse hashed features, (bucket, l2-normalized count) sorted by bucket.
    std::vector<std::pair<std::uint32_t, float>> featurize(std::string_view text) const;

private:
    friend LinearTextClassifier train_classifier(
        const std::vector<std::pair<std::string, int>>&, const ClassifierConfig&);

    FeatureKind kind_;
    unsigned ngram_lo_;
    unsigned ngram_hi_;
    std::uint32_t hash_dim_;
    unsigned input_token_cap_;
    double bias_ = 0.0;
    std::vector<float> weights_;
};

// labeled: (text, label in {0,1}); both classes must be present.
LinearTextClassifier train_classifier(const std::vector<std::pair<std::string, int>>& labeled,
                                      const ClassifierConfig& config);

// passed = score >= threshold.
FilterVerdict classify(const LinearTextClassifier& clf, std::string_view text, double threshold);

// Probability-of-English from a char-n-gram English-vs-other model. The
// pipeline gate passes iff score >= threshold (0.65 by default) but is
// disabled by default for this corpus.
double language_score(const LinearTextClassifier& clf_lang, std::string_view text);

}  // namespace seccorpus
