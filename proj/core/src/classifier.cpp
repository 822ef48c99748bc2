#include "seccorpus/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "seccorpus/error.hpp"
#include "seccorpus/hash.hpp"

namespace seccorpus {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kFeatureSeed = 0xfea7ULL;

bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<std::string> word_units(std::string_view text, unsigned cap) {
    std::vector<std::string> units;
    std::string current;
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            units.push_back(std::move(current));
            current.clear();
            if (units.size() >= cap) return units;
        }
    }
    if (!current.empty() && units.size() < cap) units.push_back(std::move(current));
    return units;
}

std::vector<std::string> char_units(std::string_view text, unsigned cap) {
    std::vector<std::string> units;
    units.reserve(std::min<std::size_t>(text.size(), cap));
    for (char raw : text) {
        if (units.size() >= cap) break;
        units.emplace_back(1, static_cast<char>(std::tolower(static_cast<unsigned char>(raw))));
    }
    return units;
}

}  // namespace

LinearTextClassifier::LinearTextClassifier(FeatureKind kind, unsigned ngram_lo, unsigned ngram_hi,
                                           std::uint32_t hash_dim, unsigned input_token_cap)
    : kind_(kind),
      ngram_lo_(ngram_lo),
      ngram_hi_(ngram_hi),
      hash_dim_(hash_dim),
      input_token_cap_(input_token_cap),
      weights_(hash_dim, 0.0f) {
    if (!is_power_of_two(hash_dim)) throw Error("classifier_config: hash_dim must be a power of two");
    if (ngram_lo == 0 || ngram_lo > ngram_hi) throw Error("classifier_config: bad n-gram range");
}

std::vector<std::pair<std::uint32_t, float>> LinearTextClassifier::featurize(
    std::string_view text) const {
    std::vector<std::string> units = kind_ == FeatureKind::word_ngrams
                                         ? word_units(text, input_token_cap_)
                                         : char_units(text, input_token_cap_);
    std::map<std::uint32_t, float> counts;
    std::string joined;
    for (unsigned n = ngram_lo_; n <= ngram_hi_; ++n) {
        if (units.size() < n) break;
        for (std::size_t i = 0; i + n <= units.size(); ++i) {
            joined.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j > 0) joined.push_back('\x1f');
                joined += units[i + j];
            }
            auto bucket = static_cast<std::uint32_t>(hash64(joined, kFeatureSeed) & (hash_dim_ - 1));
            counts[bucket] += 1.0f;
        }
    }
    double norm_sq = 0.0;
    for (const auto& [bucket, count] : counts) norm_sq += double(count) * double(count);
    float inv_norm = norm_sq > 0.0 ? static_cast<float>(1.0 / std::sqrt(norm_sq)) : 0.0f;

    std::vector<std::pair<std::uint32_t, float>> features;
    features.reserve(counts.size());
    for (const auto& [bucket, count] : counts) features.emplace_back(bucket, count * inv_norm);
    return features;
}

double LinearTextClassifier::score(std::string_view text) const {
    double z = bias_;
    for (const auto& [bucket, value] : featurize(text)) {
        z += static_cast<double>(weights_[bucket]) * static_cast<double>(value);
    }
    return logistic(z);
}

void LinearTextClassifier::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("model_io: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    auto write_u = [&out](auto v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
    write_u(kVersion);
    write_u(static_cast<std::uint32_t>(kind_));
    write_u(static_cast<std::uint32_t>(ngram_lo_));
    write_u(static_cast<std::uint32_t>(ngram_hi_));
    write_u(hash_dim_);
    write_u(static_cast<std::uint32_t>(input_token_cap_));
    write_u(bias_);
    out.write(reinterpret_cast<const char*>(weights_.data()),
              static_cast<std::streamsize>(weights_.size() * sizeof(float)));
    if (!out) throw Error("model_io: short write to " + path);
}

LinearTextClassifier LinearTextClassifier::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("model_io: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("model_io: bad magic in " + path);
    auto read_u = [&in, &path](auto& v) {
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw Error("model_io: truncated file " + path);
    };
    std::uint32_t version;
    read_u(version);
    if (version != kVersion) {
        throw Error("model_io: unsupported model version " + std::to_string(version) + " in " + path);
    }
    std::uint32_t kind, lo, hi, dim, cap;
    double bias;
    read_u(kind);
    read_u(lo);
    read_u(hi);
    read_u(dim);
    read_u(cap);
    read_u(bias);
    if (kind > 1) throw Error("model_io: bad feature kind in " + path);
    LinearTextClassifier clf(static_cast<FeatureKind>(kind), lo, hi, dim, cap);
    clf.bias_ = bias;
    in.read(reinterpret_cast<char*>(clf.weights_.data()),
            static_cast<std::streamsize>(clf.weights_.size() * sizeof(float)));
    if (!in) throw Error("model_io: truncated weights in " + path);
    return clf;
}

LinearTextClassifier train_classifier(const std::vector<std::pair<std::string, int>>& labeled,
                                      const ClassifierConfig& config) {
    bool has_pos = false;
    bool has_neg = false;
    for (const auto& [text, label] : labeled) {
        if (label == 1) has_pos = true;
        else if (label == 0) has_neg = true;
        else throw Error("degenerate_labels: labels must be 0 or 1");
    }
    if (!has_pos || !has_neg) throw Error("degenerate_labels: training data contains a single class");

    LinearTextClassifier clf(config.feature_kind, config.ngram_lo, config.ngram_hi,
                             config.hash_dim, config.input_token_cap);

    // Featurize once; SGD passes only touch the sparse vectors.
    std::vector<std::vector<std::pair<std::uint32_t, float>>> features;
    features.reserve(labeled.size());
    for (const auto& [text, label] : labeled) features.push_back(clf.featurize(text));

    std::vector<std::size_t> order(labeled.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed);

    for (unsigned epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with raw engine output: shuffle order is identical on
        // every platform, unlike std::shuffle.
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t idx : order) {
            const auto& x = features[idx];
            double y = labeled[idx].second;
            double z = clf.bias_;
            for (const auto& [bucket, value] : x) {
                z += static_cast<double>(clf.weights_[bucket]) * static_cast<double>(value);
            }
            double gradient = logistic(z) - y;
            double step = config.learning_rate * gradient;
            for (const auto& [bucket, value] : x) {
                clf.weights_[bucket] -= static_cast<float>(step * static_cast<double>(value));
            }
            clf.bias_ -= step;
        }
    }
    return clf;
}

FilterVerdict classify(const LinearTextClassifier& clf, std::string_view text, double threshold) {
    FilterVerdict verdict;
    verdict.filter_name = "classifier";
    verdict.score = clf.score(text);
    verdict.passed = verdict.score >= threshold;
    verdict.reason = verdict.passed ? "above_threshold" : "below_threshold";
    return verdict;
}

double language_score(const LinearTextClassifier& clf_lang, std::string_view text) {
    return clf_lang.score(text);
}

}  // namespace seccorpus
