#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "seccorpus/classifier.hpp"
#include "seccorpus/error.hpp"
#include "seccorpus/filters.hpp"

using namespace seccorpus;

namespace {

// Two disjoint vocabularies -> linearly separable by construction.
std::vector<std::pair<std::string, int>> separable_corpus(std::size_t per_class,
                                                          std::uint64_t seed) {
    static const std::vector<std::string> pos_vocab = {
        "firewall", "malware",  "exploit", "breach", "phishing",
        "botnet",   "payload",  "cipher",  "threat", "intrusion"};
    static const std::vector<std::string> neg_vocab = {
        "garden", "recipe", "violin", "meadow", "pottery",
        "sonnet", "harvest", "lantern", "voyage", "orchard"};
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, int>> corpus;
    for (std::size_t i = 0; i < per_class * 2; ++i) {
        const auto& vocab = i < per_class ? pos_vocab : neg_vocab;
        std::string text;
        for (int w = 0; w < 12; ++w) {
            if (w > 0) text += " ";
            text += vocab[rng() % vocab.size()];
        }
        corpus.emplace_back(std::move(text), i < per_class ? 1 : 0);
    }
    return corpus;
}

}  // namespace

TEST_CASE("zero epochs leaves the model at logistic(0) = 0.5") {
    ClassifierConfig cfg;
    cfg.epochs = 0;
    cfg.hash_dim = 1u << 12;
    auto clf = train_classifier({{"security text", 1}, {"other text", 0}}, cfg);
    CHECK(clf.score("anything at all") == doctest::Approx(0.5));
    CHECK(clf.score("") == doctest::Approx(0.5));
    CHECK(clf.bias() == 0.0);
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto corpus = separable_corpus(40, 5);
    ClassifierConfig cfg;
    cfg.hash_dim = 1u << 14;
    auto a = train_classifier(corpus, cfg);
    auto b = train_classifier(corpus, cfg);
    CHECK(a.bias() == b.bias());
    CHECK(a.weights() == b.weights());

    cfg.seed = 43;
    auto c = train_classifier(corpus, cfg);
    CHECK(a.weights() != c.weights());
}

TEST_CASE("single-class data is rejected") {
    CHECK_THROWS_WITH_AS(train_classifier({{"a", 1}, {"b", 1}}, ClassifierConfig{}),
                         doctest::Contains("degenerate_labels"), Error);
    CHECK_THROWS_AS(train_classifier({{"a", 0}}, ClassifierConfig{}), Error);
    CHECK_THROWS_AS(train_classifier({{"a", 2}, {"b", 0}}, ClassifierConfig{}), Error);
}

TEST_CASE("separable data trains to high held-out F1") {
    auto train_set = separable_corpus(500, 11);
    auto held_out = separable_corpus(100, 999);  // same distribution, fresh draws

    ClassifierConfig cfg;
    cfg.hash_dim = 1u << 16;
    auto clf = train_classifier(train_set, cfg);

    std::vector<bool> predictions;
    std::vector<bool> labels;
    for (const auto& [text, label] : held_out) {
        predictions.push_back(clf.score(text) >= 0.5);
        labels.push_back(label == 1);
    }
    auto matrix = evaluate_filter(predictions, labels);
    CHECK(matrix.f1() >= 0.95);

    // A strongly positive training document scores above 0.5.
    CHECK(clf.score(train_set.front().first) > 0.5);
}

TEST_CASE("empty text scores logistic(bias)") {
    auto corpus = separable_corpus(30, 3);
    ClassifierConfig cfg;
    cfg.hash_dim = 1u << 12;
    auto clf = train_classifier(corpus, cfg);
    double expected = 1.0 / (1.0 + std::exp(-clf.bias()));
    CHECK(clf.score("") == doctest::Approx(expected));
}

TEST_CASE("classify applies the >= threshold rule") {
    ClassifierConfig cfg;
    cfg.epochs = 0;
    auto clf = train_classifier({{"a b", 1}, {"c d", 0}}, cfg);
    // Score is exactly 0.5 everywhere after zero epochs.
    CHECK(classify(clf, "x", 0.5).passed);
    CHECK_FALSE(classify(clf, "x", 0.500001).passed);
    auto verdict = classify(clf, "x", 0.5);
    CHECK(verdict.filter_name == "classifier");
    CHECK(verdict.score == doctest::Approx(0.5));
}

TEST_CASE("score is monotone in the bias") {
    auto corpus = separable_corpus(30, 21);
    ClassifierConfig cfg;
    cfg.hash_dim = 1u << 12;
    auto clf = train_classifier(corpus, cfg);
    std::vector<std::string> probes = {"firewall breach", "garden recipe", "", "unseen words"};
    std::vector<double> before;
    for (const auto& p : probes) before.push_back(clf.score(p));
    clf.set_bias(clf.bias() + 1.0);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        CHECK(clf.score(probes[i]) >= before[i]);
    }
}

TEST_CASE("only the first input_token_cap tokens are featurized") {
    ClassifierConfig cfg;
    cfg.input_token_cap = 16;
    cfg.hash_dim = 1u << 14;
    auto corpus = separable_corpus(30, 8);
    auto clf = train_classifier(corpus, cfg);

    std::string head;
    for (int i = 0; i < 16; ++i) head += "tok" + std::to_string(i) + " ";
    std::string padded = head;
    for (int i = 0; i < 500; ++i) padded += "tail" + std::to_string(i) + " ";
    CHECK(clf.score(head) == doctest::Approx(clf.score(padded)).epsilon(1e-12));
}

TEST_CASE("char n-gram language model separates English from noise") {
    std::vector<std::pair<std::string, int>> corpus;
    std::vector<std::string> english = {
        "the quick brown fox jumps over the lazy dog",
        "security updates should be installed promptly",
        "a vulnerability was reported in the web server",
        "please review the attached incident report today",
        "the committee will meet on thursday afternoon",
        "reading documentation carefully prevents mistakes",
    };
    std::vector<std::string> other = {
        "zzxq jkwv pqrt mnbv zxcq wertz",
        "aaaa bbbb cccc dddd eeee ffff",
        "qqqq wwww xxxx yyyy zzzz kkkk",
        "xjz qkv pzw mvq zzk wqx",
        "lorem zzz qqq xxx kkk vvv www",
        "kxq vzw jqp zwx qvk pxj",
    };
    for (const auto& t : english) corpus.emplace_back(t, 1);
    for (const auto& t : other) corpus.emplace_back(t, 0);

    ClassifierConfig cfg;
    cfg.feature_kind = FeatureKind::char_ngrams;
    cfg.ngram_lo = 1;
    cfg.ngram_hi = 3;
    cfg.hash_dim = 1u << 14;
    cfg.epochs = 30;
    auto lang = train_classifier(corpus, cfg);

    CHECK(language_score(lang, english[0]) >= 0.65);
    CHECK(language_score(lang, "the server was patched last week") >
          language_score(lang, "zqx wvk jpq"));
}

TEST_CASE("model files round-trip and version-check") {
    auto corpus = separable_corpus(30, 17);
    ClassifierConfig cfg;
    cfg.hash_dim = 1u << 12;
    auto clf = train_classifier(corpus, cfg);

    auto path = (std::filesystem::temp_directory_path() / "seccorpus_model_test.bin").string();
    clf.save(path);
    auto loaded = LinearTextClassifier::load(path);
    CHECK(loaded.hash_dim() == clf.hash_dim());
    CHECK(loaded.bias() == clf.bias());
    CHECK(loaded.weights() == clf.weights());
    CHECK(loaded.score("firewall breach") == doctest::Approx(clf.score("firewall breach")));

    // Corrupt the version field (bytes 4..7).
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        std::uint32_t bad = 99;
        f.write(reinterpret_cast<const char*>(&bad), 4);
    }
    CHECK_THROWS_WITH_AS(LinearTextClassifier::load(path), doctest::Contains("version"), Error);
    std::filesystem::remove(path);
}
