#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "seccorpus/bloom.hpp"
#include "seccorpus/error.hpp"

using namespace seccorpus;

TEST_CASE("estimate_fpr matches the closed form") {
    CHECK(estimate_fpr(1000, 7, 0) == 0.0);
    CHECK(std::abs(estimate_fpr(1000, 7, 100) - 0.00819) < 1e-5);
    // Direct evaluation as the independent route.
    double direct = std::pow(1.0 - std::exp(-7.0 * 100.0 / 1000.0), 7.0);
    CHECK(estimate_fpr(1000, 7, 100) == doctest::Approx(direct).epsilon(1e-12));
    // Monotone decreasing in m.
    CHECK(estimate_fpr(1u << 24, 7, 100) < estimate_fpr(1000, 7, 100));
    CHECK(estimate_fpr(1u << 30, 7, 100) < 1e-12);
}

TEST_CASE("no false negatives, ever") {
    BloomFilter bloom(1u << 16, 5);
    std::mt19937_64 rng(7);
    std::vector<std::uint64_t> members;
    for (int i = 0; i < 2000; ++i) members.push_back(rng());
    for (auto f : members) bloom.insert(f);
    for (auto f : members) CHECK(bloom.contains(f));
    CHECK(bloom.inserted() == members.size());
}

TEST_CASE("measured FPR tracks the estimate") {
    const std::uint64_t m = 1u << 18;
    const unsigned k = 7;
    const int n = 10000;
    BloomFilter bloom(m, k);
    std::mt19937_64 rng(13);
    for (int i = 0; i < n; ++i) bloom.insert(rng() | 1ull);  // odd = member space

    int false_positives = 0;
    const int probes = 50000;
    for (int i = 0; i < probes; ++i) {
        if (bloom.contains(rng() & ~1ull)) ++false_positives;  // even = non-members
    }
    double measured = static_cast<double>(false_positives) / probes;
    double expected = estimate_fpr(m, k, n);
    CHECK(measured <= 2.0 * expected + 1e-4);
}

TEST_CASE("optimal_hash_count follows m/n ln2") {
    CHECK(optimal_hash_count(1000, 100) == 7);
    CHECK(optimal_hash_count(64, 1000000) == 1);
    CHECK(optimal_hash_count(1000, 0) == 1);
}

TEST_CASE("save/load round-trips filter state") {
    auto path = (std::filesystem::temp_directory_path() / "seccorpus_bloom_test.bin").string();
    BloomFilter bloom(4096, 3);
    for (std::uint64_t f = 1; f <= 500; ++f) bloom.insert(f * 2654435761ULL);
    bloom.save(path);

    BloomFilter loaded = BloomFilter::load(path);
    CHECK(loaded.bit_count() == bloom.bit_count());
    CHECK(loaded.hash_count() == bloom.hash_count());
    CHECK(loaded.inserted() == bloom.inserted());
    for (std::uint64_t f = 1; f <= 500; ++f) CHECK(loaded.contains(f * 2654435761ULL));
    std::filesystem::remove(path);
}

TEST_CASE("bad construction and bad files are errors") {
    CHECK_THROWS_AS(BloomFilter(32, 3), Error);
    CHECK_THROWS_AS(BloomFilter(1024, 0), Error);
    CHECK_THROWS_AS(BloomFilter::load("/nonexistent/bloom.bin"), Error);
}
