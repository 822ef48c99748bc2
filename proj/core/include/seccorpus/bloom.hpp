#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seccorpus {

// Plain Bloom filter over 64-bit fingerprints. k probe positions come from
// double hashing of the fingerprint; no false negatives ever.
class BloomFilter {
public:
    BloomFilter(std::uint64_t m_bits, unsigned k_hashes, std::uint64_t seed = 0x5ec0b100fULL);

    void insert(std::uint64_t fingerprint);
    bool contains(std::uint64_t fingerprint) const;

    std::uint64_t bit_count() const { return m_; }
    unsigned hash_count() const { return k_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t inserted() const { return n_inserted_; }

    void save(const std::string& path) const;
    static BloomFilter load(const std::string& path);

private:
    std::uint64_t probe(std::uint64_t fingerprint, unsigned i) const;

    std::uint64_t m_;
    unsigned k_;
    std::uint64_t seed_;
    std::uint64_t n_inserted_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Expected false-positive rate (1 - e^{-kn/m})^k.
double estimate_fpr(std::uint64_t m_bits, unsigned k_hashes, std::uint64_t n_inserted);

// k that minimizes the FPR for a planned n at m bits: round(m/n * ln 2).
unsigned optimal_hash_count(std::uint64_t m_bits, std::uint64_t n_planned);

}  // namespace seccorpus
