#include "seccorpus/bloom.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "seccorpus/error.hpp"
#include "seccorpus/hash.hpp"

namespace seccorpus {

namespace {
constexpr char kMagic[4] = {'S', 'B', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

BloomFilter::BloomFilter(std::uint64_t m_bits, unsigned k_hashes, std::uint64_t seed)
    : m_(m_bits), k_(k_hashes), seed_(seed), bits_((m_bits + 63) / 64, 0) {
    if (m_bits < 64) throw Error("bloom_config: m must be >= 64 bits");
    if (k_hashes < 1) throw Error("bloom_config: k must be >= 1");
}

std::uint64_t BloomFilter::probe(std::uint64_t fingerprint, unsigned i) const {
    std::uint64_t h1 = hash64(&fingerprint, sizeof(fingerprint), seed_);
    std::uint64_t h2 = hash64(&fingerprint, sizeof(fingerprint), seed_ ^ 0x9e3779b97f4a7c15ULL) | 1ULL;
    return (h1 + i * h2) % m_;
}

void BloomFilter::insert(std::uint64_t fingerprint) {
    for (unsigned i = 0; i < k_; ++i) {
        std::uint64_t bit = probe(fingerprint, i);
        bits_[bit >> 6] |= 1ULL << (bit & 63);
    }
    ++n_inserted_;
}

bool BloomFilter::contains(std::uint64_t fingerprint) const {
    for (unsigned i = 0; i < k_; ++i) {
        std::uint64_t bit = probe(fingerprint, i);
        if ((bits_[bit >> 6] & (1ULL << (bit & 63))) == 0) return false;
    }
    return true;
}

void BloomFilter::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("bloom_io: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    auto write_u = [&out](auto v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
    write_u(kVersion);
    write_u(m_);
    write_u(static_cast<std::uint32_t>(k_));
    write_u(seed_);
    write_u(n_inserted_);
    out.write(reinterpret_cast<const char*>(bits_.data()),
              static_cast<std::streamsize>(bits_.size() * sizeof(std::uint64_t)));
    if (!out) throw Error("bloom_io: short write to " + path);
}

BloomFilter BloomFilter::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("bloom_io: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("bloom_io: bad magic in " + path);
    auto read_u = [&in, &path](auto& v) {
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw Error("bloom_io: truncated file " + path);
    };
    std::uint32_t version;
    read_u(version);
    if (version != kVersion) throw Error("bloom_io: unsupported version in " + path);
    std::uint64_t m, seed, n;
    std::uint32_t k;
    read_u(m);
    read_u(k);
    read_u(seed);
    read_u(n);
    BloomFilter filter(m, k, seed);
    filter.n_inserted_ = n;
    in.read(reinterpret_cast<char*>(filter.bits_.data()),
            static_cast<std::streamsize>(filter.bits_.size() * sizeof(std::uint64_t)));
    if (!in) throw Error("bloom_io: truncated bitmap in " + path);
    return filter;
}

double estimate_fpr(std::uint64_t m_bits, unsigned k_hashes, std::uint64_t n_inserted) {
    if (n_inserted == 0) return 0.0;
    double exponent = -static_cast<double>(k_hashes) * static_cast<double>(n_inserted) /
                      static_cast<double>(m_bits);
    return std::pow(1.0 - std::exp(exponent), static_cast<double>(k_hashes));
}

unsigned optimal_hash_count(std::uint64_t m_bits, std::uint64_t n_planned) {
    if (n_planned == 0) return 1;
    double k = std::round(static_cast<double>(m_bits) / static_cast<double>(n_planned) * std::log(2.0));
    return k < 1.0 ? 1u : static_cast<unsigned>(k);
}

}  // namespace seccorpus
