#include "seccorpus/hash.hpp"

#include <cstring>

namespace seccorpus {

std::uint64_t hash64(const void* data, std::size_t len, std::uint64_t seed) {
    const std::uint64_t m = 0xc6a4a7935bd1e995ULL;
    const int r = 47;

    std::uint64_t h = seed ^ (static_cast<std::uint64_t>(len) * m);

    const auto* p = static_cast<const unsigned char*>(data);
    const std::size_t nblocks = len / 8;
    for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t k;
        std::memcpy(&k, p + i * 8, 8);
        k *= m;
        k ^= k >> r;
        k *= m;
        h ^= k;
        h *= m;
    }

    const unsigned char* tail = p + nblocks * 8;
    switch (len & 7u) {
        case 7: h ^= static_cast<std::uint64_t>(tail[6]) << 48; [[fallthrough]];
        case 6: h ^= static_cast<std::uint64_t>(tail[5]) << 40; [[fallthrough]];
        case 5: h ^= static_cast<std::uint64_t>(tail[4]) << 32; [[fallthrough]];
        case 4: h ^= static_cast<std::uint64_t>(tail[3]) << 24; [[fallthrough]];
        case 3: h ^= static_cast<std::uint64_t>(tail[2]) << 16; [[fallthrough]];
        case 2: h ^= static_cast<std::uint64_t>(tail[1]) << 8; [[fallthrough]];
        case 1: h ^= static_cast<std::uint64_t>(tail[0]); h *= m;
    }

    h ^= h >> r;
    h *= m;
    h ^= h >> r;
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string content_address(std::string_view body) {
    return hex64(hash64(body.data(), body.size(), 0x9e3779b97f4a7c15ULL)) +
           hex64(hash64(body.data(), body.size(), 0x243f6a8885a308d3ULL));
}

}  // namespace seccorpus
