#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace seccorpus {

// MurmurHash64A. Fixed seeds keep every fingerprint, split assignment and
// content address stable across runs and platforms.
std::uint64_t hash64(const void* data, std::size_t len, std::uint64_t seed);

inline std::uint64_t hash64(std::string_view s, std::uint64_t seed = 0x5ec09f5ULL) {
    return hash64(s.data(), s.size(), seed);
}

// 128-bit content address as 32 hex chars (two independent 64-bit hashes).
std::string content_address(std::string_view body);

// Lowercase hex of a 64-bit value, zero padded to 16 chars.
std::string hex64(std::uint64_t v);

}  // namespace seccorpus
