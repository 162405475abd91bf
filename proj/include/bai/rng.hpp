#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

namespace bai {

// 64-bit FNV-1a; stable across platforms, used for ids and file checksums.
std::uint64_t fnv1a64(std::string_view bytes);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent stream seed from a master seed and a list of
// coordinates (instance, algorithm, replication, stream purpose).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords);

// Random stream used throughout the library. The engine is mt19937_64
// (bit-exact by the standard); normals come from Boost's ziggurat, whose
// output is fixed by the library rather than by the standard library vendor.
class Rng {
public:
    static constexpr std::string_view method_name = "mt19937_64 + boost::random::normal_distribution (ziggurat)";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bai
