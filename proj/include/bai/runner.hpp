#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bai/episode.hpp"
#include "bai/rng.hpp"

namespace bai {

enum class AlgorithmKind {
    simple_tracking,
    almost_tracking,
    pooled_allocation,
    successive_rejects,
    sequential_halving,
    doubling_sr,
    doubling_sh,
    uniform,
};

// Canonical names: simple-tracking, almost-tracking, pooled-allocation, sr,
// sh, dsr, dsh, uniform.
std::string_view kind_name(AlgorithmKind kind);
// Throws ConfigError on an unknown name.
AlgorithmKind parse_kind(std::string_view name);
std::vector<AlgorithmKind> all_kinds();

// Fixed-budget kinds need T; anytime kinds must not be given one.
bool needs_budget(AlgorithmKind kind);
// Discarding kinds recommend the last completed batch or epoch winner.
bool is_discarding(AlgorithmKind kind);

struct AlgorithmConfig {
    AlgorithmKind kind = AlgorithmKind::simple_tracking;
    std::string name;                           // display/id; defaults to kind_name
    double c_suf = 0.999;                       // almost tracking
    std::uint64_t batch_size = 0;               // almost tracking; 0 = 2K
    std::optional<std::uint64_t> budget;        // sr, sh, pooled-allocation only
    std::uint64_t initial_budget = 0;           // dsr/dsh; 0 = 2K ceil(log2 K)
    std::uint64_t recompute_period = 1;         // simple tracking
    std::uint64_t pooled_batches = 0;           // pooled allocation; 0 = floor(T/(2K))

    std::string id() const { return name.empty() ? std::string(kind_name(kind)) : name; }
    // Throws ConfigError on inconsistent fields for `arms` arms.
    void validate(std::size_t arms) const;
};

// Drives one algorithm over the episode until it is exhausted or the
// algorithm stops, then calls finish(). `rng` is the algorithm's private
// stream (rounding top-offs).
void run_algorithm(const AlgorithmConfig& config, Episode& episode, Rng& rng);

}  // namespace bai
