#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bai/allocation.hpp"
#include "bai/episode.hpp"

namespace bai {

using RecommendFn = std::function<ArmIndex(std::span<const double>)>;

struct PooledConfig {
    std::uint64_t budget = 0;   // T; truncated to a multiple of `batches`
    std::uint64_t batches = 0;  // B; 0 selects floor(T / (2K))
    AllocationFn w_fn = target_allocation_h1_or_uniform;
    RecommendFn recommend_fn = [](std::span<const double> q) { return first_best(q); };
};

// Batched two-approximation scheme: K single-arm initialization batches of
// T/B pulls, then B-K batches allocated by w_fn on the pooled means. Each
// scored batch gives one victory to recommend_fn(pooled means); the pooled
// means are blended element-wise with the realized batch weights.
class PooledAllocation {
public:
    PooledAllocation(std::size_t arms, const PooledConfig& config);

    std::optional<ArmIndex> run(Episode& episode, Rng& rng);

    // argmax of the victory counts, smallest index on ties; fallback before
    // the first scored batch.
    Recommendation recommendation() const;

    std::uint64_t batches() const { return batches_; }
    std::uint64_t batch_size() const { return batch_size_; }
    const std::vector<std::uint64_t>& victories() const { return victories_; }
    const std::vector<double>& pooled_means() const { return pool_; }

private:
    std::size_t arms_;
    PooledConfig config_;
    std::uint64_t batches_;
    std::uint64_t batch_size_;
    std::vector<std::uint64_t> victories_;
    std::vector<double> pool_;
};

}  // namespace bai
