#include "bai/pooled.hpp"

#include <string>

#include "bai/errors.hpp"

namespace bai {

PooledAllocation::PooledAllocation(std::size_t arms, const PooledConfig& config)
    : arms_(arms), config_(config), victories_(arms, 0), pool_(arms, 0.0) {
    if (arms < 2) throw ConfigError("pooled allocation: need at least two arms");
    batches_ = config.batches == 0 ? config.budget / (2 * arms) : config.batches;
    if (batches_ <= arms) {
        throw ConfigError("pooled allocation: need more than K batches, got " + std::to_string(batches_));
    }
    batch_size_ = config.budget / batches_;
    if (batch_size_ < 2 * arms) {
        throw ConfigError("pooled allocation: T/B must be at least 2K, got " + std::to_string(batch_size_));
    }
}

Recommendation PooledAllocation::recommendation() const {
    Recommendation r{0, true};
    std::uint64_t top = 0;
    for (std::size_t i = 0; i < arms_; ++i) {
        if (victories_[i] > top) {
            top = victories_[i];
            r = {i, false};
        }
    }
    return r;
}

std::optional<ArmIndex> PooledAllocation::run(Episode& episode, Rng& rng) {
    const double n = static_cast<double>(batch_size_);
    for (std::size_t i = 0; i < arms_; ++i) {
        const auto res = episode.pull(i, batch_size_);
        if (res.pulls < batch_size_) return std::nullopt;
        pool_[i] = res.reward_sum / n;
    }
    for (std::uint64_t b = arms_; b < batches_; ++b) {
        ++victories_.at(config_.recommend_fn(pool_));
        const auto w = config_.w_fn(pool_);
        const auto draws = round_allocation(w, batch_size_, rng);
        std::vector<double> sums(arms_, 0.0);
        for (std::size_t i = 0; i < arms_; ++i) {
            if (draws[i] == 0) continue;
            const auto res = episode.pull(i, draws[i]);
            if (res.pulls < draws[i]) return std::nullopt;
            sums[i] = res.reward_sum;
        }
        for (std::size_t i = 0; i < arms_; ++i) {
            if (draws[i] == 0) continue;
            const double r = static_cast<double>(draws[i]) / n;
            pool_[i] = (1.0 - r) * pool_[i] + r * (sums[i] / static_cast<double>(draws[i]));
        }
    }
    return recommendation().arm;
}

}  // namespace bai
