#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bai/core.hpp"
#include "bai/episode.hpp"

namespace bai {

struct SrSchedule {
    std::vector<std::uint64_t> n;  // cumulative per-arm targets n_1..n_{K-1}
    std::uint64_t total = 0;       // sum_k (K+1-k) m_k

    // Per-arm draws in phase k (1-based): n_k - n_{k-1}.
    std::uint64_t phase_draws(std::size_t k) const;
};

// n_k = ceil((T-K) / (logbar(K) (K+1-k))). Throws ConfigError when n_1 < 1
// or the total exceeds T.
SrSchedule sr_schedule(std::size_t k, std::uint64_t budget);

// Successive Rejects on its own sample pool. Cumulative means carry over
// between phases; the lowest mean is rejected, ties rejecting the largest index.
class SuccessiveRejects {
public:
    SuccessiveRejects(std::size_t arms, std::uint64_t budget);

    // Returns the survivor, or nullopt when the episode ran out first.
    std::optional<ArmIndex> run(Episode& episode);

    // argmax of the cumulative means over the current survivors (smallest
    // index on ties); fallback while some survivor is still unpulled.
    Recommendation recommendation() const;

    const SrSchedule& schedule() const { return schedule_; }
    const std::vector<ArmIndex>& rejected() const { return rejected_; }
    const EmpiricalState& state() const { return state_; }

private:
    SrSchedule schedule_;
    EmpiricalState state_;
    std::vector<char> alive_;
    std::vector<ArmIndex> rejected_;
};

struct ShSchedule {
    std::size_t rounds = 0;                      // ceil(log2 K)
    std::vector<std::uint64_t> per_arm;         // pulls per surviving arm in round r
    std::vector<std::size_t> survivors_before;  // |S_r|
    std::uint64_t total = 0;
};

std::size_t ceil_log2(std::size_t k);

// Round r pulls floor(T / (|S_r| ceil(log2 K))) per survivor; throws
// ConfigError when T < K ceil(log2 K).
ShSchedule sh_schedule(std::size_t k, std::uint64_t budget);

// Sequential Halving with fresh means in every round; the top ceil(|S|/2)
// survive, ties favouring the smaller index.
class SequentialHalving {
public:
    SequentialHalving(std::size_t arms, std::uint64_t budget);

    std::optional<ArmIndex> run(Episode& episode);

    // Winner of the last completed round; fallback before the first one.
    Recommendation recommendation() const { return last_; }

    const ShSchedule& schedule() const { return schedule_; }
    const std::vector<std::vector<ArmIndex>>& survivors() const { return survivors_; }

private:
    ShSchedule schedule_;
    std::size_t arms_;
    Recommendation last_{0, true};
    std::vector<std::vector<ArmIndex>> survivors_;
};

enum class DoublingBase { successive_rejects, sequential_halving };

// 2 K ceil(log2 K).
std::uint64_t default_doubling_initial_budget(std::size_t k);

// Reruns the base algorithm with budgets T1, 2 T1, 4 T1, ... on fresh samples.
// Each epoch occupies exactly its budget on the global clock (unused slots
// idle), and J(t) is the output of the last completed epoch.
class Doubling {
public:
    Doubling(std::size_t arms, DoublingBase base, std::uint64_t initial_budget);

    void run(Episode& episode);

    Recommendation recommendation() const { return last_; }
    std::size_t completed_epochs() const { return completed_; }
    std::uint64_t initial_budget() const { return initial_; }

private:
    std::size_t arms_;
    DoublingBase base_;
    std::uint64_t initial_;
    std::size_t completed_ = 0;
    Recommendation last_{0, true};
};

}  // namespace bai
