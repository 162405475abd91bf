#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bai {

using ArmIndex = std::size_t;

// Ground truth of a simulation: unit-variance Gaussian arms with these means.
struct Instance {
    std::vector<double> means;
    std::string label;

    Instance() = default;
    // Throws std::invalid_argument when fewer than two arms are given.
    Instance(std::vector<double> means, std::string label);

    std::size_t arms() const { return means.size(); }
};

// Everything an algorithm is allowed to observe: pull counts and reward sums.
class EmpiricalState {
public:
    explicit EmpiricalState(std::size_t arms);

    void record(ArmIndex arm, double reward_sum, std::uint64_t pulls = 1);

    std::size_t arms() const { return counts_.size(); }
    std::uint64_t time() const { return time_; }
    std::uint64_t count(ArmIndex arm) const { return counts_[arm]; }
    double sum(ArmIndex arm) const { return sums_[arm]; }
    std::span<const std::uint64_t> counts() const { return counts_; }

    // Empirical mean Q_i; throws std::logic_error when the arm has no pulls.
    double mean(ArmIndex arm) const;
    // All Q_i; requires every arm to have been pulled at least once.
    std::vector<double> means() const;
    bool all_pulled() const;

private:
    std::vector<std::uint64_t> counts_;
    std::vector<double> sums_;
    std::uint64_t time_ = 0;
};

struct GapVector {
    std::vector<double> gaps;       // max_j m_j - m_i
    std::vector<ArmIndex> best_set;  // indices attaining the max, ascending
};

// All maximizing indices (exact-equality ties included), ascending.
std::vector<ArmIndex> best_arms(std::span<const double> means);
GapVector gaps(std::span<const double> means);

// argmax with the smallest index on ties.
ArmIndex first_best(std::span<const double> means);

double h1(std::span<const double> means);
// max_i i * Delta_(i)^-2 over sorted gaps with Delta_(1) := Delta_(2).
// `gaussian_factor` multiplies by 4 (the unit-variance Gaussian variant).
double h2(std::span<const double> means, bool gaussian_factor = false);

// Self-consistent average of the best arm and the members of arms 2..j
// lying at or below it. `sorted_means` must be in descending order and
// `j` is 1-based, 2 <= j <= K.
double modified_mean(std::span<const double> sorted_means, std::size_t j);
double h3(std::span<const double> means);

// 1/2 + sum_{i=2}^{K} 1/i
double log_bar(std::size_t k);

}  // namespace bai
