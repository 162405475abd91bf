#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bai/core.hpp"
#include "bai/rng.hpp"

namespace bai {

// A point on the probability simplex.
class Allocation {
public:
    Allocation() = default;
    // Validates non-negativity and a unit sum (within 1e-9).
    explicit Allocation(std::vector<double> weights);

    static Allocation uniform(std::size_t arms);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

using AllocationFn = std::function<Allocation(std::span<const double>)>;

struct DVector {
    std::vector<double> d;
    double z = 0.0;  // sum of 1/d_i
};

// sum_{j != i} (Delta_j^Q + Delta_i^Q)^-2; +infinity when i and some j are both best.
double h1_prime(ArmIndex i, std::span<const double> q);

// D_i = (Delta_i^Q)^2 H1'(i, Q) off the best set; best arms take the
// minimum over the non-best arms. Throws DegenerateInput when all Q are equal.
DVector d_vector(std::span<const double> q);

// w*_i = 1 / (D_i Z).
Allocation target_allocation_h1(std::span<const double> q);

// target_allocation_h1, falling back to uniform when Q has no non-best arm.
// Samplers use this so that a zero-noise or fully tied history stays defined.
Allocation target_allocation_h1_or_uniform(std::span<const double> q);

// Constant-ratio ceiling: integer pulls summing to `total` with
// pulls_i >= w_i * total / 4. Requires total >= 2K; top-off draws consume `rng`.
std::vector<std::uint64_t> round_allocation(const Allocation& w, std::uint64_t total, Rng& rng);

// S(Q, P) = H1(P) * sum_i (Q_i - P_i)^2 / D_i(Q).
double stability(std::span<const double> q, std::span<const double> p);

}  // namespace bai
