#pragma once

#include <cstdint>
#include <vector>

#include "bai/allocation.hpp"
#include "bai/core.hpp"
#include "bai/episode.hpp"

namespace bai {

// argmax_i { w_i(Q(t-1)) - N_i(t-1)/(t-1) }, smallest index on ties.
// Every arm must have been pulled at least once.
ArmIndex simple_tracking_step(const EmpiricalState& state, const AllocationFn& w_fn);
ArmIndex simple_tracking_step(const EmpiricalState& state, const Allocation& target);

// Per-batch record kept by Almost Tracking.
class BatchTrace {
public:
    BatchTrace(std::size_t arms, std::uint64_t batch_size);

    // `target` is the prescribed batch weight row (zero outside K_insuf for
    // b >= 2); the realized row is draws / batch_size.
    void add_batch(std::vector<double> target, std::vector<std::uint64_t> draws, std::vector<double> sums);

    std::size_t arms() const { return arms_; }
    std::uint64_t batch_size() const { return batch_size_; }
    std::size_t batches() const { return draws_.size(); }

    std::span<const double> target(std::size_t b) const { return target_[b]; }
    std::vector<double> realized(std::size_t b) const;
    std::span<const std::uint64_t> draws(std::size_t b) const { return draws_[b]; }
    // Q_{b,i}; NaN when the arm was not drawn in batch b.
    double batch_mean(std::size_t b, ArmIndex i) const;

    // Running average of realized weights over all recorded batches.
    std::vector<double> average_weights() const;
    // Pull-weighted mean over every batch (the cumulative empirical mean);
    // NaN for arms never drawn.
    std::vector<double> pooled_means() const;

private:
    std::size_t arms_;
    std::uint64_t batch_size_;
    std::vector<std::vector<double>> target_;
    std::vector<std::vector<std::uint64_t>> draws_;
    std::vector<std::vector<double>> sums_;
};

struct AlmostTrackingDecision {
    std::vector<std::uint64_t> draws;
    std::vector<double> weights;        // w_b, zero outside K_insuf
    std::vector<double> target;         // w(Qbar_{b-1})
    std::vector<ArmIndex> insufficient;  // K_insuf
    double s_insuf = 0.0;
};

// Batch b >= 2 of Almost Tracking given batches 1..b-1 in `trace`.
AlmostTrackingDecision almost_tracking_batch(const BatchTrace& trace, const AllocationFn& w_fn, double c_suf,
                                             std::uint64_t batch_size, Rng& rng);

struct SimpleTrackingConfig {
    AllocationFn w_fn = target_allocation_h1_or_uniform;
    std::uint64_t recompute_period = 1;
};

struct AlmostTrackingConfig {
    AllocationFn w_fn = target_allocation_h1_or_uniform;
    double c_suf = 0.999;
    std::uint64_t batch_size = 0;  // 0 selects 2K
};

// Anytime drivers: they sample until the episode is exhausted and never see
// its horizon.
void run_simple_tracking(Episode& episode, const SimpleTrackingConfig& config);
BatchTrace run_almost_tracking(Episode& episode, const AlmostTrackingConfig& config, Rng& rng);
void run_uniform(Episode& episode);

}  // namespace bai
