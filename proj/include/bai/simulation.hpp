#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bai/core.hpp"
#include "bai/runner.hpp"

namespace bai {

struct ExperimentConfig {
    Instance instance;
    std::string instance_id;
    std::vector<AlgorithmConfig> algorithms;
    std::uint64_t budget = 0;                // T, the horizon of every replication
    std::vector<std::uint64_t> checkpoints;  // empty selects default_checkpoints
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double noise_sigma = 1.0;  // 0 gives the noiseless debug environment

    // Fills defaults (fixed-budget kinds inherit T, checkpoints) and
    // validates everything; throws ConfigError.
    void resolve();
};

// Roughly 50 log-spaced values in [K, T] plus T itself, deduplicated.
std::vector<std::uint64_t> default_checkpoints(std::size_t k, std::uint64_t budget);

struct ReplicationResult {
    std::vector<char> error;     // J(t) != i*(P)
    std::vector<char> fallback;  // J(t) was the flagged default arm
};

// Seeds: environment noise from derive_seed(seed, {instance, algorithm, rep, 0}),
// algorithm randomness from the same coordinates with purpose 1.
ReplicationResult run_replication(const ExperimentConfig& config, const AlgorithmConfig& algorithm,
                                  std::uint64_t replication);

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Exact binomial interval; `level` is the two-sided coverage.
Interval clopper_pearson(std::uint64_t errors, std::uint64_t trials, double level = 0.95);

struct PoEPoint {
    std::uint64_t t = 0;
    std::uint64_t errors = 0;
    std::uint64_t replications = 0;
    double poe = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t fallbacks = 0;
};

struct PoECurve {
    std::string algorithm;
    std::string instance;
    std::uint64_t seed = 0;
    std::vector<PoEPoint> points;
};

PoEPoint make_point(std::uint64_t t, std::uint64_t errors, std::uint64_t replications, std::uint64_t fallbacks = 0);

// One curve per algorithm; the result does not depend on `workers`.
std::vector<PoECurve> estimate_poe(const ExperimentConfig& config);
PoECurve estimate_poe(const ExperimentConfig& config, const AlgorithmConfig& algorithm);

struct RateEstimate {
    double lower = 0.0;
    double plugin = 0.0;
    double upper = 0.0;
};

// H ln(1/PoE) / T; +infinity when PoE = 0.
double rate_from_poe(double poe, double h, std::uint64_t t);
// Plugin rate plus the rates at the interval endpoints.
RateEstimate estimate_rate(const PoEPoint& point, double h, std::uint64_t t);

// Minimum ignoring infinities unless every entry is infinite.
double minimax_rate(std::span<const double> rates);

}  // namespace bai
