#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bai/core.hpp"
#include "bai/rng.hpp"

namespace bai {

// Gaussian arms with common standard deviation; sigma = 0 gives the
// noiseless debug environment.
class Environment {
public:
    Environment(std::span<const double> means, double sigma, std::uint64_t seed);

    double pull(ArmIndex arm) { return means_[arm] + sigma_ * rng_.normal(); }
    std::size_t arms() const { return means_.size(); }
    std::span<const double> means() const { return means_; }

private:
    std::vector<double> means_;
    double sigma_;
    Rng rng_;
};

struct Recommendation {
    ArmIndex arm = 0;
    bool fallback = false;  // no recommendation defined yet; arm is the default arm 0
};

using Recommender = std::function<Recommendation()>;

// argmax of the empirical means over pulled arms, smallest index on ties;
// a fallback to arm 0 when nothing has been pulled.
Recommendation empirical_best(const EmpiricalState& state);

// One simulated run: the environment, a global clock capped at `horizon`,
// and the recommendation captured at each checkpoint. Algorithms only see
// the pull results and `exhausted()`, never the horizon itself.
// The recommendation for checkpoint t is read just before the next pull, idle
// tick or finish(), so an algorithm may close a phase ending exactly at t.
class Episode {
public:
    struct PullResult {
        std::uint64_t pulls = 0;
        double reward_sum = 0.0;
    };

    // `checkpoints` must be strictly increasing, >= 1 and <= horizon.
    Episode(Environment& env, std::uint64_t horizon, std::vector<std::uint64_t> checkpoints);

    // Pulls `arm` up to `count` times; stops early at the horizon.
    PullResult pull(ArmIndex arm, std::uint64_t count = 1);
    // Advances the clock without sampling (unused slots of a fixed-budget epoch).
    void idle(std::uint64_t count);
    // Fills the remaining checkpoints with the current recommendation.
    void finish();

    bool exhausted() const { return time_ >= horizon_; }
    std::uint64_t time() const { return time_; }
    std::uint64_t pulls() const { return state_.time(); }
    std::size_t arms() const { return state_.arms(); }
    const EmpiricalState& state() const { return state_; }

    // Defaults to empirical_best over every pull of the episode.
    void set_recommender(Recommender r) { recommender_ = std::move(r); }

    std::span<const std::uint64_t> checkpoints() const { return checkpoints_; }
    std::span<const Recommendation> recorded() const { return recorded_; }

private:
    void tick();
    void flush();
    Recommendation current() const;

    Environment& env_;
    std::uint64_t horizon_;
    std::vector<std::uint64_t> checkpoints_;
    std::vector<Recommendation> recorded_;
    std::size_t cursor_ = 0;
    bool pending_ = false;
    std::uint64_t time_ = 0;
    EmpiricalState state_;
    Recommender recommender_;
};

}  // namespace bai
