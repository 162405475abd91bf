#include "bai/episode.hpp"

#include <algorithm>
#include <stdexcept>

#include "bai/errors.hpp"

namespace bai {

Environment::Environment(std::span<const double> means, double sigma, std::uint64_t seed)
    : means_(means.begin(), means.end()), sigma_(sigma), rng_(seed) {
    if (sigma < 0.0) throw std::invalid_argument("environment: negative noise scale");
}

Recommendation empirical_best(const EmpiricalState& state) {
    Recommendation r{0, true};
    double top = 0.0;
    for (std::size_t i = 0; i < state.arms(); ++i) {
        if (state.count(i) == 0) continue;
        const double q = state.mean(i);
        if (r.fallback || q > top) {
            r = {i, false};
            top = q;
        }
    }
    return r;
}

Episode::Episode(Environment& env, std::uint64_t horizon, std::vector<std::uint64_t> checkpoints)
    : env_(env), horizon_(horizon), checkpoints_(std::move(checkpoints)), state_(env.arms()) {
    if (horizon == 0) throw ConfigError("episode: horizon must be positive");
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        if (checkpoints_[i] == 0 || checkpoints_[i] > horizon ||
            (i > 0 && checkpoints_[i] <= checkpoints_[i - 1])) {
            throw ConfigError("episode: checkpoints must be increasing and within [1, horizon]");
        }
    }
    recorded_.reserve(checkpoints_.size());
}

Recommendation Episode::current() const {
    return recommender_ ? recommender_() : empirical_best(state_);
}

void Episode::tick() {
    ++time_;
    if (cursor_ < checkpoints_.size() && checkpoints_[cursor_] == time_) pending_ = true;
}

void Episode::flush() {
    if (!pending_) return;
    recorded_.push_back(current());
    ++cursor_;
    pending_ = false;
}

Episode::PullResult Episode::pull(ArmIndex arm, std::uint64_t count) {
    if (arm >= state_.arms()) throw std::out_of_range("episode: arm index");
    PullResult res;
    while (res.pulls < count && time_ < horizon_) {
        flush();
        const double r = env_.pull(arm);
        state_.record(arm, r);
        res.reward_sum += r;
        ++res.pulls;
        tick();
    }
    return res;
}

void Episode::idle(std::uint64_t count) {
    for (std::uint64_t i = 0; i < count && time_ < horizon_; ++i) {
        flush();
        tick();
    }
}

void Episode::finish() {
    flush();
    if (cursor_ < checkpoints_.size()) {
        const auto r = current();
        while (cursor_ < checkpoints_.size()) {
            recorded_.push_back(r);
            ++cursor_;
        }
    }
    time_ = std::max(time_, horizon_);
}

}  // namespace bai
