#include "bai/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bai/errors.hpp"

namespace bai {

std::uint64_t SrSchedule::phase_draws(std::size_t k) const {
    if (k == 0 || k > n.size()) throw std::out_of_range("sr schedule: phase index");
    return n[k - 1] - (k >= 2 ? n[k - 2] : 0);
}

SrSchedule sr_schedule(std::size_t k, std::uint64_t budget) {
    if (k < 2) throw ConfigError("sr schedule: need at least two arms");
    if (budget <= k) throw ConfigError("sr schedule: budget must exceed the number of arms");
    const double scaled = static_cast<double>(budget - k) / log_bar(k);
    SrSchedule s;
    s.n.resize(k - 1);
    for (std::size_t ph = 1; ph < k; ++ph) {
        // 1e-9 guard keeps exact integers such as 98/2 from rounding up
        s.n[ph - 1] = static_cast<std::uint64_t>(std::ceil(scaled / static_cast<double>(k + 1 - ph) - 1e-9));
    }
    if (s.n[0] < 1) throw ConfigError("sr schedule: budget too small for one pull per arm");
    for (std::size_t ph = 1; ph < k; ++ph) s.total += (k + 1 - ph) * s.phase_draws(ph);
    if (s.total > budget) {
        throw ConfigError("sr schedule: schedule needs " + std::to_string(s.total) + " pulls, budget is " +
                          std::to_string(budget));
    }
    return s;
}

SuccessiveRejects::SuccessiveRejects(std::size_t arms, std::uint64_t budget)
    : schedule_(sr_schedule(arms, budget)), state_(arms), alive_(arms, 1) {}

Recommendation SuccessiveRejects::recommendation() const {
    Recommendation r{0, true};
    double top = 0.0;
    for (std::size_t i = 0; i < alive_.size(); ++i) {
        if (!alive_[i]) continue;
        if (state_.count(i) == 0) return {0, true};
        const double q = state_.mean(i);
        if (r.fallback || q > top) {
            r = {i, false};
            top = q;
        }
    }
    return r;
}

std::optional<ArmIndex> SuccessiveRejects::run(Episode& episode) {
    const std::size_t k = state_.arms();
    for (std::size_t ph = 1; ph < k; ++ph) {
        const auto m = schedule_.phase_draws(ph);
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive_[i]) continue;
            // one pull at a time so the live recommendation sees every sample
            for (std::uint64_t c = 0; c < m; ++c) {
                const auto res = episode.pull(i);
                if (res.pulls == 0) return std::nullopt;
                state_.record(i, res.reward_sum);
            }
        }
        ArmIndex worst = k;
        double low = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive_[i]) continue;
            const double q = state_.mean(i);
            if (worst == k || q <= low) {
                worst = i;
                low = q;
            }
        }
        alive_[worst] = 0;
        rejected_.push_back(worst);
    }
    return static_cast<ArmIndex>(std::find(alive_.begin(), alive_.end(), 1) - alive_.begin());
}

std::size_t ceil_log2(std::size_t k) {
    std::size_t r = 0;
    while ((std::size_t{1} << r) < k) ++r;
    return r;
}

ShSchedule sh_schedule(std::size_t k, std::uint64_t budget) {
    if (k < 2) throw ConfigError("sh schedule: need at least two arms");
    ShSchedule s;
    s.rounds = ceil_log2(k);
    if (budget < k * s.rounds) {
        throw ConfigError("sh schedule: budget must be at least K ceil(log2 K) = " + std::to_string(k * s.rounds));
    }
    std::size_t alive = k;
    for (std::size_t r = 0; r < s.rounds; ++r) {
        const std::uint64_t per = budget / (alive * s.rounds);
        s.survivors_before.push_back(alive);
        s.per_arm.push_back(per);
        s.total += per * alive;
        alive = (alive + 1) / 2;
    }
    return s;
}

SequentialHalving::SequentialHalving(std::size_t arms, std::uint64_t budget)
    : schedule_(sh_schedule(arms, budget)), arms_(arms) {}

std::optional<ArmIndex> SequentialHalving::run(Episode& episode) {
    std::vector<ArmIndex> alive(arms_);
    std::iota(alive.begin(), alive.end(), ArmIndex{0});
    for (std::size_t r = 0; r < schedule_.rounds; ++r) {
        const auto per = schedule_.per_arm[r];
        std::vector<double> mean(alive.size());
        for (std::size_t a = 0; a < alive.size(); ++a) {
            const auto res = episode.pull(alive[a], per);
            if (res.pulls < per) return std::nullopt;
            mean[a] = res.reward_sum / static_cast<double>(per);
        }
        std::vector<std::size_t> order(alive.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mean[x] > mean[y]; });
        std::vector<ArmIndex> next;
        for (std::size_t a = 0; a < (alive.size() + 1) / 2; ++a) next.push_back(alive[order[a]]);
        std::sort(next.begin(), next.end());
        last_ = {alive[order[0]], false};
        alive = std::move(next);
        survivors_.push_back(alive);
    }
    last_ = {alive.front(), false};
    return alive.front();
}

std::uint64_t default_doubling_initial_budget(std::size_t k) {
    return 2 * static_cast<std::uint64_t>(k) * std::max<std::size_t>(1, ceil_log2(k));
}

Doubling::Doubling(std::size_t arms, DoublingBase base, std::uint64_t initial_budget)
    : arms_(arms), base_(base), initial_(initial_budget) {
    // fail early if the first epoch is infeasible for the base algorithm
    if (base_ == DoublingBase::successive_rejects) {
        sr_schedule(arms_, initial_);
    } else {
        sh_schedule(arms_, initial_);
    }
}

void Doubling::run(Episode& episode) {
    std::uint64_t budget = initial_;
    while (!episode.exhausted()) {
        const auto start = episode.time();
        std::optional<ArmIndex> out;
        if (base_ == DoublingBase::successive_rejects) {
            out = SuccessiveRejects(arms_, budget).run(episode);
        } else {
            out = SequentialHalving(arms_, budget).run(episode);
        }
        if (!out) return;
        episode.idle(start + budget - episode.time());
        if (episode.time() < start + budget) return;
        last_ = {*out, false};
        ++completed_;
        budget *= 2;
    }
}

}  // namespace bai
