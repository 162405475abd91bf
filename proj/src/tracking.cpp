#include "bai/tracking.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bai/errors.hpp"

namespace bai {

ArmIndex simple_tracking_step(const EmpiricalState& state, const Allocation& target) {
    if (!state.all_pulled()) throw std::logic_error("simple tracking: every arm must be pulled once first");
    if (target.size() != state.arms()) throw std::invalid_argument("simple tracking: target size mismatch");
    const double elapsed = static_cast<double>(state.time());
    ArmIndex pick = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.arms(); ++i) {
        const double deficit = target[i] - static_cast<double>(state.count(i)) / elapsed;
        if (deficit > top) {
            top = deficit;
            pick = i;
        }
    }
    return pick;
}

ArmIndex simple_tracking_step(const EmpiricalState& state, const AllocationFn& w_fn) {
    if (!state.all_pulled()) throw std::logic_error("simple tracking: every arm must be pulled once first");
    return simple_tracking_step(state, w_fn(state.means()));
}

BatchTrace::BatchTrace(std::size_t arms, std::uint64_t batch_size) : arms_(arms), batch_size_(batch_size) {}

void BatchTrace::add_batch(std::vector<double> target, std::vector<std::uint64_t> draws, std::vector<double> sums) {
    if (target.size() != arms_ || draws.size() != arms_ || sums.size() != arms_) {
        throw std::invalid_argument("batch trace: row length mismatch");
    }
    target_.push_back(std::move(target));
    draws_.push_back(std::move(draws));
    sums_.push_back(std::move(sums));
}

std::vector<double> BatchTrace::realized(std::size_t b) const {
    std::vector<double> r(arms_);
    for (std::size_t i = 0; i < arms_; ++i) {
        r[i] = static_cast<double>(draws_[b][i]) / static_cast<double>(batch_size_);
    }
    return r;
}

double BatchTrace::batch_mean(std::size_t b, ArmIndex i) const {
    const auto n = draws_.at(b).at(i);
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sums_[b][i] / static_cast<double>(n);
}

std::vector<double> BatchTrace::average_weights() const {
    std::vector<double> avg(arms_, 0.0);
    for (std::size_t b = 0; b < batches(); ++b) {
        for (std::size_t i = 0; i < arms_; ++i) avg[i] += static_cast<double>(draws_[b][i]);
    }
    const double denom = static_cast<double>(batch_size_) * static_cast<double>(batches());
    for (auto& a : avg) a /= denom;
    return avg;
}

std::vector<double> BatchTrace::pooled_means() const {
    std::vector<double> sum(arms_, 0.0);
    std::vector<std::uint64_t> n(arms_, 0);
    for (std::size_t b = 0; b < batches(); ++b) {
        for (std::size_t i = 0; i < arms_; ++i) {
            sum[i] += sums_[b][i];
            n[i] += draws_[b][i];
        }
    }
    std::vector<double> q(arms_);
    for (std::size_t i = 0; i < arms_; ++i) {
        q[i] = n[i] == 0 ? std::numeric_limits<double>::quiet_NaN() : sum[i] / static_cast<double>(n[i]);
    }
    return q;
}

AlmostTrackingDecision almost_tracking_batch(const BatchTrace& trace, const AllocationFn& w_fn, double c_suf,
                                             std::uint64_t batch_size, Rng& rng) {
    if (!(c_suf > 0.0 && c_suf < 1.0)) throw ConfigError("almost tracking: C_suf must lie in (0, 1)");
    if (trace.batches() == 0) throw std::logic_error("almost tracking: the initial batch is missing");
    const std::size_t k = trace.arms();

    const auto qbar = trace.pooled_means();
    for (double q : qbar) {
        if (std::isnan(q)) throw std::logic_error("almost tracking: an arm was never drawn");
    }
    const Allocation target = w_fn(qbar);
    const auto avg = trace.average_weights();

    AlmostTrackingDecision out;
    out.target.assign(target.weights().begin(), target.weights().end());
    for (std::size_t i = 0; i < k; ++i) {
        if (avg[i] <= target[i] / c_suf) {
            out.insufficient.push_back(i);
            out.s_insuf += target[i];
        }
    }
    // Non-empty by pigeonhole: averages sum to 1 < 1 / C_suf.
    if (out.insufficient.empty() || !(out.s_insuf > 0.0)) {
        throw std::logic_error("almost tracking: empty insufficient set");
    }
    out.weights.assign(k, 0.0);
    for (auto i : out.insufficient) out.weights[i] = target[i] / out.s_insuf;
    out.draws = round_allocation(Allocation(out.weights), batch_size, rng);

    for (std::size_t i = 0; i < k; ++i) {
        // constant-ratio ceiling guarantee, checked on every batch
        if (static_cast<double>(out.draws[i]) < out.weights[i] * static_cast<double>(batch_size) / 4.0) {
            throw std::logic_error("almost tracking: rounded batch violates the 1/4 floor");
        }
    }
    return out;
}

void run_simple_tracking(Episode& episode, const SimpleTrackingConfig& config) {
    if (config.recompute_period == 0) throw ConfigError("simple tracking: recompute period must be positive");
    const std::size_t k = episode.arms();
    for (std::size_t i = 0; i < k && !episode.exhausted(); ++i) episode.pull(i);

    std::uint64_t since = 0;
    Allocation target;
    while (!episode.exhausted()) {
        if (since % config.recompute_period == 0) target = config.w_fn(episode.state().means());
        ++since;
        episode.pull(simple_tracking_step(episode.state(), target));
    }
}

BatchTrace run_almost_tracking(Episode& episode, const AlmostTrackingConfig& config, Rng& rng) {
    const std::size_t k = episode.arms();
    const std::uint64_t n = config.batch_size == 0 ? 2 * k : config.batch_size;
    if (n < 2 * k) throw ConfigError("almost tracking: batch size must be at least 2K");
    BatchTrace trace(k, n);

    auto draw_batch = [&](std::vector<double> target, const std::vector<std::uint64_t>& draws) {
        std::vector<std::uint64_t> got(k, 0);
        std::vector<double> sums(k, 0.0);
        bool complete = true;
        for (std::size_t i = 0; i < k; ++i) {
            if (draws[i] == 0) continue;
            const auto r = episode.pull(i, draws[i]);
            got[i] = r.pulls;
            sums[i] = r.reward_sum;
            complete = complete && r.pulls == draws[i];
        }
        if (complete) trace.add_batch(std::move(target), got, std::move(sums));
        return complete;
    };

    const auto uniform = Allocation::uniform(k);
    const auto first = round_allocation(uniform, n, rng);
    if (!draw_batch({uniform.weights().begin(), uniform.weights().end()}, first)) return trace;

    while (!episode.exhausted()) {
        auto step = almost_tracking_batch(trace, config.w_fn, config.c_suf, n, rng);
        if (!draw_batch(std::move(step.weights), step.draws)) break;
    }
    return trace;
}

void run_uniform(Episode& episode) {
    const std::size_t k = episode.arms();
    for (std::size_t i = 0; !episode.exhausted(); i = (i + 1) % k) episode.pull(i);
}

}  // namespace bai
