#include "bai/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "bai/episode.hpp"
#include "bai/errors.hpp"
#include "bai/rng.hpp"

namespace bai {

std::vector<std::uint64_t> default_checkpoints(std::size_t k, std::uint64_t budget) {
    if (budget == 0) throw ConfigError("checkpoints: budget must be positive");
    const double lo = static_cast<double>(std::min<std::uint64_t>(k, budget));
    const double ratio = static_cast<double>(budget) / lo;
    std::vector<std::uint64_t> out;
    for (int j = 0; j < 50; ++j) {
        const auto t = static_cast<std::uint64_t>(std::llround(lo * std::pow(ratio, j / 50.0)));
        if (out.empty() || t > out.back()) out.push_back(std::min(t, budget));
    }
    if (out.back() != budget) out.push_back(budget);
    return out;
}

void ExperimentConfig::resolve() {
    if (instance.arms() < 2) throw ConfigError("experiment: instance needs at least two arms");
    if (best_arms(instance.means).size() != 1) throw ConfigError("experiment: instance has tied best arms");
    if (budget == 0) throw ConfigError("experiment: budget must be positive");
    if (replications == 0) throw ConfigError("experiment: replications must be at least 1");
    if (workers == 0) throw ConfigError("experiment: workers must be at least 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ConfigError("experiment: bad noise scale");
    if (algorithms.empty()) throw ConfigError("experiment: no algorithms");
    if (instance_id.empty()) instance_id = instance.label;
    if (checkpoints.empty()) checkpoints = default_checkpoints(instance.arms(), budget);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || checkpoints[i] > budget || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
            throw ConfigError("experiment: checkpoints must be increasing and within [1, T]");
        }
    }
    std::set<std::string> ids;
    for (auto& a : algorithms) {
        if (needs_budget(a.kind) && !a.budget) a.budget = budget;
        if (a.budget && *a.budget > budget) throw ConfigError(a.id() + ": budget exceeds the experiment horizon");
        a.validate(instance.arms());
        if (!ids.insert(a.id()).second) throw ConfigError("experiment: duplicate algorithm id " + a.id());
    }
}

ReplicationResult run_replication(const ExperimentConfig& config, const AlgorithmConfig& algorithm,
                                  std::uint64_t replication) {
    const auto inst = fnv1a64(config.instance_id);
    const auto alg = fnv1a64(algorithm.id());
    Environment env(config.instance.means, config.noise_sigma, derive_seed(config.seed, {inst, alg, replication, 0}));
    Rng rng(derive_seed(config.seed, {inst, alg, replication, 1}));
    Episode episode(env, config.budget, config.checkpoints);
    run_algorithm(algorithm, episode, rng);

    const ArmIndex best = first_best(config.instance.means);
    ReplicationResult out;
    const auto rec = episode.recorded();
    out.error.reserve(rec.size());
    out.fallback.reserve(rec.size());
    for (const auto& r : rec) {
        out.error.push_back(r.arm != best);
        out.fallback.push_back(r.fallback);
    }
    return out;
}

Interval clopper_pearson(std::uint64_t errors, std::uint64_t trials, double level) {
    if (trials == 0 || errors > trials) throw std::invalid_argument("clopper_pearson: need 0 <= errors <= trials, trials > 0");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("clopper_pearson: level must lie in (0, 1)");
    const double alpha = 1.0 - level;
    const double x = static_cast<double>(errors);
    const double n = static_cast<double>(trials);
    Interval ci;
    ci.low = errors == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
    ci.high = errors == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
    return ci;
}

PoEPoint make_point(std::uint64_t t, std::uint64_t errors, std::uint64_t replications, std::uint64_t fallbacks) {
    PoEPoint p;
    p.t = t;
    p.errors = errors;
    p.replications = replications;
    p.poe = static_cast<double>(errors) / static_cast<double>(replications);
    const auto ci = clopper_pearson(errors, replications);
    p.ci_low = std::min(ci.low, p.poe);
    p.ci_high = std::max(ci.high, p.poe);
    p.fallbacks = fallbacks;
    return p;
}

PoECurve estimate_poe(const ExperimentConfig& config, const AlgorithmConfig& algorithm) {
    const std::size_t m = config.checkpoints.size();
    const unsigned workers =
        static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.workers, config.replications)));

    // Integer tallies make the reduction independent of scheduling.
    std::vector<std::uint64_t> errors(m, 0), fallbacks(m, 0);
    std::atomic<std::uint64_t> next{0};
    std::mutex merge;
    std::exception_ptr failure;

    auto work = [&] {
        std::vector<std::uint64_t> e(m, 0), f(m, 0);
        try {
            for (std::uint64_t rep = next++; rep < config.replications; rep = next++) {
                const auto r = run_replication(config, algorithm, rep);
                for (std::size_t j = 0; j < m; ++j) {
                    e[j] += static_cast<std::uint64_t>(r.error[j]);
                    f[j] += static_cast<std::uint64_t>(r.fallback[j]);
                }
            }
        } catch (...) {
            std::lock_guard lock(merge);
            if (!failure) failure = std::current_exception();
            next = config.replications;
        }
        std::lock_guard lock(merge);
        for (std::size_t j = 0; j < m; ++j) {
            errors[j] += e[j];
            fallbacks[j] += f[j];
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    PoECurve curve;
    curve.algorithm = algorithm.id();
    curve.instance = config.instance_id;
    curve.seed = config.seed;
    for (std::size_t j = 0; j < m; ++j) {
        curve.points.push_back(make_point(config.checkpoints[j], errors[j], config.replications, fallbacks[j]));
    }
    return curve;
}

std::vector<PoECurve> estimate_poe(const ExperimentConfig& config) {
    std::vector<PoECurve> out;
    for (const auto& a : config.algorithms) out.push_back(estimate_poe(config, a));
    return out;
}

double rate_from_poe(double poe, double h, std::uint64_t t) {
    if (!(h > 0.0) || t == 0) throw std::invalid_argument("rate: H and T must be positive");
    if (!(poe >= 0.0 && poe <= 1.0)) throw std::invalid_argument("rate: PoE must lie in [0, 1]");
    if (poe == 0.0) return std::numeric_limits<double>::infinity();
    if (poe == 1.0) return 0.0;
    return h * std::log(1.0 / poe) / static_cast<double>(t);
}

RateEstimate estimate_rate(const PoEPoint& point, double h, std::uint64_t t) {
    return {rate_from_poe(point.ci_high, h, t), rate_from_poe(point.poe, h, t), rate_from_poe(point.ci_low, h, t)};
}

double minimax_rate(std::span<const double> rates) {
    if (rates.empty()) throw std::invalid_argument("minimax_rate: empty list");
    double m = std::numeric_limits<double>::infinity();
    for (double r : rates) {
        if (!std::isinf(r)) m = std::min(m, r);
    }
    return m;
}

}  // namespace bai
