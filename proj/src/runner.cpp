#include "bai/runner.hpp"

#include <array>
#include <string>

#include "bai/elimination.hpp"
#include "bai/errors.hpp"
#include "bai/pooled.hpp"
#include "bai/tracking.hpp"

namespace bai {

namespace {

constexpr std::array<std::pair<AlgorithmKind, std::string_view>, 8> kNames{{
    {AlgorithmKind::simple_tracking, "simple-tracking"},
    {AlgorithmKind::almost_tracking, "almost-tracking"},
    {AlgorithmKind::pooled_allocation, "pooled-allocation"},
    {AlgorithmKind::successive_rejects, "sr"},
    {AlgorithmKind::sequential_halving, "sh"},
    {AlgorithmKind::doubling_sr, "dsr"},
    {AlgorithmKind::doubling_sh, "dsh"},
    {AlgorithmKind::uniform, "uniform"},
}};

}  // namespace

std::string_view kind_name(AlgorithmKind kind) {
    for (const auto& [k, n] : kNames) {
        if (k == kind) return n;
    }
    throw std::logic_error("unknown algorithm kind");
}

AlgorithmKind parse_kind(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<AlgorithmKind> all_kinds() {
    std::vector<AlgorithmKind> out;
    for (const auto& entry : kNames) out.push_back(entry.first);
    return out;
}

bool needs_budget(AlgorithmKind kind) {
    return kind == AlgorithmKind::successive_rejects || kind == AlgorithmKind::sequential_halving ||
           kind == AlgorithmKind::pooled_allocation;
}

bool is_discarding(AlgorithmKind kind) {
    return kind == AlgorithmKind::sequential_halving || kind == AlgorithmKind::doubling_sr ||
           kind == AlgorithmKind::doubling_sh;
}

void AlgorithmConfig::validate(std::size_t arms) const {
    const std::string who = id() + ": ";
    if (arms < 2) throw ConfigError(who + "need at least two arms");
    if (needs_budget(kind) && !budget) throw ConfigError(who + "fixed-budget algorithm needs a budget");
    if (!needs_budget(kind) && budget) throw ConfigError(who + "anytime algorithm must not be given a budget");
    if (!(c_suf > 0.0 && c_suf < 1.0)) throw ConfigError(who + "c_suf must lie in (0, 1)");
    if (batch_size != 0 && batch_size < 2 * arms) throw ConfigError(who + "batch_size must be at least 2K");
    if (recompute_period == 0) throw ConfigError(who + "recompute_period must be positive");
    switch (kind) {
        case AlgorithmKind::successive_rejects:
            sr_schedule(arms, *budget);
            break;
        case AlgorithmKind::sequential_halving:
            sh_schedule(arms, *budget);
            break;
        case AlgorithmKind::pooled_allocation:
            PooledAllocation(arms, PooledConfig{*budget, pooled_batches});
            break;
        case AlgorithmKind::doubling_sr:
        case AlgorithmKind::doubling_sh: {
            const auto t1 = initial_budget == 0 ? default_doubling_initial_budget(arms) : initial_budget;
            Doubling(arms,
                     kind == AlgorithmKind::doubling_sr ? DoublingBase::successive_rejects
                                                        : DoublingBase::sequential_halving,
                     t1);
            break;
        }
        default:
            break;
    }
}

void run_algorithm(const AlgorithmConfig& config, Episode& episode, Rng& rng) {
    const std::size_t k = episode.arms();
    config.validate(k);
    switch (config.kind) {
        case AlgorithmKind::simple_tracking:
            run_simple_tracking(episode, {target_allocation_h1_or_uniform, config.recompute_period});
            break;
        case AlgorithmKind::almost_tracking:
            run_almost_tracking(episode, {target_allocation_h1_or_uniform, config.c_suf, config.batch_size}, rng);
            break;
        case AlgorithmKind::uniform:
            run_uniform(episode);
            break;
        case AlgorithmKind::successive_rejects: {
            SuccessiveRejects sr(k, *config.budget);
            episode.set_recommender([&sr] { return sr.recommendation(); });
            sr.run(episode);
            episode.finish();
            return;
        }
        case AlgorithmKind::sequential_halving: {
            SequentialHalving sh(k, *config.budget);
            episode.set_recommender([&sh] { return sh.recommendation(); });
            sh.run(episode);
            episode.finish();
            return;
        }
        case AlgorithmKind::pooled_allocation: {
            PooledAllocation pa(k, PooledConfig{*config.budget, config.pooled_batches});
            episode.set_recommender([&pa] { return pa.recommendation(); });
            pa.run(episode, rng);
            episode.finish();
            return;
        }
        case AlgorithmKind::doubling_sr:
        case AlgorithmKind::doubling_sh: {
            const auto t1 = config.initial_budget == 0 ? default_doubling_initial_budget(k) : config.initial_budget;
            Doubling d(k,
                       config.kind == AlgorithmKind::doubling_sr ? DoublingBase::successive_rejects
                                                                 : DoublingBase::sequential_halving,
                       t1);
            episode.set_recommender([&d] { return d.recommendation(); });
            d.run(episode);
            episode.finish();
            return;
        }
    }
    episode.finish();
}

}  // namespace bai
