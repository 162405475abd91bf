#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bai/errors.hpp"
#include "bai/simulation.hpp"

using namespace bai;

namespace {

ExperimentConfig small_experiment(AlgorithmKind kind, std::uint64_t reps, unsigned workers) {
    ExperimentConfig cfg;
    cfg.instance = Instance({1.0, 0.6, 0.5, 0.0}, "small");
    cfg.instance_id = "small";
    AlgorithmConfig a;
    a.kind = kind;
    cfg.algorithms = {a};
    cfg.budget = 120;
    cfg.replications = reps;
    cfg.seed = 42;
    cfg.workers = workers;
    cfg.resolve();
    return cfg;
}

}  // namespace

TEST_SUITE("simulation") {
    TEST_CASE("clopper-pearson examples") {
        auto ci = clopper_pearson(100, 10000);
        CHECK(ci.low == doctest::Approx(0.008143596567611067).epsilon(1e-9));
        CHECK(ci.high == doctest::Approx(0.012149504886061606).epsilon(1e-9));
        CHECK(ci.low >= 0.008);
        CHECK(ci.high <= 0.013);
        ci = clopper_pearson(0, 100);
        CHECK(ci.low == 0.0);
        CHECK(ci.high == doctest::Approx(1.0 - std::pow(0.025, 0.01)).epsilon(1e-12));
        CHECK(ci.high == doctest::Approx(0.0362167).epsilon(1e-5));
        ci = clopper_pearson(5, 50);
        CHECK(ci.low == doctest::Approx(0.03327509358902247).epsilon(1e-9));
        CHECK(ci.high == doctest::Approx(0.21813536643420225).epsilon(1e-9));
        ci = clopper_pearson(7, 7);
        CHECK(ci.high == 1.0);
        CHECK_THROWS_AS(clopper_pearson(3, 2), std::invalid_argument);
    }

    TEST_CASE("poe point invariants") {
        for (std::uint64_t r : {1, 7, 100, 10000}) {
            for (std::uint64_t e = 0; e <= r; e += std::max<std::uint64_t>(1, r / 13)) {
                const auto p = make_point(10, e, r);
                REQUIRE(0.0 <= p.ci_low);
                REQUIRE(p.ci_low <= p.poe);
                REQUIRE(p.poe <= p.ci_high);
                REQUIRE(p.ci_high <= 1.0);
                REQUIRE(p.poe == static_cast<double>(e) / static_cast<double>(r));
            }
        }
        CHECK(make_point(5, 9, 9).poe == 1.0);
    }

    TEST_CASE("rates") {
        CHECK(rate_from_poe(0.01, 87.0, 10000) == doctest::Approx(0.0400649806180964).epsilon(1e-12));
        CHECK(rate_from_poe(1.0, 87.0, 10000) == 0.0);
        CHECK(std::isinf(rate_from_poe(0.0, 87.0, 10000)));
        const auto r = estimate_rate(make_point(100, 100, 10000), 87.0, 10000);
        CHECK(r.lower < r.plugin);
        CHECK(r.plugin < r.upper);
        CHECK(std::isinf(estimate_rate(make_point(100, 0, 100), 1.0, 100).upper));
    }

    TEST_CASE("minimax") {
        const double inf = std::numeric_limits<double>::infinity();
        CHECK(minimax_rate(std::vector<double>{0.5, 0.9, 0.7}) == 0.5);
        CHECK(minimax_rate(std::vector<double>{inf, 0.3}) == 0.3);
        CHECK(minimax_rate(std::vector<double>{0.42}) == 0.42);
        CHECK(std::isinf(minimax_rate(std::vector<double>{inf, inf})));
        CHECK_THROWS_AS(minimax_rate(std::vector<double>{}), std::invalid_argument);
    }

    TEST_CASE("default checkpoints") {
        const auto c = default_checkpoints(40, 2000);
        CHECK(c.size() == 51);
        CHECK(c.front() == 40);
        CHECK(c.back() == 2000);
        CHECK(std::is_sorted(c.begin(), c.end()));
        CHECK(std::adjacent_find(c.begin(), c.end()) == c.end());
        const auto small = default_checkpoints(2, 10);
        CHECK(small.front() == 2);
        CHECK(small.back() == 10);
    }

    TEST_CASE("experiment validation") {
        ExperimentConfig cfg;
        cfg.instance = Instance({1.0, 1.0}, "tie");
        cfg.algorithms = {AlgorithmConfig{}};
        cfg.budget = 10;
        CHECK_THROWS_AS(cfg.resolve(), ConfigError);
        cfg.instance = Instance({1.0, 0.0}, "ok");
        cfg.checkpoints = {5, 3};
        CHECK_THROWS_AS(cfg.resolve(), ConfigError);
        cfg.checkpoints = {5, 11};
        CHECK_THROWS_AS(cfg.resolve(), ConfigError);
        cfg.checkpoints = {};
        cfg.replications = 0;
        CHECK_THROWS_AS(cfg.resolve(), ConfigError);
        cfg.replications = 3;
        AlgorithmConfig sr;
        sr.kind = AlgorithmKind::successive_rejects;
        cfg.algorithms = {sr};
        CHECK_NOTHROW(cfg.resolve());
        CHECK(cfg.algorithms[0].budget == std::optional<std::uint64_t>{10});
    }

    TEST_CASE("replications are deterministic and noiseless runs are correct") {
        auto cfg = small_experiment(AlgorithmKind::almost_tracking, 1, 1);
        const auto a = run_replication(cfg, cfg.algorithms[0], 3);
        const auto b = run_replication(cfg, cfg.algorithms[0], 3);
        CHECK(a.error == b.error);

        for (auto kind : all_kinds()) {
            if (kind == AlgorithmKind::pooled_allocation) continue;
            auto zero = small_experiment(kind, 1, 1);
            zero.noise_sigma = 0.0;
            const auto r = run_replication(zero, zero.algorithms[0], 0);
            // every algorithm is correct by the end on a noiseless instance
            CHECK_MESSAGE(r.error.back() == 0, kind_name(kind));
        }
    }

    TEST_CASE("results do not depend on the worker count") {
        for (auto kind : {AlgorithmKind::simple_tracking, AlgorithmKind::almost_tracking, AlgorithmKind::doubling_sh}) {
            const auto one = estimate_poe(small_experiment(kind, 300, 1));
            const auto many = estimate_poe(small_experiment(kind, 300, 5));
            REQUIRE(one.size() == many.size());
            for (std::size_t j = 0; j < one[0].points.size(); ++j) {
                REQUIRE(one[0].points[j].errors == many[0].points[j].errors);
                REQUIRE(one[0].points[j].fallbacks == many[0].points[j].fallbacks);
            }
        }
    }

    TEST_CASE("non-discarding curves are defined from t = K") {
        for (auto kind : {AlgorithmKind::simple_tracking, AlgorithmKind::almost_tracking, AlgorithmKind::uniform}) {
            const auto c = estimate_poe(small_experiment(kind, 50, 1));
            for (const auto& p : c[0].points) {
                if (p.t >= 4) REQUIRE(p.fallbacks == 0);
            }
        }
    }

    TEST_CASE("uniform sampler against the Gaussian tail closed form") {
        ExperimentConfig cfg;
        cfg.instance = Instance({1.0, 0.0}, "two");
        cfg.instance_id = "two";
        AlgorithmConfig u;
        u.kind = AlgorithmKind::uniform;
        cfg.algorithms = {u};
        cfg.budget = 200;
        cfg.checkpoints = {200};
        cfg.replications = 100000;
        cfg.seed = 5;
        cfg.resolve();
        // PoE = Phi(-sqrt(50)) ~ 7.7e-13, so 10^5 runs see no error.
        CHECK(estimate_poe(cfg)[0].points.back().errors == 0);

        cfg.budget = 8;
        cfg.checkpoints = {8};
        cfg.resolve();
        // 4 pulls per arm: PoE = Phi(-sqrt(2)) = 0.0786496
        const auto p = estimate_poe(cfg)[0].points.back();
        CHECK(p.ci_low <= 0.0786496);
        CHECK(p.ci_high >= 0.0786496);
    }

    TEST_CASE("property: extending R rarely leaves the earlier interval") {
        Rng rng(31);
        int outside = 0;
        const int meta = 1000;
        for (int m = 0; m < meta; ++m) {
            const double p = 0.02 + 0.2 * rng.uniform();
            std::uint64_t e1 = 0, e2 = 0;
            for (int i = 0; i < 200; ++i) e1 += rng.uniform() < p;
            e2 = e1;
            for (int i = 200; i < 2000; ++i) e2 += rng.uniform() < p;
            const auto ci = clopper_pearson(e1, 200);
            const double wide = static_cast<double>(e2) / 2000.0;
            outside += wide < ci.low || wide > ci.high;
        }
        CHECK(outside <= meta / 20);
    }
}
