#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bai/core.hpp"
#include "bai/errors.hpp"
#include "bai/instances.hpp"
#include "bai/rng.hpp"
#include "bai/theory_checks.hpp"

using namespace bai;

namespace {

std::vector<double> inst9() {
    std::vector<double> m(40, 0.0);
    m[0] = 1.0;
    m[1] = m[2] = 0.8;
    return m;
}

std::vector<double> inst7() {
    std::vector<double> m(40, 0.8);
    m[0] = 1.0;
    return m;
}

}  // namespace

TEST_SUITE("core") {
    TEST_CASE("instance needs two arms") {
        CHECK_THROWS_AS(Instance({1.0}, "x"), std::invalid_argument);
        CHECK(Instance({1.0, 0.0}, "x").arms() == 2);
    }

    TEST_CASE("empirical state bookkeeping") {
        EmpiricalState s(3);
        CHECK_FALSE(s.all_pulled());
        CHECK_THROWS_AS(s.mean(0), std::logic_error);
        s.record(0, 2.0);
        s.record(1, 3.0, 3);
        s.record(2, -1.0);
        CHECK(s.time() == 5);
        CHECK(s.all_pulled());
        CHECK(s.mean(1) == doctest::Approx(1.0));
        std::uint64_t total = 0;
        for (auto c : s.counts()) total += c;
        CHECK(total == s.time());
    }

    TEST_CASE("best_arms") {
        CHECK(best_arms(std::vector<double>{1.0, 0.8, 0.8}) == std::vector<ArmIndex>{0});
        CHECK(best_arms(std::vector<double>{1.0, 1.0, 0.0}) == std::vector<ArmIndex>{0, 1});
        CHECK(best_arms(std::vector<double>{0.0, 0.0}) == std::vector<ArmIndex>{0, 1});
        CHECK_THROWS_AS(best_arms(std::vector<double>{}), std::invalid_argument);
    }

    TEST_CASE("gaps") {
        const auto g = gaps(std::vector<double>{1.0, 0.5, 0.0});
        CHECK(g.gaps == std::vector<double>{0.0, 0.5, 1.0});
        CHECK(g.best_set == std::vector<ArmIndex>{0});
        const auto z = gaps(std::vector<double>{0.0, 0.0});
        CHECK(z.gaps == std::vector<double>{0.0, 0.0});
        const auto i1 = gaps(synthetic_instance(1).means);
        CHECK(i1.gaps[39] == doctest::Approx(1.95).epsilon(1e-12));
    }

    TEST_CASE("h1") {
        CHECK(h1(std::vector<double>{1.0, 0.0}) == doctest::Approx(1.0));
        CHECK(h1(inst9()) == doctest::Approx(87.0).epsilon(1e-12));
        CHECK(h1(inst7()) == doctest::Approx(975.0).epsilon(1e-12));
        CHECK_THROWS_AS(h1(std::vector<double>{1.0, 1.0, 0.0}), DegenerateInput);
    }

    TEST_CASE("h2 both conventions") {
        CHECK(h2(std::vector<double>{1.0, 0.0}) == doctest::Approx(2.0));
        CHECK(h2(std::vector<double>{1.0, 0.0}, true) == doctest::Approx(8.0));
        CHECK(h2(inst9()) == doctest::Approx(75.0).epsilon(1e-12));
        CHECK(h2(inst7()) == doctest::Approx(1000.0).epsilon(1e-12));
        CHECK_THROWS_AS(h2(std::vector<double>{1.0, 1.0}), DegenerateInput);
    }

    TEST_CASE("modified mean") {
        CHECK(modified_mean(std::vector<double>{1.0, 0.0}, 2) == doctest::Approx(0.5));
        CHECK(modified_mean(std::vector<double>{1.0, 0.9, 0.2}, 3) == doctest::Approx(0.6));
        const double eps = 1e-6;
        CHECK(modified_mean(std::vector<double>{1.0, 1.0 - eps, 0.0}, 2) == doctest::Approx((2.0 - eps) / 2.0));
        CHECK_THROWS_AS(modified_mean(std::vector<double>{0.0, 1.0}, 2), std::invalid_argument);
        CHECK_THROWS_AS(modified_mean(std::vector<double>{1.0, 0.0}, 3), std::invalid_argument);
        CHECK_THROWS_AS(modified_mean(std::vector<double>{1.0, 0.0}, 1), std::invalid_argument);
    }

    TEST_CASE("h3") {
        CHECK(h3(std::vector<double>{1.0, 0.0}) == doctest::Approx(8.0));
        CHECK(h3(std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0}) == doctest::Approx(12.5));
        std::vector<double> eq(200, 0.0);
        eq[0] = 1.0;
        const double r = h3(eq) / h2(eq, true);
        CHECK(r > 0.5);
        CHECK(r <= 0.55);
        CHECK(r == doctest::Approx(200.0 / 398.0).epsilon(1e-9));
        CHECK_THROWS_AS(h3(std::vector<double>{1.0, 1.0, 0.0}), DegenerateInput);
    }

    TEST_CASE("log_bar") {
        CHECK(log_bar(2) == doctest::Approx(1.0));
        CHECK(log_bar(3) == doctest::Approx(4.0 / 3.0));
    }

    TEST_CASE("property: modified mean stays in [P_j, P_1]") {
        Rng rng(11);
        for (int trial = 0; trial < 2000; ++trial) {
            auto m = random_means(rng, 2, 40, true);
            std::sort(m.begin(), m.end(), std::greater<>());
            const std::size_t j = 2 + rng.bits() % (m.size() - 1);
            const double v = modified_mean(m, j);
            REQUIRE(v >= m[j - 1] - 1e-12);
            REQUIRE(v <= m[0] + 1e-12);
        }
    }

    TEST_CASE("property: shift and scale behaviour of h1, h2, h3") {
        Rng rng(12);
        for (int trial = 0; trial < 500; ++trial) {
            const auto m = random_means(rng, 2, 30, true);
            const double c = 4.0 * rng.uniform() - 2.0;
            const double s = 0.1 + 5.0 * rng.uniform();
            std::vector<double> shifted(m), scaled(m);
            for (auto& v : shifted) v += c;
            for (auto& v : scaled) v *= s;
            const double a1 = h1(m), a2 = h2(m), a3 = h3(m);
            REQUIRE(h1(shifted) == doctest::Approx(a1).epsilon(1e-9));
            REQUIRE(h2(shifted) == doctest::Approx(a2).epsilon(1e-9));
            REQUIRE(h3(shifted) == doctest::Approx(a3).epsilon(1e-9));
            REQUIRE(h1(scaled) == doctest::Approx(a1 / (s * s)).epsilon(1e-9));
            REQUIRE(h2(scaled) == doctest::Approx(a2 / (s * s)).epsilon(1e-9));
            REQUIRE(h3(scaled) == doctest::Approx(a3 / (s * s)).epsilon(1e-9));
        }
    }

    TEST_CASE("property: h3 band on 10^4 random instances") {
        Rng rng(13);
        for (int trial = 0; trial < 10000; ++trial) {
            const auto m = random_means(rng, 2, 64, true);
            const double r = h3(m) / h2(m, true);
            REQUIRE(r > 0.5);
            REQUIRE(r <= 1.0 + 1e-9);
        }
    }

    TEST_CASE("rng seeds are stable and distinct") {
        CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
        CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
        Rng a(5), b(5);
        for (int i = 0; i < 100; ++i) REQUIRE(a.normal() == b.normal());
        Rng u(6);
        for (int i = 0; i < 1000; ++i) {
            const double x = u.uniform();
            REQUIRE(x >= 0.0);
            REQUIRE(x < 1.0);
        }
    }
}
