#include <doctest.h>

#include <cmath>
#include <vector>

#include "bai/allocation.hpp"
#include "bai/errors.hpp"
#include "bai/theory_checks.hpp"

using namespace bai;

namespace {

std::vector<SrExponentPoint> exact_points(double slope, std::uint64_t reps) {
    std::vector<SrExponentPoint> pts;
    for (std::uint64_t t : {40, 80, 120, 160}) {
        const double poe = std::exp(-slope * static_cast<double>(t));
        pts.push_back({t, static_cast<std::uint64_t>(std::llround(poe * static_cast<double>(reps))), reps});
    }
    return pts;
}

}  // namespace

TEST_SUITE("theory") {
    TEST_CASE("axis values") {
        CHECK(Axis{0.0, 1.0, 0.25}.values().size() == 5);
        CHECK(Axis{-10.0, 10.0, 0.1}.values().size() == 201);
        CHECK(Axis{0.5, 50.0, 0.1}.values().back() == doctest::Approx(50.0));
        CHECK(Axis{2.0, 2.0, 1.0}.values() == std::vector<double>{2.0});
    }

    TEST_CASE("grid validation") {
        GridSpec g;
        g.p = Axis{1.0, 0.0, 0.1};
        CHECK_THROWS_AS(g.validate(), ConfigError);
        g = GridSpec{};
        g.p.step = 0.0;
        CHECK_THROWS_AS(g.validate(), ConfigError);
    }

    TEST_CASE("stability on a single ray point") {
        GridSpec g;
        g.use_box = false;
        g.ray = Axis{2.0, 2.0, 1.0};
        const auto m = brute_force_min_stability(2, g);
        CHECK(m.value == doctest::Approx(8.0 / 9.0));
        CHECK(m.evaluated == 1);
        CHECK(m.p == std::vector<double>{-1.0, 2.0});
    }

    TEST_CASE("stability minimum for K=2 on the full grid") {
        const auto m = brute_force_min_stability(2, GridSpec{});
        CHECK(m.value >= 0.5);
        CHECK(m.value <= 0.52);
        // the ray end point 5000/9801 is the minimizer
        CHECK(m.value == doctest::Approx(5000.0 / 9801.0).epsilon(1e-9));
    }

    TEST_CASE("stability for K=3 on a coarse grid is positive") {
        GridSpec g;
        g.q = Axis{0.0, 1.0, 0.25};
        g.p = Axis{-3.0, 3.0, 0.25};
        const auto m = brute_force_min_stability(3, g);
        CHECK(m.value > 0.0);
        CHECK(m.evaluated > 0);
        CHECK_THROWS_AS(brute_force_min_stability(4, g), std::invalid_argument);
    }

    TEST_CASE("game value on a degenerate grid") {
        GridSpec g;
        g.q = Axis{0.0, 0.0, 1.0};
        g.use_box = false;
        g.ray = Axis{2.0, 2.0, 1.0};
        const auto m = brute_force_game_value(g, target_allocation_h1_or_uniform);
        CHECK(m.value == doctest::Approx(2.0 / 9.0));
    }

    TEST_CASE("game value of uniform sampling tends to 1/8 along the ray") {
        GridSpec g;
        g.q = Axis{0.0, 0.0, 1.0};
        g.use_box = false;
        const AllocationFn uniform = [](std::span<const double> q) { return Allocation::uniform(q.size()); };
        const auto m = brute_force_game_value(g, uniform);
        CHECK(m.value == doctest::Approx(2500.0 / (2.0 * 9801.0)).epsilon(1e-9));
    }

    TEST_CASE("trackability right side") {
        GridSpec g;
        g.q = Axis{-1.0, 2.0, 0.5};
        const std::vector<double> p{1.0, 0.0};
        const auto m = trackability_rhs(p, g);
        CHECK(m.value > 0.0);
        CHECK(m.q[1] > m.q[0]);
        CHECK_THROWS_AS(trackability_rhs(std::vector<double>{1.0, 1.0}, g), DegenerateInput);
    }

    TEST_CASE("sr exponent fit") {
        const std::vector<double> two{1.0, 0.0};
        auto fit = fit_sr_exponent(two, exact_points(0.125, 100000000000000ULL));
        CHECK(fit.predicted == doctest::Approx(0.125));
        CHECK(fit.status == CheckStatus::pass);
        CHECK(fit.slope == doctest::Approx(0.125).epsilon(1e-3));

        fit = fit_sr_exponent(two, exact_points(0.0625, 100000000000000ULL));
        CHECK(fit.status == CheckStatus::fail);

        auto pts = exact_points(0.125, 100000000000000ULL);
        pts.pop_back();
        CHECK(fit_sr_exponent(two, pts).status == CheckStatus::inconclusive);

        pts = exact_points(0.125, 100000000000000ULL);
        pts.back().errors = 3;
        fit = fit_sr_exponent(two, pts);
        CHECK(fit.status == CheckStatus::inconclusive);
        CHECK(fit.detail.find("fewer than 20") != std::string::npos);
    }

    TEST_CASE("sr exponent fit on closed-form two-arm probabilities") {
        // K=2: each arm gets ceil((T-2)/2) pulls, PoE = Phi(-sqrt(n/2)).
        const std::vector<double> two{1.0, 0.0};
        const std::uint64_t reps = 10000000000000000ULL;
        std::vector<SrExponentPoint> pts;
        for (std::uint64_t t : {40, 80, 120, 160, 200}) {
            const double n = std::ceil((static_cast<double>(t) - 2.0) / 2.0);
            const double poe = 0.5 * std::erfc(std::sqrt(n / 2.0) / std::sqrt(2.0));
            pts.push_back({t, static_cast<std::uint64_t>(std::llround(poe * static_cast<double>(reps))), reps});
        }
        const auto fit = fit_sr_exponent(two, pts);
        CHECK(fit.status == CheckStatus::pass);
        CHECK(fit.slope == doctest::Approx(0.1296).epsilon(1e-3));
        CHECK(pts.back().errors > 9000);
        CHECK(pts.back().errors < 11000);
    }

    TEST_CASE("sr exponent measurement is reproducible") {
        const std::vector<double> two{1.0, 0.0};
        const std::vector<std::uint64_t> sweep{4, 8};
        const auto a = measure_sr_exponent(two, sweep, 2000, 3, 1);
        const auto b = measure_sr_exponent(two, sweep, 2000, 3, 2);
        REQUIRE(a.size() == 2);
        CHECK(a[0].errors == b[0].errors);
        CHECK(a[1].errors == b[1].errors);
        CHECK(a[0].errors > a[1].errors);
    }

    TEST_CASE("suites pass on clean code and fail under injection") {
        for (const auto& r : allocation_suite(500, 1)) CHECK_MESSAGE(r.status == CheckStatus::pass, r.name);
        bool injected_fail = false;
        for (const auto& r : allocation_suite(500, 1, 5.0)) injected_fail |= r.status == CheckStatus::fail;
        CHECK(injected_fail);
        for (const auto& r : h3_suite(1000, 2)) CHECK_MESSAGE(r.status == CheckStatus::pass, r.name);
    }

    TEST_CASE("rounding check examples") {
        Rng rng(4);
        CHECK(check_rounding(Allocation({0.9, 0.1}), 4, rng).status == CheckStatus::pass);
        CHECK(check_rounding(Allocation::uniform(5), 10, rng).status == CheckStatus::pass);
    }
}
