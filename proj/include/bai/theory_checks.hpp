#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bai/allocation.hpp"
#include "bai/core.hpp"
#include "bai/tracking.hpp"

namespace bai {

enum class CheckStatus { pass, fail, inconclusive };
std::string_view status_name(CheckStatus status);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
    std::vector<double> witness;  // offending or minimizing point, if any
};

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    // lo, lo + step, ... up to hi (inclusive within half a step).
    std::vector<double> values() const;
};

// Shift and scale invariance lets Q be pinned to best value 1 (and, for
// K=3, worst value 0); P ranges over the box p^K. For K=2 the box is
// complemented by the symmetric ray P = (1-a, a).
struct GridSpec {
    Axis q{-3.0, 3.0, 0.05};
    Axis p{-10.0, 10.0, 0.1};
    Axis ray{0.5, 50.0, 0.1};
    bool use_box = true;
    bool use_ray = true;
    bool misidentified_only = true;  // keep pairs with i*(P) not in i*(Q)

    void validate() const;
};

struct GridMin {
    double value = 0.0;
    std::vector<double> q;
    std::vector<double> p;
    std::uint64_t evaluated = 0;
};

// Minimum of stability(Q, P) over the grid for K = 2 (Q = (1, 0)) or
// K = 3 (Q = (1, q, 0), q from the q-axis clipped to [0, 1]).
GridMin brute_force_min_stability(std::size_t k, const GridSpec& grid);

// L_i/4 <= D_i <= L_i with L_i = (i-1) + sum_{j>i} (Delta_i/Delta_j)^2;
// `q` sorted descending. `d_scale` multiplies D (fault injection only).
CheckResult check_d_bounds(std::span<const double> q, double d_scale = 1.0);

// Simplex, strict positivity, the floor 1/(4K(2+ln K)) and Z <= 4(2+ln K).
CheckResult check_allocation(std::span<const double> q);

// Integer entries summing to n_b with entry_i >= w_i n_b / 4.
CheckResult check_rounding(const Allocation& w, std::uint64_t n_b, Rng& rng);

// h3 / h2(gaussian) in (0.5, 1].
CheckResult check_h3_band(std::span<const double> means);

struct SrExponentPoint {
    std::uint64_t t = 0;
    std::uint64_t errors = 0;
    std::uint64_t replications = 0;
};

struct SrExponentFit {
    CheckStatus status = CheckStatus::inconclusive;
    double slope = 0.0;
    double predicted = 0.0;  // 1 / (H3 logbar K)
    double deviation = 0.0;  // slope / predicted - 1
    std::string detail;
};

// Least-squares slope of -ln PoE against T. Inconclusive when any point has
// fewer than `min_errors` error events or fewer than four points are given.
SrExponentFit fit_sr_exponent(std::span<const double> means, std::span<const SrExponentPoint> points,
                              double tolerance = 0.2, std::uint64_t min_errors = 20);

// Runs Successive Rejects with budget T for every T in `sweep`.
std::vector<SrExponentPoint> measure_sr_exponent(std::span<const double> means, std::span<const std::uint64_t> sweep,
                                                 std::uint64_t replications, std::uint64_t seed, unsigned workers);

// inf over misidentified grid pairs of h1(P) sum_i w_i(Q)(Q_i-P_i)^2/2, K = 2.
// Q = (1, q) for q on the q-axis, P on the box and ray.
GridMin brute_force_game_value(const GridSpec& grid, const AllocationFn& w_fn);

// (1/B) sum_b sum_i w_{b,i} (Q_{b,i} - P_i)^2 / 2 over the realized rows.
double trackability_lhs(const BatchTrace& trace, std::span<const double> p);
// inf over Q on q-axis^K with i*(P) not in i*(Q) of sum_i w*_i(Q)(Q_i-P_i)^2/2, K <= 3.
GridMin trackability_rhs(std::span<const double> p, const GridSpec& grid);

// Suites shared by the CLI and the acceptance tests.
std::vector<CheckResult> allocation_suite(std::uint64_t trials, std::uint64_t seed, double d_scale = 1.0);
std::vector<CheckResult> h3_suite(std::uint64_t trials, std::uint64_t seed);
std::vector<CheckResult> stability_suite(const GridSpec& grid);
std::vector<CheckResult> sr_exponent_suite(std::uint64_t replications, std::uint64_t seed, unsigned workers);

// Random instance generator shared by the property tests: K in [k_min, k_max],
// means drawn from a mix of spread, clustered and tied layouts.
std::vector<double> random_means(Rng& rng, std::size_t k_min, std::size_t k_max, bool unique_best);

}  // namespace bai
