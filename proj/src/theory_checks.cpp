#include "bai/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bai/errors.hpp"
#include "bai/instances.hpp"
#include "bai/simulation.hpp"

namespace bai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

CheckResult pass(std::string name, std::string detail) {
    return {std::move(name), CheckStatus::pass, std::move(detail), {}};
}

CheckResult fail(std::string name, std::string detail, std::vector<double> witness) {
    return {std::move(name), CheckStatus::fail, std::move(detail), std::move(witness)};
}

// Unique argmax or K when tied.
std::size_t unique_best(std::span<const double> v) {
    std::size_t b = 0;
    bool tied = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[b]) {
            b = i;
            tied = false;
        } else if (v[i] == v[b]) {
            tied = true;
        }
    }
    return tied ? v.size() : b;
}

double h1_unique(std::span<const double> p, std::size_t b) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == b) continue;
        const double g = p[b] - p[j];
        s += 1.0 / (g * g);
    }
    return s;
}

void keep_min(GridMin& best, double v, std::span<const double> q, std::span<const double> p) {
    ++best.evaluated;
    if (v < best.value) {
        best.value = v;
        best.q.assign(q.begin(), q.end());
        best.p.assign(p.begin(), p.end());
    }
}

}  // namespace

std::string_view status_name(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass:
            return "pass";
        case CheckStatus::fail:
            return "fail";
        case CheckStatus::inconclusive:
            return "inconclusive";
    }
    return "fail";
}

std::vector<double> Axis::values() const {
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw ConfigError("grid axis: need finite lo <= hi and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

void GridSpec::validate() const {
    q.values();
    p.values();
    ray.values();
    if (!use_box && !use_ray) throw ConfigError("grid: enable the box or the ray");
}

GridMin brute_force_min_stability(std::size_t k, const GridSpec& grid) {
    grid.validate();
    GridMin best;
    best.value = kInf;
    const auto pv = grid.p.values();

    if (k == 2) {
        const std::vector<double> q{1.0, 0.0};
        const auto dv = d_vector(q);
        auto eval = [&](double p1, double p2) {
            const double pp[2] = {p1, p2};
            const auto b = unique_best(pp);
            if (b == 2) return;
            if (grid.misidentified_only && b == 0) return;
            const double s = h1_unique(pp, b) * ((q[0] - p1) * (q[0] - p1) / dv.d[0] + (q[1] - p2) * (q[1] - p2) / dv.d[1]);
            keep_min(best, s, q, pp);
        };
        if (grid.use_box) {
            for (double p1 : pv) {
                for (double p2 : pv) eval(p1, p2);
            }
        }
        if (grid.use_ray) {
            for (double a : grid.ray.values()) eval(1.0 - a, a);
        }
        return best;
    }
    if (k == 3) {
        for (double qm : grid.q.values()) {
            if (qm < 0.0 || qm > 1.0) continue;
            const std::vector<double> q{1.0, qm, 0.0};
            const auto dv = d_vector(q);
            const bool best2 = qm == 1.0;
            double pp[3];
            for (double p1 : pv) {
                pp[0] = p1;
                for (double p2 : pv) {
                    pp[1] = p2;
                    for (double p3 : pv) {
                        pp[2] = p3;
                        const auto b = unique_best(pp);
                        if (b == 3) continue;
                        if (grid.misidentified_only && (b == 0 || (b == 1 && best2))) continue;
                        double s = 0.0;
                        for (int i = 0; i < 3; ++i) s += (q[i] - pp[i]) * (q[i] - pp[i]) / dv.d[i];
                        keep_min(best, s * h1_unique(pp, b), q, pp);
                    }
                }
            }
        }
        return best;
    }
    throw std::invalid_argument("brute_force_min_stability: K must be 2 or 3");
}

CheckResult check_d_bounds(std::span<const double> q, double d_scale) {
    if (!std::is_sorted(q.begin(), q.end(), std::greater<>())) {
        throw std::invalid_argument("check_d_bounds: Q must be sorted descending");
    }
    const auto dv = d_vector(q);
    const double top = q[0];
    const std::size_t k = q.size();
    for (std::size_t i = 1; i < k; ++i) {
        const double gi = top - q[i];
        if (gi == 0.0) continue;
        double l = static_cast<double>(i);  // (i-1) with 1-based i
        for (std::size_t j = i + 1; j < k; ++j) {
            const double r = gi / (top - q[j]);
            l += r * r;
        }
        const double d = dv.d[i] * d_scale;
        const double slack = 1e-9 * l;
        if (d < l / 4.0 - slack || d > l + slack) {
            return fail("d-bounds", "D_" + std::to_string(i + 1) + " = " + fmt(d) + " outside [" + fmt(l / 4.0) +
                                        ", " + fmt(l) + "]",
                        {q.begin(), q.end()});
        }
    }
    return pass("d-bounds", "K=" + std::to_string(k));
}

CheckResult check_allocation(std::span<const double> q) {
    const std::size_t k = q.size();
    const auto dv = d_vector(q);
    const auto w = target_allocation_h1(q);
    const double lk = 2.0 + std::log(static_cast<double>(k));
    const double floor = 1.0 / (4.0 * static_cast<double>(k) * lk);
    std::vector<double> wit(q.begin(), q.end());
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        total += w[i];
        if (!(w[i] > 0.0)) return fail("allocation", "w_" + std::to_string(i + 1) + " not positive", wit);
        if (w[i] < floor * (1.0 - 1e-12)) {
            return fail("allocation", "w_" + std::to_string(i + 1) + " = " + fmt(w[i]) + " below floor " + fmt(floor),
                        wit);
        }
    }
    if (std::abs(total - 1.0) > 1e-12) return fail("allocation", "weights sum to " + fmt(total), wit);
    if (dv.z > 4.0 * lk * (1.0 + 1e-12)) return fail("allocation", "Z = " + fmt(dv.z) + " above 4(2+ln K)", wit);
    if (dv.z < 0.25 * (1.0 - 1e-12)) return fail("allocation", "Z = " + fmt(dv.z) + " below 1/4", wit);
    return pass("allocation", "K=" + std::to_string(k));
}

CheckResult check_rounding(const Allocation& w, std::uint64_t n_b, Rng& rng) {
    const auto n = round_allocation(w, n_b, rng);
    std::vector<double> wit(w.weights().begin(), w.weights().end());
    wit.push_back(static_cast<double>(n_b));
    const auto total = std::accumulate(n.begin(), n.end(), std::uint64_t{0});
    if (total != n_b) return fail("rounding", "sum " + std::to_string(total) + " != " + std::to_string(n_b), wit);
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (static_cast<double>(n[i]) < w[i] * static_cast<double>(n_b) / 4.0) {
            return fail("rounding", "entry " + std::to_string(i + 1) + " below w_i N_B / 4", wit);
        }
    }
    return pass("rounding", "K=" + std::to_string(w.size()) + " N_B=" + std::to_string(n_b));
}

CheckResult check_h3_band(std::span<const double> means) {
    const double ratio = h3(means) / h2(means, true);
    std::vector<double> wit(means.begin(), means.end());
    if (!(ratio > 0.5) || ratio > 1.0 + 1e-9) return fail("h3-band", "ratio " + fmt(ratio) + " outside (0.5, 1]", wit);
    return pass("h3-band", "ratio " + fmt(ratio));
}

SrExponentFit fit_sr_exponent(std::span<const double> means, std::span<const SrExponentPoint> points, double tolerance,
                              std::uint64_t min_errors) {
    SrExponentFit fit;
    fit.predicted = 1.0 / (h3(means) * log_bar(means.size()));
    std::ostringstream why;
    if (points.size() < 4) {
        fit.detail = "need at least four budgets";
        return fit;
    }
    std::size_t thin = 0;
    for (const auto& p : points) {
        if (p.errors < min_errors) {
            ++thin;
            why << " T=" << p.t << ":" << p.errors << "/" << p.replications;
        }
    }
    if (thin > 0) {
        fit.detail = std::to_string(thin) + " of " + std::to_string(points.size()) + " budgets have fewer than " +
                     std::to_string(min_errors) + " errors (" + why.str().substr(1) + ")";
        return fit;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = static_cast<double>(p.t);
        const double y = -std::log(static_cast<double>(p.errors) / static_cast<double>(p.replications));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.deviation = fit.slope / fit.predicted - 1.0;
    fit.status = std::abs(fit.deviation) <= tolerance ? CheckStatus::pass : CheckStatus::fail;
    fit.detail = "slope " + fmt(fit.slope) + " vs predicted " + fmt(fit.predicted);
    return fit;
}

std::vector<SrExponentPoint> measure_sr_exponent(std::span<const double> means, std::span<const std::uint64_t> sweep,
                                                 std::uint64_t replications, std::uint64_t seed, unsigned workers) {
    std::vector<SrExponentPoint> out;
    for (auto t : sweep) {
        ExperimentConfig cfg;
        cfg.instance = Instance({means.begin(), means.end()}, "sr-exponent");
        cfg.instance_id = "sr-exponent-T" + std::to_string(t);
        AlgorithmConfig sr;
        sr.kind = AlgorithmKind::successive_rejects;
        cfg.algorithms = {sr};
        cfg.budget = t;
        cfg.checkpoints = {t};
        cfg.replications = replications;
        cfg.seed = seed;
        cfg.workers = workers;
        cfg.resolve();
        const auto curve = estimate_poe(cfg, cfg.algorithms.front());
        out.push_back({t, curve.points.back().errors, replications});
    }
    return out;
}

GridMin brute_force_game_value(const GridSpec& grid, const AllocationFn& w_fn) {
    grid.validate();
    GridMin best;
    best.value = kInf;
    const auto pv = grid.p.values();
    const auto av = grid.ray.values();
    for (double qv : grid.q.values()) {
        if (qv == 1.0) continue;  // tied Q cannot misidentify a unique best
        const double q[2] = {1.0, qv};
        const std::size_t qb = qv > 1.0 ? 1 : 0;
        const auto w = w_fn(q);
        auto eval = [&](double p1, double p2) {
            const double pp[2] = {p1, p2};
            const auto b = unique_best(pp);
            if (b == 2) return;
            if (grid.misidentified_only && b == qb) return;
            const double loss = w[0] * (q[0] - p1) * (q[0] - p1) / 2.0 + w[1] * (q[1] - p2) * (q[1] - p2) / 2.0;
            keep_min(best, h1_unique(pp, b) * loss, q, pp);
        };
        if (grid.use_box) {
            for (double p1 : pv) {
                for (double p2 : pv) eval(p1, p2);
            }
        }
        if (grid.use_ray) {
            // the ray is anchored at the pinned Q = (1, 0) scale
            for (double a : av) eval(1.0 - a, a);
        }
    }
    return best;
}

double trackability_lhs(const BatchTrace& trace, std::span<const double> p) {
    if (p.size() != trace.arms()) throw std::invalid_argument("trackability: P length mismatch");
    if (trace.batches() == 0) throw std::invalid_argument("trackability: empty trace");
    double s = 0.0;
    for (std::size_t b = 0; b < trace.batches(); ++b) {
        const auto r = trace.realized(b);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (r[i] == 0.0) continue;
            const double d = trace.batch_mean(b, i) - p[i];
            s += r[i] * d * d / 2.0;
        }
    }
    return s / static_cast<double>(trace.batches());
}

GridMin trackability_rhs(std::span<const double> p, const GridSpec& grid) {
    const std::size_t k = p.size();
    if (k < 2 || k > 3) throw std::invalid_argument("trackability: K must be 2 or 3");
    const auto pb = unique_best(p);
    if (pb == k) throw DegenerateInput("trackability: P has tied best arms");
    const auto qv = grid.q.values();
    GridMin best;
    best.value = kInf;
    std::vector<double> q(k);
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) q[i] = qv[idx[i]];
        const double top = *std::max_element(q.begin(), q.end());
        if (q[pb] < top) {
            const auto w = target_allocation_h1(q);
            double loss = 0.0;
            for (std::size_t i = 0; i < k; ++i) loss += w[i] * (q[i] - p[i]) * (q[i] - p[i]) / 2.0;
            keep_min(best, loss, q, p);
        }
        std::size_t c = 0;
        while (c < k && ++idx[c] == qv.size()) idx[c++] = 0;
        if (c == k) break;
    }
    return best;
}

std::vector<double> random_means(Rng& rng, std::size_t k_min, std::size_t k_max, bool unique_best_arm) {
    const std::size_t k = k_min + static_cast<std::size_t>(rng.bits() % (k_max - k_min + 1));
    std::vector<double> m(k);
    const double scale = std::pow(10.0, -2.0 + 3.0 * rng.uniform());
    switch (rng.bits() % 3) {
        case 0:
            for (auto& v : m) v = scale * (2.0 * rng.uniform() - 1.0);
            break;
        case 1: {
            // a few clusters, so exact ties among suboptimal arms are common
            std::vector<double> levels(1 + rng.bits() % 4);
            for (auto& l : levels) l = scale * rng.uniform();
            for (auto& v : m) v = levels[rng.bits() % levels.size()];
            break;
        }
        default:
            for (std::size_t i = 0; i < k; ++i) m[i] = scale * std::pow(rng.uniform(), 3.0);
            break;
    }
    const auto top = *std::max_element(m.begin(), m.end());
    const auto first = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
    const bool all_equal = std::all_of(m.begin(), m.end(), [&](double v) { return v == top; });
    if (unique_best_arm || all_equal) m[first] = top + scale * (0.01 + rng.uniform());
    if (!unique_best_arm && k > 2 && rng.bits() % 4 == 0) {
        const auto tie = (first + 1) % k;
        const auto below = std::count_if(m.begin(), m.end(), [&](double v) { return v < m[first]; });
        // keep at least one arm off the top
        if (below > 1 || m[tie] == m[first]) m[tie] = m[first];
    }
    return m;
}

std::vector<CheckResult> allocation_suite(std::uint64_t trials, std::uint64_t seed, double d_scale) {
    std::vector<CheckResult> out;
    Rng rng(derive_seed(seed, {fnv1a64("allocation-suite")}));

    auto summarize = [&](const std::string& name, auto&& one) {
        for (std::uint64_t t = 0; t < trials; ++t) {
            auto r = one();
            if (r.status != CheckStatus::pass) {
                r.detail += " (trial " + std::to_string(t) + ")";
                out.push_back(std::move(r));
                return;
            }
        }
        out.push_back(pass(name, std::to_string(trials) + " randomized trials, zero violations"));
    };

    summarize("rounding", [&] {
        const std::size_t k = 2 + rng.bits() % 63;
        std::vector<double> w(k, 0.0);
        double s = 0.0;
        const bool sparse = rng.bits() % 3 == 0;
        for (auto& x : w) {
            x = (sparse && rng.bits() % 2 == 0) ? 0.0 : -std::log(1.0 - rng.uniform());
            s += x;
        }
        if (s == 0.0) {
            w[0] = 1.0;
            s = 1.0;
        }
        for (auto& x : w) x /= s;
        const std::uint64_t n_b = 2 * k + (rng.bits() % 4 == 0 ? 0 : rng.bits() % (50 * k));
        Rng local(rng.bits());
        return check_rounding(Allocation(std::move(w)), n_b, local);
    });
    summarize("simplex-floor-z", [&] { return check_allocation(random_means(rng, 2, 64, false)); });
    summarize("d-bounds", [&] {
        auto q = random_means(rng, 2, 64, false);
        std::sort(q.begin(), q.end(), std::greater<>());
        return check_d_bounds(q, d_scale);
    });
    return out;
}

std::vector<CheckResult> h3_suite(std::uint64_t trials, std::uint64_t seed) {
    std::vector<CheckResult> out;
    for (int id = 1; id <= 10; ++id) {
        auto r = check_h3_band(synthetic_instance(id).means);
        r.name = "h3-band instance-" + std::to_string(id);
        out.push_back(std::move(r));
    }
    Rng rng(derive_seed(seed, {fnv1a64("h3-suite")}));
    CheckResult random = pass("h3-band random", std::to_string(trials) + " randomized instances, K <= 40");
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto r = check_h3_band(random_means(rng, 2, 40, true));
        if (r.status != CheckStatus::pass) {
            random = std::move(r);
            random.name = "h3-band random";
            break;
        }
    }
    out.push_back(std::move(random));

    const std::vector<double> two{1.0, 0.0};
    const double r2 = h3(two) / h2(two, true);
    out.push_back(std::abs(r2 - 1.0) <= 1e-9 ? pass("h3-band K=2 equality", "ratio " + fmt(r2))
                                             : fail("h3-band K=2 equality", "ratio " + fmt(r2), two));
    std::vector<double> eq(200, 0.0);
    eq[0] = 1.0;
    const double r200 = h3(eq) / h2(eq, true);
    out.push_back(r200 > 0.5 && r200 <= 0.55 ? pass("h3-band equal gaps K=200", "ratio " + fmt(r200))
                                             : fail("h3-band equal gaps K=200", "ratio " + fmt(r200), {}));
    return out;
}

std::vector<CheckResult> stability_suite(const GridSpec& grid) {
    std::vector<CheckResult> out;
    const auto m2 = brute_force_min_stability(2, grid);
    std::vector<double> wit = m2.q;
    wit.insert(wit.end(), m2.p.begin(), m2.p.end());
    const std::string d2 = "min " + fmt(m2.value) + " over " + std::to_string(m2.evaluated) + " pairs";
    out.push_back(m2.value >= 0.5 && m2.value <= 0.52 ? CheckResult{"stability K=2", CheckStatus::pass, d2, wit}
                                                      : fail("stability K=2", d2, wit));

    const auto m3 = brute_force_min_stability(3, grid);
    wit = m3.q;
    wit.insert(wit.end(), m3.p.begin(), m3.p.end());
    const std::string d3 = "min " + fmt(m3.value) + " over " + std::to_string(m3.evaluated) + " pairs";
    out.push_back(m3.value > 0.0 ? CheckResult{"stability K=3", CheckStatus::pass, d3, wit}
                                 : fail("stability K=3", d3, wit));
    return out;
}

std::vector<CheckResult> sr_exponent_suite(std::uint64_t replications, std::uint64_t seed, unsigned workers) {
    const std::vector<double> p{1.0, 0.0};
    const std::vector<std::uint64_t> sweep{40, 80, 120, 160, 200};
    const auto points = measure_sr_exponent(p, sweep, replications, seed, workers);
    const auto fit = fit_sr_exponent(p, points);
    CheckResult r{"sr-exponent K=2", fit.status, fit.detail, {fit.slope, fit.predicted}};
    return {r};
}

}  // namespace bai
