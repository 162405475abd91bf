#include "bai/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "bai/errors.hpp"

namespace bai {

Instance::Instance(std::vector<double> m, std::string l) : means(std::move(m)), label(std::move(l)) {
    if (means.size() < 2) {
        throw std::invalid_argument("instance '" + label + "' needs at least two arms");
    }
}

EmpiricalState::EmpiricalState(std::size_t arms) : counts_(arms, 0), sums_(arms, 0.0) {}

void EmpiricalState::record(ArmIndex arm, double reward_sum, std::uint64_t pulls) {
    counts_.at(arm) += pulls;
    sums_[arm] += reward_sum;
    time_ += pulls;
}

double EmpiricalState::mean(ArmIndex arm) const {
    if (counts_.at(arm) == 0) {
        throw std::logic_error("empirical mean of an unpulled arm");
    }
    return sums_[arm] / static_cast<double>(counts_[arm]);
}

std::vector<double> EmpiricalState::means() const {
    std::vector<double> q(arms());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = mean(i);
    return q;
}

bool EmpiricalState::all_pulled() const {
    return std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c > 0; });
}

std::vector<ArmIndex> best_arms(std::span<const double> means) {
    if (means.empty()) throw std::invalid_argument("best_arms: empty input");
    const double top = *std::max_element(means.begin(), means.end());
    std::vector<ArmIndex> out;
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (means[i] == top) out.push_back(i);
    }
    return out;
}

ArmIndex first_best(std::span<const double> means) {
    if (means.empty()) throw std::invalid_argument("first_best: empty input");
    return static_cast<ArmIndex>(std::max_element(means.begin(), means.end()) - means.begin());
}

GapVector gaps(std::span<const double> means) {
    GapVector g;
    g.best_set = best_arms(means);
    const double top = means[g.best_set.front()];
    g.gaps.reserve(means.size());
    for (double m : means) g.gaps.push_back(top - m);
    return g;
}

namespace {

void require_unique_best(std::span<const double> means, const char* what) {
    if (means.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least two arms");
    if (best_arms(means).size() != 1) {
        throw DegenerateInput(std::string(what) + " is undefined for tied best arms");
    }
}

}  // namespace

double h1(std::span<const double> means) {
    require_unique_best(means, "H1");
    const auto g = gaps(means);
    double total = 0.0;
    for (double d : g.gaps) {
        if (d > 0.0) total += 1.0 / (d * d);
    }
    return total;
}

double h2(std::span<const double> means, bool gaussian_factor) {
    require_unique_best(means, "H2");
    auto g = gaps(means).gaps;
    std::sort(g.begin(), g.end());
    g[0] = g[1];
    double worst = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        worst = std::max(worst, static_cast<double>(i + 1) / (g[i] * g[i]));
    }
    return gaussian_factor ? 4.0 * worst : worst;
}

double modified_mean(std::span<const double> p, std::size_t j) {
    if (j < 2 || j > p.size()) throw std::invalid_argument("modified_mean: j must lie in [2, K]");
    if (!std::is_sorted(p.begin(), p.end(), std::greater<>())) {
        throw std::invalid_argument("modified_mean: means must be sorted in descending order");
    }
    // Candidate inclusion sets are {1} plus a suffix {m..j} of the 1-based
    // arms 2..j, since membership is a threshold on sorted values.
    const double scale = std::max({1.0, std::abs(p[0]), std::abs(p[j - 1])});
    const double tol = 1e-12 * scale;
    double suffix_sum = 0.0;
    std::size_t consistent = 0;
    double result = 0.0;
    double best_violation = INFINITY;
    double least_bad = p[0];
    for (std::size_t m = j; m >= 2; --m) {
        suffix_sum += p[m - 1];
        const double avg = (p[0] + suffix_sum) / static_cast<double>(j - m + 2);
        // included members must be <= avg; the first excluded one must be > avg
        const double over = p[m - 1] - avg;
        const double under = m > 2 ? avg - p[m - 2] : -INFINITY;
        if (over <= tol && under < tol) {
            if (consistent == 0) result = avg;
            ++consistent;
        }
        const double violation = std::max(over, under);
        if (violation < best_violation) {
            best_violation = violation;
            least_bad = avg;
        }
    }
    if (consistent == 0) {
        // Rounding can push the true fixed point just outside every candidate.
        if (best_violation > 1e-9 * scale) {
            throw std::logic_error("modified_mean: no self-consistent inclusion set");
        }
        return least_bad;
    }
    return result;
}

double h3(std::span<const double> means) {
    require_unique_best(means, "H3");
    std::vector<double> p(means.begin(), means.end());
    std::sort(p.begin(), p.end(), std::greater<>());
    double worst = 0.0;
    for (std::size_t j = 2; j <= p.size(); ++j) {
        const double tilde = modified_mean(p, j);
        double sq = (p[0] - tilde) * (p[0] - tilde);
        for (std::size_t i = 1; i < j; ++i) {
            const double d = std::max(tilde - p[i], 0.0);
            sq += d * d;
        }
        worst = std::max(worst, 2.0 * static_cast<double>(j) / sq);
    }
    return worst;
}

double log_bar(std::size_t k) {
    if (k < 2) throw std::invalid_argument("log_bar: K must be at least 2");
    double s = 0.5;
    for (std::size_t i = 2; i <= k; ++i) s += 1.0 / static_cast<double>(i);
    return s;
}

}  // namespace bai
