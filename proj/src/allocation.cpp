#include "bai/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bai/errors.hpp"

namespace bai {

Allocation::Allocation(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("allocation: empty weight vector");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("allocation: weights must be finite and >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("allocation: weights must sum to 1");
}

Allocation Allocation::uniform(std::size_t arms) {
    return Allocation(std::vector<double>(arms, 1.0 / static_cast<double>(arms)));
}

double h1_prime(ArmIndex i, std::span<const double> q) {
    if (q.size() < 2) throw std::invalid_argument("h1_prime: need at least two arms");
    if (i >= q.size()) throw std::out_of_range("h1_prime: arm index");
    const double top = *std::max_element(q.begin(), q.end());
    const double gi = top - q[i];
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (j == i) continue;
        const double d = (top - q[j]) + gi;
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        s += 1.0 / (d * d);
    }
    return s;
}

DVector d_vector(std::span<const double> q) {
    const std::size_t k = q.size();
    if (k < 2) throw std::invalid_argument("d_vector: need at least two arms");
    const double top = *std::max_element(q.begin(), q.end());
    std::vector<double> gap(k);
    std::vector<char> best(k);
    std::size_t n_best = 0;
    for (std::size_t i = 0; i < k; ++i) {
        gap[i] = top - q[i];
        best[i] = q[i] == top;
        n_best += best[i];
    }
    if (n_best == k) throw DegenerateInput("d_vector: all empirical means are equal");

    // Accumulate H1'(i, Q) over unordered pairs; pairs of two best arms are
    // the only infinite terms and only feed best arms, which are overwritten.
    std::vector<double> hp(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (best[i] && best[j]) continue;
            const double s = gap[i] + gap[j];
            const double t = 1.0 / (s * s);
            hp[i] += t;
            hp[j] += t;
        }
    }

    DVector out;
    out.d.assign(k, 0.0);
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        if (best[i]) continue;
        out.d[i] = gap[i] * gap[i] * hp[i];
        dmin = std::min(dmin, out.d[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (best[i]) out.d[i] = dmin;
        out.z += 1.0 / out.d[i];
    }
    return out;
}

Allocation target_allocation_h1(std::span<const double> q) {
    const auto dv = d_vector(q);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (dv.d[i] * dv.z);
    return Allocation(std::move(w));
}

Allocation target_allocation_h1_or_uniform(std::span<const double> q) {
    if (std::adjacent_find(q.begin(), q.end(), std::not_equal_to<>()) == q.end()) {
        return Allocation::uniform(q.size());
    }
    return target_allocation_h1(q);
}

std::vector<std::uint64_t> round_allocation(const Allocation& w, std::uint64_t total, Rng& rng) {
    const std::size_t k = w.size();
    if (total < 2 * k) {
        throw std::invalid_argument("round_allocation: batch size must be at least 2K");
    }
    std::uint64_t support = 0;
    for (double x : w.weights()) support += x > 0.0;
    const double reduced = static_cast<double>(total - support);

    std::vector<std::uint64_t> n(k, 0);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (w[i] > 0.0) {
            n[i] = 1 + static_cast<std::uint64_t>(std::floor(w[i] * reduced));
            assigned += n[i];
        }
    }
    while (assigned < total) {
        // inverse-CDF draw of an arm with probability w_i
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (w[i] <= 0.0) continue;
            acc += w[i];
            pick = i;
            if (u < acc) break;
        }
        ++n[pick];
        ++assigned;
    }
    return n;
}

double stability(std::span<const double> q, std::span<const double> p) {
    if (q.size() != p.size()) throw std::invalid_argument("stability: Q and P differ in length");
    const double hp = h1(p);
    const auto dv = d_vector(q);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double diff = q[i] - p[i];
        s += diff * diff / dv.d[i];
    }
    return s * hp;
}

}  // namespace bai
