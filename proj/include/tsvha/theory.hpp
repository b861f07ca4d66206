#pragma once
// Numeric evaluation of the finite-time regret bound and its constants.
//
// The bound for variance-scaled Thompson sampling on a K-armed bandit with
// gaps Delta_2..Delta_K, horizon T and scaling factor gamma is, with
// thresholds x_i = mu_i + Delta_i/3 and y_i = mu_1 - Delta_i/3,
//
//   gamma in (0,4):
//     sum_i c_i * max(0, ln(T Delta_i^2)) + (c'(g(eps) + zeta(2b/g - eps)) + 1) Delta_i + 9.5/Delta_i
//   gamma >= 4:
//     the middle term becomes c'((T^(1+eps-2b/g) - 1)/(1+eps-2b/g) + g(eps) + 1) Delta_i
//
// where c_i = 2(H(beta)+1)Delta_i / (gamma (y_i-x_i)^2), H(beta) = 4(h(beta)
// + zeta(2)) and c' = e^(4 Delta/3) / (e^(2 Delta^2/9) - 1). h(beta) and
// g(eps) are the crossover thresholds of two tail inequalities, computed
// numerically here.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsvha {

/// Standard normal upper tail Q(z) = P(Z > z).
inline double q_function(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// Riemann zeta via direct summation of `terms` leading terms plus an
/// Euler-Maclaurin tail; absolute error well below 1e-10 for terms >= 64.
inline double riemann_zeta(double s, std::int64_t terms) {
    if (!(s > 1.0)) throw std::domain_error("riemann zeta requires s > 1");
    if (terms < 64) throw std::domain_error("riemann zeta needs a summation window of at least 64 terms");
    double sum = 0.0;
    for (std::int64_t n = terms - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    const double nd = static_cast<double>(terms);
    double tail = std::pow(nd, 1.0 - s) / (s - 1.0);
    tail += 0.5 * std::pow(nd, -s);
    tail += s / 12.0 * std::pow(nd, -s - 1.0);
    tail -= s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(nd, -s - 3.0);
    return sum + tail;
}

inline double riemann_zeta(double s) { return riemann_zeta(s, 4096); }

namespace detail {

// exp(-r^(1-beta/2)/sqrt(2 beta pi ln r)) <= 1/r^2, rearranged in logs.
inline bool h_beta_condition(double r, double beta) {
    const double lr = std::log(r);
    return std::pow(r, 1.0 - beta / 2.0) >= 2.0 * lr * std::sqrt(2.0 * beta * std::numbers::pi * lr);
}

}  // namespace detail

/// Smallest integer r >= 2 from which the h(beta) tail condition holds,
/// verified over a window of the next 1000 integers. The condition is
/// eventually monotone, so an exponential ascent plus bisection on the
/// window predicate finds the crossover.
inline std::int64_t h_beta(double beta) {
    if (!(beta >= 1.0 && beta < 2.0)) throw std::domain_error("h(beta) requires beta in [1, 2)");
    constexpr std::int64_t window = 1000;
    constexpr std::int64_t max_evals = 1'000'000'000;
    constexpr double r_limit = 9.0e15;  // beyond this, consecutive integers are no longer exact

    std::int64_t evals = 0;
    auto window_holds = [&](double r) {
        for (std::int64_t off = 0; off <= window; ++off) {
            if (++evals > max_evals) {
                throw std::runtime_error("h(beta) search exceeded its iteration budget; beta too close to 2");
            }
            if (!detail::h_beta_condition(r + static_cast<double>(off), beta)) return false;
        }
        return true;
    };

    double hi = 2.0;
    while (!window_holds(hi)) {
        hi *= 2.0;
        if (hi > r_limit) {
            throw std::runtime_error("h(beta) crossover exceeds the searchable range; beta too close to 2");
        }
    }
    double lo = 1.0;  // below the smallest admissible r
    while (hi - lo > 1.0) {
        const double mid = std::floor((lo + hi) / 2.0);
        if (mid >= 2.0 && window_holds(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return static_cast<std::int64_t>(hi);
}

/// Threshold above which e^(4 sqrt(ln r / gamma)(1 - delta/3)) <= r^eps;
/// closed form from the quadratic in sqrt(ln r).
inline double g_epsilon(double epsilon, double gamma, double delta) {
    if (!(epsilon > 0.0)) throw std::domain_error("g(epsilon) requires epsilon > 0");
    if (!(gamma > 0.0)) throw std::domain_error("g(epsilon) requires gamma > 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("g(epsilon) requires a gap in (0, 1]");
    const double a = 1.0 - delta / 3.0;
    return std::exp(16.0 * a * a / (epsilon * epsilon * gamma));
}

enum class SelectionVariant { TS, C1, C2 };

/// Probability that a two-armed Gaussian-posterior policy plays arm 1 given
/// empirical means and play counts: Q(z) with z = (mu2_hat - mu1_hat) /
/// sqrt(1/(k1+1) + 1/(k2+1)), scaled by sqrt(N) under C1 and 1/sqrt(N)
/// under C2.
inline double selection_probability(double mu1_hat, double mu2_hat, std::int64_t k1, std::int64_t k2,
                                    SelectionVariant variant, int agents = 1) {
    if (k1 < 0 || k2 < 0) throw std::domain_error("selection probability requires nonnegative play counts");
    if (agents < 1) throw std::domain_error("selection probability requires at least 1 agent");
    const double denom =
        std::sqrt(1.0 / static_cast<double>(k1 + 1) + 1.0 / static_cast<double>(k2 + 1));
    double z = (mu2_hat - mu1_hat) / denom;
    const double root_n = std::sqrt(static_cast<double>(agents));
    if (variant == SelectionVariant::C1) z *= root_n;
    if (variant == SelectionVariant::C2) z /= root_n;
    return q_function(z);
}

struct BoundParams {
    double gamma = 1.0;
    double beta = 1.0;
    double epsilon = 0.5;
    std::vector<double> gaps;  // Delta_2..Delta_K for the suboptimal arms
    std::int64_t horizon = 1;
};

inline double theorem1_bound(const BoundParams& p) {
    if (!(p.gamma > 0.0)) throw std::domain_error("bound requires gamma > 0");
    if (!(p.beta >= 1.0 && p.beta < 2.0)) throw std::domain_error("bound requires beta in [1, 2)");
    if (!(p.epsilon > 0.0)) throw std::domain_error("bound requires epsilon > 0");
    const double tail_exponent = 2.0 * p.beta / p.gamma - p.epsilon;
    if (p.gamma < 4.0 && !(tail_exponent > 1.0)) {
        throw std::domain_error("gamma in (0,4) requires 2*beta/gamma - epsilon > 1");
    }
    if (p.gamma >= 4.0 && !(tail_exponent > 0.0)) {
        throw std::domain_error("gamma >= 4 requires 2*beta/gamma - epsilon > 0");
    }
    for (const double gap : p.gaps) {
        if (!(gap > 0.0 && gap <= 1.0)) {
            throw std::domain_error("bound requires gaps in (0, 1] for rewards supported on [0, 1]");
        }
    }
    const auto arms = static_cast<std::int64_t>(p.gaps.size()) + 1;
    if (p.horizon < arms) throw std::domain_error("bound requires horizon T >= number of arms");
    if (p.gaps.empty()) return 0.0;

    const double big_h = 4.0 * (static_cast<double>(h_beta(p.beta)) + riemann_zeta(2.0));
    const double zeta_tail = p.gamma < 4.0 ? riemann_zeta(tail_exponent) : 0.0;
    const double horizon = static_cast<double>(p.horizon);

    double total = 0.0;
    for (const double gap : p.gaps) {
        const double log_term = std::max(0.0, std::log(horizon * gap * gap));
        const double c1 = 18.0 * (big_h + 1.0) / (p.gamma * gap);  // (y-x)^2 = (gap/3)^2
        const double c_prime = std::exp(4.0 * gap / 3.0) / std::expm1(2.0 * gap * gap / 9.0);
        const double g = g_epsilon(p.epsilon, p.gamma, gap);
        double middle;
        if (p.gamma < 4.0) {
            middle = (c_prime * (g + zeta_tail) + 1.0) * gap;
        } else {
            const double e = 1.0 + p.epsilon - 2.0 * p.beta / p.gamma;
            const double poly = (std::pow(horizon, e) - 1.0) / e;
            middle = c_prime * (poly + g + 1.0) * gap;
        }
        total += c1 * log_term + middle + 9.5 / gap;
    }
    return total;
}

}  // namespace tsvha
