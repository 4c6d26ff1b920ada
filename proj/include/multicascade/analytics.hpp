#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "multicascade/coordination_game.hpp"

namespace multicascade {

/// Parameter bundle for the closed-form adoption approximations.
struct AnalyticParams {
    std::uint32_t num_nodes = 0;
    double edge_prob = 0.0;
    std::uint32_t num_layers = 0;
    PayoffVector pay;
    double q0 = 0.0;

    void validate() const {
        if (num_nodes < 2) throw std::invalid_argument("node count must be >= 2");
        if (!(edge_prob > 0.0 && edge_prob <= 1.0))
            throw std::invalid_argument("edge probability must be in (0, 1]");
        pay.validate();
        if (pay.num_layers() != num_layers)
            throw std::invalid_argument("payoff vector not sized to layer count");
        if (!(q0 >= 0.0 && q0 <= 1.0))
            throw std::invalid_argument("seed fraction must be in [0, 1]");
    }
};

/// Adopting threshold: the neighbor fraction scale at which switching to A
/// pays, (sum of b_i) / (a_1 + b_1).
inline double adopting_threshold(const PayoffVector& pay) {
    pay.validate();
    double sum_b = 0.0;
    for (double b : pay.b) sum_b += b;
    return sum_b / (pay.a[0] + pay.b[0]);
}

/// P(U > threshold_count) for U ~ Poisson(rate), evaluated as
/// 1 - sum_{i=0}^{T} e^{-rate} rate^i / i! with a multiplicative term
/// recurrence. No factorials are formed; terms stay in linear space up to
/// rate = 700 and fall back to per-term log-space evaluation above that.
inline double poisson_upper_tail(std::int64_t threshold_count, double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("rate must be >= 0");
    if (threshold_count < 0)
        throw std::invalid_argument("threshold count must be >= 0");
    double cdf = 0.0;
    if (rate <= 700.0) {
        double term = std::exp(-rate);
        cdf = term;
        for (std::int64_t i = 1; i <= threshold_count; ++i) {
            term *= rate / static_cast<double>(i);
            cdf += term;
        }
    } else {
        for (std::int64_t i = 0; i <= threshold_count; ++i)
            cdf += std::exp(static_cast<double>(i) * std::log(rate) - rate -
                            std::lgamma(static_cast<double>(i) + 1.0));
    }
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

/// Probability that a B node switches when a fraction q of nodes play A:
/// the count of A neighbors summed over layers is approximated as
/// Poisson(l * p * q * (n-1)) and compared against the adopting-threshold
/// neighbor count floor(beta_l * p * (n-1)).
inline double adoption_probability(const AnalyticParams& ap, double q) {
    ap.validate();
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("fraction must be in [0, 1]");
    const double lambda = ap.edge_prob * q * (ap.num_nodes - 1);
    const double lambda_all = static_cast<double>(ap.num_layers) * lambda;
    const auto threshold = static_cast<std::int64_t>(
        std::floor(adopting_threshold(ap.pay) * ap.edge_prob * (ap.num_nodes - 1)));
    return poisson_upper_tail(threshold, lambda_all);
}

/// Mean-field recurrence for the adopter fraction:
/// q_{m+1} = (1 - q_m) * P(l, q_m, u) + q_m, starting from ap.q0.
/// Returns q_0 .. q_steps.
inline std::vector<double> recurrence_curve(const AnalyticParams& ap,
                                            std::uint32_t steps) {
    ap.validate();
    std::vector<double> curve;
    curve.reserve(steps + 1);
    double q = ap.q0;
    curve.push_back(q);
    for (std::uint32_t m = 0; m < steps; ++m) {
        q = std::clamp((1.0 - q) * adoption_probability(ap, q) + q, 0.0, 1.0);
        curve.push_back(q);
    }
    return curve;
}

/// Lower-bound sequence for the adopter fraction when alpha bounds the
/// per-step switch probability from below.
struct BoundCurve {
    double alpha = 0.0;
    std::vector<double> values;  // indexed by step m
};

/// value at step m is 1 - (1 - alpha)^m * (1 - q0); step 0 equals q0.
/// Callers pass alpha = adoption_probability(ap, q0).
inline BoundCurve lower_bound_curve(double q0, double alpha, std::uint32_t steps) {
    if (!(q0 >= 0.0 && q0 <= 1.0))
        throw std::invalid_argument("seed fraction must be in [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must be in [0, 1]");
    BoundCurve out;
    out.alpha = alpha;
    out.values.reserve(steps + 1);
    for (std::uint32_t m = 0; m <= steps; ++m)
        out.values.push_back(
            1.0 - std::pow(1.0 - alpha, static_cast<double>(m)) * (1.0 - q0));
    return out;
}

/// Layer-count ordering condition with equal scalar payoffs on every layer.
struct LayerOrderingResult {
    double q_star = 0.0;    // ordering guaranteed for q > q_star when floors_equal
    bool floors_equal = false;
    std::int64_t floor_k = 0;  // floor((k*b/(a+b)) * p * (n-1))
    std::int64_t floor_j = 0;
};

/// When floor_k == floor_j, adding layers raises the switch probability:
/// P(k, q, u) < P(j, q, u) for every q above
/// q_star = max_{0 <= i < floor_k} i * ln(j/k) / ((j-k) * (n-1) * p).
/// An empty i-range yields q_star = 0.
inline LayerOrderingResult layer_ordering_threshold(std::uint32_t n, double p,
                                                    double a, double b,
                                                    std::uint32_t k,
                                                    std::uint32_t j) {
    if (k == 0 || k >= j) throw std::invalid_argument("need 1 <= k < j");
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("payoffs must be positive");
    if (n < 2) throw std::invalid_argument("node count must be >= 2");
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("edge probability must be in (0, 1]");
    LayerOrderingResult out;
    const double scale = p * (n - 1) / (a + b);
    out.floor_k = static_cast<std::int64_t>(std::floor(k * b * scale));
    out.floor_j = static_cast<std::int64_t>(std::floor(j * b * scale));
    out.floors_equal = out.floor_k == out.floor_j;
    if (out.floor_k >= 1) {
        // i * ln(j/k) is increasing in i, so the max sits at i = floor_k - 1.
        out.q_star = static_cast<double>(out.floor_k - 1) *
                     std::log(static_cast<double>(j) / k) /
                     ((j - k) * static_cast<double>(n - 1) * p);
    }
    return out;
}

}  // namespace multicascade
