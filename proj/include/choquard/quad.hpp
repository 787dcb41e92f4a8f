// One-dimensional quadrature engines.
//
//   gauss_legendre(n)    nodes/weights on [-1,1], Newton on P_n
//   alg_singular(a, g)   int_{-1}^{1} (2-2t)^{-a/2} g(t) dt
//   log_singular(g)      int_{-1}^{1} (1/2) log(2-2t) g(t) dt
//   radial_integral(g)   int_0^inf g(r) r dr
//
// The Riesz endpoint is removed exactly by the substitution
// 1-t = s^{2/(2-a)} (the exponents cancel: -a/(2-a) + 2/(2-a) - 1 = 0),
// so plain Gauss-Legendre applies afterwards. Logarithmic endpoints go
// through a tanh-sinh rule whose nodes are carried as distances to the
// endpoint, so coordinates down to ~1e-38 stay exactly representable.
//
// Every engine returns (value, error_estimate) with
// error_estimate = |I(level) - I(previous level)| and raises AccuracyError
// when the estimates stop decreasing before reaching tolerance.
#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "choquard/specfun.hpp"

namespace choquard::quad {

class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Deterministic pairwise reduction; order is fixed regardless of how the
// terms were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double t : v) s += t;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct Rule1D {
    std::vector<double> nodes;    // on [-1,1], symmetric about 0
    std::vector<double> weights;  // positive, sum = 2
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n, seeded with the
// Chebyshev-based asymptotic guess. The rule is built once per n and cached.
inline const Rule1D& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
    static std::map<int, Rule1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Rule1D rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(specfun::kPi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            specfun::legendre_p_deriv(n, t, p, dp);
            const double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        specfun::legendre_p_deriv(n, t, p, dp);
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        rule.nodes[i] = -t;  // ascending order, symmetric by mirroring
        rule.nodes[n - 1 - i] = t;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return cache.emplace(n, std::move(rule)).first->second;
}

namespace detail {

// tanh-sinh abscissa parametrized by distance from both interval ends of
// the unit interval: dl + dr = 1, dl = 1/(1+e^{2z}), z = (pi/2) sinh(tau).
struct TsNode {
    double dl;  // distance from the left endpoint
    double dr;  // distance from the right endpoint
    double w;   // h * (pi/4) cosh(tau) / cosh^2(z)
};

inline const std::vector<TsNode>& tanh_sinh_nodes(int level) {
    static std::map<int, std::vector<TsNode>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(level);
    if (it != cache.end()) return it->second;

    constexpr double tau_max = 4.0;
    const double h = std::pow(0.5, level);
    const int kmax = static_cast<int>(tau_max / h);
    std::vector<TsNode> nodes;
    nodes.reserve(2 * kmax + 1);
    for (int k = -kmax; k <= kmax; ++k) {
        const double tau = k * h;
        const double z = 0.5 * specfun::kPi * std::sinh(tau);
        TsNode nd;
        nd.dl = 1.0 / (1.0 + std::exp(2.0 * z));
        nd.dr = 1.0 / (1.0 + std::exp(-2.0 * z));
        nd.w = h * 0.25 * specfun::kPi * std::cosh(tau) / std::pow(std::cosh(z), 2);
        if (nd.w > 0.0 && std::isfinite(nd.w)) nodes.push_back(nd);
    }
    return cache.emplace(level, std::move(nodes)).first->second;
}

// Integrate F over (0, L). F receives (u, L-u) with both coordinates formed
// without cancellation, so integrable endpoint singularities are safe.
inline double tanh_sinh_pass(const std::function<double(double, double)>& F, double L,
                             int level) {
    const auto& nds = tanh_sinh_nodes(level);
    std::vector<double> terms;
    terms.reserve(nds.size());
    for (const auto& nd : nds) terms.push_back(nd.w * L * F(nd.dl * L, nd.dr * L));
    return pairwise_sum(terms);
}

// Level-doubling driver shared by the engines.
template <typename Eval>
IntegralResult converge(Eval&& eval, int level_lo, int level_hi, double abs_tol,
                        double rel_tol, const char* who) {
    double prev = eval(level_lo);
    double prev_diff = std::numeric_limits<double>::infinity();
    for (int level = level_lo + 1; level <= level_hi; ++level) {
        const double cur = eval(level);
        const double diff = std::abs(cur - prev);
        const double tol = std::max(abs_tol, rel_tol * std::abs(cur));
        if (diff <= tol) return {cur, diff};
        if (diff > 10.0 * prev_diff)
            throw AccuracyError(std::string(who) + ": error estimate grew between levels");
        prev = cur;
        prev_diff = diff;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", prev_diff);
    throw AccuracyError(std::string(who) + ": no convergence at max level, last delta " +
                        buf);
}

}  // namespace detail

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_doublings = 6;  // Gauss-Legendre n = 16 * 2^k
};

// int_{-1}^{1} (2-2t)^{-alpha/2} g(t) dt for g smooth up to t=1.
inline IntegralResult alg_singular(const specfun::AlphaParam& alpha,
                                   const std::function<double(double)>& g,
                                   const QuadOptions& opt = {}) {
    const double a = alpha.value();
    const double beta = 2.0 / (2.0 - a);
    const double smax = std::pow(2.0, 0.5 * (2.0 - a));
    const double pref = std::pow(2.0, -0.5 * a) * beta;
    auto eval = [&](int doubling) {
        const int n = 16 << doubling;
        const auto& rule = gauss_legendre(n);
        std::vector<double> terms(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = 0.5 * smax * (rule.nodes[i] + 1.0);
            terms[i] = 0.5 * smax * rule.weights[i] * g(1.0 - std::pow(s, beta));
        }
        return pref * pairwise_sum(terms);
    };
    return detail::converge(eval, 0, opt.max_doublings, opt.abs_tol, opt.rel_tol,
                            "alg_singular");
}

// int_{-1}^{1} (1/2) log(2-2t) g(t) dt; tanh-sinh resolves the endpoint.
inline IntegralResult log_singular(const std::function<double(double)>& g,
                                   const QuadOptions& opt = {}) {
    auto eval = [&](int level) {
        // v = 1-t in (0,2); t near -1 is recovered from the right distance.
        return detail::tanh_sinh_pass(
            [&](double v, double v_from_right) {
                const double t = (v <= 1.0) ? 1.0 - v : v_from_right - 1.0;
                return 0.5 * std::log(2.0 * v) * g(t);
            },
            2.0, level);
    };
    return detail::converge(eval, 3, 3 + opt.max_doublings, opt.abs_tol, opt.rel_tol,
                            "log_singular");
}

// int_0^inf g(r) r dr through t = r^2/(1+r^2); caller guarantees algebraic
// decay of g at least r^{-3}.
inline IntegralResult radial_integral(const std::function<double(double)>& g,
                                      const QuadOptions& opt = {}) {
    auto eval = [&](int doubling) {
        const int n = 16 << doubling;
        const auto& rule = gauss_legendre(n);
        std::vector<double> terms(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = 0.5 * (rule.nodes[i] + 1.0);
            const double one_m = 1.0 - t;
            const double r = std::sqrt(t / one_m);
            terms[i] = 0.5 * rule.weights[i] * 0.5 * g(r) / (one_m * one_m);
        }
        return pairwise_sum(terms);
    };
    return detail::converge(eval, 0, opt.max_doublings, opt.abs_tol, opt.rel_tol,
                            "radial_integral");
}

}  // namespace choquard::quad
