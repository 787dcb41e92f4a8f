// Special-function primitives: log-Gamma (Lanczos), Gamma ratios in log
// space, Legendre polynomials, and the model's named constants.
//
//   C_alpha       = ((2-a)(4-a)/pi)^{1/(4-a)},  a in (0,2)
//   C(N,alpha)    = pi^{a/2} G((N-a)/2)/G(N-a/2) * (G(N)/G(N/2))^{(N-a)/N}
//
// Everything is pure and stateless.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace choquard::specfun {

inline constexpr double kPi = 3.14159265358979323846;

// Distance from the Gamma pole at which eigenvalue formulas give up and
// raise instead of returning huge-but-meaningless values.
inline constexpr double kPoleGuard = 1e-12;

// Thrown when a parameter sits within kPoleGuard of a Gamma pole, so
// downstream assembly never sees +-Inf or NaN.
class PoleOverflowError : public std::overflow_error {
public:
    explicit PoleOverflowError(const std::string& what) : std::overflow_error(what) {}
};

// Exponent parameter of the nonlocal kernel |x|^{-alpha}; the model is
// defined for alpha strictly inside (0,2).
class AlphaParam {
public:
    explicit AlphaParam(double value) : value_(value) {
        if (!(value > 0.0) || !(value < 2.0) || !std::isfinite(value))
            throw std::domain_error("AlphaParam: alpha must lie in (0,2), got " +
                                    std::to_string(value));
    }
    double value() const { return value_; }

private:
    double value_;
};

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients. Relative accuracy around
// 1e-14 for x >= 0.5; reflection handles (0, 0.5).
inline double lanczos_lgamma(double x) {
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    const double z = x - 1.0;
    double sum = coef[0];
    for (int i = 1; i < 9; ++i) sum += coef[i] / (z + i);
    const double base = z + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(base) - base + std::log(sum);
}

}  // namespace detail

// log Gamma(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("ln_gamma: argument must be positive, got " +
                                std::to_string(x));
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(kPi / std::sin(kPi * x)) - detail::lanczos_lgamma(1.0 - x);
    }
    return detail::lanczos_lgamma(x);
}

// Ratio Gamma(a)/Gamma(b) evaluated as exp(ln_gamma(a) - ln_gamma(b)); safe
// for arguments in the hundreds where the raw quotient would overflow.
inline double gamma_ratio(double a, double b) { return std::exp(ln_gamma(a) - ln_gamma(b)); }

// Normalization constant of the bubble profile.
inline double c_alpha(const AlphaParam& alpha) {
    const double a = alpha.value();
    return std::pow((2.0 - a) * (4.0 - a) / kPi, 1.0 / (4.0 - a));
}

// Sharp constant of the Hardy-Littlewood-Sobolev inequality for the
// diagonal exponent pair, N >= 1, alpha in (0,N).
inline double hls_constant(int N, double alpha) {
    if (N < 1) throw std::domain_error("hls_constant: N must be >= 1");
    if (!(alpha > 0.0) || !(alpha < N))
        throw std::domain_error("hls_constant: alpha must lie in (0,N)");
    if (N - alpha < kPoleGuard)
        throw PoleOverflowError("hls_constant: alpha within 1e-12 of N (Gamma pole)");
    const double n = N;
    const double lg = 0.5 * alpha * std::log(kPi) + ln_gamma(0.5 * (n - alpha)) -
                      ln_gamma(n - 0.5 * alpha) +
                      (n - alpha) / n * (ln_gamma(n) - ln_gamma(0.5 * n));
    return std::exp(lg);
}

// Legendre polynomial P_k(t) on [-1,1] by the Bonnet three-term recurrence.
inline double legendre_p(int k, double t) {
    if (k < 0) throw std::domain_error("legendre_p: degree must be >= 0");
    if (!(std::abs(t) <= 1.0))
        throw std::domain_error("legendre_p: |t| must be <= 1, got " + std::to_string(t));
    if (k == 0) return 1.0;
    double pm1 = 1.0;  // P_0
    double p = t;      // P_1
    for (int j = 2; j <= k; ++j) {
        const double pj = ((2.0 * j - 1.0) * t * p - (j - 1.0) * pm1) / j;
        pm1 = p;
        p = pj;
    }
    return p;
}

// P_k(t) together with P_k'(t); the derivative uses
// (1-t^2) P_k' = k (P_{k-1} - t P_k), needed for Newton root refinement.
inline void legendre_p_deriv(int k, double t, double& p, double& dp) {
    if (k == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    double pm1 = 1.0;
    p = t;
    for (int j = 2; j <= k; ++j) {
        const double pj = ((2.0 * j - 1.0) * t * p - (j - 1.0) * pm1) / j;
        pm1 = p;
        p = pj;
    }
    dp = k * (pm1 - t * p) / (1.0 - t * t);
}

}  // namespace choquard::specfun
