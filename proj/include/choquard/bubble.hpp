// Closed-form bubbles, the three-dimensional kernel basis, the linearized
// operator N = N1 + N2, the log-potential operator K, and the planar
// integral identities.
//
//   U_{mu,zeta}(x) = ((4-a)/2) log( C_a mu / (1+mu^2|x-zeta|^2) )
//   phi_j(x)       = (4-a) x_j / (1+|x|^2),      j = 1,2
//   phi_3(x)       = ((4-a)/2) (1-|x|^2)/(1+|x|^2)
//
//   int e^{U(y)} |x-y|^{-a} dy = (2(4-a)/C_a^2) e^{(a/(4-a)) U(x)}
//   N2(phi)(x)                 = 2(4-a) phi(x) / (1+|x|^2)^2   (exact)
//   K(f)(x) = (1/2pi) int log((1+|y|)/|x-y|) f(y) dy,  -Lap(Kf) = f
//
// Singular plane convolutions run in polar coordinates about the
// singularity: the Jacobian absorbs one power, tanh-sinh absorbs the
// rest, and a uniform trapezoid handles the (periodic, smooth) angle.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "choquard/geometry.hpp"
#include "choquard/quad.hpp"
#include "choquard/sphere.hpp"
#include "choquard/specfun.hpp"

namespace choquard::bubble {

using specfun::AlphaParam;

struct BubbleParams {
    AlphaParam alpha;
    double mu = 1.0;
    Vec2 zeta{0.0, 0.0};

    BubbleParams(AlphaParam a, double mu_ = 1.0, Vec2 zeta_ = {0.0, 0.0})
        : alpha(a), mu(mu_), zeta(zeta_) {
        if (!(mu > 0.0) || !std::isfinite(mu) || !std::isfinite(zeta.x) ||
            !std::isfinite(zeta.y))
            throw std::domain_error("BubbleParams: mu must be positive and fields finite");
    }
};

enum class DecayClass { bounded, algebraic, log_growth };

// Scalar field on the plane with a decay tag; gradient is optional and
// falls back to central differences (h = 1e-4) where needed.
struct PlaneField {
    std::function<double(Vec2)> eval;
    DecayClass decay = DecayClass::bounded;
    double decay_power = 0.0;  // p for the algebraic class
    std::function<Vec2(Vec2)> gradient;

    double operator()(const Vec2& x) const { return eval(x); }
};

struct WeightedNorms {
    double l2w = 0.0;
    double grad_l2 = 0.0;
    double h1w = 0.0;
};

inline double u_bubble(const BubbleParams& p, const Vec2& x) {
    const double a = p.alpha.value();
    const double r2 = (x - p.zeta).norm2();
    return 0.5 * (4.0 - a) *
           std::log(specfun::c_alpha(p.alpha) * p.mu / (1.0 + p.mu * p.mu * r2));
}

inline double exp_u(const BubbleParams& p, const Vec2& x) {
    const double a = p.alpha.value();
    const double r2 = (x - p.zeta).norm2();
    return std::pow(specfun::c_alpha(p.alpha) * p.mu / (1.0 + p.mu * p.mu * r2),
                    0.5 * (4.0 - a));
}

// exp(4 U / (4-a)) = (C_a mu / (1+mu^2 |x-zeta|^2))^2
inline double exp_u_weight(const BubbleParams& p, const Vec2& x) {
    const double r2 = (x - p.zeta).norm2();
    const double b = specfun::c_alpha(p.alpha) * p.mu / (1.0 + p.mu * p.mu * r2);
    return b * b;
}

inline double liouville_bubble(double mu, const Vec2& zeta, const Vec2& x) {
    if (!(mu > 0.0)) throw std::domain_error("liouville_bubble: mu must be positive");
    const double r2 = (x - zeta).norm2();
    return 2.0 * std::log(2.0 * std::sqrt(2.0) * mu / (1.0 + mu * mu * r2));
}

// (phi_1, phi_2, phi_3) at mu=1, zeta=0.
inline std::array<double, 3> kernel_basis(const AlphaParam& alpha, const Vec2& x) {
    const double a = alpha.value();
    const double d = 1.0 + x.norm2();
    return {(4.0 - a) * x.x / d, (4.0 - a) * x.y / d,
            0.5 * (4.0 - a) * (1.0 - x.norm2()) / d};
}

// Optional general-(mu,zeta) mode: the parameter derivatives of U_{mu,zeta}.
inline std::array<double, 3> kernel_basis_general(const BubbleParams& p, const Vec2& x) {
    const double a = p.alpha.value();
    const Vec2 d = x - p.zeta;
    const double den = 1.0 + p.mu * p.mu * d.norm2();
    return {(4.0 - a) * p.mu * p.mu * d.x / den, (4.0 - a) * p.mu * p.mu * d.y / den,
            0.5 * (4.0 - a) * (1.0 - p.mu * p.mu * d.norm2()) / (p.mu * den)};
}

// phi_j as PlaneField with its analytic gradient; j in {1,2,3}.
inline PlaneField kernel_field(const AlphaParam& alpha, int j) {
    if (j < 1 || j > 3) throw std::domain_error("kernel_field: j must be 1, 2, or 3");
    const double a = alpha.value();
    PlaneField f;
    f.decay = DecayClass::bounded;
    f.eval = [alpha, j](Vec2 x) { return kernel_basis(alpha, x)[j - 1]; };
    f.gradient = [a, j](Vec2 x) -> Vec2 {
        const double d = 1.0 + x.norm2();
        const double d2 = d * d;
        if (j == 1) return {(4.0 - a) * (d - 2.0 * x.x * x.x) / d2,
                            -2.0 * (4.0 - a) * x.x * x.y / d2};
        if (j == 2) return {-2.0 * (4.0 - a) * x.x * x.y / d2,
                            (4.0 - a) * (d - 2.0 * x.y * x.y) / d2};
        return {-2.0 * (4.0 - a) * x.x / d2, -2.0 * (4.0 - a) * x.y / d2};
    };
    return f;
}

// Closed form of the Riesz potential of e^U.
inline double riesz_potential_closed(const BubbleParams& p, const Vec2& x) {
    const double a = p.alpha.value();
    const double ca = specfun::c_alpha(p.alpha);
    return 2.0 * (4.0 - a) / (ca * ca) * std::exp(a / (4.0 - a) * u_bubble(p, x));
}

inline Vec2 kelvin_point(const Vec2& x) {
    const double r2 = x.norm2();
    if (!(r2 > 0.0)) throw std::domain_error("kelvin_point: undefined at the origin");
    return {x.x / r2, x.y / r2};
}

// ---------------------------------------------------------------------------
// Singular plane convolutions (polar about the singular point)
// ---------------------------------------------------------------------------

struct ConvQuad {
    int radial_level = 6;       // tanh-sinh level per radial segment
    int angular_nodes = 256;    // uniform trapezoid in the angle
    double split_radius = 4.0;  // [0,R0] near segment, [R0,inf) tail
    double rel_guard = 1e-5;    // accuracy guard on the two-level estimate
    double abs_guard = 1e-9;
};

namespace detail {

// int kernel(s) f(center + s e(psi)) s ds dpsi at fixed resolution.
inline double conv_pass(const Vec2& center, const std::function<double(double)>& kernel,
                        const std::function<double(Vec2)>& f, double R0, int rad_level,
                        int m_ang) {
    std::vector<double> cs(m_ang), sn(m_ang);
    for (int a = 0; a < m_ang; ++a) {
        const double psi = 2.0 * specfun::kPi * a / m_ang;
        cs[a] = std::cos(psi);
        sn[a] = std::sin(psi);
    }
    std::vector<double> ang(m_ang);
    auto ring_mean = [&](double s) {
        for (int a = 0; a < m_ang; ++a)
            ang[a] = f({center.x + s * cs[a], center.y + s * sn[a]});
        return quad::pairwise_sum(ang) / m_ang;
    };
    auto g = [&](double s) { return 2.0 * specfun::kPi * kernel(s) * s * ring_mean(s); };

    const double near = quad::detail::tanh_sinh_pass(
        [&](double u, double) { return g(u); }, R0, rad_level);
    const double tail = quad::detail::tanh_sinh_pass(
        [&](double u, double) { return g(R0 / u) * R0 / (u * u); }, 1.0, rad_level);
    return near + tail;
}

}  // namespace detail

// Convolution against a radially symmetric kernel with (at most) an
// integrable singularity at the center; returns value and a two-level
// error estimate.
inline quad::IntegralResult plane_convolution(const Vec2& center,
                                              const std::function<double(double)>& kernel,
                                              const std::function<double(Vec2)>& f,
                                              const ConvQuad& q = {}) {
    const double coarse = detail::conv_pass(center, kernel, f, q.split_radius,
                                            q.radial_level - 1, q.angular_nodes / 2);
    const double fine = detail::conv_pass(center, kernel, f, q.split_radius,
                                          q.radial_level, q.angular_nodes);
    return {fine, std::abs(fine - coarse)};
}

// Riesz potential of a field: int f(y) |x-y|^{-a} dy by singular quadrature.
inline quad::IntegralResult riesz_convolution(const AlphaParam& alpha, const Vec2& x,
                                              const std::function<double(Vec2)>& f,
                                              const ConvQuad& q = {}) {
    const double a = alpha.value();
    return plane_convolution(x, [a](double s) { return std::pow(s, -a); }, f, q);
}

// The linearized operator N(phi)(x). N1 goes through singular quadrature,
// N2 through its exact reduction 2(4-a) phi(x)/(1+|x|^2)^2.
inline double n_apply(const AlphaParam& alpha, const PlaneField& phi, const Vec2& x,
                      const ConvQuad& q = {}) {
    if (phi.decay != DecayClass::bounded)
        throw std::domain_error("n_apply: phi must carry the bounded decay tag");
    const double a = alpha.value();
    const BubbleParams p(alpha);
    auto integrand = [&](Vec2 y) { return exp_u(p, y) * phi(y); };
    const auto n1 = riesz_convolution(alpha, x, integrand, q);
    if (n1.error_estimate > q.rel_guard * std::abs(n1.value) + q.abs_guard)
        throw quad::AccuracyError("n_apply: convolution estimate above guard");
    const double d = 1.0 + x.norm2();
    const double n2 = 2.0 * (4.0 - a) * phi(x) / (d * d);
    return n1.value * exp_u(p, x) + n2;
}

// K(f)(x) = (1/2pi) int log((1+|y|)/|x-y|) f(y) dy. Requires summable f
// (algebraic decay faster than |y|^{-2}).
//
// Near x the kernel singularity sits at the quadrature center. Far out the
// mass of f concentrates in a narrow angular window as seen from x, so the
// roles flip: integrate about the origin, where |x-y| stays away from zero
// on every ring that carries mass.
inline double log_potential(const PlaneField& f, const Vec2& x, const ConvQuad& q = {},
                            double far_switch = 20.0) {
    if (!(f.decay == DecayClass::algebraic && f.decay_power > 2.0))
        throw std::domain_error(
            "log_potential: field must carry algebraic decay with power > 2");
    if (x.norm() > far_switch) {
        auto combined = [&](Vec2 y) {
            return std::log((1.0 + y.norm()) / (x - y).norm()) * f(y);
        };
        const auto far = plane_convolution({0.0, 0.0}, [](double) { return 1.0; },
                                           combined, q);
        return far.value / (2.0 * specfun::kPi);
    }
    // x-independent part, polar about the origin where log(1+|y|) is smooth
    const auto a_part = plane_convolution(
        {0.0, 0.0}, [](double s) { return std::log1p(s); }, f.eval, q);
    // singular part about x
    const auto b_part =
        plane_convolution(x, [](double s) { return std::log(s); }, f.eval, q);
    if (a_part.error_estimate + b_part.error_estimate >
        q.rel_guard * (std::abs(a_part.value) + std::abs(b_part.value)) + q.abs_guard)
        throw quad::AccuracyError("log_potential: convolution estimate above guard");
    return (a_part.value - b_part.value) / (2.0 * specfun::kPi);
}

// Decay probe int |x-y|^{-1} <y>^{-theta} dy for the three-regime bound.
inline double riesz_decay_integral(double theta, const Vec2& x, ConvQuad q = {}) {
    q.split_radius = std::max(q.split_radius, 2.0 * x.norm());
    auto f = [theta](Vec2 y) { return std::pow(1.0 + y.norm2(), -0.5 * theta); };
    return plane_convolution(x, [](double s) { return 1.0 / s; }, f, q).value;
}

// ---------------------------------------------------------------------------
// Plane identities
// ---------------------------------------------------------------------------

// (int e^{4U/(4-a)} dx, int int e^{U(x)} e^{U(y)} |x-y|^{-a} dy dx).
// Both reduce to radial integrals about zeta; the double integral uses the
// closed Riesz potential as the inner layer.
inline std::pair<double, double> identity_mass(const BubbleParams& p,
                                               const quad::QuadOptions& opt = {}) {
    auto along = [&](double r) { return Vec2{p.zeta.x + r, p.zeta.y}; };
    const auto first = quad::radial_integral(
        [&](double r) { return exp_u_weight(p, along(r)); }, opt);
    const auto second = quad::radial_integral(
        [&](double r) {
            const Vec2 x = along(r);
            return exp_u(p, x) * riesz_potential_closed(p, x);
        },
        opt);
    return {2.0 * specfun::kPi * first.value, 2.0 * specfun::kPi * second.value};
}

// int e^{4U/(4-a)} phi dx over the transported plane rule.
inline double orthogonality_integral(const AlphaParam& alpha, const PlaneField& phi,
                                     const sphere::PlaneRule& rule) {
    const BubbleParams p(alpha);
    return rule.integrate([&](Vec2 x) { return exp_u_weight(p, x) * phi(x); });
}

inline Vec2 fd_gradient(const PlaneField& f, const Vec2& x, double h = 1e-4) {
    return {(f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2.0 * h),
            (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2.0 * h)};
}

// 5-point finite-difference Laplacian.
inline double fd_laplacian(const std::function<double(Vec2)>& f, const Vec2& x,
                           double h = 1e-3) {
    return (f({x.x + h, x.y}) + f({x.x - h, x.y}) + f({x.x, x.y + h}) +
            f({x.x, x.y - h}) - 4.0 * f(x)) /
           (h * h);
}

// ||phi||_{L2_w}, ||grad phi||_{L2}, ||phi||_{H1_w}; the gradient uses the
// field's own gradient when supplied, otherwise central differences.
inline WeightedNorms weighted_norms(const PlaneField& phi, const sphere::PlaneRule& rule) {
    const double l2w2 = rule.integrate([&](Vec2 x) {
        const double v = phi(x);
        const double d = 1.0 + x.norm2();
        return v * v / (d * d);
    });
    auto grad = [&](Vec2 x) { return phi.gradient ? phi.gradient(x) : fd_gradient(phi, x); };
    const double grad2 = rule.integrate([&](Vec2 x) { return grad(x).norm2(); });
    if (!(grad2 >= 0.0) || !std::isfinite(grad2))
        throw quad::AccuracyError("weighted_norms: gradient integral diverged");
    WeightedNorms n;
    n.l2w = std::sqrt(std::max(0.0, l2w2));
    n.grad_l2 = std::sqrt(std::max(0.0, grad2));
    n.h1w = std::sqrt(std::max(0.0, l2w2 + grad2));
    return n;
}

// Samples the field's limit at infinity: mean over 8 directions at each of
// |x| = 1e3 and 1e4.
inline std::pair<double, double> limit_probe(const PlaneField& phi) {
    auto mean_at = [&](double R) {
        double s = 0.0;
        for (int a = 0; a < 8; ++a) {
            const double psi = 2.0 * specfun::kPi * a / 8.0;
            s += phi({R * std::cos(psi), R * std::sin(psi)});
        }
        return s / 8.0;
    };
    return {mean_at(1e3), mean_at(1e4)};
}

}  // namespace choquard::bubble
