// Stereographic projection, conformal identities, real spherical harmonics,
// and product quadrature on S^2 with transport to the plane.
//
//   S(x)   = (2x/(1+|x|^2), (1-|x|^2)/(1+|x|^2))
//   S^-1   = (xi_1/(1+xi_3), xi_2/(1+xi_3))
//   rho(x) = (2/(1+|x|^2))^{1/2},  |Sx - Sy| = |x-y| rho(x) rho(y)
//   d(xi)  = rho^4(x) dx
//
// Harmonics are real and orthonormal: the degree-1 constant is
// sqrt(3/(4 pi)), which is what int_{S^2} Y^2 = 1 forces. Index order j:
// j=1 is the zonal (m=0) function, j=2m / j=2m+1 are the cos / sin pair
// of azimuthal order m.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "choquard/geometry.hpp"
#include "choquard/quad.hpp"

namespace choquard::sphere {

inline constexpr double kSouthPoleGuard = 1e-14;

// Point on the unit sphere; renormalized on construction.
class SpherePoint {
public:
    explicit SpherePoint(const Vec3& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::domain_error("SpherePoint: cannot normalize zero/non-finite vector");
        xi_ = v * (1.0 / n);
    }
    SpherePoint(double x, double y, double z) : SpherePoint(Vec3{x, y, z}) {}

    const Vec3& xi() const { return xi_; }
    double x() const { return xi_.x; }
    double y() const { return xi_.y; }
    double z() const { return xi_.z; }

private:
    Vec3 xi_;
};

struct HarmonicIndex {
    int degree = 0;  // k >= 0
    int order = 1;   // 1 <= j <= 2k+1

    HarmonicIndex(int k, int j) : degree(k), order(j) {
        if (k < 0 || j < 1 || j > 2 * k + 1)
            throw std::domain_error("HarmonicIndex: need k >= 0 and 1 <= j <= 2k+1");
    }
};

inline SpherePoint stereo(const Vec2& x) {
    const double r2 = x.norm2();
    const double d = 1.0 + r2;
    return SpherePoint(2.0 * x.x / d, 2.0 * x.y / d, (1.0 - r2) / d);
}

inline Vec2 stereo_inv(const SpherePoint& xi) {
    const double d = 1.0 + xi.z();
    if (!(d > kSouthPoleGuard))
        throw std::domain_error("stereo_inv: point too close to the south pole");
    return {xi.x() / d, xi.y() / d};
}

// Conformal factor of the projection.
inline double rho(const Vec2& x) { return std::sqrt(2.0 / (1.0 + x.norm2())); }

using PlaneFn = std::function<double(Vec2)>;
using SphereFn = std::function<double(SpherePoint)>;

inline SphereFn pushforward(PlaneFn f) {
    return [f = std::move(f)](SpherePoint xi) { return f(stereo_inv(xi)); };
}

inline PlaneFn pullback(SphereFn F) {
    return [F = std::move(F)](Vec2 x) { return F(stereo(x)); };
}

namespace detail {

// Fully normalized associated Legendre values Pbar_k^m(t) for fixed m and
// k = m..kmax, no Condon-Shortley phase; int_{-1}^1 Pbar^2 dt = 1/(2 pi).
inline void normalized_plm(int kmax, int m, double t, std::vector<double>& out) {
    out.assign(kmax - m + 1, 0.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    double pmm = std::sqrt(1.0 / (4.0 * specfun::kPi));
    for (int i = 1; i <= m; ++i) pmm *= s * std::sqrt((2.0 * i + 1.0) / (2.0 * i));
    out[0] = pmm;
    if (kmax == m) return;
    double pk1 = t * std::sqrt(2.0 * m + 3.0) * pmm;  // k = m+1
    out[1] = pk1;
    double pk2 = pmm;
    for (int k = m + 2; k <= kmax; ++k) {
        const double ak = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
        const double akm1 =
            std::sqrt((4.0 * (k - 1.0) * (k - 1.0) - 1.0) /
                      ((k - 1.0) * (k - 1.0) - double(m) * m));
        const double pk = ak * (t * pk1 - pk2 / akm1);
        out[k - m] = pk;
        pk2 = pk1;
        pk1 = pk;
    }
}

}  // namespace detail

// Real orthonormal spherical harmonic Y_{k,j}(xi).
inline double real_sph_harm(const HarmonicIndex& idx, const SpherePoint& xi) {
    const int k = idx.degree;
    const int m = idx.order / 2;
    const double t = xi.z();
    std::vector<double> plm;
    detail::normalized_plm(k, m, t, plm);
    const double pbar = plm[k - m];
    if (m == 0) return pbar;
    const double phi = std::atan2(xi.y(), xi.x());
    const double az = (idx.order % 2 == 0) ? std::cos(m * phi) : std::sin(m * phi);
    return std::sqrt(2.0) * pbar * az;
}

// Product rule: Gauss-Legendre in xi_3 x uniform azimuth.
struct SphereQuadrature {
    std::vector<SpherePoint> nodes;
    std::vector<double> weights;
    int exactness_degree = 0;

    double integrate(const SphereFn& F) const {
        std::vector<double> terms(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = weights[i] * F(nodes[i]);
        return quad::pairwise_sum(terms);
    }
};

inline SphereQuadrature sphere_quadrature(int level) {
    if (level < 1) throw std::domain_error("sphere_quadrature: level must be >= 1");
    const auto& rule = quad::gauss_legendre(level);
    const int m = 2 * level;
    const double wphi = 2.0 * specfun::kPi / m;
    SphereQuadrature q;
    q.exactness_degree = level - 1;
    q.nodes.reserve(static_cast<std::size_t>(level) * m);
    q.weights.reserve(static_cast<std::size_t>(level) * m);
    for (int i = 0; i < level; ++i) {
        const double t = rule.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int a = 0; a < m; ++a) {
            const double phi = wphi * a;
            q.nodes.emplace_back(s * std::cos(phi), s * std::sin(phi), t);
            q.weights.push_back(rule.weights[i] * wphi);
        }
    }
    return q;
}

// The sphere rule pushed to the plane: weights pick up rho^{-4} = (1+xi_3)^{-2},
// so smooth integrands with the (1+|x|^2)^{-2} decay profile integrate with
// sphere-rule exactness.
struct PlaneRule {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    int exactness_degree = 0;

    double integrate(const PlaneFn& f) const {
        std::vector<double> terms(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = weights[i] * f(nodes[i]);
        return quad::pairwise_sum(terms);
    }
};

inline PlaneRule plane_quadrature(int level) {
    const SphereQuadrature sq = sphere_quadrature(level);
    PlaneRule p;
    p.exactness_degree = sq.exactness_degree;
    p.nodes.reserve(sq.nodes.size());
    p.weights.reserve(sq.nodes.size());
    for (std::size_t i = 0; i < sq.nodes.size(); ++i) {
        const double d = 1.0 + sq.nodes[i].z();
        p.nodes.push_back(stereo_inv(sq.nodes[i]));
        p.weights.push_back(sq.weights[i] / (d * d));
    }
    return p;
}

}  // namespace choquard::sphere
