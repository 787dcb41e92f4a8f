// Verification suite: runs every numbered identity against its tolerance,
// collects one CheckResult per item, and serializes a deterministic JSON
// report plus CSV curve exports.
//
// Check order is fixed; reruns with the same SuiteConfig are byte-identical
// apart from the timestamp and summary.runtime_ms.
#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "choquard/bubble.hpp"
#include "choquard/quad.hpp"
#include "choquard/specfun.hpp"
#include "choquard/spectral.hpp"
#include "choquard/sphere.hpp"

namespace choquard::verify {

using specfun::AlphaParam;
using specfun::kPi;

enum class CheckMode { absolute, relative };

struct CheckResult {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    CheckMode mode = CheckMode::absolute;
    bool pass = false;
    std::string anchor;  // names the mathematical identity being checked
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SuiteConfig {
    std::vector<double> alphas{0.5, 1.0, 1.5};
    int max_degree = 8;
    int quad_level = 24;
    std::map<std::string, double> tol_overrides;
    std::uint64_t rng_seed = 20260810;
    std::string output_path;

    void validate() const {
        if (alphas.empty()) throw ConfigError("config: alphas must be non-empty");
        for (double a : alphas)
            if (!(a > 0.0) || !(a < 2.0) || !std::isfinite(a))
                throw ConfigError("config: every alpha must lie in (0,2)");
        if (max_degree < 1) throw ConfigError("config: max_degree must be >= 1");
        if (quad_level < 4) throw ConfigError("config: quad_level must be >= 4");
    }
};

struct Report {
    SuiteConfig config;
    std::vector<CheckResult> checks;
    int passed = 0;
    int failed = 0;
    double runtime_ms = 0.0;
    std::string timestamp;
};

enum class Section { specfun, geometry, identities, funk_hecke, spectrum };

namespace detail {

// deterministic uniform sampling, identical across platforms
struct Sampler {
    std::mt19937_64 gen;
    explicit Sampler(std::uint64_t seed) : gen(seed) {}
    double unit() { return (gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    Vec2 annulus(double rmin, double rmax) {
        const double r = uniform(rmin, rmax);
        const double th = uniform(0.0, 2.0 * kPi);
        return {r * std::cos(th), r * std::sin(th)};
    }
    Vec3 direction() {
        while (true) {
            const Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            const double n2 = v.norm2();
            if (n2 > 1e-3 && n2 <= 1.0) return v * (1.0 / std::sqrt(n2));
        }
    }
};

class Collector {
public:
    Collector(std::vector<CheckResult>& out, const std::map<std::string, double>& overrides)
        : out_(out), overrides_(overrides) {}

    void add(CheckMode mode, const std::string& name, const std::string& anchor,
             double value, double expected, double tol) {
        CheckResult r;
        r.name = name;
        r.anchor = anchor;
        r.value = value;
        r.expected = expected;
        r.mode = mode;
        r.tol = lookup_tol(name, tol);
        r.abs_err = std::abs(value - expected);
        r.rel_err = (expected != 0.0 && std::isfinite(expected))
                        ? r.abs_err / std::abs(expected)
                        : r.abs_err;
        r.pass = std::isfinite(value) &&
                 ((mode == CheckMode::absolute) ? r.abs_err <= r.tol : r.rel_err <= r.tol);
        out_.push_back(std::move(r));
    }
    void rel(const std::string& n, const std::string& a, double v, double e, double tol) {
        add(CheckMode::relative, n, a, v, e, tol);
    }
    void abs(const std::string& n, const std::string& a, double v, double e, double tol) {
        add(CheckMode::absolute, n, a, v, e, tol);
    }

    // parameters (not pass thresholds) that --tol may override as well
    double lookup_tol(const std::string& name, double fallback) const {
        // longest-prefix match over the override table
        std::size_t best_len = 0;
        double best = fallback;
        for (const auto& [key, val] : overrides_) {
            if (name.compare(0, key.size(), key) == 0 && key.size() >= best_len) {
                best_len = key.size();
                best = val;
            }
        }
        return best;
    }

private:
    std::vector<CheckResult>& out_;
    const std::map<std::string, double>& overrides_;
};

inline std::string alpha_tag(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Section runners
// ---------------------------------------------------------------------------

namespace detail {

inline void run_specfun(Collector& c) {
    c.abs("specfun.lngamma.at_1", "factorial anchors of log-Gamma",
          specfun::ln_gamma(1.0), 0.0, 5e-14);
    c.rel("specfun.lngamma.at_half", "half-integer anchor of log-Gamma",
          specfun::ln_gamma(0.5), 0.5 * std::log(kPi), 1e-13);
    c.rel("specfun.lngamma.at_5", "factorial anchors of log-Gamma",
          specfun::ln_gamma(5.0), std::log(24.0), 1e-13);
    double worst = 0.0;
    for (double x : {0.25, 1.5, 7.0, 50.0})
        worst = std::max(worst, std::abs(specfun::ln_gamma(x + 1.0) -
                                         specfun::ln_gamma(x) - std::log(x)));
    c.abs("specfun.lngamma.recurrence", "Gamma functional equation", worst, 0.0, 1e-12);
    worst = 0.0;
    for (double x : {0.25, 0.4, 0.7}) {
        const double prod = std::exp(specfun::ln_gamma(x) + specfun::ln_gamma(1.0 - x));
        worst = std::max(worst, std::abs(prod * std::sin(kPi * x) / kPi - 1.0));
    }
    c.abs("specfun.lngamma.reflection", "Gamma reflection identity", worst, 0.0, 1e-10);
    c.rel("specfun.c_alpha.at_1", "bubble normalization constant",
          specfun::c_alpha(AlphaParam(1.0)), std::cbrt(3.0 / kPi), 1e-13);
    worst = 0.0;
    for (double a = 0.1; a < 1.95; a += 0.1) {
        const double ca = specfun::c_alpha(AlphaParam(a));
        if (!std::isfinite(ca)) worst = 1.0;
        worst = std::max(worst, std::abs(std::pow(ca, 4.0 - a) -
                                         (2.0 - a) * (4.0 - a) / kPi));
    }
    c.abs("specfun.c_alpha.inverse_grid", "bubble normalization constant", worst, 0.0,
          1e-12);
    c.rel("specfun.hls.N2_alpha1", "sharp constant of the convolution inequality",
          specfun::hls_constant(2, 1.0), 2.0 * std::sqrt(kPi), 1e-13);
    worst = 0.0;
    for (int k = 0; k <= 10; ++k)
        worst = std::max(worst, std::abs(specfun::legendre_p(k, 1.0) - 1.0));
    c.abs("specfun.legendre.at_1", "Legendre endpoint normalization", worst, 0.0, 1e-13);
}

inline void run_geometry(Collector& c, const SuiteConfig& cfg) {
    Sampler rng(cfg.rng_seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Vec2 x = rng.annulus(0.01, 20.0);
        const Vec2 back = sphere::stereo_inv(sphere::stereo(x));
        worst = std::max(worst, (back - x).norm() / std::max(1.0, x.norm()));
    }
    c.abs("geometry.stereo.roundtrip", "projection inverse pair", worst, 0.0, 1e-13);

    worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Vec2 x = rng.annulus(0.05, 10.0);
        const Vec2 y = rng.annulus(0.05, 10.0);
        const double lhs = (sphere::stereo(x).xi() - sphere::stereo(y).xi()).norm();
        const double rhs = (x - y).norm() * sphere::rho(x) * sphere::rho(y);
        worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
    c.abs("geometry.conformal.distance", "conformal distance identity", worst, 0.0, 1e-12);

    worst = 0.0;
    double worst_rho = 0.0;
    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        Sampler dir_rng(cfg.rng_seed + 2);
        for (int i = 0; i < 50; ++i) {
            const Vec3 d = dir_rng.direction();
            if (1.0 + d.z < 1e-3) continue;
            const sphere::SpherePoint xi(d);
            const Vec2 x = sphere::stereo_inv(xi);
            worst_rho = std::max(worst_rho,
                                 std::abs(sphere::rho(x) - std::sqrt(1.0 + xi.z())));
            const auto basis = bubble::kernel_basis(alpha, x);
            const double comps[3] = {xi.x(), xi.y(), xi.z()};
            for (int j = 0; j < 3; ++j)
                worst = std::max(worst, std::abs(basis[j] - 0.5 * (4.0 - a) * comps[j]));
        }
    }
    c.abs("geometry.pushforward.rho", "conformal factor pushforward", worst_rho, 0.0,
          1e-12);
    c.abs("geometry.pushforward.kernel_basis", "kernel basis pushforward", worst, 0.0,
          1e-12);

    const auto sq = sphere::sphere_quadrature(cfg.quad_level);
    double wsum = 0.0;
    for (double w : sq.weights) wsum += w;
    c.rel("geometry.spherequad.weight_sum", "sphere rule mass", wsum, 4.0 * kPi, 1e-12);
    worst = 0.0;
    for (int k = 1; k <= std::min(sq.exactness_degree, 12); ++k)
        for (int j = 1; j <= 2 * k + 1; ++j)
            worst = std::max(worst, std::abs(sq.integrate([&](sphere::SpherePoint p) {
                return sphere::real_sph_harm({k, j}, p);
            })));
    c.abs("geometry.spherequad.harmonic_mean", "zero mean of nonconstant harmonics",
          worst, 0.0, 1e-12);

    const auto pq = sphere::plane_quadrature(cfg.quad_level);
    auto F = [](sphere::SpherePoint xi) { return xi.z() * xi.z(); };
    const double direct = sq.integrate(F);
    const double transported = pq.integrate([&](Vec2 x) {
        const double r2 = sphere::rho(x) * sphere::rho(x);
        return F(sphere::stereo(x)) * r2 * r2;
    });
    c.rel("geometry.transport.identity", "integral transport to the plane", transported,
          direct, 1e-12);
}

inline void run_identities(Collector& c, const SuiteConfig& cfg) {
    const auto rule = sphere::plane_quadrature(std::max(cfg.quad_level, 24));

    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        const std::string tag = alpha_tag(a);
        const double ca = specfun::c_alpha(alpha);
        const auto mass = bubble::identity_mass(bubble::BubbleParams(alpha));
        c.rel("bubble.mass.weight.alpha=" + tag, "bubble mass identity", mass.first,
              kPi * ca * ca, 1e-10);
        c.rel("bubble.mass.interaction.alpha=" + tag, "bubble interaction energy",
              mass.second, 2.0 * (4.0 - a) * kPi, 1e-6);
        const auto moved =
            bubble::identity_mass(bubble::BubbleParams(alpha, 3.0, {2.0, -1.0}));
        c.rel("bubble.mass.invariance.alpha=" + tag, "scaling/translation invariance",
              moved.first, mass.first, 1e-10);
    }

    // Riesz potential identity, anchored at alpha=1, origin
    c.rel("bubble.riesz.anchor", "Riesz potential closed form",
          bubble::riesz_potential_closed(bubble::BubbleParams(AlphaParam(1.0)),
                                         {0.0, 0.0}),
          2.0 * std::sqrt(3.0 * kPi), 1e-13);
    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        const bubble::BubbleParams p(alpha);
        Sampler rng(cfg.rng_seed + 3);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Vec2 x = rng.annulus(0.1, 5.0);
            const auto got = bubble::riesz_convolution(
                alpha, x, [&](Vec2 y) { return bubble::exp_u(p, y); });
            worst = std::max(worst, std::abs(got.value /
                                             bubble::riesz_potential_closed(p, x) -
                                             1.0));
        }
        c.abs("bubble.riesz.quadrature.alpha=" + alpha_tag(a),
              "Riesz potential closed form", worst, 0.0, 1e-5);
    }

    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        const double scale = kPi * std::pow(specfun::c_alpha(alpha), 2.0);
        for (int j = 1; j <= 3; ++j) {
            const double v = bubble::orthogonality_integral(
                alpha, bubble::kernel_field(alpha, j), rule);
            c.abs("bubble.orthogonality.phi" + std::to_string(j) +
                      ".alpha=" + alpha_tag(a),
                  "weighted orthogonality of the kernel basis", v / scale, 0.0, 1e-10);
        }
    }

    // linearized residual: finite differences against the operator
    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        for (int j = 1; j <= 3; ++j) {
            const auto phi = bubble::kernel_field(alpha, j);
            Sampler rng(cfg.rng_seed + 4 + j);
            double worst_fd = 0.0, worst_quad = 0.0;
            int used = 0;
            while (used < 20) {
                const Vec2 x = rng.annulus(0.1, 5.0);
                if (std::abs(phi(x)) < 0.05 * (4.0 - a)) continue;
                ++used;
                const double d = 1.0 + x.norm2();
                const double closed = 8.0 * phi(x) / (d * d);
                const double fd = -bubble::fd_laplacian(phi.eval, x, 1e-3);
                const double quad_val = bubble::n_apply(alpha, phi, x);
                worst_fd = std::max(worst_fd, std::abs(fd / quad_val - 1.0));
                worst_quad = std::max(worst_quad, std::abs(quad_val / closed - 1.0));
            }
            const std::string tag =
                "phi" + std::to_string(j) + ".alpha=" + alpha_tag(a);
            c.abs("bubble.residual.fd_vs_operator." + tag,
                  "linearized bubble equation", worst_fd, 0.0, 1e-4);
            c.abs("bubble.residual.operator_vs_closed." + tag,
                  "linearized operator closed reduction", worst_quad, 0.0, 1e-4);
        }
    }

    // K operator inverts the Laplacian on N(phi3)
    for (double a : cfg.alphas) {
        bubble::PlaneField f;
        f.decay = bubble::DecayClass::algebraic;
        f.decay_power = 4.0;
        f.eval = [a](Vec2 y) {
            const double d = 1.0 + y.norm2();
            return 8.0 * (0.5 * (4.0 - a) * (1.0 - y.norm2()) / d) / (d * d);
        };
        const bubble::ConvQuad q{7, 256, 4.0, 1e-5, 1e-9};
        Sampler rng(cfg.rng_seed + 8);
        double worst = 0.0;
        int used = 0;
        while (used < 5) {
            const Vec2 x = rng.annulus(0.1, 2.5);
            if (std::abs(x.norm() - 1.0) < 0.25) continue;  // stay off the zero circle
            ++used;
            const double lap = bubble::fd_laplacian(
                [&](Vec2 z) { return bubble::log_potential(f, z, q); }, x, 5e-3);
            worst = std::max(worst, std::abs(-lap / f(x) - 1.0));
        }
        c.abs("bubble.koperator.inversion.alpha=" + alpha_tag(a),
              "log-potential inversion of the Laplacian", worst, 0.0, 1e-4);
    }

    // kernel decay estimate across the three regimes
    double worst_log = 0.0;
    for (double theta : {1.5, 2.0, 3.0})
        for (double R : {1.0, 10.0, 100.0}) {
            const double val = bubble::riesz_decay_integral(theta, {R, 0.0});
            const double jb = std::sqrt(1.0 + R * R);
            const double bound = (theta < 2.0)  ? std::pow(jb, 1.0 - theta)
                                 : (theta == 2.0) ? (1.0 + std::log(jb)) / jb
                                                  : 1.0 / jb;
            worst_log = std::max(worst_log, std::abs(std::log10(val / bound)));
        }
    c.abs("bubble.asymptotics.three_regimes", "kernel decay estimate", worst_log, 0.0,
          2.0);
}

// Energy bound and the Liouville anchor close the declared check order.
inline void run_energy_liouville(Collector& c, const SuiteConfig& cfg) {
    const auto rule = sphere::plane_quadrature(std::max(cfg.quad_level, 24));
    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        const std::string tag = alpha_tag(a);
        for (int j = 1; j <= 3; ++j) {
            const auto n = bubble::weighted_norms(bubble::kernel_field(alpha, j), rule);
            c.rel("bubble.energy.ratio.phi" + std::to_string(j) + ".alpha=" + tag,
                  "Dirichlet-to-weighted-mass ratio",
                  n.grad_l2 * n.grad_l2 / (n.l2w * n.l2w), 8.0, 1e-6);
        }
        Sampler rng(cfg.rng_seed + 9);
        double min_margin = std::numeric_limits<double>::infinity();
        double worst_h1 = 0.0;
        const auto f1 = bubble::kernel_field(alpha, 1);
        const auto f2 = bubble::kernel_field(alpha, 2);
        const auto f3 = bubble::kernel_field(alpha, 3);
        int used = 0;
        while (used < 10) {
            const double c1 = rng.uniform(-1.0, 1.0);
            const double c2 = rng.uniform(-1.0, 1.0);
            const double c3 = rng.uniform(-1.0, 1.0);
            if (c1 * c1 + c2 * c2 + c3 * c3 < 1e-2) continue;
            ++used;
            bubble::PlaneField f;
            f.decay = bubble::DecayClass::bounded;
            f.eval = [&, c1, c2, c3](Vec2 x) {
                return c1 * f1(x) + c2 * f2(x) + c3 * f3(x);
            };
            f.gradient = [&, c1, c2, c3](Vec2 x) {
                return c1 * f1.gradient(x) + c2 * f2.gradient(x) + c3 * f3.gradient(x);
            };
            const auto n = bubble::weighted_norms(f, rule);
            const double ratio = n.grad_l2 * n.grad_l2 / (n.l2w * n.l2w);
            min_margin = std::min(min_margin, 4.0 * (4.0 - a) - ratio);
            worst_h1 = std::max(worst_h1, std::abs(n.h1w / n.l2w - 3.0));
        }
        c.rel("bubble.energy.bound_margin.alpha=" + tag, "weighted energy bound",
              min_margin, 4.0 * (4.0 - a) - 8.0, 1e-6);
        c.abs("bubble.energy.h1w_ratio.alpha=" + tag, "weighted Sobolev-norm bound",
              worst_h1, 0.0, 1e-6);
    }

    // Liouville anchors
    const auto lmass = quad::radial_integral([](double r) {
        return std::exp(bubble::liouville_bubble(1.0, {0.0, 0.0}, {r, 0.0}));
    });
    c.rel("bubble.liouville.mass", "Liouville bubble mass", 2.0 * kPi * lmass.value,
          8.0 * kPi, 1e-10);
}

inline void run_funk_hecke(Collector& c, const SuiteConfig& cfg) {
    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        double worst = 0.0;
        for (int k = 0; k <= 8; ++k) {
            const auto got = quad::alg_singular(
                alpha, [k](double t) { return specfun::legendre_p(k, t); });
            worst = std::max(worst, std::abs(2.0 * kPi * got.value /
                                                 spectral::mu_k(k, alpha) -
                                             1.0));
        }
        c.abs("funkhecke.riesz_1d.alpha=" + alpha_tag(a),
              "Funk-Hecke Riesz eigenvalues vs singular quadrature", worst, 0.0, 1e-8);
    }
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const auto got =
            quad::log_singular([k](double t) { return specfun::legendre_p(k, t); });
        worst = std::max(worst,
                         std::abs(2.0 * kPi * got.value / spectral::mu_tilde_k(k) - 1.0));
    }
    c.abs("funkhecke.log_1d", "Funk-Hecke log eigenvalues vs singular quadrature",
          worst, 0.0, 1e-8);

    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        Sampler rng(cfg.rng_seed + 10);
        double worst_s = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const int j = 1 + int(rng.uniform(0.0, 2.0 * k + 0.999));
            const sphere::HarmonicIndex idx(k, j);
            int used = 0;
            while (used < 2) {
                const sphere::SpherePoint xi(rng.direction());
                const double yv = sphere::real_sph_harm(idx, xi);
                if (std::abs(yv) < 5e-2) continue;
                ++used;
                const auto got = spectral::riesz_sphere_apply(
                    alpha,
                    [&](sphere::SpherePoint p) { return sphere::real_sph_harm(idx, p); },
                    xi, 32);
                worst_s = std::max(
                    worst_s, std::abs(got.value / (spectral::mu_k(k, alpha) * yv) - 1.0));
            }
        }
        c.abs("funkhecke.sphere.alpha=" + alpha_tag(a),
              "full-sphere Funk-Hecke identity", worst_s, 0.0, 1e-5);
    }

    int violations = 0;
    for (double a = 0.1; a < 1.95; a += 0.1) {
        const AlphaParam alpha(a);
        for (int k = 0; k <= 20; ++k)
            if (!(spectral::mu_k(k, alpha) > spectral::mu_k(k + 1, alpha))) ++violations;
    }
    c.abs("funkhecke.mu.monotonicity", "Riesz eigenvalue monotonicity",
          double(violations), 0.0, 0.0);

    const auto oracle = quad::log_singular([](double) { return 1.0; });
    c.rel("funkhecke.mutilde0.oracle", "log eigenvalue at degree zero",
          2.0 * kPi * oracle.value, 2.0 * kPi * (2.0 * std::log(2.0) - 1.0), 1e-8);
    c.rel("funkhecke.mutilde0.discrepancy",
          "degree-zero log eigenvalue: measured minus commonly stated value",
          spectral::mu_tilde_k(0) - spectral::mu_tilde0_stated(),
          2.0 * kPi * std::log(2.0), 1e-8);
}

inline void run_spectrum(Collector& c, const SuiteConfig& cfg) {
    double worst = 0.0;
    for (double a = 0.1; a < 1.95; a += 0.1)
        worst = std::max(worst, std::abs(spectral::lambda_k(1, AlphaParam(a)) - 1.0));
    c.abs("spectral.lambda1.closed_grid", "unit multiplier at degree one", worst, 0.0,
          1e-12);

    {
        const auto m = spectral::assemble_t_matrix(AlphaParam(1.0), 4, 24);
        const auto sol = spectral::jacobi_eigensolve(m);
        double w = 0.0;
        for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(sol.eigenvalues[i] - 1.0));
        c.abs("spectral.lambda1.assembled", "unit multiplier at degree one (assembled)",
              w, 0.0, 1e-6);
    }

    int violations = 0;
    for (double a = 0.1; a < 1.95; a += 0.1) {
        const AlphaParam alpha(a);
        for (int k = 2; k <= 20; ++k)
            if (!(spectral::lambda_k(k, alpha) < 2.0 / (double(k) * (k + 1.0))))
                ++violations;
    }
    c.abs("spectral.lambda.degree_bound", "strict multiplier bound above degree one",
          double(violations), 0.0, 0.0);

    for (double a : cfg.alphas) {
        const AlphaParam alpha(a);
        const std::string tag = alpha_tag(a);
        const double window = c.lookup_tol("spectral.kernel.unit_window", 1e-6);
        const auto rep =
            spectral::kernel_report(alpha, cfg.max_degree, window, cfg.quad_level);
        c.abs("spectral.kernel.dimension.alpha=" + tag, "kernel dimension certificate",
              double(rep.unit_multiplicity), 3.0, 0.25);
        c.rel("spectral.kernel.gap.alpha=" + tag, "spectral gap to the next multiplier",
              rep.spectral_gap, 1.0 - spectral::lambda_k(2, alpha), 1e-6);
        c.abs("spectral.kernel.gap_floor.alpha=" + tag,
              "spectral gap stays above 0.6",
              double(rep.spectral_gap >= 0.6 ? 0 : 1), 0.0, 0.0);
        c.abs("spectral.kernel.block_residual.alpha=" + tag,
              "unit eigenvectors live in the degree-one block",
              rep.k1_block_residual, 0.0, 1e-6);
    }

    double worst_dev = 0.0;
    for (const auto& e : spectral::alpha_zero_limit(5))
        worst_dev = std::max(worst_dev, e.deviation);
    c.abs("spectral.alpha_zero.limit", "vanishing-exponent reduction", worst_dev, 0.0,
          1e-3);

    const auto sq = sphere::sphere_quadrature(std::max(cfg.quad_level, 16));
    double worst_norm = 0.0;
    for (int j = 1; j <= 3; ++j) {
        const double n2 = sq.integrate([&](sphere::SpherePoint p) {
            const double y = sphere::real_sph_harm({1, j}, p);
            return y * y;
        });
        worst_norm = std::max(worst_norm, std::abs(n2 - 1.0));
    }
    c.abs("spectral.harmonic.unit_norm", "orthonormal degree-one harmonics", worst_norm,
          0.0, 1e-12);
    // the sqrt(3/(2 pi)) convention would carry squared norm 2, not 1
    const double stated = sq.integrate([&](sphere::SpherePoint p) {
        const double y = std::sqrt(3.0 / (2.0 * kPi)) * p.z();
        return y * y;
    });
    c.rel("spectral.harmonic.stated_norm_flag",
          "commonly stated degree-one constant is not unit-normalized", stated, 2.0,
          1e-10);
}

}  // namespace detail

inline const std::set<Section>& all_sections() {
    static const std::set<Section> s{Section::specfun, Section::geometry,
                                     Section::identities, Section::funk_hecke,
                                     Section::spectrum};
    return s;
}

inline Report run_suite(const SuiteConfig& cfg,
                        const std::set<Section>& sections = all_sections()) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = cfg;
    detail::Collector c(rep.checks, cfg.tol_overrides);
    if (sections.count(Section::specfun)) detail::run_specfun(c);
    if (sections.count(Section::geometry)) detail::run_geometry(c, cfg);
    if (sections.count(Section::identities)) detail::run_identities(c, cfg);
    if (sections.count(Section::funk_hecke)) detail::run_funk_hecke(c, cfg);
    if (sections.count(Section::spectrum)) detail::run_spectrum(c, cfg);
    if (sections.count(Section::identities)) detail::run_energy_liouville(c, cfg);
    for (const auto& r : rep.checks) (r.pass ? rep.passed : rep.failed)++;
    rep.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    rep.timestamp = buf;
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const Report& rep) {
    nlohmann::json j;
    j["config"] = {
        {"alphas", rep.config.alphas},
        {"max_degree", rep.config.max_degree},
        {"quad_level", rep.config.quad_level},
        {"tol_overrides", rep.config.tol_overrides},
        {"rng_seed", rep.config.rng_seed},
        {"output_path", rep.config.output_path},
    };
    j["checks"] = nlohmann::json::array();
    for (const auto& r : rep.checks) {
        j["checks"].push_back({
            {"name", r.name},
            {"value", r.value},
            {"expected", r.expected},
            {"abs_err", r.abs_err},
            {"rel_err", r.rel_err},
            {"tol", r.tol},
            {"mode", r.mode == CheckMode::absolute ? "abs" : "rel"},
            {"pass", r.pass},
            {"anchor", r.anchor},
        });
    }
    j["summary"] = {{"passed", rep.passed},
                    {"failed", rep.failed},
                    {"runtime_ms", rep.runtime_ms}};
    j["timestamp"] = rep.timestamp;
    return j;
}

// Shortest round-trip decimal form; real-valued columns always carry a
// decimal point.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('n') == std::string::npos && s.find('i') == std::string::npos)
        s += ".0";
    return s;
}

enum class Curve { lambda_vs_alpha, mu_vs_k, kernel_gap };

inline std::string csv_curve(Curve curve, const SuiteConfig& cfg) {
    cfg.validate();
    std::string out;
    if (curve == Curve::lambda_vs_alpha) {
        out += "alpha,k,lambda_k,bound_2_over_kk1\n";
        for (double a : cfg.alphas) {
            const AlphaParam alpha(a);
            for (int k = 1; k <= cfg.max_degree; ++k) {
                out += fmt_double(a) + "," + std::to_string(k) + "," +
                       fmt_double(spectral::lambda_k(k, alpha)) + "," +
                       fmt_double(2.0 / (double(k) * (k + 1.0))) + "\n";
            }
        }
    } else if (curve == Curve::mu_vs_k) {
        out += "alpha,k,mu_k,mu_tilde_k\n";
        for (double a : cfg.alphas) {
            const AlphaParam alpha(a);
            for (int k = 0; k <= cfg.max_degree; ++k) {
                out += fmt_double(a) + "," + std::to_string(k) + "," +
                       fmt_double(spectral::mu_k(k, alpha)) + "," +
                       fmt_double(spectral::mu_tilde_k(k)) + "\n";
            }
        }
    } else {
        out += "alpha,K,unit_multiplicity,spectral_gap\n";
        for (double a : cfg.alphas) {
            const auto rep = spectral::kernel_report(AlphaParam(a), cfg.max_degree, 1e-6,
                                                     cfg.quad_level);
            out += fmt_double(a) + "," + std::to_string(cfg.max_degree) + "," +
                   std::to_string(rep.unit_multiplicity) + "," +
                   fmt_double(rep.spectral_gap) + "\n";
        }
    }
    return out;
}

inline void emit_csv(Curve curve, const SuiteConfig& cfg, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << csv_curve(curve, cfg);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace choquard::verify
