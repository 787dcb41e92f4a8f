#include "choquard/bubble.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"

using namespace choquard;
using namespace choquard::bubble;
using specfun::AlphaParam;
using specfun::kPi;

namespace {

PlaneField bounded_field(std::function<double(Vec2)> f) {
    PlaneField out;
    out.eval = std::move(f);
    out.decay = DecayClass::bounded;
    return out;
}

}  // namespace

TEST_CASE("u_bubble anchors", "[bubble]") {
    const BubbleParams p(AlphaParam(1.0));
    // (3/2) log C_1 with C_1 = (3/pi)^{1/3}, i.e. log(3/pi)/2
    CHECK(u_bubble(p, {0.0, 0.0}) ==
          Catch::Approx(0.5 * std::log(3.0 / kPi)).epsilon(1e-14));

    // leading asymptotics: slope of u against log|x| is -(4-a)
    for (double a : {0.5, 1.0, 1.5}) {
        const BubbleParams q(AlphaParam(a), 0.7, {0.3, -0.2});
        const double u1 = u_bubble(q, {1e6, 0.0});
        const double u2 = u_bubble(q, {2e6, 0.0});
        const double slope = (u2 - u1) / std::log(2.0);
        CHECK(slope == Catch::Approx(-(4.0 - a)).epsilon(1e-5));
    }
}

TEST_CASE("u_bubble rescaling invariance", "[bubble]") {
    testutil::Rng rng(21);
    for (int i = 0; i < 20; ++i) {
        const double a = rng.uniform(0.1, 1.9);
        const double mu = rng.uniform(0.2, 5.0);
        const Vec2 x = rng.annulus(0.05, 8.0);
        const BubbleParams scaled(AlphaParam(a), mu);
        const BubbleParams unit(AlphaParam(a), 1.0);
        const double lhs = u_bubble(scaled, x);
        const double rhs = u_bubble(unit, mu * x) + 0.5 * (4.0 - a) * std::log(mu);
        CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
    }
}

TEST_CASE("BubbleParams validation", "[bubble]") {
    CHECK_THROWS_AS(BubbleParams(AlphaParam(1.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(BubbleParams(AlphaParam(1.0), -2.0), std::domain_error);
    CHECK_THROWS_AS(BubbleParams(AlphaParam(1.0), 1.0, {std::nan(""), 0.0}),
                    std::domain_error);
}

TEST_CASE("liouville bubble anchors", "[bubble]") {
    CHECK(liouville_bubble(1.0, {0.0, 0.0}, {0.0, 0.0}) ==
          Catch::Approx(3.0 * std::log(2.0)).epsilon(1e-14));
    // mass 8 pi
    const auto mass = quad::radial_integral(
        [](double r) { return std::exp(liouville_bubble(1.0, {0.0, 0.0}, {r, 0.0})); });
    CHECK(2.0 * kPi * mass.value == Catch::Approx(8.0 * kPi).epsilon(1e-10));
    // scaling relation u_2(x) = u_1(2x) + 2 log 2
    testutil::Rng rng(22);
    for (int i = 0; i < 10; ++i) {
        const Vec2 x = rng.annulus(0.1, 5.0);
        CHECK(liouville_bubble(2.0, {0.0, 0.0}, x) ==
              Catch::Approx(liouville_bubble(1.0, {0.0, 0.0}, 2.0 * x) + 2.0 * std::log(2.0))
                  .margin(1e-13));
    }
}

TEST_CASE("kernel basis anchors and Kelvin symmetry", "[bubble]") {
    const AlphaParam one(1.0);
    const auto v = kernel_basis(one, {1.0, 0.0});
    CHECK(v[0] == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(v[1] == 0.0);
    CHECK(std::abs(v[2]) < 1e-16);

    for (double a : {0.5, 1.0, 1.5}) {
        const auto c = kernel_basis(AlphaParam(a), {0.0, 0.0});
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == Catch::Approx(0.5 * (4.0 - a)).epsilon(1e-15));
    }

    testutil::Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const Vec2 x = rng.annulus(0.2, 6.0);
        const Vec2 kx = kelvin_point(x);
        const auto fx = kernel_basis(one, x);
        const auto fk = kernel_basis(one, kx);
        CHECK(fk[0] == Catch::Approx(fx[0]).margin(1e-13));
        CHECK(fk[1] == Catch::Approx(fx[1]).margin(1e-13));
        CHECK(fk[2] == Catch::Approx(-fx[2]).margin(1e-13));
    }
}

TEST_CASE("general-parameter kernel basis reduces at mu=1, zeta=0", "[bubble]") {
    testutil::Rng rng(24);
    const BubbleParams p(AlphaParam(0.7));
    for (int i = 0; i < 10; ++i) {
        const Vec2 x = rng.annulus(0.1, 4.0);
        const auto g = kernel_basis_general(p, x);
        const auto b = kernel_basis(p.alpha, x);
        for (int j = 0; j < 3; ++j) CHECK(g[j] == Catch::Approx(b[j]).margin(1e-14));
    }
}

TEST_CASE("general-parameter kernel fields satisfy their linearized equation",
          "[bubble]") {
    // -Lap phi = 8 mu^2 phi / (1+mu^2 |x-zeta|^2)^2 for each parameter derivative
    const BubbleParams p(AlphaParam(1.2), 2.5, {0.4, -0.7});
    testutil::Rng rng(29);
    for (int j = 1; j <= 3; ++j) {
        int used = 0;
        while (used < 5) {
            const Vec2 x = p.zeta + rng.annulus(0.05, 2.0);
            const auto vals = kernel_basis_general(p, x);
            if (std::abs(vals[j - 1]) < 0.05) continue;
            ++used;
            const double lap = fd_laplacian(
                [&](Vec2 z) { return kernel_basis_general(p, z)[j - 1]; }, x, 1e-3);
            const double den = 1.0 + p.mu * p.mu * (x - p.zeta).norm2();
            const double expect = 8.0 * p.mu * p.mu * vals[j - 1] / (den * den);
            CHECK(-lap == Catch::Approx(expect).epsilon(1e-4));
        }
    }
}

TEST_CASE("kelvin_point anchors", "[bubble]") {
    CHECK(kelvin_point({1.0, 0.0}).x == 1.0);
    CHECK(kelvin_point({2.0, 0.0}).x == Catch::Approx(0.5));
    CHECK_THROWS_AS(kelvin_point({0.0, 0.0}), std::domain_error);
    testutil::Rng rng(25);
    for (int i = 0; i < 20; ++i) {
        const Vec2 x = rng.annulus(0.05, 9.0);
        const Vec2 back = kelvin_point(kelvin_point(x));
        CHECK(back.x == Catch::Approx(x.x).margin(1e-13 * std::abs(x.x) + 1e-15));
        CHECK(back.y == Catch::Approx(x.y).margin(1e-13 * std::abs(x.y) + 1e-15));
    }
}

TEST_CASE("riesz potential closed form anchors", "[bubble]") {
    const BubbleParams p(AlphaParam(1.0));
    CHECK(riesz_potential_closed(p, {0.0, 0.0}) ==
          Catch::Approx(2.0 * std::sqrt(3.0 * kPi)).epsilon(1e-14));
    // radially decreasing along a ray
    double prev = riesz_potential_closed(p, {0.0, 0.0});
    for (double r = 0.25; r < 6.0; r += 0.25) {
        const double cur = riesz_potential_closed(p, {r, 0.0});
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("riesz potential matches singular quadrature", "[bubble]") {
    testutil::Rng rng(26);
    for (double a : {0.5, 1.0, 1.5}) {
        const AlphaParam alpha(a);
        const BubbleParams p(alpha);
        for (int i = 0; i < 6; ++i) {
            const Vec2 x = rng.annulus(0.1, 5.0);
            const auto got =
                riesz_convolution(alpha, x, [&](Vec2 y) { return exp_u(p, y); });
            CHECK(got.value ==
                  Catch::Approx(riesz_potential_closed(p, x)).epsilon(1e-5));
        }
    }
}

TEST_CASE("linearized operator on the kernel basis", "[bubble]") {
    testutil::Rng rng(27);
    for (double a : {0.5, 1.0, 1.5}) {
        const AlphaParam alpha(a);
        for (int j = 1; j <= 3; ++j) {
            const PlaneField phi = kernel_field(alpha, j);
            for (int i = 0; i < 3; ++i) {
                const Vec2 x = rng.annulus(0.2, 3.0);
                const double d = 1.0 + x.norm2();
                const double expect = 8.0 * phi(x) / (d * d);
                if (std::abs(expect) < 1e-3) continue;
                CHECK(n_apply(alpha, phi, x) == Catch::Approx(expect).epsilon(1e-5));
            }
        }
    }
    // linearity: N(0) = 0
    const PlaneField zero = bounded_field([](Vec2) { return 0.0; });
    CHECK(n_apply(AlphaParam(1.0), zero, {0.7, 0.4}) == Catch::Approx(0.0).margin(1e-14));
    // unbounded inputs are rejected up front
    PlaneField unbounded;
    unbounded.decay = DecayClass::log_growth;
    unbounded.eval = [](Vec2 y) { return std::log(1.0 + y.norm2()); };
    CHECK_THROWS_AS(n_apply(AlphaParam(1.0), unbounded, {0.7, 0.4}), std::domain_error);
}

TEST_CASE("finite-difference residual agrees with the closed reduction", "[bubble]") {
    // -Lap phi_j = 8 phi_j/(1+|x|^2)^2 = N(phi_j), checked at the anchor point
    const AlphaParam one(1.0);
    const PlaneField phi1 = kernel_field(one, 1);
    const Vec2 x{1.0, 0.0};
    const double lap = fd_laplacian(phi1.eval, x, 1e-3);
    CHECK(-lap == Catch::Approx(3.0).epsilon(1e-6));
    CHECK(n_apply(one, phi1, x) == Catch::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("log potential inverts the Laplacian on N(phi3)", "[bubble]") {
    const double a = 1.0;
    PlaneField f;
    f.decay = DecayClass::algebraic;
    f.decay_power = 4.0;
    f.eval = [a](Vec2 y) {
        const double d = 1.0 + y.norm2();
        return 8.0 * (0.5 * (4.0 - a) * (1.0 - y.norm2()) / d) / (d * d);
    };
    const ConvQuad q{7, 256, 4.0, 1e-5, 1e-9};
    const double h = 5e-3;
    for (const Vec2 x : {Vec2{0.3, 0.2}, Vec2{0.5, -1.2}}) {
        const double lap = fd_laplacian(
            [&](Vec2 z) { return log_potential(f, z, q); }, x, h);
        CHECK(-lap == Catch::Approx(f(x)).epsilon(1e-4));
    }
}

TEST_CASE("log potential parity and decay requirements", "[bubble]") {
    PlaneField even;
    even.decay = DecayClass::algebraic;
    even.decay_power = 4.0;
    even.eval = [](Vec2 y) { return std::pow(1.0 + y.norm2(), -2.0); };
    const Vec2 x{0.8, -0.45};
    const double kp = log_potential(even, x);
    const double km = log_potential(even, {-x.x, -x.y});
    CHECK(kp == Catch::Approx(km).epsilon(1e-9));

    PlaneField slow = bounded_field([](Vec2) { return 1.0; });
    CHECK_THROWS_AS(log_potential(slow, x), std::domain_error);
}

TEST_CASE("log potential asymptote of the unit-mass weight", "[bubble]") {
    // f = e^{4U/(4-a)} / (pi C_a^2) has unit mass; K f (x) + log|x|/(2 pi)
    // must stay bounded far out
    const AlphaParam one(1.0);
    const BubbleParams p(one);
    const double mass = kPi * std::pow(specfun::c_alpha(one), 2.0);
    PlaneField f;
    f.decay = DecayClass::algebraic;
    f.decay_power = 4.0;
    f.eval = [&](Vec2 y) { return exp_u_weight(p, y) / mass; };
    double probe_lo = 0.0, probe_hi = 0.0;
    for (double r : {200.0, 1000.0}) {
        const double v = log_potential(f, {r, 0.0}) + std::log(r) / (2.0 * kPi);
        (r < 500 ? probe_lo : probe_hi) = v;
        CHECK(std::abs(v) < 1.0);
    }
    CHECK(probe_lo == Catch::Approx(probe_hi).margin(1e-3));
}

TEST_CASE("integral representation with the limit constant", "[bubble]") {
    // phi3(x) = -(1/2pi) int log|x-y| N(phi3)(y) dy + C, C = lim phi3 = -(4-a)/2
    const double a = 1.0;
    const AlphaParam alpha(a);
    PlaneField nphi3;
    nphi3.decay = DecayClass::algebraic;
    nphi3.decay_power = 4.0;
    nphi3.eval = [a](Vec2 y) {
        const double d = 1.0 + y.norm2();
        return 8.0 * (0.5 * (4.0 - a) * (1.0 - y.norm2()) / d) / (d * d);
    };
    const double c_limit = -0.5 * (4.0 - a);
    const ConvQuad q{7, 256, 4.0, 1e-5, 1e-9};
    for (const Vec2 x : {Vec2{0.7, -0.3}, Vec2{1.6, 0.9}}) {
        const auto b = plane_convolution(x, [](double s) { return std::log(s); },
                                         nphi3.eval, q);
        const double rhs = -b.value / (2.0 * kPi) + c_limit;
        const double lhs = kernel_basis(alpha, x)[2];
        CHECK(lhs == Catch::Approx(rhs).margin(1e-6));
    }
    // limit probes at 1e3 and 1e4 agree with each other and with the constant
    const auto probes = limit_probe(kernel_field(alpha, 3));
    CHECK(std::abs(probes.first - probes.second) < 1e-3);
    CHECK(probes.second == Catch::Approx(c_limit).margin(1e-3));
    const auto p1 = limit_probe(kernel_field(alpha, 1));
    CHECK(std::abs(p1.second) < 1e-3);
}

TEST_CASE("mass identities", "[bubble]") {
    for (double a : {0.5, 1.0, 1.5}) {
        const AlphaParam alpha(a);
        const double ca = specfun::c_alpha(alpha);
        const auto m = identity_mass(BubbleParams(alpha));
        CHECK(m.first == Catch::Approx(kPi * ca * ca).epsilon(1e-10));
        CHECK(m.second == Catch::Approx(2.0 * (4.0 - a) * kPi).epsilon(1e-6));
    }
    // alpha = 1 numeric anchors: pi (3/pi)^{2/3} and 6 pi
    const auto m1 = identity_mass(BubbleParams(AlphaParam(1.0)));
    CHECK(m1.first == Catch::Approx(3.0464738926897778).epsilon(1e-10));
    CHECK(m1.second == Catch::Approx(6.0 * kPi).epsilon(1e-10));
    // alpha = 0.5: second slot is 7 pi
    const auto mh = identity_mass(BubbleParams(AlphaParam(0.5)));
    CHECK(mh.second == Catch::Approx(7.0 * kPi).epsilon(1e-10));
}

TEST_CASE("unreduced double integral agrees at low accuracy", "[bubble]") {
    // sanity oracle that skips the closed Riesz reduction: the outer layer
    // runs over a coarse transported plane rule, the inner layer through
    // singular quadrature
    const AlphaParam alpha(1.0);
    const BubbleParams p(alpha);
    const auto rule = sphere::plane_quadrature(12);
    bubble::ConvQuad q;
    q.radial_level = 5;
    q.angular_nodes = 64;
    const double outer = rule.integrate([&](Vec2 x) {
        const auto inner =
            riesz_convolution(alpha, x, [&](Vec2 y) { return exp_u(p, y); }, q);
        return exp_u(p, x) * inner.value;
    });
    CHECK(outer == Catch::Approx(6.0 * kPi).epsilon(1e-3));
}

TEST_CASE("mass identities are rescaling invariant", "[bubble]") {
    const AlphaParam alpha(1.3);
    const auto base = identity_mass(BubbleParams(alpha));
    const auto moved = identity_mass(BubbleParams(alpha, 3.0, {2.0, -1.0}));
    CHECK(moved.first == Catch::Approx(base.first).epsilon(1e-10));
    CHECK(moved.second == Catch::Approx(base.second).epsilon(1e-10));
}

TEST_CASE("orthogonality of the kernel basis", "[bubble]") {
    const auto rule = sphere::plane_quadrature(32);
    for (double a : {0.5, 1.0, 1.5}) {
        const AlphaParam alpha(a);
        const double scale = kPi * std::pow(specfun::c_alpha(alpha), 2.0);
        for (int j = 1; j <= 3; ++j) {
            const double v = orthogonality_integral(alpha, kernel_field(alpha, j), rule);
            CHECK(std::abs(v) <= 1e-10 * scale);
        }
        // constant test function reproduces the first mass slot
        const double c = orthogonality_integral(
            alpha, bounded_field([](Vec2) { return 1.0; }), rule);
        CHECK(c == Catch::Approx(scale).epsilon(1e-12));
    }
}

TEST_CASE("weighted norms of the kernel basis", "[bubble]") {
    const auto rule = sphere::plane_quadrature(32);
    const AlphaParam one(1.0);
    const auto n1 = weighted_norms(kernel_field(one, 1), rule);
    CHECK(n1.l2w * n1.l2w == Catch::Approx(3.0 * kPi / 4.0).epsilon(1e-10));
    CHECK(n1.grad_l2 * n1.grad_l2 == Catch::Approx(6.0 * kPi).epsilon(1e-10));
    CHECK(n1.grad_l2 * n1.grad_l2 / (n1.l2w * n1.l2w) == Catch::Approx(8.0).epsilon(1e-10));

    const auto n3 = weighted_norms(kernel_field(one, 3), rule);
    CHECK(n3.l2w * n3.l2w == Catch::Approx(3.0 * kPi / 4.0).epsilon(1e-10));
    CHECK(n3.grad_l2 * n3.grad_l2 / (n3.l2w * n3.l2w) == Catch::Approx(8.0).epsilon(1e-10));

    const auto nz = weighted_norms(bounded_field([](Vec2) { return 0.0; }), rule);
    CHECK(nz.l2w == 0.0);
    CHECK(nz.grad_l2 == 0.0);
    CHECK(nz.h1w == 0.0);

    // h1w^2 = grad^2 + l2w^2
    CHECK(n1.h1w * n1.h1w ==
          Catch::Approx(n1.grad_l2 * n1.grad_l2 + n1.l2w * n1.l2w).epsilon(1e-12));
}

TEST_CASE("energy bound on the kernel span", "[bubble]") {
    const auto rule = sphere::plane_quadrature(32);
    testutil::Rng rng(28);
    for (double a : {0.5, 1.0, 1.5}) {
        const AlphaParam alpha(a);
        const double a_alpha = std::sqrt(4.0 * (4.0 - a) + 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            const double c1 = rng.uniform(-1.0, 1.0);
            const double c2 = rng.uniform(-1.0, 1.0);
            const double c3 = rng.uniform(-1.0, 1.0);
            if (c1 * c1 + c2 * c2 + c3 * c3 < 1e-2) continue;
            PlaneField f;
            f.decay = DecayClass::bounded;
            f.eval = [=, &alpha](Vec2 x) {
                const auto b = kernel_basis(alpha, x);
                return c1 * b[0] + c2 * b[1] + c3 * b[2];
            };
            const auto g1 = kernel_field(alpha, 1).gradient;
            const auto g2 = kernel_field(alpha, 2).gradient;
            const auto g3 = kernel_field(alpha, 3).gradient;
            f.gradient = [=](Vec2 x) {
                return c1 * g1(x) + c2 * g2(x) + c3 * g3(x);
            };
            const auto n = weighted_norms(f, rule);
            const double ratio = n.grad_l2 * n.grad_l2 / (n.l2w * n.l2w);
            CHECK(ratio == Catch::Approx(8.0).epsilon(1e-9));
            CHECK(n.grad_l2 * n.grad_l2 <=
                  4.0 * (4.0 - a) * n.l2w * n.l2w * (1.0 + 1e-9));
            CHECK(n.h1w <= a_alpha * n.l2w * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("kernel decay integral respects the three regimes", "[bubble]") {
    for (double theta : {1.5, 2.0, 3.0}) {
        for (double R : {1.0, 10.0, 100.0}) {
            const double val = riesz_decay_integral(theta, {R, 0.0});
            const double jb = std::sqrt(1.0 + R * R);
            double bound;
            if (theta < 2.0)
                bound = std::pow(jb, 1.0 - theta);
            else if (theta == 2.0)
                bound = (1.0 + std::log(jb)) / jb;
            else
                bound = 1.0 / jb;
            const double ratio = val / bound;
            CHECK(ratio > 0.01);
            CHECK(ratio < 100.0);
        }
    }
}
