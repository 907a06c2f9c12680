#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "ratsys/forbidden.hpp"
#include "ratsys/solution.hpp"

using namespace ratsys;

namespace {

const Params kReference = validate_params(1, 3, -4, -10);
const Point kReferenceStart{-11.0 / 20.0, 1.5};

// |lambda| = rho system built from the eigenvalue relations
Params equal_modulus_params(double lambda, double theta, double beta2) {
    const double rho = std::abs(lambda);
    const double b1 = lambda + 2.0 * rho * std::cos(theta);
    const double a2 = -(2.0 * lambda * rho * std::cos(theta) + rho * rho);
    const double a1 = (lambda * rho * rho + b1 * a2) / beta2;
    return validate_params(a1, b1, a2, beta2);
}

}  // namespace

TEST_CASE("v sequence initial data") {
    const VSequence vs = v_sequence(kReference, kReferenceStart, 6);
    CHECK(vs.at(-1) == 1.0);
    CHECK(vs.at(0) == 1.5);
    CHECK(vs.at(1) == doctest::Approx(1.5).epsilon(1e-15));  // beta2*x0 + alpha2
    CHECK(vs.max_index() == 6);
}

TEST_CASE("v sequence satisfies its recurrence exactly as evaluated") {
    testutil::Rng rng(61);
    for (int i = 0; i < 50; ++i) {
        const Params p = rng.params(false);
        const Point z0 = rng.point(-3, 3);
        const VSequence vs = v_sequence(p, z0, 20);
        for (long n = -1; n + 3 <= vs.max_index(); ++n) {
            CHECK(vs.at(n + 3) == v_step(p, vs.at(n), vs.at(n + 1), vs.at(n + 2)));
        }
    }
}

TEST_CASE("triple root: v(n)/lambda^n is a quadratic polynomial in n") {
    // (x - 1.2)^3: beta1 = 3.6, alpha2 = -4.32, beta2*alpha1 = -8*1.2^3
    const double lambda = 1.2;
    const Params p = validate_params(-8.0 * lambda * lambda * lambda, 3.0 * lambda,
                                     -3.0 * lambda * lambda, 1.0);
    testutil::Rng rng(67);
    for (int i = 0; i < 20; ++i) {
        const Point z0 = rng.point(-2, 2);
        if (std::abs(z0.y) < 0.1) continue;
        const VSequence vs = v_sequence(p, z0, 20);
        // interpolate q(n) = v(n)/lambda^n through n = 0, 1, 2 and check the rest
        const auto q = [&](long n) { return vs.at(n) / std::pow(lambda, double(n)); };
        const double c0 = q(0);
        const double c1 = (-3.0 * q(0) + 4.0 * q(1) - q(2)) / 2.0;
        const double c2 = (q(0) - 2.0 * q(1) + q(2)) / 2.0;
        for (long n = 3; n <= 20; ++n) {
            const double fit = c0 + c1 * double(n) + c2 * double(n) * double(n);
            CHECK(testutil::rel_to(fit, q(n)) < 1e-8);
        }
    }
}

TEST_CASE("eigendirection start: v(n)/v(n-1) = lambda for all n") {
    // fixed point of the reference system is (-1/2, 1) with lambda = 1
    const VSequence vs = v_sequence(kReference, Point{-0.5, 1.0}, 15);
    for (long n = 0; n <= 15; ++n) {
        CHECK(vs.at(n) / vs.at(n - 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("solve_beta2_nonzero matches direct iteration on the reference orbit") {
    const Point z1 = solve_beta2_nonzero(kReference, kReferenceStart, 1);
    CHECK(z1.x == doctest::Approx(-13.0 / 30.0).epsilon(1e-14));
    CHECK(z1.y == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_beta2_nonzero keeps the fixed point fixed for every n") {
    for (std::size_t n : {0u, 1u, 2u, 5u, 17u, 40u}) {
        const Point z = solve_beta2_nonzero(kReference, Point{-0.5, 1.0}, n);
        CHECK(z.x == doctest::Approx(-0.5).epsilon(1e-10));
        CHECK(z.y == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("solve_beta2_nonzero reports forbidden starts") {
    // x0 = -2/5 sits on the witness-2 line: v(1) = 0
    CHECK_THROWS_AS(solve_beta2_nonzero(kReference, Point{-0.4, 7.0}, 2), forbidden_orbit_error);
}

TEST_CASE("rolling-window rescale keeps ratios over long horizons") {
    // spectral radius well above 1 would overflow near n ~ 1000 without the
    // power-of-two rescaling
    const Params p = validate_params(1.0, 2.5, -1.0, 1.0);
    const Point z0{0.3, 0.7};
    const Point z = solve_beta2_nonzero(p, z0, 4000);
    CHECK(std::isfinite(z.x));
    CHECK(std::isfinite(z.y));
}

TEST_CASE("solve_beta2_zero: globally 2-periodic example") {
    const Params p = validate_params(0, 2, 4, 0);
    const Point z0{5, 1};
    for (std::size_t n : {0u, 2u, 4u, 10u}) {
        const Point z = solve_beta2_zero(p, z0, n);
        CHECK(z.x == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(z.y == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t n : {1u, 3u, 9u}) {
        const Point z = solve_beta2_zero(p, z0, n);
        CHECK(z.x == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(z.y == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("solve_beta2_zero: 4-periodic case formula at n = 2") {
    const Params p = validate_params(1, 1, -1, 0);
    testutil::Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        const Point z0 = rng.point(-3, 3);
        if (std::abs(z0.y) < 0.1) continue;
        const Point z = solve_beta2_zero(p, z0, 2);
        CHECK(z.x == doctest::Approx(-z0.x - (1.0 + z0.y)).epsilon(1e-12));
        CHECK(z.y == doctest::Approx(z0.y).epsilon(1e-12));
    }
}

TEST_CASE("solve_beta2_zero: the 2-periodic family returns at even n") {
    testutil::Rng rng(73);
    for (int i = 0; i < 20; ++i) {
        const double b1 = rng.uniform(0.3, 2.0);
        const double a2 = rng.uniform(0.3, 2.0) + b1 * b1;  // alpha2 != beta1^2
        const double a1 = rng.uniform(-2.0, 2.0);
        if (a1 == 0.0) continue;
        const Params p = validate_params(a1, b1, a2, 0);
        const double y0 = rng.uniform(0.5, 2.0);
        const double x0 = a1 * (b1 + y0) / (a2 - b1 * b1);
        for (std::size_t n : {2u, 6u, 12u}) {
            const Point z = solve_beta2_zero(p, Point{x0, y0}, n);
            CHECK(testutil::rel_to(z.x, x0) < 1e-10);
            CHECK(testutil::rel_to(z.y, y0) < 1e-10);
        }
    }
}

TEST_CASE("closed forms agree with direct iteration") {
    testutil::Rng rng(79);
    int checked = 0;
    while (checked < 200) {
        const bool beta2_zero = checked % 2 == 0;
        const Params p = rng.params(beta2_zero);
        const Point z0 = rng.point(-3, 3);
        if (is_forbidden(p, z0, 64).has_value()) continue;
        const Orbit o = iterate(p, z0, 30);
        if (!o.complete()) continue;
        ++checked;
        for (std::size_t n = 0; n < o.points.size(); ++n) {
            const Point cf =
                beta2_zero ? solve_beta2_zero(p, z0, n) : solve_beta2_nonzero(p, z0, n);
            CHECK(testutil::rel_to(cf.x, o.points[n].x) < 1e-8);
            CHECK(testutil::rel_to(cf.y, o.points[n].y) < 1e-8);
        }
    }
}

TEST_CASE("complex constants of the worked example: a = 0, P = 1") {
    const ComplexConstants cc = complex_constants(kReference, kReferenceStart);
    CHECK(cc.P == doctest::Approx(1.0).epsilon(1e-12));
    const double a_dist = std::min(cc.a, 2.0 * std::numbers::pi - cc.a);
    CHECK(a_dist <= 1e-12);
    CHECK(cc.lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cc.rho == doctest::Approx(std::numbers::sqrt2).epsilon(1e-10));
    CHECK(cc.theta == doctest::Approx(std::numbers::pi / 4).epsilon(1e-10));
    CHECK(cc.k == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("complex constants solve the defining linear system") {
    testutil::Rng rng(83);
    int checked = 0;
    while (checked < 100) {
        const Params p = rng.params(false);
        const Spectrum s = roots(char_poly(p));
        if (!s.complex_pair) continue;
        const Point z0 = rng.point(-3, 3);
        if (std::abs(z0.y) < 0.05) continue;
        ComplexConstants cc;
        try {
            cc = complex_constants(p, s, z0);
        } catch (const singular_system_error&) {
            continue;
        }
        ++checked;
        // reconstruct the three equations from (c1, c2) independently
        const double ct = std::cos(cc.theta);
        const double st = std::sin(cc.theta);
        const double r1 =
            cc.lambda * cc.c1 + 2.0 * cc.rho * (ct * cc.c2_re - st * cc.c2_im);
        const double r2 = cc.c1 + 2.0 * cc.c2_re;
        const double r3 = cc.c1 / cc.lambda + 2.0 * (ct * cc.c2_re + st * cc.c2_im) / cc.rho;
        CHECK(testutil::rel_to(r1, p.alpha2 + p.beta2 * z0.x) < 1e-9);
        CHECK(testutil::rel_to(r2, z0.y) < 1e-9);
        CHECK(testutil::rel_to(r3, 1.0) < 1e-9);
        // the normalized triple reproduces (c1, c2) with P >= 0
        CHECK(cc.P >= 0.0);
        CHECK(cc.k * cc.P == doctest::Approx(cc.c1).epsilon(1e-12));
        CHECK(cc.k * std::cos(cc.a) == doctest::Approx(cc.c2_re).epsilon(1e-9));
        CHECK(cc.k * std::sin(cc.a) == doctest::Approx(cc.c2_im).epsilon(1e-9));
    }
}

TEST_CASE("fixed point start gives the sigma-free representation") {
    const ComplexConstants cc = complex_constants(kReference, Point{-0.5, 1.0});
    CHECK(cc.k == 0.0);
    CHECK(cc.P != 0.0);
}

TEST_CASE("P = 0 exactly on the line L, both directions") {
    testutil::Rng rng(89);
    int checked = 0;
    while (checked < 80) {
        const Params p = rng.params(false);
        const Spectrum s = roots(char_poly(p));
        if (!s.complex_pair) continue;
        const double lambda = s.real_roots.front().value;
        const LineL L = line_L(p, lambda);
        ++checked;

        // points on L solve with P ~ 0
        const Point on = L.point_at(rng.uniform(-2.0, 2.0));
        try {
            const ComplexConstants con = complex_constants(p, s, on);
            CHECK(std::abs(con.P) <= 1e-9);
        } catch (const singular_system_error&) {
        }

        // points at distance >= 0.05 from L have markedly nonzero P
        const Point off = rng.point(-3, 3);
        if (L.distance(off) < 0.05) continue;
        try {
            const ComplexConstants coff = complex_constants(p, s, off);
            CHECK(std::abs(coff.P) > 1e-9);
        } catch (const singular_system_error&) {
        }
    }
}

TEST_CASE("sigma/tau basics and identities") {
    ComplexConstants c;
    c.P = 1.0;
    c.a = 0.0;
    c.k = 1.0;
    c.lambda = 1.0;
    c.rho = std::numbers::sqrt2;
    c.theta = std::numbers::pi / 4;

    const auto [s0, t0] = sigma_tau(c, 0);
    CHECK(s0 == 2.0);
    CHECK(t0 == 0.0);

    // sigma_{2+4k} = 0 for the worked example's constants
    for (long k = 0; k <= 5; ++k) {
        const auto [sv, tv] = sigma_tau(c, 2 + 4 * k);
        CHECK(std::abs(sv) <= 1e-9);
        (void)tv;
    }

    testutil::Rng rng(97);
    for (int i = 0; i < 100; ++i) {
        ComplexConstants cc;
        cc.a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        cc.lambda = rng.uniform(0.3, 2.0) * (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
        cc.rho = rng.uniform(0.3, 2.0);
        cc.theta = rng.uniform(0.1, std::numbers::pi - 0.1);
        const long n = static_cast<long>(rng.uniform(-8.0, 12.0));
        const auto [sn, tn] = sigma_tau(cc, n);
        const auto [snp, tnp] = sigma_tau(cc, n + 1);
        const auto [snm, tnm] = sigma_tau(cc, n - 1);
        (void)tnp;
        (void)tnm;
        const double ct = std::cos(cc.theta);
        const double st = std::sin(cc.theta);
        // lambda*sigma_{n+1} = rho*(sigma_n cos - tau_n sin)
        CHECK(testutil::rel_diff(cc.lambda * snp, cc.rho * (sn * ct - tn * st)) < 1e-10);
        // rho*sigma_{n-1} = lambda*(sigma_n cos + tau_n sin)
        CHECK(testutil::rel_diff(cc.rho * snm, cc.lambda * (sn * ct + tn * st)) < 1e-10);
        // lambda^2 sigma_{n+1} - 2 lambda rho cos sigma_n + rho^2 sigma_{n-1} = 0
        const double comb = cc.lambda * cc.lambda * snp - 2.0 * cc.lambda * cc.rho * ct * sn +
                            cc.rho * cc.rho * snm;
        CHECK(std::abs(comb) <=
              1e-10 * std::max({1.0, std::abs(sn), std::abs(snp), std::abs(snm)}));
    }
}

TEST_CASE("line L of the worked example") {
    const LineL L = line_L(kReference, 1.0);
    // proportional to 10x + 2y + 2 = 0, parallel through the fixed point at
    // 10x + 2y + 3 = 0
    CHECK(L.b / L.a == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(L.c / L.a == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(L.parallel_c / L.a == doctest::Approx(0.3).epsilon(1e-12));
    // the fixed point misses L: 10(-1/2) + 2(1) + 2 = -1
    CHECK(L.residual(Point{-0.5, 1.0}) * 10.0 / L.a == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("casirecta: the line-gap identity holds along complex-regime orbits") {
    testutil::Rng rng(101);
    int checked = 0;
    while (checked < 60) {
        const Params p = rng.params(false);
        const Spectrum s = roots(char_poly(p));
        if (!s.complex_pair) continue;
        const Point z0 = rng.point(-2, 2);
        if (is_forbidden(p, z0, 40).has_value()) continue;
        const Orbit o = iterate(p, z0, 25);
        if (!o.complete()) continue;
        ComplexConstants cc;
        try {
            cc = complex_constants(p, s, z0);
        } catch (const singular_system_error&) {
            continue;
        }
        if (cc.k == 0.0) continue;
        ++checked;
        const double lambda = cc.lambda;
        const double gap = lambda * lambda - 2.0 * cc.rho * lambda * std::cos(cc.theta) +
                           cc.rho * cc.rho;
        for (std::size_t n = 1; n < o.points.size(); ++n) {
            const auto [sigma_prev, tau_prev] = sigma_tau(cc, static_cast<long>(n) - 1);
            (void)tau_prev;
            if (std::abs(cc.P + sigma_prev) < 1e-4) continue;  // near-forbidden pass
            const Point z = o.points[n];
            const double lhs = p.beta2 * z.x - (p.beta1 - lambda) * (z.y + lambda);
            const double rhs = cc.P * gap / (cc.P + sigma_prev);
            CHECK(testutil::rel_diff(lhs, rhs) < 1e-8);
        }
    }
}

TEST_CASE("orbits starting on L remain on L") {
    testutil::Rng rng(103);
    int checked = 0;
    while (checked < 40) {
        const Params p = rng.params(false);
        const Spectrum s = roots(char_poly(p));
        if (!s.complex_pair) continue;
        const double lambda = s.real_roots.front().value;
        const LineL L = line_L(p, lambda);
        const Point z0 = L.point_at(rng.uniform(-2.0, 2.0));

        // the L-component seeded by round-off grows like (|lambda|/rho)^n,
        // so the checkable window shrinks when the real root dominates
        const double ratio = std::abs(lambda) / s.complex_pair->rho;
        const std::size_t window =
            ratio <= 1.05 ? 100
                          : std::min<std::size_t>(
                                100, static_cast<std::size_t>(std::log(1e6) / std::log(ratio)));

        const Orbit o = iterate(p, z0, window);
        if (o.points.size() < 10) continue;
        ++checked;
        for (const Point& z : o.points) {
            // relative to the point magnitude: on-L orbits can spike through
            // near-forbidden passes where absolute residuals scale up
            const double scale = std::max({1.0, std::abs(z.x), std::abs(z.y)});
            CHECK(L.distance(z) / scale < 1e-7);
        }
    }
}

TEST_CASE("conic of the |lambda| = rho regime fits 200-step orbits") {
    testutil::Rng rng(107);
    int checked = 0;
    while (checked < 20) {
        const double lambda = rng.uniform(0.5, 1.6) * (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
        const double theta = rng.uniform(0.3, std::numbers::pi - 0.3);
        const double beta2 = rng.uniform(0.5, 2.0);
        const Params p = equal_modulus_params(lambda, theta, beta2);
        const Spectrum s = roots(char_poly(p));
        if (s.regime != Regime::ComplexEqualModulus) continue;

        // z0 near the fixed point has large P: the orbit stays on a bounded
        // ellipse-like branch
        const Point fixed{(lambda * lambda - p.alpha2) / p.beta2, lambda};
        const Point z0{fixed.x + rng.uniform(0.01, 0.05), fixed.y + rng.uniform(0.01, 0.05)};
        auto k = conic_of(p, s, z0);
        if (!k) continue;
        if (std::abs(k->P) < 2.5) continue;
        const Orbit o = iterate(p, z0, 200);
        if (!o.complete()) continue;
        ++checked;
        for (const Point& z : o.points) CHECK(k->residual(z) < 1e-8);

        // the fixed point maps to the focus and misses the conic
        const Point f = k->transform(fixed);
        CHECK(std::hypot(f.x, f.y) <= 1e-9);
        const double at_focus = k->eccentricity * k->eccentricity * k->rho_lambda * k->rho_lambda;
        CHECK(at_focus > 1e-6);  // the conic equation residual at the focus
    }
}

TEST_CASE("conic eccentricity is 2/P") {
    const Params p = equal_modulus_params(1.0, 1.0, 1.0);
    testutil::Rng rng(109);
    for (int i = 0; i < 10; ++i) {
        const Point z0 = rng.point(-1, 1);
        std::string why;
        const auto k = conic_of(p, z0, &why);
        if (!k) continue;
        CHECK(k->eccentricity == doctest::Approx(2.0 / k->P).epsilon(1e-12));
    }
}

TEST_CASE("conic_of rejects the inapplicable cases") {
    std::string why;
    CHECK(!conic_of(kReference, kReferenceStart, &why).has_value());  // |lambda| < rho
    CHECK(why.find("|lambda| != rho") != std::string::npos);

    const Params p = equal_modulus_params(1.0, 1.0, 1.0);
    const Spectrum s = roots(char_poly(p));
    const LineL L = line_L(p, s.real_roots.front().value);
    CHECK(!conic_of(p, s, L.point_at(0.7), &why).has_value());  // P = 0 on L
    const Point fixed{(1.0 - p.alpha2) / p.beta2, 1.0};
    CHECK(!conic_of(p, s, fixed, &why).has_value());  // the focus itself
}

TEST_CASE("solve_beta2_zero rejects the forbidden line y = 0") {
    CHECK_THROWS_AS(solve_beta2_zero(validate_params(1, 2, 4, 0), Point{1.0, 0.0}, 3),
                    division_by_zero_error);
}

TEST_CASE("spectrum of beta2 = 0 with negative alpha2 is a purely imaginary pair") {
    // roots beta1 and +-i sqrt(|alpha2|)
    const Spectrum s = roots(char_poly(validate_params(1, 1, -4, 0)));
    REQUIRE(s.complex_pair.has_value());
    CHECK(s.complex_pair->rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.complex_pair->theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(s.real_roots.front().value == doctest::Approx(1.0).epsilon(1e-12));
}
