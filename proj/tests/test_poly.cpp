#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sta/poly.hpp"

using namespace sta;
using Catch::Approx;

TEST_CASE("quadrant trig is exact at multiples of pi/2") {
    CHECK(qsin({0, 0.0}) == 0.0);
    CHECK(qcos({1, 0.0}) == 0.0);
    CHECK(qsin({1, 0.0}) == 1.0);
    CHECK(qsin({2, 0.0}) == 0.0);
    CHECK(qsin({3, 0.0}) == -1.0);
    CHECK(qsin({-1, 0.0}) == -1.0);
    CHECK(qcos({-2, 0.0}) == -1.0);
    // small residuals keep full relative accuracy
    CHECK(qsin({2, 1e-12}) == Approx(-1e-12).epsilon(1e-12));
    CHECK(qcos({1, 1e-12}) == Approx(-1e-12).epsilon(1e-12));
}

TEST_CASE("quadrant split of a generic angle matches plain trig") {
    BoundaryPoly p({0.3, 1.1, -0.7, 2.0});
    for (double s : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        QuadrantValue q = p.split(s);
        double v = p.value(s);
        CHECK(qsin(q) == Approx(std::sin(v)).margin(1e-14));
        CHECK(qcos(q) == Approx(std::cos(v)).margin(1e-14));
    }
}

TEST_CASE("endpoint constants pinned to pi/2 multiples have exact trig") {
    // theta-like quartic: pi/2 at s=0, 0 at s=1
    BoundaryPoly th({kHalfPi, 0.0, 0.0, -2.0 * kPi, 1.5 * kPi});
    CHECK(th.value(0.0) == kHalfPi);
    CHECK(th.value(1.0) == 0.0);
    CHECK(qcos(th.split(0.0)) == 0.0);
    CHECK(qsin(th.split(1.0)) == 0.0);
    CHECK(th.quadrant(End::left) == 1);
    CHECK(th.quadrant(End::right) == 0);
    CHECK(th.value(0.5) == Approx(11.0 * kPi / 32.0).epsilon(1e-14));
}

TEST_CASE("dual-basis evaluation keeps relative accuracy near s = 1") {
    BoundaryPoly th({kHalfPi, 0.0, 0.0, -2.0 * kPi, 1.5 * kPi});
    // theta(1-u) = u^2 (pi + ... ), leading coefficient from the u-basis
    double u = 1e-7;
    double expect = 0.5 * u * u * th.deriv2(1.0);
    CHECK(th.value(1.0 - u) == Approx(expect).epsilon(1e-5));
    CHECK(th.value(1.0 - u) > 0.0);
}

TEST_CASE("derivatives match central differences") {
    BoundaryPoly p({0.2, -1.3, 0.9, 2.5, -1.1, 0.4});
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int k = 0; k < 50; ++k) {
        double s = u(rng);
        double eps = 1e-6;
        double fd = (p.value(s + eps) - p.value(s - eps)) / (2.0 * eps);
        CHECK(p.deriv(s) == Approx(fd).margin(1e-7));
        double eps2 = 1e-4;
        double fd2 = (p.value(s + eps2) - 2.0 * p.value(s) + p.value(s - eps2)) / (eps2 * eps2);
        CHECK(p.deriv2(s) == Approx(fd2).margin(1e-6));
    }
}

TEST_CASE("coefficient-wise difference of polynomials") {
    BoundaryPoly x({1.0, 2.0, 3.0});
    BoundaryPoly y({0.5, -1.0});
    BoundaryPoly d = x - y;
    for (double s : {0.0, 0.25, 0.6, 1.0})
        CHECK(d.value(s) == Approx(x.value(s) - y.value(s)).margin(1e-14));
}

TEST_CASE("leading-term algebra") {
    LeadingTerm a{2.0, 1}, b{3.0, 2};
    CHECK(lt_mul(a, b).c == 6.0);
    CHECK(lt_mul(a, b).k == 3);
    CHECK(lt_div(b, a).c == 1.5);
    CHECK(lt_div(b, a).k == 1);
    CHECK(lt_scale(-2.0, a).c == -4.0);
    CHECK(lt_add(a, b).k == 1);           // lower order wins
    CHECK(lt_add(a, LeadingTerm{-2.0, 1}).k >= kZeroOrder);  // exact cancellation
    CHECK(lt_is_zero(lt_mul(a, lt_zero())));
    CHECK(lt_is_zero(lt_scale(0.0, a)));
    CHECK(lt_add(lt_zero(), b).c == 3.0);
}

TEST_CASE("leading terms of sin and cos at an endpoint") {
    // sin(0 + c x^k) ~ c x^k, cos(0 + c x^k) ~ 1
    LeadingTerm r{0.4, 2};
    LeadingTerm s = lt_sin(0, r);
    CHECK(s.c == Approx(0.4));
    CHECK(s.k == 2);
    LeadingTerm c = lt_cos(0, r);
    CHECK(c.c == 1.0);
    CHECK(c.k == 0);
    // sin(pi/2 + r) ~ 1; cos(pi/2 + r) ~ -r
    CHECK(lt_sin(1, r).c == 1.0);
    CHECK(lt_cos(1, r).c == Approx(-0.4));
    CHECK(lt_cos(1, r).k == 2);
    // an order-0 residual evaluates numerically
    LeadingTerm n = lt_sin(0, LeadingTerm{0.3, 0});
    CHECK(n.c == Approx(std::sin(0.3)));
    CHECK(n.k == 0);
    // identically zero residual
    CHECK(lt_sin(0, lt_zero()).k >= kZeroOrder);
    CHECK(lt_cos(0, lt_zero()).c == 1.0);
}

TEST_CASE("offset and derivative leading terms at both ends") {
    BoundaryPoly th({kHalfPi, 0.0, 0.0, -2.0 * kPi, 1.5 * kPi});
    LeadingTerm dl = th.deriv_leading(End::left);
    CHECK(dl.k == 2);                     // theta' ~ -6 pi s^2
    CHECK(dl.c == Approx(-6.0 * kPi));
    LeadingTerm ol = th.offset_leading(End::right);
    CHECK(ol.k == 2);                     // theta(1-u) ~ 3 pi u^2
    CHECK(ol.c == Approx(3.0 * kPi));
    LeadingTerm dr = th.deriv_leading(End::right);
    CHECK(dr.k == 1);                     // d theta/ds ~ -6 pi u near s = 1
    CHECK(dr.c == Approx(-6.0 * kPi));
}
