#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sta/errors.hpp"
#include "sta/poly.hpp"
#include "sta/types.hpp"

namespace sta {

/**
 * @brief Angle functions theta(t), phi(t), gamma(t) on [0, T] with exact
 *        analytic derivatives, stored as polynomials in s = t/T.
 */
struct AngleSet {
    BoundaryPoly theta_poly;
    BoundaryPoly phi_poly;
    BoundaryPoly gamma_poly;
    BoundaryPoly phi_minus_gamma_poly;
    double T = 1.0;
    bool has_gamma = false;

    AngleSet() = default;

    AngleSet(std::vector<double> th, std::vector<double> ph, double horizon)
        : theta_poly(std::move(th)),
          phi_poly(std::move(ph)),
          gamma_poly(),
          phi_minus_gamma_poly(phi_poly - gamma_poly),
          T(horizon),
          has_gamma(false) {}

    AngleSet(std::vector<double> th, std::vector<double> ph, std::vector<double> gm,
             double horizon)
        : theta_poly(std::move(th)),
          phi_poly(std::move(ph)),
          gamma_poly(std::move(gm)),
          phi_minus_gamma_poly(phi_poly - gamma_poly),
          T(horizon),
          has_gamma(true) {}

    double theta(double t) const { return theta_poly.value(t / T); }
    double phi(double t) const { return phi_poly.value(t / T); }
    double gamma(double t) const { return gamma_poly.value(t / T); }
    double dtheta(double t) const { return theta_poly.deriv(t / T) / T; }
    double dphi(double t) const { return phi_poly.deriv(t / T) / T; }
    double dgamma(double t) const { return gamma_poly.deriv(t / T) / T; }
};

/**
 * @brief Polynomial angle pair for the single-spin inverse-engineering
 *        schedules: theta sweeps pi/2 -> 0 while phi sweeps 0 -> pi/2,
 *        with vanishing endpoint rates.
 *
 * Variant 1 uses the quartic theta with T-independent coefficients;
 * variant 2 uses the quintic theta whose cubic phi carries the final
 * longitudinal field h1.
 */
inline AngleSet single_spin_schedule(int variant, double Gamma0, double h1, double T) {
    if (variant != 1 && variant != 2)
        throw std::invalid_argument("single_spin_schedule: variant must be 1 or 2");
    if (!(Gamma0 > 0.0)) throw std::invalid_argument("single_spin_schedule: Gamma0 must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("single_spin_schedule: T must be > 0");

    if (variant == 1) {
        std::vector<double> th = {kHalfPi, 0.0, 0.0, -2.0 * kPi, 3.0 * kHalfPi};
        double b = 6.0 * kPi / (Gamma0 * T);
        double d = h1 * T / 3.0;
        std::vector<double> ph = {0.0, 0.0, b, 2.0 * kPi - 2.0 * b - d,
                                  -3.0 * kHalfPi + b + d};
        return AngleSet(std::move(th), std::move(ph), T);
    }
    double a3 = kHalfPi * Gamma0 * T - Gamma0 * T * h1 * T / 9.0;
    double a4 = 5.0 * kHalfPi - kPi * Gamma0 * T + 2.0 * Gamma0 * T * h1 * T / 9.0;
    double a5 = -2.0 * kPi + kHalfPi * Gamma0 * T - Gamma0 * T * h1 * T / 9.0;
    std::vector<double> th = {kHalfPi, 0.0, 0.0, -a3, -a4, -a5};
    double b3 = -kPi + h1 * T / 3.0;
    std::vector<double> ph = {0.0, 0.0, 3.0 * a3 / (Gamma0 * T), b3};
    return AngleSet(std::move(th), std::move(ph), T);
}

namespace detail {

/**
 * @brief Scan sin(phi) on the interior of a 1e4-point uniform grid; a sign
 *        change or exact zero means the designed field diverges there.
 */
inline void scan_for_divergence(const AngleSet& a) {
    constexpr int kGrid = 10000;
    double prev = 0.0;
    bool have_prev = false;
    for (int k = 1; k < kGrid; ++k) {
        double s = static_cast<double>(k) / kGrid;
        double v = qsin(a.phi_poly.split(s));
        if (v == 0.0) throw DivergentSchedule(s * a.T, a.T);
        if (have_prev && std::signbit(v) != std::signbit(prev)) {
            double lo = static_cast<double>(k - 1) / kGrid;
            double hi = s;
            for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = qsin(a.phi_poly.split(mid));
                if (vm == 0.0) { lo = hi = mid; break; }
                if (std::signbit(vm) == std::signbit(prev)) lo = mid; else hi = mid;
            }
            throw DivergentSchedule(0.5 * (lo + hi) * a.T, a.T);
        }
        prev = v;
        have_prev = true;
    }
}

} // namespace detail

/**
 * @brief Angle schedules for the infinite-range Ising model; phi carries the
 *        opposite sign from the single-spin case and ends at -pi/2.
 *
 * Throws DivergentSchedule when sin(phi) vanishes at an interior grid point,
 * which happens for variant 2 once T exceeds roughly 9*pi/(4(J+h)).
 */
inline AngleSet ising_schedule(int variant, const ModelParams& p) {
    if (variant != 1 && variant != 2)
        throw std::invalid_argument("ising_schedule: variant must be 1 or 2");
    p.check();
    if (!(p.J > 0.0)) throw std::invalid_argument("ising_schedule: J must be > 0");

    AngleSet a;
    if (variant == 1) {
        std::vector<double> th = {kHalfPi, 0.0, 0.0, -2.0 * kPi, 3.0 * kHalfPi};
        double b = 3.0 * kPi / (p.Gamma0 * p.T);
        double d = 2.0 * (p.J + p.h) * p.T / 3.0;
        std::vector<double> ph = {0.0, 0.0, -b, -(2.0 * kPi - 2.0 * b - d),
                                  -(-3.0 * kHalfPi + b + d)};
        a = AngleSet(std::move(th), std::move(ph), p.T);
    } else {
        double GT = p.Gamma0 * p.T;
        double JhT = (p.J + p.h) * p.T;
        double a3 = kPi * GT - 4.0 * GT * JhT / 9.0;
        double a4 = 5.0 * kHalfPi - 2.0 * kPi * GT + 8.0 * GT * JhT / 9.0;
        double a5 = -2.0 * kPi + kPi * GT - 4.0 * GT * JhT / 9.0;
        std::vector<double> th = {kHalfPi, 0.0, 0.0, -a3, -a4, -a5};
        double b3 = -kPi + 2.0 * JhT / 3.0;
        std::vector<double> ph = {0.0, 0.0, -3.0 * a3 / (2.0 * GT), -b3};
        a = AngleSet(std::move(th), std::move(ph), p.T);
    }
    detail::scan_for_divergence(a);
    return a;
}

/**
 * @brief Rotating-transverse-field schedule: gamma sweeps the field from x
 *        to y while theta closes to 0 and phi returns to 0 at T.
 */
inline AngleSet rotating_schedule(const ModelParams& p) {
    p.check();
    if (!(p.J > 0.0)) throw std::invalid_argument("rotating_schedule: J must be > 0");

    double kappa = p.J / (p.Gamma0 * p.Gamma0 * p.T);
    std::vector<double> gm = {0.0, kappa, 3.0 * kHalfPi - 2.0 * kappa, -kPi + kappa};
    double a2 = p.J / p.Gamma0;
    std::vector<double> th = {kHalfPi, 0.0, -a2, 2.0 * a2 - 2.0 * kPi, 3.0 * kHalfPi - a2};
    double c = 2.0 * p.J * p.T / 3.0;
    std::vector<double> ph = {0.0, 0.0, 0.0, c, -c};
    return AngleSet(std::move(th), std::move(ph), std::move(gm), p.T);
}

/**
 * @brief Endpoint report for a schedule: every boundary value and rate
 *        condition of the given kind, checked to 1e-8.
 */
enum class ScheduleFamily { single, ising, rotating };

inline Report verify_boundaries(const AngleSet& a, ScheduleFamily kind) {
    Report rep;
    auto add = [&rep](const std::string& name, double target, double actual) {
        double res = std::abs(actual - target);
        rep.checks.push_back({name, target, actual, res, res < 1e-8});
    };
    double T = a.T;
    add("theta(0) = pi/2", kHalfPi, a.theta(0.0));
    add("theta(T) = 0", 0.0, a.theta(T));
    add("dtheta(0) = 0", 0.0, a.dtheta(0.0));
    add("dtheta(T) = 0", 0.0, a.dtheta(T));
    add("phi(0) = 0", 0.0, a.phi(0.0));
    switch (kind) {
        case ScheduleFamily::single:
            add("ddtheta(0) = 0", 0.0, a.theta_poly.deriv2(0.0) / (T * T));
            add("dphi(0) = 0", 0.0, a.dphi(0.0));
            add("phi(T) = pi/2", kHalfPi, a.phi(T));
            break;
        case ScheduleFamily::ising:
            add("ddtheta(0) = 0", 0.0, a.theta_poly.deriv2(0.0) / (T * T));
            add("dphi(0) = 0", 0.0, a.dphi(0.0));
            add("phi(T) = -pi/2", -kHalfPi, a.phi(T));
            break;
        case ScheduleFamily::rotating:
            add("phi(T) = 0", 0.0, a.phi(T));
            add("gamma(0) = 0", 0.0, a.gamma(0.0));
            add("gamma(T) = pi/2", kHalfPi, a.gamma(T));
            break;
    }
    return rep;
}

} // namespace sta
