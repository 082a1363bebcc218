#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sta/errors.hpp"
#include "sta/poly.hpp"
#include "sta/schedules.hpp"
#include "sta/types.hpp"

namespace sta {

enum class ScheduleKind { single_spin, mean_field, rotating, linear };

enum class SchedId { single1, single2, ising1, ising2, rotating, linear };

/**
 * @brief A drive specification: schedule kind plus the angle set and model
 *        parameters needed to evaluate the Hamiltonian coefficients at any t.
 */
struct DriveSchedule {
    ScheduleKind kind = ScheduleKind::linear;
    AngleSet angles;
    ModelParams params;
};

namespace detail {

constexpr double kEdgeS = 1e-13;
constexpr double kCapWindow = 1e-3;
constexpr double kCap = 1e6;

inline bool at_edge(double s) { return s <= kEdgeS || 1.0 - s <= kEdgeS; }

inline double lt_value(const LeadingTerm& a, double t) {
    if (lt_is_zero(a)) return 0.0;
    if (a.k < 0) throw SingularDrive(t, std::numeric_limits<double>::infinity());
    return a.k == 0 ? a.c : 0.0;
}

inline LeadingTerm lt_rate(const BoundaryPoly& p, End e, double T) {
    return lt_scale(1.0 / T, p.deriv_leading(e));
}

inline LeadingTerm lt_sin_at(const BoundaryPoly& p, End e) {
    return lt_sin(p.quadrant(e), p.offset_leading(e));
}

inline LeadingTerm lt_cos_at(const BoundaryPoly& p, End e) {
    return lt_cos(p.quadrant(e), p.offset_leading(e));
}

inline double checked(double v, double t, double s) {
    if (!std::isfinite(v)) throw SingularDrive(t, v);
    if (s >= kCapWindow && s <= 1.0 - kCapWindow && std::abs(v) > kCap)
        throw SingularDrive(t, v);
    return v;
}

} // namespace detail

/**
 * @brief Single-spin field: Gamma = -dtheta/sin(phi),
 *        h_z = -dtheta cos(theta) cos(phi) / (sin(theta) sin(phi)) + dphi.
 *
 * Both expressions are 0/0 at the endpoints; there the exact limits are taken
 * from the leading polynomial orders. Outside the endpoint windows any output
 * above 1e6 in magnitude raises SingularDrive.
 */
inline DriveSample design_single_spin(const AngleSet& a, double t) {
    double s = t / a.T;
    if (detail::at_edge(s)) {
        End e = s <= 0.5 ? End::left : End::right;
        LeadingTerm dth = detail::lt_rate(a.theta_poly, e, a.T);
        LeadingTerm dph = detail::lt_rate(a.phi_poly, e, a.T);
        LeadingTerm sin_th = detail::lt_sin_at(a.theta_poly, e);
        LeadingTerm cos_th = detail::lt_cos_at(a.theta_poly, e);
        LeadingTerm sin_ph = detail::lt_sin_at(a.phi_poly, e);
        LeadingTerm cos_ph = detail::lt_cos_at(a.phi_poly, e);
        LeadingTerm g = lt_scale(-1.0, lt_div(dth, sin_ph));
        LeadingTerm num = lt_mul(lt_scale(-1.0, dth), lt_mul(cos_th, cos_ph));
        LeadingTerm hz = lt_add(lt_div(num, lt_mul(sin_th, sin_ph)), dph);
        return {t, detail::lt_value(g, t), 0.0, 0.0, detail::lt_value(hz, t)};
    }
    QuadrantValue th = a.theta_poly.split(s);
    QuadrantValue ph = a.phi_poly.split(s);
    double dth = a.theta_poly.deriv(s) / a.T;
    double dph = a.phi_poly.deriv(s) / a.T;
    double g = -dth / qsin(ph);
    double hz = -dth * qcos(th) * qcos(ph) / (qsin(th) * qsin(ph)) + dph;
    return {t, detail::checked(g, t, s), 0.0, 0.0, detail::checked(hz, t, s)};
}

/**
 * @brief Mean-field Ising drive: Gamma = dtheta/(2 sin(phi)),
 *        f = (2 Gamma cot(theta) cos(phi) - dphi) / (2 (J cos(theta) + h)).
 *
 * Requires h > 0: at t = 0 the denominator is 2h and f diverges without a
 * longitudinal field.
 */
inline DriveSample design_mean_field(const AngleSet& a, const ModelParams& p, double t) {
    if (!(p.h > 0.0)) throw RequiresLongitudinalField();
    double s = t / a.T;
    if (detail::at_edge(s)) {
        End e = s <= 0.5 ? End::left : End::right;
        LeadingTerm dth = detail::lt_rate(a.theta_poly, e, a.T);
        LeadingTerm dph = detail::lt_rate(a.phi_poly, e, a.T);
        LeadingTerm sin_th = detail::lt_sin_at(a.theta_poly, e);
        LeadingTerm cos_th = detail::lt_cos_at(a.theta_poly, e);
        LeadingTerm sin_ph = detail::lt_sin_at(a.phi_poly, e);
        LeadingTerm cos_ph = detail::lt_cos_at(a.phi_poly, e);
        LeadingTerm g = lt_scale(0.5, lt_div(dth, sin_ph));
        LeadingTerm num = lt_add(
            lt_scale(2.0, lt_mul(g, lt_mul(lt_div(cos_th, sin_th), cos_ph))),
            lt_scale(-1.0, dph));
        LeadingTerm den = lt_add(lt_scale(2.0 * p.J, cos_th), LeadingTerm{2.0 * p.h, 0});
        LeadingTerm f = lt_div(num, den);
        return {t, detail::lt_value(g, t), 0.0, detail::lt_value(f, t), 0.0};
    }
    QuadrantValue th = a.theta_poly.split(s);
    QuadrantValue ph = a.phi_poly.split(s);
    double dth = a.theta_poly.deriv(s) / a.T;
    double dph = a.phi_poly.deriv(s) / a.T;
    double g = dth / (2.0 * qsin(ph));
    double f = (2.0 * g * (qcos(th) / qsin(th)) * qcos(ph) - dph) /
               (2.0 * (p.J * qcos(th) + p.h));
    return {t, detail::checked(g, t, s), 0.0, detail::checked(f, t, s), 0.0};
}

/**
 * @brief Rotating-field drive: Gamma = dtheta/(2 sin(phi-gamma)),
 *        f = -Gamma (sin(phi-gamma) sin(phi) - cos(gamma)) / (J sin(theta) cos(phi))
 *            - dphi / (2 J cos(theta)),
 *        with (Gamma_x, Gamma_y) = Gamma (cos(gamma), sin(gamma)).
 */
inline DriveSample design_rotating(const AngleSet& a, const ModelParams& p, double t) {
    if (!(p.J > 0.0)) throw std::invalid_argument("design_rotating: J must be > 0");
    double s = t / a.T;
    if (detail::at_edge(s)) {
        End e = s <= 0.5 ? End::left : End::right;
        LeadingTerm dth = detail::lt_rate(a.theta_poly, e, a.T);
        LeadingTerm dph = detail::lt_rate(a.phi_poly, e, a.T);
        LeadingTerm sin_th = detail::lt_sin_at(a.theta_poly, e);
        LeadingTerm cos_th = detail::lt_cos_at(a.theta_poly, e);
        LeadingTerm sin_ph = detail::lt_sin_at(a.phi_poly, e);
        LeadingTerm cos_ph = detail::lt_cos_at(a.phi_poly, e);
        LeadingTerm sin_gm = detail::lt_sin_at(a.gamma_poly, e);
        LeadingTerm cos_gm = detail::lt_cos_at(a.gamma_poly, e);
        LeadingTerm sin_pmg = detail::lt_sin_at(a.phi_minus_gamma_poly, e);
        LeadingTerm g = lt_scale(0.5, lt_div(dth, sin_pmg));
        LeadingTerm bracket =
            lt_add(lt_mul(sin_pmg, sin_ph), lt_scale(-1.0, cos_gm));
        LeadingTerm fa = lt_scale(
            -1.0, lt_div(lt_mul(g, bracket),
                         lt_scale(p.J, lt_mul(sin_th, cos_ph))));
        LeadingTerm fb = lt_scale(-1.0, lt_div(dph, lt_scale(2.0 * p.J, cos_th)));
        LeadingTerm f = lt_add(fa, fb);
        return {t, detail::lt_value(lt_mul(g, cos_gm), t),
                detail::lt_value(lt_mul(g, sin_gm), t), detail::lt_value(f, t), 0.0};
    }
    QuadrantValue th = a.theta_poly.split(s);
    QuadrantValue ph = a.phi_poly.split(s);
    QuadrantValue gm = a.gamma_poly.split(s);
    QuadrantValue pmg = a.phi_minus_gamma_poly.split(s);
    double dth = a.theta_poly.deriv(s) / a.T;
    double dph = a.phi_poly.deriv(s) / a.T;
    double g = dth / (2.0 * qsin(pmg));
    double f = -g * (qsin(pmg) * qsin(ph) - qcos(gm)) /
                   (p.J * qsin(th) * qcos(ph)) -
               dph / (2.0 * p.J * qcos(th));
    return {t, detail::checked(g * qcos(gm), t, s), detail::checked(g * qsin(gm), t, s),
            detail::checked(f, t, s), 0.0};
}

/**
 * @brief Per-site inverse engineering for a general Ising instance.
 *
 * Evaluates Gamma_i = dtheta_i/(2 sin(phi_i)) and
 * f_i = (2 Gamma_i cot(theta_i) cos(phi_i) - dphi_i) /
 *       (2 (sum_j J_ij cos(theta_j) + h_i))
 * for every site and returns the common value; if the sites disagree beyond
 * relative 1e-8 no site-independent drive exists and SiteInconsistent is
 * thrown with the maximal discrepancy.
 */
inline DriveSample design_general_ising(const std::vector<AngleSet>& sites,
                                        const CouplingMatrix& cpl, double t) {
    std::size_t n = sites.size();
    if (n == 0) throw std::invalid_argument("design_general_ising: no sites");
    if (cpl.N != static_cast<int>(n))
        throw std::invalid_argument("design_general_ising: couplings size mismatch");
    double T = sites[0].T;
    double s = t / T;
    std::vector<double> gs(n), fs(n);
    if (detail::at_edge(s)) {
        End e = s <= 0.5 ? End::left : End::right;
        std::vector<LeadingTerm> cos_th(n);
        for (std::size_t j = 0; j < n; ++j)
            cos_th[j] = detail::lt_cos_at(sites[j].theta_poly, e);
        for (std::size_t i = 0; i < n; ++i) {
            const AngleSet& a = sites[i];
            LeadingTerm dth = detail::lt_rate(a.theta_poly, e, T);
            LeadingTerm dph = detail::lt_rate(a.phi_poly, e, T);
            LeadingTerm sin_th = detail::lt_sin_at(a.theta_poly, e);
            LeadingTerm sin_ph = detail::lt_sin_at(a.phi_poly, e);
            LeadingTerm cos_ph = detail::lt_cos_at(a.phi_poly, e);
            LeadingTerm g = lt_scale(0.5, lt_div(dth, sin_ph));
            LeadingTerm num = lt_add(
                lt_scale(2.0, lt_mul(g, lt_mul(lt_div(cos_th[i], sin_th), cos_ph))),
                lt_scale(-1.0, dph));
            LeadingTerm den = lt_zero();
            for (std::size_t j = 0; j < n; ++j)
                den = lt_add(den, lt_scale(2.0 * cpl.at(i, j), cos_th[j]));
            den = lt_add(den, LeadingTerm{2.0 * cpl.h[i], 0});
            gs[i] = detail::lt_value(g, t);
            fs[i] = detail::lt_value(lt_div(num, den), t);
        }
    } else {
        std::vector<double> cth(n);
        for (std::size_t j = 0; j < n; ++j) cth[j] = qcos(sites[j].theta_poly.split(s));
        for (std::size_t i = 0; i < n; ++i) {
            const AngleSet& a = sites[i];
            QuadrantValue th = a.theta_poly.split(s);
            QuadrantValue ph = a.phi_poly.split(s);
            double dth = a.theta_poly.deriv(s) / T;
            double dph = a.phi_poly.deriv(s) / T;
            double g = dth / (2.0 * qsin(ph));
            double field = 0.0;
            for (std::size_t j = 0; j < n; ++j) field += cpl.at(i, j) * cth[j];
            field += cpl.h[i];
            double f = (2.0 * g * (cth[i] / qsin(th)) * qcos(ph) - dph) / (2.0 * field);
            if (!std::isfinite(g)) throw SingularDrive(t, g);
            if (!std::isfinite(f)) throw SingularDrive(t, f);
            gs[i] = g;
            fs[i] = f;
        }
    }
    auto spread = [](const std::vector<double>& v) {
        double lo = v[0], hi = v[0], amax = 0.0;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            amax = std::max(amax, std::abs(x));
        }
        return (hi - lo) / std::max(amax, 1e-12);
    };
    double disc = std::max(spread(gs), spread(fs));
    if (disc > 1e-8) throw SiteInconsistent(disc);
    double gm = 0.0, fm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        gm += gs[i];
        fm += fs[i];
    }
    gm /= static_cast<double>(n);
    fm /= static_cast<double>(n);
    return {t, gm, 0.0, fm, 0.0};
}

/** @brief Mattis instance: J_ij = J xi_i xi_j / N, h_i = h xi_i. */
inline CouplingMatrix mattis_couplings(const std::vector<int>& xi, double J, double h) {
    int n = static_cast<int>(xi.size());
    if (n == 0) throw std::invalid_argument("mattis_couplings: empty sign vector");
    CouplingMatrix cpl;
    cpl.N = n;
    cpl.J.assign(static_cast<std::size_t>(n) * n, 0.0);
    cpl.h.assign(n, 0.0);
    cpl.xi = xi;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            cpl.J[static_cast<std::size_t>(i) * n + j] =
                J * xi[i] * xi[j] / static_cast<double>(n);
        cpl.h[i] = h * xi[i];
    }
    cpl.check();
    return cpl;
}

/** @brief Uniform infinite-range instance: J_ij = J/N for all pairs, h_i = h. */
inline CouplingMatrix infinite_range_couplings(double J, double h, int n) {
    std::vector<int> xi(n, 1);
    return mattis_couplings(xi, J, h);
}

/**
 * @brief Per-site angles for the Mattis ansatz:
 *        theta_i = xi_i theta + (1 - xi_i) pi/2, phi_i = xi_i phi.
 */
inline std::vector<AngleSet> mattis_angles(const AngleSet& base, const std::vector<int>& xi) {
    std::vector<AngleSet> sites;
    sites.reserve(xi.size());
    for (int sgn : xi) {
        if (sgn != 1 && sgn != -1)
            throw std::invalid_argument("mattis_angles: signs must be +1 or -1");
        std::vector<double> th = base.theta_poly.scoeffs();
        std::vector<double> ph = base.phi_poly.scoeffs();
        for (double& c : th) c *= sgn;
        th[0] += (1 - sgn) * kHalfPi;
        for (double& c : ph) c *= sgn;
        sites.emplace_back(std::move(th), std::move(ph), base.T);
    }
    return sites;
}

/** @brief Linear-ramp reference drive: Gamma = Gamma0 (1 - t/T), f = t/T. */
inline DriveSchedule linear_drive(const ModelParams& p) {
    p.check();
    DriveSchedule d;
    d.kind = ScheduleKind::linear;
    d.params = p;
    return d;
}

/** @brief Build the named designed drive for the given parameters. */
inline DriveSchedule designed_drive(SchedId id, const ModelParams& p) {
    p.check();
    DriveSchedule d;
    d.params = p;
    switch (id) {
        case SchedId::single1:
            d.kind = ScheduleKind::single_spin;
            d.angles = single_spin_schedule(1, p.Gamma0, p.h, p.T);
            break;
        case SchedId::single2:
            d.kind = ScheduleKind::single_spin;
            d.angles = single_spin_schedule(2, p.Gamma0, p.h, p.T);
            break;
        case SchedId::ising1:
            d.kind = ScheduleKind::mean_field;
            d.angles = ising_schedule(1, p);
            break;
        case SchedId::ising2:
            d.kind = ScheduleKind::mean_field;
            d.angles = ising_schedule(2, p);
            break;
        case SchedId::rotating:
            d.kind = ScheduleKind::rotating;
            d.angles = rotating_schedule(p);
            break;
        case SchedId::linear:
            d.kind = ScheduleKind::linear;
            break;
    }
    return d;
}

/** @brief Evaluate the Hamiltonian coefficients of a drive at time t. */
inline DriveSample sample_drive(const DriveSchedule& d, double t) {
    switch (d.kind) {
        case ScheduleKind::single_spin:
            return design_single_spin(d.angles, t);
        case ScheduleKind::mean_field:
            return design_mean_field(d.angles, d.params, t);
        case ScheduleKind::rotating:
            return design_rotating(d.angles, d.params, t);
        case ScheduleKind::linear:
            break;
    }
    double s = t / d.params.T;
    return {t, d.params.Gamma0 * (1.0 - s), 0.0, s, 0.0};
}

} // namespace sta
