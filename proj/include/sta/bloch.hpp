#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sta/design.hpp"
#include "sta/errors.hpp"
#include "sta/types.hpp"

namespace sta {

enum class BlochKind { single, mean_field, rotating };

/**
 * @brief Effective field B(t) such that n' = B x n.
 *
 * single:     B = (Gamma, 0, h_z), the single-spin field itself.
 * mean_field: B = (-2 Gamma, 0, -2 f (J n_z + h)), self-consistent in n_z.
 * rotating:   B = (-2 Gamma_x, -2 Gamma_y, -2 f J n_z), no longitudinal field.
 */
inline std::array<double, 3> bloch_field(const DriveSample& d, const ModelParams& p,
                                         BlochKind kind, double nz) {
    switch (kind) {
    case BlochKind::single:
        return {d.gamma_x, 0.0, d.h_z};
    case BlochKind::mean_field:
        return {-2.0 * d.gamma_x, 0.0, -2.0 * d.f * (p.J * nz + p.h)};
    case BlochKind::rotating:
        return {-2.0 * d.gamma_x, -2.0 * d.gamma_y, -2.0 * d.f * p.J * nz};
    }
    throw std::invalid_argument("bloch_field: unknown kind");
}

namespace detail {

inline std::array<double, 3> cross_with(const std::array<double, 3>& B,
                                        const std::array<double, 3>& n) {
    return {B[1] * n[2] - B[2] * n[1], B[2] * n[0] - B[0] * n[2],
            B[0] * n[1] - B[1] * n[0]};
}

} // namespace detail

/**
 * @brief Classical RK4 trajectory of n' = B(t, n) x n from n(0) = (1, 0, 0),
 *        one entry per step plus the initial point. Each step renormalizes n;
 *        pre-renormalization drift beyond 1e-6 raises NormDrift. When
 *        max_drift is given it receives the largest pre-renormalization
 *        deviation of |n| from 1 seen over the run.
 */
inline std::vector<BlochState> evolve_bloch(const DriveSchedule& drive, const ModelParams& p,
                                            BlochKind kind, long steps = 10000,
                                            double* max_drift = nullptr) {
    p.check();
    if (steps < 1000) throw std::invalid_argument("evolve_bloch: steps must be >= 1000");
    const double dt = p.T / static_cast<double>(steps);

    auto deriv = [&](const DriveSample& d, const std::array<double, 3>& n) {
        return detail::cross_with(bloch_field(d, p, kind, n[2]), n);
    };

    std::vector<BlochState> out;
    out.reserve(steps + 1);
    std::array<double, 3> n{1.0, 0.0, 0.0};
    out.push_back(BlochState{{n[0], n[1], n[2]}});
    double drift_seen = 0.0;

    for (long k = 0; k < steps; ++k) {
        double t = p.T * static_cast<double>(k) / static_cast<double>(steps);
        DriveSample d1 = sample_drive(drive, t);
        DriveSample d2 = sample_drive(drive, t + 0.5 * dt);
        DriveSample d4 = sample_drive(drive, t + dt);

        std::array<double, 3> k1 = deriv(d1, n);
        std::array<double, 3> s{n[0] + 0.5 * dt * k1[0], n[1] + 0.5 * dt * k1[1],
                                n[2] + 0.5 * dt * k1[2]};
        std::array<double, 3> k2 = deriv(d2, s);
        s = {n[0] + 0.5 * dt * k2[0], n[1] + 0.5 * dt * k2[1], n[2] + 0.5 * dt * k2[2]};
        std::array<double, 3> k3 = deriv(d2, s);
        s = {n[0] + dt * k3[0], n[1] + dt * k3[1], n[2] + dt * k3[2]};
        std::array<double, 3> k4 = deriv(d4, s);

        for (int i = 0; i < 3; ++i)
            n[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (std::abs(r - 1.0) > 1e-6) throw NormDrift(std::abs(r - 1.0), t + dt);
        drift_seen = std::max(drift_seen, std::abs(r - 1.0));
        n[0] /= r;
        n[1] /= r;
        n[2] /= r;
        out.push_back(BlochState{{n[0], n[1], n[2]}});
    }
    if (max_drift) *max_drift = drift_seen;
    return out;
}

/**
 * @brief Residual |n_param'(t) - B(t) x n_param(t)| of the parametrized path
 *        n_param = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta));
 *        zero exactly when the drive solves the design equations at t.
 */
inline double bloch_residual(const AngleSet& angles, const DriveSchedule& drive,
                             BlochKind kind, double t) {
    const ModelParams& p = drive.params;
    const double s = t / angles.T;
    QuadrantValue th = angles.theta_poly.split(s);
    QuadrantValue ph = angles.phi_poly.split(s);
    const double sth = qsin(th), cth = qcos(th);
    const double sph = qsin(ph), cph = qcos(ph);
    const double dth = angles.dtheta(t), dph = angles.dphi(t);

    std::array<double, 3> n{sth * cph, sth * sph, cth};
    std::array<double, 3> ndot{dth * cth * cph - dph * sth * sph,
                               dth * cth * sph + dph * sth * cph, -dth * sth};

    DriveSample d = sample_drive(drive, t);
    std::array<double, 3> rhs = detail::cross_with(bloch_field(d, p, kind, n[2]), n);
    double r = 0.0;
    for (int i = 0; i < 3; ++i) r += (ndot[i] - rhs[i]) * (ndot[i] - rhs[i]);
    return std::sqrt(r);
}

} // namespace sta
