#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sta/design.hpp"
#include "sta/parallel.hpp"
#include "sta/quantum.hpp"
#include "sta/types.hpp"

namespace sta {

/** @brief The two perturbation directions in the zx plane at time t. */
struct PerturbationDirections {
    std::array<double, 3> parallel;
    std::array<double, 3> transverse;
};

/** @brief Unit directions (sin(theta), 0, cos(theta)) and (cos(theta), 0, -sin(theta)). */
inline PerturbationDirections perturbation_directions(const AngleSet& angles, double t) {
    const double th = angles.theta(t);
    const double s = std::sin(th), c = std::cos(th);
    return {{s, 0.0, c}, {c, 0.0, -s}};
}

/**
 * @brief The unstable perturbation direction for general phi,
 *        (n x n0)/|n x n0| with n0 the zx-plane projection of the Bloch vector.
 */
inline std::array<double, 3> unstable_direction(const AngleSet& angles, double t) {
    const double th = angles.theta(t), ph = angles.phi(t);
    const double s = std::sin(th), c = std::cos(th);
    const double ch = std::cos(0.5 * ph), sh = std::sin(0.5 * ph);
    const double r = std::sqrt(c * c + s * s * ch * ch);
    if (!(r > 0.0))
        throw std::invalid_argument(
            "unstable_direction: undefined where n is parallel to its zx projection");
    return {c * ch / r, c * sh / r, -s * ch / r};
}

/**
 * @brief Sinusoidal perturbing field h0_amp sin(wt/T) along the parallel
 *        direction plus hp_amp sin(wt/T) along the transverse one.
 */
inline std::array<double, 3> perturbation_field(const AngleSet& angles,
                                                const PerturbationSpec& spec, double t) {
    const double e = std::sin(spec.omega * t / angles.T);
    PerturbationDirections dir = perturbation_directions(angles, t);
    return {spec.h0_amp * e * dir.parallel[0] + spec.hp_amp * e * dir.transverse[0], 0.0,
            spec.h0_amp * e * dir.parallel[2] + spec.hp_amp * e * dir.transverse[2]};
}

/**
 * @brief Sector evolution of a designed collective schedule with the uniform
 *        perturbing field b(t) . sum_i sigma_i added to the Hamiltonian.
 */
inline QuantumTrajectory stability_run(const ModelParams& p, SchedId id,
                                       const PerturbationSpec& spec, long long steps = 20000,
                                       int samples = 200) {
    p.check();
    if (p.N > 10000) throw DimensionOverflow(p.N, 10000);
    DriveSchedule drive = designed_drive(id, p);
    if (drive.kind != ScheduleKind::mean_field && drive.kind != ScheduleKind::rotating)
        throw std::invalid_argument("stability_run: schedule must be a designed collective one");
    auto cfun = [&](double t) {
        DickeCoeffs c = dicke_coefficients(sample_drive(drive, t), p);
        std::array<double, 3> b = perturbation_field(drive.angles, spec, t);
        c.ax += 2.0 * b[0];
        c.ay += 2.0 * b[1];
        c.az += 2.0 * b[2];
        return c;
    };
    return evolve_dicke(cfun, static_cast<int>(p.N), p.T, steps, samples);
}

/** @brief One summary line of a horizon sweep. */
struct SweepRow {
    double T = 0.0;
    double final_m = 0.0;
    double max_dev_mf = 0.0;
    double wall_seconds = 0.0;
};

namespace detail {

/** @brief Target path cos(theta(s)) with the quartic theta shared by the designed schedules. */
inline double target_m(double s) {
    return std::cos(kHalfPi - 2.0 * kPi * s * s * s + 1.5 * kPi * s * s * s * s);
}

} // namespace detail

/**
 * @brief Quantum runs over a list of horizons: per T the final magnetization,
 *        the maximal deviation of m(t) from the mean-field path cos(theta(t))
 *        (for the linear schedule, from the designed target path), and the
 *        wall-clock time. Members run concurrently.
 */
inline std::vector<SweepRow> sweep_T(SchedId id, const ModelParams& base,
                                     const std::vector<double>& T_list, long N,
                                     long long steps = 20000, int samples = 200) {
    if (T_list.empty()) throw std::invalid_argument("sweep_T: T_list must be nonempty");
    if (id == SchedId::single1 || id == SchedId::single2)
        throw std::invalid_argument("sweep_T: single-spin schedules are not collective");
    std::vector<SweepRow> rows(T_list.size());
    parallel_for(T_list.size(), [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        ModelParams p = base;
        p.T = T_list[i];
        p.N = N;
        DriveSchedule drive = designed_drive(id, p);
        QuantumTrajectory traj = evolve_quantum(drive, p, steps, samples);
        SweepRow row;
        row.T = p.T;
        row.final_m = traj.rows.back().m;
        for (const auto& r : traj.rows) {
            double target = (drive.kind == ScheduleKind::linear)
                                ? detail::target_m(r.t / p.T)
                                : qcos(drive.angles.theta_poly.split(r.t / p.T));
            row.max_dev_mf = std::max(row.max_dev_mf, std::abs(r.m - target));
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows[i] = row;
    });
    return rows;
}

} // namespace sta
