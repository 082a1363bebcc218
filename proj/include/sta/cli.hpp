#pragma once

#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sta/bloch.hpp"
#include "sta/config.hpp"
#include "sta/csv.hpp"
#include "sta/design.hpp"
#include "sta/experiments.hpp"
#include "sta/quantum.hpp"

namespace sta {

namespace detail {

inline BlochKind bloch_kind_for(SchedId id) {
    switch (id) {
    case SchedId::single1:
    case SchedId::single2:
        return BlochKind::single;
    case SchedId::rotating:
        return BlochKind::rotating;
    default:
        return BlochKind::mean_field;
    }
}

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
    std::string out = "t,m,dm2_literal,dm2_fluct,n_x,n_y,n_z\n";
    for (const auto& r : rows) {
        out += format_double(r.t);
        out += ',';
        out += format_double(r.m);
        out += ',';
        out += format_double(r.dm2_literal);
        out += ',';
        out += format_double(r.dm2_fluct);
        out += ',';
        out += format_double(r.n_x);
        out += ',';
        out += format_double(r.n_y);
        out += ',';
        out += format_double(r.n_z);
        out += '\n';
    }
    return out;
}

inline std::string run_design(const RunConfig& cfg) {
    DriveSchedule drive = designed_drive(cfg.schedule, cfg.params);
    std::string out = "t,gamma_x,gamma_y,f,h_z\n";
    for (long k = 0; k <= cfg.samples; ++k) {
        double t = cfg.params.T * static_cast<double>(k) / static_cast<double>(cfg.samples);
        DriveSample d = sample_drive(drive, t);
        out += format_double(d.t);
        out += ',';
        out += format_double(d.gamma_x);
        out += ',';
        out += format_double(d.gamma_y);
        out += ',';
        out += format_double(d.f);
        out += ',';
        out += format_double(d.h_z);
        out += '\n';
    }
    return out;
}

inline std::string run_evolve_bloch(const RunConfig& cfg) {
    DriveSchedule drive = designed_drive(cfg.schedule, cfg.params);
    std::vector<BlochState> path =
        evolve_bloch(drive, cfg.params, bloch_kind_for(cfg.schedule), cfg.steps);
    const long steps = static_cast<long>(path.size()) - 1;
    const long rec = std::max(1L, steps / cfg.samples);
    std::vector<TrajectoryRow> rows;
    for (long k = 0; k <= steps; ++k) {
        if (k % rec != 0 && k != steps) continue;
        const auto& n = path[static_cast<std::size_t>(k)].n;
        double t = cfg.params.T * static_cast<double>(k) / static_cast<double>(steps);
        rows.push_back({t, n[2], n[2] * n[2], 0.0, n[0], n[1], n[2]});
    }
    return trajectory_csv(rows);
}

inline std::string run_evolve_quantum(const RunConfig& cfg) {
    DriveSchedule drive = designed_drive(cfg.schedule, cfg.params);
    QuantumTrajectory traj =
        (drive.kind == ScheduleKind::single_spin)
            ? evolve_two_level(drive, cfg.params, cfg.steps, static_cast<int>(cfg.samples))
            : evolve_quantum(drive, cfg.params, cfg.steps, static_cast<int>(cfg.samples));
    return trajectory_csv(traj.rows);
}

inline std::string run_sweep(const RunConfig& cfg) {
    std::vector<SweepRow> rows = sweep_T(cfg.schedule, cfg.params, cfg.T_list, cfg.params.N,
                                         cfg.steps, static_cast<int>(cfg.samples));
    std::string out = "T,metric,value\n";
    for (const auto& r : rows) {
        out += format_double(r.T) + ",final_m," + format_double(r.final_m) + "\n";
        out += format_double(r.T) + ",max_dev_mf," + format_double(r.max_dev_mf) + "\n";
        std::fprintf(stderr, "sweep-T T=%s: %.3f s\n", format_double(r.T).c_str(),
                     r.wall_seconds);
    }
    return out;
}

inline std::string run_stability(const RunConfig& cfg) {
    QuantumTrajectory traj = stability_run(cfg.params, cfg.schedule, cfg.pert, cfg.steps,
                                           static_cast<int>(cfg.samples));
    return trajectory_csv(traj.rows);
}

inline std::string run_mattis(const RunConfig& cfg) {
    std::vector<int> xi = cfg.xi;
    if (xi.empty()) {
        std::mt19937_64 rng(*cfg.seed);
        xi.resize(static_cast<std::size_t>(cfg.params.N));
        for (auto& x : xi) x = (rng() & 1u) ? 1 : -1;
    }
    std::string msg = "xi =";
    for (int x : xi) msg += (x > 0 ? " +1" : " -1");
    std::fprintf(stderr, "%s\n", msg.c_str());

    CouplingMatrix cpl = mattis_couplings(xi, cfg.params.J, cfg.params.h);
    DriveSchedule drive = designed_drive(cfg.schedule, cfg.params);
    FullTrajectory traj =
        evolve_full_hilbert(cpl, drive, cfg.steps, static_cast<int>(cfg.samples));
    std::vector<TrajectoryRow> rows = traj.rows;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double m = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) m += xi[i] * traj.site_z[k][i];
        rows[k].m = m / static_cast<double>(xi.size());
    }
    return trajectory_csv(rows);
}

} // namespace detail

/**
 * @brief Execute a validated config and write its CSV atomically.
 *        Progress notes (sweep wall-clock, drawn xi) go to stderr.
 */
inline void run(const RunConfig& cfg) {
    std::string csv;
    switch (*cfg.command) {
    case Command::design: csv = detail::run_design(cfg); break;
    case Command::evolve_bloch: csv = detail::run_evolve_bloch(cfg); break;
    case Command::evolve_quantum: csv = detail::run_evolve_quantum(cfg); break;
    case Command::sweep_T: csv = detail::run_sweep(cfg); break;
    case Command::stability: csv = detail::run_stability(cfg); break;
    case Command::mattis: csv = detail::run_mattis(cfg); break;
    }
    write_file_atomic(cfg.out, csv);
}

} // namespace sta
