#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "sta/design.hpp"
#include "sta/errors.hpp"
#include "sta/types.hpp"

namespace sta {

/** @brief Coefficients of the collective Hamiltonian azz Sz^2 + az Sz + ax Sx + ay Sy. */
struct DickeCoeffs {
    double azz = 0.0;
    double az = 0.0;
    double ax = 0.0;
    double ay = 0.0;
};

/** @brief Map drive coefficients to the collective Hamiltonian of N spins. */
inline DickeCoeffs dicke_coefficients(const DriveSample& d, const ModelParams& p) {
    DickeCoeffs c;
    c.azz = -2.0 * d.f * p.J / p.N;
    c.az = -2.0 * d.f * p.h;
    c.ax = -2.0 * d.gamma_x;
    c.ay = -2.0 * d.gamma_y;
    return c;
}

struct QuantumObservables {
    double m = 0.0;
    double dm2_literal = 0.0;
    double dm2_fluct = 0.0;
    std::array<double, 3> bloch{0.0, 0.0, 0.0};
};

/**
 * @brief Collective spin operators in the S = N/2 sector, stored structurally:
 *        Sz and Sz^2 as diagonals, Sx and Sy through the ladder amplitudes
 *        <M+1|S+|M> = sqrt(S(S+1) - M(M+1)).
 */
struct CollectiveOperators {
    int N = 0;
    std::vector<double> sz;
    std::vector<double> sz2;
    std::vector<double> ladder;

    explicit CollectiveOperators(int spins) : N(spins) {
        if (N < 1) throw std::invalid_argument("CollectiveOperators: N must be >= 1");
        const double S = N / 2.0;
        sz.resize(N + 1);
        sz2.resize(N + 1);
        ladder.resize(N);
        for (int i = 0; i <= N; ++i) {
            double M = i - S;
            sz[i] = M;
            sz2[i] = M * M;
        }
        for (int i = 0; i < N; ++i) {
            double M = i - S;
            ladder[i] = std::sqrt(S * (S + 1) - M * (M + 1));
        }
    }

    DickeState apply_sz(const DickeState& v) const {
        DickeState out;
        out.c.resize(v.c.size());
        for (std::size_t i = 0; i < v.c.size(); ++i) out.c[i] = sz[i] * v.c[i];
        return out;
    }

    DickeState apply_sx(const DickeState& v) const {
        DickeState out;
        out.c.resize(v.c.size());
        for (std::size_t i = 0; i < v.c.size(); ++i) {
            std::complex<double> a = 0.0;
            if (i + 1 < v.c.size()) a += 0.5 * ladder[i] * v.c[i + 1];
            if (i > 0) a += 0.5 * ladder[i - 1] * v.c[i - 1];
            out.c[i] = a;
        }
        return out;
    }

    DickeState apply_sy(const DickeState& v) const {
        DickeState out;
        out.c.resize(v.c.size());
        const std::complex<double> ih(0.0, 0.5);
        for (std::size_t i = 0; i < v.c.size(); ++i) {
            std::complex<double> a = 0.0;
            if (i + 1 < v.c.size()) a += ih * ladder[i] * v.c[i + 1];
            if (i > 0) a -= ih * ladder[i - 1] * v.c[i - 1];
            out.c[i] = a;
        }
        return out;
    }
};

/** @brief Spin-coherent state along +x: c_M = 2^{-S} sqrt(binom(2S, S+M)). */
inline DickeState coherent_plus_x_state(int N) {
    if (N < 1) throw std::invalid_argument("coherent_plus_x_state: N must be >= 1");
    DickeState psi;
    psi.c.resize(N + 1);
    double lbin = 0.0;
    const double lhalf = -0.5 * static_cast<double>(N) * std::log(2.0);
    for (int k = 0; k <= N; ++k) {
        if (k > 0) lbin += std::log(static_cast<double>(N - k + 1) / static_cast<double>(k));
        psi.c[k] = std::exp(0.5 * lbin + lhalf);
    }
    return psi;
}

/** @brief Magnetization, both variance readings, and the Bloch vector of a sector state. */
inline QuantumObservables observables(const DickeState& psi, int N) {
    const double S = N / 2.0;
    double nrm = 0.0, sz = 0.0, sz2 = 0.0, sx = 0.0, sy = 0.0;
    const int dim = static_cast<int>(psi.c.size());
    for (int i = 0; i < dim; ++i) {
        double M = i - S;
        double p = std::norm(psi.c[i]);
        nrm += p;
        sz += p * M;
        sz2 += p * M * M;
    }
    for (int i = 0; i + 1 < dim; ++i) {
        double M = i - S;
        double cp = std::sqrt(S * (S + 1) - M * (M + 1));
        std::complex<double> z = std::conj(psi.c[i]) * psi.c[i + 1];
        sx += cp * z.real();
        sy -= cp * z.imag();
    }
    sz /= nrm;
    sz2 /= nrm;
    sx /= nrm;
    sy /= nrm;
    QuantumObservables o;
    o.m = 2.0 * sz / N;
    o.dm2_literal = o.m * o.m;
    o.dm2_fluct = 4.0 * (sz2 - sz * sz) / (static_cast<double>(N) * N);
    o.bloch = {2.0 * sx / N, 2.0 * sy / N, 2.0 * sz / N};
    return o;
}

struct QuantumTrajectory {
    std::vector<TrajectoryRow> rows;
    DickeState final_state;
    long long steps_used = 0;
    double max_norm_drift = 0.0;
};

namespace detail {

inline TrajectoryRow make_row(double t, const QuantumObservables& o) {
    return {t, o.m, o.dm2_literal, o.dm2_fluct, o.bloch[0], o.bloch[1], o.bloch[2]};
}

/**
 * @brief Apply azz Sz^2 + az Sz + ax Sx + ay Sy to p (tridiagonal in the M basis),
 *        writing into out; arrays are interleaved (re, im) pairs of length dim.
 */
inline void apply_collective(const DickeCoeffs& c, const double* diagM, const double* cp,
                             int dim, const double* p, double* out) {
    const double wxr = 0.5 * c.ax;
    const double wyi = 0.5 * c.ay;
    for (int i = 0; i < dim; ++i) {
        double dg = (c.azz * diagM[i] + c.az) * diagM[i];
        double re = dg * p[2 * i];
        double im = dg * p[2 * i + 1];
        if (i + 1 < dim) {
            double wr = wxr * cp[i], wi = wyi * cp[i];
            re += wr * p[2 * i + 2] - wi * p[2 * i + 3];
            im += wr * p[2 * i + 3] + wi * p[2 * i + 2];
        }
        if (i > 0) {
            double wr = wxr * cp[i - 1], wi = -wyi * cp[i - 1];
            re += wr * p[2 * i - 2] - wi * p[2 * i - 1];
            im += wr * p[2 * i - 1] + wi * p[2 * i - 2];
        }
        out[2 * i] = re;
        out[2 * i + 1] = im;
    }
}

} // namespace detail

/**
 * @brief Fixed-step RK4 for i d/dt psi = H(t) psi in an (N+1)-dimensional spin sector.
 *
 * Each step subtracts the instantaneous mean energy (a Rayleigh quotient) so only
 * the spectral width matters for stability; the step count is raised to keep
 * dt times twice the width bound below 2.5, inside the RK4 imaginary-axis
 * stability interval. The width bound is the grid maximum of
 * |azz| S^2 + |az| S + (|ax| + |ay|) S.
 *
 * The norm is tracked, never rescaled; drift beyond 1e-6 raises NormDrift.
 */
template <class CoeffFn>
QuantumTrajectory evolve_dicke(CoeffFn&& cfun, int N, double T, long long user_steps,
                               int samples, const DickeState* start = nullptr) {
    if (N < 1) throw std::invalid_argument("evolve_dicke: N must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("evolve_dicke: T must be > 0");
    if (samples < 1) throw std::invalid_argument("evolve_dicke: samples must be >= 1");
    const int dim = N + 1;
    const double S = N / 2.0;
    std::vector<double> diagM(dim), cp(dim - 1);
    for (int i = 0; i < dim; ++i) diagM[i] = i - S;
    for (int i = 0; i + 1 < dim; ++i)
        cp[i] = std::sqrt(S * (S + 1) - diagM[i] * (diagM[i] + 1));

    double width = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        DickeCoeffs c = cfun(T * k / 2000.0);
        width = std::max(width,
                         std::abs(c.azz) * S * S + std::abs(c.az) * S +
                             (std::abs(c.ax) + std::abs(c.ay)) * S);
    }
    long long steps = std::max<long long>(
        user_steps, static_cast<long long>(std::ceil(T * 2.0 * width / 2.5)));
    steps = (steps + samples - 1) / samples * samples;
    const long long rec = steps / samples;
    const double dt = T / static_cast<double>(steps);

    DickeState psi = start ? *start : coherent_plus_x_state(N);
    if (static_cast<int>(psi.c.size()) != dim)
        throw std::invalid_argument("evolve_dicke: start state has wrong dimension");

    QuantumTrajectory traj;
    traj.steps_used = steps;
    traj.rows.reserve(samples + 1);
    traj.rows.push_back(detail::make_row(0.0, observables(psi, N)));

    const std::size_t len = 2 * static_cast<std::size_t>(dim);
    std::vector<double> hp(len), kv(len), stage(len), acc(len);
    double* ps = reinterpret_cast<double*>(psi.c.data());

    auto dot_re = [len](const double* a, const double* b) {
        double r = 0.0;
        for (std::size_t i = 0; i < len; i += 2)
            r += a[i] * b[i] + a[i + 1] * b[i + 1];
        return r;
    };

    for (long long k = 0; k < steps; ++k) {
        double t = k * dt;
        DickeCoeffs c1 = cfun(t);
        DickeCoeffs c2 = cfun(t + 0.5 * dt);
        DickeCoeffs c4 = cfun(t + dt);

        detail::apply_collective(c1, diagM.data(), cp.data(), dim, ps, hp.data());
        double E = dot_re(ps, hp.data()) / dot_re(ps, ps);

        // k1 = -i (hp - E psi); acc = k1; stage = psi + dt/2 k1
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * ps[i];
            double gi = hp[i + 1] - E * ps[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] = kv[i];
            acc[i + 1] = kv[i + 1];
            stage[i] = ps[i] + 0.5 * dt * kv[i];
            stage[i + 1] = ps[i + 1] + 0.5 * dt * kv[i + 1];
        }
        detail::apply_collective(c2, diagM.data(), cp.data(), dim, stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] += 2.0 * kv[i];
            acc[i + 1] += 2.0 * kv[i + 1];
            stage[i] = ps[i] + 0.5 * dt * kv[i];
            stage[i + 1] = ps[i + 1] + 0.5 * dt * kv[i + 1];
        }
        detail::apply_collective(c2, diagM.data(), cp.data(), dim, stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] += 2.0 * kv[i];
            acc[i + 1] += 2.0 * kv[i + 1];
            stage[i] = ps[i] + dt * kv[i];
            stage[i + 1] = ps[i + 1] + dt * kv[i + 1];
        }
        detail::apply_collective(c4, diagM.data(), cp.data(), dim, stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            acc[i] += gi;
            acc[i + 1] -= gr;
            ps[i] += dt / 6.0 * acc[i];
            ps[i + 1] += dt / 6.0 * acc[i + 1];
        }

        double drift = std::abs(std::sqrt(dot_re(ps, ps)) - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > 1e-6) throw NormDrift(drift, (k + 1) * dt);
        if ((k + 1) % rec == 0)
            traj.rows.push_back(detail::make_row((k + 1) * dt, observables(psi, N)));
    }
    traj.final_state = std::move(psi);
    return traj;
}

/**
 * @brief Schrodinger evolution of the infinite-range model in the S = N/2 sector,
 *        H = -f (2J/N) Sz^2 - 2 f h Sz - 2 Gamma_x Sx - 2 Gamma_y Sy,
 *        from the +x spin-coherent state.
 */
inline QuantumTrajectory evolve_quantum(const DriveSchedule& drive, const ModelParams& p,
                                        long long steps = 20000, int samples = 200) {
    p.check();
    if (p.N > 10000) throw DimensionOverflow(p.N, 10000);
    if (drive.kind == ScheduleKind::single_spin)
        throw std::invalid_argument(
            "evolve_quantum: single-spin drives evolve via evolve_two_level");
    auto cfun = [&](double t) { return dicke_coefficients(sample_drive(drive, t), p); };
    return evolve_dicke(cfun, static_cast<int>(p.N), p.T, steps, samples);
}

/**
 * @brief Two-level evolution for a single-spin drive, H = Gamma Sx + h_z Sz,
 *        from the -x state (the instantaneous ground state at t = 0).
 */
inline QuantumTrajectory evolve_two_level(const DriveSchedule& drive, const ModelParams& p,
                                          long long steps = 20000, int samples = 200) {
    p.check();
    if (p.N != 1)
        throw std::invalid_argument("evolve_two_level: N must be 1");
    if (drive.kind != ScheduleKind::single_spin)
        throw std::invalid_argument("evolve_two_level: drive must be a single-spin schedule");
    auto cfun = [&](double t) {
        DriveSample d = sample_drive(drive, t);
        return DickeCoeffs{0.0, d.h_z, d.gamma_x, 0.0};
    };
    DickeState minus_x;
    const double r = 1.0 / std::sqrt(2.0);
    minus_x.c = {r, -r};
    return evolve_dicke(cfun, 1, p.T, steps, samples, &minus_x);
}

struct FullTrajectory {
    std::vector<TrajectoryRow> rows;
    std::vector<std::vector<double>> site_z;
    std::vector<std::complex<double>> final_state;
    long long steps_used = 0;
    double max_norm_drift = 0.0;
};

namespace detail {

/**
 * @brief Apply the general Ising Hamiltonian
 *        -f [ (1/2) sum_ij J_ij s_i s_j + sum_i h_i s_i ] - Gx sum sx - Gy sum sy + b . sum sigma
 *        in the 2^n basis; arrays are interleaved (re, im) pairs.
 */
inline void apply_full(double f, double cx, double cy, double bz, const double* e0,
                       const double* sumz, int n, std::size_t D, const double* p,
                       double* out) {
    for (std::size_t s = 0; s < D; ++s) {
        double dg = -f * e0[s] + bz * sumz[s];
        double re = dg * p[2 * s];
        double im = dg * p[2 * s + 1];
        for (int i = 0; i < n; ++i) {
            std::size_t r = s ^ (std::size_t{1} << i);
            double zi = ((s >> i) & 1u) ? -1.0 : 1.0;
            double ar = cx, ai = -cy * zi;
            re += ar * p[2 * r] - ai * p[2 * r + 1];
            im += ar * p[2 * r + 1] + ai * p[2 * r];
        }
        out[2 * s] = re;
        out[2 * s + 1] = im;
    }
}

} // namespace detail

/**
 * @brief Exact 2^n evolution with per-sample site-resolved observables.
 *
 * dfun(t) supplies the drive sample; bfun(t) a uniform perturbing field added
 * as b . sum_i sigma_i. Uses the same mean-energy-shifted RK4 and step rule as
 * the sector solver so matched runs integrate identical dynamics.
 */
template <class DriveFn, class BFn>
FullTrajectory evolve_full_core(const CouplingMatrix& cpl, DriveFn&& dfun, BFn&& bfun,
                                double T, long long user_steps, int samples) {
    cpl.check();
    const int n = cpl.N;
    if (n < 1) throw std::invalid_argument("evolve_full_core: N must be >= 1");
    if (n > 12) throw DimensionOverflow(n, 12);
    if (samples < 1) throw std::invalid_argument("evolve_full_core: samples must be >= 1");
    const std::size_t D = std::size_t{1} << n;

    std::vector<double> e0(D), sumz(D);
    double e0max = 0.0;
    for (std::size_t s = 0; s < D; ++s) {
        double acc = 0.0, zsum = 0.0;
        for (int i = 0; i < n; ++i) {
            double zi = ((s >> i) & 1u) ? -1.0 : 1.0;
            zsum += zi;
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                double zj = ((s >> j) & 1u) ? -1.0 : 1.0;
                row += cpl.at(i, j) * zj;
            }
            acc += 0.5 * zi * row + cpl.h[i] * zi;
        }
        e0[s] = acc;
        sumz[s] = zsum;
        e0max = std::max(e0max, std::abs(acc));
    }

    struct Fields {
        double f, cx, cy, bz;
    };
    auto fields_at = [&](double t) {
        DriveSample d = dfun(t);
        std::array<double, 3> b = bfun(t);
        return Fields{d.f, -d.gamma_x + b[0], -d.gamma_y + b[1], b[2]};
    };

    double width = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        Fields fl = fields_at(T * k / 2000.0);
        width = std::max(width, std::abs(fl.f) * e0max + std::abs(fl.bz) * n +
                                    (std::abs(fl.cx) + std::abs(fl.cy)) * n);
    }
    long long steps = std::max<long long>(
        user_steps, static_cast<long long>(std::ceil(T * 2.0 * width / 2.5)));
    steps = (steps + samples - 1) / samples * samples;
    const long long rec = steps / samples;
    const double dt = T / static_cast<double>(steps);

    std::vector<std::complex<double>> psi(D, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
    const std::size_t len = 2 * D;
    std::vector<double> hp(len), kv(len), stage(len), acc(len);
    double* ps = reinterpret_cast<double*>(psi.data());

    auto dot_re = [len](const double* a, const double* b) {
        double r = 0.0;
        for (std::size_t i = 0; i < len; i += 2)
            r += a[i] * b[i] + a[i + 1] * b[i + 1];
        return r;
    };

    FullTrajectory traj;
    traj.steps_used = steps;

    auto observe = [&](double t) {
        double nrm = 0.0, szt = 0.0, sz2 = 0.0;
        std::vector<double> zi(n, 0.0);
        double sxt = 0.0, syt = 0.0;
        for (std::size_t s = 0; s < D; ++s) {
            double w = ps[2 * s] * ps[2 * s] + ps[2 * s + 1] * ps[2 * s + 1];
            nrm += w;
            szt += w * 0.5 * sumz[s];
            sz2 += w * 0.25 * sumz[s] * sumz[s];
            for (int i = 0; i < n; ++i) {
                double z = ((s >> i) & 1u) ? -1.0 : 1.0;
                zi[i] += w * z;
                std::size_t r = s ^ (std::size_t{1} << i);
                double cr = ps[2 * s] * ps[2 * r] + ps[2 * s + 1] * ps[2 * r + 1];
                double ci = ps[2 * s] * ps[2 * r + 1] - ps[2 * s + 1] * ps[2 * r];
                sxt += 0.5 * cr;
                syt += 0.5 * z * ci;
            }
        }
        for (auto& z : zi) z /= nrm;
        szt /= nrm;
        sz2 /= nrm;
        sxt /= nrm;
        syt /= nrm;
        double mavg = 0.0, d2 = 0.0;
        for (double z : zi) {
            mavg += z;
            d2 += z * z;
        }
        mavg /= n;
        d2 /= n;
        TrajectoryRow row{t,
                          mavg,
                          d2,
                          4.0 * (sz2 - szt * szt) / (static_cast<double>(n) * n),
                          2.0 * sxt / n,
                          2.0 * syt / n,
                          2.0 * szt / n};
        traj.rows.push_back(row);
        traj.site_z.push_back(std::move(zi));
    };
    observe(0.0);

    for (long long k = 0; k < steps; ++k) {
        double t = k * dt;
        Fields f1 = fields_at(t);
        Fields f2 = fields_at(t + 0.5 * dt);
        Fields f4 = fields_at(t + dt);

        detail::apply_full(f1.f, f1.cx, f1.cy, f1.bz, e0.data(), sumz.data(), n, D, ps,
                           hp.data());
        double E = dot_re(ps, hp.data()) / dot_re(ps, ps);

        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * ps[i];
            double gi = hp[i + 1] - E * ps[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] = kv[i];
            acc[i + 1] = kv[i + 1];
            stage[i] = ps[i] + 0.5 * dt * kv[i];
            stage[i + 1] = ps[i + 1] + 0.5 * dt * kv[i + 1];
        }
        detail::apply_full(f2.f, f2.cx, f2.cy, f2.bz, e0.data(), sumz.data(), n, D,
                           stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] += 2.0 * kv[i];
            acc[i + 1] += 2.0 * kv[i + 1];
            stage[i] = ps[i] + 0.5 * dt * kv[i];
            stage[i + 1] = ps[i + 1] + 0.5 * dt * kv[i + 1];
        }
        detail::apply_full(f2.f, f2.cx, f2.cy, f2.bz, e0.data(), sumz.data(), n, D,
                           stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            kv[i] = gi;
            kv[i + 1] = -gr;
            acc[i] += 2.0 * kv[i];
            acc[i + 1] += 2.0 * kv[i + 1];
            stage[i] = ps[i] + dt * kv[i];
            stage[i + 1] = ps[i + 1] + dt * kv[i + 1];
        }
        detail::apply_full(f4.f, f4.cx, f4.cy, f4.bz, e0.data(), sumz.data(), n, D,
                           stage.data(), hp.data());
        for (std::size_t i = 0; i < len; i += 2) {
            double gr = hp[i] - E * stage[i];
            double gi = hp[i + 1] - E * stage[i + 1];
            acc[i] += gi;
            acc[i + 1] -= gr;
            ps[i] += dt / 6.0 * acc[i];
            ps[i + 1] += dt / 6.0 * acc[i + 1];
        }

        double drift = std::abs(std::sqrt(dot_re(ps, ps)) - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > 1e-6) throw NormDrift(drift, (k + 1) * dt);
        if ((k + 1) % rec == 0) observe((k + 1) * dt);
    }
    traj.final_state = std::move(psi);
    return traj;
}

/** @brief Exact 2^N evolution of a general Ising instance under a drive schedule. */
inline FullTrajectory evolve_full_hilbert(const CouplingMatrix& cpl, const DriveSchedule& drive,
                                          long long steps = 20000, int samples = 200) {
    return evolve_full_core(
        cpl, [&](double t) { return sample_drive(drive, t); },
        [](double) { return std::array<double, 3>{0.0, 0.0, 0.0}; }, drive.params.T, steps,
        samples);
}

} // namespace sta
