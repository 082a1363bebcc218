#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sta/poly.hpp"

namespace sta {

/**
 * @brief Parameters of the infinite-range transverse-field Ising model
 *        (hbar = 1, energies in units of J).
 */
struct ModelParams {
    double J = 1.0;
    double h = 0.1;
    double Gamma0 = 1.0;
    double T = 10.0;
    long N = 4000;

    void check() const {
        if (!(J >= 0.0)) throw std::invalid_argument("ModelParams: J must be >= 0");
        if (!(h >= 0.0)) throw std::invalid_argument("ModelParams: h must be >= 0");
        if (!(Gamma0 > 0.0)) throw std::invalid_argument("ModelParams: Gamma0 must be > 0");
        if (!(T > 0.0)) throw std::invalid_argument("ModelParams: T must be > 0");
        if (N < 1) throw std::invalid_argument("ModelParams: N must be >= 1");
    }
};

/**
 * @brief Hamiltonian coefficients at one time: transverse fields, the Ising
 *        coefficient f, and the single-spin longitudinal field h_z.
 */
struct DriveSample {
    double t = 0.0;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double f = 0.0;
    double h_z = 0.0;
};

/** @brief Classical unit 3-vector for mean-field dynamics. */
struct BlochState {
    double n[3] = {1.0, 0.0, 0.0};
};

/**
 * @brief Couplings of the general Ising model: symmetric J_ij, per-site
 *        longitudinal fields h_i, and optional spin signs xi_i.
 */
struct CouplingMatrix {
    long N = 0;
    std::vector<double> J;  // row-major N x N
    std::vector<double> h;  // length N
    std::vector<int> xi;    // empty, or length N with entries +1/-1

    double at(long i, long j) const { return J[static_cast<std::size_t>(i * N + j)]; }

    void check() const {
        if (N < 1) throw std::invalid_argument("CouplingMatrix: N must be >= 1");
        if (J.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N))
            throw std::invalid_argument("CouplingMatrix: J must be N x N");
        if (h.size() != static_cast<std::size_t>(N))
            throw std::invalid_argument("CouplingMatrix: h must have length N");
        for (long i = 0; i < N; ++i)
            for (long j = i + 1; j < N; ++j)
                if (at(i, j) != at(j, i))
                    throw std::invalid_argument("CouplingMatrix: J must be symmetric");
        if (!xi.empty()) {
            if (xi.size() != static_cast<std::size_t>(N))
                throw std::invalid_argument("CouplingMatrix: xi must have length N");
            for (int s : xi)
                if (s != 1 && s != -1)
                    throw std::invalid_argument("CouplingMatrix: xi entries must be +1 or -1");
        }
    }
};

/** @brief Sinusoidal perturbation amplitudes along the comoving directions. */
struct PerturbationSpec {
    double h0_amp = 0.0;
    double hp_amp = 0.0;
    double omega = 10.0 * kPi;
};

/** @brief One checked endpoint condition of a schedule. */
struct BoundaryCheck {
    std::string name;
    double target = 0.0;
    double actual = 0.0;
    double residual = 0.0;
    bool pass = false;
};

/** @brief Result of verify_boundaries: every condition with its residual. */
struct Report {
    std::vector<BoundaryCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/** @brief One sampled trajectory row as emitted by the CLI. */
struct TrajectoryRow {
    double t = 0.0;
    double m = 0.0;
    double dm2_literal = 0.0;
    double dm2_fluct = 0.0;
    double n_x = 0.0;
    double n_y = 0.0;
    double n_z = 0.0;
};

/** @brief Amplitudes over |S = N/2, M>, stored at index m = M + N/2. */
struct DickeState {
    std::vector<std::complex<double>> c;

    long dim() const { return static_cast<long>(c.size()); }
};

} // namespace sta
