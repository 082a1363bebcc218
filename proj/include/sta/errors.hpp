#pragma once

#include <stdexcept>
#include <string>

namespace sta {

/**
 * @brief Base class for all typed failures raised by the library.
 */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/**
 * @brief An Ising schedule whose phi polynomial crosses a multiple of pi
 *        at an interior time, so the designed field diverges there.
 */
class DivergentSchedule : public Error {
public:
    DivergentSchedule(double t_bad, double horizon)
        : Error("divergent schedule: sin(phi) vanishes at interior t = " +
                std::to_string(t_bad) + " of horizon T = " + std::to_string(horizon)),
          t(t_bad), T(horizon) {}
    double t;
    double T;
};

/**
 * @brief A designed drive coefficient exceeded the magnitude cap away from
 *        the endpoint limits.
 */
class SingularDrive : public Error {
public:
    SingularDrive(double t_bad, double magnitude)
        : Error("singular drive: |coefficient| = " + std::to_string(magnitude) +
                " exceeds 1e6 at t = " + std::to_string(t_bad)),
          t(t_bad), value(magnitude) {}
    double t;
    double value;
};

/**
 * @brief Mean-field design needs h > 0; the f denominator 2(J cos(theta) + h)
 *        vanishes at t = 0 otherwise.
 */
class RequiresLongitudinalField : public Error {
public:
    RequiresLongitudinalField()
        : Error("mean-field design requires a finite longitudinal field h > 0") {}
};

/**
 * @brief The per-site design equations disagree: no site-independent
 *        (Gamma, f) exists for the given angles and couplings.
 */
class SiteInconsistent : public Error {
public:
    explicit SiteInconsistent(double discrepancy)
        : Error("site-inconsistent design: max relative discrepancy " +
                std::to_string(discrepancy) + " across sites"),
          max_discrepancy(discrepancy) {}
    double max_discrepancy;
};

/**
 * @brief State norm drifted beyond tolerance during integration.
 */
class NormDrift : public Error {
public:
    NormDrift(double drift_seen, double t_at)
        : Error("norm drift " + std::to_string(drift_seen) +
                " exceeds 1e-6 at t = " + std::to_string(t_at)),
          drift(drift_seen), t(t_at) {}
    double drift;
    double t;
};

/**
 * @brief Requested Hilbert-space dimension exceeds the solver's cap.
 */
class DimensionOverflow : public Error {
public:
    DimensionOverflow(long n_requested, long n_cap)
        : Error("N = " + std::to_string(n_requested) +
                " exceeds the solver cap N = " + std::to_string(n_cap)),
          N(n_requested), cap(n_cap) {}
    long N;
    long cap;
};

/**
 * @brief Invalid run configuration (bad key, bad value, or an
 *        incompatible command/schedule combination).
 */
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace sta
