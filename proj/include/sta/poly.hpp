#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace sta {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kHalfPi = kPi / 2.0;

/**
 * @brief Leading term c*x^k + o(x^k) of a one-sided expansion at x -> 0+.
 *
 * The identically-zero expansion is encoded with k = kZeroOrder.
 */
struct LeadingTerm {
    double c = 0.0;
    int k = 0;
};

inline constexpr int kZeroOrder = 1 << 20;

inline LeadingTerm lt_zero() { return {0.0, kZeroOrder}; }
inline bool lt_is_zero(const LeadingTerm& a) { return a.k >= kZeroOrder; }

inline LeadingTerm lt_mul(const LeadingTerm& a, const LeadingTerm& b) {
    if (lt_is_zero(a) || lt_is_zero(b)) return lt_zero();
    return {a.c * b.c, a.k + b.k};
}

inline LeadingTerm lt_div(const LeadingTerm& a, const LeadingTerm& b) {
    if (lt_is_zero(a)) return lt_zero();
    return {a.c / b.c, a.k - b.k};
}

inline LeadingTerm lt_scale(double s, const LeadingTerm& a) {
    if (s == 0.0 || lt_is_zero(a)) return lt_zero();
    return {s * a.c, a.k};
}

inline LeadingTerm lt_add(const LeadingTerm& a, const LeadingTerm& b) {
    if (lt_is_zero(a)) return b;
    if (lt_is_zero(b)) return a;
    if (a.k < b.k) return a;
    if (b.k < a.k) return b;
    double c = a.c + b.c;
    if (c == 0.0) return lt_zero();
    return {c, a.k};
}

/**
 * @brief An angle decomposed as q*(pi/2) + r with the quadrant handled
 *        exactly, so trig of angles pinned to multiples of pi/2 keeps full
 *        relative accuracy as r -> 0.
 */
struct QuadrantValue {
    int q = 0;
    double r = 0.0;
};

inline int quadrant_sin(int q) {
    static constexpr int table[4] = {0, 1, 0, -1};
    return table[((q % 4) + 4) % 4];
}

inline int quadrant_cos(int q) { return quadrant_sin(q + 1); }

inline double qsin(const QuadrantValue& a) {
    switch (((a.q % 4) + 4) % 4) {
        case 0: return std::sin(a.r);
        case 1: return std::cos(a.r);
        case 2: return -std::sin(a.r);
        default: return -std::cos(a.r);
    }
}

inline double qcos(const QuadrantValue& a) { return qsin({a.q + 1, a.r}); }

/**
 * @brief Leading term of sin(q*(pi/2) + r) at an endpoint where r has the
 *        given leading term.
 */
inline LeadingTerm lt_sin(int q, const LeadingTerm& r) {
    if (!lt_is_zero(r) && r.k == 0) return {qsin({q, r.c}), 0};
    int sq = quadrant_sin(q);
    if (sq != 0) return {static_cast<double>(sq), 0};
    if (lt_is_zero(r)) return lt_zero();
    return {quadrant_cos(q) * r.c, r.k};
}

inline LeadingTerm lt_cos(int q, const LeadingTerm& r) { return lt_sin(q + 1, r); }

inline double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    if (c.size() > 1) {
        d.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    }
    return d;
}

enum class End { left, right };

/**
 * @brief Polynomial on s in [0,1] stored in both the s basis and the
 *        u = 1-s basis, with endpoint constants snapped to the nearest
 *        multiple of pi/2 when within 1e-9.
 *
 * Evaluation switches basis at s = 1/2, so values, derivatives, and the
 * quadrant residual keep full relative accuracy at both ends; transform
 * artifacts in the u basis (coefficients that vanish analytically) are
 * snapped to zero at 1e-11 of the coefficient scale.
 */
class BoundaryPoly {
public:
    BoundaryPoly() : BoundaryPoly(std::vector<double>{0.0}) {}

    explicit BoundaryPoly(std::vector<double> s_coeffs) : a_(std::move(s_coeffs)) {
        if (a_.empty()) a_.push_back(0.0);
        double scale = 0.0;
        for (double v : a_) scale = std::max(scale, std::abs(v));

        b_.assign(a_.size(), 0.0);
        std::vector<double> binom(a_.size(), 0.0);
        for (std::size_t k = 0; k < a_.size(); ++k) {
            for (std::size_t j = k + 1; j-- > 0;)
                binom[j] = (j == 0 || j == k) ? 1.0 : binom[j] + binom[j - 1];
            for (std::size_t j = 0; j <= k; ++j)
                b_[j] += a_[k] * binom[j] * ((j % 2 == 0) ? 1.0 : -1.0);
        }
        for (double& v : b_)
            if (std::abs(v) <= 1e-11 * scale) v = 0.0;

        ra_ = a_;
        rb_ = b_;
        snap_quadrant(ra_, q0_);
        snap_quadrant(rb_, q1_);

        da_ = poly_derivative(a_);
        db_ = poly_derivative(b_);
        dda_ = poly_derivative(da_);
        ddb_ = poly_derivative(db_);
    }

    /** Value at s, reconstructed as q*(pi/2) + r(s) in the nearer basis. */
    double value(double s) const {
        if (s <= 0.5) return q0_ * kHalfPi + horner(ra_, s);
        return q1_ * kHalfPi + horner(rb_, 1.0 - s);
    }

    /** d/ds at s. */
    double deriv(double s) const {
        if (s <= 0.5) return horner(da_, s);
        return -horner(db_, 1.0 - s);
    }

    /** d^2/ds^2 at s. */
    double deriv2(double s) const {
        if (s <= 0.5) return horner(dda_, s);
        return horner(ddb_, 1.0 - s);
    }

    /** Quadrant decomposition at s, split against the nearer endpoint. */
    QuadrantValue split(double s) const {
        if (s <= 0.5) return {q0_, horner(ra_, s)};
        return {q1_, horner(rb_, 1.0 - s)};
    }

    int quadrant(End e) const { return e == End::left ? q0_ : q1_; }

    /** Leading term of the quadrant residual r at the endpoint. */
    LeadingTerm offset_leading(End e) const {
        const std::vector<double>& r = (e == End::left) ? ra_ : rb_;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (r[j] != 0.0) return {r[j], static_cast<int>(j)};
        return lt_zero();
    }

    /**
     * Leading term of d(poly)/ds at the endpoint, expressed in the local
     * coordinate (x = s on the left, x = 1-s on the right, sign included).
     */
    LeadingTerm deriv_leading(End e) const {
        const std::vector<double>& d = (e == End::left) ? da_ : db_;
        double sign = (e == End::left) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d.size(); ++j)
            if (d[j] != 0.0) return {sign * d[j], static_cast<int>(j)};
        return lt_zero();
    }

    const std::vector<double>& scoeffs() const { return a_; }

    /** Coefficient-wise difference, for angle combinations like phi - gamma. */
    friend BoundaryPoly operator-(const BoundaryPoly& x, const BoundaryPoly& y) {
        std::vector<double> c(std::max(x.a_.size(), y.a_.size()), 0.0);
        for (std::size_t i = 0; i < x.a_.size(); ++i) c[i] += x.a_[i];
        for (std::size_t i = 0; i < y.a_.size(); ++i) c[i] -= y.a_[i];
        return BoundaryPoly(std::move(c));
    }

private:
    static void snap_quadrant(std::vector<double>& r, int& q) {
        double c = r[0];
        q = static_cast<int>(std::lround(c / kHalfPi));
        double residual = c - q * kHalfPi;
        if (std::abs(residual) <= 1e-9) residual = 0.0;
        r[0] = residual;
    }

    std::vector<double> a_, b_;
    std::vector<double> ra_, rb_;
    std::vector<double> da_, db_;
    std::vector<double> dda_, ddb_;
    int q0_ = 0, q1_ = 0;
};

} // namespace sta
