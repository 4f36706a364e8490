#pragma once

// Complex number stored as (log|z|, arg z). Zero is (-inf, 0).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace cascade {

class ScaledComplex {
public:
    ScaledComplex() = default;

    static ScaledComplex zero() { return {}; }

    static ScaledComplex from_log_phase(double log_magnitude, double phase) {
        ScaledComplex z;
        if (std::isinf(log_magnitude) && log_magnitude < 0.0) return z;
        z.log_magnitude_ = log_magnitude;
        z.phase_ = normalize_phase(phase);
        return z;
    }

    // sign * exp(log_magnitude) for a real quantity.
    static ScaledComplex from_log_sign(double log_magnitude, double sign) {
        if (sign == 0.0) return zero();
        return from_log_phase(log_magnitude, sign > 0.0 ? 0.0 : std::numbers::pi);
    }

    static ScaledComplex from_complex(std::complex<double> z) {
        if (z == std::complex<double>(0.0, 0.0)) return zero();
        return from_log_phase(std::log(std::abs(z)), std::arg(z));
    }

    static ScaledComplex from_real(double x) { return from_complex({x, 0.0}); }

    // value * exp(shift) where value is an ordinary complex number.
    static ScaledComplex from_scaled(std::complex<double> value, double shift) {
        ScaledComplex z = from_complex(value);
        if (!z.is_zero()) z.log_magnitude_ += shift;
        return z;
    }

    double log_magnitude() const { return log_magnitude_; }
    double phase() const { return phase_; }
    bool is_zero() const { return std::isinf(log_magnitude_) && log_magnitude_ < 0.0; }

    // exp(-shift) * z as an ordinary complex number.
    std::complex<double> scaled(double shift) const {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_magnitude_ - shift), phase_);
    }

    std::complex<double> to_complex() const { return scaled(0.0); }

    double real_part_sign() const {
        const double c = std::cos(phase_);
        return is_zero() ? 0.0 : (c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0));
    }

    ScaledComplex conj() const { return is_zero() ? zero() : from_log_phase(log_magnitude_, -phase_); }

    friend ScaledComplex operator-(const ScaledComplex& z) {
        return z.is_zero() ? zero() : from_log_phase(z.log_magnitude_, z.phase_ + std::numbers::pi);
    }

    friend ScaledComplex operator*(const ScaledComplex& x, const ScaledComplex& y) {
        if (x.is_zero() || y.is_zero()) return zero();
        return from_log_phase(x.log_magnitude_ + y.log_magnitude_, x.phase_ + y.phase_);
    }

    friend ScaledComplex operator/(const ScaledComplex& x, const ScaledComplex& y) {
        if (y.is_zero()) return from_log_phase(std::numeric_limits<double>::infinity(), x.phase_);
        if (x.is_zero()) return zero();
        return from_log_phase(x.log_magnitude_ - y.log_magnitude_, x.phase_ - y.phase_);
    }

    friend ScaledComplex operator+(const ScaledComplex& x, const ScaledComplex& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        const double shift = std::max(x.log_magnitude_, y.log_magnitude_);
        return from_scaled(x.scaled(shift) + y.scaled(shift), shift);
    }

    friend ScaledComplex operator-(const ScaledComplex& x, const ScaledComplex& y) { return x + (-y); }

    ScaledComplex& operator*=(const ScaledComplex& y) { return *this = *this * y; }
    ScaledComplex& operator+=(const ScaledComplex& y) { return *this = *this + y; }

    friend bool operator==(const ScaledComplex& x, const ScaledComplex& y) {
        return x.log_magnitude_ == y.log_magnitude_ && x.phase_ == y.phase_;
    }

    static double normalize_phase(double phase) {
        double p = std::remainder(phase, 2.0 * std::numbers::pi);
        if (p <= -std::numbers::pi) p += 2.0 * std::numbers::pi;
        return p;
    }

private:
    double log_magnitude_ = -std::numeric_limits<double>::infinity();
    double phase_ = 0.0;
};

// log|sinh x| and log cosh x for real x, valid for any magnitude.
inline double log_abs_sinh(double x) {
    const double a = std::abs(x);
    if (a < 1.0) return std::log(std::abs(std::sinh(x)));
    return a + std::log1p(-std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline ScaledComplex scaled_sinh(double x) {
    if (x == 0.0) return ScaledComplex::zero();
    return ScaledComplex::from_log_sign(log_abs_sinh(x), x);
}

inline ScaledComplex scaled_cosh(double x) { return ScaledComplex::from_log_sign(log_cosh(x), 1.0); }

}  // namespace cascade
