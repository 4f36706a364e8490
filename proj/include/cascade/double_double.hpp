#pragma once

// Unevaluated sum of two doubles (hi + lo, |lo| <= ulp(hi)/2), giving roughly
// 32 significant decimal digits. Error-free transformations follow Dekker and
// Knuth; the transcendental functions use argument reduction plus Taylor
// series, which is enough for the Gram and Duhamel kernels built on top.

#include <cmath>
#include <compare>
#include <limits>

namespace cascade {

class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT: implicit by design of the arithmetic
    constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    constexpr double to_double() const { return hi_ + lo_; }
    explicit constexpr operator double() const { return hi_ + lo_; }

    static DoubleDouble two_sum(double a, double b) {
        const double s = a + b;
        const double bb = s - a;
        const double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }

    static DoubleDouble fast_two_sum(double a, double b) {
        const double s = a + b;
        return {s, b - (s - a)};
    }

    static DoubleDouble two_prod(double a, double b) {
        const double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    friend DoubleDouble operator-(DoubleDouble x) { return {-x.hi_, -x.lo_}; }

    friend DoubleDouble operator+(DoubleDouble x, DoubleDouble y) {
        DoubleDouble s = two_sum(x.hi_, y.hi_);
        DoubleDouble t = two_sum(x.lo_, y.lo_);
        double c = s.lo_ + t.hi_;
        DoubleDouble v = fast_two_sum(s.hi_, c);
        double w = t.lo_ + v.lo_;
        return fast_two_sum(v.hi_, w);
    }
    friend DoubleDouble operator-(DoubleDouble x, DoubleDouble y) { return x + (-y); }

    friend DoubleDouble operator*(DoubleDouble x, DoubleDouble y) {
        DoubleDouble c = two_prod(x.hi_, y.hi_);
        double t = x.lo_ * y.lo_;
        t = std::fma(x.hi_, y.lo_, t);
        t = std::fma(x.lo_, y.hi_, t);
        return fast_two_sum(c.hi_, c.lo_ + t);
    }

    friend DoubleDouble operator/(DoubleDouble x, DoubleDouble y) {
        // Long division: two correction steps on the leading quotient.
        const double q1 = x.hi_ / y.hi_;
        DoubleDouble r = x - y * DoubleDouble(q1);
        const double q2 = r.hi_ / y.hi_;
        r = r - y * DoubleDouble(q2);
        const double q3 = r.hi_ / y.hi_;
        DoubleDouble q = fast_two_sum(q1, q2);
        return q + DoubleDouble(q3);
    }

    DoubleDouble& operator+=(DoubleDouble y) { return *this = *this + y; }
    DoubleDouble& operator-=(DoubleDouble y) { return *this = *this - y; }
    DoubleDouble& operator*=(DoubleDouble y) { return *this = *this * y; }
    DoubleDouble& operator/=(DoubleDouble y) { return *this = *this / y; }

    friend bool operator==(DoubleDouble x, DoubleDouble y) { return x.hi_ == y.hi_ && x.lo_ == y.lo_; }
    friend std::partial_ordering operator<=>(DoubleDouble x, DoubleDouble y) {
        if (auto c = x.hi_ <=> y.hi_; c != 0) return c;
        return x.lo_ <=> y.lo_;
    }

    static constexpr double epsilon() { return 4.93038065763132e-32; }  // 2^-104

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

namespace dd_constants {
inline constexpr DoubleDouble pi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr DoubleDouble two_pi{6.283185307179586, 2.4492935982947064e-16};
inline constexpr DoubleDouble half_pi{1.5707963267948966, 6.123233995736766e-17};
inline constexpr DoubleDouble ln2{0.6931471805599453, 2.3190468138462996e-17};
}  // namespace dd_constants

inline DoubleDouble abs(DoubleDouble x) { return x.hi() < 0.0 ? -x : x; }

inline DoubleDouble ldexp(DoubleDouble x, int e) { return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)}; }

inline DoubleDouble sqrt(DoubleDouble x) {
    if (x.hi() <= 0.0) return DoubleDouble(x.hi() == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
    const double s = std::sqrt(x.hi());
    // One Newton step from the double estimate doubles the number of correct bits.
    DoubleDouble sd(s);
    return sd + (x - sd * sd) / DoubleDouble(2.0 * s);
}

inline DoubleDouble round_nearest(DoubleDouble x) {
    double h = std::nearbyint(x.hi());
    if (h == x.hi()) {
        double l = std::nearbyint(x.lo());
        return DoubleDouble::fast_two_sum(h, l);
    }
    // hi not integral; lo cannot move it across a half-integer except at ties.
    if (std::abs(h - x.hi()) == 0.5 && x.lo() != 0.0) h = x.lo() > 0.0 ? std::ceil(x.hi()) : std::floor(x.hi());
    return DoubleDouble(h);
}

namespace detail {

// e^r - 1 for |r| small, by Taylor series.
inline DoubleDouble expm1_series(DoubleDouble r) {
    DoubleDouble term = r;
    DoubleDouble sum = r;
    for (int k = 2; k < 40; ++k) {
        term = term * r / DoubleDouble(static_cast<double>(k));
        sum += term;
        if (std::abs(term.hi()) < 1e-34 * std::abs(sum.hi())) break;
    }
    return sum;
}

}  // namespace detail

inline DoubleDouble exp(DoubleDouble a) {
    if (a.hi() > 709.7) return DoubleDouble(std::numeric_limits<double>::infinity());
    if (a.hi() < -745.2) return DoubleDouble(0.0);
    if (a.hi() == 0.0) return DoubleDouble(1.0);
    const double k = std::nearbyint(a.hi() / dd_constants::ln2.hi());
    DoubleDouble r = a - dd_constants::ln2 * DoubleDouble(k);
    constexpr int squarings = 10;
    r = ldexp(r, -squarings);
    DoubleDouble s = detail::expm1_series(r);
    for (int i = 0; i < squarings; ++i) s = DoubleDouble(2.0) * s + s * s;  // (1+s)^2 - 1
    s += DoubleDouble(1.0);
    return ldexp(s, static_cast<int>(k));
}

inline DoubleDouble expm1(DoubleDouble a) {
    if (std::abs(a.hi()) < 0.5) {
        DoubleDouble r = ldexp(a, -4);
        DoubleDouble s = detail::expm1_series(r);
        for (int i = 0; i < 4; ++i) s = DoubleDouble(2.0) * s + s * s;
        return s;
    }
    return exp(a) - DoubleDouble(1.0);
}

namespace detail {

inline void sincos_reduced(DoubleDouble t, DoubleDouble& s, DoubleDouble& c) {
    // |t| <= pi/4
    const DoubleDouble t2 = t * t;
    DoubleDouble term = t;
    s = t;
    for (int k = 1; k < 30; ++k) {
        term = -term * t2 / DoubleDouble(static_cast<double>((2 * k) * (2 * k + 1)));
        s += term;
        if (std::abs(term.hi()) < 1e-35) break;
    }
    term = DoubleDouble(1.0);
    c = DoubleDouble(1.0);
    for (int k = 1; k < 30; ++k) {
        term = -term * t2 / DoubleDouble(static_cast<double>((2 * k - 1) * (2 * k)));
        c += term;
        if (std::abs(term.hi()) < 1e-35) break;
    }
}

}  // namespace detail

inline void sincos(DoubleDouble a, DoubleDouble& s, DoubleDouble& c) {
    DoubleDouble z = a - dd_constants::two_pi * round_nearest(a / dd_constants::two_pi);
    const double j = std::nearbyint(z.hi() / dd_constants::half_pi.hi());
    DoubleDouble t = z - dd_constants::half_pi * DoubleDouble(j);
    DoubleDouble st, ct;
    detail::sincos_reduced(t, st, ct);
    switch ((static_cast<int>(j) % 4 + 4) % 4) {
        case 0: s = st; c = ct; break;
        case 1: s = ct; c = -st; break;
        case 2: s = -st; c = -ct; break;
        default: s = -ct; c = st; break;
    }
}

inline DoubleDouble sin(DoubleDouble a) {
    DoubleDouble s, c;
    sincos(a, s, c);
    return s;
}

inline DoubleDouble cos(DoubleDouble a) {
    DoubleDouble s, c;
    sincos(a, s, c);
    return c;
}

inline double to_double(DoubleDouble x) { return x.to_double(); }
inline double to_double(double x) { return x; }

}  // namespace cascade
