#pragma once

// Small dense complex linear algebra that works for both double and
// DoubleDouble. Eigen handles the double-only eigenvalue problems.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cascade/double_double.hpp"
#include "cascade/errors.hpp"

namespace cascade {

enum class Precision { Double, DoubleDouble };

inline std::string to_string(Precision p) { return p == Precision::Double ? "double" : "double-double"; }

inline Precision parse_precision(const std::string& s) {
    if (s == "double") return Precision::Double;
    if (s == "double-double" || s == "dd") return Precision::DoubleDouble;
    throw ConfigError("precision", "expected 'double' or 'double-double', got '" + s + "'");
}

template <class R>
struct Cx {
    R re{};
    R im{};

    Cx() = default;
    Cx(R r) : re(r), im(R(0.0)) {}  // NOLINT
    Cx(R r, R i) : re(r), im(i) {}
    static Cx from(std::complex<double> z) {
        return {R(z.real()), R(z.imag())};
    }
    std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }

    friend Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(Cx a) { return {-a.re, -a.im}; }
    friend Cx operator*(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend Cx operator*(R s, Cx a) { return {s * a.re, s * a.im}; }
    friend Cx operator/(Cx a, Cx b) {
        const R d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx& operator+=(Cx b) { return *this = *this + b; }
    Cx& operator-=(Cx b) { return *this = *this - b; }
    Cx conj() const { return {re, -im}; }
    R norm2() const { return re * re + im * im; }
};

template <class R>
struct CMatrix {
    int n = 0;
    std::vector<Cx<R>> data;

    CMatrix() = default;
    explicit CMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * size) {}
    Cx<R>& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
    const Cx<R>& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

template <class R>
Eigen::MatrixXcd to_eigen(const CMatrix<R>& a) {
    Eigen::MatrixXcd out(a.n, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) out(i, j) = a(i, j).to_std();
    return out;
}

namespace detail {

template <class R>
R real_abs(R x) {
    return x < R(0.0) ? -x : x;
}

}  // namespace detail

// LU factorization with partial pivoting of the real embedding
// [[Re A, -Im A], [Im A, Re A]], which avoids complex pivots in R.
template <class R>
class EmbeddedLU {
public:
    explicit EmbeddedLU(const CMatrix<R>& a) : n_(a.n), m_(2 * a.n), lu_(static_cast<std::size_t>(m_) * m_), piv_(m_) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const auto& z = a(i, j);
                at(i, j) = z.re;
                at(i, j + n_) = -z.im;
                at(i + n_, j) = z.im;
                at(i + n_, j + n_) = z.re;
            }
        for (int k = 0; k < m_; ++k) {
            int p = k;
            R best = detail::real_abs(at(k, k));
            for (int i = k + 1; i < m_; ++i) {
                R v = detail::real_abs(at(i, k));
                if (best < v) {
                    best = v;
                    p = i;
                }
            }
            piv_[k] = p;
            if (p != k)
                for (int j = 0; j < m_; ++j) std::swap(at(k, j), at(p, j));
            if (to_double(best) == 0.0) {
                singular_ = true;
                continue;
            }
            const R inv = R(1.0) / at(k, k);
            for (int i = k + 1; i < m_; ++i) {
                const R f = at(i, k) * inv;
                at(i, k) = f;
                if (to_double(f) == 0.0) continue;
                for (int j = k + 1; j < m_; ++j) at(i, j) -= f * at(k, j);
            }
        }
    }

    bool singular() const { return singular_; }

    std::vector<Cx<R>> solve(const std::vector<Cx<R>>& b) const {
        if (singular_) throw IllConditioned(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
        std::vector<R> x(m_);
        for (int i = 0; i < n_; ++i) {
            x[i] = b[i].re;
            x[i + n_] = b[i].im;
        }
        for (int k = 0; k < m_; ++k)
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
        for (int i = m_ - 1; i >= 0; --i) {
            for (int j = i + 1; j < m_; ++j) x[i] -= at(i, j) * x[j];
            x[i] = x[i] / at(i, i);
        }
        std::vector<Cx<R>> out(n_);
        for (int i = 0; i < n_; ++i) out[i] = {x[i], x[i + n_]};
        return out;
    }

    CMatrix<R> inverse() const {
        CMatrix<R> inv(n_);
        std::vector<Cx<R>> e(n_);
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) e[i] = Cx<R>(R(i == j ? 1.0 : 0.0));
            auto col = solve(e);
            for (int i = 0; i < n_; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

private:
    R& at(int i, int j) { return lu_[static_cast<std::size_t>(i) * m_ + j]; }
    const R& at(int i, int j) const { return lu_[static_cast<std::size_t>(i) * m_ + j]; }

    int n_;
    int m_;
    std::vector<R> lu_;
    std::vector<int> piv_;
    bool singular_ = false;
};

template <class R>
std::vector<Cx<R>> matvec(const CMatrix<R>& a, const std::vector<Cx<R>>& x) {
    std::vector<Cx<R>> y(a.n);
    for (int i = 0; i < a.n; ++i) {
        Cx<R> s;
        for (int j = 0; j < a.n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// Eigenvalues of the Hermitian part, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace cascade
