#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cosym/errors.hpp"

namespace cosym {

/// Second-order truncated Taylor scalar: value, gradient, and Hessian with
/// respect to m seed variables. Arithmetic on Jet propagates derivatives
/// exactly (to machine precision), so Hessians of composite expressions need
/// no finite differencing.
///
/// The seed dimension m is dynamic; all operands of a binary operation must
/// share it. Seeding a coordinate i gives value x_i, gradient e_i, zero
/// Hessian.
class Jet {
public:
    Jet() : m_(0), val_(0.0) {}

    /// Constant (zero derivatives) in an m-variable jet space.
    Jet(double value, std::size_t m)
        : m_(m), val_(value), grad_(m, 0.0), hess_(m * m, 0.0) {}

    /// Seed variable i of m.
    static Jet variable(double value, std::size_t i, std::size_t m) {
        Jet j(value, m);
        j.grad_[i] = 1.0;
        return j;
    }

    std::size_t dim() const { return m_; }
    double value() const { return val_; }
    const std::vector<double>& grad() const { return grad_; }
    double grad(std::size_t i) const { return grad_[i]; }
    /// Hessian entry (i, j); stored row-major and kept symmetric.
    double hess(std::size_t i, std::size_t j) const { return hess_[i * m_ + j]; }
    const std::vector<double>& hess_data() const { return hess_; }

    bool finite() const {
        if (!std::isfinite(val_)) return false;
        for (double g : grad_)
            if (!std::isfinite(g)) return false;
        for (double h : hess_)
            if (!std::isfinite(h)) return false;
        return true;
    }

    Jet operator-() const {
        Jet r(*this);
        r.val_ = -r.val_;
        for (auto& g : r.grad_) g = -g;
        for (auto& h : r.hess_) h = -h;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        check(o);
        val_ += o.val_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        val_ -= o.val_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
        return *this;
    }
    Jet& operator+=(double c) { val_ += c; return *this; }
    Jet& operator-=(double c) { val_ -= c; return *this; }
    Jet& operator*=(double c) {
        val_ *= c;
        for (auto& g : grad_) g *= c;
        for (auto& h : hess_) h *= c;
        return *this;
    }
    Jet& operator/=(double c) { return (*this) *= (1.0 / c); }

    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double c) { a += c; return a; }
    friend Jet operator+(double c, Jet a) { a += c; return a; }
    friend Jet operator-(Jet a, double c) { a -= c; return a; }
    friend Jet operator-(double c, const Jet& a) { return (-a) + c; }
    friend Jet operator*(Jet a, double c) { a *= c; return a; }
    friend Jet operator*(double c, Jet a) { a *= c; return a; }
    friend Jet operator/(Jet a, double c) { a /= c; return a; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        const std::size_t m = a.m_;
        Jet r(a.val_ * b.val_, m);
        for (std::size_t i = 0; i < m; ++i)
            r.grad_[i] = a.grad_[i] * b.val_ + a.val_ * b.grad_[i];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                r.hess_[i * m + j] = a.hess_[i * m + j] * b.val_ +
                                     a.val_ * b.hess_[i * m + j] +
                                     a.grad_[i] * b.grad_[j] +
                                     a.grad_[j] * b.grad_[i];
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.recip(); }
    friend Jet operator/(double c, const Jet& b) { return b.recip() * c; }

    /// Composition with a univariate function given by f(v), f'(v), f''(v).
    Jet compose(double f, double df, double d2f) const {
        const std::size_t m = m_;
        Jet r(f, m);
        for (std::size_t i = 0; i < m; ++i) r.grad_[i] = df * grad_[i];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                r.hess_[i * m + j] =
                    df * hess_[i * m + j] + d2f * grad_[i] * grad_[j];
        return r;
    }

    Jet recip() const {
        const double v = 1.0 / val_;
        return compose(v, -v * v, 2.0 * v * v * v);
    }

private:
    void check(const Jet& o) const {
        if (m_ != o.m_)
            throw DimensionError("jet seed dimensions differ");
    }

    std::size_t m_;
    double val_;
    std::vector<double> grad_;
    std::vector<double> hess_; // row-major m x m, symmetric
};

inline Jet sin(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(s, c, -s);
}
inline Jet cos(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(c, -s, -c);
}
inline Jet exp(const Jet& x) {
    const double e = std::exp(x.value());
    return x.compose(e, e, e);
}
inline Jet log(const Jet& x) {
    const double v = x.value();
    return x.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet sqrt(const Jet& x) {
    const double s = std::sqrt(x.value());
    return x.compose(s, 0.5 / s, -0.25 / (s * x.value()));
}
/// x^(-3/2), the radial falloff of gravitational force terms.
inline Jet powm32(const Jet& x) {
    const double v = x.value();
    const double p = std::pow(v, -1.5);
    return x.compose(p, -1.5 * p / v, 3.75 * p / (v * v));
}
inline Jet pow(const Jet& x, int k) {
    if (k == 0) return Jet(1.0, x.dim());
    if (k == 1) return x;
    const double v = x.value();
    const double p = std::pow(v, k);
    return x.compose(p, k * std::pow(v, k - 1),
                     k * (k - 1) * std::pow(v, k - 2));
}
inline Jet sq(const Jet& x) { return x * x; }

/// Plain carrier for a second-order evaluation: value, gradient of length m,
/// symmetric m x m Hessian (row-major).
struct Jet2 {
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<double> hessian;

    std::size_t dim() const { return gradient.size(); }
    double hess(std::size_t i, std::size_t j) const {
        return hessian[i * gradient.size() + j];
    }

    static Jet2 from(const Jet& j) {
        return Jet2{j.value(), j.grad(), j.hess_data()};
    }
};

} // namespace cosym
