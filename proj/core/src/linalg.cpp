#include "cosym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cosym/errors.hpp"

namespace cosym {

Mat Mat::from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return Mat();
    Mat m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows_)
            throw DimensionError("from_columns: ragged input");
        for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vec Mat::column(std::size_t j) const {
    Vec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Vec Mat::row(std::size_t i) const {
    Vec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matmul shape mismatch");
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec operator*(const Mat& a, const Vec& x) {
    if (a.cols_ != x.size()) throw DimensionError("matvec shape mismatch");
    Vec y(a.rows_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
}

Mat operator+(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
}

Mat operator*(double s, Mat a) {
    for (auto& v : a.a_) v *= s;
    return a;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(double a, const Vec& x, const Vec& y) {
    Vec r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
    return r;
}

Vec scale(double a, Vec x) {
    for (auto& v : x) v *= a;
    return x;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Vec lu_solve(Mat a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw DimensionError("lu_solve needs square A matching b");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) < 1e-300)
            throw Error("lu_solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            std::swap(b[p], b[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

double lu_det(Mat a) {
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

Svd svd(const Mat& a) {
    // One-sided Jacobi on the columns; avoids forming A^T A so small singular
    // values are resolved accurately.
    const std::size_t m = a.rows(), n = a.cols();
    Mat u = a;
    Mat v = Mat::identity(n);
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += u(i, p) * u(i, p);
                    aqq += u(i, q) * u(i, q);
                    apq += u(i, p) * u(i, q);
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0)
                    continue;
                off = std::max(off, std::abs(apq));
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off == 0.0) break;
    }
    Vec s(n);
    for (std::size_t j = 0; j < n; ++j) {
        double nj = 0.0;
        for (std::size_t i = 0; i < m; ++i) nj += u(i, j) * u(i, j);
        s[j] = std::sqrt(nj);
        if (s[j] > 0.0)
            for (std::size_t i = 0; i < m; ++i) u(i, j) /= s[j];
    }
    // Sort descending.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
    Mat us(m, n), vs(n, n);
    Vec ss(n);
    for (std::size_t j = 0; j < n; ++j) {
        ss[j] = s[idx[j]];
        for (std::size_t i = 0; i < m; ++i) us(i, j) = u(i, idx[j]);
        for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, idx[j]);
    }
    return Svd{us, ss, vs};
}

Vec lstsq(const Mat& a, const Vec& b) { return pinv_solve(a, b); }

Vec pinv_solve(const Mat& a, const Vec& b, double rcond) {
    Svd d = svd(a);
    const double cutoff = rcond * (d.s.empty() ? 0.0 : d.s[0]);
    Vec x(a.cols(), 0.0);
    for (std::size_t k = 0; k < d.s.size(); ++k) {
        if (d.s[k] <= cutoff || d.s[k] == 0.0) continue;
        double uk_b = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) uk_b += d.u(i, k) * b[i];
        const double f = uk_b / d.s[k];
        for (std::size_t j = 0; j < a.cols(); ++j) x[j] += f * d.v(j, k);
    }
    return x;
}

std::vector<Vec> nullspace(const Mat& a, double tol) {
    if (a.rows() == 0) {
        // no constraints: the whole space
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Vec e(a.cols(), 0.0);
            e[j] = 1.0;
            basis.push_back(e);
        }
        return basis;
    }
    // Null space of A = right singular vectors of the square embedding.
    // Work on A^T A-free route: svd of A directly needs m>=n handling; pad
    // with zero rows so one-sided Jacobi sees all n columns.
    Mat padded = a;
    if (a.rows() < a.cols()) {
        padded = Mat(a.cols(), a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) padded(i, j) = a(i, j);
    }
    Svd d = svd(padded);
    const double smax = d.s.empty() ? 0.0 : d.s[0];
    std::vector<Vec> basis;
    for (std::size_t k = 0; k < d.s.size(); ++k)
        if (d.s[k] <= tol * std::max(smax, 1.0)) basis.push_back(d.v.column(k));
    return basis;
}

std::vector<Vec> orthonormal_span(const std::vector<Vec>& vectors, double tol) {
    if (vectors.empty()) return {};
    Svd d = svd(Mat::from_columns(vectors));
    const double smax = d.s.empty() ? 0.0 : d.s[0];
    std::vector<Vec> basis;
    for (std::size_t k = 0; k < d.s.size(); ++k)
        if (d.s[k] > tol * std::max(smax, 1.0)) basis.push_back(d.u.column(k));
    return basis;
}

SymEig jacobi_eigensymmetric(Mat a, double off_tol) {
    const std::size_t n = a.rows();
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        off = std::sqrt(2.0 * off);
        if (off <= off_tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) +
                                  std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    Vec vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
    SymEig e;
    e.values.resize(n);
    e.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        e.values[j] = vals[idx[j]];
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) = v(i, idx[j]);
    }
    return e;
}

double subspace_containment_gap(const std::vector<Vec>& q1,
                                const std::vector<Vec>& q2) {
    if (q2.empty()) return 0.0;
    // residual of projecting q2 onto span(q1): columns r_j = q2_j - P1 q2_j
    std::vector<Vec> residuals;
    for (const auto& w : q2) {
        Vec r = w;
        for (const auto& u : q1) {
            const double c = dot(u, w);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * u[i];
        }
        residuals.push_back(r);
    }
    Svd d = svd(Mat::from_columns(residuals));
    return d.s.empty() ? 0.0 : d.s[0];
}

bool subspaces_equal(const std::vector<Vec>& q1, const std::vector<Vec>& q2,
                     double tol, double* max_gap) {
    const double g1 = subspace_containment_gap(q1, q2);
    const double g2 = subspace_containment_gap(q2, q1);
    if (max_gap) *max_gap = std::max(g1, g2);
    return q1.size() == q2.size() && g1 <= tol && g2 <= tol;
}

} // namespace cosym
