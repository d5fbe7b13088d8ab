#pragma once

#include <cstddef>
#include <vector>

namespace cosym {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for the small problems in this library
/// (dimensions stay below a few dozen).
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c, double fill = 0.0)
        : rows_(r), cols_(c), a_(r * c, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat from_columns(const std::vector<Vec>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Mat transposed() const;
    Vec column(std::size_t j) const;
    Vec row(std::size_t i) const;

    friend Mat operator*(const Mat& a, const Mat& b);
    friend Vec operator*(const Mat& a, const Vec& x);
    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);
    friend Mat operator*(double s, Mat a);

private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec axpy(double a, const Vec& x, const Vec& y); // a*x + y
Vec scale(double a, Vec x);
Vec sub(const Vec& a, const Vec& b);

/// max |a_i - b_i|
double max_abs_diff(const Vec& a, const Vec& b);

/// Solve A x = b by partial-pivot LU. Throws on (near) singular A.
Vec lu_solve(Mat a, Vec b);
double lu_det(Mat a);

/// Least squares min |A x - b| via Householder QR (rows >= cols expected;
/// rank deficiency falls back to the SVD pseudo-inverse).
Vec lstsq(const Mat& a, const Vec& b);

/// Thin SVD A = U diag(s) V^T by one-sided Jacobi. Singular values are
/// returned descending; U is rows x k, V is cols x k with k = min(rows, cols).
struct Svd {
    Mat u;
    Vec s;
    Mat v;
};
Svd svd(const Mat& a);

/// Minimum-norm least squares solution via SVD with relative cutoff.
Vec pinv_solve(const Mat& a, const Vec& b, double rcond = 1e-12);

/// Orthonormal basis of the null space of A (columns of the result).
/// Vectors with singular value <= tol * max singular value are kept.
std::vector<Vec> nullspace(const Mat& a, double tol = 1e-10);

/// Orthonormal basis of the column span (rank decided at tol * s_max).
std::vector<Vec> orthonormal_span(const std::vector<Vec>& vectors,
                                  double tol = 1e-10);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues ascending; eigenvectors are the columns of `vectors`.
struct SymEig {
    Vec values;
    Mat vectors;
};
SymEig jacobi_eigensymmetric(Mat a, double off_tol = 1e-12);

/// sin of the largest principal angle between the spans of two orthonormal
/// bases: ||(I - P1) Q2||_2. Zero iff span(Q2) is contained in span(Q1).
double subspace_containment_gap(const std::vector<Vec>& q1,
                                const std::vector<Vec>& q2);

/// Mutual containment test: equal dimensions and both gaps <= tol.
bool subspaces_equal(const std::vector<Vec>& q1, const std::vector<Vec>& q2,
                     double tol, double* max_gap = nullptr);

} // namespace cosym
