// Shared small types and error hierarchy for the Levy engine.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levy {

using complex = std::complex<double>;
using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : error {
    using error::error;
};

// A Levy measure violates min(1,r^2)-integrability or its tail certificate.
struct integrability_error : error {
    using error::error;
};

// A half-line integral failed its tail-convergence certificate.
struct divergence_error : error {
    using error::error;
};

struct domain_error : error {
    using error::error;
};

struct quadrature_error : error {
    using error::error;
};

// Internal cross-validation failed (e.g. witness roundtrip gap too large).
struct consistency_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// Small dense symmetric matrix (row-major), dims here are 1..3 in practice.

class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
    Matrix(int n, std::vector<double> data) : n_(n), a_(std::move(data)) {
        if (a_.size() != static_cast<size_t>(n) * n)
            throw dimension_error("matrix data size mismatch");
    }

    int dim() const { return n_; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

    bool empty() const { return n_ == 0; }

    Matrix scaled(double c) const {
        Matrix m = *this;
        for (double& v : m.a_) v *= c;
        return m;
    }

    Matrix plus(const Matrix& o) const {
        if (n_ != o.n_) throw dimension_error("matrix dim mismatch");
        Matrix m = *this;
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
        return m;
    }

    double quad_form(const Vec& y) const {  // <y, A y>
        double s = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += y[i] * (*this)(i, j) * y[j];
        return s;
    }

    double trace() const {
        double s = 0;
        for (int i = 0; i < n_; ++i) s += (*this)(i, i);
        return s;
    }

private:
    int n_ = 0;
    std::vector<double> a_;
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi. Small dims only.
std::vector<double> sym_eigenvalues(const Matrix& m);

// Symmetric square root B with B*B^T = A (eigenvalues clamped at 0).
Matrix sym_sqrt(const Matrix& m);

// ---------------------------------------------------------------------------
// Vector helpers

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(Vec a, double c) {
    for (double& v : a) v *= c;
    return a;
}

inline Vec plus(Vec a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

}  // namespace levy
