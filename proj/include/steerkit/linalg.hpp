#pragma once

// Dense complex linear algebra for small bipartite systems: products,
// Kronecker products, partial traces, a cyclic Jacobi Hermitian
// eigensolver and a one-sided Jacobi Schmidt decomposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steerkit {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Numerical thresholds shared by every check in the library.
struct Tolerances {
    double herm = 1e-10;      // max |M - M^dagger| entrywise
    double eig = 1e-10;       // eigen/reconstruction residuals
    double state_eq = 1e-9;   // trace distance below which two states are "equal"
    double rank1 = 1e-9;      // subdominant eigenvalue mass allowed for a pure state
    double lp = 1e-8;         // LP / LHS-model residuals

    void validate() const {
        for (double v : {herm, eig, state_eq, rank1, lp}) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("tolerances must be finite and nonnegative");
            }
        }
    }

    bool operator==(const Tolerances&) const = default;
};

/// Thrown when a quantity the theory guarantees breaches its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string dims_string(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("entry count " + std::to_string(data_.size()) +
                                        " does not match " + dims_string(rows_, cols_));
        }
    }
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }
    /// |u><v|
    static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
        ComplexMatrix m(u.size(), v.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
        return m;
    }
    static ComplexMatrix projector(std::span<const Complex> v) { return outer(v, v); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    std::span<const Complex> data() const { return data_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ComplexVector column(std::size_t j) const {
        ComplexVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Complex trace() const {
        Complex t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(Complex s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("cannot multiply " + dims_string(a.rows_, a.cols_) + " by " +
                                        dims_string(b.rows_, b.cols_));
        }
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
        if (a.cols_ != v.size()) {
            throw std::invalid_argument("cannot apply " + dims_string(a.rows_, a.cols_) +
                                        " to vector of length " + std::to_string(v.size()));
        }
        ComplexVector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument(std::string("shape mismatch in '") + op + "': " +
                                        dims_string(rows_, cols_) + " vs " + dims_string(o.rows_, o.cols_));
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Largest entrywise deviation |a - b|.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline double hermiticity_deviation(const ComplexMatrix& m) {
    if (!m.is_square()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    return dev;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_deviation(m) <= tol; }

// ---------------------------------------------------------------------------
// Vectors

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner product of vectors with different lengths");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm(std::span<const Complex> v) { return std::sqrt(std::real(inner(v, v))); }

inline ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b) {
    ComplexVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

inline ComplexVector basis_vector(std::size_t dim, std::size_t index) {
    ComplexVector v(dim);
    v.at(index) = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Structural operations

/// Kronecker product: entry (i*b.rows + k, j*b.cols + l) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

enum class Subsystem { A, B };

/// Traces out one factor of a (dA*dB)-dimensional operator; `keep` names the survivor.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dA, std::size_t dB, Subsystem keep) {
    const std::size_t n = dA * dB;
    if (dA == 0 || dB == 0 || rho.rows() != n || rho.cols() != n) {
        throw std::invalid_argument("partial_trace: operator is " + dims_string(rho.rows(), rho.cols()) +
                                    " but dA*dB = " + std::to_string(dA) + "*" + std::to_string(dB));
    }
    if (keep == Subsystem::B) {
        ComplexMatrix out(dB, dB);
        for (std::size_t i = 0; i < dA; ++i)
            for (std::size_t m = 0; m < dB; ++m)
                for (std::size_t k = 0; k < dB; ++k) out(m, k) += rho(i * dB + m, i * dB + k);
        return out;
    }
    ComplexMatrix out(dA, dA);
    for (std::size_t i = 0; i < dA; ++i)
        for (std::size_t j = 0; j < dA; ++j)
            for (std::size_t m = 0; m < dB; ++m) out(i, j) += rho(i * dB + m, j * dB + m);
    return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EigenDecomposition {
    std::vector<double> values;   // descending
    ComplexMatrix vectors;        // column k pairs with values[k]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Right-multiplies columns p,q of `m` by the real rotation [[c, s], [-s, c]].
inline void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Complex mp = m(r, p);
        const Complex mq = m(r, q);
        m(r, p) = c * mp - s * mq;
        m(r, q) = s * mp + c * mq;
    }
}

inline void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
        const Complex mp = m(p, k);
        const Complex mq = m(q, k);
        m(p, k) = c * mp - s * mq;
        m(q, k) = s * mp + c * mq;
    }
}

// (c, s) of the Jacobi rotation annihilating the real off-diagonal `apq` of [[app, apq], [apq, aqq]].
inline std::pair<double, double> jacobi_angle(double app, double aqq, double apq) {
    const double theta = (aqq - app) / (2.0 * apq);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    return {c, t * c};
}

}  // namespace detail

/// Cyclic complex Jacobi. Eigenvalues come back sorted descending; the order of
/// vectors inside a degenerate cluster is unspecified.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& h, const Tolerances& tol = {}) {
    if (!h.is_square()) {
        throw std::invalid_argument("hermitian_eig: matrix is " + dims_string(h.rows(), h.cols()));
    }
    if (!is_hermitian(h, tol.herm)) {
        throw std::invalid_argument("hermitian_eig: input is not Hermitian (deviation " +
                                    std::to_string(hermiticity_deviation(h)) + ")");
    }
    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    // Symmetrize exactly so the rotations act on a genuinely Hermitian matrix.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (detail::off_diagonal_norm(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag <= 1e-300 || mag <= 1e-18 * scale) continue;
                // Rotate the phase of index q so that a(p,q) becomes real and positive.
                const Complex phase = a(p, q) / mag;
                const Complex col_factor = std::conj(phase);
                for (std::size_t r = 0; r < n; ++r) a(r, q) *= col_factor;
                for (std::size_t k = 0; k < n; ++k) a(q, k) *= phase;
                for (std::size_t r = 0; r < n; ++r) v(r, q) *= col_factor;

                const auto [c, s] = detail::jacobi_angle(a(p, p).real(), a(q, q).real(), mag);
                detail::rotate_columns(a, p, q, c, s);
                detail::rotate_rows(a, p, q, c, s);
                detail::rotate_columns(v, p, q, c, s);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics

inline double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma, const Tolerances& tol = {}) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw std::invalid_argument("trace_distance: " + dims_string(rho.rows(), rho.cols()) + " vs " +
                                    dims_string(sigma.rows(), sigma.cols()));
    }
    const auto eig = hermitian_eig(rho - sigma, tol);
    double s = 0.0;
    for (double l : eig.values) s += std::abs(l);
    return 0.5 * s;
}

struct RankOneCheck {
    bool rank_one = false;
    ComplexVector principal;   // top eigenvector, unit norm
    double residual_mass = 0;  // sum of subdominant eigenvalues over the trace
};

/// Decides whether a PSD operator is proportional to a pure state.
inline RankOneCheck is_rank_one(const ComplexMatrix& rho, const Tolerances& tol = {}) {
    const auto eig = hermitian_eig(rho, tol);
    const double tr = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    if (!(tr > tol.eig)) {
        throw std::invalid_argument("is_rank_one: trace " + std::to_string(tr) +
                                    " is zero (outcome of probability 0)");
    }
    if (eig.values.back() < -tol.eig * std::max(1.0, tr)) {
        throw std::invalid_argument("is_rank_one: operator is not positive semidefinite (min eigenvalue " +
                                    std::to_string(eig.values.back()) + ")");
    }
    double tail = 0.0;
    for (std::size_t i = 1; i < eig.values.size(); ++i) tail += std::max(eig.values[i], 0.0);
    RankOneCheck out;
    out.residual_mass = tail / tr;
    out.rank_one = out.residual_mass <= tol.rank1;
    out.principal = eig.vectors.column(0);
    return out;
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

struct SchmidtDecomposition {
    std::vector<double> coeffs;        // descending, strictly above tol.eig
    std::vector<ComplexVector> left;   // on A
    std::vector<ComplexVector> right;  // on B

    std::size_t rank() const { return coeffs.size(); }
};

/// psi indexed as psi[i*dB + j]. Uses one-sided (Hestenes) Jacobi on the dA x dB
/// coefficient matrix so that small Schmidt coefficients keep full relative accuracy.
inline SchmidtDecomposition schmidt_decompose(std::span<const Complex> psi, std::size_t dA, std::size_t dB,
                                              const Tolerances& tol = {}) {
    if (dA == 0 || dB == 0 || psi.size() != dA * dB) {
        throw std::invalid_argument("schmidt_decompose: vector length " + std::to_string(psi.size()) +
                                    " does not match dA*dB = " + std::to_string(dA) + "*" + std::to_string(dB));
    }
    const double nrm = norm(psi);
    if (std::abs(nrm - 1.0) > tol.eig) {
        throw std::invalid_argument("schmidt_decompose: vector norm " + std::to_string(nrm) + " is not 1");
    }
    ComplexMatrix m(dA, dB, ComplexVector(psi.begin(), psi.end()));
    ComplexMatrix v = ComplexMatrix::identity(dB);

    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < dB; ++p) {
            for (std::size_t q = p + 1; q < dB; ++q) {
                double alpha = 0.0, beta = 0.0;
                Complex gamma{0.0, 0.0};
                for (std::size_t r = 0; r < dA; ++r) {
                    alpha += std::norm(m(r, p));
                    beta += std::norm(m(r, q));
                    gamma += std::conj(m(r, p)) * m(r, q);
                }
                const double mag = std::abs(gamma);
                if (mag <= 1e-300 || mag <= 1e-16 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const Complex col_factor = std::conj(gamma / mag);
                for (std::size_t r = 0; r < dA; ++r) m(r, q) *= col_factor;
                for (std::size_t r = 0; r < dB; ++r) v(r, q) *= col_factor;
                const auto [c, s] = detail::jacobi_angle(alpha, beta, mag);
                detail::rotate_columns(m, p, q, c, s);
                detail::rotate_columns(v, p, q, c, s);
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(dB);
    for (std::size_t j = 0; j < dB; ++j) sigma[j] = norm(m.column(j));
    std::vector<std::size_t> order(dB);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SchmidtDecomposition out;
    for (std::size_t j : order) {
        if (sigma[j] <= tol.eig) break;
        ComplexVector l = m.column(j);
        for (auto& z : l) z /= sigma[j];
        ComplexVector r = v.column(j);
        for (auto& z : r) z = std::conj(z);
        out.coeffs.push_back(sigma[j]);
        out.left.push_back(std::move(l));
        out.right.push_back(std::move(r));
    }
    return out;
}

}  // namespace steerkit
