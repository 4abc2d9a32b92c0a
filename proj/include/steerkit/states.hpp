#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steerkit/linalg.hpp"

namespace steerkit {

/// Unit vector on C^dA (x) C^dB with its Schmidt data computed at construction.
class BipartitePureState {
public:
    BipartitePureState(ComplexVector vector, std::size_t dA, std::size_t dB, const Tolerances& tol = {})
        : vector_(std::move(vector)), dA_(dA), dB_(dB), tol_(tol) {
        tol_.validate();
        if (dA_ == 0 || dB_ == 0 || vector_.size() != dA_ * dB_) {
            throw std::invalid_argument("bipartite state of length " + std::to_string(vector_.size()) +
                                        " does not match dims " + std::to_string(dA_) + "x" + std::to_string(dB_));
        }
        schmidt_ = schmidt_decompose(vector_, dA_, dB_, tol_);
    }

    const ComplexVector& vector() const { return vector_; }
    std::size_t dim_a() const { return dA_; }
    std::size_t dim_b() const { return dB_; }
    const SchmidtDecomposition& schmidt() const { return schmidt_; }
    const Tolerances& tolerances() const { return tol_; }

    bool entangled() const { return schmidt_.coeffs.size() > 1 && schmidt_.coeffs[1] > tol_.rank1; }

private:
    ComplexVector vector_;
    std::size_t dA_;
    std::size_t dB_;
    Tolerances tol_;
    SchmidtDecomposition schmidt_;
};

class MultiQubitPureState {
public:
    MultiQubitPureState(ComplexVector vector, std::size_t n_qubits, const Tolerances& tol = {})
        : vector_(std::move(vector)), n_qubits_(n_qubits) {
        if (n_qubits_ == 0 || n_qubits_ > 20 || vector_.size() != (std::size_t{1} << n_qubits_)) {
            throw std::invalid_argument("state of length " + std::to_string(vector_.size()) + " is not a " +
                                        std::to_string(n_qubits_) + "-qubit vector");
        }
        if (std::abs(norm(vector_) - 1.0) > tol.eig) {
            throw std::invalid_argument("multi-qubit state is not normalized");
        }
    }

    const ComplexVector& vector() const { return vector_; }
    std::size_t qubits() const { return n_qubits_; }

private:
    ComplexVector vector_;
    std::size_t n_qubits_;
};

/// cos(theta)|00> + sin(theta)|11>, theta in [0, pi/2].
inline BipartitePureState theta_state(double theta, const Tolerances& tol = {}) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
        throw std::invalid_argument("theta_state: theta " + std::to_string(theta) + " outside [0, pi/2]");
    }
    ComplexVector v(4);
    v[0] = std::cos(theta);
    v[3] = std::sin(theta);
    return BipartitePureState(std::move(v), 2, 2, tol);
}

/// sum_m lambda_m |mm>.
inline BipartitePureState qudit_schmidt_state(std::span<const double> lambdas, const Tolerances& tol = {}) {
    if (lambdas.size() < 2) throw std::invalid_argument("qudit_schmidt_state: need d >= 2 coefficients");
    double sq = 0.0;
    for (double l : lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l)) {
            throw std::invalid_argument("qudit_schmidt_state: coefficients must be nonnegative");
        }
        sq += l * l;
    }
    if (std::abs(sq - 1.0) > tol.eig) {
        throw std::invalid_argument("qudit_schmidt_state: sum of squared coefficients is " + std::to_string(sq));
    }
    const std::size_t d = lambdas.size();
    ComplexVector v(d * d);
    for (std::size_t m = 0; m < d; ++m) v[m * d + m] = lambdas[m];
    return BipartitePureState(std::move(v), d, d, tol);
}

struct TruncatedNopa {
    BipartitePureState state;
    std::vector<double> coefficients;  // renormalized, index m = Fock number
    double truncation_weight;          // 1 - sum_{m<d} c_m^2 of the untruncated coefficients
};

/// Two-mode squeezed vacuum cut at Fock number d-1 and renormalized.
inline TruncatedNopa nopa_truncated(double r, std::size_t d, const Tolerances& tol = {}) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("nopa_truncated: squeezing r must be > 0");
    if (d < 2) throw std::invalid_argument("nopa_truncated: need d >= 2");
    const double t = std::tanh(r);
    const double c0 = 1.0 / std::cosh(r);
    std::vector<double> raw(d);
    double kept = 0.0;
    double power = 1.0;
    for (std::size_t m = 0; m < d; ++m) {
        raw[m] = power * c0;
        kept += raw[m] * raw[m];
        power *= t;
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& c : raw) c *= scale;
    return TruncatedNopa{qudit_schmidt_state(raw, tol), raw, 1.0 - kept};
}

/// |0> (x) |beta>.
inline BipartitePureState separable_state(std::span<const Complex> beta, const Tolerances& tol = {}) {
    if (beta.size() != 2) throw std::invalid_argument("separable_state: beta must be a qubit vector");
    if (std::abs(norm(beta) - 1.0) > tol.eig) throw std::invalid_argument("separable_state: beta is not normalized");
    const ComplexVector zero{1.0, 0.0};
    return BipartitePureState(kron(std::span<const Complex>(zero), beta), 2, 2, tol);
}

/// (|000> + |111>)/sqrt(2), qubit 1 most significant.
inline MultiQubitPureState ghz_state() {
    ComplexVector v(8);
    v[0] = v[7] = 1.0 / std::numbers::sqrt2;
    return MultiQubitPureState(std::move(v), 3);
}

inline ComplexMatrix density(std::span<const Complex> psi) { return ComplexMatrix::projector(psi); }
inline ComplexMatrix density(const BipartitePureState& psi) { return density(psi.vector()); }
inline ComplexMatrix density(const MultiQubitPureState& psi) { return density(psi.vector()); }

}  // namespace steerkit
