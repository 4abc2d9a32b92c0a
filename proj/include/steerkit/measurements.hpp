#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steerkit/linalg.hpp"

namespace steerkit {

/// A complete set of orthogonal rank-1 projectors for one of Alice's settings.
/// Outcome a indexes `projectors`.
struct MeasurementSetting {
    std::string label;
    std::vector<ComplexMatrix> projectors;

    std::size_t outcomes() const { return projectors.size(); }
    std::size_t dim() const { return projectors.empty() ? 0 : projectors.front().rows(); }
};

inline const ComplexMatrix& pauli_x() {
    static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}
inline const ComplexMatrix& pauli_y() {
    static const ComplexMatrix m{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}};
    return m;
}
inline const ComplexMatrix& pauli_z() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

/// P_a = (1 + (-1)^a n.sigma)/2; outcome 0 is the +1 eigenspace of n.sigma.
inline MeasurementSetting bloch_projectors(const std::array<double, 3>& n, std::string label = {},
                                           const Tolerances& tol = {}) {
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(len - 1.0) > tol.eig) {
        throw std::invalid_argument("bloch_projectors: direction has length " + std::to_string(len));
    }
    const ComplexMatrix n_sigma = n[0] * pauli_x() + n[1] * pauli_y() + n[2] * pauli_z();
    const ComplexMatrix id = ComplexMatrix::identity(2);
    if (label.empty()) {
        label = "n(" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + ")";
    }
    return MeasurementSetting{std::move(label), {0.5 * (id + n_sigma), 0.5 * (id - n_sigma)}};
}

/// Projectors onto cos(a)|0>+sin(a)|1> and sin(a)|0>-cos(a)|1>.
inline MeasurementSetting angle_projectors(double alpha, std::string label = {}) {
    const ComplexVector phi0{std::cos(alpha), std::sin(alpha)};
    const ComplexVector phi1{std::sin(alpha), -std::cos(alpha)};
    if (label.empty()) label = "angle(" + std::to_string(alpha) + ")";
    return MeasurementSetting{std::move(label), {ComplexMatrix::projector(phi0), ComplexMatrix::projector(phi1)}};
}

/// One projector per column of `basis` (must be unitary; checked by validate_setting).
inline MeasurementSetting basis_from_unitary(const ComplexMatrix& basis, std::string label) {
    if (!basis.is_square() || basis.rows() < 2) {
        throw std::invalid_argument("basis_from_unitary: need a square matrix of size >= 2");
    }
    MeasurementSetting s{std::move(label), {}};
    for (std::size_t j = 0; j < basis.cols(); ++j) s.projectors.push_back(ComplexMatrix::projector(basis.column(j)));
    return s;
}

inline MeasurementSetting computational_basis(std::size_t d) {
    if (d < 2) throw std::invalid_argument("computational_basis: need d >= 2");
    return basis_from_unitary(ComplexMatrix::identity(d), "Z");
}

/// |m'> = d^{-1/2} sum_k omega^{k m'} |k>, omega = exp(2 pi i / d).
inline MeasurementSetting fourier_mub_basis(std::size_t d) {
    if (d < 2) throw std::invalid_argument("fourier_mub_basis: need d >= 2");
    ComplexMatrix f(d, d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t m = 0; m < d; ++m) {
            // Reduce k*m mod d first so the phase stays exact for larger d.
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * m) % d) / static_cast<double>(d);
            f(k, m) = std::polar(amp, angle);
        }
    return basis_from_unitary(f, "X");
}

struct SettingReport {
    double idempotence = 0;    // max |P^2 - P|
    double hermiticity = 0;    // max |P - P^dagger|
    double orthogonality = 0;  // max |P_a P_b| over a != b
    double completeness = 0;   // max |sum_a P_a - 1|
    double rank = 0;           // max |tr P - 1|
    bool pass = false;

    double worst() const { return std::max({idempotence, hermiticity, orthogonality, completeness, rank}); }
    std::string describe() const {
        return "idempotence=" + std::to_string(idempotence) + " hermiticity=" + std::to_string(hermiticity) +
               " orthogonality=" + std::to_string(orthogonality) + " completeness=" + std::to_string(completeness) +
               " rank=" + std::to_string(rank);
    }
};

inline SettingReport validate_setting(const MeasurementSetting& s, const Tolerances& tol = {}) {
    SettingReport r;
    const std::size_t d = s.dim();
    if (s.projectors.empty() || d == 0) {
        r.completeness = std::numeric_limits<double>::infinity();
        return r;
    }
    for (const auto& p : s.projectors) {
        if (p.rows() != d || p.cols() != d) {
            r.completeness = std::numeric_limits<double>::infinity();
            return r;
        }
    }
    ComplexMatrix sum(d, d);
    for (std::size_t a = 0; a < s.projectors.size(); ++a) {
        const auto& p = s.projectors[a];
        r.idempotence = std::max(r.idempotence, max_abs_diff(p * p, p));
        r.hermiticity = std::max(r.hermiticity, hermiticity_deviation(p));
        r.rank = std::max(r.rank, std::abs(p.trace() - 1.0));
        for (std::size_t b = a + 1; b < s.projectors.size(); ++b) {
            r.orthogonality = std::max(r.orthogonality, (p * s.projectors[b]).max_abs());
        }
        sum += p;
    }
    r.completeness = max_abs_diff(sum, ComplexMatrix::identity(d));
    r.pass = r.worst() <= tol.eig;
    return r;
}

/// True when the two settings carry the same projectors up to outcome relabeling.
inline bool same_projector_set(const MeasurementSetting& a, const MeasurementSetting& b, const Tolerances& tol = {}) {
    if (a.outcomes() != b.outcomes() || a.dim() != b.dim()) return false;
    std::vector<bool> used(b.outcomes(), false);
    for (const auto& p : a.projectors) {
        bool matched = false;
        for (std::size_t j = 0; j < b.outcomes() && !matched; ++j) {
            if (!used[j] && trace_distance(p, b.projectors[j], tol) <= tol.state_eq) {
                used[j] = true;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace steerkit
