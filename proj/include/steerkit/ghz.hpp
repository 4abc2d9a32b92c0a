#pragma once

// The three-qubit GHZ argument: the state is a joint eigenstate of
// XXX, XYY, YXY, YYX with eigenvalues (+1, -1, -1, -1), which no assignment of
// predetermined +-1 values to the six local observables can reproduce.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "steerkit/linalg.hpp"
#include "steerkit/measurements.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

inline constexpr std::array<const char*, 4> kGhzOperatorLabels{"XXX", "XYY", "YXY", "YYX"};

struct GhzExpectations {
    std::array<double, 4> values{};
    std::array<double, 4> eigen_residuals{};  // min(|O psi - psi|, |O psi + psi|)
    std::array<bool, 4> eigenstate{};
};

inline ComplexMatrix ghz_operator(std::size_t index) {
    const std::string label = kGhzOperatorLabels.at(index);
    ComplexMatrix op = ComplexMatrix::identity(1);
    for (char c : label) op = kron(op, c == 'X' ? pauli_x() : pauli_y());
    return op;
}

inline GhzExpectations ghz_operator_expectations(const MultiQubitPureState& state, const Tolerances& tol = {}) {
    if (state.qubits() != 3) {
        throw std::invalid_argument("ghz_operator_expectations: need 3 qubits, got " + std::to_string(state.qubits()));
    }
    GhzExpectations out;
    const auto& psi = state.vector();
    for (std::size_t k = 0; k < 4; ++k) {
        const ComplexVector o_psi = ghz_operator(k) * std::span<const Complex>(psi);
        out.values[k] = std::real(inner(psi, o_psi));
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            plus += std::norm(o_psi[i] - psi[i]);
            minus += std::norm(o_psi[i] + psi[i]);
        }
        out.eigen_residuals[k] = std::sqrt(std::min(plus, minus));
        out.eigenstate[k] = out.eigen_residuals[k] <= tol.eig;
    }
    return out;
}

struct GhzLhvEnumeration {
    std::size_t assignments_checked = 0;
    std::size_t satisfying_assignments = 0;
    int witness_product = 0;  // product of the four targets; the value assignment side always gives +1
};

/// Enumerates all 2^6 choices of (vx1, vx2, vx3, vy1, vy2, vy3) in {+1, -1} against
/// xxx = first_target, xyy = yxy = yyx = -1.
inline GhzLhvEnumeration ghz_lhv_bruteforce(int first_target = +1) {
    if (first_target != 1 && first_target != -1) throw std::invalid_argument("ghz_lhv_bruteforce: target must be +-1");
    const std::array<int, 4> targets{first_target, -1, -1, -1};
    GhzLhvEnumeration out;
    for (unsigned bits = 0; bits < 64; ++bits) {
        std::array<int, 6> v{};
        for (unsigned i = 0; i < 6; ++i) v[i] = (bits >> i) & 1u ? -1 : 1;
        const int x1 = v[0], x2 = v[1], x3 = v[2], y1 = v[3], y2 = v[4], y3 = v[5];
        const std::array<int, 4> products{x1 * x2 * x3, x1 * y2 * y3, y1 * x2 * y3, y1 * y2 * x3};
        ++out.assignments_checked;
        if (products == targets) ++out.satisfying_assignments;
    }
    out.witness_product = targets[0] * targets[1] * targets[2] * targets[3];
    return out;
}

}  // namespace steerkit
