#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/linalg.hpp"
#include "steerkit/measurements.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

/// Bob's unnormalized conditional states, states[n][a] for setting n and outcome a,
/// together with his reduced state.
struct Assemblage {
    std::vector<std::string> labels;
    std::vector<std::vector<ComplexMatrix>> states;
    ComplexMatrix bob_reduced;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;

    std::size_t settings() const { return states.size(); }
    std::size_t total_outcomes() const {
        std::size_t n = 0;
        for (const auto& s : states) n += s.size();
        return n;
    }
};

/// rho~^n_a = tr_A[(P^n_a (x) 1) rho_AB].
inline Assemblage conditional_states(const ComplexMatrix& rho_ab, const std::vector<MeasurementSetting>& settings,
                                     std::size_t dA, std::size_t dB, const Tolerances& tol = {}) {
    const std::size_t n = dA * dB;
    if (dA == 0 || dB == 0 || rho_ab.rows() != n || rho_ab.cols() != n) {
        throw std::invalid_argument("conditional_states: rho is " + dims_string(rho_ab.rows(), rho_ab.cols()) +
                                    " but dA*dB = " + std::to_string(dA) + "*" + std::to_string(dB));
    }
    if (!is_hermitian(rho_ab, tol.herm)) throw std::invalid_argument("conditional_states: rho is not Hermitian");
    if (std::abs(rho_ab.trace() - 1.0) > tol.eig) {
        throw std::invalid_argument("conditional_states: rho does not have unit trace");
    }
    if (settings.empty()) throw std::invalid_argument("conditional_states: no measurement settings");

    Assemblage out;
    out.dim_a = dA;
    out.dim_b = dB;
    out.bob_reduced = partial_trace(rho_ab, dA, dB, Subsystem::B);
    const ComplexMatrix id_b = ComplexMatrix::identity(dB);
    for (const auto& s : settings) {
        if (s.dim() != dA) {
            throw std::invalid_argument("conditional_states: setting '" + s.label + "' acts on dimension " +
                                        std::to_string(s.dim()) + ", Alice has " + std::to_string(dA));
        }
        const auto report = validate_setting(s, tol);
        if (!report.pass) {
            throw std::invalid_argument("conditional_states: invalid setting '" + s.label + "': " + report.describe());
        }
        out.labels.push_back(s.label);
        auto& row = out.states.emplace_back();
        for (const auto& p : s.projectors) row.push_back(partial_trace(kron(p, id_b) * rho_ab, dA, dB, Subsystem::B));
    }
    return out;
}

inline Assemblage conditional_states(const BipartitePureState& psi, const std::vector<MeasurementSetting>& settings,
                                     const Tolerances& tol = {}) {
    return conditional_states(density(psi), settings, psi.dim_a(), psi.dim_b(), tol);
}

/// max_n max_entries |sum_a rho~^n_a - rho_B|.
inline double no_signalling_check(const Assemblage& a) {
    double dev = 0.0;
    for (const auto& row : a.states) {
        ComplexMatrix sum(a.bob_reduced.rows(), a.bob_reduced.cols());
        for (const auto& s : row) sum += s;
        dev = std::max(dev, max_abs_diff(sum, a.bob_reduced));
    }
    return dev;
}

struct OutcomeProfile {
    std::size_t setting = 0;
    std::size_t outcome = 0;
    double probability = 0;    // tr rho~^n_a
    bool vacuous = false;      // probability <= tol.rank1
    bool rank_one = false;
    double residual_mass = 0;
    ComplexVector principal;   // empty when vacuous
    ComplexMatrix normalized;  // rho~ / tr rho~; empty when vacuous
};

struct PurityProfile {
    std::vector<OutcomeProfile> outcomes;     // lexicographic (setting, outcome)
    std::vector<std::vector<double>> distance;  // trace distances; NaN where either side is vacuous

    bool all_rank_one() const {
        return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.vacuous || o.rank_one; });
    }
    double max_residual_mass() const {
        double m = 0.0;
        for (const auto& o : outcomes)
            if (!o.vacuous) m = std::max(m, o.residual_mass);
        return m;
    }
    /// Smallest distance between two distinct non-vacuous outcomes (+inf if fewer than two).
    double min_distance() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < outcomes.size(); ++i)
            for (std::size_t j = i + 1; j < outcomes.size(); ++j)
                if (!outcomes[i].vacuous && !outcomes[j].vacuous) m = std::min(m, distance[i][j]);
        return m;
    }
    std::vector<double> probabilities(std::size_t setting) const {
        std::vector<double> p;
        for (const auto& o : outcomes)
            if (o.setting == setting) p.push_back(o.probability);
        return p;
    }
};

inline PurityProfile purity_profile(const Assemblage& a, const Tolerances& tol = {}) {
    PurityProfile prof;
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        for (std::size_t k = 0; k < a.states[n].size(); ++k) {
            OutcomeProfile o;
            o.setting = n;
            o.outcome = k;
            o.probability = a.states[n][k].trace().real();
            o.vacuous = o.probability <= tol.rank1;
            if (!o.vacuous) {
                const auto check = is_rank_one(a.states[n][k], tol);
                o.rank_one = check.rank_one;
                o.residual_mass = check.residual_mass;
                o.principal = check.principal;
                o.normalized = a.states[n][k] * Complex{1.0 / o.probability, 0.0};
            }
            prof.outcomes.push_back(std::move(o));
        }
    }
    const std::size_t total = prof.outcomes.size();
    prof.distance.assign(total, std::vector<double>(total, std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t i = 0; i < total; ++i) {
        if (prof.outcomes[i].vacuous) continue;
        prof.distance[i][i] = 0.0;
        for (std::size_t j = i + 1; j < total; ++j) {
            if (prof.outcomes[j].vacuous) continue;
            const double d = trace_distance(prof.outcomes[i].normalized, prof.outcomes[j].normalized, tol);
            prof.distance[i][j] = prof.distance[j][i] = d;
        }
    }
    return prof;
}

}  // namespace steerkit
