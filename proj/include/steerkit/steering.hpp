#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/assemblage.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/measurements.hpp"
#include "steerkit/simplex.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

// ---------------------------------------------------------------------------
// Local hidden state models

struct HiddenState {
    double weight = 0;
    ComplexMatrix state;
};

/// Ensemble {weight_xi, rho_xi} plus response probabilities p(a | n, xi),
/// stored as responses[n][xi][a].
struct LHSModel {
    std::vector<HiddenState> hidden;
    std::vector<std::vector<std::vector<double>>> responses;

    double response(std::size_t outcome, std::size_t setting, std::size_t xi) const {
        return responses.at(setting).at(xi).at(outcome);
    }
};

struct LHSModelCheck {
    double min_weight = 0;
    double weight_sum_deviation = 0;    // |sum weight - 1|
    double response_sum_deviation = 0;  // max_{n,xi} |sum_a p(a|n,xi) - 1|
    double min_response = 0;
    double bob_reduced_deviation = 0;   // max |sum weight rho - rho_B|
    bool pass = false;
};

inline LHSModelCheck check_lhs_model(const LHSModel& model, const ComplexMatrix& bob_reduced, const Tolerances& tol = {}) {
    LHSModelCheck c;
    if (model.hidden.empty()) return c;
    c.min_weight = model.hidden.front().weight;
    double sum = 0.0;
    ComplexMatrix mix(bob_reduced.rows(), bob_reduced.cols());
    for (const auto& h : model.hidden) {
        c.min_weight = std::min(c.min_weight, h.weight);
        sum += h.weight;
        mix += h.weight * h.state;
    }
    c.weight_sum_deviation = std::abs(sum - 1.0);
    c.bob_reduced_deviation = max_abs_diff(mix, bob_reduced);
    c.min_response = 1.0;
    for (const auto& per_setting : model.responses) {
        for (const auto& dist : per_setting) {
            double s = 0.0;
            for (double p : dist) {
                s += p;
                c.min_response = std::min(c.min_response, p);
            }
            c.response_sum_deviation = std::max(c.response_sum_deviation, std::abs(s - 1.0));
        }
    }
    c.pass = c.min_weight > 0.0 && c.weight_sum_deviation <= tol.lp && c.response_sum_deviation <= tol.lp &&
             c.min_response >= -tol.lp && c.bob_reduced_deviation <= tol.lp;
    return c;
}

/// rho~^n_a = sum_xi p(a|n,xi) weight_xi rho_xi.
inline Assemblage lhs_reconstruct(const LHSModel& model, const std::vector<MeasurementSetting>& settings) {
    if (model.hidden.empty()) throw std::invalid_argument("lhs_reconstruct: empty ensemble");
    if (model.responses.size() != settings.size()) {
        throw std::invalid_argument("lhs_reconstruct: model has responses for " + std::to_string(model.responses.size()) +
                                    " settings, got " + std::to_string(settings.size()));
    }
    const std::size_t dB = model.hidden.front().state.rows();
    Assemblage out;
    out.dim_a = settings.empty() ? 0 : settings.front().dim();
    out.dim_b = dB;
    out.bob_reduced = ComplexMatrix(dB, dB);
    for (const auto& h : model.hidden) out.bob_reduced += h.weight * h.state;
    for (std::size_t n = 0; n < settings.size(); ++n) {
        if (model.responses[n].size() != model.hidden.size()) {
            throw std::invalid_argument("lhs_reconstruct: response table size mismatch for setting " + std::to_string(n));
        }
        out.labels.push_back(settings[n].label);
        auto& row = out.states.emplace_back(settings[n].outcomes(), ComplexMatrix(dB, dB));
        for (std::size_t xi = 0; xi < model.hidden.size(); ++xi) {
            if (model.responses[n][xi].size() != settings[n].outcomes()) {
                throw std::invalid_argument("lhs_reconstruct: outcome count mismatch for setting '" +
                                            settings[n].label + "'");
            }
            for (std::size_t a = 0; a < row.size(); ++a) {
                row[a] += (model.responses[n][xi][a] * model.hidden[xi].weight) * model.hidden[xi].state;
            }
        }
    }
    return out;
}

/// Largest entrywise difference over all conditional states and rho_B.
inline double assemblage_deviation(const Assemblage& x, const Assemblage& y) {
    if (x.states.size() != y.states.size()) throw std::invalid_argument("assemblages have different setting counts");
    double dev = max_abs_diff(x.bob_reduced, y.bob_reduced);
    for (std::size_t n = 0; n < x.states.size(); ++n) {
        if (x.states[n].size() != y.states[n].size()) throw std::invalid_argument("assemblages differ in outcome counts");
        for (std::size_t a = 0; a < x.states[n].size(); ++a) dev = std::max(dev, max_abs_diff(x.states[n][a], y.states[n][a]));
    }
    return dev;
}

/// Single-hidden-state model for a product state |alpha>|beta>: the hidden state is
/// |beta><beta| and Alice answers with her Born probabilities tr(P^n_a |alpha><alpha|).
inline LHSModel separable_lhs_model(const BipartitePureState& psi, const std::vector<MeasurementSetting>& settings,
                                    const Tolerances& tol = {}) {
    if (psi.entangled() || psi.schmidt().rank() != 1) {
        throw std::invalid_argument("separable_lhs_model: state is entangled; no LHS model exists");
    }
    const ComplexMatrix alice = ComplexMatrix::projector(psi.schmidt().left.front());
    LHSModel model;
    model.hidden.push_back({1.0, ComplexMatrix::projector(psi.schmidt().right.front())});
    for (const auto& s : settings) {
        if (s.dim() != psi.dim_a()) {
            throw std::invalid_argument("separable_lhs_model: setting '" + s.label + "' has wrong dimension");
        }
        if (!validate_setting(s, tol).pass) {
            throw std::invalid_argument("separable_lhs_model: invalid setting '" + s.label + "'");
        }
        std::vector<double> dist;
        for (const auto& p : s.projectors) dist.push_back((p * alice).trace().real());
        model.responses.push_back({dist});
    }
    return model;
}

// ---------------------------------------------------------------------------
// Pure-state paradox

enum class ParadoxVerdict { Contradiction, NotApplicableSeparable, DegenerateSettingGeometry };

inline const char* to_string(ParadoxVerdict v) {
    switch (v) {
        case ParadoxVerdict::Contradiction: return "contradiction";
        case ParadoxVerdict::NotApplicableSeparable: return "not-applicable-separable";
        case ParadoxVerdict::DegenerateSettingGeometry: return "degenerate-setting-geometry";
    }
    return "unknown";
}

/// One step of the collapse: the pure conditional state rho~^n_a can only be written
/// as weight_xi rho_xi for a single hidden index xi, with p(a|n,xi) forced to 1.
struct CollapsedAssignment {
    std::size_t setting = 0;
    std::size_t outcome = 0;
    std::size_t hidden_index = 0;  // 1-based, lexicographic in (setting, outcome)
    double weight = 0;             // tr rho~^n_a
};

struct ParadoxCertificate {
    bool applicable = false;
    ParadoxVerdict verdict = ParadoxVerdict::NotApplicableSeparable;
    std::string reason;
    std::vector<std::string> labels;
    std::size_t k = 0;
    double lhs_trace_sum = 0;       // sum_{n,a} tr rho~^n_a, equals k
    double quantum_trace_sum = 0;   // tr rho_B, equals 1
    double ensemble_weight_sum = 0; // sum of collapsed hidden-state weights
    double no_signalling_deviation = 0;
    bool k_setting_extension = false;
    PurityProfile purity;
    std::vector<CollapsedAssignment> collapsed;
    Tolerances tolerances;

    double contradiction() const { return lhs_trace_sum - quantum_trace_sum; }
};

/// Runs the trace-sum argument for a pure state and >= 2 settings. Separable input and
/// degenerate geometry come back as typed verdicts; coincident settings are rejected.
inline ParadoxCertificate pure_state_paradox(const BipartitePureState& psi, const std::vector<MeasurementSetting>& settings,
                                             const Tolerances& tol = {}) {
    tol.validate();
    if (settings.size() < 2) throw std::invalid_argument("pure_state_paradox: need at least two settings");
    for (std::size_t i = 0; i < settings.size(); ++i) {
        if (settings[i].dim() != psi.dim_a()) {
            throw std::invalid_argument("pure_state_paradox: setting '" + settings[i].label + "' acts on dimension " +
                                        std::to_string(settings[i].dim()) + ", Alice has " + std::to_string(psi.dim_a()));
        }
        const auto report = validate_setting(settings[i], tol);
        if (!report.pass) {
            throw std::invalid_argument("pure_state_paradox: invalid setting '" + settings[i].label + "': " +
                                        report.describe());
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (same_projector_set(settings[i], settings[j], tol)) {
                throw std::invalid_argument("pure_state_paradox: settings '" + settings[j].label + "' and '" +
                                            settings[i].label + "' coincide");
            }
        }
    }

    ParadoxCertificate cert;
    cert.k = settings.size();
    cert.k_setting_extension = cert.k > 2;
    cert.tolerances = tol;
    for (const auto& s : settings) cert.labels.push_back(s.label);

    if (!psi.entangled()) {
        cert.verdict = ParadoxVerdict::NotApplicableSeparable;
        cert.reason = "separable: paradox not applicable";
        return cert;
    }

    // Inputs are validated above, so any rejection from here on is a numerical breakdown.
    Assemblage assemblage;
    try {
        assemblage = conditional_states(psi, settings, tol);
        cert.purity = purity_profile(assemblage, tol);
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("pure_state_paradox: ") + e.what());
    }
    cert.no_signalling_deviation = no_signalling_check(assemblage);
    if (cert.no_signalling_deviation > tol.eig) {
        throw NumericalError("pure_state_paradox: no-signalling deviation " +
                             std::to_string(cert.no_signalling_deviation) + " exceeds tolerance");
    }
    if (!cert.purity.all_rank_one()) {
        throw NumericalError("pure_state_paradox: conditional state of a pure state is not rank one (residual mass " +
                             std::to_string(cert.purity.max_residual_mass()) + ")");
    }

    cert.quantum_trace_sum = assemblage.bob_reduced.trace().real();
    for (const auto& row : assemblage.states)
        for (const auto& s : row) cert.lhs_trace_sum += s.trace().real();

    const double min_dist = cert.purity.min_distance();
    if (!(min_dist > tol.state_eq)) {
        cert.verdict = ParadoxVerdict::DegenerateSettingGeometry;
        cert.reason = "degenerate setting geometry: two conditional states coincide (trace distance " +
                      std::to_string(min_dist) + ")";
        return cert;
    }

    std::size_t next = 1;
    for (const auto& o : cert.purity.outcomes) {
        if (o.vacuous) continue;
        cert.collapsed.push_back({o.setting, o.outcome, next++, o.probability});
        cert.ensemble_weight_sum += o.probability;
    }

    if (std::abs(cert.lhs_trace_sum - static_cast<double>(cert.k)) > tol.lp ||
        std::abs(cert.quantum_trace_sum - 1.0) > tol.lp) {
        throw NumericalError("pure_state_paradox: trace sums " + std::to_string(cert.lhs_trace_sum) + " / " +
                             std::to_string(cert.quantum_trace_sum) + " breach tolerance");
    }
    cert.applicable = true;
    cert.verdict = ParadoxVerdict::Contradiction;
    cert.reason = cert.k_setting_extension ? "k-setting extension of the two-setting collapse"
                                           : "two-setting collapse";
    return cert;
}

// ---------------------------------------------------------------------------
// LHS feasibility over a fixed hidden-state ansatz

enum class FeasibilityStatus { FeasibleModelFound, InfeasibleWithinAnsatz };

inline const char* to_string(FeasibilityStatus s) {
    return s == FeasibilityStatus::FeasibleModelFound ? "feasible-model-found" : "infeasible-within-ansatz";
}

struct FeasibilityOutcome {
    FeasibilityStatus status = FeasibilityStatus::InfeasibleWithinAnsatz;
    std::optional<LHSModel> model;
    double residual = 0;        // phase-1 objective (minimal L1 violation)
    double max_residual = 0;    // largest single-constraint violation at that point
    double reconstruction_deviation = 0;
    std::size_t iterations = 0;
    std::size_t unknowns = 0;
    std::size_t constraints = 0;
    std::vector<std::size_t> kept_candidates;  // candidate index per hidden state of `model`
};

/// Normalized non-vacuous conditional states followed by rho_B.
inline std::vector<ComplexMatrix> default_candidates(const Assemblage& a, const Tolerances& tol = {}) {
    std::vector<ComplexMatrix> out;
    for (const auto& row : a.states)
        for (const auto& s : row) {
            const double p = s.trace().real();
            if (p > tol.rank1) out.push_back(s * Complex{1.0 / p, 0.0});
        }
    out.push_back(a.bob_reduced);
    return out;
}

namespace detail {

// d_B^2 real components of a Hermitian matrix: diagonal, Re and Im of the upper triangle.
inline std::vector<double> hermitian_components(const ComplexMatrix& m) {
    const std::size_t d = m.rows();
    std::vector<double> out;
    out.reserve(d * d);
    for (std::size_t i = 0; i < d; ++i) out.push_back(m(i, i).real());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) out.push_back(m(i, j).real());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) out.push_back(m(i, j).imag());
    return out;
}

// Outcome that deterministic strategy `s` assigns to setting n (mixed radix, setting 0 fastest).
inline std::size_t strategy_outcome(std::size_t s, std::size_t n, const std::vector<std::size_t>& radix) {
    for (std::size_t i = 0; i < n; ++i) s /= radix[i];
    return s % radix[n];
}

}  // namespace detail

/// Searches for w_{c,D} >= 0 with rho~^n_a = sum_c sum_{D: D(n)=a} w_{c,D} rho_c.
/// A feasible answer is a complete LHS certificate; infeasibility only rules out this ansatz.
inline FeasibilityOutcome lhs_feasibility_lp(const Assemblage& a, const std::vector<ComplexMatrix>& candidates,
                                             const Tolerances& tol = {}) {
    tol.validate();
    if (candidates.empty()) throw std::invalid_argument("lhs_feasibility_lp: no candidate hidden states");
    if (a.states.empty()) throw std::invalid_argument("lhs_feasibility_lp: empty assemblage");
    const std::size_t dB = a.bob_reduced.rows();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& rho = candidates[c];
        if (rho.rows() != dB || rho.cols() != dB) {
            throw std::invalid_argument("lhs_feasibility_lp: candidate " + std::to_string(c) + " is " +
                                        dims_string(rho.rows(), rho.cols()) + ", Bob has dimension " + std::to_string(dB));
        }
        if (!is_hermitian(rho, tol.herm) || std::abs(rho.trace() - 1.0) > tol.eig) {
            throw std::invalid_argument("lhs_feasibility_lp: candidate " + std::to_string(c) + " is not a density matrix");
        }
    }

    std::vector<std::size_t> radix;
    std::size_t strategies = 1;
    for (const auto& row : a.states) {
        if (row.empty()) throw std::invalid_argument("lhs_feasibility_lp: setting without outcomes");
        radix.push_back(row.size());
        strategies *= row.size();
        if (strategies * candidates.size() > 2'000'000) {
            throw std::invalid_argument("lhs_feasibility_lp: too many deterministic strategies");
        }
    }

    const std::size_t comps = dB * dB;
    const std::size_t unknowns = candidates.size() * strategies;
    LinearSystem sys(a.total_outcomes() * comps, unknowns);
    std::vector<std::vector<double>> cand_comps;
    for (const auto& c : candidates) cand_comps.push_back(detail::hermitian_components(c));

    std::size_t block = 0;
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        for (std::size_t k = 0; k < a.states[n].size(); ++k, ++block) {
            const auto target = detail::hermitian_components(a.states[n][k]);
            for (std::size_t r = 0; r < comps; ++r) sys.b[block * comps + r] = target[r];
            for (std::size_t s = 0; s < strategies; ++s) {
                if (detail::strategy_outcome(s, n, radix) != k) continue;
                for (std::size_t c = 0; c < candidates.size(); ++c)
                    for (std::size_t r = 0; r < comps; ++r) sys.at(block * comps + r, c * strategies + s) = cand_comps[c][r];
            }
        }
    }

    SimplexOptions opt;
    opt.feasibility_tol = tol.lp;
    const PhaseOneResult lp = phase_one(sys, opt);

    FeasibilityOutcome out;
    out.residual = lp.objective;
    out.max_residual = lp.max_residual;
    out.iterations = lp.iterations;
    out.unknowns = unknowns;
    out.constraints = sys.rows;
    if (!lp.feasible) return out;

    LHSModel model;
    model.responses.assign(a.states.size(), {});
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double weight = 0.0;
        for (std::size_t s = 0; s < strategies; ++s) weight += lp.x[c * strategies + s];
        if (weight <= tol.lp) continue;
        model.hidden.push_back({weight, candidates[c]});
        out.kept_candidates.push_back(c);
        for (std::size_t n = 0; n < a.states.size(); ++n) {
            std::vector<double> dist(radix[n], 0.0);
            for (std::size_t s = 0; s < strategies; ++s) dist[detail::strategy_outcome(s, n, radix)] += lp.x[c * strategies + s];
            for (double& p : dist) p /= weight;
            model.responses[n].push_back(std::move(dist));
        }
    }
    if (model.hidden.empty()) return out;

    std::vector<MeasurementSetting> shells;
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        MeasurementSetting s{n < a.labels.size() ? a.labels[n] : std::to_string(n), {}};
        s.projectors.assign(radix[n], ComplexMatrix(a.dim_a, a.dim_a));
        shells.push_back(std::move(s));
    }
    out.reconstruction_deviation = assemblage_deviation(lhs_reconstruct(model, shells), a);
    if (out.reconstruction_deviation > tol.lp) {
        throw NumericalError("lhs_feasibility_lp: recovered model misses the assemblage by " +
                             std::to_string(out.reconstruction_deviation));
    }
    out.status = FeasibilityStatus::FeasibleModelFound;
    out.model = std::move(model);
    return out;
}

}  // namespace steerkit
