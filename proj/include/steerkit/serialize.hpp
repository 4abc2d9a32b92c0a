#pragma once

// JSON encodings of the domain types. Complex numbers are [re, im] pairs and
// matrices are row-major arrays of rows. Doubles use nlohmann's shortest
// round-trip formatting, so a parse of the dump recovers every bit.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "steerkit/assemblage.hpp"
#include "steerkit/ghz.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/measurements.hpp"
#include "steerkit/states.hpp"
#include "steerkit/steering.hpp"

namespace steerkit::json_io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex number must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json vector_to_json(std::span<const Complex> v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

inline ComplexVector vector_from_json(const json& j) {
    ComplexVector v;
    for (const auto& z : j) v.push_back(complex_from_json(z));
    return v;
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
    ComplexMatrix m(j.size(), j[0].size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (j[i].size() != m.cols()) throw std::invalid_argument("matrix rows have different lengths");
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

/// NaN and infinities have no JSON spelling; they become null.
inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json state_to_json(const BipartitePureState& psi) {
    return {{"dims", {psi.dim_a(), psi.dim_b()}},
            {"amplitudes", vector_to_json(psi.vector())},
            {"schmidtCoefficients", psi.schmidt().coeffs},
            {"entangled", psi.entangled()}};
}

inline BipartitePureState state_from_json(const json& j, const Tolerances& tol = {}) {
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    if (dims.size() != 2) throw std::invalid_argument("bipartite state needs two dims");
    return BipartitePureState(vector_from_json(j.at("amplitudes")), dims[0], dims[1], tol);
}

inline json setting_to_json(const MeasurementSetting& s) {
    json projectors = json::array();
    for (const auto& p : s.projectors) projectors.push_back(matrix_to_json(p));
    return {{"label", s.label}, {"projectors", std::move(projectors)}};
}

inline MeasurementSetting setting_from_json(const json& j) {
    MeasurementSetting s;
    s.label = j.at("label").get<std::string>();
    for (const auto& p : j.at("projectors")) s.projectors.push_back(matrix_from_json(p));
    return s;
}

inline json assemblage_to_json(const Assemblage& a) {
    json settings = json::array();
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        json outcomes = json::array();
        for (const auto& s : a.states[n]) {
            outcomes.push_back({{"probability", s.trace().real()}, {"state", matrix_to_json(s)}});
        }
        settings.push_back({{"label", n < a.labels.size() ? a.labels[n] : std::to_string(n)}, {"outcomes", outcomes}});
    }
    return {{"dims", {a.dim_a, a.dim_b}}, {"settings", settings}, {"bobReduced", matrix_to_json(a.bob_reduced)}};
}

inline Assemblage assemblage_from_json(const json& j) {
    Assemblage a;
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    a.dim_a = dims.at(0);
    a.dim_b = dims.at(1);
    a.bob_reduced = matrix_from_json(j.at("bobReduced"));
    for (const auto& s : j.at("settings")) {
        a.labels.push_back(s.at("label").get<std::string>());
        auto& row = a.states.emplace_back();
        for (const auto& o : s.at("outcomes")) row.push_back(matrix_from_json(o.at("state")));
    }
    return a;
}

inline json purity_to_json(const PurityProfile& p) {
    json outcomes = json::array();
    for (const auto& o : p.outcomes) {
        outcomes.push_back({{"setting", o.setting},
                            {"outcome", o.outcome},
                            {"probability", o.probability},
                            {"vacuous", o.vacuous},
                            {"rankOne", o.rank_one},
                            {"residualMass", o.residual_mass}});
    }
    json distance = json::array();
    for (const auto& row : p.distance) {
        json r = json::array();
        for (double d : row) r.push_back(finite_or_null(d));
        distance.push_back(std::move(r));
    }
    return {{"outcomes", outcomes},
            {"traceDistances", distance},
            {"minDistance", finite_or_null(p.min_distance())},
            {"maxResidualMass", p.max_residual_mass()}};
}

inline json tolerances_to_json(const Tolerances& t) {
    return {{"herm", t.herm}, {"eig", t.eig}, {"stateEq", t.state_eq}, {"rank1", t.rank1}, {"lp", t.lp}};
}

inline Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    t.herm = j.at("herm").get<double>();
    t.eig = j.at("eig").get<double>();
    t.state_eq = j.at("stateEq").get<double>();
    t.rank1 = j.at("rank1").get<double>();
    t.lp = j.at("lp").get<double>();
    return t;
}

inline json certificate_to_json(const ParadoxCertificate& c) {
    json collapsed = json::array();
    for (const auto& step : c.collapsed) {
        collapsed.push_back({{"setting", step.setting},
                             {"outcome", step.outcome},
                             {"hiddenIndex", step.hidden_index},
                             {"weight", step.weight}});
    }
    return {{"applicable", c.applicable},
            {"verdict", to_string(c.verdict)},
            {"reason", c.reason},
            {"labels", c.labels},
            {"k", c.k},
            {"kSettingExtension", c.k_setting_extension},
            {"lhsTraceSum", c.lhs_trace_sum},
            {"quantumTraceSum", c.quantum_trace_sum},
            {"contradiction", c.contradiction()},
            {"ensembleWeightSum", c.ensemble_weight_sum},
            {"noSignallingDeviation", c.no_signalling_deviation},
            {"collapsed", collapsed},
            {"purity", purity_to_json(c.purity)},
            {"tolerances", tolerances_to_json(c.tolerances)}};
}

inline json model_to_json(const LHSModel& m) {
    json hidden = json::array();
    for (const auto& h : m.hidden) hidden.push_back({{"weight", h.weight}, {"state", matrix_to_json(h.state)}});
    return {{"hidden", hidden}, {"responses", m.responses}};
}

inline LHSModel model_from_json(const json& j) {
    LHSModel m;
    for (const auto& h : j.at("hidden")) m.hidden.push_back({h.at("weight").get<double>(), matrix_from_json(h.at("state"))});
    m.responses = j.at("responses").get<std::vector<std::vector<std::vector<double>>>>();
    return m;
}

inline json model_check_to_json(const LHSModelCheck& c) {
    return {{"minWeight", c.min_weight},
            {"weightSumDeviation", c.weight_sum_deviation},
            {"responseSumDeviation", c.response_sum_deviation},
            {"minResponse", c.min_response},
            {"bobReducedDeviation", c.bob_reduced_deviation},
            {"pass", c.pass}};
}

inline json feasibility_to_json(const FeasibilityOutcome& f) {
    json out{{"status", to_string(f.status)},
             {"residual", f.residual},
             {"maxResidual", f.max_residual},
             {"reconstructionDeviation", f.reconstruction_deviation},
             {"iterations", f.iterations},
             {"unknowns", f.unknowns},
             {"constraints", f.constraints},
             {"keptCandidates", f.kept_candidates}};
    out["model"] = f.model ? model_to_json(*f.model) : json(nullptr);
    return out;
}

inline json ghz_to_json(const GhzExpectations& e, const GhzLhvEnumeration& lhv) {
    json ops = json::array();
    for (std::size_t k = 0; k < 4; ++k) ops.push_back(kGhzOperatorLabels[k]);
    return {{"operators", ops},
            {"expectations", e.values},
            {"eigenResiduals", e.eigen_residuals},
            {"eigenstate", e.eigenstate},
            {"assignmentsChecked", lhv.assignments_checked},
            {"satisfyingAssignments", lhv.satisfying_assignments},
            {"witnessProduct", lhv.witness_product}};
}

}  // namespace steerkit::json_io
