#pragma once

// Scenario runner behind the command-line tool: a RunConfig goes in, a
// ReportDocument with an exit code comes out. Exit codes: 0 completed with the
// expected verdict, 1 precondition or validation failure, 2 numerical failure.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "steerkit/serialize.hpp"

namespace steerkit::report {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "steerkit-report/1";

enum class Scenario { ParadoxQubit, ParadoxQudit, ParadoxNopa, SeparableLhs, Feasibility, Ghz, Sweep };

inline constexpr std::array<std::pair<Scenario, std::string_view>, 7> kScenarioNames{{
    {Scenario::ParadoxQubit, "paradox-qubit"},
    {Scenario::ParadoxQudit, "paradox-qudit"},
    {Scenario::ParadoxNopa, "paradox-nopa"},
    {Scenario::SeparableLhs, "separable-lhs"},
    {Scenario::Feasibility, "feasibility"},
    {Scenario::Ghz, "ghz"},
    {Scenario::Sweep, "sweep"},
}};

inline std::string to_string(Scenario s) {
    for (const auto& [value, name] : kScenarioNames)
        if (value == s) return std::string(name);
    return "unknown";
}

inline Scenario scenario_from_string(std::string_view name) {
    std::string known;
    for (const auto& [value, n] : kScenarioNames) {
        if (n == name) return value;
        known += known.empty() ? "" : ", ";
        known += n;
    }
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "' (expected one of " + known + ")");
}

enum ExitCode : int { kExitOk = 0, kExitPrecondition = 1, kExitNumerical = 2 };

inline const char* status_name(int exit_code) {
    switch (exit_code) {
        case kExitOk: return "completed";
        case kExitPrecondition: return "precondition-failure";
        default: return "numerical-failure";
    }
}

// ---------------------------------------------------------------------------
// Text parsing helpers shared by the CLI and config files

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        const auto item = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (item.empty()) throw std::invalid_argument("empty item in list '" + std::string(text) + "'");
        out.emplace_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view text) {
    const auto t = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || end != t.data() + t.size() || !std::isfinite(value)) {
        throw std::invalid_argument("not a finite number: '" + std::string(text) + "'");
    }
    return value;
}

inline std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(item));
    return out;
}

/// Either a comma list "0.1,0.2" or an inclusive linear range "start:stop:count".
inline std::vector<double> parse_grid(std::string_view text) {
    if (text.find(':') == std::string_view::npos) return parse_number_list(text);
    const auto parts = split_list(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:count");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double count = parse_double(parts[2]);
    if (count < 0 || count != std::floor(count)) throw std::invalid_argument("grid count must be a nonnegative integer");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? start : start + (stop - start) * double(i) / double(n - 1));
    return out;
}

/// Setting grammar: z, x, y (qubit Pauli axes), n:a:b:c (Bloch direction, normalized),
/// angle:alpha (cos/sin basis), Z (computational basis), X (discrete Fourier basis).
inline MeasurementSetting resolve_setting(const std::string& token, std::size_t dim) {
    const auto need_qubit = [&] {
        if (dim != 2) throw std::invalid_argument("setting '" + token + "' needs a qubit, Alice has dimension " + std::to_string(dim));
    };
    if (token == "z" || token == "x" || token == "y") {
        need_qubit();
        const std::array<double, 3> n = token == "z" ? std::array<double, 3>{0, 0, 1}
                                       : token == "x" ? std::array<double, 3>{1, 0, 0}
                                                     : std::array<double, 3>{0, 1, 0};
        return bloch_projectors(n, token);
    }
    if (token == "Z") return computational_basis(dim);
    if (token == "X") return fourier_mub_basis(dim);
    if (token.rfind("n:", 0) == 0) {
        need_qubit();
        const auto parts = split_list(std::string_view(token).substr(2), ':');
        if (parts.size() != 3) throw std::invalid_argument("setting '" + token + "' must be n:a:b:c");
        std::array<double, 3> n{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (!(len > 0)) throw std::invalid_argument("setting '" + token + "' has a zero Bloch vector");
        for (auto& c : n) c /= len;
        return bloch_projectors(n, token);
    }
    if (token.rfind("angle:", 0) == 0) {
        need_qubit();
        return angle_projectors(parse_double(std::string_view(token).substr(6)), token);
    }
    throw std::invalid_argument("unknown setting '" + token + "' (expected z, x, y, n:a:b:c, angle:alpha, Z or X)");
}

// ---------------------------------------------------------------------------
// Configuration

struct SweepSpec {
    Scenario scenario = Scenario::ParadoxQubit;
    std::string parameter;  // theta, d, r or k
    std::vector<double> grid;
    unsigned threads = 0;  // 0: one per hardware thread

    bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
    Scenario scenario = Scenario::ParadoxQubit;
    std::optional<double> theta;
    std::optional<std::size_t> d;
    std::optional<double> r;
    std::optional<std::size_t> k;
    std::vector<double> lambdas;
    std::vector<std::string> settings;
    std::optional<double> beta;  // product-state angle: |beta> = cos b |0> + sin b |1>
    std::string candidates = "default";
    Tolerances tol;
    std::string output;
    std::string format = "json";
    bool matrices = false;
    SweepSpec sweep;

    bool operator==(const RunConfig&) const = default;

    void validate() const {
        for (double t : {tol.herm, tol.eig, tol.state_eq, tol.rank1, tol.lp}) {
            if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("tolerances must be positive and finite");
        }
        if (format != "json" && format != "text") throw std::invalid_argument("format must be json or text");
        if (candidates != "default" && candidates != "pauli" && candidates != "conditionals") {
            throw std::invalid_argument("candidates must be default, pauli or conditionals");
        }
        const auto require = [&](bool ok, const char* what) {
            if (!ok) throw std::invalid_argument(to_string(scenario) + " requires " + what);
        };
        switch (scenario) {
            case Scenario::ParadoxQubit: require(theta.has_value(), "--theta"); break;
            case Scenario::ParadoxQudit:
                require(d.has_value() || !lambdas.empty(), "--d or --lambdas");
                if (d && !lambdas.empty() && *d != lambdas.size()) {
                    throw std::invalid_argument("--d disagrees with the number of --lambdas");
                }
                break;
            case Scenario::ParadoxNopa: require(r.has_value() && d.has_value(), "--r and --d"); break;
            case Scenario::SeparableLhs: require(beta.has_value(), "--beta"); break;
            case Scenario::Feasibility:
                require(theta.has_value() != beta.has_value(), "exactly one of --theta or --beta");
                break;
            case Scenario::Ghz: break;
            case Scenario::Sweep: {
                const auto& p = sweep.parameter;
                require(p == "theta" || p == "d" || p == "r" || p == "k", "--parameter theta, d, r or k");
                require(sweep.scenario != Scenario::Sweep && sweep.scenario != Scenario::Ghz,
                        "a --sweep-scenario other than sweep or ghz");
                if (sweep.grid.empty()) throw std::invalid_argument("sweep grid is empty");
                break;
            }
        }
    }
};

/// Settings used for a run: explicit specs (first k when k is set) or the scenario default.
inline std::vector<std::string> effective_setting_specs(const RunConfig& cfg) {
    if (!cfg.settings.empty()) {
        if (!cfg.k) return cfg.settings;
        if (*cfg.k > cfg.settings.size()) {
            throw std::invalid_argument("k = " + std::to_string(*cfg.k) + " exceeds the " +
                                        std::to_string(cfg.settings.size()) + " listed settings");
        }
        return {cfg.settings.begin(), cfg.settings.begin() + static_cast<std::ptrdiff_t>(*cfg.k)};
    }
    const bool qudit = cfg.scenario == Scenario::ParadoxQudit || cfg.scenario == Scenario::ParadoxNopa;
    if (qudit) {
        if (cfg.k && *cfg.k != 2) throw std::invalid_argument("qudit scenarios need explicit settings for k != 2");
        return {"Z", "X"};
    }
    static const std::vector<std::string> pool{"z", "x", "y", "n:1:1:1"};
    const std::size_t k = cfg.k.value_or(2);
    if (k < 2 || k > pool.size()) throw std::invalid_argument("default qubit settings support k in [2, 4]");
    return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k)};
}

inline std::vector<MeasurementSetting> effective_settings(const RunConfig& cfg, std::size_t dim) {
    std::vector<MeasurementSetting> out;
    for (const auto& token : effective_setting_specs(cfg)) out.push_back(resolve_setting(token, dim));
    return out;
}

template <class T>
json optional_to_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

inline json config_to_json(const RunConfig& c) {
    return {{"scenario", to_string(c.scenario)},
            {"theta", optional_to_json(c.theta)},
            {"d", optional_to_json(c.d)},
            {"r", optional_to_json(c.r)},
            {"k", optional_to_json(c.k)},
            {"lambdas", c.lambdas},
            {"settings", c.settings},
            {"beta", optional_to_json(c.beta)},
            {"candidates", c.candidates},
            {"tolerances", json_io::tolerances_to_json(c.tol)},
            {"output", c.output},
            {"format", c.format},
            {"matrices", c.matrices},
            {"sweep",
             {{"scenario", to_string(c.sweep.scenario)},
              {"parameter", c.sweep.parameter},
              {"grid", c.sweep.grid},
              {"threads", c.sweep.threads}}}};
}

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    c.theta = optional_from_json<double>(j, "theta");
    c.d = optional_from_json<std::size_t>(j, "d");
    c.r = optional_from_json<double>(j, "r");
    c.k = optional_from_json<std::size_t>(j, "k");
    c.lambdas = j.at("lambdas").get<std::vector<double>>();
    c.settings = j.at("settings").get<std::vector<std::string>>();
    c.beta = optional_from_json<double>(j, "beta");
    c.candidates = j.at("candidates").get<std::string>();
    c.tol = json_io::tolerances_from_json(j.at("tolerances"));
    c.output = j.at("output").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.matrices = j.at("matrices").get<bool>();
    const auto& s = j.at("sweep");
    c.sweep.scenario = scenario_from_string(s.at("scenario").get<std::string>());
    c.sweep.parameter = s.at("parameter").get<std::string>();
    c.sweep.grid = s.at("grid").get<std::vector<double>>();
    c.sweep.threads = s.at("threads").get<unsigned>();
    return c;
}

// ---------------------------------------------------------------------------
// Report document

struct InvariantCheck {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;

    bool operator==(const InvariantCheck&) const = default;
};

struct InvariantSummary {
    std::optional<double> no_signalling_deviation;
    std::optional<double> max_purity_residual;
    std::vector<InvariantCheck> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
    void add(std::string name, double value, double bound) {
        checks.push_back({std::move(name), value, bound, value <= bound});
    }
    bool operator==(const InvariantSummary&) const = default;
};

struct ReportDocument {
    std::string schema = kSchemaVersion;
    RunConfig config;
    std::string status;
    int exit_code = kExitOk;
    json result;  // scenario payload; null when the run stopped before producing one
    InvariantSummary invariants;
    std::optional<std::string> error;
    double duration_seconds = 0;

    bool operator==(const ReportDocument& o) const {
        return schema == o.schema && config == o.config && status == o.status && exit_code == o.exit_code &&
               result == o.result && invariants == o.invariants && error == o.error &&
               duration_seconds == o.duration_seconds;
    }
};

inline json document_to_json(const ReportDocument& d) {
    json checks = json::array();
    for (const auto& c : d.invariants.checks) {
        checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
    }
    return {{"schema", d.schema},
            {"config", config_to_json(d.config)},
            {"status", d.status},
            {"exitCode", d.exit_code},
            {"result", d.result},
            {"invariants",
             {{"noSignallingDeviation", optional_to_json(d.invariants.no_signalling_deviation)},
              {"maxPurityResidual", optional_to_json(d.invariants.max_purity_residual)},
              {"checks", checks}}},
            {"error", optional_to_json(d.error)},
            {"durationSeconds", d.duration_seconds}};
}

inline ReportDocument document_from_json(const json& j) {
    ReportDocument d;
    d.schema = j.at("schema").get<std::string>();
    if (d.schema != kSchemaVersion) throw std::invalid_argument("unsupported report schema '" + d.schema + "'");
    d.config = config_from_json(j.at("config"));
    d.status = j.at("status").get<std::string>();
    d.exit_code = j.at("exitCode").get<int>();
    d.result = j.at("result");
    const auto& inv = j.at("invariants");
    d.invariants.no_signalling_deviation = optional_from_json<double>(inv, "noSignallingDeviation");
    d.invariants.max_purity_residual = optional_from_json<double>(inv, "maxPurityResidual");
    for (const auto& c : inv.at("checks")) {
        d.invariants.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                                       c.at("bound").get<double>(), c.at("pass").get<bool>()});
    }
    d.error = optional_from_json<std::string>(j, "error");
    d.duration_seconds = j.at("durationSeconds").get<double>();
    return d;
}

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object() && !j.empty()) {
        for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array() && !j.empty()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

}  // namespace detail

/// JSON (two-space indent) or one "dotted.key: value" line per leaf.
inline std::string render(const ReportDocument& d, const std::string& format) {
    const json j = document_to_json(d);
    if (format == "text") {
        std::string out;
        detail::flatten(j, "", out);
        return out;
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioOutput {
    json result;
    InvariantSummary invariants;
    int exit_code = kExitOk;
};

namespace detail {

inline ComplexVector beta_vector(double b) { return {std::cos(b), std::sin(b)}; }

inline std::vector<ComplexMatrix> candidate_set(const RunConfig& cfg, const Assemblage& a) {
    if (cfg.candidates == "pauli") {
        if (a.dim_b != 2) throw std::invalid_argument("pauli candidates need a qubit on Bob's side");
        std::vector<ComplexMatrix> out;
        for (const auto& axis : {std::array<double, 3>{0, 0, 1}, std::array<double, 3>{1, 0, 0}, std::array<double, 3>{0, 1, 0}})
            for (auto& p : bloch_projectors(axis).projectors) out.push_back(std::move(p));
        return out;
    }
    if (cfg.candidates == "conditionals") {
        std::vector<ComplexMatrix> out;
        for (const auto& o : purity_profile(a, cfg.tol).outcomes)
            if (!o.vacuous) out.push_back(o.normalized);
        return out;
    }
    return default_candidates(a, cfg.tol);
}

inline ScenarioOutput paradox(const RunConfig& cfg, const BipartitePureState& psi, json extra = json::object()) {
    const auto settings = effective_settings(cfg, psi.dim_a());
    const auto cert = pure_state_paradox(psi, settings, cfg.tol);
    ScenarioOutput out;
    out.result = json_io::certificate_to_json(cert);
    for (auto& [key, value] : extra.items()) out.result[key] = value;
    if (cfg.matrices) {
        out.result["state"] = json_io::state_to_json(psi);
        json s = json::array();
        for (const auto& m : settings) s.push_back(json_io::setting_to_json(m));
        out.result["settings"] = s;
        out.result["assemblage"] = json_io::assemblage_to_json(conditional_states(psi, settings, cfg.tol));
    }
    if (!cert.applicable) {
        out.exit_code = kExitPrecondition;
        return out;
    }
    out.invariants.no_signalling_deviation = cert.no_signalling_deviation;
    out.invariants.max_purity_residual = cert.purity.max_residual_mass();
    out.invariants.add("lhsTraceSum-k", std::abs(cert.lhs_trace_sum - double(cert.k)), cfg.tol.state_eq);
    out.invariants.add("quantumTraceSum-1", std::abs(cert.quantum_trace_sum - 1.0), cfg.tol.state_eq);
    out.invariants.add("noSignalling", cert.no_signalling_deviation, cfg.tol.eig);
    out.invariants.add("purityResidual", cert.purity.max_residual_mass(), cfg.tol.rank1);
    out.exit_code = out.invariants.all_pass() ? kExitOk : kExitNumerical;
    return out;
}

inline ScenarioOutput paradox_qudit(const RunConfig& cfg) {
    std::vector<double> lambdas = cfg.lambdas;
    if (lambdas.empty()) {
        if (*cfg.d < 2) throw std::invalid_argument("d must be at least 2");
        lambdas.assign(*cfg.d, 1.0 / std::sqrt(double(*cfg.d)));
    }
    return paradox(cfg, qudit_schmidt_state(lambdas, cfg.tol), {{"schmidtCoefficients", lambdas}});
}

inline ScenarioOutput paradox_nopa(const RunConfig& cfg) {
    const auto nopa = nopa_truncated(*cfg.r, *cfg.d, cfg.tol);
    return paradox(cfg, nopa.state,
                   {{"nopa", {{"r", *cfg.r}, {"d", *cfg.d}, {"coefficients", nopa.coefficients},
                              {"truncationWeight", nopa.truncation_weight}}}});
}

inline ScenarioOutput separable_lhs(const RunConfig& cfg) {
    const auto psi = separable_state(beta_vector(*cfg.beta), cfg.tol);
    const auto settings = effective_settings(cfg, 2);
    const auto assemblage = conditional_states(psi, settings, cfg.tol);
    const auto model = separable_lhs_model(psi, settings, cfg.tol);
    const auto check = check_lhs_model(model, assemblage.bob_reduced, cfg.tol);
    const double deviation = assemblage_deviation(lhs_reconstruct(model, settings), assemblage);
    const auto lp = lhs_feasibility_lp(assemblage, candidate_set(cfg, assemblage), cfg.tol);

    ScenarioOutput out;
    out.result = {{"model", json_io::model_to_json(model)},
                  {"modelCheck", json_io::model_check_to_json(check)},
                  {"reconstructionDeviation", deviation},
                  {"feasibility", json_io::feasibility_to_json(lp)}};
    if (cfg.matrices) out.result["assemblage"] = json_io::assemblage_to_json(assemblage);
    const double ns = no_signalling_check(assemblage);
    out.invariants.no_signalling_deviation = ns;
    out.invariants.add("noSignalling", ns, cfg.tol.eig);
    out.invariants.add("reconstructionDeviation", deviation, cfg.tol.eig);
    out.invariants.add("modelCheck",
                       std::max({check.weight_sum_deviation, check.response_sum_deviation, check.bob_reduced_deviation,
                                 std::max(0.0, -check.min_response)}),
                       cfg.tol.lp);
    // rho_B = |beta><beta| is among the default candidates, so the ansatz always contains the model.
    if (cfg.candidates == "default") out.invariants.add("lpResidual", lp.residual, cfg.tol.lp);
    out.exit_code = out.invariants.all_pass() ? kExitOk : kExitNumerical;
    return out;
}

inline ScenarioOutput feasibility(const RunConfig& cfg) {
    const auto psi = cfg.theta ? theta_state(*cfg.theta, cfg.tol) : separable_state(beta_vector(*cfg.beta), cfg.tol);
    const auto settings = effective_settings(cfg, psi.dim_a());
    const auto assemblage = conditional_states(psi, settings, cfg.tol);
    const auto lp = lhs_feasibility_lp(assemblage, candidate_set(cfg, assemblage), cfg.tol);

    ScenarioOutput out;
    out.result = json_io::feasibility_to_json(lp);
    out.result["entangled"] = psi.entangled();
    if (cfg.matrices) out.result["assemblage"] = json_io::assemblage_to_json(assemblage);
    const double ns = no_signalling_check(assemblage);
    out.invariants.no_signalling_deviation = ns;
    out.invariants.add("noSignalling", ns, cfg.tol.eig);
    if (lp.model) {
        const auto check = check_lhs_model(*lp.model, assemblage.bob_reduced, cfg.tol);
        out.result["modelCheck"] = json_io::model_check_to_json(check);
        out.invariants.add("reconstructionDeviation", lp.reconstruction_deviation, cfg.tol.lp);
        // Pure entangled states admit no LHS model at all.
        out.invariants.add("entangledStateHasModel", psi.entangled() ? 1.0 : 0.0, 0.0);
    }
    out.exit_code = out.invariants.all_pass() ? kExitOk : kExitNumerical;
    return out;
}

inline ScenarioOutput ghz(const RunConfig& cfg) {
    const auto e = ghz_operator_expectations(ghz_state(), cfg.tol);
    const auto lhv = ghz_lhv_bruteforce();
    constexpr std::array<double, 4> targets{1, -1, -1, -1};
    double deviation = 0.0, residual = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        deviation = std::max(deviation, std::abs(e.values[i] - targets[i]));
        residual = std::max(residual, e.eigen_residuals[i]);
    }
    ScenarioOutput out;
    out.result = json_io::ghz_to_json(e, lhv);
    out.invariants.add("expectationDeviation", deviation, cfg.tol.herm);
    out.invariants.add("eigenResidual", residual, cfg.tol.eig);
    out.invariants.add("satisfyingAssignments", double(lhv.satisfying_assignments), 0.0);
    out.exit_code = out.invariants.all_pass() ? kExitOk : kExitNumerical;
    return out;
}

inline std::size_t grid_integer(double v, const char* name) {
    if (v < 0 || v != std::floor(v)) throw std::invalid_argument(std::string(name) + " grid values must be integers");
    return static_cast<std::size_t>(v);
}

}  // namespace detail

inline ReportDocument run(const RunConfig& cfg);

/// One config per grid point; the swept parameter replaces the base value.
inline std::vector<RunConfig> sweep_points(const RunConfig& cfg) {
    cfg.validate();
    std::vector<RunConfig> points;
    for (double v : cfg.sweep.grid) {
        RunConfig p = cfg;
        p.scenario = cfg.sweep.scenario;
        p.sweep = SweepSpec{};
        p.output.clear();
        const auto& name = cfg.sweep.parameter;
        if (name == "theta") p.theta = v;
        if (name == "r") p.r = v;
        if (name == "d") {
            p.d = detail::grid_integer(v, "d");
            p.lambdas.clear();
        }
        if (name == "k") p.k = detail::grid_integer(v, "k");
        points.push_back(std::move(p));
    }
    return points;
}

inline std::vector<ReportDocument> sweep(const RunConfig& cfg) {
    const auto points = sweep_points(cfg);
    std::vector<ReportDocument> reports(points.size());
    unsigned workers = cfg.sweep.threads ? cfg.sweep.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) reports[i] = run(points[i]);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    return reports;
}

namespace detail {

inline ScenarioOutput sweep_scenario(const RunConfig& cfg) {
    const auto reports = sweep(cfg);
    ScenarioOutput out;
    json points = json::array();
    std::optional<double> min_c, max_c, max_ns, max_purity;
    std::size_t completed = 0;
    for (const auto& r : reports) {
        points.push_back(document_to_json(r));
        out.exit_code = std::max(out.exit_code, r.exit_code);
        completed += r.exit_code == kExitOk;
        if (r.result.is_object() && r.result.contains("contradiction") && r.result.value("applicable", false)) {
            const double c = r.result["contradiction"].get<double>();
            min_c = std::min(min_c.value_or(c), c);
            max_c = std::max(max_c.value_or(c), c);
        }
        if (const auto& ns = r.invariants.no_signalling_deviation) max_ns = std::max(max_ns.value_or(*ns), *ns);
        if (const auto& p = r.invariants.max_purity_residual) max_purity = std::max(max_purity.value_or(*p), *p);
    }
    out.invariants.no_signalling_deviation = max_ns;
    out.invariants.max_purity_residual = max_purity;
    out.result = {{"parameter", cfg.sweep.parameter},
                  {"scenario", to_string(cfg.sweep.scenario)},
                  {"points", points},
                  {"summary",
                   {{"points", reports.size()},
                    {"completed", completed},
                    {"minContradiction", optional_to_json(min_c)},
                    {"maxContradiction", optional_to_json(max_c)},
                    {"maxNoSignallingDeviation", optional_to_json(max_ns)}}}};
    return out;
}

inline ScenarioOutput dispatch(const RunConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::ParadoxQubit: return paradox(cfg, theta_state(*cfg.theta, cfg.tol));
        case Scenario::ParadoxQudit: return paradox_qudit(cfg);
        case Scenario::ParadoxNopa: return paradox_nopa(cfg);
        case Scenario::SeparableLhs: return separable_lhs(cfg);
        case Scenario::Feasibility: return feasibility(cfg);
        case Scenario::Ghz: return ghz(cfg);
        case Scenario::Sweep: return sweep_scenario(cfg);
    }
    throw std::invalid_argument("unknown scenario");
}

}  // namespace detail

/// Never throws for bad input or numerical trouble; both land in the document's exit code.
inline ReportDocument run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ReportDocument doc;
    doc.config = cfg;
    try {
        cfg.validate();
        auto out = detail::dispatch(cfg);
        doc.result = std::move(out.result);
        doc.invariants = std::move(out.invariants);
        doc.exit_code = out.exit_code;
    } catch (const NumericalError& e) {
        doc.exit_code = kExitNumerical;
        doc.error = e.what();
    } catch (const std::logic_error& e) {
        doc.exit_code = kExitPrecondition;
        doc.error = e.what();
    } catch (const std::exception& e) {
        doc.exit_code = kExitNumerical;
        doc.error = e.what();
    }
    doc.status = status_name(doc.exit_code);
    doc.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return doc;
}

}  // namespace steerkit::report
