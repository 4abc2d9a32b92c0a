#include "steerkit/report.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace steerkit;
using namespace steerkit::report;

namespace {

RunConfig qubit(double theta, std::vector<std::string> settings = {"z", "x"}) {
    RunConfig c;
    c.scenario = Scenario::ParadoxQubit;
    c.theta = theta;
    c.settings = std::move(settings);
    return c;
}

RunConfig sweep_of(Scenario inner, std::string parameter, std::vector<double> grid) {
    RunConfig c;
    c.scenario = Scenario::Sweep;
    c.sweep.scenario = inner;
    c.sweep.parameter = std::move(parameter);
    c.sweep.grid = std::move(grid);
    return c;
}

void expect_round_trip(const ReportDocument& doc) {
    const std::string first = document_to_json(doc).dump(2);
    const ReportDocument back = document_from_json(json::parse(first));
    EXPECT_TRUE(back == doc);
    EXPECT_EQ(document_to_json(back).dump(2), first);
}

}  // namespace

TEST(Parsing, Lists) {
    EXPECT_EQ(split_list(" z, x ,y"), (std::vector<std::string>{"z", "x", "y"}));
    EXPECT_TRUE(split_list("").empty());
    EXPECT_THROW(split_list("z,,x"), std::invalid_argument);
    EXPECT_EQ(parse_number_list("0.8,0.6"), (std::vector<double>{0.8, 0.6}));
    EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
    EXPECT_THROW(parse_double("nan"), std::invalid_argument);
    EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(Parsing, Grids) {
    EXPECT_EQ(parse_grid("2,3,4"), (std::vector<double>{2, 3, 4}));
    const auto g = parse_grid("0:1:5");
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[1], 0.25);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_EQ(parse_grid("0.3:9:1"), (std::vector<double>{0.3}));
    EXPECT_TRUE(parse_grid("0:1:0").empty());
    EXPECT_TRUE(parse_grid("").empty());
    EXPECT_THROW(parse_grid("0:1"), std::invalid_argument);
    EXPECT_THROW(parse_grid("0:1:2.5"), std::invalid_argument);
}

TEST(Parsing, SettingGrammar) {
    EXPECT_TRUE(same_projector_set(resolve_setting("z", 2), bloch_projectors({0, 0, 1})));
    EXPECT_TRUE(same_projector_set(resolve_setting("y", 2), bloch_projectors({0, 1, 0})));
    const double c = 1 / std::sqrt(3.0);
    const auto n = resolve_setting("n:1:1:1", 2);
    EXPECT_EQ(n.label, "n:1:1:1");
    EXPECT_LE(max_abs_diff(n.projectors[0], bloch_projectors({c, c, c}).projectors[0]), 1e-15);
    EXPECT_LE(max_abs_diff(resolve_setting("angle:0.3", 2).projectors[0], angle_projectors(0.3).projectors[0]), 1e-15);
    EXPECT_EQ(resolve_setting("Z", 5).outcomes(), 5u);
    EXPECT_TRUE(same_projector_set(resolve_setting("X", 3), fourier_mub_basis(3)));
    EXPECT_THROW(resolve_setting("x", 3), std::invalid_argument);
    EXPECT_THROW(resolve_setting("n:0:0:0", 2), std::invalid_argument);
    EXPECT_THROW(resolve_setting("n:1:2", 2), std::invalid_argument);
    EXPECT_THROW(resolve_setting("w", 2), std::invalid_argument);
}

TEST(RunConfigTest, ScenarioNames) {
    for (const auto& [value, name] : kScenarioNames) EXPECT_EQ(scenario_from_string(name), value);
    EXPECT_THROW(scenario_from_string("paradox"), std::invalid_argument);
}

TEST(RunConfigTest, RequiredFields) {
    RunConfig c;
    EXPECT_THROW(c.validate(), std::invalid_argument);  // paradox-qubit without theta
    c.theta = 0.5;
    EXPECT_NO_THROW(c.validate());
    c.tol.lp = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.tol.lp = 1e-8;
    c.format = "yaml";
    EXPECT_THROW(c.validate(), std::invalid_argument);

    RunConfig q;
    q.scenario = Scenario::ParadoxQudit;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    q.d = 3;
    q.lambdas = {0.8, 0.6};
    EXPECT_THROW(q.validate(), std::invalid_argument);

    RunConfig f;
    f.scenario = Scenario::Feasibility;
    f.theta = 0.3;
    f.beta = 0.3;
    EXPECT_THROW(f.validate(), std::invalid_argument);

    EXPECT_THROW(sweep_of(Scenario::ParadoxQubit, "theta", {}).validate(), std::invalid_argument);
    EXPECT_THROW(sweep_of(Scenario::Ghz, "theta", {1}).validate(), std::invalid_argument);
    EXPECT_THROW(sweep_of(Scenario::ParadoxQubit, "lambda", {1}).validate(), std::invalid_argument);
}

TEST(RunConfigTest, DefaultSettings) {
    RunConfig c = qubit(0.5, {});
    EXPECT_EQ(effective_setting_specs(c), (std::vector<std::string>{"z", "x"}));
    c.k = 4;
    EXPECT_EQ(effective_setting_specs(c), (std::vector<std::string>{"z", "x", "y", "n:1:1:1"}));
    c.k = 5;
    EXPECT_THROW(effective_setting_specs(c), std::invalid_argument);
    c.settings = {"angle:0.1", "angle:0.7", "y"};
    c.k = 2;
    EXPECT_EQ(effective_setting_specs(c), (std::vector<std::string>{"angle:0.1", "angle:0.7"}));
    RunConfig q;
    q.scenario = Scenario::ParadoxNopa;
    EXPECT_EQ(effective_setting_specs(q), (std::vector<std::string>{"Z", "X"}));
}

TEST(Run, ParadoxQubitExample) {
    const auto doc = run(qubit(0.7854));
    EXPECT_EQ(doc.exit_code, kExitOk);
    EXPECT_EQ(doc.status, "completed");
    EXPECT_EQ(doc.schema, "steerkit-report/1");
    EXPECT_NEAR(doc.result["lhsTraceSum"].get<double>(), 2.0, 1e-12);
    EXPECT_NEAR(doc.result["quantumTraceSum"].get<double>(), 1.0, 1e-12);
    EXPECT_TRUE(doc.invariants.all_pass());
    EXPECT_FALSE(doc.error.has_value());
    EXPECT_GE(doc.duration_seconds, 0.0);
}

TEST(Run, ExitCodeMatrix) {
    EXPECT_EQ(run(qubit(0.0)).exit_code, kExitPrecondition);
    EXPECT_EQ(run(qubit(0.5, {"z", "z"})).exit_code, kExitPrecondition);
    EXPECT_EQ(run(qubit(3.0)).exit_code, kExitPrecondition);

    RunConfig g;
    g.scenario = Scenario::Ghz;
    const auto ghz = run(g);
    EXPECT_EQ(ghz.exit_code, kExitOk);
    EXPECT_EQ(ghz.result["satisfyingAssignments"].get<int>(), 0);
    const std::vector<double> targets{1, -1, -1, -1};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ghz.result["expectations"][i].get<double>(), targets[i], 1e-12);

    RunConfig q;
    q.scenario = Scenario::ParadoxQudit;
    q.d = 4;
    EXPECT_EQ(run(q).exit_code, kExitOk);

    RunConfig n;
    n.scenario = Scenario::ParadoxNopa;
    n.r = 1.0;
    n.d = 20;
    const auto nopa = run(n);
    EXPECT_EQ(nopa.exit_code, kExitOk);
    EXPECT_NEAR(nopa.result["nopa"]["truncationWeight"].get<double>(), std::pow(std::tanh(1.0), 40), 1e-12);

    RunConfig s;
    s.scenario = Scenario::SeparableLhs;
    s.beta = 0.4;
    s.settings = {"angle:0.3", "angle:1.1"};
    const auto sep = run(s);
    EXPECT_EQ(sep.exit_code, kExitOk);
    EXPECT_EQ(sep.result["feasibility"]["status"], "feasible-model-found");

    RunConfig f;
    f.scenario = Scenario::Feasibility;
    f.theta = std::numbers::pi / 4;
    f.candidates = "pauli";
    const auto feas = run(f);
    EXPECT_EQ(feas.exit_code, kExitOk);
    EXPECT_EQ(feas.result["status"], "infeasible-within-ansatz");
    EXPECT_NEAR(feas.result["residual"].get<double>(), 0.5, 1e-9);
}

TEST(Run, TolerancesTooTightAreNumericalFailures) {
    RunConfig c = qubit(0.7);
    c.tol.herm = c.tol.eig = 1e-30;
    const auto doc = run(c);
    EXPECT_EQ(doc.exit_code, kExitNumerical);
    EXPECT_EQ(doc.status, "numerical-failure");
    ASSERT_TRUE(doc.error.has_value());
}

TEST(Run, MatricesAreOptIn) {
    auto c = qubit(0.6);
    EXPECT_FALSE(run(c).result.contains("assemblage"));
    c.matrices = true;
    const auto doc = run(c);
    ASSERT_TRUE(doc.result.contains("assemblage"));
    const auto a = json_io::assemblage_from_json(doc.result["assemblage"]);
    const auto direct = conditional_states(theta_state(0.6), {resolve_setting("z", 2), resolve_setting("x", 2)});
    EXPECT_EQ(assemblage_deviation(a, direct), 0.0);
    const auto psi = json_io::state_from_json(doc.result["state"]);
    EXPECT_EQ(psi.vector(), theta_state(0.6).vector());
}

TEST(Run, VacuousDistancesSerializeAsNull) {
    RunConfig q;
    q.scenario = Scenario::ParadoxQudit;
    q.lambdas = {0.8, 0.6, 0.0};
    const auto doc = run(q);
    ASSERT_EQ(doc.exit_code, kExitOk);
    EXPECT_TRUE(doc.result["purity"]["traceDistances"][2][0].is_null());
    EXPECT_TRUE(doc.result["purity"]["traceDistances"][0][0].is_number());
    expect_round_trip(doc);
}

TEST(RoundTrip, EveryScenarioDocument) {
    std::vector<RunConfig> configs{qubit(std::numbers::pi / 3, {"z", "x", "y"}), qubit(0.0)};
    configs[0].matrices = true;
    RunConfig g;
    g.scenario = Scenario::Ghz;
    configs.push_back(g);
    RunConfig s;
    s.scenario = Scenario::SeparableLhs;
    s.beta = 1.2;
    s.matrices = true;
    configs.push_back(s);
    RunConfig f;
    f.scenario = Scenario::Feasibility;
    f.theta = 0.3;
    configs.push_back(f);
    RunConfig n;
    n.scenario = Scenario::ParadoxNopa;
    n.r = 0.7;
    n.d = 6;
    n.tol.lp = 3e-7;
    configs.push_back(n);
    configs.push_back(sweep_of(Scenario::ParadoxQubit, "k", {2, 3}));
    configs.back().theta = 1.0;
    for (const auto& c : configs) expect_round_trip(run(c));
}

TEST(RoundTrip, ConfigEcho) {
    RunConfig c = sweep_of(Scenario::ParadoxNopa, "r", {0.5, 1.5});
    c.d = 8;
    c.lambdas = {0.1};
    c.k = 2;
    c.beta = -0.25;
    c.candidates = "conditionals";
    c.output = "out.json";
    c.format = "text";
    c.sweep.threads = 3;
    EXPECT_TRUE(config_from_json(json::parse(config_to_json(c).dump())) == c);
}

TEST(RoundTrip, RejectsOtherSchemaVersion) {
    auto j = document_to_json(run(qubit(0.5)));
    j["schema"] = "steerkit-report/2";
    EXPECT_THROW(document_from_json(j), std::invalid_argument);
}

TEST(Render, TextIsOneLinePerLeaf) {
    const auto doc = run(qubit(0.7854));
    const auto text = render(doc, "text");
    EXPECT_NE(text.find("result.lhsTraceSum: "), std::string::npos);
    EXPECT_NE(text.find("result.verdict: contradiction\n"), std::string::npos);
    EXPECT_NE(text.find("config.settings.1: x\n"), std::string::npos);
    EXPECT_NE(text.find("exitCode: 0\n"), std::string::npos);
    for (std::size_t pos = 0, next; pos < text.size(); pos = next + 1) {
        next = text.find('\n', pos);
        ASSERT_NE(next, std::string::npos);
        EXPECT_NE(text.substr(pos, next - pos).find(": "), std::string::npos);
    }
    EXPECT_EQ(render(doc, "json"), document_to_json(doc).dump(2) + "\n");
}

TEST(Sweep, PointsSubstituteTheParameter) {
    auto c = sweep_of(Scenario::ParadoxQudit, "d", {2, 3});
    c.lambdas = {0.6, 0.8};
    const auto points = sweep_points(c);
    ASSERT_EQ(points.size(), 2u);
    EXPECT_EQ(points[1].scenario, Scenario::ParadoxQudit);
    EXPECT_EQ(points[1].d, std::optional<std::size_t>{3});
    EXPECT_TRUE(points[1].lambdas.empty());
    EXPECT_TRUE(points[1].sweep == SweepSpec{});
    EXPECT_THROW(sweep_points(sweep_of(Scenario::ParadoxQudit, "d", {2.5})), std::invalid_argument);
    EXPECT_EQ(run(sweep_of(Scenario::ParadoxQudit, "d", {2.5})).exit_code, kExitPrecondition);
}

TEST(Sweep, ThetaGridSummary) {
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(0.01 + (std::numbers::pi / 2 - 0.02) * i / 49.0);
    auto c = sweep_of(Scenario::ParadoxQubit, "theta", grid);
    const auto doc = run(c);
    ASSERT_EQ(doc.exit_code, kExitOk);
    const auto& summary = doc.result["summary"];
    EXPECT_EQ(summary["points"].get<int>(), 50);
    EXPECT_NEAR(summary["minContradiction"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(summary["maxContradiction"].get<double>(), 1.0, 1e-9);
    EXPECT_LE(summary["maxNoSignallingDeviation"].get<double>(), 1e-12);
}

TEST(Sweep, KGridMagnitudes) {
    auto c = sweep_of(Scenario::ParadoxQubit, "k", {2, 3, 4});
    c.theta = std::numbers::pi / 3;
    const auto doc = run(c);
    ASSERT_EQ(doc.exit_code, kExitOk);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(doc.result["points"][i]["result"]["contradiction"].get<double>(), double(i + 1), 1e-9);
    }
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
    auto c = sweep_of(Scenario::ParadoxQudit, "d", {2, 3, 4, 5, 6});
    c.sweep.threads = 1;
    const auto serial = sweep(c);
    c.sweep.threads = 4;
    const auto parallel = sweep(c);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].result, parallel[i].result);
        EXPECT_EQ(serial[i].exit_code, kExitOk);
    }
}

TEST(Sweep, WorstPointDecidesExitCode) {
    const auto doc = run(sweep_of(Scenario::ParadoxQubit, "theta", {0.0, 0.5}));
    EXPECT_EQ(doc.exit_code, kExitPrecondition);
    EXPECT_EQ(doc.result["summary"]["completed"].get<int>(), 1);
    EXPECT_NEAR(doc.result["summary"]["minContradiction"].get<double>(), 1.0, 1e-9);
}
