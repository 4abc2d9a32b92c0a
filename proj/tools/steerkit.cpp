// steerkit: run a steering scenario and print its report.
//
//   steerkit paradox-qubit --theta 0.7854 --settings z,x
//   steerkit sweep --sweep-scenario paradox-qubit --parameter theta --grid 0.1:1.4:50
//   steerkit --config configs/ghz.conf --format text

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "steerkit/report.hpp"

namespace sr = steerkit::report;

int main(int argc, char** argv) {
    CLI::App app{"Quantum steering toolkit: paradox certificates, LHS models, GHZ checks"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");

    std::string scenario, sweep_scenario = "paradox-qubit";
    std::vector<std::string> lambdas, settings, grid;
    sr::RunConfig cfg;
    app.add_option("scenario,--scenario", scenario, "paradox-qubit | paradox-qudit | paradox-nopa | separable-lhs | "
                                                    "feasibility | ghz | sweep")
        ->required();
    app.add_option("--theta", cfg.theta, "two-qubit angle in [0, pi/2]");
    app.add_option("--d", cfg.d, "local dimension (qudit, NOPA truncation)");
    app.add_option("--r", cfg.r, "NOPA squeezing parameter");
    app.add_option("--k", cfg.k, "number of settings to use");
    app.add_option("--lambdas", lambdas, "comma-separated Schmidt coefficients")->delimiter(',');
    app.add_option("--settings", settings, "comma list of z, x, y, n:a:b:c, angle:alpha, Z, X")->delimiter(',');
    app.add_option("--beta", cfg.beta, "product state angle b: |b> = cos b|0> + sin b|1>");
    app.add_option("--candidates", cfg.candidates, "hidden-state ansatz: default | pauli | conditionals");
    app.add_option("--tol-herm", cfg.tol.herm);
    app.add_option("--tol-eig", cfg.tol.eig);
    app.add_option("--tol-state-eq", cfg.tol.state_eq);
    app.add_option("--tol-rank1", cfg.tol.rank1);
    app.add_option("--tol-lp", cfg.tol.lp)->envname("STEERKIT_TOLERANCE_LP");
    app.add_option("-o,--output", cfg.output, "write the report to this file instead of stdout");
    app.add_option("--format", cfg.format, "json | text");
    app.add_flag("--matrices", cfg.matrices, "include state, settings and assemblage matrices");
    app.add_option("--sweep-scenario", sweep_scenario, "scenario run at each grid point");
    app.add_option("--parameter", cfg.sweep.parameter, "swept parameter: theta | d | r | k");
    app.add_option("--grid", grid, "comma list or start:stop:count")->delimiter(',');
    app.add_option("--threads", cfg.sweep.threads, "sweep worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
        cfg.scenario = sr::scenario_from_string(scenario);
        cfg.sweep.scenario = sr::scenario_from_string(sweep_scenario);
        cfg.lambdas = sr::parse_number_list(CLI::detail::join(lambdas, ","));
        cfg.settings = sr::split_list(CLI::detail::join(settings, ","));
        cfg.sweep.grid = sr::parse_grid(CLI::detail::join(grid, ","));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sr::kExitPrecondition;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return sr::kExitPrecondition;
    }

    const auto doc = sr::run(cfg);
    const auto text = sr::render(doc, cfg.format == "text" ? "text" : "json");
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output);
        if (!(out << text)) {
            std::cerr << "error: cannot write " << cfg.output << "\n";
            return sr::kExitPrecondition;
        }
    }
    if (doc.error) std::cerr << "error: " << *doc.error << "\n";
    return doc.exit_code;
}
