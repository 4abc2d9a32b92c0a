// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.
// Expected values come from closed forms evaluated here, not from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "steerkit/ghz.hpp"
#include "steerkit/steering.hpp"
#include "test_support.hpp"

using namespace steerkit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << " first failure: " << what << ";";
            pass = false;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MeasurementSetting axis(double x, double y, double z, const char* label) { return bloch_projectors({x, y, z}, label); }

Outcome ac1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_trace = 0, worst_state = 0;
    for (double t : {kPi / 8, kPi / 6, kPi / 4, kPi / 3, 3 * kPi / 8}) {
        const auto psi = theta_state(t);
        const std::vector<MeasurementSetting> s{axis(0, 0, 1, "z"), axis(1, 0, 0, "x")};
        const auto cert = pure_state_paradox(psi, s);
        o.require(cert.applicable, "certificate applicable");
        worst_trace = std::max({worst_trace, std::abs(cert.lhs_trace_sum - 2), std::abs(cert.quantum_trace_sum - 1)});
        const auto a = conditional_states(psi, s);
        const double c = std::cos(t), sn = std::sin(t);
        // cos^2|0><0|, sin^2|1><1|, (1/2)|chi+-><chi+-| with chi+- = c|0> +- s|1>
        const std::vector<ComplexMatrix> expected{
            ComplexMatrix{{c * c, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, sn * sn}},
            ComplexMatrix{{0.5 * c * c, 0.5 * c * sn}, {0.5 * c * sn, 0.5 * sn * sn}},
            ComplexMatrix{{0.5 * c * c, -0.5 * c * sn}, {-0.5 * c * sn, 0.5 * sn * sn}}};
        for (std::size_t i = 0; i < 4; ++i) worst_state = std::max(worst_state, max_abs_diff(a.states[i / 2][i % 2], expected[i]));
    }
    const double elapsed = seconds_since(t0);
    o.require(worst_trace <= 1e-9, "trace sums within 1e-9");
    o.require(worst_state <= 1e-10, "closed-form conditionals within 1e-10");
    o.require(elapsed < 1.0, "runtime < 1 s");
    o.detail << " trace dev " << worst_trace << ", state dev " << worst_state << ", " << elapsed << " s";
    return o;
}

Outcome ac2() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const auto t0 = std::chrono::steady_clock::now();
    double worst_trace = 0, worst_overlap = 0;
    std::size_t runs = 0;
    for (std::size_t d = 2; d <= 6; ++d) {
        std::vector<std::vector<double>> vectors{std::vector<double>(d, 1 / std::sqrt(double(d)))};
        for (int r = 0; r < 3; ++r) {
            std::vector<double> l(d);
            double sq = 0;
            for (auto& v : l) {
                v = u(rng);
                sq += v * v;
            }
            for (auto& v : l) v /= std::sqrt(sq);
            vectors.push_back(l);
        }
        const auto z = computational_basis(d);
        const auto x = fourier_mub_basis(d);
        for (const auto& p : z.projectors)
            for (const auto& q : x.projectors)
                worst_overlap = std::max(worst_overlap, std::abs((p * q).trace().real() - 1.0 / double(d)));
        for (const auto& l : vectors) {
            const auto cert = pure_state_paradox(qudit_schmidt_state(l), {z, x});
            o.require(cert.applicable, "qudit certificate applicable");
            worst_trace = std::max({worst_trace, std::abs(cert.lhs_trace_sum - 2), std::abs(cert.quantum_trace_sum - 1)});
            ++runs;
        }
    }
    const double elapsed = seconds_since(t0);
    o.require(runs == 20, "20 qudit runs");
    o.require(worst_trace <= 1e-9, "2-vs-1 within 1e-9");
    o.require(worst_overlap <= 1e-10, "MUB overlaps 1/d within 1e-10");
    o.require(elapsed < 5.0, "runtime < 5 s");
    o.detail << " " << runs << " states, trace dev " << worst_trace << ", overlap dev " << worst_overlap << ", " << elapsed
             << " s";
    return o;
}

Outcome ac3() {
    Outcome o;
    const double c = 1 / std::sqrt(3.0);
    const std::vector<MeasurementSetting> pool{axis(0, 0, 1, "z"), axis(1, 0, 0, "x"), axis(0, 1, 0, "y"), axis(c, c, c, "d")};
    for (std::size_t k = 2; k <= 4; ++k) {
        const auto cert = pure_state_paradox(theta_state(kPi / 3), {pool.begin(), pool.begin() + static_cast<long>(k)});
        o.require(cert.applicable && std::abs(cert.lhs_trace_sum - double(k)) <= 1e-9, "lhsTraceSum = k");
        o.detail << " k=" << k << ": " << cert.lhs_trace_sum;
    }
    return o;
}

Outcome ac4() {
    Outcome o;
    const auto nopa = nopa_truncated(1.0, 20);
    const double t = std::tanh(1.0);
    double worst_ratio = 0;
    for (std::size_t m = 0; m + 1 < nopa.coefficients.size(); ++m)
        worst_ratio = std::max(worst_ratio, std::abs(nopa.coefficients[m + 1] / nopa.coefficients[m] - t));
    // Geometric tail: sum_{m>=20} tanh^{2m} / cosh^2 = tanh^{40}.
    const double tail = std::pow(t, 40);
    const double weight_dev = std::abs(nopa.truncation_weight - tail);
    const auto cert = pure_state_paradox(nopa.state, {computational_basis(20), fourier_mub_basis(20)});
    o.require(worst_ratio <= 1e-12, "ratios tanh(1)");
    o.require(weight_dev <= 1e-12, "truncation weight tanh(1)^40");
    o.require(cert.applicable && std::abs(cert.lhs_trace_sum - 2) <= 1e-9 && std::abs(cert.quantum_trace_sum - 1) <= 1e-9,
              "2-vs-1");
    o.detail << " ratio dev " << worst_ratio << ", weight dev " << weight_dev << ", sums " << cert.lhs_trace_sum << " / "
             << cert.quantum_trace_sum;
    return o;
}

Outcome ac5() {
    Outcome o;
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> angle(0, kPi);
    double worst = 0;
    std::size_t feasible = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto beta = test::random_unit_vector(rng, 2);
        const std::vector<MeasurementSetting> s{angle_projectors(angle(rng)), angle_projectors(angle(rng))};
        const auto psi = separable_state(beta);
        const auto a = conditional_states(psi, s);
        worst = std::max(worst, assemblage_deviation(lhs_reconstruct(separable_lhs_model(psi, s), s), a));
        feasible += lhs_feasibility_lp(a, default_candidates(a)).status == FeasibilityStatus::FeasibleModelFound;
    }
    o.require(worst <= 1e-10, "reconstruction within 1e-10");
    o.require(feasible == 10, "LP finds a model for all 10");
    o.detail << " max deviation " << worst << ", LP feasible " << feasible << "/10";
    return o;
}

Outcome ac6() {
    Outcome o;
    const double h = 1 / std::numbers::sqrt2;
    const std::vector<ComplexMatrix> candidates{
        ComplexMatrix::projector(ComplexVector{1, 0}), ComplexMatrix::projector(ComplexVector{0, 1}),
        ComplexMatrix::projector(ComplexVector{h, h}), ComplexMatrix::projector(ComplexVector{h, -h})};
    const auto a = conditional_states(theta_state(kPi / 4), {axis(0, 0, 1, "z"), axis(1, 0, 0, "x")});
    const auto out = lhs_feasibility_lp(a, candidates);
    // Regression constant: phase-1 optimum 0.5, reproduced with an independent LP solver.
    o.require(out.status == FeasibilityStatus::InfeasibleWithinAnsatz, "infeasible within ansatz");
    o.require(out.residual >= 0.01, "residual >= 0.01");
    o.require(std::abs(out.residual - 0.5) <= 1e-9, "residual matches recorded 0.5");
    o.detail << " status " << to_string(out.status) << ", residual " << out.residual;
    return o;
}

Outcome ac7() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = ghz_operator_expectations(ghz_state());
    const auto lhv = ghz_lhv_bruteforce();
    const double elapsed = seconds_since(t0);
    const std::array<double, 4> targets{1, -1, -1, -1};
    double worst = 0;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(e.values[i] - targets[i]));
    o.require(worst <= 1e-12, "expectations (+1,-1,-1,-1)");
    o.require(lhv.assignments_checked == 64 && lhv.satisfying_assignments == 0, "0 of 64 assignments");
    o.require(elapsed < 0.1, "runtime < 0.1 s");
    o.detail << " expectation dev " << worst << ", satisfying " << lhv.satisfying_assignments << "/"
             << lhv.assignments_checked << ", " << elapsed << " s";
    return o;
}

Outcome ac8() {
    Outcome o;
    std::mt19937_64 rng(8);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const BipartitePureState psi(test::random_unit_vector(rng, d * d), d, d);
        const std::vector<MeasurementSetting> s{basis_from_unitary(test::random_unitary(rng, d), "U1"),
                                                basis_from_unitary(test::random_unitary(rng, d), "U2")};
        worst = std::max(worst, no_signalling_check(conditional_states(psi, s)));
    }
    o.require(worst <= 1e-11, "no-signalling within 1e-11");
    o.detail << " max deviation " << worst << " over 100 states";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 two-qubit paradox 2 = 1", ac1},        {"AC2 qudit paradox, d = 2..6", ac2},
        {"AC3 k-setting extension", ac3},            {"AC4 NOPA truncation r = 1, d = 20", ac4},
        {"AC5 separable LHS models", ac5},           {"AC6 infeasibility within ansatz", ac6},
        {"AC7 GHZ eigenvalues and LHV enumeration", ac7}, {"AC8 no-signalling property", ac8},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        std::printf("[%s] %s:%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
