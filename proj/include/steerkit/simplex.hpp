#pragma once

// Phase-1 simplex for { x >= 0 : A x = b } with Bland's anti-cycling rule.
// The phase-1 objective is the sum of artificial variables, i.e. the minimal
// L1 constraint violation reachable by a basic solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/linalg.hpp"

namespace steerkit {

struct LinearSystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major rows x cols
    std::vector<double> b;

    LinearSystem() = default;
    LinearSystem(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0), b(r, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct PhaseOneResult {
    bool feasible = false;
    double objective = 0;      // sum of artificials at the optimum
    double l1_residual = 0;    // sum |A x - b| recomputed from x
    double max_residual = 0;   // max |A x - b|
    std::vector<double> x;
    std::size_t iterations = 0;
};

struct SimplexOptions {
    double feasibility_tol = 1e-8;
    double pivot_tol = 1e-11;
    double cost_tol = 1e-11;
    std::size_t max_iterations = 200000;
};

inline PhaseOneResult phase_one(const LinearSystem& sys, const SimplexOptions& opt = {}) {
    if (sys.a.size() != sys.rows * sys.cols || sys.b.size() != sys.rows) {
        throw std::invalid_argument("phase_one: inconsistent system dimensions");
    }
    const std::size_t m = sys.rows;
    const std::size_t n = sys.cols;
    const std::size_t width = n + m + 1;  // originals, artificials, rhs
    const std::size_t rhs = n + m;
    std::vector<double> t((m + 1) * width, 0.0);
    auto cell = [&](std::size_t i, std::size_t j) -> double& { return t[i * width + j]; };

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = sys.b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) cell(i, j) = sign * sys.at(i, j);
        cell(i, n + i) = 1.0;
        cell(i, rhs) = sign * sys.b[i];
        basis[i] = n + i;
    }
    // Reduced costs of min sum(artificials); the rhs slot holds -objective.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) cell(m, j) -= cell(i, j);
        cell(m, rhs) -= cell(i, rhs);
    }

    PhaseOneResult res;
    // Smallest-index row among the minimum ratios, or m when the column never limits.
    auto ratio_test = [&](std::size_t enter) {
        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double piv = cell(i, enter);
            if (piv <= opt.pivot_tol) continue;
            const double ratio = std::max(cell(i, rhs), 0.0) / piv;
            const double tie = 1e-12 * std::max(1.0, ratio);
            if (leave == m || ratio < best - tie) {
                leave = i;
                best = ratio;
            } else if (ratio <= best + tie && basis[i] < basis[leave]) {
                leave = i;
                best = std::min(best, ratio);
            }
        }
        return leave;
    };

    for (;;) {
        std::size_t enter = width;
        std::size_t leave = m;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (cell(m, j) >= -opt.cost_tol) continue;
            leave = ratio_test(j);
            // An improving column with no limiting row can only come from round-off
            // (the phase-1 objective is bounded below); Bland moves on to the next index.
            if (leave != m) {
                enter = j;
                break;
            }
        }
        if (enter == width) break;

        if (++res.iterations > opt.max_iterations) {
            throw NumericalError("phase_one: iteration limit exceeded");
        }
        const double piv = cell(leave, enter);
        for (std::size_t j = 0; j < width; ++j) cell(leave, j) /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = cell(i, enter);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) cell(i, j) -= f * cell(leave, j);
            cell(i, enter) = 0.0;
        }
        basis[leave] = enter;
    }

    res.objective = std::max(-cell(m, rhs), 0.0);
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = std::max(cell(i, rhs), 0.0);

    for (std::size_t i = 0; i < m; ++i) {
        double r = -sys.b[i];
        for (std::size_t j = 0; j < n; ++j) r += sys.at(i, j) * res.x[j];
        res.l1_residual += std::abs(r);
        res.max_residual = std::max(res.max_residual, std::abs(r));
    }
    res.feasible = res.objective <= opt.feasibility_tol && res.max_residual <= opt.feasibility_tol;
    return res;
}

}  // namespace steerkit
