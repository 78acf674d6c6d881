#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "arc/params.hpp"

namespace arc {

/// Generic finite-horizon max-min dynamic program over explicit per-stage
/// state lists. The stage dynamics, adversary sets, terminal value and
/// one-step payoff multiplier all enter through callbacks, so the same
/// routine solves the reduced utility recursion and the full
/// wealth-times-estimate recursion (with factor == 1 and the wealth folded
/// into the states). Intended for oracle-scale problems in tests; the
/// production solvers use the specialized loops.
struct MinimaxProblem {
    std::size_t horizon = 0;
    std::vector<std::size_t> stage_sizes; // horizon + 1 entries
    std::size_t n_actions = 0;
    std::vector<double> outcome_weights;

    /// Terminal value of state i at the last stage.
    std::function<double(std::size_t)> terminal;
    /// Adversary candidates at (t, state).
    std::function<std::vector<ModelParams>(std::size_t, std::size_t)> regions;
    /// Payoff multiplier for (t, state, action, theta-index, outcome), the
    /// theta index referring to the regions(t, state) list.
    std::function<double(std::size_t, std::size_t, std::size_t, std::size_t, std::size_t)>
        factor;
    /// Successor state index at stage t+1 for (t, state, action, theta-index,
    /// outcome).
    std::function<std::size_t(std::size_t, std::size_t, std::size_t, std::size_t,
                              std::size_t)>
        next;
};

struct MinimaxSolution {
    std::vector<std::vector<double>> value;        // [t][state], t = 0..T
    std::vector<std::vector<int>> action;          // [t][state], t = 0..T-1
    std::vector<std::vector<ModelParams>> worst;   // [t][state], t = 0..T-1
};

MinimaxSolution solve_minimax(const MinimaxProblem& problem);

} // namespace arc
