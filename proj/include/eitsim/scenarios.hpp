// scenarios.hpp — named experiments writing CSV (and optional SVG) artifacts
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "eitsim/config.hpp"

namespace eitsim {

struct ScenarioResult {
    std::vector<std::string> files;
    std::vector<std::string> summary; // human-readable lines for the console
};

ScenarioResult run_scenario(const ExperimentConfig& config, const std::string& out_dir, bool svg);

// Worker count from EIT_SIM_THREADS, else hardware concurrency (at least 1).
std::size_t sweep_threads();

// Runs fn(0..n-1) on up to `threads` workers; results stay in index order.
// The exception of the lowest failing index is rethrown.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn, std::size_t threads);

} // namespace eitsim

#include "eitsim/detail/parallel_map.hpp"
