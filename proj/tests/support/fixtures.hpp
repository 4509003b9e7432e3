#pragma once

#include <filesystem>
#include <string>

#include "advest/linalg.hpp"
#include "advest/problem.hpp"

namespace advest::testing {

std::filesystem::path data_path(const std::string& relative);

// Seven-path sensing matrix (7 x 4).
Matrix paths_matrix();
// Expected value used throughout the experiments.
Vector paths_mean();
// Five-row instance where only the first coordinate is recoverable.
Matrix partial_matrix();

// Seven-path problem, worker 7 adversarial, budget m = 1.
SensingProblem paths_problem(double sigma);

// Random N x d matrix with standard normal entries.
Matrix random_matrix(Index rows, Index cols, std::uint64_t seed);

}  // namespace advest::testing
