#pragma once

#include <random>

#include "gridcert/grid_model.hpp"

namespace gridcert::testing {

/// Slack at 1.0, one PQ bus, unit series admittance: w = 1.
inline GridModel two_bus(Complex y = Complex{1.0, 0.0}) {
  return GridModel::build({BranchSpec{0, 1, y, 0.0, {}}}, 1,
                          Complex{1.0, 0.0});
}

/// Radial chain 0-1-...-N with the given series admittance on every branch.
inline GridModel chain(int n_pq, Complex y = Complex{2.0, -6.0}) {
  std::vector<BranchSpec> branches;
  for (int j = 0; j < n_pq; ++j)
    branches.push_back(BranchSpec{j, j + 1, y, 0.0, {}});
  return GridModel::build(branches, n_pq, Complex{1.0, 0.0});
}

/// Randomized desk-scale grid: radial chain plus optional chords, admittances
/// jittered around a stiff line value.
inline GridModel random_grid(int n_pq, std::mt19937& rng, bool meshed) {
  std::uniform_real_distribution<double> jitter(0.8, 1.25);
  std::vector<BranchSpec> branches;
  for (int j = 0; j < n_pq; ++j)
    branches.push_back(BranchSpec{
        j, j + 1, Complex{3.0 * jitter(rng), -9.0 * jitter(rng)}, 0.0, {}});
  if (meshed && n_pq >= 3) {
    std::uniform_int_distribution<int> from(0, n_pq - 2);
    const int f = from(rng);
    branches.push_back(BranchSpec{
        f, f + 2, Complex{2.0 * jitter(rng), -6.0 * jitter(rng)}, 0.0, {}});
  }
  return GridModel::build(branches, n_pq, Complex{1.0, 0.0});
}

}  // namespace gridcert::testing
