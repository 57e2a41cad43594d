#pragma once

#include <vector>

#include "gridcert/polynomial.hpp"

namespace gridcert {

/// Correlative sparsity decomposition: variables of the objective and each
/// constraint are made pairwise adjacent, the graph is chordally extended by
/// minimum-degree elimination, and each constraint is assigned to one maximal
/// clique covering its support.
struct CliqueDecomposition {
  std::vector<std::vector<int>> cliques;  // sorted variable lists
  std::vector<int> assignment;            // constraint k -> clique index
  std::vector<int> elimination_order;     // perfect elimination ordering
};

/// Adjacency from the supports of the given polynomials (objective +
/// constraints share one list here; assignment covers only `n_constraints`
/// trailing entries semantics are up to the caller).
std::vector<std::vector<bool>> correlative_sparsity_graph(
    int n_vars, const std::vector<std::vector<int>>& supports);

/// Chordal extension + maximal cliques via minimum-degree elimination.
/// Returns cliques sorted by variable index; `order` (if non-null) receives
/// the elimination ordering used, which is a perfect elimination ordering of
/// the extended graph.
std::vector<std::vector<int>> chordal_cliques(
    std::vector<std::vector<bool>> adj, std::vector<int>* order = nullptr);

/// Checks that `order` is a perfect elimination ordering of `adj`.
bool is_perfect_elimination_ordering(const std::vector<std::vector<bool>>& adj,
                                     const std::vector<int>& order);

/// Full decomposition for one polynomial program. `constraint_supports[k]`
/// lists the variables of constraint k; every constraint is assigned the
/// first clique containing its whole support (always exists by construction).
CliqueDecomposition decompose(
    int n_vars, const std::vector<int>& objective_support,
    const std::vector<std::vector<int>>& constraint_supports);

}  // namespace gridcert
