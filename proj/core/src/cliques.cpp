#include "gridcert/cliques.hpp"

#include <algorithm>

namespace gridcert {

std::vector<std::vector<bool>> correlative_sparsity_graph(
    int n_vars, const std::vector<std::vector<int>>& supports) {
  std::vector<std::vector<bool>> adj(n_vars, std::vector<bool>(n_vars, false));
  for (const auto& sup : supports)
    for (size_t a = 0; a < sup.size(); ++a)
      for (size_t b = a + 1; b < sup.size(); ++b) {
        adj[sup[a]][sup[b]] = true;
        adj[sup[b]][sup[a]] = true;
      }
  return adj;
}

std::vector<std::vector<int>> chordal_cliques(std::vector<std::vector<bool>> adj,
                                              std::vector<int>* order) {
  const int n = static_cast<int>(adj.size());
  std::vector<bool> eliminated(n, false);
  std::vector<std::vector<int>> cliques;
  std::vector<int> elim_order;
  elim_order.reserve(n);

  for (int step = 0; step < n; ++step) {
    // minimum-degree pivot among remaining vertices
    int best = -1, best_deg = n + 1;
    for (int v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      int deg = 0;
      for (int u = 0; u < n; ++u)
        if (!eliminated[u] && u != v && adj[v][u]) ++deg;
      if (deg < best_deg) {
        best_deg = deg;
        best = v;
      }
    }
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (!eliminated[u] && u != best && adj[best][u]) nbrs.push_back(u);
    // fill-in: neighbors become a clique
    for (size_t a = 0; a < nbrs.size(); ++a)
      for (size_t b = a + 1; b < nbrs.size(); ++b) {
        adj[nbrs[a]][nbrs[b]] = true;
        adj[nbrs[b]][nbrs[a]] = true;
      }
    std::vector<int> cand = nbrs;
    cand.push_back(best);
    std::sort(cand.begin(), cand.end());
    cliques.push_back(std::move(cand));
    eliminated[best] = true;
    elim_order.push_back(best);
  }

  // keep only maximal candidate cliques
  std::vector<std::vector<int>> maximal;
  for (const auto& c : cliques) {
    bool contained = false;
    for (const auto& d : cliques) {
      if (&c == &d || d.size() < c.size()) continue;
      if (d.size() == c.size() && !(c < d) && !(d < c)) {
        // identical set: keep first occurrence only
        if (&d < &c) { contained = true; break; }
        continue;
      }
      if (std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) maximal.push_back(c);
  }
  if (order) *order = elim_order;
  return maximal;
}

bool is_perfect_elimination_ordering(const std::vector<std::vector<bool>>& adj,
                                     const std::vector<int>& order) {
  const int n = static_cast<int>(adj.size());
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  for (int i = 0; i < n; ++i) {
    const int v = order[i];
    std::vector<int> later;
    for (int u = 0; u < n; ++u)
      if (adj[v][u] && pos[u] > i) later.push_back(u);
    for (size_t a = 0; a < later.size(); ++a)
      for (size_t b = a + 1; b < later.size(); ++b)
        if (!adj[later[a]][later[b]]) return false;
  }
  return true;
}

CliqueDecomposition decompose(
    int n_vars, const std::vector<int>& objective_support,
    const std::vector<std::vector<int>>& constraint_supports) {
  std::vector<std::vector<int>> supports = constraint_supports;
  if (!objective_support.empty()) supports.push_back(objective_support);
  auto adj = correlative_sparsity_graph(n_vars, supports);

  CliqueDecomposition out;
  out.cliques = chordal_cliques(adj, &out.elimination_order);

  out.assignment.resize(constraint_supports.size(), -1);
  for (size_t k = 0; k < constraint_supports.size(); ++k) {
    const auto& sup = constraint_supports[k];
    for (size_t c = 0; c < out.cliques.size(); ++c) {
      if (std::includes(out.cliques[c].begin(), out.cliques[c].end(),
                        sup.begin(), sup.end())) {
        out.assignment[k] = static_cast<int>(c);
        break;
      }
    }
    if (out.assignment[k] < 0)
      throw InvalidInput("clique decomposition: constraint support uncovered");
  }
  return out;
}

}  // namespace gridcert
