#pragma once

// SPR operations on trees and forests, exact rSPR distance for small trees,
// and the stability experiments built on them.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osf/builder.hpp"
#include "osf/core.hpp"

namespace osf {

/// Prune the subtree below `pruned` (cutting its incoming arc) and regraft it
/// by subdividing the incoming arc of `graft`. Grafting at the root adds a new
/// root above it, the rooted SPR convention of Bordewich and Semple.
struct SprMove {
  NodeId pruned{};
  NodeId graft{};
  auto operator<=>(const SprMove&) const = default;
};

/// Result has the same leaf set, unary vertices suppressed, fresh preorder
/// ids. Grafting on the sibling or the parent of `pruned` returns T unchanged.
/// Throws SemanticError for a root prune or a graft inside the pruned subtree.
PhyloTree apply_spr(const PhyloTree& tree, const SprMove& move);

/// Every move that changes the tree (no identity moves), in (pruned, graft)
/// order.
std::vector<SprMove> spr_moves(const PhyloTree& tree);

/// Exact rooted SPR distance by bidirectional breadth-first search. Both trees
/// must be binary on the same leaf set of at most 8 leaves. Throws CapExceeded
/// when more than `cap` trees are visited.
std::size_t rspr_distance(const PhyloTree& a, const PhyloTree& b, std::size_t cap = 2'000'000);

/// Moves the subtree below `pruned` in tree `source` onto the incoming arc of
/// `graft` in tree `target` (or above its root). The source must keep at
/// least two leaves.
Forest forest_spr(const Forest& forest, std::size_t source, NodeId pruned, std::size_t target,
                  NodeId graft);

/// Gene-leaf label to species-leaf label, for rebuilding a triple after an edit.
std::map<std::string, std::string> phi_labels(const ForestTriple& triple);

/// |C| of the builder output, which equals t.
std::size_t optimum(const ForestTriple& triple);

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t k = 0;
  std::optional<std::size_t> d_rspr;
  std::size_t t_before = 0;
  std::size_t t_after = 0;
  /// SPR distance bound (d_rspr when known, else k); for forest moves the
  /// number of gene leaves whose image lies in the moved subtree.
  std::size_t bound_spr = 0;
  std::optional<std::size_t> bound_fk_r;
  std::optional<double> bound_fk_n;
  bool violated = false;

  std::size_t delta() const { return t_before > t_after ? t_before - t_after : t_after - t_before; }
};

struct StabilityReport {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;

  std::size_t max_delta() const;
  std::size_t violations() const;
  void write_csv(std::ostream& out) const;
  void write_summary(std::ostream& out) const;
};

/// floor((r-1)(n/r - 1)) with r the number of trees hit by phi; nullopt when
/// r > n.
std::optional<std::size_t> fk_state_bound(const ForestTriple& triple);
/// n - 2 sqrt(n) + 1 with n = |L(G)|.
double fk_leaf_bound(const ForestTriple& triple);

/// Each trial applies `k` random SPR moves to G. Requires a binary gene tree.
StabilityReport perturb_gene_experiment(const ForestTriple& triple, std::size_t k,
                                        std::uint64_t seed, std::size_t trials = 1);

/// Each trial applies one random forest SPR between two different trees.
StabilityReport perturb_forest_experiment(const ForestTriple& triple, std::uint64_t seed,
                                          std::size_t trials = 1);

/// Samples f' at Hamming distance exactly k from f and checks
/// |l_f'(T) - l_f(T)| <= k.
bool character_change_check(const PhyloTree& tree, const Character& f, std::size_t k,
                            std::uint64_t seed);

}  // namespace osf
