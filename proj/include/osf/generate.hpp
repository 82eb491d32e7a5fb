#pragma once

// Random and exhaustive tree generation.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "osf/core.hpp"

namespace osf {

struct RandomTripleParams {
  std::size_t n_gene_leaves = 6;
  std::size_t n_trees = 2;
  std::size_t leaves_per_tree = 3;
  bool binary = true;
};

/// Binary tree by random cherry merging, uniform over labelled histories.
/// Non-binary trees additionally contract each interior arc with
/// probability 1/3.
PhyloTree random_tree(const std::vector<std::string>& labels, bool binary, std::mt19937_64& rng);

/// Gene leaves g1..gn, species leaves s<i>_<j>; phi uniform over L(F).
/// Deterministic given the seed. Throws SemanticError for infeasible params.
ForestTriple random_triple(const RandomTripleParams& params, std::uint64_t seed);

/// Every rooted phylogenetic tree on the given labels (at least two). With
/// `binary_only`, only binary ones.
std::vector<PhyloTree> all_trees(const std::vector<std::string>& labels, bool binary_only = false);

}  // namespace osf
