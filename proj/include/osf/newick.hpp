#pragma once

// Rooted Newick trees, forest files and leaf-map TSV files.

#include <string>
#include <string_view>
#include <vector>

#include "osf/core.hpp"

namespace osf {

struct ParseWarning {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

/// Parses one rooted Newick tree. Leaf labels are `[A-Za-z0-9_]+`; interior
/// labels are ignored and branch lengths are dropped with a warning. Throws
/// ParseError carrying the offending position.
PhyloTree parse_tree(std::string_view text, std::vector<ParseWarning>* warnings = nullptr);

/// One Newick tree per non-empty line; lines starting with '#' are skipped.
Forest parse_forest(std::string_view text, std::vector<ParseWarning>* warnings = nullptr);

/// Two whitespace-separated columns per row, gene leaf then species leaf.
LeafMap parse_leaf_map(std::string_view text, const PhyloTree& gene, const Forest& forest);

/// Children are written in id order, so parse(write(T)) reproduces T exactly.
std::string write_newick(const PhyloTree& tree);
/// Children sorted by their smallest leaf label; equal for isomorphic trees.
std::string canonical_newick(const PhyloTree& tree);
std::string write_forest(const Forest& forest);
std::string write_leaf_map(const ForestTriple& triple);

}  // namespace osf
