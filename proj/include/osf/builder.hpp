#pragma once

// Construction of optimal strict OSFs: Fitch-Hartigan state sets bottom-up,
// a top-down extension of the tree-membership character, then lca placement.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "osf/core.hpp"
#include "osf/osf_map.hpp"

namespace osf {

inline constexpr std::size_t kNoState = std::numeric_limits<std::size_t>::max();

/// Leaf character: a state per gene vertex, kNoState on interior vertices.
struct Character {
  std::vector<std::size_t> state;
  std::size_t state_count = 0;
};

/// A state for every gene vertex, agreeing with the character on leaves.
struct Extension {
  std::vector<std::size_t> state;
};

/// sigma(v) for every gene vertex, each sorted ascending.
using SigmaSets = std::vector<std::vector<std::size_t>>;

/// Picks one state out of a non-empty candidate set.
class TieBreaker {
 public:
  /// Lowest state, i.e. the first tree in file order.
  static TieBreaker first() { return TieBreaker(false, 0); }
  /// Uniform choice driven by a seeded generator.
  static TieBreaker seeded(std::uint64_t seed) { return TieBreaker(true, seed); }

  std::size_t choose(std::span<const std::size_t> candidates);

 private:
  TieBreaker(bool random, std::uint64_t seed) : random_(random), rng_(seed) {}
  bool random_;
  std::mt19937_64 rng_;
};

/// f(v) = index of the tree containing phi(v).
Character character_of(const ForestTriple& triple);

/// Hartigan's rule: sigma(v) is the set of states contained in the largest
/// number of the children's sets.
SigmaSets bottom_up(const PhyloTree& gene, const Character& f);

/// Root gets a tie-broken member of sigma(root); a child keeps its parent's
/// state when that state is in its own sigma set, else takes a tie-broken one.
Extension top_down(const PhyloTree& gene, const SigmaSets& sigma, TieBreaker& tie);

/// Places every vertex at the lca, inside its assigned tree, of the images of
/// the gene leaves below it that land in that tree.
OsfMap place_extension(const ForestTriple& triple, const Extension& extension);

OsfMap build_osf(const ForestTriple& triple, TieBreaker& tie);
OsfMap build_osf(const ForestTriple& triple);

/// Number of arcs whose end states differ.
std::size_t changed_arcs(const PhyloTree& gene, const Extension& extension);

/// Minimum number of state changes over all extensions (Sankoff-style
/// dynamic program, exact on any tree shape).
std::size_t parsimony_score(const PhyloTree& gene, const Character& f);

}  // namespace osf
