#pragma once

// Networks represented by OSFs: construction of N(psi), image walks and trail
// normalization, the (V1)/(V2) validity test with its unfolding, binary
// resolution, and cycle classification.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osf/core.hpp"
#include "osf/osf_map.hpp"

namespace osf {

/// N(psi): vertex set V(F) numbered as Forest::global, arcs A(F) (forest)
/// followed by C*(psi) (contact), leaf labels from F.
Network build_network(const ForestTriple& triple, const OsfMap& psi);

struct Connectivity {
  bool connected = false;
  bool covers_all_trees = false;
};

/// N(psi) is connected exactly when phi reaches every tree; both are reported.
Connectivity connectivity_check(const ForestTriple& triple, const OsfMap& psi);

/// Image walk of a directed gene path, as global forest vertex ids with
/// consecutive repeats suppressed. Throws std::invalid_argument when `path`
/// is not a directed path of G.
std::vector<std::size_t> walk_of_path(const ForestTriple& triple, const OsfMap& psi,
                                      std::span<const NodeId> path);

/// True when the vertex walk repeats no ordered pair (arcs of N(psi) are
/// determined by their ends).
bool is_trail(std::span<const std::size_t> walk);

/// Every downward gene path u..w with u a proper ancestor of w whose image
/// walk is not a trail.
std::vector<std::vector<NodeId>> non_trail_paths(const ForestTriple& triple, const OsfMap& psi);

struct RewireStep {
  std::vector<NodeId> subpath;  ///< offending subpath, ids of the tree before the step
  ContactPair contact;          ///< the contact arc crossed twice
  std::size_t uses_before = 0;  ///< gene arcs mapped onto `contact` before the step
  std::size_t uses_after = 0;
};

struct TrailNormalization {
  ForestTriple triple;
  OsfMap psi;
  std::size_t augmented_leaves = 0;
  std::vector<RewireStep> steps;
};

/// Rewrites (G, phi, psi) so every gene path has a trail as image walk while
/// N(psi) stays the same. Leaves are added under every interior vertex (one
/// per leaf below its image, mapped to the image of the lexicographically
/// least qualifying gene leaf), then the shortest offending subpath is
/// repeatedly rewired.
TrailNormalization trail_normalize(const ForestTriple& triple, const OsfMap& psi);

/// A trail in a general network, as a start vertex and arc indices.
struct Trail {
  std::size_t start = 0;
  std::vector<std::size_t> arcs;
  std::vector<std::size_t> vertices(const Network& network) const;
};

struct ValidityWitness {
  std::size_t rho = 0;
  std::vector<std::size_t> arcs;   ///< the set A, sorted arc indices
  std::vector<Trail> trails;       ///< one certifying trail per arc of A
};

struct ValidityVerdict {
  bool valid = false;
  std::string reason;
  std::optional<ValidityWitness> witness;
};

/// Checks (V1) and (V2) for the given rho and A.
ValidityVerdict check_valid(const Network& network, std::size_t rho,
                            std::span<const std::size_t> arcs);

struct SearchCaps {
  std::size_t max_arcs = 16;
};

/// Tries every A (by size, then lexicographically) and every rho. Returns
/// nullopt when N violates (N1)-(N4) or no pair works. Throws CapExceeded
/// when N has more arcs than the cap.
std::optional<ValidityWitness> search_validity(const Network& network, SearchCaps caps = {});

struct Unfolding {
  ForestTriple triple;
  OsfMap psi;
  /// Forest vertex for every network vertex (F = N - A).
  std::vector<ForestNode> forest_vertex;
  std::size_t trail_count = 0;
};

/// Builds the gene tree of admissible trails from rho. A trail ending in X
/// that can still be extended receives a pendant leaf so the tree stays
/// phylogenetic. Throws SemanticError when (V1)/(V2) fail, CapExceeded when
/// more than `cap` trails exist.
Unfolding unfold(const Network& network, std::size_t rho, std::span<const std::size_t> arcs,
                 std::size_t cap = 100'000);

/// Network N(psi) rebuilt on the network's own vertex numbering, so it can be
/// compared to the unfolded network directly.
Network rebuild_on_network(const Unfolding& unfolding, const Network& original);

struct BinaryResolution {
  Network network;
  /// Gene vertex labelling each subdivision vertex; nullopt elsewhere.
  std::vector<std::optional<NodeId>> subdivision_label;
  /// Vertex of N(psi) each resolution vertex stands for.
  std::vector<std::size_t> projection;
  /// Contact arcs, one per arc of the introgression set, in its order.
  std::vector<TreeArc> contact_origin;
  std::string pairing_rule;
};

/// Throws SemanticError unless psi is strict.
BinaryResolution binary_resolution(const ForestTriple& triple, const OsfMap& psi);

/// Simple directed cycles as arc-index sequences, rotated to start at their
/// smallest arc. Throws CapExceeded beyond `cap` cycles.
std::vector<std::vector<std::size_t>> directed_cycles(const Network& network,
                                                      std::size_t cap = 100'000);

struct ClassifiedCycle {
  std::vector<std::size_t> vertices;  ///< v1..vm of the cycle v1..vm,v1
  bool incidental = true;
};

/// Cycles of N(psi), each marked incidental unless some gene path has it as
/// image walk (up to rotation).
std::vector<ClassifiedCycle> classify_cycles(const ForestTriple& triple, const OsfMap& psi,
                                             std::size_t cap = 100'000);

/// Isomorphism fixing labelled vertices by label. Ignores the arc partition.
bool isomorphic(const Network& a, const Network& b);

}  // namespace osf
