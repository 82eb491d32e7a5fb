#pragma once

// OSF and strict-OSF axiom checks, introgression sets, and the exhaustive
// optimum oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osf/core.hpp"
#include "osf/osf_map.hpp"

namespace osf {

/// Outcome for one axiom. A failing verdict always names witnesses.
struct OsfVerdict {
  std::string axiom;
  bool pass = true;
  std::vector<NodeId> vertices;
  std::vector<TreeArc> arcs;
  std::string detail;
};

struct OsfReport {
  std::vector<OsfVerdict> verdicts;

  bool all_pass() const;
  const OsfVerdict* find(std::string_view axiom) const;
  void append(const OsfReport& other);
};

/// (P1) psi agrees with phi on leaves; (P2) ancestry inside a tree is
/// preserved; (P3) every image dominates the image of some gene leaf below.
OsfReport check_osf(const ForestTriple& triple, const OsfMap& psi);

/// (S3): every interior gene vertex has a child mapped below it in its tree.
OsfReport check_strict(const ForestTriple& triple, const OsfMap& psi);

/// (P1), (P2) and (S3), the defining axioms of a strict OSF.
OsfReport check_sosf(const ForestTriple& triple, const OsfMap& psi);

/// A valid introgression set with the component structure of G - I.
struct IntrogressionSet {
  std::vector<TreeArc> arcs;                 ///< sorted
  std::vector<std::size_t> component;        ///< per gene vertex
  std::vector<std::size_t> component_tree;   ///< T_M per component
};

struct IntrogressionCheck {
  bool valid = false;
  /// 1, 2 or 3 for the first violated condition, 0 when valid.
  int violated_condition = 0;
  std::string detail;
  std::optional<IntrogressionSet> set;
};

/// Throws std::invalid_argument if an arc is not an arc of G.
IntrogressionCheck check_introgression_set(const ForestTriple& triple,
                                           std::span<const TreeArc> arcs);

/// Throws SemanticError naming the violated condition when invalid.
IntrogressionSet make_introgression_set(const ForestTriple& triple,
                                        std::span<const TreeArc> arcs);

/// The strict OSF psi_I whose contact multiset is the image of I: each vertex
/// goes to the lca, in its component's tree, of the images of the leaves below
/// it that land in that tree.
OsfMap osf_from_introgression_set(const ForestTriple& triple, const IntrogressionSet& set);

/// Gene arcs whose ends map to different trees. Throws SemanticError when
/// psi is not strict.
IntrogressionSet introgression_set_of(const ForestTriple& triple, const OsfMap& psi);

/// t(F) by exhausting every extension of the tree-membership character.
/// Throws CapExceeded when |F|^|interior(G)| exceeds `cap`.
std::size_t brute_force_t(const ForestTriple& triple, std::uint64_t cap = 10'000'000);

}  // namespace osf
