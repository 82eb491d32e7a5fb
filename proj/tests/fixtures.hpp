#pragma once

// Worked instances shared by the unit and acceptance tests.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "osf/core.hpp"
#include "osf/newick.hpp"
#include "osf/osf_map.hpp"

namespace fixtures {

using osf::ForestTriple;

inline ForestTriple triple(const std::string& gene, const std::string& forest,
                           const std::map<std::string, std::string>& phi) {
  return ForestTriple::from_labels(osf::parse_tree(gene), osf::parse_forest(forest), phi);
}

// Maps every gene leaf named like "a1" to the species leaf "A".
inline std::map<std::string, std::string> by_initial(const osf::PhyloTree& gene) {
  std::map<std::string, std::string> phi;
  for (osf::NodeId l : gene.leaves()) {
    const std::string& name = gene.label(l);
    phi[name] = std::string(1, static_cast<char>(name[0] - 'a' + 'A'));
  }
  return phi;
}

inline ForestTriple by_initial(const std::string& gene, const std::string& forest) {
  osf::PhyloTree g = osf::parse_tree(gene);
  return ForestTriple::from_labels(g, osf::parse_forest(forest), by_initial(g));
}

inline osf::OsfMap map_of(const ForestTriple& t, const std::vector<std::pair<std::size_t, std::size_t>>& images) {
  std::vector<osf::ForestNode> out;
  for (auto [tree, node] : images) out.push_back({tree, osf::node_id(node)});
  return osf::OsfMap(t, std::move(out));
}

// Non-binary gene tree with three contacts on two cherries; the builder
// crosses (rho1, rho2) twice along rho_G, w4, w5, w6.
inline ForestTriple crossing() {
  return by_initial("((a1,b1),(a2,b2),((c2,d2),c1,(a3,b3,(c3,d3))));", "(A,B);\n(C,D);\n");
}

// Gene vertex ids of the crossing tree.
namespace crossing_ids {
inline constexpr std::size_t root = 0, w1 = 1, w3 = 4, w4 = 7, w2 = 8, w5 = 12, w6 = 15;
}

// G = ((a,b)w1,(c,d)w2), T1 = (A,C), T2 = (B,D).
inline ForestTriple nonstrict() { return by_initial("((a,b),(c,d));", "(A,C);\n(B,D);\n"); }

// rho_G -> rho1, w1 and w2 -> rho2: an OSF failing (S3) at rho_G.
inline osf::OsfMap nonstrict_psi(const ForestTriple& t) {
  return map_of(t, {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 2}, {1, 2}});
}

// Single contact arc between two lineages.
inline ForestTriple two_lineage() { return by_initial("((a,b),(c,(d,e)));", "((A,B),C);\n(D,E);\n"); }

// Three trees; psi and psi' swap the images of v = (a1,c1) and w = (a2,c2).
inline ForestTriple three_tree() { return by_initial("(e1,h1,(a1,c1),(a2,c2));", "(A,B);\n(C,D);\n(E,H);\n"); }

inline osf::OsfMap three_tree_psi(const ForestTriple& t, bool swapped) {
  const std::size_t v = swapped ? 0 : 1, w = swapped ? 1 : 0;
  return map_of(t, {{2, 0}, {2, 1}, {2, 2}, {v, 0}, {0, 1}, {1, 1}, {w, 0}, {0, 1}, {1, 1}});
}

// Builder output has an incidental 2-cycle between the roots of T1 and T2.
inline ForestTriple incidental_pair() {
  return by_initial("(e1,f1,(a1,b1,a2,(c1,d1),(c2,d2)),(c3,d3,(a3,b3)));", "(A,B);\n(C,D);\n(E,F);\n");
}

// Builder output has an incidental 4-cycle that survives binary resolution.
inline ForestTriple incidental_square() {
  return by_initial("((a1,b1,(d1,f1)),(d2,e2,(a2,c2)));", "((A,B),C);\n((D,E),F);\n");
}

}  // namespace fixtures
