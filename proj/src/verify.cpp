#include "osf/verify.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "osf/builder.hpp"
#include "osf/errors.hpp"

namespace osf {

bool OsfReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
}

const OsfVerdict* OsfReport::find(std::string_view axiom) const {
  for (const auto& v : verdicts)
    if (v.axiom == axiom) return &v;
  return nullptr;
}

void OsfReport::append(const OsfReport& other) {
  verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
}

namespace {

OsfVerdict check_p1(const ForestTriple& t, const OsfMap& psi) {
  OsfVerdict v{"P1", true, {}, {}, {}};
  for (NodeId leaf : t.gene().leaves())
    if (psi[leaf] != t.phi(leaf)) v.vertices.push_back(leaf);
  if (!v.vertices.empty()) {
    v.pass = false;
    v.detail = "gene leaf not sent to its phi image";
  }
  return v;
}

OsfVerdict check_p2(const ForestTriple& t, const OsfMap& psi) {
  OsfVerdict v{"P2", true, {}, {}, {}};
  const PhyloTree& g = t.gene();
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t w = u + 1; w < g.subtree_end(node_id(u)); ++w) {
      const ForestNode a = psi[node_id(u)], b = psi[node_id(w)];
      if (a.tree == b.tree && !t.species().is_ancestor(a, b)) {
        v.arcs.push_back({node_id(u), node_id(w)});
      }
    }
  }
  if (!v.arcs.empty()) {
    v.pass = false;
    v.detail = "gene ancestor pair mapped to incomparable or inverted vertices";
    for (const auto& a : v.arcs) v.vertices.push_back(a.tail);
  }
  return v;
}

bool dominated_leaf_below(const ForestTriple& t, const OsfMap& psi, NodeId u) {
  const ForestNode img = psi[u];
  for (NodeId leaf : t.gene().cluster(u))
    if (t.species().is_ancestor(img, t.phi(leaf))) return true;
  return false;
}

OsfVerdict check_p3(const ForestTriple& t, const OsfMap& psi) {
  OsfVerdict v{"P3", true, {}, {}, {}};
  for (std::size_t u = 0; u < t.gene().size(); ++u)
    if (!dominated_leaf_below(t, psi, node_id(u))) v.vertices.push_back(node_id(u));
  if (!v.vertices.empty()) {
    v.pass = false;
    v.detail = "no gene leaf below the vertex maps below its image";
  }
  return v;
}

}  // namespace

OsfReport check_osf(const ForestTriple& triple, const OsfMap& psi) {
  if (psi.images().size() != triple.gene().size()) throw SemanticError("map is not total");
  return OsfReport{{check_p1(triple, psi), check_p2(triple, psi), check_p3(triple, psi)}};
}

OsfReport check_strict(const ForestTriple& triple, const OsfMap& psi) {
  if (psi.images().size() != triple.gene().size()) throw SemanticError("map is not total");
  OsfVerdict v{"S3", true, {}, {}, {}};
  const PhyloTree& g = triple.gene();
  for (NodeId u : g.interior()) {
    const ForestNode img = psi[u];
    bool ok = false;
    for (NodeId c : g.children(u)) ok = ok || triple.species().is_ancestor(img, psi[c]);
    if (!ok) v.vertices.push_back(u);
  }
  if (!v.vertices.empty()) {
    v.pass = false;
    v.detail = "no child of the vertex is mapped below its image";
  }
  return OsfReport{{v}};
}

OsfReport check_sosf(const ForestTriple& triple, const OsfMap& psi) {
  OsfReport r{{check_p1(triple, psi), check_p2(triple, psi)}};
  r.append(check_strict(triple, psi));
  return r;
}

IntrogressionCheck check_introgression_set(const ForestTriple& triple,
                                           std::span<const TreeArc> input) {
  const PhyloTree& g = triple.gene();
  std::set<TreeArc> arcs(input.begin(), input.end());
  for (const TreeArc& a : arcs)
    if (!g.contains(a.head) || !g.contains(a.tail) || g.parent(a.head) != a.tail)
      throw std::invalid_argument("arc (" + std::to_string(index(a.tail)) + "," +
                                  std::to_string(index(a.head)) + ") is not an arc of G");

  IntrogressionCheck out;
  for (const TreeArc& a : arcs) {
    bool kept = false;
    for (NodeId c : g.children(a.tail)) kept = kept || !arcs.contains({a.tail, c});
    if (!kept) {
      out.violated_condition = 1;
      out.detail = "every out-arc of vertex " + std::to_string(index(a.tail)) + " is in I";
      return out;
    }
  }

  IntrogressionSet set{{arcs.begin(), arcs.end()}, std::vector<std::size_t>(g.size()), {}};
  std::size_t components = 1;
  for (std::size_t i = 1; i < g.size(); ++i) {
    NodeId v = node_id(i);
    NodeId p = *g.parent(v);
    set.component[i] = arcs.contains({p, v}) ? components++ : set.component[index(p)];
  }
  set.component_tree.assign(components, kNoState);
  for (NodeId leaf : g.leaves()) {
    std::size_t& tree = set.component_tree[set.component[index(leaf)]];
    const std::size_t here = triple.phi(leaf).tree;
    if (tree == kNoState) {
      tree = here;
    } else if (tree != here) {
      out.violated_condition = 2;
      out.detail = "component of gene leaf '" + g.label(leaf) + "' spans several species trees";
      return out;
    }
  }
  for (const TreeArc& a : arcs) {
    if (set.component_tree[set.component[index(a.tail)]] ==
        set.component_tree[set.component[index(a.head)]]) {
      out.violated_condition = 3;
      out.detail = "arc (" + std::to_string(index(a.tail)) + "," + std::to_string(index(a.head)) +
                   ") joins components assigned to the same tree";
      return out;
    }
  }
  out.valid = true;
  out.set = std::move(set);
  return out;
}

IntrogressionSet make_introgression_set(const ForestTriple& triple,
                                        std::span<const TreeArc> arcs) {
  auto check = check_introgression_set(triple, arcs);
  if (!check.valid)
    throw SemanticError("not an introgression set: condition (" +
                        std::string(check.violated_condition == 1   ? "i"
                                    : check.violated_condition == 2 ? "ii"
                                                                    : "iii") +
                        ") violated: " + check.detail);
  return std::move(*check.set);
}

// The lca runs over every leaf below u that lands in T_M, not only those in
// u's own component: a component further down can map back into T_M, and
// leaving its leaves out would break (P2) above it.
OsfMap osf_from_introgression_set(const ForestTriple& triple, const IntrogressionSet& set) {
  Extension ext{std::vector<std::size_t>(triple.gene().size())};
  for (std::size_t i = 0; i < ext.state.size(); ++i) ext.state[i] = set.component_tree.at(set.component[i]);
  return place_extension(triple, ext);
}

IntrogressionSet introgression_set_of(const ForestTriple& triple, const OsfMap& psi) {
  if (!check_sosf(triple, psi).all_pass()) throw SemanticError("map is not a strict OSF");
  std::vector<TreeArc> arcs;
  for (const ContactArc& c : psi.contacts()) arcs.push_back(c.gene_arc);
  return make_introgression_set(triple, arcs);
}

std::size_t brute_force_t(const ForestTriple& triple, std::uint64_t cap) {
  const PhyloTree& g = triple.gene();
  const std::size_t k = triple.species().size();
  const auto interior = g.interior();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (total > cap / k + 1) throw CapExceeded("extension space exceeds oracle cap");
    total *= k;
  }
  if (total > cap) throw CapExceeded("extension space exceeds oracle cap");

  std::vector<std::size_t> state(g.size());
  for (NodeId leaf : g.leaves()) state[index(leaf)] = triple.phi(leaf).tree;
  std::vector<std::size_t> digit(interior.size(), 0);
  const auto arcs = g.arcs();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  while (true) {
    for (std::size_t i = 0; i < interior.size(); ++i) state[index(interior[i])] = digit[i];
    std::size_t cost = 0;
    for (const TreeArc& a : arcs) cost += state[index(a.tail)] != state[index(a.head)];
    best = std::min(best, cost);
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == k) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  return best;
}

}  // namespace osf
