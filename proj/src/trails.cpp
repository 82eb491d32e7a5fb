#include <algorithm>
#include <set>
#include <stdexcept>

#include "osf/errors.hpp"
#include "osf/network.hpp"
#include "osf/verify.hpp"

namespace osf {

namespace {

// Working copy of (G, phi, psi) indexed by draft vertex.
struct Draft {
  TreeDraft tree;
  std::vector<ForestNode> image;
  std::set<std::string> labels;
  std::size_t counter = 0;

  std::size_t add_leaf(std::size_t parent, ForestNode where) {
    std::string name;
    do {
      name = "aug_" + std::to_string(++counter);
    } while (labels.contains(name));
    labels.insert(name);
    const std::size_t v = tree.add_node(name);
    tree.add_arc(parent, v);
    image.push_back(where);
    return v;
  }
};

Draft make_draft(const ForestTriple& t, const OsfMap& psi) {
  Draft d{t.gene().to_draft(), {psi.images().begin(), psi.images().end()}, {}, 0};
  for (NodeId leaf : t.gene().leaves()) d.labels.insert(t.gene().label(leaf));
  return d;
}

std::pair<ForestTriple, OsfMap> freeze(const Draft& d, const Forest& species) {
  std::vector<std::optional<NodeId>> renumber;
  PhyloTree gene = PhyloTree::from_draft(d.tree, &renumber);
  LeafMap phi(gene.size());
  std::vector<ForestNode> images(gene.size());
  for (std::size_t v = 0; v < d.tree.size(); ++v) {
    if (!renumber[v]) continue;
    const std::size_t i = index(*renumber[v]);
    images[i] = d.image[v];
    if (gene.is_leaf(node_id(i))) phi[i] = d.image[v];
  }
  ForestTriple triple(std::move(gene), species, std::move(phi));
  OsfMap psi(triple, std::move(images));
  return {std::move(triple), std::move(psi)};
}

// Lexicographically least gene leaf below v whose phi image lies below psi(v).
std::optional<NodeId> least_dominated_leaf(const ForestTriple& t, const OsfMap& psi, NodeId v) {
  std::optional<NodeId> best;
  for (NodeId leaf : t.gene().cluster(v)) {
    if (!t.species().is_ancestor(psi[v], t.phi(leaf))) continue;
    if (!best || t.gene().label(leaf) < t.gene().label(*best)) best = leaf;
  }
  return best;
}

std::size_t uses_of(const OsfMap& psi, const ContactPair& c) {
  return static_cast<std::size_t>(std::count_if(
      psi.contacts().begin(), psi.contacts().end(),
      [&](const ContactArc& a) { return a.tail == c.first && a.head == c.second; }));
}

}  // namespace

TrailNormalization trail_normalize(const ForestTriple& triple, const OsfMap& psi) {
  if (!check_osf(triple, psi).all_pass()) throw SemanticError("map is not an OSF");
  const Forest& species = triple.species();

  // Phase 1: leaf augmentation.
  Draft d = make_draft(triple, psi);
  std::size_t augmented = 0;
  for (NodeId v : triple.gene().interior()) {
    const ForestNode img = psi[v];
    const auto l = least_dominated_leaf(triple, psi, v);
    if (!l) throw std::logic_error("OSF vertex without a dominated leaf");
    const std::size_t copies = std::max<std::size_t>(1, species.tree(img.tree).cluster(img.node).size());
    for (std::size_t i = 0; i < copies; ++i) d.add_leaf(index(v), triple.phi(*l));
    augmented += copies;
  }

  auto [cur_triple, cur_psi] = freeze(d, species);
  TrailNormalization out{cur_triple, cur_psi, augmented, {}};

  // Phase 2: rewire the shortest offending subpath until none is left.
  while (true) {
    const ForestTriple& t = out.triple;
    const OsfMap& m = out.psi;
    const auto bad = non_trail_paths(t, m);
    if (bad.empty()) break;
    const auto shortest = std::min_element(bad.begin(), bad.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    const std::vector<NodeId> path = *shortest;
    const std::size_t k = path.size() - 1;
    if (k < 3) throw std::logic_error("offending subpath shorter than three arcs");
    const ForestNode first_tail = m[path[0]], first_head = m[path[1]];
    const ForestNode last_tail = m[path[k - 1]], last_head = m[path[k]];
    if (first_tail.tree == first_head.tree || first_tail != last_tail || first_head != last_head)
      throw std::logic_error("offending subpath does not repeat a contact arc at its ends");

    RewireStep step{path, {first_tail, first_head}, 0, 0};
    step.uses_before = uses_of(m, step.contact);

    d = make_draft(t, m);
    const std::size_t v2 = index(path[1]), vk = index(path[k - 1]), vk1 = index(path[k]);
    d.tree.remove_arc(vk, vk1);
    if (d.tree.children[vk1].empty()) {
      d.tree.add_arc(v2, vk1);
    } else {
      const auto kids = d.tree.children[vk1];
      for (std::size_t c : kids) {
        d.tree.remove_arc(vk1, c);
        d.tree.add_arc(v2, c);
      }
    }
    if (d.tree.children[vk].size() == 1) {
      const auto l = least_dominated_leaf(t, m, path[k - 1]);
      if (!l) throw std::logic_error("rewired vertex without a dominated leaf");
      d.add_leaf(vk, t.phi(*l));
      ++out.augmented_leaves;
    }

    auto [next_triple, next_psi] = freeze(d, species);
    if (!check_osf(next_triple, next_psi).all_pass())
      throw std::logic_error("rewiring broke the OSF axioms");
    step.uses_after = uses_of(next_psi, step.contact);
    if (step.uses_after >= step.uses_before)
      throw std::logic_error("rewiring did not reduce contact arc usage");
    out.steps.push_back(std::move(step));
    out.triple = std::move(next_triple);
    out.psi = std::move(next_psi);
  }
  return out;
}

}  // namespace osf
