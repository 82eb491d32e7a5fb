#include "osf/builder.hpp"

#include <algorithm>
#include <stdexcept>

namespace osf {

std::size_t TieBreaker::choose(std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("tie breaker given no candidates");
  if (!random_) return *std::min_element(candidates.begin(), candidates.end());
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng_)];
}

Character character_of(const ForestTriple& triple) {
  const PhyloTree& gene = triple.gene();
  Character f{std::vector<std::size_t>(gene.size(), kNoState), triple.species().size()};
  for (NodeId leaf : gene.leaves()) f.state[index(leaf)] = triple.phi(leaf).tree;
  return f;
}

SigmaSets bottom_up(const PhyloTree& gene, const Character& f) {
  SigmaSets sigma(gene.size());
  std::vector<std::size_t> count(f.state_count);
  // Preorder ids: children always have larger ids than their parent.
  for (std::size_t i = gene.size(); i-- > 0;) {
    NodeId v = node_id(i);
    if (gene.is_leaf(v)) {
      if (f.state[i] >= f.state_count) throw std::invalid_argument("character undefined on a leaf");
      sigma[i] = {f.state[i]};
      continue;
    }
    std::fill(count.begin(), count.end(), 0);
    for (NodeId c : gene.children(v))
      for (std::size_t s : sigma[index(c)]) ++count[s];
    const std::size_t best = *std::max_element(count.begin(), count.end());
    for (std::size_t s = 0; s < count.size(); ++s)
      if (count[s] == best) sigma[i].push_back(s);
  }
  return sigma;
}

Extension top_down(const PhyloTree& gene, const SigmaSets& sigma, TieBreaker& tie) {
  Extension ext{std::vector<std::size_t>(gene.size(), kNoState)};
  ext.state[0] = tie.choose(sigma[0]);
  for (std::size_t i = 1; i < gene.size(); ++i) {
    const std::size_t inherited = ext.state[index(*gene.parent(node_id(i)))];
    const auto& own = sigma[i];
    ext.state[i] = std::binary_search(own.begin(), own.end(), inherited) ? inherited
                                                                         : tie.choose(own);
  }
  return ext;
}

OsfMap place_extension(const ForestTriple& triple, const Extension& extension) {
  const PhyloTree& gene = triple.gene();
  std::vector<ForestNode> images(gene.size());
  for (std::size_t i = 0; i < gene.size(); ++i) {
    const std::size_t tree = extension.state[i];
    std::vector<NodeId> targets;
    for (NodeId leaf : gene.cluster(node_id(i))) {
      ForestNode img = triple.phi(leaf);
      if (img.tree == tree) targets.push_back(img.node);
    }
    if (targets.empty())
      throw std::logic_error("extension assigns a tree with no leaf image below the vertex");
    images[i] = {tree, triple.species().tree(tree).lca(targets)};
  }
  return OsfMap(triple, std::move(images));
}

OsfMap build_osf(const ForestTriple& triple, TieBreaker& tie) {
  const Character f = character_of(triple);
  const SigmaSets sigma = bottom_up(triple.gene(), f);
  return place_extension(triple, top_down(triple.gene(), sigma, tie));
}

OsfMap build_osf(const ForestTriple& triple) {
  TieBreaker tie = TieBreaker::first();
  return build_osf(triple, tie);
}

std::size_t changed_arcs(const PhyloTree& gene, const Extension& extension) {
  std::size_t changes = 0;
  for (const TreeArc& a : gene.arcs())
    if (extension.state[index(a.tail)] != extension.state[index(a.head)]) ++changes;
  return changes;
}

std::size_t parsimony_score(const PhyloTree& gene, const Character& f) {
  const std::size_t k = f.state_count;
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> cost(gene.size(), std::vector<std::size_t>(k, 0));
  for (std::size_t i = gene.size(); i-- > 0;) {
    NodeId v = node_id(i);
    if (gene.is_leaf(v)) {
      for (std::size_t s = 0; s < k; ++s) cost[i][s] = (s == f.state[i]) ? 0 : inf;
      continue;
    }
    for (NodeId c : gene.children(v)) {
      const auto& child = cost[index(c)];
      const std::size_t best_child = *std::min_element(child.begin(), child.end());
      for (std::size_t s = 0; s < k; ++s) cost[i][s] += std::min(child[s], best_child + 1);
    }
  }
  return *std::min_element(cost[0].begin(), cost[0].end());
}

}  // namespace osf
