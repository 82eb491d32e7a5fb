#include "osf/generate.hpp"

#include <algorithm>

#include "osf/errors.hpp"

namespace osf {

PhyloTree random_tree(const std::vector<std::string>& labels, bool binary, std::mt19937_64& rng) {
  if (labels.size() < 2) throw SemanticError("a tree needs at least two leaves");
  TreeDraft d;
  std::vector<std::size_t> roots;
  for (const auto& l : labels) roots.push_back(d.add_node(l));
  while (roots.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, roots.size() - 2)(rng);
    if (j >= i) ++j;
    const std::size_t v = d.add_node();
    d.add_arc(v, roots[i]);
    d.add_arc(v, roots[j]);
    roots[std::min(i, j)] = v;
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
  }
  if (!binary) {
    std::bernoulli_distribution contract(1.0 / 3.0);
    // Children are created before parents, so walking ids upward keeps every
    // contracted child's own children intact.
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (d.children[v].empty() || !d.parent[v] || !contract(rng)) continue;
      const std::size_t p = *d.parent[v];
      const auto kids = d.children[v];
      d.remove_arc(p, v);
      for (std::size_t c : kids) {
        d.remove_arc(v, c);
        d.add_arc(p, c);
      }
    }
  }
  return PhyloTree::from_draft(d);
}

ForestTriple random_triple(const RandomTripleParams& p, std::uint64_t seed) {
  if (p.n_gene_leaves < 2) throw SemanticError("gene tree needs at least two leaves");
  if (p.n_trees < 1) throw SemanticError("forest needs at least one tree");
  if (p.leaves_per_tree < 2) throw SemanticError("species trees need at least two leaves");
  std::mt19937_64 rng(seed);
  std::vector<std::string> gene_labels;
  for (std::size_t i = 1; i <= p.n_gene_leaves; ++i) gene_labels.push_back("g" + std::to_string(i));
  PhyloTree gene = random_tree(gene_labels, p.binary, rng);

  std::vector<PhyloTree> trees;
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    std::vector<std::string> labels;
    for (std::size_t j = 1; j <= p.leaves_per_tree; ++j)
      labels.push_back("s" + std::to_string(t) + "_" + std::to_string(j));
    trees.push_back(random_tree(labels, p.binary, rng));
  }
  Forest forest(std::move(trees));

  std::vector<ForestNode> species_leaves;
  for (std::size_t t = 0; t < forest.size(); ++t)
    for (NodeId l : forest.tree(t).leaves()) species_leaves.push_back({t, l});
  std::uniform_int_distribution<std::size_t> pick(0, species_leaves.size() - 1);
  LeafMap phi(gene.size());
  for (NodeId leaf : gene.leaves()) phi[index(leaf)] = species_leaves[pick(rng)];
  return ForestTriple(std::move(gene), std::move(forest), std::move(phi));
}

std::vector<PhyloTree> all_trees(const std::vector<std::string>& labels, bool binary_only) {
  if (labels.size() < 2) throw SemanticError("a tree needs at least two leaves");
  std::vector<TreeDraft> current(1);
  current[0].add_node();
  current[0].add_arc(0, current[0].add_node(labels[0]));
  current[0].add_arc(0, current[0].add_node(labels[1]));

  // Each tree on k+1 leaves arises exactly once from one on k leaves: the
  // new leaf either joins an interior vertex or subdivides an arc (or sits
  // above the root).
  for (std::size_t k = 2; k < labels.size(); ++k) {
    std::vector<TreeDraft> next;
    for (const TreeDraft& d : current) {
      for (std::size_t v = 0; v < d.size(); ++v) {
        if (!binary_only && !d.children[v].empty()) {
          TreeDraft e = d;
          e.add_arc(v, e.add_node(labels[k]));
          next.push_back(std::move(e));
        }
        TreeDraft e = d;
        const std::size_t q = e.add_node();
        if (auto p = e.parent[v]) {
          auto& kids = e.children[*p];
          *std::find(kids.begin(), kids.end(), v) = q;
          e.parent[q] = *p;
          e.parent[v].reset();
        }
        e.add_arc(q, v);
        e.add_arc(q, e.add_node(labels[k]));
        next.push_back(std::move(e));
      }
    }
    current = std::move(next);
  }
  std::vector<PhyloTree> out;
  out.reserve(current.size());
  for (const TreeDraft& d : current) out.push_back(PhyloTree::from_draft(d));
  return out;
}

}  // namespace osf
