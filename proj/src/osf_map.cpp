#include "osf/osf_map.hpp"

#include <algorithm>

#include "osf/errors.hpp"

namespace osf {

OsfMap::OsfMap(const ForestTriple& triple, std::vector<ForestNode> images)
    : images_(std::move(images)) {
  const PhyloTree& gene = triple.gene();
  const Forest& forest = triple.species();
  if (images_.size() != gene.size()) throw SemanticError("map is not total on the gene tree");
  for (const ForestNode& img : images_)
    if (img.tree >= forest.size() || !forest.tree(img.tree).contains(img.node))
      throw SemanticError("map image is not a vertex of the forest");
  for (const TreeArc& a : gene.arcs()) {
    const ForestNode& from = images_[index(a.tail)];
    const ForestNode& to = images_[index(a.head)];
    if (from.tree != to.tree) {
      contacts_.push_back({a, from, to});
      contact_set_.emplace_back(from, to);
    }
  }
  std::sort(contact_set_.begin(), contact_set_.end());
  contact_set_.erase(std::unique(contact_set_.begin(), contact_set_.end()), contact_set_.end());
}

}  // namespace osf
