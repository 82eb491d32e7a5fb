#pragma once

#include <span>
#include <utility>
#include <vector>

#include "osf/core.hpp"

namespace osf {

/// One element of the contact multiset C(psi): a gene arc whose ends land in
/// different trees, together with its image.
struct ContactArc {
  TreeArc gene_arc;
  ForestNode tail;
  ForestNode head;
};

using ContactPair = std::pair<ForestNode, ForestNode>;

/// Total map psi: V(G) -> V(F) with its contact arcs precomputed. Holds no
/// reference to the triple it was built for.
class OsfMap {
 public:
  /// Throws SemanticError unless `images` covers every gene vertex with an
  /// existing forest vertex.
  OsfMap(const ForestTriple& triple, std::vector<ForestNode> images);

  const ForestNode& operator[](NodeId gene_vertex) const { return images_.at(index(gene_vertex)); }
  std::span<const ForestNode> images() const { return images_; }

  /// C(psi) in gene-arc order; |C(psi)| is contacts().size().
  std::span<const ContactArc> contacts() const { return contacts_; }
  /// C*(psi), sorted.
  std::span<const ContactPair> contact_set() const { return contact_set_; }

  bool operator==(const OsfMap& other) const { return images_ == other.images_; }

 private:
  std::vector<ForestNode> images_;
  std::vector<ContactArc> contacts_;
  std::vector<ContactPair> contact_set_;
};

}  // namespace osf
