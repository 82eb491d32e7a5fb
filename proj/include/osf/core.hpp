#pragma once

// Trees, forests, forest triples and general networks.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace osf {

/// Handle of a vertex inside one PhyloTree. Ids are preorder positions, so
/// the root is always 0 and every subtree occupies a contiguous id range.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId v) { return static_cast<std::size_t>(v); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(i); }

struct TreeArc {
  NodeId tail;
  NodeId head;
  auto operator<=>(const TreeArc&) const = default;
};

/// Mutable scratch structure for building or rewriting trees. No invariants
/// are enforced until it is turned into a PhyloTree.
struct TreeDraft {
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::string> label;

  std::size_t add_node(std::string name = {});
  void add_arc(std::size_t tail, std::size_t head);
  void remove_arc(std::size_t tail, std::size_t head);
  std::size_t size() const { return parent.size(); }
};

/// Rooted phylogenetic tree: a single root of outdegree at least two, labelled
/// leaves, and no vertex with indegree one and outdegree one. Immutable.
class PhyloTree {
 public:
  /// Validates `draft` and renumbers its reachable part in preorder. When
  /// `renumbering` is given it receives the new id of every draft vertex
  /// (nullopt for vertices not reachable from the root). With
  /// `suppress_unary` vertices of outdegree one are contracted first.
  static PhyloTree from_draft(const TreeDraft& draft,
                              std::vector<std::optional<NodeId>>* renumbering = nullptr,
                              bool suppress_unary = false);

  TreeDraft to_draft() const;

  std::size_t size() const { return parent_.size(); }
  NodeId root() const { return node_id(0); }
  std::optional<NodeId> parent(NodeId v) const;
  std::span<const NodeId> children(NodeId v) const;
  bool is_leaf(NodeId v) const { return children(v).empty(); }
  /// Empty for interior vertices.
  const std::string& label(NodeId v) const;
  std::optional<NodeId> find_leaf(std::string_view label) const;

  std::vector<NodeId> leaves() const;
  std::vector<NodeId> interior() const;
  std::vector<TreeArc> arcs() const;
  std::size_t leaf_count() const { return leaf_count_; }
  bool is_binary() const;

  bool contains(NodeId v) const { return index(v) < size(); }
  /// Reflexive: is_ancestor(v, v) holds.
  bool is_ancestor(NodeId u, NodeId v) const;
  NodeId lca(std::span<const NodeId> nodes) const;
  NodeId lca(NodeId a, NodeId b) const;
  /// Leaves below v in ascending id order.
  std::vector<NodeId> cluster(NodeId v) const;
  /// Vertices from u down to v inclusive; requires is_ancestor(u, v).
  std::vector<NodeId> path_down(NodeId u, NodeId v) const;
  std::size_t depth(NodeId v) const;
  /// One past the last id of v's subtree.
  std::size_t subtree_end(NodeId v) const;

 private:
  PhyloTree() = default;
  void check(NodeId v) const;

  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::string> label_;
  std::vector<std::size_t> subtree_end_;
  std::map<std::string, NodeId, std::less<>> leaf_index_;
  std::size_t leaf_count_ = 0;
};

/// Vertex of a forest: tree position plus the vertex inside that tree.
struct ForestNode {
  std::size_t tree = 0;
  NodeId node{};
  auto operator<=>(const ForestNode&) const = default;
};

/// Non-empty ordered list of trees with pairwise disjoint leaf labels.
class Forest {
 public:
  explicit Forest(std::vector<PhyloTree> trees);

  std::size_t size() const { return trees_.size(); }
  const PhyloTree& tree(std::size_t i) const { return trees_.at(i); }
  std::span<const PhyloTree> trees() const { return trees_; }
  std::optional<ForestNode> find_leaf(std::string_view label) const;
  bool is_binary() const;

  /// Vertices are numbered globally tree by tree, in input order.
  std::size_t vertex_count() const { return offset_.back(); }
  std::size_t global(ForestNode v) const { return offset_[v.tree] + index(v.node); }
  ForestNode local(std::size_t global_id) const;
  bool is_ancestor(ForestNode u, ForestNode v) const {
    return u.tree == v.tree && trees_[u.tree].is_ancestor(u.node, v.node);
  }
  bool is_leaf(ForestNode v) const { return trees_[v.tree].is_leaf(v.node); }
  const std::string& label(ForestNode v) const { return trees_[v.tree].label(v.node); }

 private:
  std::vector<PhyloTree> trees_;
  std::vector<std::size_t> offset_;
};

/// Leaf map phi, indexed by gene-tree vertex; only leaf entries are set.
using LeafMap = std::vector<std::optional<ForestNode>>;

/// (G, F, phi): gene tree, species forest, and a total map L(G) -> L(F).
class ForestTriple {
 public:
  ForestTriple(PhyloTree gene, Forest species, LeafMap phi);
  /// Builds phi from gene-leaf label -> species-leaf label pairs.
  static ForestTriple from_labels(PhyloTree gene, Forest species,
                                  const std::map<std::string, std::string>& phi);

  const PhyloTree& gene() const { return gene_; }
  const Forest& species() const { return species_; }
  ForestNode phi(NodeId gene_leaf) const;
  const LeafMap& leaf_map() const { return phi_; }
  bool is_binary() const { return gene_.is_binary() && species_.is_binary(); }

 private:
  PhyloTree gene_;
  Forest species_;
  LeafMap phi_;
};

enum class ArcKind { plain, forest, contact };

struct NetworkArc {
  std::size_t tail = 0;
  std::size_t head = 0;
  ArcKind kind = ArcKind::plain;
  auto operator<=>(const NetworkArc&) const = default;
};

/// Directed multigraph with a labelled vertex subset X. Arcs may carry a
/// forest/contact partition; a network "has a partition" when no arc is
/// plain.
class Network {
 public:
  Network() = default;
  Network(std::size_t vertex_count, std::vector<NetworkArc> arcs,
          std::map<std::size_t, std::string> leaf_labels);

  std::size_t vertex_count() const { return vertex_count_; }
  std::span<const NetworkArc> arcs() const { return arcs_; }
  const NetworkArc& arc(std::size_t i) const { return arcs_.at(i); }
  const std::map<std::size_t, std::string>& leaf_labels() const { return labels_; }
  bool in_leaf_set(std::size_t v) const { return labels_.contains(v); }
  bool has_partition() const;

  std::span<const std::size_t> out_arcs(std::size_t v) const { return out_.at(v); }
  std::span<const std::size_t> in_arcs(std::size_t v) const { return in_.at(v); }
  std::size_t outdegree(std::size_t v) const { return out_.at(v).size(); }
  std::size_t indegree(std::size_t v) const { return in_.at(v).size(); }

  /// Same graph with every arc marked plain.
  Network without_partition() const;
  std::vector<std::size_t> arcs_of_kind(ArcKind kind) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<NetworkArc> arcs_;
  std::map<std::size_t, std::string> labels_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

struct AxiomVerdict {
  std::string axiom;
  bool pass = true;
  std::vector<std::size_t> offending;
};

/// Verdicts for (N1) to (N4) in that order.
struct NetworkAxiomReport {
  std::vector<AxiomVerdict> verdicts;
  bool all_pass() const;
  const AxiomVerdict& verdict(std::string_view axiom) const;
};

/// Checks (N1)-(N4) taking X to be `x` (vertices out of range violate N1).
NetworkAxiomReport check_network_axioms(const Network& graph, std::span<const std::size_t> x);
/// Same, with X = the network's labelled vertex set.
NetworkAxiomReport check_network_axioms(const Network& network);

/// A tree (or forest) seen as a network on its leaves; all arcs are forest arcs.
Network to_network(const PhyloTree& tree);
Network to_network(const Forest& forest);

}  // namespace osf
