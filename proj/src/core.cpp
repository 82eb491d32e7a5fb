#include "osf/core.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "osf/errors.hpp"

namespace osf {

std::size_t TreeDraft::add_node(std::string name) {
  parent.emplace_back();
  children.emplace_back();
  label.push_back(std::move(name));
  return parent.size() - 1;
}

void TreeDraft::add_arc(std::size_t tail, std::size_t head) {
  if (tail >= size() || head >= size()) throw std::out_of_range("draft arc endpoint");
  if (parent[head]) throw SemanticError("draft vertex already has a parent");
  parent[head] = tail;
  children[tail].push_back(head);
}

void TreeDraft::remove_arc(std::size_t tail, std::size_t head) {
  auto& kids = children.at(tail);
  auto it = std::find(kids.begin(), kids.end(), head);
  if (it == kids.end() || parent.at(head) != tail) throw SemanticError("draft arc not present");
  kids.erase(it);
  parent[head].reset();
}

namespace {

bool is_dead(const TreeDraft& d, std::size_t v) {
  return !d.parent[v] && d.children[v].empty() && d.label[v].empty();
}

TreeDraft contract_unary(TreeDraft d) {
  for (std::size_t v = 0; v < d.size(); ++v) {
    while (d.children[v].size() == 1 && d.label[v].empty()) {
      std::size_t only = d.children[v].front();
      if (d.parent[v]) {
        std::size_t p = *d.parent[v];
        auto& kids = d.children[p];
        *std::find(kids.begin(), kids.end(), v) = only;
        d.parent[only] = p;
      } else {
        d.parent[only].reset();
      }
      d.children[v].clear();
      d.parent[v].reset();
    }
  }
  return d;
}

}  // namespace

PhyloTree PhyloTree::from_draft(const TreeDraft& input,
                                std::vector<std::optional<NodeId>>* renumbering,
                                bool suppress_unary) {
  const TreeDraft draft = suppress_unary ? contract_unary(input) : input;
  std::optional<std::size_t> root;
  std::size_t live = 0;
  for (std::size_t v = 0; v < draft.size(); ++v) {
    if (is_dead(draft, v)) continue;
    ++live;
    if (!draft.parent[v]) {
      if (root) throw SemanticError("tree has more than one root");
      root = v;
    }
  }
  if (!root) throw SemanticError("tree has no root");

  PhyloTree tree;
  std::vector<std::optional<NodeId>> new_id(draft.size());
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{*root};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (new_id[v]) throw SemanticError("tree contains a cycle");
    new_id[v] = node_id(order.size());
    order.push_back(v);
    const auto& kids = draft.children[v];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (order.size() != live) throw SemanticError("tree is not connected");

  const std::size_t n = order.size();
  tree.parent_.resize(n);
  tree.children_.resize(n);
  tree.label_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = order[i];
    if (draft.parent[v]) tree.parent_[i] = new_id[*draft.parent[v]];
    for (std::size_t c : draft.children[v]) tree.children_[i].push_back(*new_id[c]);
    if (draft.children[v].empty()) {
      if (draft.label[v].empty()) throw SemanticError("unlabelled leaf");
      tree.label_[i] = draft.label[v];
      if (!tree.leaf_index_.emplace(draft.label[v], node_id(i)).second)
        throw SemanticError("duplicate leaf label '" + draft.label[v] + "'");
      ++tree.leaf_count_;
    } else if (draft.children[v].size() == 1 && draft.parent[v]) {
      throw SemanticError("vertex with indegree 1 and outdegree 1");
    }
  }
  if (tree.children_[0].size() < 2) throw SemanticError("root has outdegree < 2");

  tree.subtree_end_.assign(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    std::size_t end = i + 1;
    for (NodeId c : tree.children_[i]) end = std::max(end, tree.subtree_end_[index(c)]);
    tree.subtree_end_[i] = end;
  }
  if (renumbering) *renumbering = std::move(new_id);
  return tree;
}

TreeDraft PhyloTree::to_draft() const {
  TreeDraft d;
  for (std::size_t i = 0; i < size(); ++i) d.add_node(label_[i]);
  for (std::size_t i = 0; i < size(); ++i)
    for (NodeId c : children_[i]) d.add_arc(i, index(c));
  return d;
}

void PhyloTree::check(NodeId v) const {
  if (!contains(v)) throw std::out_of_range("unknown node id " + std::to_string(index(v)));
}

std::optional<NodeId> PhyloTree::parent(NodeId v) const {
  check(v);
  return parent_[index(v)];
}

std::span<const NodeId> PhyloTree::children(NodeId v) const {
  check(v);
  return children_[index(v)];
}

const std::string& PhyloTree::label(NodeId v) const {
  check(v);
  return label_[index(v)];
}

std::optional<NodeId> PhyloTree::find_leaf(std::string_view name) const {
  auto it = leaf_index_.find(name);
  if (it == leaf_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> PhyloTree::leaves() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (children_[i].empty()) out.push_back(node_id(i));
  return out;
}

std::vector<NodeId> PhyloTree::interior() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (!children_[i].empty()) out.push_back(node_id(i));
  return out;
}

std::vector<TreeArc> PhyloTree::arcs() const {
  std::vector<TreeArc> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (NodeId c : children_[i]) out.push_back({node_id(i), c});
  std::sort(out.begin(), out.end());
  return out;
}

bool PhyloTree::is_binary() const {
  return std::all_of(children_.begin(), children_.end(),
                     [](const auto& kids) { return kids.empty() || kids.size() == 2; });
}

bool PhyloTree::is_ancestor(NodeId u, NodeId v) const {
  check(u);
  check(v);
  return index(u) <= index(v) && index(v) < subtree_end_[index(u)];
}

std::size_t PhyloTree::subtree_end(NodeId v) const {
  check(v);
  return subtree_end_[index(v)];
}

std::size_t PhyloTree::depth(NodeId v) const {
  check(v);
  std::size_t d = 0;
  for (auto p = parent_[index(v)]; p; p = parent_[index(*p)]) ++d;
  return d;
}

NodeId PhyloTree::lca(NodeId a, NodeId b) const {
  check(a);
  check(b);
  // Walk both up to equal depth, then together.
  std::size_t da = depth(a), db = depth(b);
  while (da > db) { a = *parent_[index(a)]; --da; }
  while (db > da) { b = *parent_[index(b)]; --db; }
  while (a != b) {
    a = *parent_[index(a)];
    b = *parent_[index(b)];
  }
  return a;
}

NodeId PhyloTree::lca(std::span<const NodeId> nodes) const {
  if (nodes.empty()) throw std::invalid_argument("lca of an empty set");
  NodeId acc = nodes.front();
  check(acc);
  for (NodeId v : nodes.subspan(1)) acc = lca(acc, v);
  return acc;
}

std::vector<NodeId> PhyloTree::cluster(NodeId v) const {
  check(v);
  std::vector<NodeId> out;
  for (std::size_t i = index(v); i < subtree_end_[index(v)]; ++i)
    if (children_[i].empty()) out.push_back(node_id(i));
  return out;
}

std::vector<NodeId> PhyloTree::path_down(NodeId u, NodeId v) const {
  if (!is_ancestor(u, v)) throw std::invalid_argument("path_down: not an ancestor");
  std::vector<NodeId> path{v};
  while (path.back() != u) path.push_back(*parent_[index(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

Forest::Forest(std::vector<PhyloTree> trees) : trees_(std::move(trees)) {
  if (trees_.empty()) throw SemanticError("forest must contain at least one tree");
  std::set<std::string, std::less<>> seen;
  offset_.push_back(0);
  for (const auto& t : trees_) {
    for (NodeId leaf : t.leaves())
      if (!seen.insert(t.label(leaf)).second)
        throw SemanticError("leaf label '" + t.label(leaf) + "' occurs in more than one tree");
    offset_.push_back(offset_.back() + t.size());
  }
}

std::optional<ForestNode> Forest::find_leaf(std::string_view name) const {
  for (std::size_t i = 0; i < trees_.size(); ++i)
    if (auto v = trees_[i].find_leaf(name)) return ForestNode{i, *v};
  return std::nullopt;
}

bool Forest::is_binary() const {
  return std::all_of(trees_.begin(), trees_.end(), [](const auto& t) { return t.is_binary(); });
}

ForestNode Forest::local(std::size_t global_id) const {
  if (global_id >= vertex_count()) throw std::out_of_range("forest vertex out of range");
  auto it = std::upper_bound(offset_.begin(), offset_.end(), global_id);
  std::size_t tree = static_cast<std::size_t>(it - offset_.begin()) - 1;
  return {tree, node_id(global_id - offset_[tree])};
}

ForestTriple::ForestTriple(PhyloTree gene, Forest species, LeafMap phi)
    : gene_(std::move(gene)), species_(std::move(species)), phi_(std::move(phi)) {
  if (phi_.size() != gene_.size()) throw SemanticError("leaf map does not cover the gene tree");
  for (std::size_t i = 0; i < gene_.size(); ++i) {
    NodeId v = node_id(i);
    if (!gene_.is_leaf(v)) {
      phi_[i].reset();
      continue;
    }
    if (!phi_[i]) throw SemanticError("gene leaf '" + gene_.label(v) + "' is not mapped");
    const ForestNode& img = *phi_[i];
    if (img.tree >= species_.size() || !species_.tree(img.tree).contains(img.node) ||
        !species_.is_leaf(img))
      throw SemanticError("gene leaf '" + gene_.label(v) + "' maps to a non-leaf");
  }
}

ForestTriple ForestTriple::from_labels(PhyloTree gene, Forest species,
                                       const std::map<std::string, std::string>& phi) {
  LeafMap map(gene.size());
  for (NodeId leaf : gene.leaves()) {
    auto it = phi.find(gene.label(leaf));
    if (it == phi.end()) throw SemanticError("gene leaf '" + gene.label(leaf) + "' is not mapped");
    auto target = species.find_leaf(it->second);
    if (!target) throw SemanticError("species leaf '" + it->second + "' not in forest");
    map[index(leaf)] = *target;
  }
  return ForestTriple(std::move(gene), std::move(species), std::move(map));
}

ForestNode ForestTriple::phi(NodeId gene_leaf) const {
  const auto& img = phi_.at(index(gene_leaf));
  if (!img) throw std::invalid_argument("phi is defined on leaves only");
  return *img;
}

Network::Network(std::size_t vertex_count, std::vector<NetworkArc> arcs,
                 std::map<std::size_t, std::string> leaf_labels)
    : vertex_count_(vertex_count), arcs_(std::move(arcs)), labels_(std::move(leaf_labels)),
      out_(vertex_count), in_(vertex_count) {
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto& a = arcs_[i];
    if (a.tail >= vertex_count_ || a.head >= vertex_count_)
      throw SemanticError("network arc endpoint out of range");
    if (a.tail == a.head) throw SemanticError("network contains a loop");
    out_[a.tail].push_back(i);
    in_[a.head].push_back(i);
  }
  for (const auto& [v, name] : labels_)
    if (v >= vertex_count_) throw SemanticError("labelled vertex out of range");
}

bool Network::has_partition() const {
  return std::none_of(arcs_.begin(), arcs_.end(),
                      [](const NetworkArc& a) { return a.kind == ArcKind::plain; });
}

Network Network::without_partition() const {
  auto arcs = arcs_;
  for (auto& a : arcs) a.kind = ArcKind::plain;
  return Network(vertex_count_, std::move(arcs), labels_);
}

std::vector<std::size_t> Network::arcs_of_kind(ArcKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    if (arcs_[i].kind == kind) out.push_back(i);
  return out;
}

bool NetworkAxiomReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
}

const AxiomVerdict& NetworkAxiomReport::verdict(std::string_view axiom) const {
  for (const auto& v : verdicts)
    if (v.axiom == axiom) return v;
  throw std::out_of_range("no verdict for axiom");
}

NetworkAxiomReport check_network_axioms(const Network& g, std::span<const std::size_t> x) {
  std::set<std::size_t> in_x;
  AxiomVerdict n1{"N1", true, {}}, n2{"N2", true, {}}, n3{"N3", true, {}}, n4{"N4", true, {}};
  for (std::size_t v : x) {
    if (v >= g.vertex_count()) n1.offending.push_back(v);
    else in_x.insert(v);
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const bool member = in_x.contains(v);
    if (g.indegree(v) == 1 && g.outdegree(v) == 1 && !member) n2.offending.push_back(v);
    if (g.indegree(v) == 0 && member) n3.offending.push_back(v);
    if (g.outdegree(v) == 0 && !member) n4.offending.push_back(v);
  }
  NetworkAxiomReport report;
  for (auto* verdict : {&n1, &n2, &n3, &n4}) {
    std::sort(verdict->offending.begin(), verdict->offending.end());
    verdict->pass = verdict->offending.empty();
    report.verdicts.push_back(std::move(*verdict));
  }
  return report;
}

NetworkAxiomReport check_network_axioms(const Network& network) {
  std::vector<std::size_t> x;
  for (const auto& [v, name] : network.leaf_labels()) x.push_back(v);
  return check_network_axioms(network, x);
}

Network to_network(const PhyloTree& tree) {
  return to_network(Forest({tree}));
}

Network to_network(const Forest& forest) {
  std::vector<NetworkArc> arcs;
  std::map<std::size_t, std::string> labels;
  for (std::size_t t = 0; t < forest.size(); ++t) {
    const auto& tree = forest.tree(t);
    for (const TreeArc& a : tree.arcs())
      arcs.push_back({forest.global({t, a.tail}), forest.global({t, a.head}), ArcKind::forest});
    for (NodeId leaf : tree.leaves()) labels[forest.global({t, leaf})] = tree.label(leaf);
  }
  std::sort(arcs.begin(), arcs.end());
  return Network(forest.vertex_count(), std::move(arcs), std::move(labels));
}

}  // namespace osf
