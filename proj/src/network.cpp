#include "osf/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "osf/errors.hpp"
#include "osf/verify.hpp"

namespace osf {

Network build_network(const ForestTriple& triple, const OsfMap& psi) {
  const auto report = check_osf(triple, psi);
  if (!report.all_pass()) throw SemanticError("map is not an OSF");
  const Forest& forest = triple.species();
  Network base = to_network(forest);
  std::vector<NetworkArc> arcs(base.arcs().begin(), base.arcs().end());
  for (const auto& [from, to] : psi.contact_set())
    arcs.push_back({forest.global(from), forest.global(to), ArcKind::contact});
  return Network(forest.vertex_count(), std::move(arcs), base.leaf_labels());
}

Connectivity connectivity_check(const ForestTriple& triple, const OsfMap& psi) {
  const Network n = build_network(triple, psi);
  std::vector<std::size_t> root(n.vertex_count());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const NetworkArc& a : n.arcs()) root[find(a.tail)] = find(a.head);
  std::size_t components = 0;
  for (std::size_t v = 0; v < n.vertex_count(); ++v) components += find(v) == v;

  std::vector<bool> covered(triple.species().size(), false);
  for (NodeId leaf : triple.gene().leaves()) covered[triple.phi(leaf).tree] = true;
  return {components == 1, std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })};
}

std::vector<std::size_t> walk_of_path(const ForestTriple& triple, const OsfMap& psi,
                                      std::span<const NodeId> path) {
  const PhyloTree& g = triple.gene();
  const Forest& forest = triple.species();
  if (path.empty()) throw std::invalid_argument("empty gene path");
  std::vector<std::size_t> walk{forest.global(psi[path.front()])};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (g.parent(path[i + 1]) != path[i]) throw std::invalid_argument("not a directed gene path");
    const ForestNode a = psi[path[i]], b = psi[path[i + 1]];
    if (a.tree != b.tree) {
      walk.push_back(forest.global(b));
      continue;
    }
    if (!forest.is_ancestor(a, b)) throw std::invalid_argument("gene arc image violates (P2)");
    const auto down = forest.tree(a.tree).path_down(a.node, b.node);
    for (std::size_t j = 1; j < down.size(); ++j) walk.push_back(forest.global({a.tree, down[j]}));
  }
  return walk;
}

bool is_trail(std::span<const std::size_t> walk) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i)
    if (!seen.emplace(walk[i], walk[i + 1]).second) return false;
  return true;
}

std::vector<std::vector<NodeId>> non_trail_paths(const ForestTriple& triple, const OsfMap& psi) {
  const PhyloTree& g = triple.gene();
  std::vector<std::vector<NodeId>> out;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t w = u + 1; w < g.subtree_end(node_id(u)); ++w) {
      auto path = g.path_down(node_id(u), node_id(w));
      if (!is_trail(walk_of_path(triple, psi, path))) out.push_back(std::move(path));
    }
  }
  return out;
}

std::vector<std::size_t> Trail::vertices(const Network& network) const {
  std::vector<std::size_t> out{start};
  for (std::size_t a : arcs) out.push_back(network.arc(a).head);
  return out;
}

std::vector<std::vector<std::size_t>> directed_cycles(const Network& network, std::size_t cap) {
  std::vector<std::vector<std::size_t>> cycles;
  const std::size_t n = network.vertex_count();
  std::vector<bool> on_path(n, false);
  std::vector<std::size_t> arc_path;

  // Each simple cycle is found once, from its smallest vertex.
  for (std::size_t s = 0; s < n; ++s) {
    struct Frame {
      std::size_t vertex;
      std::size_t next = 0;
    };
    std::vector<Frame> stack{{s}};
    on_path[s] = true;
    while (!stack.empty()) {
      Frame& top = stack.back();
      const auto outs = network.out_arcs(top.vertex);
      if (top.next == outs.size()) {
        on_path[top.vertex] = false;
        stack.pop_back();
        if (!arc_path.empty()) arc_path.pop_back();
        continue;
      }
      const std::size_t a = outs[top.next++];
      const std::size_t head = network.arc(a).head;
      if (head == s) {
        auto cycle = arc_path;
        cycle.push_back(a);
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        cycles.push_back(std::move(cycle));
        if (cycles.size() > cap) throw CapExceeded("cycle count exceeds cap");
      } else if (head > s && !on_path[head]) {
        on_path[head] = true;
        arc_path.push_back(a);
        stack.push_back({head});
      }
    }
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

namespace {

std::vector<std::size_t> canonical_rotation(std::vector<std::size_t> cycle) {
  std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  return cycle;
}

}  // namespace

std::vector<ClassifiedCycle> classify_cycles(const ForestTriple& triple, const OsfMap& psi,
                                             std::size_t cap) {
  const Network n = build_network(triple, psi);
  const PhyloTree& g = triple.gene();

  // Image cycles of gene paths. A path can only close up when its first and
  // last arcs are contact arcs.
  std::set<std::vector<std::size_t>> realised;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t w = u + 2; w < g.subtree_end(node_id(u)); ++w) {
      if (psi[node_id(u)] != psi[node_id(w)]) continue;
      const auto path = g.path_down(node_id(u), node_id(w));
      if (psi[path[0]].tree == psi[path[1]].tree) continue;
      if (psi[path[path.size() - 2]].tree == psi[path.back()].tree) continue;
      auto walk = walk_of_path(triple, psi, path);
      walk.pop_back();
      std::set<std::size_t> distinct(walk.begin(), walk.end());
      if (walk.size() >= 2 && distinct.size() == walk.size())
        realised.insert(canonical_rotation(walk));
    }
  }

  std::vector<ClassifiedCycle> out;
  for (const auto& arcs : directed_cycles(n, cap)) {
    std::vector<std::size_t> vertices;
    for (std::size_t a : arcs) vertices.push_back(n.arc(a).tail);
    vertices = canonical_rotation(std::move(vertices));
    const bool incidental = !realised.contains(vertices);
    out.push_back({std::move(vertices), incidental});
  }
  return out;
}

}  // namespace osf
