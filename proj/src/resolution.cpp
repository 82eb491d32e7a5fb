#include <algorithm>
#include <map>
#include <set>

#include "osf/errors.hpp"
#include "osf/network.hpp"
#include "osf/verify.hpp"

namespace osf {

namespace {

struct Builder {
  std::vector<NetworkArc> arcs;
  std::vector<std::size_t> projection;
  std::vector<std::optional<NodeId>> label;

  std::size_t add_vertex(std::size_t projects_to, std::optional<NodeId> w = std::nullopt) {
    projection.push_back(projects_to);
    label.push_back(w);
    return projection.size() - 1;
  }
};

}  // namespace

BinaryResolution binary_resolution(const ForestTriple& triple, const OsfMap& psi) {
  if (!check_sosf(triple, psi).all_pass()) throw SemanticError("map is not a strict OSF");
  const IntrogressionSet intro = introgression_set_of(triple, psi);
  const PhyloTree& g = triple.gene();
  const Forest& forest = triple.species();
  const std::size_t nf = forest.vertex_count();

  Builder b;
  for (std::size_t v = 0; v < nf; ++v) b.add_vertex(v);

  // Incoming forest arc of each forest vertex; roots get a stem.
  std::vector<std::size_t> upper(nf);
  for (std::size_t t = 0; t < forest.size(); ++t) {
    const PhyloTree& tree = forest.tree(t);
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const std::size_t v = forest.global({t, node_id(i)});
      upper[v] = tree.parent(node_id(i)) ? forest.global({t, *tree.parent(node_id(i))})
                                          : b.add_vertex(v);
    }
  }

  // Subdivision vertices: per preimage w of v (preorder), the head-role vertex
  // sits above the tail-role vertices, one per introgression arc.
  std::set<TreeArc> in_i(intro.arcs.begin(), intro.arcs.end());
  std::map<TreeArc, std::size_t> tail_vertex, head_vertex;
  std::vector<std::vector<NodeId>> preimages(nf);
  for (std::size_t w = 0; w < g.size(); ++w) preimages[forest.global(psi[node_id(w)])].push_back(node_id(w));

  for (std::size_t v = 0; v < nf; ++v) {
    std::size_t above = upper[v];
    auto chain = [&](std::size_t sub) {
      b.arcs.push_back({above, sub, ArcKind::forest});
      above = sub;
    };
    for (NodeId w : preimages[v]) {
      if (auto p = g.parent(w); p && in_i.contains({*p, w})) {
        const std::size_t s = b.add_vertex(v, w);
        head_vertex[{*p, w}] = s;
        chain(s);
      }
      for (NodeId c : g.children(w)) {
        if (!in_i.contains({w, c})) continue;
        const std::size_t s = b.add_vertex(v, w);
        tail_vertex[{w, c}] = s;
        chain(s);
      }
    }
    b.arcs.push_back({above, v, ArcKind::forest});
  }
  std::vector<TreeArc> origin;
  for (const TreeArc& a : intro.arcs) {
    b.arcs.push_back({tail_vertex.at(a), head_vertex.at(a), ArcKind::contact});
    origin.push_back(a);
  }

  // Drop sources of outdegree one (stem tops) until none is left.
  std::vector<bool> alive(b.projection.size(), true);
  std::vector<bool> arc_alive(b.arcs.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> in(alive.size(), 0), out(alive.size(), 0);
    for (std::size_t i = 0; i < b.arcs.size(); ++i) {
      if (!arc_alive[i]) continue;
      ++out[b.arcs[i].tail];
      ++in[b.arcs[i].head];
    }
    for (std::size_t v = 0; v < alive.size(); ++v) {
      if (!alive[v] || in[v] != 0 || out[v] != 1) continue;
      alive[v] = false;
      for (std::size_t i = 0; i < b.arcs.size(); ++i)
        if (arc_alive[i] && b.arcs[i].tail == v) arc_alive[i] = false;
      changed = true;
    }
  }

  // Resolve high-outdegree forest vertices into caterpillars.
  std::vector<NetworkArc> kept;
  for (std::size_t i = 0; i < b.arcs.size(); ++i)
    if (arc_alive[i]) kept.push_back(b.arcs[i]);
  std::map<std::size_t, std::vector<std::size_t>> forest_out;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i].kind == ArcKind::forest) forest_out[kept[i].tail].push_back(i);
  for (auto& [v, outs] : forest_out) {
    if (outs.size() < 3) continue;
    std::size_t parent = v;
    for (std::size_t j = 1; j + 1 < outs.size(); ++j) {
      const std::size_t r = b.add_vertex(b.projection[v]);
      alive.push_back(true);
      kept.push_back({parent, r, ArcKind::forest});
      parent = r;
      kept[outs[j]].tail = parent;
    }
    kept[outs.back()].tail = parent;
  }

  std::vector<std::size_t> renumber(alive.size(), 0);
  std::size_t count = 0;
  BinaryResolution res;
  for (std::size_t v = 0; v < alive.size(); ++v) {
    if (!alive[v]) continue;
    renumber[v] = count++;
    res.projection.push_back(b.projection[v]);
    res.subdivision_label.push_back(b.label[v]);
  }
  std::vector<NetworkArc> arcs;
  for (const NetworkArc& a : kept) arcs.push_back({renumber[a.tail], renumber[a.head], a.kind});
  std::map<std::size_t, std::string> labels;
  const Network plain_forest = to_network(forest);
  for (const auto& [v, name] : plain_forest.leaf_labels()) labels.emplace(renumber[v], name);
  res.network = Network(count, std::move(arcs), std::move(labels));
  res.contact_origin = std::move(origin);
  res.pairing_rule =
      "each introgression arc (u,w) joins its own subdivision of u's image arc to the "
      "subdivision of w's image arc; subdivisions of one image arc follow gene preorder";
  return res;
}

}  // namespace osf
