#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "osf/errors.hpp"
#include "osf/network.hpp"

namespace osf {

namespace {

constexpr std::size_t kStateCap = 2'000'000;

struct ForestSplit {
  std::optional<Forest> forest;
  std::vector<ForestNode> where;  // per network vertex
  std::string reason;
};

// Cheap degree conditions for N - A being a forest of phylogenetic trees on X.
bool degree_filter(const Network& n, const std::vector<bool>& in_a) {
  std::vector<std::size_t> in(n.vertex_count(), 0), out(n.vertex_count(), 0);
  for (std::size_t i = 0; i < n.arcs().size(); ++i) {
    if (in_a[i]) continue;
    ++out[n.arc(i).tail];
    ++in[n.arc(i).head];
  }
  for (std::size_t v = 0; v < n.vertex_count(); ++v) {
    if (in[v] > 1) return false;
    if (n.in_leaf_set(v) ? (out[v] != 0 || in[v] != 1) : out[v] < 2) return false;
  }
  return true;
}

ForestSplit split_forest(const Network& n, const std::vector<bool>& in_a) {
  ForestSplit s;
  const std::size_t nv = n.vertex_count();
  std::vector<std::size_t> root(nv);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  std::vector<std::size_t> indeg(nv, 0);
  for (std::size_t i = 0; i < n.arcs().size(); ++i) {
    if (in_a[i]) continue;
    const auto& a = n.arc(i);
    if (++indeg[a.head] > 1) {
      s.reason = "vertex " + std::to_string(a.head) + " has indegree > 1 in N - A";
      return s;
    }
    const std::size_t x = find(a.tail), y = find(a.head);
    if (x == y) {
      s.reason = "N - A contains a cycle";
      return s;
    }
    root[x] = y;
  }

  // Components ordered by their smallest vertex.
  std::map<std::size_t, std::size_t> comp_of_root;
  std::vector<std::size_t> comp(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    auto [it, fresh] = comp_of_root.emplace(find(v), comp_of_root.size());
    comp[v] = it->second;
  }
  const std::size_t k = comp_of_root.size();
  if (k < 2) {
    s.reason = "N - A has fewer than two components";
    return s;
  }
  for (std::size_t i = 0; i < n.arcs().size(); ++i) {
    if (in_a[i] && comp[n.arc(i).tail] == comp[n.arc(i).head]) {
      s.reason = "arc " + std::to_string(i) + " of A joins vertices of the same tree";
      return s;
    }
  }

  std::vector<TreeDraft> drafts(k);
  std::vector<std::size_t> local(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    auto it = n.leaf_labels().find(v);
    local[v] = drafts[comp[v]].add_node(it == n.leaf_labels().end() ? std::string{} : it->second);
  }
  std::vector<bool> has_child(nv, false);
  for (std::size_t i = 0; i < n.arcs().size(); ++i) {
    if (in_a[i]) continue;
    const auto& a = n.arc(i);
    drafts[comp[a.tail]].add_arc(local[a.tail], local[a.head]);
    has_child[a.tail] = true;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (has_child[v] == n.in_leaf_set(v)) {
      s.reason = "leaf set of N - A differs from X at vertex " + std::to_string(v);
      return s;
    }
  }

  std::vector<PhyloTree> trees;
  std::vector<std::vector<std::optional<NodeId>>> renumber(k);
  try {
    for (std::size_t c = 0; c < k; ++c) trees.push_back(PhyloTree::from_draft(drafts[c], &renumber[c]));
    s.forest.emplace(std::move(trees));
  } catch (const Error& e) {
    s.reason = std::string("N - A is not a forest of phylogenetic trees: ") + e.what();
    return s;
  }
  s.where.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) s.where[v] = {comp[v], *renumber[comp[v]][local[v]]};
  return s;
}

// Admissible-trail state: current vertex, last vertex visited in each tree,
// and the contact arcs already used.
struct State {
  std::size_t vertex;
  std::vector<std::optional<NodeId>> last;
  std::vector<std::size_t> used;  // sorted
  auto operator<=>(const State&) const = default;
};

class TrailSpace {
 public:
  TrailSpace(const Network& n, const ForestSplit& s, const std::vector<bool>& in_a)
      : n_(n), s_(s), in_a_(in_a) {}

  State start(std::size_t rho) const {
    State st{rho, std::vector<std::optional<NodeId>>(s_.forest->size()), {}};
    st.last[s_.where[rho].tree] = s_.where[rho].node;
    return st;
  }

  std::optional<State> extend(const State& st, std::size_t arc) const {
    const NetworkArc& a = n_.arc(arc);
    const ForestNode w = s_.where[a.head];
    State next = st;
    next.vertex = a.head;
    if (in_a_[arc]) {
      if (std::binary_search(st.used.begin(), st.used.end(), arc)) return std::nullopt;
      const auto& prev = st.last[w.tree];
      if (prev && !s_.forest->tree(w.tree).is_ancestor(*prev, w.node)) return std::nullopt;
      next.used.insert(std::upper_bound(next.used.begin(), next.used.end(), arc), arc);
    }
    next.last[w.tree] = w.node;
    return next;
  }

 private:
  const Network& n_;
  const ForestSplit& s_;
  const std::vector<bool>& in_a_;
};

std::vector<bool> arc_mask(const Network& n, std::span<const std::size_t> arcs) {
  std::vector<bool> in_a(n.arcs().size(), false);
  for (std::size_t a : arcs) {
    if (a >= n.arcs().size()) throw std::out_of_range("arc index " + std::to_string(a));
    in_a[a] = true;
  }
  return in_a;
}

ValidityVerdict check_v2(const Network& n, std::size_t rho, const ForestSplit& split,
                         const std::vector<bool>& in_a) {
  ValidityVerdict verdict;
  TrailSpace space(n, split, in_a);
  std::vector<State> states{space.start(rho)};
  std::vector<std::pair<std::size_t, std::size_t>> back{{0, 0}};  // parent state, arc
  std::map<State, std::size_t> seen{{states[0], 0}};
  std::map<std::size_t, Trail> certified;
  std::size_t wanted = static_cast<std::size_t>(std::count(in_a.begin(), in_a.end(), true));

  auto trail_to = [&](std::size_t s, std::size_t last_arc) {
    Trail t{rho, {last_arc}};
    for (; s != 0; s = back[s].first) t.arcs.push_back(back[s].second);
    std::reverse(t.arcs.begin(), t.arcs.end());
    return t;
  };

  for (std::size_t i = 0; i < states.size() && certified.size() < wanted; ++i) {
    for (std::size_t arc : n.out_arcs(states[i].vertex)) {
      auto next = space.extend(states[i], arc);
      if (!next) continue;
      if (in_a[arc] && !certified.contains(arc)) certified.emplace(arc, trail_to(i, arc));
      if (seen.contains(*next)) continue;
      if (states.size() >= kStateCap) throw CapExceeded("trail state space exceeds cap");
      seen.emplace(*next, states.size());
      states.push_back(std::move(*next));
      back.emplace_back(i, arc);
    }
  }
  for (std::size_t a = 0; a < in_a.size(); ++a) {
    if (in_a[a] && !certified.contains(a)) {
      verdict.reason = "no admissible trail from rho uses arc " + std::to_string(a);
      return verdict;
    }
  }
  verdict.valid = true;
  ValidityWitness w{rho, {}, {}};
  for (auto& [a, t] : certified) {
    w.arcs.push_back(a);
    w.trails.push_back(std::move(t));
  }
  verdict.witness = std::move(w);
  return verdict;
}

}  // namespace

ValidityVerdict check_valid(const Network& network, std::size_t rho,
                            std::span<const std::size_t> arcs) {
  if (rho >= network.vertex_count()) throw std::out_of_range("rho " + std::to_string(rho));
  const auto in_a = arc_mask(network, arcs);
  const ForestSplit split = split_forest(network, in_a);
  if (!split.forest) return {false, "(V1) " + split.reason, std::nullopt};
  auto v = check_v2(network, rho, split, in_a);
  if (!v.valid) v.reason = "(V2) " + v.reason;
  return v;
}

std::optional<ValidityWitness> search_validity(const Network& network, SearchCaps caps) {
  const std::size_t m = network.arcs().size();
  if (m > caps.max_arcs)
    throw CapExceeded("network has " + std::to_string(m) + " arcs, search cap is " +
                      std::to_string(caps.max_arcs));
  if (!check_network_axioms(network).all_pass()) return std::nullopt;
  const std::size_t nv = network.vertex_count();
  // |A| = m - (n - c) with c >= 2 trees.
  const std::size_t smallest = m + 2 > nv ? m + 2 - nv : 0;
  for (std::size_t size = smallest; size <= m; ++size) {
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      if (!degree_filter(network, pick)) continue;
      const ForestSplit split = split_forest(network, pick);
      if (!split.forest) continue;
      for (std::size_t rho = 0; rho < nv; ++rho) {
        auto v = check_v2(network, rho, split, pick);
        if (v.valid) return std::move(v.witness);
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return std::nullopt;
}

Unfolding unfold(const Network& network, std::size_t rho, std::span<const std::size_t> arcs,
                 std::size_t cap) {
  const ValidityVerdict verdict = check_valid(network, rho, arcs);
  if (!verdict.valid) throw SemanticError("network is not valid for this rho and A: " + verdict.reason);
  const auto in_a = arc_mask(network, arcs);
  const ForestSplit split = split_forest(network, in_a);
  TrailSpace space(network, split, in_a);

  TreeDraft draft;
  std::vector<ForestNode> image;
  std::map<std::size_t, std::size_t> label_count;
  auto leaf_name = [&](std::size_t x) {
    return network.leaf_labels().at(x) + "_" + std::to_string(++label_count[x]);
  };

  std::vector<std::pair<State, std::size_t>> stack{{space.start(rho), draft.add_node()}};
  image.push_back(split.where[rho]);
  std::size_t trails = 1;
  while (!stack.empty()) {
    auto [st, node] = std::move(stack.back());
    stack.pop_back();
    std::vector<State> next;
    for (std::size_t arc : network.out_arcs(st.vertex))
      if (auto ext = space.extend(st, arc)) next.push_back(std::move(*ext));
    const bool in_x = network.in_leaf_set(st.vertex);
    if (next.empty()) {
      if (!in_x) throw std::logic_error("maximal trail ends outside X");
      draft.label[node] = leaf_name(st.vertex);
      continue;
    }
    if (in_x) {
      const std::size_t pendant = draft.add_node(leaf_name(st.vertex));
      draft.add_arc(node, pendant);
      image.push_back(split.where[st.vertex]);
    }
    // Pushed in reverse so children keep out-arc order.
    std::vector<std::size_t> kids;
    for (auto& ext : next) {
      if (++trails > cap) throw CapExceeded("trail count exceeds cap");
      const std::size_t child = draft.add_node();
      draft.add_arc(node, child);
      image.push_back(split.where[ext.vertex]);
      kids.push_back(child);
    }
    for (std::size_t i = next.size(); i-- > 0;) stack.emplace_back(std::move(next[i]), kids[i]);
  }

  std::vector<std::optional<NodeId>> renumber;
  PhyloTree gene = PhyloTree::from_draft(draft, &renumber);
  LeafMap phi(gene.size());
  std::vector<ForestNode> images(gene.size());
  for (std::size_t v = 0; v < draft.size(); ++v) {
    const std::size_t i = index(*renumber[v]);
    images[i] = image[v];
    if (gene.is_leaf(node_id(i))) phi[i] = image[v];
  }
  ForestTriple triple(std::move(gene), *split.forest, std::move(phi));
  OsfMap psi(triple, std::move(images));
  return Unfolding{std::move(triple), std::move(psi), split.where, trails};
}

Network rebuild_on_network(const Unfolding& u, const Network& original) {
  const Network rebuilt = build_network(u.triple, u.psi);
  const Forest& forest = u.triple.species();
  std::vector<std::size_t> to_original(forest.vertex_count());
  for (std::size_t v = 0; v < u.forest_vertex.size(); ++v)
    to_original[forest.global(u.forest_vertex[v])] = v;
  std::vector<NetworkArc> arcs;
  for (const NetworkArc& a : rebuilt.arcs())
    arcs.push_back({to_original[a.tail], to_original[a.head], a.kind});
  std::sort(arcs.begin(), arcs.end());
  return Network(original.vertex_count(), std::move(arcs), original.leaf_labels());
}

}  // namespace osf
