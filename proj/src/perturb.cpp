#include "osf/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "osf/errors.hpp"
#include "osf/newick.hpp"

namespace osf {

namespace {

// Cuts the arc into v and suppresses its parent if that leaves it unary.
void prune(TreeDraft& d, std::size_t v) {
  const std::size_t p = *d.parent[v];
  d.remove_arc(p, v);
  if (d.children[p].size() != 1) return;
  const std::size_t only = d.children[p].front();
  d.remove_arc(p, only);
  if (auto gp = d.parent[p]) {
    auto& kids = d.children[*gp];
    *std::find(kids.begin(), kids.end(), p) = only;
    d.parent[only] = *gp;
    d.parent[p].reset();
  }
}

// Subdivides the arc into g (or adds a new root above g) and hangs v there.
void graft(TreeDraft& d, std::size_t g, std::size_t v) {
  const std::size_t q = d.add_node();
  if (auto gp = d.parent[g]) {
    auto& kids = d.children[*gp];
    *std::find(kids.begin(), kids.end(), g) = q;
    d.parent[q] = *gp;
    d.parent[g].reset();
  }
  d.add_arc(q, g);
  d.add_arc(q, v);
}

bool is_identity(const PhyloTree& t, const SprMove& m) {
  const NodeId p = *t.parent(m.pruned);
  if (t.children(p).size() != 2) return false;
  if (m.graft == p) return true;
  const auto gp = t.parent(m.graft);
  return gp && *gp == p;
}

void check_move(const PhyloTree& t, const SprMove& m) {
  if (!t.contains(m.pruned) || !t.contains(m.graft)) throw SemanticError("SPR move names an unknown vertex");
  if (m.pruned == t.root()) throw SemanticError("SPR move prunes the root");
  if (t.is_ancestor(m.pruned, m.graft)) throw SemanticError("SPR graft lies inside the pruned subtree");
}

std::vector<std::string> sorted_labels(const PhyloTree& t) {
  std::vector<std::string> out;
  for (NodeId l : t.leaves()) out.push_back(t.label(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PhyloTree apply_spr(const PhyloTree& tree, const SprMove& move) {
  check_move(tree, move);
  if (is_identity(tree, move)) return tree;
  TreeDraft d = tree.to_draft();
  prune(d, index(move.pruned));
  graft(d, index(move.graft), index(move.pruned));
  return PhyloTree::from_draft(d);
}

std::vector<SprMove> spr_moves(const PhyloTree& tree) {
  std::vector<SprMove> out;
  for (std::size_t v = 1; v < tree.size(); ++v) {
    for (std::size_t g = 0; g < tree.size(); ++g) {
      const SprMove m{node_id(v), node_id(g)};
      if (tree.is_ancestor(m.pruned, m.graft)) continue;
      if (is_identity(tree, m)) continue;
      out.push_back(m);
    }
  }
  return out;
}

std::size_t rspr_distance(const PhyloTree& a, const PhyloTree& b, std::size_t cap) {
  if (!a.is_binary() || !b.is_binary()) throw SemanticError("rSPR distance needs binary trees");
  if (sorted_labels(a) != sorted_labels(b)) throw SemanticError("rSPR distance needs equal leaf sets");
  if (a.leaf_count() > 8) throw SemanticError("rSPR distance is limited to 8 leaves");

  struct Side {
    std::unordered_map<std::string, std::size_t> depth;
    std::vector<PhyloTree> frontier;
    std::size_t level = 0;
  };
  Side sa, sb;
  sa.depth.emplace(canonical_newick(a), 0);
  sb.depth.emplace(canonical_newick(b), 0);
  if (sa.depth.begin()->first == sb.depth.begin()->first) return 0;
  sa.frontier.push_back(a);
  sb.frontier.push_back(b);

  while (!sa.frontier.empty() && !sb.frontier.empty()) {
    Side& grow = sa.frontier.size() <= sb.frontier.size() ? sa : sb;
    const Side& other = &grow == &sa ? sb : sa;
    std::optional<std::size_t> best;
    std::vector<PhyloTree> next;
    for (const PhyloTree& t : grow.frontier) {
      for (const SprMove& m : spr_moves(t)) {
        PhyloTree u = apply_spr(t, m);
        std::string key = canonical_newick(u);
        if (auto it = other.depth.find(key); it != other.depth.end()) {
          const std::size_t d = grow.level + 1 + it->second;
          best = best ? std::min(*best, d) : d;
        }
        if (grow.depth.emplace(std::move(key), grow.level + 1).second) next.push_back(std::move(u));
        if (sa.depth.size() + sb.depth.size() > cap) throw CapExceeded("rSPR search exceeds cap");
      }
    }
    if (best) return *best;
    grow.frontier = std::move(next);
    ++grow.level;
  }
  throw std::logic_error("rSPR search exhausted without meeting");
}

Forest forest_spr(const Forest& forest, std::size_t source, NodeId pruned, std::size_t target,
                  NodeId graft_at) {
  if (source >= forest.size() || target >= forest.size()) throw SemanticError("forest SPR tree index out of range");
  if (source == target) throw SemanticError("forest SPR needs two different trees");
  const PhyloTree& src = forest.tree(source);
  const PhyloTree& tgt = forest.tree(target);
  if (!src.contains(pruned) || !tgt.contains(graft_at)) throw SemanticError("forest SPR names an unknown vertex");
  if (pruned == src.root()) throw SemanticError("forest SPR would move a whole tree");
  if (src.leaf_count() - src.cluster(pruned).size() < 2)
    throw SemanticError("forest SPR would leave the source tree with fewer than two leaves");

  TreeDraft ds = src.to_draft();
  TreeDraft dt = tgt.to_draft();
  const std::size_t first = index(pruned), end = src.subtree_end(pruned);
  std::vector<std::size_t> copy(end - first);
  for (std::size_t v = first; v < end; ++v) copy[v - first] = dt.add_node(ds.label[v]);
  for (std::size_t v = first + 1; v < end; ++v) dt.add_arc(copy[*ds.parent[v] - first], copy[v - first]);
  graft(dt, index(graft_at), copy[0]);

  prune(ds, first);
  for (std::size_t v = first; v < end; ++v) {
    ds.children[v].clear();
    ds.parent[v].reset();
    ds.label[v].clear();
  }

  std::vector<PhyloTree> trees(forest.trees().begin(), forest.trees().end());
  trees[source] = PhyloTree::from_draft(ds);
  trees[target] = PhyloTree::from_draft(dt);
  return Forest(std::move(trees));
}

std::map<std::string, std::string> phi_labels(const ForestTriple& triple) {
  std::map<std::string, std::string> out;
  for (NodeId leaf : triple.gene().leaves())
    out.emplace(triple.gene().label(leaf), triple.species().label(triple.phi(leaf)));
  return out;
}

std::size_t optimum(const ForestTriple& triple) { return build_osf(triple).contacts().size(); }

std::size_t StabilityReport::max_delta() const {
  std::size_t best = 0;
  for (const auto& r : records) best = std::max(best, r.delta());
  return best;
}

std::size_t StabilityReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.violated; }));
}

void StabilityReport::write_csv(std::ostream& out) const {
  out << "trial,k,d_rspr,t_before,t_after,bound_spr,bound_fk_r,bound_fk_n,violated\n";
  for (const auto& r : records) {
    out << r.trial << ',' << r.k << ',';
    if (r.d_rspr) out << *r.d_rspr;
    out << ',' << r.t_before << ',' << r.t_after << ',' << r.bound_spr << ',';
    if (r.bound_fk_r) out << *r.bound_fk_r;
    out << ',';
    if (r.bound_fk_n) out << std::fixed << std::setprecision(4) << *r.bound_fk_n << std::defaultfloat;
    out << ',' << (r.violated ? "true" : "false") << '\n';
  }
}

void StabilityReport::write_summary(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["max_delta"] = max_delta();
  j["n_trials"] = records.size();
  j["seed"] = seed;
  out << j.dump(2) << '\n';
}

std::optional<std::size_t> fk_state_bound(const ForestTriple& triple) {
  std::set<std::size_t> hit;
  for (NodeId leaf : triple.gene().leaves()) hit.insert(triple.phi(leaf).tree);
  const std::size_t r = hit.size(), n = triple.gene().leaf_count();
  if (r > n) return std::nullopt;
  // floor((r-1)(n/r - 1)) = floor((r-1)(n-r)/r), exactly in integers.
  return (r - 1) * (n - r) / r;
}

double fk_leaf_bound(const ForestTriple& triple) {
  const double n = static_cast<double>(triple.gene().leaf_count());
  return n - 2 * std::sqrt(n) + 1;
}

namespace {

bool exceeds(std::size_t delta, const TrialRecord& r) {
  if (delta > r.bound_spr) return true;
  if (r.bound_fk_r && delta > *r.bound_fk_r) return true;
  return r.bound_fk_n && static_cast<double>(delta) > *r.bound_fk_n + 1e-9;
}

}  // namespace

StabilityReport perturb_gene_experiment(const ForestTriple& triple, std::size_t k,
                                        std::uint64_t seed, std::size_t trials) {
  if (!triple.gene().is_binary()) throw SemanticError("gene SPR experiment needs a binary gene tree");
  StabilityReport report{seed, {}};
  std::mt19937_64 rng(seed);
  const auto labels = phi_labels(triple);
  const std::size_t before = optimum(triple);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    PhyloTree g = triple.gene();
    for (std::size_t step = 0; step < k; ++step) {
      const auto moves = spr_moves(g);
      std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
      g = apply_spr(g, moves[pick(rng)]);
    }
    TrialRecord r;
    r.trial = trial;
    r.k = k;
    r.t_before = before;
    if (g.leaf_count() <= 8) r.d_rspr = rspr_distance(triple.gene(), g);
    const auto after = ForestTriple::from_labels(g, triple.species(), labels);
    r.t_after = optimum(after);
    r.bound_spr = r.d_rspr.value_or(k);
    r.bound_fk_r = fk_state_bound(triple);
    r.bound_fk_n = fk_leaf_bound(triple);
    r.violated = exceeds(r.delta(), r) || (r.d_rspr && *r.d_rspr > k);
    report.records.push_back(r);
  }
  return report;
}

StabilityReport perturb_forest_experiment(const ForestTriple& triple, std::uint64_t seed,
                                          std::size_t trials) {
  const Forest& forest = triple.species();
  if (forest.size() < 2) throw SemanticError("forest SPR experiment needs at least two trees");
  std::vector<ForestNode> prunable;
  for (std::size_t t = 0; t < forest.size(); ++t) {
    const PhyloTree& tree = forest.tree(t);
    for (std::size_t v = 1; v < tree.size(); ++v)
      if (tree.leaf_count() - tree.cluster(node_id(v)).size() >= 2) prunable.push_back({t, node_id(v)});
  }
  if (prunable.empty()) throw SemanticError("no tree can give up a subtree and stay phylogenetic");

  StabilityReport report{seed, {}};
  std::mt19937_64 rng(seed);
  const auto labels = phi_labels(triple);
  const std::size_t before = optimum(triple);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const ForestNode cut = prunable[std::uniform_int_distribution<std::size_t>(0, prunable.size() - 1)(rng)];
    std::size_t target = std::uniform_int_distribution<std::size_t>(0, forest.size() - 2)(rng);
    if (target >= cut.tree) ++target;
    const NodeId at = node_id(
        std::uniform_int_distribution<std::size_t>(0, forest.tree(target).size() - 1)(rng));
    const Forest moved = forest_spr(forest, cut.tree, cut.node, target, at);

    std::set<NodeId> t0;
    for (NodeId l : forest.tree(cut.tree).cluster(cut.node)) t0.insert(l);
    TrialRecord r;
    r.trial = trial;
    r.k = 1;
    r.t_before = before;
    for (NodeId leaf : triple.gene().leaves()) {
      const ForestNode img = triple.phi(leaf);
      r.bound_spr += img.tree == cut.tree && t0.contains(img.node);
    }
    r.t_after = optimum(ForestTriple::from_labels(triple.gene(), moved, labels));
    r.violated = exceeds(r.delta(), r);
    report.records.push_back(r);
  }
  return report;
}

bool character_change_check(const PhyloTree& tree, const Character& f, std::size_t k,
                            std::uint64_t seed) {
  auto leaves = tree.leaves();
  if (k > leaves.size()) throw std::invalid_argument("more changes than leaves");
  if (k > 0 && f.state_count < 2) throw std::invalid_argument("a single state cannot be changed");
  std::mt19937_64 rng(seed);
  std::shuffle(leaves.begin(), leaves.end(), rng);
  Character g = f;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t& s = g.state[index(leaves[i])];
    std::size_t fresh = std::uniform_int_distribution<std::size_t>(0, f.state_count - 2)(rng);
    s = fresh >= s ? fresh + 1 : fresh;
  }
  const std::size_t a = parsimony_score(tree, f), b = parsimony_score(tree, g);
  return (a > b ? a - b : b - a) <= k;
}

}  // namespace osf
