#include <algorithm>
#include <map>
#include <tuple>

#include "osf/network.hpp"

namespace osf {

namespace {

using Multiplicity = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

Multiplicity multiplicity(const Network& n) {
  Multiplicity m;
  for (const NetworkArc& a : n.arcs()) ++m[{a.tail, a.head}];
  return m;
}

// Colour refinement run jointly on both graphs so colours are comparable.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine(const Network& a,
                                                                       const Network& b) {
  using Key = std::tuple<std::size_t, std::vector<std::size_t>, std::vector<std::size_t>>;
  std::map<std::pair<std::size_t, std::string>, std::size_t> initial;
  auto seed = [&](const Network& n) {
    std::vector<std::size_t> c(n.vertex_count());
    for (std::size_t v = 0; v < n.vertex_count(); ++v) {
      auto it = n.leaf_labels().find(v);
      std::string tag = it == n.leaf_labels().end()
                            ? "#" + std::to_string(n.indegree(v)) + "," + std::to_string(n.outdegree(v))
                            : "L" + it->second;
      c[v] = initial.emplace(std::pair{std::size_t{0}, tag}, initial.size()).first->second;
    }
    return c;
  };
  auto ca = seed(a), cb = seed(b);
  std::size_t classes = initial.size();
  while (true) {
    std::map<Key, std::size_t> next;
    auto step = [&](const Network& n, const std::vector<std::size_t>& c) {
      std::vector<std::size_t> out(n.vertex_count());
      for (std::size_t v = 0; v < n.vertex_count(); ++v) {
        std::vector<std::size_t> ins, outs;
        for (std::size_t e : n.in_arcs(v)) ins.push_back(c[n.arc(e).tail]);
        for (std::size_t e : n.out_arcs(v)) outs.push_back(c[n.arc(e).head]);
        std::sort(ins.begin(), ins.end());
        std::sort(outs.begin(), outs.end());
        out[v] = next.emplace(Key{c[v], ins, outs}, next.size()).first->second;
      }
      return out;
    };
    auto na = step(a, ca), nb = step(b, cb);
    ca = std::move(na);
    cb = std::move(nb);
    if (next.size() == classes) break;
    classes = next.size();
  }
  return {ca, cb};
}

class Matcher {
 public:
  Matcher(const Network& a, const Network& b, std::vector<std::size_t> ca, std::vector<std::size_t> cb)
      : a_(a), b_(b), ca_(std::move(ca)), cb_(std::move(cb)), ma_(multiplicity(a)),
        mb_(multiplicity(b)), map_(a.vertex_count(), kNone), used_(b.vertex_count(), false) {
    order_.resize(a.vertex_count());
    for (std::size_t v = 0; v < order_.size(); ++v) order_[v] = v;
    // Rare colours first.
    std::map<std::size_t, std::size_t> freq;
    for (std::size_t c : ca_) ++freq[c];
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return freq[ca_[x]] < freq[ca_[y]]; });
  }

  bool run(std::size_t depth = 0) {
    if (depth == order_.size()) return true;
    const std::size_t v = order_[depth];
    for (std::size_t w = 0; w < b_.vertex_count(); ++w) {
      if (used_[w] || cb_[w] != ca_[v] || !consistent(v, w)) continue;
      map_[v] = w;
      used_[w] = true;
      if (run(depth + 1)) return true;
      map_[v] = kNone;
      used_[w] = false;
    }
    return false;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t count(const Multiplicity& m, std::size_t x, std::size_t y) const {
    auto it = m.find({x, y});
    return it == m.end() ? 0 : it->second;
  }

  bool consistent(std::size_t v, std::size_t w) const {
    if (count(ma_, v, v) != count(mb_, w, w)) return false;
    for (std::size_t u = 0; u < map_.size(); ++u) {
      if (map_[u] == kNone) continue;
      if (count(ma_, u, v) != count(mb_, map_[u], w)) return false;
      if (count(ma_, v, u) != count(mb_, w, map_[u])) return false;
    }
    return true;
  }

  const Network& a_;
  const Network& b_;
  std::vector<std::size_t> ca_, cb_;
  Multiplicity ma_, mb_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
  std::vector<std::size_t> order_;
};

}  // namespace

bool isomorphic(const Network& a, const Network& b) {
  if (a.vertex_count() != b.vertex_count() || a.arcs().size() != b.arcs().size()) return false;
  if (a.leaf_labels().size() != b.leaf_labels().size()) return false;
  auto [ca, cb] = refine(a, b);
  auto sorted = [](std::vector<std::size_t> c) {
    std::sort(c.begin(), c.end());
    return c;
  };
  if (sorted(ca) != sorted(cb)) return false;
  Matcher m(a, b, std::move(ca), std::move(cb));
  return m.run();
}

}  // namespace osf
