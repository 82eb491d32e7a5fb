// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "osf/builder.hpp"
#include "osf/errors.hpp"
#include "osf/formats.hpp"
#include "osf/generate.hpp"
#include "osf/network.hpp"
#include "osf/newick.hpp"
#include "osf/perturb.hpp"
#include "osf/verify.hpp"

using namespace osf;

namespace {

// Budgets and tolerances.
constexpr std::size_t kOptimalityTriples = 200;
constexpr double kOptimalitySeconds = 60.0;
constexpr std::size_t kIntrogressionSets = 100;
constexpr std::size_t kValidityNetworks = 100;
constexpr std::size_t kValidityMaxNodes = 12;
constexpr std::size_t kTrailSamples = 2000;
constexpr std::size_t kPerturbTrials = 500;
constexpr std::size_t kPerturbMaxK = 3;
constexpr std::size_t kNineLeafDeltaLimit = 4;
constexpr std::size_t kCharacterMaxLeaves = 6;
constexpr double kCharacterSeconds = 120.0;
constexpr std::size_t kStrictOsfs = 100;
constexpr std::size_t kFuzzCases = 10'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << std::endl;
  failures += !o.pass;
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<ForestTriple> optimality_triples() {
  std::vector<ForestTriple> out;
  std::mt19937_64 rng(2024);
  for (std::size_t i = 0; i < kOptimalityTriples; ++i) {
    RandomTripleParams p;
    p.n_gene_leaves = 2 + rng() % 7;
    p.n_trees = 1 + rng() % 3;
    p.leaves_per_tree = 2 + rng() % 3;
    p.binary = true;
    out.push_back(random_triple(p, 1000 + i));
  }
  return out;
}

struct StrictInstance {
  ForestTriple triple;
  IntrogressionSet set;
};

// Random arc subsets of random triples, kept when they form a valid
// introgression set with at least one arc.
std::vector<StrictInstance> random_introgression_sets(std::size_t count, std::uint64_t base) {
  std::vector<StrictInstance> out;
  std::mt19937_64 rng(base);
  for (std::uint64_t seed = base; out.size() < count && seed < base + 200'000; ++seed) {
    RandomTripleParams p;
    p.n_gene_leaves = 4 + rng() % 9;
    p.n_trees = 2 + rng() % 2;
    p.leaves_per_tree = 2 + rng() % 3;
    p.binary = rng() % 2 == 0;
    const ForestTriple t = random_triple(p, seed);
    const auto arcs = t.gene().arcs();
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<TreeArc> pick;
      const std::size_t want = 1 + rng() % 4;
      for (std::size_t i = 0; i < want; ++i) pick.push_back(arcs[rng() % arcs.size()]);
      const IntrogressionCheck chk = check_introgression_set(t, pick);
      if (!chk.valid || chk.set->arcs.empty()) continue;
      out.push_back({t, *chk.set});
      break;
    }
  }
  return out;
}

Outcome criterion1(const std::vector<ForestTriple>& triples) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t mismatches = 0, largest = 0;
  for (const ForestTriple& t : triples) {
    const std::size_t got = build_osf(t).contacts().size(), want = brute_force_t(t);
    mismatches += got != want;
    largest = std::max(largest, want);
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << triples.size() << " triples, " << mismatches << " mismatches, max t " << largest << ", " << secs << " s (limit "
    << kOptimalitySeconds << " s)";
  return {mismatches == 0 && secs < kOptimalitySeconds, d.str()};
}

Outcome criterion2(const std::vector<ForestTriple>& triples) {
  std::size_t failing = 0;
  for (const ForestTriple& t : triples) failing += !check_sosf(t, build_osf(t)).all_pass();
  return {failing == 0, std::to_string(triples.size()) + " triples, " + std::to_string(failing) + " not strict"};
}

Outcome criterion3() {
  const ForestTriple cross = fixtures::crossing();
  const OsfMap psi = build_osf(cross);
  const ForestTriple nonstrict = fixtures::nonstrict();
  const OsfVerdict* s3 = check_strict(nonstrict, fixtures::nonstrict_psi(nonstrict)).find("S3");
  const bool s3_at_root = s3 && !s3->pass && s3->vertices == std::vector<NodeId>{nonstrict.gene().root()};
  std::ostringstream d;
  d << "crossing t=" << psi.contacts().size() << " |C*|=" << psi.contact_set().size()
    << "; nonstrict S3 " << (s3_at_root ? "fails exactly at the gene root" : "does not fail exactly at the gene root");
  return {psi.contacts().size() == 3 && psi.contact_set().size() == 2 && brute_force_t(cross) == 3 && s3_at_root,
          d.str()};
}

Outcome criterion4() {
  const auto sets = random_introgression_sets(kIntrogressionSets, 40'000);
  std::size_t bad = 0;
  for (const auto& [t, set] : sets) {
    const OsfMap psi = osf_from_introgression_set(t, set);
    bad += !check_sosf(t, psi).all_pass() || introgression_set_of(t, psi).arcs != set.arcs ||
           psi.contacts().size() != set.arcs.size();
  }
  return {sets.size() == kIntrogressionSets && bad == 0,
          std::to_string(sets.size()) + " sets, " + std::to_string(bad) + " round-trip failures"};
}

Outcome criterion5() {
  std::size_t networks = 0, no_witness = 0, not_isomorphic = 0;
  std::mt19937_64 rng(55);
  for (std::uint64_t seed = 5000; networks < kValidityNetworks && seed < 50'000; ++seed) {
    RandomTripleParams p;
    p.n_gene_leaves = 3 + rng() % 6;
    p.n_trees = 2 + rng() % 2;
    p.leaves_per_tree = 2 + rng() % 2;
    p.binary = rng() % 3 != 0;
    const ForestTriple t = random_triple(p, seed);
    if (t.species().vertex_count() > kValidityMaxNodes) continue;
    const OsfMap psi = build_osf(t);
    ++networks;
    const Network n = build_network(t, psi).without_partition();
    const auto w = search_validity(n);
    if (!w) {
      ++no_witness;
      continue;
    }
    const ValidityVerdict v = check_valid(n, w->rho, w->arcs);
    const Unfolding u = unfold(n, w->rho, w->arcs);
    not_isomorphic += !v.valid || !isomorphic(rebuild_on_network(u, n), n) || !check_sosf(u.triple, u.psi).all_pass();
  }
  std::ostringstream d;
  d << networks << " networks (<= " << kValidityMaxNodes << " nodes), " << no_witness << " without witness, "
    << not_isomorphic << " failed round trips";
  return {networks == kValidityNetworks && no_witness == 0 && not_isomorphic == 0, d.str()};
}

Outcome criterion6() {
  std::vector<std::pair<ForestTriple, OsfMap>> instances;
  for (const ForestTriple& t : {fixtures::crossing(), fixtures::incidental_pair(), fixtures::incidental_square()})
    instances.emplace_back(t, build_osf(t));
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ForestTriple t = random_triple({4 + seed % 8, 2 + seed % 2, 2 + seed % 3, seed % 2 == 0}, 7000 + seed);
    instances.emplace_back(t, build_osf(t));
  }
  for (const auto& [t, set] : random_introgression_sets(50, 60'000))
    instances.emplace_back(t, osf_from_introgression_set(t, set));

  std::mt19937_64 rng(66);
  std::size_t non_trails = 0, broken = 0, rewired = 0;
  for (const auto& [t, psi] : instances) {
    const TrailNormalization tn = trail_normalize(t, psi);
    rewired += !tn.steps.empty();
    broken += !check_osf(tn.triple, tn.psi).all_pass() ||
              !isomorphic(build_network(t, psi), build_network(tn.triple, tn.psi));
    const PhyloTree& g = tn.triple.gene();
    const auto leaves = g.leaves();
    for (std::size_t i = 0; i < kTrailSamples; ++i) {
      const auto path = g.path_down(g.root(), leaves[rng() % leaves.size()]);
      non_trails += !is_trail(walk_of_path(tn.triple, tn.psi, path));
    }
  }

  const ForestTriple cross = fixtures::crossing();
  const TrailNormalization tn = trail_normalize(cross, build_osf(cross));
  const ContactPair rho12{{0, node_id(0)}, {1, node_id(0)}};
  bool decreasing = !tn.steps.empty();
  for (const RewireStep& s : tn.steps) decreasing = decreasing && s.contact == rho12 && s.uses_after < s.uses_before;

  std::ostringstream d;
  d << instances.size() << " instances x " << kTrailSamples << " paths, " << non_trails << " non-trails, " << broken
    << " changed networks, " << rewired << " rewired; crossing " << tn.steps.size() << " step(s) on (rho1,rho2)";
  for (const RewireStep& s : tn.steps) d << " " << s.uses_before << "->" << s.uses_after;
  return {non_trails == 0 && broken == 0 && decreasing, d.str()};
}

Outcome criterion7() {
  std::size_t trials = 0, violations = 0, nine_max = 0, nine_trials = 0;
  std::mt19937_64 rng(77);
  auto count = [&](const StabilityReport& r) {
    trials += r.records.size();
    violations += r.violations();
  };
  // 300 gene trials with exact d_rSPR (n <= 8).
  for (std::size_t i = 0; i < 300; ++i) {
    RandomTripleParams p{5 + rng() % 4, 2 + rng() % 2, 2 + rng() % 3, true};
    const ForestTriple t = random_triple(p, 8000 + i);
    count(perturb_gene_experiment(t, 1 + i % kPerturbMaxK, 8000 + i, 1));
  }
  // 100 forest trials on 3-tree forests.
  for (std::size_t i = 0; i < 100; ++i) {
    const ForestTriple t = random_triple({4 + rng() % 5, 3, 3 + rng() % 2, true}, 9000 + i);
    count(perturb_forest_experiment(t, 9000 + i, 1));
  }
  // 100 gene trials with n = 9, bound by k alone.
  for (std::size_t i = 0; i < 100; ++i) {
    const ForestTriple t = random_triple({9, 2 + rng() % 2, 3 + rng() % 2, true}, 9500 + i);
    const StabilityReport r = perturb_gene_experiment(t, 1 + i % kPerturbMaxK, 9500 + i, 1);
    count(r);
    nine_max = std::max(nine_max, r.max_delta());
    nine_trials += r.records.size();
  }
  std::ostringstream d;
  d << trials << " trials (k <= " << kPerturbMaxK << "), " << violations << " violations; n=9 max |dt| = " << nine_max
    << " over " << nine_trials << " trials (limit " << kNineLeafDeltaLimit << ", tightness not asserted)";
  return {trials == kPerturbTrials && violations == 0 && nine_max <= kNineLeafDeltaLimit, d.str()};
}

Outcome criterion8() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t checks = 0, violations = 0, trees = 0;
  for (std::size_t n = 2; n <= kCharacterMaxLeaves; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    for (const PhyloTree& tree : all_trees(labels)) {
      ++trees;
      const auto leaves = tree.leaves();
      std::vector<std::size_t> score(std::size_t{1} << n);
      for (std::size_t mask = 0; mask < score.size(); ++mask) {
        Character f{std::vector<std::size_t>(tree.size(), kNoState), 2};
        for (std::size_t i = 0; i < n; ++i) f.state[index(leaves[i])] = mask >> i & 1;
        score[mask] = parsimony_score(tree, f);
      }
      for (std::size_t mask = 0; mask < score.size(); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t one = mask ^ (std::size_t{1} << i);
          ++checks;
          violations += (score[mask] > score[one] ? score[mask] - score[one] : score[one] - score[mask]) > 1;
          for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t two = one ^ (std::size_t{1} << j);
            ++checks;
            violations += (score[mask] > score[two] ? score[mask] - score[two] : score[two] - score[mask]) > 2;
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << trees << " trees, " << checks << " edits, " << violations << " violations, " << secs << " s (limit "
    << kCharacterSeconds << " s)";
  return {violations == 0 && secs < kCharacterSeconds, d.str()};
}

std::vector<std::size_t> project(const BinaryResolution& r, const std::vector<std::size_t>& cycle) {
  std::vector<std::size_t> walk;
  for (std::size_t a : cycle) {
    const std::size_t v = r.projection[r.network.arc(a).tail];
    if (walk.empty() || walk.back() != v) walk.push_back(v);
  }
  if (walk.size() > 1 && walk.front() == walk.back()) walk.pop_back();
  std::rotate(walk.begin(), std::min_element(walk.begin(), walk.end()), walk.end());
  return walk;
}

Outcome criterion9() {
  std::vector<std::pair<ForestTriple, OsfMap>> instances;
  for (const auto& [t, set] : random_introgression_sets(kStrictOsfs, 90'000))
    instances.emplace_back(t, osf_from_introgression_set(t, set));
  const std::size_t random_count = instances.size();
  for (const ForestTriple& t : {fixtures::incidental_pair(), fixtures::incidental_square()})
    instances.emplace_back(t, build_osf(t));

  std::size_t cycles = 0, exceptions = 0;
  for (const auto& [t, psi] : instances) {
    std::set<std::vector<std::size_t>> incidental;
    for (const ClassifiedCycle& c : classify_cycles(t, psi))
      if (c.incidental) incidental.insert(c.vertices);
    const BinaryResolution r = binary_resolution(t, psi);
    for (const auto& cycle : directed_cycles(r.network)) {
      ++cycles;
      exceptions += !incidental.contains(project(r, cycle));
    }
  }
  std::ostringstream d;
  d << random_count << " random strict OSFs + 2 fixed instances, " << cycles << " cycles in the resolutions, "
    << exceptions << " not incidental";
  return {random_count == kStrictOsfs && exceptions == 0 && cycles > 0, d.str()};
}

std::string mutate(std::string s, std::mt19937_64& rng) {
  static const std::string alphabet = "(),;:\t\n# abcABC019_.-[]'\"";
  const std::size_t edits = 1 + rng() % 4;
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t kind = rng() % 4;
    const std::size_t at = s.empty() ? 0 : rng() % (s.size() + 1);
    const char c = rng() % 8 == 0 ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    if (kind == 0 || s.empty())
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), c);
    else if (kind == 1 && at < s.size())
      s.erase(at, 1);
    else if (kind == 2 && at < s.size())
      s[at] = c;
    else
      s = s.substr(0, at);
  }
  return s;
}

Outcome criterion10() {
  const ForestTriple cross = fixtures::crossing();
  const std::string gene = write_newick(cross.gene()), forest = write_forest(cross.species());
  const std::string leaf_map = write_leaf_map(cross), osf_map = write_osf_map(cross, build_osf(cross));
  std::mt19937_64 rng(1010);
  std::size_t parsed = 0, positioned = 0, bad = 0;
  for (std::size_t i = 0; i < kFuzzCases; ++i) {
    try {
      switch (i % 4) {
        case 0:
          parse_tree(mutate(gene, rng));
          break;
        case 1:
          parse_forest(mutate(forest, rng));
          break;
        case 2:
          parse_leaf_map(mutate(leaf_map, rng), cross.gene(), cross.species());
          break;
        default:
          parse_osf_map(mutate(osf_map, rng), cross);
          break;
      }
      ++parsed;
    } catch (const ParseError& e) {
      if (e.line() >= 1 && e.column() >= 1)
        ++positioned;
      else
        ++bad;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  std::ostringstream d;
  d << kFuzzCases << " cases, " << parsed << " parsed, " << positioned << " positioned errors, " << bad
    << " other outcomes";
  return {bad == 0 && parsed + positioned == kFuzzCases, d.str()};
}

}  // namespace

int main() {
  const auto triples = optimality_triples();
  report(1, "builder optimality", guarded([&] { return criterion1(triples); }));
  report(2, "strictness", guarded([&] { return criterion2(triples); }));
  report(3, "worked instances", guarded(criterion3));
  report(4, "introgression-set duality", guarded(criterion4));
  report(5, "validity round trip", guarded(criterion5));
  report(6, "trail normalization", guarded(criterion6));
  report(7, "SPR bounds", guarded(criterion7));
  report(8, "character change", guarded(criterion8));
  report(9, "binary resolution cycles", guarded(criterion9));
  report(10, "parser robustness", guarded(criterion10));
  return failures == 0 ? 0 : 1;
}
