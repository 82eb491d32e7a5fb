#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "osf/builder.hpp"
#include "osf/errors.hpp"
#include "osf/generate.hpp"
#include "osf/newick.hpp"
#include "osf/perturb.hpp"

using namespace osf;

namespace {

std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

}  // namespace

TEST_CASE("SPR on three leaves") {
  const PhyloTree t = parse_tree("((a,b),c);");
  const NodeId b = *t.find_leaf("b"), c = *t.find_leaf("c");
  CHECK(canonical_newick(apply_spr(t, {b, t.root()})) == canonical_newick(parse_tree("((a,c),b);")));
  // Regrafting on the sibling or the parent is the identity.
  CHECK(canonical_newick(apply_spr(t, {b, *t.find_leaf("a")})) == canonical_newick(t));
  CHECK(canonical_newick(apply_spr(t, {b, *t.parent(b)})) == canonical_newick(t));
  CHECK(canonical_newick(apply_spr(t, {b, c})) == canonical_newick(parse_tree("(a,(b,c));")));
  CHECK_THROWS_AS(apply_spr(t, {t.root(), c}), SemanticError);
  CHECK_THROWS_AS(apply_spr(t, {*t.parent(b), b}), SemanticError);
}

TEST_CASE("SPR moves keep the leaf set and change the tree") {
  std::mt19937_64 rng(21);
  const auto labels = letters(8);
  for (int round = 0; round < 1000; ++round) {
    const PhyloTree t = random_tree(labels, true, rng);
    const auto moves = spr_moves(t);
    REQUIRE_FALSE(moves.empty());
    const SprMove m = moves[rng() % moves.size()];
    const PhyloTree u = apply_spr(t, m);
    CHECK(u.is_binary());
    CHECK(u.leaf_count() == 8);
    for (const auto& l : labels) CHECK(u.find_leaf(l));
    CHECK(canonical_newick(u) != canonical_newick(t));
    CHECK(rspr_distance(t, u) == 1);
  }
}

TEST_CASE("rSPR distance") {
  const PhyloTree a = parse_tree("((a,b),(c,d));"), b = parse_tree("((a,c),(b,d));");
  CHECK(rspr_distance(a, a) == 0);
  CHECK(rspr_distance(a, b) == rspr_distance(b, a));
  CHECK(rspr_distance(a, b) == 2);
  std::mt19937_64 rng(4);
  const auto labels = letters(7);
  for (int round = 0; round < 20; ++round) {
    const PhyloTree x = random_tree(labels, true, rng), y = random_tree(labels, true, rng);
    const std::size_t d = rspr_distance(x, y);
    CHECK(d == rspr_distance(y, x));
    CHECK(d <= labels.size() - 2);
  }
  CHECK_THROWS_AS(rspr_distance(parse_tree("(a,b,c);"), parse_tree("((a,b),c);")), SemanticError);
  CHECK_THROWS_AS(rspr_distance(a, parse_tree("((a,b),(c,e));")), SemanticError);
}

TEST_CASE("forest SPR") {
  const Forest f = parse_forest("((A,B),(C,D));\n(E,F);\n");
  const PhyloTree& t0 = f.tree(0);
  const NodeId ab = *t0.parent(*t0.find_leaf("A"));
  const Forest g = forest_spr(f, 0, ab, 1, f.tree(1).root());
  CHECK(g.tree(0).leaf_count() == 2);
  CHECK(g.tree(1).leaf_count() == 4);
  for (const char* l : {"A", "B", "C", "D", "E", "F"}) CHECK(g.find_leaf(l));
  CHECK(g.find_leaf("A")->tree == 1);
  CHECK_THROWS_AS(forest_spr(f, 0, t0.root(), 1, f.tree(1).root()), SemanticError);
  const Forest small = parse_forest("(A,B);\n(E,F);\n");
  CHECK_THROWS_AS(forest_spr(small, 0, *small.tree(0).find_leaf("A"), 1, node_id(0)), SemanticError);
  CHECK_THROWS_AS(forest_spr(f, 0, ab, 0, node_id(0)), SemanticError);
}

TEST_CASE("forest moves of image-free subtrees and within-tree moves leave t unchanged") {
  const ForestTriple t = fixtures::triple("((a,b),(c,d));", "((A,B),(X,Y));\n((C,D),Z);\n",
                                          {{"a", "A"}, {"b", "B"}, {"c", "C"}, {"d", "D"}});
  const std::size_t before = optimum(t);
  const PhyloTree& t0 = t.species().tree(0);
  const Forest moved = forest_spr(t.species(), 0, *t0.parent(*t0.find_leaf("X")), 1, node_id(0));
  const PhyloTree g = t.gene();
  CHECK(optimum(ForestTriple::from_labels(g, moved, phi_labels(t))) == before);

  std::vector<PhyloTree> trees(t.species().trees().begin(), t.species().trees().end());
  trees[0] = apply_spr(trees[0], {*trees[0].find_leaf("A"), *trees[0].find_leaf("X")});
  CHECK(optimum(ForestTriple::from_labels(g, Forest(trees), phi_labels(t))) == before);
}

TEST_CASE("gene perturbation experiment") {
  const ForestTriple t = random_triple({7, 3, 3, true}, 17);
  const StabilityReport zero = perturb_gene_experiment(t, 0, 1, 5);
  CHECK(zero.max_delta() == 0);
  const StabilityReport r = perturb_gene_experiment(t, 3, 1, 30);
  CHECK(r.records.size() == 30);
  CHECK(r.violations() == 0);
  for (const auto& rec : r.records) {
    REQUIRE(rec.d_rspr);
    CHECK(*rec.d_rspr <= 3);
    CHECK(rec.delta() <= *rec.d_rspr);
    CHECK(rec.bound_fk_r.has_value());
  }
  std::ostringstream a, b;
  r.write_csv(a);
  perturb_gene_experiment(t, 3, 1, 30).write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("trial,k,d_rspr,t_before,t_after,bound_spr,bound_fk_r,bound_fk_n,violated\n", 0) == 0);
  std::ostringstream summary;
  r.write_summary(summary);
  CHECK(summary.str().find("\"n_trials\": 30") != std::string::npos);
}

TEST_CASE("forest perturbation experiment") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ForestTriple t = random_triple({7, 3, 4, true}, seed);
    const StabilityReport r = perturb_forest_experiment(t, seed, 10);
    CHECK(r.violations() == 0);
    for (const auto& rec : r.records) CHECK(rec.delta() <= rec.bound_spr);
  }
}

TEST_CASE("fixed-parameter bounds") {
  const ForestTriple t = fixtures::crossing();
  CHECK(fk_state_bound(t) == std::size_t{4});  // r = 2, n = 11
  CHECK(fk_leaf_bound(t) == doctest::Approx(11 - 2 * std::sqrt(11.0) + 1));
}

TEST_CASE("character change") {
  const PhyloTree g = parse_tree("((a,b),(c,(d,e)));");
  Character f{std::vector<std::size_t>(g.size(), kNoState), 2};
  for (NodeId l : g.leaves()) f.state[index(l)] = g.label(l) < "c" ? 0 : 1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(character_change_check(g, f, 1, seed));
    CHECK(character_change_check(g, f, 2, seed));
  }
  // Flipping all leaves of state 1 makes the character constant.
  Character flat = f;
  for (NodeId l : g.leaves()) flat.state[index(l)] = 0;
  CHECK(parsimony_score(g, flat) == 0);
  CHECK(parsimony_score(g, f) <= 3);
}

TEST_CASE("tree enumeration counts") {
  CHECK(all_trees(letters(2)).size() == 1);
  CHECK(all_trees(letters(3)).size() == 4);
  CHECK(all_trees(letters(4)).size() == 26);
  CHECK(all_trees(letters(5)).size() == 236);
  CHECK(all_trees(letters(6)).size() == 2752);
  CHECK(all_trees(letters(6), true).size() == 945);
  std::set<std::string> distinct;
  for (const PhyloTree& t : all_trees(letters(5))) distinct.insert(canonical_newick(t));
  CHECK(distinct.size() == 236);
}

TEST_CASE("random triples") {
  const RandomTripleParams p{8, 3, 3, false};
  CHECK(write_newick(random_triple(p, 5).gene()) == write_newick(random_triple(p, 5).gene()));
  CHECK(write_leaf_map(random_triple(p, 5)) == write_leaf_map(random_triple(p, 5)));
  CHECK(optimum(random_triple({8, 1, 4, true}, 3)) == 0);
  CHECK_THROWS_AS(random_triple({1, 2, 3, true}, 1), SemanticError);
  CHECK(random_triple({6, 2, 3, true}, 9).is_binary());
}
