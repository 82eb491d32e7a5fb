#include "osf/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "osf/builder.hpp"
#include "osf/errors.hpp"
#include "osf/formats.hpp"
#include "osf/generate.hpp"
#include "osf/network.hpp"
#include "osf/newick.hpp"
#include "osf/perturb.hpp"
#include "osf/verify.hpp"

namespace osf {

namespace {

// Unreadable or unwritable files and bad flag combinations: exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string gene, forest, map, osf, network, out;
  std::string format = "json";
  std::string tie = "first";
  std::string mode = "gene";
  std::string arcs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> rho;
  std::uint64_t cap_oracle = 10'000'000;
  std::size_t cap_unfold = 100'000;
  std::size_t cap_search = 16;
  std::size_t cap_cycles = 100'000;
  bool strict = false;
  bool search = false;
  std::size_t trials = 10;
  std::size_t k = 1;
  RandomTripleParams gen;
  bool nonbinary = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path + "'");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required flag ") + flag);
}

bool ci_mode() {
  const char* v = std::getenv("OSF_FORGE_CI");
  return v != nullptr && std::string(v) == "1";
}

std::uint64_t seed_of(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (ci_mode()) throw UsageError("--seed is required when OSF_FORGE_CI=1");
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ForestTriple load_triple(const RunConfig& c) {
  require(c.gene, "--gene");
  require(c.forest, "--forest");
  require(c.map, "--map");
  PhyloTree gene = parse_tree(read_file(c.gene));
  Forest forest = parse_forest(read_file(c.forest));
  LeafMap phi = parse_leaf_map(read_file(c.map), gene, forest);
  return ForestTriple(std::move(gene), std::move(forest), std::move(phi));
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9)
      throw UsageError("bad arc index '" + item + "' in --arcs");
    out.push_back(std::stoul(item));
  }
  return out;
}

Network load_network(const RunConfig& c) {
  require(c.network, "--network");
  return parse_network_json(read_file(c.network));
}

std::vector<std::size_t> arcs_for(const RunConfig& c, const Network& n) {
  if (!c.arcs.empty()) return parse_indices(c.arcs);
  if (!n.has_partition()) throw UsageError("network has no contact arcs; give --arcs or --search");
  return n.arcs_of_kind(ArcKind::contact);
}

// The supplied rho, else the first vertex that works.
ValidityVerdict validate_with(const RunConfig& c, const Network& n, const std::vector<std::size_t>& arcs) {
  if (c.rho) return check_valid(n, *c.rho, arcs);
  ValidityVerdict last{false, "network has no vertices", std::nullopt};
  for (std::size_t rho = 0; rho < n.vertex_count(); ++rho) {
    last = check_valid(n, rho, arcs);
    if (last.valid || last.reason.rfind("(V1)", 0) == 0) return last;
  }
  return last;
}

int cmd_build(const RunConfig& c, std::ostream& out) {
  const ForestTriple triple = load_triple(c);
  TieBreaker tie = c.tie == "seeded" ? TieBreaker::seeded(seed_of(c)) : TieBreaker::first();
  const OsfMap psi = build_osf(triple, tie);
  if (!c.out.empty()) {
    write_file(c.out + ".osf.tsv", write_osf_map(triple, psi));
    std::vector<TreeArc> intro;
    for (const ContactArc& a : psi.contacts()) intro.push_back(a.gene_arc);
    write_file(c.out + ".intro.tsv", write_arc_list(intro));
    const Network n = build_network(triple, psi);
    if (c.format == "dot")
      write_file(c.out + ".network.dot", write_network_dot(n, &triple.species()));
    else if (c.format == "json")
      write_file(c.out + ".network.json", write_network_json(n));
  }
  out << "t=" << psi.contacts().size() << " contact_arcs=" << psi.contact_set().size() << '\n';
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const ForestTriple triple = load_triple(c);
  require(c.osf, "--osf");
  const OsfMap psi = parse_osf_map(read_file(c.osf), triple);
  OsfReport report = check_osf(triple, psi);
  if (c.strict) report.append(check_strict(triple, psi));
  const std::string text = report_json(report).dump(2) + "\n";
  if (c.out.empty())
    out << text;
  else
    write_file(c.out, text);
  return report.all_pass() ? kOk : kSemanticFailure;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const Network n = load_network(c);
  std::optional<ValidityWitness> witness;
  std::string reason;
  if (c.search) {
    witness = search_validity(n, SearchCaps{c.cap_search});
    if (!witness) reason = "no rho and arc set satisfy (V1) and (V2)";
  } else {
    auto v = validate_with(c, n, arcs_for(c, n));
    witness = std::move(v.witness);
    reason = v.reason;
  }
  if (!witness) {
    out << "invalid: " << reason << '\n';
    return kSemanticFailure;
  }
  const std::string text = witness_json(n, *witness).dump(2) + "\n";
  if (c.out.empty())
    out << text;
  else
    write_file(c.out, text);
  return kOk;
}

int cmd_resolve(const RunConfig& c, std::ostream& out) {
  const ForestTriple triple = load_triple(c);
  const OsfMap psi = c.osf.empty() ? build_osf(triple) : parse_osf_map(read_file(c.osf), triple);
  const BinaryResolution res = binary_resolution(triple, psi);
  if (c.out.empty()) {
    out << resolution_json(res).dump(2) << '\n';
    return kOk;
  }
  write_file(c.out + ".resolution.json", resolution_json(res).dump(2) + "\n");
  if (c.format == "dot") write_file(c.out + ".resolution.dot", write_network_dot(res.network));
  out << "vertices=" << res.network.vertex_count() << " arcs=" << res.network.arcs().size()
      << " contact_arcs=" << res.contact_origin.size() << '\n';
  return kOk;
}

int cmd_unfold(const RunConfig& c, std::ostream& out) {
  const Network n = load_network(c);
  const auto arcs = arcs_for(c, n);
  std::size_t rho = 0;
  if (c.rho) {
    rho = *c.rho;
  } else {
    const auto v = validate_with(c, n, arcs);
    if (!v.witness) throw SemanticError("network is not valid: " + v.reason);
    rho = v.witness->rho;
  }
  const Unfolding u = unfold(n, rho, arcs, c.cap_unfold);
  if (c.out.empty()) {
    out << write_newick(u.triple.gene()) << '\n';
  } else {
    write_file(c.out + ".gene.nwk", write_newick(u.triple.gene()) + "\n");
    write_file(c.out + ".forest.nwk", write_forest(u.triple.species()));
    write_file(c.out + ".map.tsv", write_leaf_map(u.triple));
    write_file(c.out + ".osf.tsv", write_osf_map(u.triple, u.psi));
  }
  out << "trails=" << u.trail_count << " gene_leaves=" << u.triple.gene().leaf_count() << '\n';
  return kOk;
}

int cmd_perturb(const RunConfig& c, std::ostream& out) {
  const ForestTriple triple = load_triple(c);
  const std::uint64_t seed = seed_of(c);
  StabilityReport report;
  if (c.mode == "gene")
    report = perturb_gene_experiment(triple, c.k, seed, c.trials);
  else if (c.mode == "forest")
    report = perturb_forest_experiment(triple, seed, c.trials);
  else
    throw UsageError("--mode must be gene or forest");
  std::ostringstream csv, summary;
  report.write_csv(csv);
  report.write_summary(summary);
  if (c.out.empty()) {
    out << csv.str();
  } else {
    write_file(c.out + ".csv", csv.str());
    write_file(c.out + ".summary.json", summary.str());
    out << summary.str();
  }
  return report.violations() == 0 ? kOk : kSemanticFailure;
}

int cmd_gen(const RunConfig& c, std::ostream& out) {
  require(c.out, "--out");
  RandomTripleParams p = c.gen;
  p.binary = !c.nonbinary;
  const std::uint64_t seed = seed_of(c);
  const ForestTriple t = random_triple(p, seed);
  write_file(c.out + ".gene.nwk", write_newick(t.gene()) + "\n");
  write_file(c.out + ".forest.nwk", write_forest(t.species()));
  write_file(c.out + ".map.tsv", write_leaf_map(t));
  out << "seed=" << seed << '\n';
  return kOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const ForestTriple triple = load_triple(c);
  out << "t=" << brute_force_t(triple, c.cap_oracle) << '\n';
  return kOk;
}

void add_triple(CLI::App* sub, RunConfig& c) {
  sub->add_option("--gene", c.gene, "gene tree (Newick)");
  sub->add_option("--forest", c.forest, "species forest (one Newick tree per line)");
  sub->add_option("--map", c.map, "leaf map TSV");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overlaid species forests: build, verify, validate, resolve, unfold, perturb"};
  app.name("osf-forge");
  app.require_subcommand(1);
  RunConfig c;

  auto* build = app.add_subcommand("build", "build an optimal strict OSF");
  add_triple(build, c);
  build->add_option("--out", c.out, "output prefix");
  build->add_option("--format", c.format, "network format")->check(CLI::IsMember({"dot", "json", "tsv"}));
  build->add_option("--tie", c.tie, "tie-break policy")->check(CLI::IsMember({"first", "seeded"}));
  build->add_option("--seed", c.seed, "seed for --tie seeded");

  auto* verify = app.add_subcommand("verify", "check an OSF map against the axioms");
  add_triple(verify, c);
  verify->add_option("--osf", c.osf, "OSF map TSV");
  verify->add_flag("--strict", c.strict, "also check (S3)");
  verify->add_option("--out", c.out, "report file");

  auto* validate = app.add_subcommand("validate", "test whether a network is valid");
  validate->add_option("--network", c.network, "network JSON");
  validate->add_option("--rho", c.rho, "start vertex");
  validate->add_option("--arcs", c.arcs, "comma-separated arc indices forming A");
  validate->add_flag("--search", c.search, "search every A and rho");
  validate->add_option("--cap-search", c.cap_search, "largest arc count --search accepts")
      ->check(CLI::PositiveNumber);
  validate->add_option("--out", c.out, "witness file");

  auto* resolve = app.add_subcommand("resolve", "binary resolution of a strict OSF");
  add_triple(resolve, c);
  resolve->add_option("--osf", c.osf, "OSF map TSV (default: builder output)");
  resolve->add_option("--out", c.out, "output prefix");
  resolve->add_option("--format", c.format, "also write DOT with 'dot'")
      ->check(CLI::IsMember({"dot", "json", "tsv"}));

  auto* unfold_cmd = app.add_subcommand("unfold", "gene tree of admissible trails");
  unfold_cmd->add_option("--network", c.network, "network JSON");
  unfold_cmd->add_option("--rho", c.rho, "start vertex");
  unfold_cmd->add_option("--arcs", c.arcs, "comma-separated arc indices forming A");
  unfold_cmd->add_option("--cap-unfold", c.cap_unfold, "largest trail count")->check(CLI::PositiveNumber);
  unfold_cmd->add_option("--out", c.out, "output prefix");

  auto* perturb = app.add_subcommand("perturb", "SPR stability experiment");
  add_triple(perturb, c);
  perturb->add_option("--mode", c.mode, "gene or forest")->check(CLI::IsMember({"gene", "forest"}));
  perturb->add_option("--k", c.k, "SPR moves per gene trial");
  perturb->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber);
  perturb->add_option("--seed", c.seed, "random seed");
  perturb->add_option("--out", c.out, "output prefix");

  auto* gen = app.add_subcommand("gen", "random forest triple");
  gen->add_option("--seed", c.seed, "random seed");
  gen->add_option("--gene-leaves", c.gen.n_gene_leaves, "gene tree leaves");
  gen->add_option("--trees", c.gen.n_trees, "species trees");
  gen->add_option("--leaves-per-tree", c.gen.leaves_per_tree, "leaves per species tree");
  gen->add_flag("--nonbinary", c.nonbinary, "allow multifurcations");
  gen->add_option("--out", c.out, "output prefix");

  auto* oracle = app.add_subcommand("oracle", "optimum by exhaustive search");
  add_triple(oracle, c);
  oracle->add_option("--cap-oracle", c.cap_oracle, "largest extension count")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  }

  try {
    if (build->parsed()) return cmd_build(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (validate->parsed()) return cmd_validate(c, out);
    if (resolve->parsed()) return cmd_resolve(c, out);
    if (unfold_cmd->parsed()) return cmd_unfold(c, out);
    if (perturb->parsed()) return cmd_perturb(c, out);
    if (gen->parsed()) return cmd_gen(c, out);
    if (oracle->parsed()) return cmd_oracle(c, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSemanticFailure;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kSemanticFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kSemanticFailure;
  }
  return kParseFailure;
}

}  // namespace osf
