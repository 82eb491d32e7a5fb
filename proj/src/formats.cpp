#include "osf/formats.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "osf/errors.hpp"

namespace osf {

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t");
  return pos == std::string_view::npos || line[pos] == '#';
}

// Whitespace-separated fields with their 1-based columns.
std::vector<std::pair<std::string, std::size_t>> fields_of(std::string_view line) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.emplace_back(std::string(line.substr(start, i - start)), start + 1);
  }
  return out;
}

std::size_t parse_index(const std::string& text, std::size_t line, std::size_t column) {
  if (text.empty() || text.size() > 9 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("expected a non-negative integer, got '" + text + "'", line, column);
  return std::stoul(text);
}

std::string cluster_text(const PhyloTree& tree, NodeId v) {
  std::vector<std::string> names;
  for (NodeId l : tree.cluster(v)) names.push_back(tree.label(l));
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out;
}

std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

std::string write_osf_map(const ForestTriple& triple, const OsfMap& psi) {
  std::ostringstream out;
  out << "# gene_id\ttree\tcluster\n";
  for (std::size_t i = 0; i < triple.gene().size(); ++i) {
    const ForestNode img = psi[node_id(i)];
    out << i << '\t' << img.tree << '\t' << cluster_text(triple.species().tree(img.tree), img.node)
        << '\n';
  }
  return out.str();
}

OsfMap parse_osf_map(std::string_view text, const ForestTriple& triple) {
  const PhyloTree& g = triple.gene();
  const Forest& forest = triple.species();
  std::vector<std::optional<ForestNode>> images(g.size());
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    const std::size_t ln = i + 1;
    const auto f = fields_of(lines[i]);
    if (f.size() != 3) throw ParseError("expected three columns", ln, 1);
    const std::size_t v = parse_index(f[0].first, ln, f[0].second);
    if (v >= g.size()) throw ParseError("gene vertex " + f[0].first + " does not exist", ln, f[0].second);
    if (images[v]) throw ParseError("duplicate row for gene vertex " + f[0].first, ln, f[0].second);
    const std::size_t t = parse_index(f[1].first, ln, f[1].second);
    if (t >= forest.size()) throw ParseError("tree " + f[1].first + " does not exist", ln, f[1].second);
    const PhyloTree& tree = forest.tree(t);

    std::vector<NodeId> leaves;
    std::set<std::string> names;
    std::string_view rest = f[2].first;
    while (true) {
      const auto comma = rest.find(',');
      std::string name(rest.substr(0, comma));
      auto leaf = tree.find_leaf(name);
      if (!leaf || !names.insert(name).second)
        throw ParseError("bad cluster member '" + name + "'", ln, f[2].second);
      leaves.push_back(*leaf);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const NodeId at = tree.lca(leaves);
    if (tree.cluster(at).size() != leaves.size())
      throw ParseError("cluster names no vertex of tree " + f[1].first, ln, f[2].second);
    images[v] = ForestNode{t, at};
  }
  std::vector<ForestNode> out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!images[v])
      throw ParseError("no row for gene vertex " + std::to_string(v), std::max<std::size_t>(lines.size(), 1), 1);
    out.push_back(*images[v]);
  }
  return OsfMap(triple, std::move(out));
}

std::string write_arc_list(std::span<const TreeArc> arcs) {
  std::ostringstream out;
  out << "# tail\thead\n";
  for (const TreeArc& a : arcs) out << index(a.tail) << '\t' << index(a.head) << '\n';
  return out.str();
}

std::vector<TreeArc> parse_arc_list(std::string_view text) {
  std::vector<TreeArc> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    const auto f = fields_of(lines[i]);
    if (f.size() != 2) throw ParseError("expected two columns", i + 1, 1);
    out.push_back({node_id(parse_index(f[0].first, i + 1, f[0].second)),
                   node_id(parse_index(f[1].first, i + 1, f[1].second))});
  }
  return out;
}

nlohmann::ordered_json network_json(const Network& n) {
  nlohmann::ordered_json j;
  j["nodes"] = n.vertex_count();
  auto pairs = [&](ArcKind kind) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (std::size_t i : n.arcs_of_kind(kind)) a.push_back({n.arc(i).tail, n.arc(i).head});
    return a;
  };
  if (n.has_partition()) {
    j["forest_arcs"] = pairs(ArcKind::forest);
    j["contact_arcs"] = pairs(ArcKind::contact);
  } else {
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const NetworkArc& a : n.arcs()) all.push_back({a.tail, a.head});
    j["arcs"] = all;
  }
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  for (const auto& [v, name] : n.leaf_labels()) labels[std::to_string(v)] = name;
  j["leaf_labels"] = labels;
  return j;
}

std::string write_network_json(const Network& network) { return network_json(network).dump(2) + "\n"; }

Network parse_network_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed JSON", line, column);
  }
  try {
    if (!j.is_object()) throw SemanticError("network JSON must be an object");
    const std::size_t n = j.at("nodes").get<std::size_t>();
    if (n > 1'000'000) throw SemanticError("network JSON has too many nodes");
    std::vector<NetworkArc> arcs;
    auto read = [&](const char* key, ArcKind kind) {
      if (!j.contains(key)) return;
      for (const auto& a : j.at(key)) {
        if (!a.is_array() || a.size() != 2) throw SemanticError(std::string(key) + " entries must be pairs");
        arcs.push_back({a[0].get<std::size_t>(), a[1].get<std::size_t>(), kind});
      }
    };
    const bool partitioned = j.contains("forest_arcs") || j.contains("contact_arcs");
    if (partitioned && j.contains("arcs")) throw SemanticError("network JSON mixes arcs and forest_arcs");
    read("arcs", ArcKind::plain);
    read("forest_arcs", ArcKind::forest);
    read("contact_arcs", ArcKind::contact);
    std::map<std::size_t, std::string> labels;
    if (j.contains("leaf_labels")) {
      for (const auto& [key, value] : j.at("leaf_labels").items()) {
        std::size_t v = 0;
        try {
          std::size_t used = 0;
          v = std::stoul(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::logic_error&) {
          throw SemanticError("leaf label key '" + key + "' is not a vertex id");
        }
        labels.emplace(v, value.get<std::string>());
      }
    }
    return Network(n, std::move(arcs), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw SemanticError(std::string("bad network JSON: ") + e.what());
  }
}

std::string write_network_dot(const Network& n, const Forest* forest) {
  std::ostringstream out;
  out << "digraph network {\n";
  auto node = [&](std::size_t v) {
    out << "    n" << v;
    auto it = n.leaf_labels().find(v);
    if (it != n.leaf_labels().end())
      out << " [label=\"" << it->second << "\", shape=plaintext]";
    else
      out << " [label=\"\", shape=point]";
    out << ";\n";
  };
  if (forest) {
    for (std::size_t t = 0; t < forest->size(); ++t) {
      out << "  subgraph cluster_" << t << " {\n    label=\"T" << t + 1 << "\";\n";
      for (std::size_t i = 0; i < forest->tree(t).size(); ++i) node(forest->global({t, node_id(i)}));
      out << "  }\n";
    }
  } else {
    for (std::size_t v = 0; v < n.vertex_count(); ++v) node(v);
  }
  for (const NetworkArc& a : n.arcs()) {
    out << "  n" << a.tail << " -> n" << a.head;
    if (a.kind == ArcKind::contact) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::ordered_json report_json(const OsfReport& report) {
  nlohmann::ordered_json j;
  j["pass"] = report.all_pass();
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const OsfVerdict& v : report.verdicts) {
    nlohmann::ordered_json e;
    e["axiom"] = v.axiom;
    e["pass"] = v.pass;
    e["vertices"] = nlohmann::ordered_json::array();
    for (NodeId x : v.vertices) e["vertices"].push_back(index(x));
    e["arcs"] = nlohmann::ordered_json::array();
    for (const TreeArc& a : v.arcs) e["arcs"].push_back({index(a.tail), index(a.head)});
    e["detail"] = v.detail;
    j["verdicts"].push_back(e);
  }
  return j;
}

nlohmann::ordered_json witness_json(const Network& network, const ValidityWitness& w) {
  nlohmann::ordered_json j;
  j["valid"] = true;
  j["rho"] = w.rho;
  j["arcs"] = w.arcs;
  j["trails"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < w.trails.size(); ++i) {
    nlohmann::ordered_json t;
    t["arc"] = w.arcs[i];
    t["start"] = w.trails[i].start;
    t["arcs"] = w.trails[i].arcs;
    t["vertices"] = w.trails[i].vertices(network);
    j["trails"].push_back(t);
  }
  return j;
}

nlohmann::ordered_json resolution_json(const BinaryResolution& r) {
  nlohmann::ordered_json j = network_json(r.network);
  j["projection"] = r.projection;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const auto& l : r.subdivision_label) {
    if (l)
      labels.push_back(index(*l));
    else
      labels.push_back(nullptr);
  }
  j["subdivision_label"] = labels;
  nlohmann::ordered_json origin = nlohmann::ordered_json::array();
  for (const TreeArc& a : r.contact_origin) origin.push_back({index(a.tail), index(a.head)});
  j["contact_origin"] = origin;
  j["pairing_rule"] = r.pairing_rule;
  return j;
}

}  // namespace osf
