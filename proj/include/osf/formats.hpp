#pragma once

// File formats: OSF map TSV, arc lists, network JSON/DOT, and JSON reports.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "osf/core.hpp"
#include "osf/network.hpp"
#include "osf/osf_map.hpp"
#include "osf/verify.hpp"

namespace osf {

/// One row per gene vertex: `gene_id<TAB>tree_index<TAB>cluster`, where the
/// image is named by its tree (0-based, file order) and the comma-joined
/// sorted leaf labels below it.
std::string write_osf_map(const ForestTriple& triple, const OsfMap& psi);
/// Throws ParseError for malformed, missing or duplicate rows and for
/// clusters that name no vertex.
OsfMap parse_osf_map(std::string_view text, const ForestTriple& triple);

/// `tail<TAB>head` gene vertex ids, one arc per line.
std::string write_arc_list(std::span<const TreeArc> arcs);
std::vector<TreeArc> parse_arc_list(std::string_view text);

/// {nodes, forest_arcs, contact_arcs, leaf_labels}; networks without a
/// partition use a single `arcs` array instead.
nlohmann::ordered_json network_json(const Network& network);
std::string write_network_json(const Network& network);
/// Throws ParseError (with the position of malformed JSON) or SemanticError.
Network parse_network_json(std::string_view text);

/// Graphviz digraph; each tree of the forest is a cluster when `forest` is
/// given, contact arcs are dashed.
std::string write_network_dot(const Network& network, const Forest* forest = nullptr);

nlohmann::ordered_json report_json(const OsfReport& report);
nlohmann::ordered_json witness_json(const Network& network, const ValidityWitness& witness);
nlohmann::ordered_json resolution_json(const BinaryResolution& resolution);

}  // namespace osf
