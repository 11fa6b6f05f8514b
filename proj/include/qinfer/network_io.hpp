#pragma once

// JSON network files:
//
//   {
//     "nodes":   [{"id": "A", "dim": 3, "parents": []}, ...],
//     "factors": {"A": [[[re, im], ...], ...], ...},
//     "joint_override": {"covers": ["A", "B"], "matrix": [[[re, im], ...], ...]}
//   }
//
// Each factor acts on the node and its parents tensored in node declaration
// order. Matrix entries may also be plain real numbers.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qinfer/acausal_network.hpp"

namespace qinfer {

/// Builds a network from its JSON form without checking numerical
/// invariants. Malformed documents throw ValidationError.
AcausalNetwork parse_network(const nlohmann::json& doc);

/// Reads a network file. With `check` the network is also validated and a
/// ValidationError lists every violation. Unreadable files throw IoError.
AcausalNetwork load_network(const std::filesystem::path& path, bool check = true);

nlohmann::json network_to_json(const AcausalNetwork& net);

/// Writes the network with one matrix row per line.
std::string format_network(const AcausalNetwork& net);
void save_network(const AcausalNetwork& net, const std::filesystem::path& path);

ComplexMatrix matrix_from_json(const nlohmann::json& rows);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

}  // namespace qinfer
