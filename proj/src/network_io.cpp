#include "qinfer/network_io.hpp"

#include <fstream>
#include <sstream>

namespace qinfer {

using nlohmann::json;

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ValidationError({"matrix entry must be a number or a [re, im] pair, got " + e.dump()});
}

}  // namespace

ComplexMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError({"matrix must be a non-empty list of rows"});
  const auto n = static_cast<Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ValidationError({"matrix must be square: row " + std::to_string(i) + " has the wrong length"});
    for (Index j = 0; j < n; ++j) m(i, j) = entry_from_json(row[static_cast<std::size_t>(j)]);
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

AcausalNetwork parse_network(const json& doc) {
  if (!doc.is_object()) throw ValidationError({"network document must be a JSON object"});
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw ValidationError({"network document needs a 'nodes' list"});

  AcausalNetwork net;
  std::vector<std::string> problems;
  for (const auto& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_string() || !n.contains("dim") ||
        !n["dim"].is_number_integer())
      throw ValidationError({"each node needs a string 'id' and an integer 'dim': " + n.dump()});
    NodeSpec spec{n["id"].get<std::string>(), n["dim"].get<Index>(), {}};
    if (n.contains("parents")) {
      if (!n["parents"].is_array()) throw ValidationError({"node '" + spec.id + "': 'parents' must be a list"});
      for (const auto& p : n["parents"]) {
        if (!p.is_string()) throw ValidationError({"node '" + spec.id + "': parent ids must be strings"});
        spec.parents.push_back(p.get<std::string>());
      }
    }
    net.nodes.push_back(std::move(spec));
  }

  // Structural problems make factor shapes meaningless; report them first.
  for (const auto& v : validate(net))
    if (v.message != "missing factor") problems.push_back(v.str());
  if (!problems.empty()) throw ValidationError(std::move(problems));

  const DimList all = net.dims();
  if (doc.contains("factors")) {
    if (!doc["factors"].is_object()) throw ValidationError({"'factors' must be an object keyed by node id"});
    for (const auto& [id, rows] : doc["factors"].items()) {
      if (!net.index_of(id)) {
        problems.push_back("factor given for unknown node '" + id + "'");
        continue;
      }
      try {
        const auto positions = net.factor_positions(id);
        const DimList dims = all.select(positions);
        ComplexMatrix m = matrix_from_json(rows);
        if (m.rows() != dims.total()) {
          problems.push_back("node '" + id + "': factor has order " + std::to_string(m.rows()) + ", expected " +
                             std::to_string(dims.total()) + " for dims " + dims.str());
          continue;
        }
        std::vector<std::size_t> parents, targets;
        for (std::size_t k = 0; k < positions.size(); ++k)
          (positions[k] == *net.index_of(id) ? targets : parents).push_back(k);
        net.conditionals.emplace(id, ConditionalOperator(std::move(m), dims, parents, targets));
      } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) problems.push_back("node '" + id + "': " + v);
      } catch (const Error& e) {
        problems.push_back("node '" + id + "': " + e.what());
      }
    }
  }

  if (doc.contains("joint_override") && !doc["joint_override"].is_null()) {
    const auto& ov = doc["joint_override"];
    if (!ov.is_object() || !ov.contains("covers") || !ov["covers"].is_array() || !ov.contains("matrix"))
      throw ValidationError({"'joint_override' needs 'covers' and 'matrix'"});
    std::vector<std::string> covers;
    std::vector<Index> dims;
    for (const auto& c : ov["covers"]) {
      if (!c.is_string()) throw ValidationError({"joint_override covers must be node ids"});
      covers.push_back(c.get<std::string>());
      const auto k = net.index_of(covers.back());
      if (!k) throw ValidationError({"joint_override covers unknown node '" + covers.back() + "'"});
      dims.push_back(net.nodes[*k].dim);
    }
    try {
      net.joint_override = JointOverride{std::move(covers), DensityOperator(matrix_from_json(ov["matrix"]), DimList(dims))};
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) problems.push_back("joint_override: " + v);
    } catch (const Error& e) {
      problems.push_back(std::string("joint_override: ") + e.what());
    }
  }

  if (!problems.empty()) throw ValidationError(std::move(problems));
  return net;
}

AcausalNetwork load_network(const std::filesystem::path& path, bool check) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({"'" + path.string() + "' is not valid JSON: " + e.what()});
  }
  AcausalNetwork net = parse_network(doc);
  if (check) {
    if (const auto v = validate(net); !v.empty()) {
      std::vector<std::string> msgs;
      for (const auto& x : v) msgs.push_back(x.str());
      throw ValidationError(std::move(msgs));
    }
  }
  return net;
}

json network_to_json(const AcausalNetwork& net) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : net.nodes) doc["nodes"].push_back({{"id", n.id}, {"dim", n.dim}, {"parents", n.parents}});
  doc["factors"] = json::object();
  for (const auto& [id, cond] : net.conditionals) doc["factors"][id] = matrix_to_json(cond.matrix());
  if (net.joint_override)
    doc["joint_override"] = {{"covers", net.joint_override->covers},
                             {"matrix", matrix_to_json(net.joint_override->state.matrix())}};
  return doc;
}

std::string format_network(const AcausalNetwork& net) {
  const json doc = network_to_json(net);
  const auto matrix_block = [](const json& rows, const std::string& indent) {
    std::string s = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      s += indent + "  " + rows[i].dump() + (i + 1 < rows.size() ? ",\n" : "\n");
    return s + indent + "]";
  };
  std::ostringstream os;
  os << "{\n  \"nodes\": [\n";
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i)
    os << "    " << doc["nodes"][i].dump() << (i + 1 < doc["nodes"].size() ? ",\n" : "\n");
  os << "  ],\n  \"factors\": {";
  bool first = true;
  for (const auto& [id, rows] : doc["factors"].items()) {
    os << (first ? "\n" : ",\n") << "    " << json(id).dump() << ": " << matrix_block(rows, "    ");
    first = false;
  }
  os << (first ? "}" : "\n  }");
  if (doc.contains("joint_override")) {
    const auto& ov = doc["joint_override"];
    os << ",\n  \"joint_override\": {\n    \"covers\": " << ov["covers"].dump()
       << ",\n    \"matrix\": " << matrix_block(ov["matrix"], "    ") << "\n  }";
  }
  os << "\n}\n";
  return os.str();
}

void save_network(const AcausalNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write network file '" + path.string() + "'");
  out << format_network(net);
  if (!out) throw IoError("failed writing network file '" + path.string() + "'");
}

}  // namespace qinfer
