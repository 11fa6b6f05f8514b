#include "qinfer/acausal_network.hpp"

#include <algorithm>
#include <set>

namespace qinfer {

std::optional<std::size_t> AcausalNetwork::index_of(const std::string& id) const {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].id == id) return k;
  return std::nullopt;
}

const NodeSpec& AcausalNetwork::node(const std::string& id) const {
  const auto k = index_of(id);
  if (!k) throw PreconditionError("unknown node '" + id + "'");
  return nodes[*k];
}

DimList AcausalNetwork::dims() const {
  std::vector<Index> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.dim);
  return DimList(std::move(out));
}

std::vector<std::size_t> AcausalNetwork::factor_positions(const std::string& id) const {
  const NodeSpec& n = node(id);
  std::vector<std::size_t> out{*index_of(id)};
  for (const auto& p : n.parents) {
    const auto k = index_of(p);
    if (!k) throw PreconditionError("node '" + id + "' has unknown parent '" + p + "'");
    out.push_back(*k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool AcausalNetwork::covered_by_override(const std::string& id) const {
  return joint_override &&
         std::find(joint_override->covers.begin(), joint_override->covers.end(), id) != joint_override->covers.end();
}

namespace {

// Kahn's algorithm, always taking the first declared ready node. Returns a
// partial order when there is a cycle.
std::vector<std::size_t> kahn_order(const AcausalNetwork& net) {
  const std::size_t n = net.nodes.size();
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (bool progress = true; progress && order.size() < n;) {
    progress = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (placed[k]) continue;
      const bool ready = std::all_of(net.nodes[k].parents.begin(), net.nodes[k].parents.end(), [&](const auto& p) {
        const auto idx = net.index_of(p);
        return idx && placed[*idx];
      });
      if (ready) {
        placed[k] = true;
        order.push_back(k);
        progress = true;
        break;
      }
    }
  }
  return order;
}

void validate_override(const AcausalNetwork& net, std::vector<Violation>& out) {
  const auto& ov = *net.joint_override;
  if (ov.covers.empty()) {
    out.push_back({"", "joint_override covers no nodes"});
    return;
  }
  std::vector<Index> cover_dims;
  std::optional<std::size_t> previous;
  for (const auto& id : ov.covers) {
    const auto k = net.index_of(id);
    if (!k) {
      out.push_back({id, "joint_override covers an unknown node"});
      return;
    }
    if (!net.nodes[*k].parents.empty()) out.push_back({id, "joint_override may only cover root nodes"});
    if (previous && *k <= *previous) {
      out.push_back({id, "joint_override covers must be distinct and listed in declaration order"});
      return;
    }
    previous = k;
    cover_dims.push_back(net.nodes[*k].dim);
  }
  if (ov.state.order() != DimList(cover_dims).total())
    out.push_back({"", "joint_override state has order " + std::to_string(ov.state.order()) +
                           " but the covered nodes span " + std::to_string(DimList(cover_dims).total())});
}

}  // namespace

std::vector<Violation> validate(const AcausalNetwork& net, double tolerance) {
  std::vector<Violation> out;
  if (net.nodes.empty()) out.push_back({"", "network has no nodes"});

  std::set<std::string> seen;
  bool structure_ok = true;
  for (const auto& n : net.nodes) {
    if (n.id.empty()) {
      out.push_back({"", "node with empty id"});
      structure_ok = false;
    }
    if (!seen.insert(n.id).second) {
      out.push_back({n.id, "duplicate node id"});
      structure_ok = false;
    }
    if (n.dim < 1) {
      out.push_back({n.id, "dimension must be >= 1"});
      structure_ok = false;
    }
  }
  for (const auto& n : net.nodes) {
    std::set<std::string> parents;
    for (const auto& p : n.parents) {
      if (p == n.id) {
        out.push_back({n.id, "node lists itself as a parent"});
        structure_ok = false;
      } else if (!net.index_of(p)) {
        out.push_back({n.id, "unknown parent '" + p + "'"});
        structure_ok = false;
      } else if (!parents.insert(p).second) {
        out.push_back({n.id, "parent '" + p + "' listed twice"});
        structure_ok = false;
      }
    }
  }
  if (!structure_ok) return out;

  if (const auto order = kahn_order(net); order.size() != net.nodes.size()) {
    std::string members;
    std::vector<bool> placed(net.nodes.size(), false);
    for (auto k : order) placed[k] = true;
    for (std::size_t k = 0; k < net.nodes.size(); ++k)
      if (!placed[k]) members += (members.empty() ? "" : ", ") + net.nodes[k].id;
    out.push_back({"", "graph is not acyclic (cycle through: " + members + ")"});
  }

  if (net.joint_override) validate_override(net, out);

  for (const auto& [id, cond] : net.conditionals)
    if (!net.index_of(id)) out.push_back({id, "factor given for an unknown node"});

  const DimList all = net.dims();
  for (const auto& n : net.nodes) {
    const bool covered = net.covered_by_override(n.id);
    const auto it = net.conditionals.find(n.id);
    if (covered) {
      if (it != net.conditionals.end()) out.push_back({n.id, "node is covered by joint_override and also has a factor"});
      continue;
    }
    if (it == net.conditionals.end()) {
      out.push_back({n.id, "missing factor"});
      continue;
    }
    const ConditionalOperator& cond = it->second;
    const auto positions = net.factor_positions(n.id);
    const DimList expected = all.select(positions);
    if (!(cond.dims() == expected)) {
      out.push_back({n.id, "factor dims " + cond.dims().str() + " do not match expected " + expected.str()});
      continue;
    }
    const std::size_t self = static_cast<std::size_t>(
        std::find(positions.begin(), positions.end(), *net.index_of(n.id)) - positions.begin());
    if (cond.target_positions() != std::vector<std::size_t>{self}) {
      out.push_back({n.id, "factor target must be the node itself"});
      continue;
    }
    if (!cond.parent_support().isIdentity(tolerance))
      out.push_back({n.id, "factor is only conditional on part of the parent space"});
    for (const auto& msg : cond.violations(tolerance)) out.push_back({n.id, msg});
  }
  return out;
}

std::vector<std::size_t> topological_order(const AcausalNetwork& net) {
  auto order = kahn_order(net);
  if (order.size() != net.nodes.size()) throw ValidationError({"graph is not acyclic"});
  return order;
}

std::vector<ComplexMatrix> embedded_factors(const AcausalNetwork& net) {
  if (const auto v = validate(net); !v.empty()) {
    std::vector<std::string> msgs;
    for (const auto& x : v) msgs.push_back(x.str());
    throw ValidationError(std::move(msgs));
  }
  const DimList all = net.dims();
  auto order = topological_order(net);
  std::reverse(order.begin(), order.end());

  std::vector<ComplexMatrix> factors;
  bool override_placed = false;
  for (auto k : order) {
    const auto& id = net.nodes[k].id;
    if (net.covered_by_override(id)) {
      if (override_placed) continue;
      std::vector<std::size_t> positions;
      for (const auto& c : net.joint_override->covers) positions.push_back(*net.index_of(c));
      factors.push_back(embed(net.joint_override->state.matrix(), all, positions));
      override_placed = true;
      continue;
    }
    factors.push_back(embed(net.conditionals.at(id).matrix(), all, net.factor_positions(id)));
  }
  return factors;
}

DensityOperator fold_star(const std::vector<ComplexMatrix>& factors, const DimList& dims) {
  if (factors.empty()) throw PreconditionError("fold_star: no factors");
  ComplexMatrix acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) acc = star(acc, factors[k]);
  acc = (acc + acc.adjoint()) / 2.0;
  const double trace = acc.trace().real();
  if (trace <= tol::kEvidence) throw Error("joint state has vanishing trace " + std::to_string(trace));
  return DensityOperator(acc / trace, dims);
}

DensityOperator joint_state(const AcausalNetwork& net) { return fold_star(embedded_factors(net), net.dims()); }

DensityOperator posterior(const AcausalNetwork& net, const Evidence& evidence, const std::string& query) {
  const auto q = net.index_of(query);
  if (!q) throw PreconditionError("unknown query node '" + query + "'");
  DensityOperator state = joint_state(net);
  for (const auto& [id, value] : evidence) {
    const auto k = net.index_of(id);
    if (!k) throw PreconditionError("evidence on unknown node '" + id + "'");
    const BasisOutcome outcome{*k, value};
    const double p = outcome_probability(state, outcome);
    if (p <= tol::kEvidence)
      throw ImpossibleEvidence("impossible evidence: " + id + "=" + std::to_string(value) + " has probability " +
                                   std::to_string(p),
                               p, id);
    state = project_evidence(state, outcome);
  }
  return marginal(state, {*q});
}

Eigen::VectorXd classical_oracle(const AcausalNetwork& net, const Evidence& evidence, const std::string& query) {
  if (const auto v = validate(net); !v.empty()) {
    std::vector<std::string> msgs;
    for (const auto& x : v) msgs.push_back(x.str());
    throw ValidationError(std::move(msgs));
  }
  const auto require_diagonal = [](const ComplexMatrix& m, const std::string& what) {
    ComplexMatrix off = m;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > tol::kEvidence)
      throw PreconditionError("classical_oracle: " + what + " is not diagonal");
  };

  struct Table {
    std::vector<std::size_t> positions;
    Eigen::VectorXd weights;
  };
  std::vector<Table> tables;
  for (const auto& n : net.nodes) {
    if (net.covered_by_override(n.id)) continue;
    const auto& m = net.conditionals.at(n.id).matrix();
    require_diagonal(m, "factor of '" + n.id + "'");
    tables.push_back({net.factor_positions(n.id), m.diagonal().real()});
  }
  if (net.joint_override) {
    const auto& m = net.joint_override->state.matrix();
    require_diagonal(m, "joint_override");
    Table t;
    for (const auto& c : net.joint_override->covers) t.positions.push_back(*net.index_of(c));
    t.weights = m.diagonal().real();
    tables.push_back(std::move(t));
  }

  const auto q = net.index_of(query);
  if (!q) throw PreconditionError("unknown query node '" + query + "'");
  std::vector<std::pair<std::size_t, Index>> observed;
  for (const auto& [id, value] : evidence) {
    const auto k = net.index_of(id);
    if (!k) throw PreconditionError("evidence on unknown node '" + id + "'");
    if (value < 0 || value >= net.nodes[*k].dim)
      throw PreconditionError("evidence value out of range for node '" + id + "'");
    observed.emplace_back(*k, value);
  }

  const std::size_t n = net.nodes.size();
  std::vector<Index> outcome(n, 0);
  Eigen::VectorXd result = Eigen::VectorXd::Zero(net.nodes[*q].dim);
  double total = 0.0;
  for (bool more = true; more;) {
    const bool consistent = std::all_of(observed.begin(), observed.end(),
                                        [&](const auto& o) { return outcome[o.first] == o.second; });
    if (consistent) {
      double w = 1.0;
      for (const auto& t : tables) {
        Index local = 0;
        for (auto p : t.positions) local = local * net.nodes[p].dim + outcome[p];
        w *= t.weights(local);
      }
      result(outcome[*q]) += w;
      total += w;
    }
    // Odometer increment, last node fastest.
    more = false;
    for (std::size_t k = n; k-- > 0;) {
      if (++outcome[k] < net.nodes[k].dim) {
        more = true;
        break;
      }
      outcome[k] = 0;
    }
  }
  if (total <= tol::kEvidence) throw ImpossibleEvidence("classical_oracle: evidence has probability 0", total);
  return result / total;
}

}  // namespace qinfer
