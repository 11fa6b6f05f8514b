#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qinfer/conditional_states.hpp"

namespace qinfer {

struct NodeSpec {
  std::string id;
  Index dim = 1;
  std::vector<std::string> parents;
};

/// Entangled joint state replacing the product of some root nodes' states.
/// `covers` is listed in node declaration order, matching the tensor order
/// of `state`.
struct JointOverride {
  std::vector<std::string> covers;
  DensityOperator state;
};

/// Quantum Bayesian network: a DAG of systems with one conditional operator
/// per node given its parents. Root nodes carry their state as a conditional
/// without parents.
///
/// A node's factor acts on the node and its parents, tensored in the order
/// the nodes are declared in `nodes` (not the order of `parents`).
struct AcausalNetwork {
  std::vector<NodeSpec> nodes;
  std::map<std::string, ConditionalOperator> conditionals;
  std::optional<JointOverride> joint_override;

  std::optional<std::size_t> index_of(const std::string& id) const;
  const NodeSpec& node(const std::string& id) const;
  DimList dims() const;
  /// Network positions of the node and its parents, ascending.
  std::vector<std::size_t> factor_positions(const std::string& id) const;
  bool covered_by_override(const std::string& id) const;
};

/// Node id to basis index, applied in the listed order.
using Evidence = std::vector<std::pair<std::string, Index>>;

struct Violation {
  std::string node;  // empty for network-wide problems
  std::string message;

  std::string str() const { return node.empty() ? message : "node '" + node + "': " + message; }
};

/// Every broken invariant of `net`; empty iff the network is valid.
std::vector<Violation> validate(const AcausalNetwork& net, double tolerance = tol::kHermitian);

/// Node indices such that every parent precedes its children; ties are
/// broken by declaration order. Throws ValidationError on a cycle.
std::vector<std::size_t> topological_order(const AcausalNetwork& net);

/// Factors embedded in the full space, in reverse topological order, with the
/// joint override (if any) standing in for the roots it covers.
std::vector<ComplexMatrix> embedded_factors(const AcausalNetwork& net);

/// ((f0 ⋆ f1) ⋆ f2) ⋆ ... normalized to unit trace.
DensityOperator fold_star(const std::vector<ComplexMatrix>& factors, const DimList& dims);

/// Joint state of all nodes: fold_star(embedded_factors(net)).
DensityOperator joint_state(const AcausalNetwork& net);

/// Reduced state of `query` after sequentially projecting onto each evidence
/// outcome.
DensityOperator posterior(const AcausalNetwork& net, const Evidence& evidence, const std::string& query);

/// Brute-force classical inference for networks whose factors are all
/// diagonal: enumerates joint outcomes and returns P(query | evidence).
Eigen::VectorXd classical_oracle(const AcausalNetwork& net, const Evidence& evidence, const std::string& query);

}  // namespace qinfer
