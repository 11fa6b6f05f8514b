#include "qinfer/conditional_states.hpp"

#include <algorithm>
#include <set>

namespace qinfer {
namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_valid_positions(const std::vector<std::size_t>& positions, const DimList& dims, const char* what) {
  for (auto p : positions)
    if (p >= dims.size())
      throw DimensionMismatch(std::string(what) + ": subsystem " + std::to_string(p) + " out of range for dims " +
                              dims.str());
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, DimList dims) : dims_(std::move(dims)) {
  detail::require_square(matrix, "DensityOperator");
  detail::require_order(matrix.rows(), dims_, "DensityOperator");
  if (const double defect = hermitian_defect(matrix); defect > tol::kHermitian)
    throw PreconditionError("DensityOperator: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  matrix_ = hermitian_part(matrix);
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > tol::kHermitian)
    throw PreconditionError("DensityOperator: trace is " + std::to_string(trace) + ", expected 1");
  const double smallest = herm_eig(matrix_).eigenvalues.minCoeff();
  if (smallest < -tol::kHermitian)
    throw NotPsdError("DensityOperator: negative eigenvalue " + std::to_string(smallest), smallest);
}

DensityOperator::DensityOperator(ComplexMatrix matrix)
    : DensityOperator(matrix, DimList{static_cast<Index>(matrix.rows())}) {}

ConditionalOperator::ConditionalOperator(ComplexMatrix matrix, DimList dims, std::vector<std::size_t> parent_positions,
                                         std::vector<std::size_t> target_positions)
    : ConditionalOperator(std::move(matrix), dims, parent_positions, std::move(target_positions),
                          ComplexMatrix::Identity(dims.select(parent_positions).total(),
                                                  dims.select(parent_positions).total())) {}

ConditionalOperator::ConditionalOperator(ComplexMatrix matrix, DimList dims, std::vector<std::size_t> parent_positions,
                                         std::vector<std::size_t> target_positions, ComplexMatrix parent_support)
    : matrix_(std::move(matrix)),
      dims_(std::move(dims)),
      parents_(sorted_unique(std::move(parent_positions))),
      targets_(sorted_unique(std::move(target_positions))),
      support_(std::move(parent_support)) {
  detail::require_square(matrix_, "ConditionalOperator");
  detail::require_order(matrix_.rows(), dims_, "ConditionalOperator");
  require_valid_positions(parents_, dims_, "ConditionalOperator");
  require_valid_positions(targets_, dims_, "ConditionalOperator");
  if (targets_.empty()) throw DimensionMismatch("ConditionalOperator: at least one target subsystem is required");
  std::set<std::size_t> all(parents_.begin(), parents_.end());
  all.insert(targets_.begin(), targets_.end());
  if (all.size() != dims_.size() || parents_.size() + targets_.size() != dims_.size())
    throw DimensionMismatch("ConditionalOperator: parent and target positions must partition the subsystems " +
                            dims_.str());
  const Index parent_total = parent_dims().total();
  if (support_.rows() != parent_total || support_.cols() != parent_total)
    throw DimensionMismatch("ConditionalOperator: parent support has the wrong order");
}

ConditionalOperator ConditionalOperator::from_state(const DensityOperator& state) {
  std::vector<std::size_t> targets(state.dims().size());
  for (std::size_t k = 0; k < targets.size(); ++k) targets[k] = k;
  return ConditionalOperator(state.matrix(), state.dims(), {}, std::move(targets));
}

double ConditionalOperator::identity_defect() const {
  return (partial_trace(matrix_, dims_, targets_) - support_).cwiseAbs().maxCoeff();
}

std::vector<std::string> ConditionalOperator::violations(double tolerance) const {
  std::vector<std::string> out;
  const double defect = hermitian_defect(matrix_);
  if (defect > tolerance) {
    out.push_back("not Hermitian (defect " + std::to_string(defect) + ")");
    return out;
  }
  const auto eig = herm_eig(hermitian_part(matrix_));
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues.minCoeff() < -tolerance * scale)
    out.push_back("not positive semidefinite (min eigenvalue " + std::to_string(eig.eigenvalues.minCoeff()) + ")");
  if (const double id = identity_defect(); id > tolerance)
    out.push_back("partial trace over targets is not the identity on parents (defect " + std::to_string(id) + ")");
  return out;
}

ComplexMatrix star(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_square(a, "star");
  detail::require_square(b, "star");
  if (a.rows() != b.rows())
    throw DimensionMismatch("star: order mismatch " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  const ComplexMatrix root = psd_sqrt(b);
  return root * a * root;
}

ConditionalOperator conditional_from_joint(const DensityOperator& joint, std::vector<std::size_t> parents) {
  parents = sorted_unique(std::move(parents));
  require_valid_positions(parents, joint.dims(), "conditional_from_joint");
  if (parents.empty() || parents.size() >= joint.dims().size())
    throw DimensionMismatch("conditional_from_joint: parents must be a non-empty proper subset of subsystems");
  const auto targets = joint.dims().complement(parents);
  const ComplexMatrix parent_marginal = partial_trace(joint.matrix(), joint.dims(), targets);
  const ComplexMatrix inverse = embed(pinv_psd(parent_marginal), joint.dims(), parents);
  return ConditionalOperator(hermitian_part(star(joint.matrix(), inverse)), joint.dims(), parents, targets,
                             support_projector(parent_marginal));
}

DensityOperator joint_from_conditional(const ConditionalOperator& cond, const DensityOperator& parent_state) {
  const DimList parent_dims = cond.parent_dims();
  if (parent_state.order() != parent_dims.total())
    throw DimensionMismatch("joint_from_conditional: parent state order " + std::to_string(parent_state.order()) +
                            " does not match parent dims " + parent_dims.str());
  const ComplexMatrix lifted = embed(parent_state.matrix(), cond.dims(), cond.parent_positions());
  return DensityOperator(hermitian_part(star(cond.matrix(), lifted)), cond.dims());
}

double outcome_probability(const DensityOperator& state, const BasisOutcome& outcome) {
  const DimList& dims = state.dims();
  if (outcome.subsystem >= dims.size())
    throw DimensionMismatch("evidence subsystem " + std::to_string(outcome.subsystem) + " out of range for dims " +
                            dims.str());
  if (outcome.value < 0 || outcome.value >= dims[outcome.subsystem])
    throw PreconditionError("evidence value " + std::to_string(outcome.value) + " out of range for subsystem " +
                            std::to_string(outcome.subsystem) + " of dimension " +
                            std::to_string(dims[outcome.subsystem]));
  double p = 0.0;
  for (Index i = 0; i < state.order(); ++i)
    if (dims.digit(i, outcome.subsystem) == outcome.value) p += state.matrix()(i, i).real();
  return p;
}

DensityOperator project_evidence(const DensityOperator& state, const BasisOutcome& outcome) {
  const double p = outcome_probability(state, outcome);
  if (p <= tol::kEvidence)
    throw ImpossibleEvidence("impossible evidence: subsystem " + std::to_string(outcome.subsystem) + " = " +
                                 std::to_string(outcome.value) + " has probability " + std::to_string(p),
                             p);
  const DimList& dims = state.dims();
  const Index n = state.order();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (dims.digit(i, outcome.subsystem) != outcome.value) continue;
    for (Index j = 0; j < n; ++j)
      if (dims.digit(j, outcome.subsystem) == outcome.value) out(i, j) = state.matrix()(i, j) / p;
  }
  return DensityOperator(std::move(out), dims);
}

DensityOperator marginal(const DensityOperator& state, std::vector<std::size_t> keep) {
  keep = sorted_unique(std::move(keep));
  if (keep.empty()) throw PreconditionError("marginal: keep set is empty");
  require_valid_positions(keep, state.dims(), "marginal");
  return DensityOperator(partial_trace(state.matrix(), state.dims(), state.dims().complement(keep)),
                         state.dims().select(keep));
}

DensityOperator total_probability(const DensityOperator& parent, const ConditionalOperator& cond) {
  return marginal(joint_from_conditional(cond, parent), cond.target_positions());
}

}  // namespace qinfer
