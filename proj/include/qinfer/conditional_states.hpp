#pragma once

#include <string>
#include <vector>

#include "qinfer/tensor_core.hpp"

namespace qinfer {

/// Trace-one positive semidefinite Hermitian operator on a tensor-product
/// space. Invariants are checked on construction.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix matrix, DimList dims);
  /// Single-subsystem state.
  explicit DensityOperator(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const DimList& dims() const noexcept { return dims_; }
  Index order() const noexcept { return matrix_.rows(); }
  /// Real parts of the diagonal: outcome probabilities in the computational basis.
  Eigen::VectorXd probabilities() const { return matrix_.diagonal().real(); }

 private:
  ComplexMatrix matrix_;
  DimList dims_;
};

/// Outcome `value` of a computational-basis measurement on `subsystem`.
struct BasisOutcome {
  std::size_t subsystem = 0;
  Index value = 0;
};

/// Positive operator rho_{T|P} on parents (P) and targets (T) with
/// Tr_T(rho_{T|P}) equal to the identity on P, or to the projector onto the
/// parent support when built from a rank-deficient joint.
///
/// Construction checks only structure (shape, partition of positions). The
/// numerical invariants are reported by violations(), so that malformed
/// operators read from files can be diagnosed rather than rejected outright.
class ConditionalOperator {
 public:
  ConditionalOperator(ComplexMatrix matrix, DimList dims, std::vector<std::size_t> parent_positions,
                      std::vector<std::size_t> target_positions);
  ConditionalOperator(ComplexMatrix matrix, DimList dims, std::vector<std::size_t> parent_positions,
                      std::vector<std::size_t> target_positions, ComplexMatrix parent_support);

  /// A root state viewed as a conditional with no parents.
  static ConditionalOperator from_state(const DensityOperator& state);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const DimList& dims() const noexcept { return dims_; }
  const std::vector<std::size_t>& parent_positions() const noexcept { return parents_; }
  const std::vector<std::size_t>& target_positions() const noexcept { return targets_; }
  DimList parent_dims() const { return dims_.select(parents_); }
  DimList target_dims() const { return dims_.select(targets_); }
  /// Projector on the parent space where the identity condition holds.
  const ComplexMatrix& parent_support() const noexcept { return support_; }

  /// Max-abs deviation of Tr_targets(matrix) from the parent support projector.
  double identity_defect() const;
  /// Empty iff Hermitian, PSD and the identity condition hold within `tolerance`.
  std::vector<std::string> violations(double tolerance = tol::kHermitian) const;

 private:
  ComplexMatrix matrix_;
  DimList dims_;
  std::vector<std::size_t> parents_;
  std::vector<std::size_t> targets_;
  ComplexMatrix support_;
};

/// b^{1/2} a b^{1/2}.
ComplexMatrix star(const ComplexMatrix& a, const ComplexMatrix& b);

/// rho_{T|P} = rho ⋆ (rho_P^{-1} ⊗ I_T), pseudoinverse on the parent marginal.
ConditionalOperator conditional_from_joint(const DensityOperator& joint, std::vector<std::size_t> parents);

/// rho = rho_{T|P} ⋆ (rho_P ⊗ I_T).
DensityOperator joint_from_conditional(const ConditionalOperator& cond, const DensityOperator& parent_state);

/// Normalized (I ⊗ |b><b| ⊗ I) rho (I ⊗ |b><b| ⊗ I).
DensityOperator project_evidence(const DensityOperator& state, const BasisOutcome& outcome);

/// Probability of `outcome` in `state`.
double outcome_probability(const DensityOperator& state, const BasisOutcome& outcome);

/// Reduced state on the kept subsystems, in their original order.
DensityOperator marginal(const DensityOperator& state, std::vector<std::size_t> keep);

/// Tr_P(rho_{T|P} ⋆ (rho_P ⊗ I_T)).
DensityOperator total_probability(const DensityOperator& parent, const ConditionalOperator& cond);

}  // namespace qinfer
