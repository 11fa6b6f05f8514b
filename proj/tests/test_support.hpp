#pragma once

#include <algorithm>
#include <map>
#include <random>

#include "qinfer/acausal_network.hpp"

namespace qinfer::testing {

inline ComplexMatrix random_matrix(std::mt19937& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937& rng, Index n) {
  const ComplexMatrix g = random_matrix(rng, n);
  return (g + g.adjoint()) / 2.0;
}

/// G^dagger G for Gaussian G: PSD, full rank almost surely.
inline ComplexMatrix random_psd(std::mt19937& rng, Index n) {
  const ComplexMatrix g = random_matrix(rng, n);
  return g.adjoint() * g;
}

/// PSD of rank `rank` (< n gives a singular matrix).
inline ComplexMatrix random_low_rank_psd(std::mt19937& rng, Index n, Index rank) {
  std::normal_distribution<double> g;
  ComplexMatrix v(n, rank);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rank; ++j) v(i, j) = {g(rng), g(rng)};
  return v * v.adjoint();
}

inline DensityOperator random_state(std::mt19937& rng, const DimList& dims) {
  ComplexMatrix m = random_psd(rng, dims.total());
  m /= m.trace().real();
  return DensityOperator(m, dims);
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix diag(std::initializer_list<double> values) {
  Eigen::VectorXcd v(static_cast<Index>(values.size()));
  Index k = 0;
  for (double x : values) v(k++) = x;
  return v.asDiagonal();
}

/// Random probability vector; with `allow_zeros` some entries are exactly 0.
inline Eigen::VectorXd random_distribution(std::mt19937& rng, Index n, bool allow_zeros) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution drop(allow_zeros ? 0.25 : 0.0);
  Eigen::VectorXd p(n);
  for (Index k = 0; k < n; ++k) p(k) = drop(rng) ? 0.0 : u(rng);
  if (p.sum() == 0.0) p(0) = 1.0;
  return p / p.sum();
}

/// Random DAG of 1..3 nodes with dims in 2..3 whose factors are all diagonal.
/// Declaration order is shuffled so that it need not be topological.
inline AcausalNetwork random_diagonal_network(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(1, 3), dimension(2, 3);
  std::bernoulli_distribution edge(0.6), zeros(0.3);
  const int n = count(rng);
  std::vector<NodeSpec> specs;
  for (int k = 0; k < n; ++k) {
    NodeSpec s{std::string(1, static_cast<char>('P' + k)), dimension(rng), {}};
    for (int p = 0; p < k; ++p)
      if (edge(rng)) s.parents.push_back(specs[static_cast<std::size_t>(p)].id);
    specs.push_back(std::move(s));
  }
  std::shuffle(specs.begin(), specs.end(), rng);
  AcausalNetwork net;
  net.nodes = specs;
  const DimList all = net.dims();
  for (const auto& s : net.nodes) {
    const auto positions = net.factor_positions(s.id);
    const DimList dims = all.select(positions);
    const std::size_t self = static_cast<std::size_t>(
        std::find(positions.begin(), positions.end(), *net.index_of(s.id)) - positions.begin());
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dims.total());
    // One distribution over the node's values per parent configuration.
    const bool sparse = zeros(rng);
    std::map<std::vector<Index>, Eigen::VectorXd> tables;
    for (Index i = 0; i < dims.total(); ++i) {
      std::vector<Index> parent_digits;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (k != self) parent_digits.push_back(dims.digit(i, k));
      auto it = tables.find(parent_digits);
      if (it == tables.end()) it = tables.emplace(parent_digits, random_distribution(rng, s.dim, sparse)).first;
      d(i) = it->second(dims.digit(i, self));
    }
    std::vector<std::size_t> parents, targets;
    for (std::size_t k = 0; k < positions.size(); ++k) (k == self ? targets : parents).push_back(k);
    net.conditionals.emplace(s.id, ConditionalOperator(d.cast<Complex>().asDiagonal(), dims, parents, targets));
  }
  return net;
}

}  // namespace qinfer::testing
