#pragma once

// Dense kernel for operators on tensor-product spaces. Subsystem ordering is
// big-endian: for dims {d0, d1, ..., dk} the basis index of |i0 i1 ... ik> is
// i0*(d1*...*dk) + ... + ik.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qinfer/errors.hpp"

namespace qinfer {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

namespace tol {
/// Max-abs entry difference from the adjoint accepted as Hermitian.
inline constexpr double kHermitian = 1e-10;
/// Eigenvalues at or below kRankCut * max(lambda) count as zero.
inline constexpr double kRankCut = 1e-10;
/// Eigenvalues below -kNegativeClamp * max|lambda| mean "not PSD".
inline constexpr double kNegativeClamp = 1e-10;
/// Outcome probabilities at or below this are impossible evidence.
inline constexpr double kEvidence = 1e-12;
}  // namespace tol

/// Ordered subsystem dimensions of a tensor-product space.
class DimList {
 public:
  DimList() = default;
  DimList(std::initializer_list<Index> dims) : dims_(dims) { check(); }
  explicit DimList(std::vector<Index> dims) : dims_(std::move(dims)) { check(); }

  std::size_t size() const noexcept { return dims_.size(); }
  bool empty() const noexcept { return dims_.empty(); }
  Index operator[](std::size_t k) const { return dims_[k]; }
  auto begin() const noexcept { return dims_.begin(); }
  auto end() const noexcept { return dims_.end(); }
  const std::vector<Index>& values() const noexcept { return dims_; }

  /// Product of all dims; 1 for the empty list.
  Index total() const {
    return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>{});
  }

  DimList select(const std::vector<std::size_t>& positions) const {
    std::vector<Index> out;
    out.reserve(positions.size());
    for (auto p : positions) out.push_back(dims_.at(p));
    return DimList(std::move(out));
  }

  /// Positions {0..size-1} not listed in `positions`.
  std::vector<std::size_t> complement(const std::vector<std::size_t>& positions) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < dims_.size(); ++k)
      if (std::find(positions.begin(), positions.end(), k) == positions.end()) out.push_back(k);
    return out;
  }

  /// Digit of subsystem `pos` in the multi-index of basis state `index`.
  Index digit(Index index, std::size_t pos) const {
    Index stride = 1;
    for (std::size_t k = dims_.size(); k-- > pos + 1;) stride *= dims_[k];
    return (index / stride) % dims_[pos];
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
    os << ']';
    return os.str();
  }

  friend bool operator==(const DimList&, const DimList&) = default;

 private:
  void check() const {
    for (auto d : dims_)
      if (d < 1) throw DimensionMismatch("subsystem dimension must be >= 1, got " + std::to_string(d));
  }
  std::vector<Index> dims_;
};

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_order(Index order, const DimList& dims, const char* what) {
  if (dims.total() != order)
    throw DimensionMismatch(std::string(what) + ": dims " + dims.str() + " do not factor order " +
                            std::to_string(order));
}

/// Splits every basis index of `dims` into (index within the listed positions,
/// index within the remaining positions), both big-endian.
struct SubsystemSplit {
  std::vector<Index> inner;
  std::vector<Index> outer;
  Index inner_total = 1;
  Index outer_total = 1;

  SubsystemSplit(const DimList& dims, const std::vector<std::size_t>& listed) {
    std::vector<bool> is_listed(dims.size(), false);
    for (auto p : listed) {
      if (p >= dims.size())
        throw DimensionMismatch("subsystem index " + std::to_string(p) + " out of range for dims " +
                                dims.str());
      if (is_listed[p]) throw DimensionMismatch("subsystem index " + std::to_string(p) + " repeated");
      is_listed[p] = true;
    }
    for (std::size_t k = 0; k < dims.size(); ++k) (is_listed[k] ? inner_total : outer_total) *= dims[k];

    const Index n = dims.total();
    inner.resize(static_cast<std::size_t>(n));
    outer.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      Index in = 0, out = 0, rest = i;
      std::vector<Index> digits(dims.size());
      for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = rest % dims[k];
        rest /= dims[k];
      }
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (is_listed[k])
          in = in * dims[k] + digits[k];
        else
          out = out * dims[k] + digits[k];
      }
      inner[static_cast<std::size_t>(i)] = in;
      outer[static_cast<std::size_t>(i)] = out;
    }
  }
};

}  // namespace detail

/// Kronecker product; `a` supplies the most significant index block.
template <typename DA, typename DB>
Matrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  const Index br = b.rows(), bc = b.cols();
  Matrix<typename DA::Scalar> out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

/// Traces out the subsystems listed in `traced`. Tracing every subsystem
/// yields the 1x1 matrix [Tr m].
template <typename Derived>
Matrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, const DimList& dims,
                                               const std::vector<std::size_t>& traced) {
  detail::require_square(m, "partial_trace");
  detail::require_order(m.rows(), dims, "partial_trace");
  for (auto t : traced)
    if (t >= dims.size())
      throw DimensionMismatch("partial_trace: subsystem " + std::to_string(t) + " out of range for dims " + dims.str());
  const detail::SubsystemSplit split(dims, dims.complement(traced));
  Matrix<typename Derived::Scalar> out = Matrix<typename Derived::Scalar>::Zero(split.inner_total, split.inner_total);
  const Index n = m.rows();
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (split.outer[ui] == split.outer[uj]) out(split.inner[ui], split.inner[uj]) += m(i, j);
    }
  }
  return out;
}

/// `op` acting on the listed subsystems, identity on all others.
template <typename Derived>
Matrix<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived>& op, const DimList& dims,
                                       const std::vector<std::size_t>& positions) {
  detail::require_square(op, "embed");
  for (std::size_t k = 1; k < positions.size(); ++k)
    if (positions[k] <= positions[k - 1]) throw DimensionMismatch("embed: positions must be strictly increasing");
  const detail::SubsystemSplit split(dims, positions);
  if (op.rows() != split.inner_total)
    throw DimensionMismatch("embed: operator order " + std::to_string(op.rows()) +
                            " does not match listed subsystems of " + dims.str());
  const Index n = dims.total();
  Matrix<typename Derived::Scalar> out = Matrix<typename Derived::Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (split.outer[ui] == split.outer[uj]) out(i, j) = op(split.inner[ui], split.inner[uj]);
    }
  }
  return out;
}

/// |k><k| on a space of dimension `dim`.
template <typename Scalar = Complex>
Matrix<Scalar> basis_projector(Index dim, Index k) {
  if (k < 0 || k >= dim)
    throw PreconditionError("basis index " + std::to_string(k) + " out of range for dimension " + std::to_string(dim));
  Matrix<Scalar> p = Matrix<Scalar>::Zero(dim, dim);
  p(k, k) = Scalar(1);
  return p;
}

template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename DA, typename DB>
typename DA::RealScalar relative_frobenius(const Eigen::MatrixBase<DA>& actual, const Eigen::MatrixBase<DB>& expected) {
  const auto scale = std::max<typename DA::RealScalar>(expected.norm(), 1);
  return (actual - expected).norm() / scale;
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
template <typename Scalar>
struct HermEig {
  Vector<typename Eigen::NumTraits<Scalar>::Real> eigenvalues;
  Matrix<Scalar> eigenvectors;

  Matrix<Scalar> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<Scalar>().asDiagonal() * eigenvectors.adjoint();
  }
};

template <typename Derived>
HermEig<typename Derived::Scalar> herm_eig(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "herm_eig");
  if (const auto defect = hermitian_defect(m); defect > tol::kHermitian)
    throw PreconditionError("herm_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  const Matrix<Scalar> sym = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver did not converge");
  HermEig<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

namespace detail {

// Applies f to the eigenvalues above the rank cut and zero to the rest.
template <typename Derived, typename F>
Matrix<typename Derived::Scalar> psd_spectral_map(const Eigen::MatrixBase<Derived>& m, F f, const char* what) {
  using Scalar = typename Derived::Scalar;
  const auto eig = herm_eig(m);
  const double largest = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double smallest = eig.eigenvalues.minCoeff();
  if (smallest < -tol::kNegativeClamp * largest)
    throw NotPsdError(std::string(what) + ": matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(smallest) + ")",
                      smallest);
  Vector<Scalar> mapped(eig.eigenvalues.size());
  for (Index k = 0; k < mapped.size(); ++k) {
    const double lambda = eig.eigenvalues(k);
    mapped(k) = lambda > tol::kRankCut * largest ? Scalar(f(lambda)) : Scalar(0);
  }
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace detail

/// Principal square root of a PSD Hermitian matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  return detail::psd_spectral_map(m, [](double x) { return std::sqrt(x); }, "psd_sqrt");
}

/// Moore-Penrose pseudoinverse of a PSD Hermitian matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> pinv_psd(const Eigen::MatrixBase<Derived>& m) {
  return detail::psd_spectral_map(m, [](double x) { return 1.0 / x; }, "pinv_psd");
}

/// Orthogonal projector onto the support (range) of a PSD matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> support_projector(const Eigen::MatrixBase<Derived>& m) {
  return detail::psd_spectral_map(m, [](double) { return 1.0; }, "support_projector");
}

}  // namespace qinfer
