#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "excidyn/errors.hpp"

namespace excidyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default tolerances. Every operation that checks one of these accepts it as
// a defaulted argument, so callers can tighten or relax per call site.
namespace tolerances {
inline constexpr double hermiticity = 1e-10;
inline constexpr double unit_trace = 1e-10;
inline constexpr double positivity = 1e-8;
inline constexpr double unit_norm = 1e-10;
inline constexpr double entropy_eigenvalue_floor = 1e-14;
inline constexpr double support = 1e-12;
}  // namespace tolerances

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

// max_ij |m - m^dagger|
inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_square(const ComplexMatrix& m, const char* where) {
  if (m.rows() != m.cols())
    throw numeric_error("NotSquare", std::string(where) + ": matrix is " +
                                         std::to_string(m.rows()) + "x" +
                                         std::to_string(m.cols()));
}

inline void require_hermitian(const ComplexMatrix& m, const char* where,
                              double tol = tolerances::hermiticity) {
  require_square(m, where);
  double defect = hermiticity_defect(m);
  if (defect > tol)
    throw numeric_error("NotHermitian",
                        std::string(where) + ": max |m - m^dagger| = " +
                            std::to_string(defect) + " exceeds " +
                            std::to_string(tol));
}

struct HermitianEig {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, orthonormal, aligned with eigenvalues
};

// Eigendecomposition of a Hermitian matrix (tridiagonalization + implicit QL/QR
// via Eigen's selfadjoint solver; bitwise deterministic for fixed input on a
// fixed platform).
inline HermitianEig hermitian_eig(const ComplexMatrix& m,
                                  double tol = tolerances::hermiticity) {
  require_hermitian(m, "hermitian_eig", tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw numeric_error("EigFailed", "hermitian_eig: solver did not converge");
  return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

// f applied to the spectrum: V f(Lambda) V^dagger. Result is re-Hermitized to
// scrub round-off.
template <class F>
ComplexMatrix matrix_function(const ComplexMatrix& m, F&& f,
                              double tol = tolerances::hermiticity) {
  HermitianEig eig = hermitian_eig(m, tol);
  RealVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double v = f(eig.eigenvalues[i]);
    if (!std::isfinite(v))
      throw numeric_error("DomainError",
                          "matrix_function: map undefined at eigenvalue " +
                              std::to_string(eig.eigenvalues[i]));
    mapped[i] = v;
  }
  ComplexMatrix r = eig.eigenvectors * mapped.asDiagonal() *
                    eig.eigenvectors.adjoint();
  return 0.5 * (r + r.adjoint().eval());
}

// Kronecker product, row-major index convention:
// (a (x) b)[i*p+k, j*q+l] = a[i,j] * b[k,l] for b of shape p x q.
inline ComplexMatrix tensor_product(const ComplexMatrix& a,
                                    const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Sum of singular values. For Hermitian input this equals the sum of
// |eigenvalues| (checked as a test property, not assumed here).
inline double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

namespace detail {

// Mixed-radix strides for a composite space; subsystem 0 is the leftmost
// (most significant) tensor factor.
inline std::vector<Eigen::Index> subsystem_strides(
    const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> strides(dims.size());
  Eigen::Index acc = 1;
  for (std::size_t s = dims.size(); s-- > 0;) {
    strides[s] = acc;
    acc *= dims[s];
  }
  return strides;
}

}  // namespace detail

// Partial trace over the complement of `keep`. Subsystem order in the result
// follows ascending original subsystem index.
inline ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                          const std::vector<Eigen::Index>& dims,
                                          std::vector<Eigen::Index> keep) {
  require_square(m, "partial_trace");
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d <= 0)
      throw numeric_error("DimensionMismatch",
                          "partial_trace: nonpositive subsystem dimension");
    total *= d;
  }
  if (total != m.rows())
    throw numeric_error("DimensionMismatch",
                        "partial_trace: product of dims " +
                            std::to_string(total) + " != matrix dim " +
                            std::to_string(m.rows()));
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty())
    throw numeric_error("DimensionMismatch", "partial_trace: empty keep set");
  for (Eigen::Index s : keep)
    if (s < 0 || s >= static_cast<Eigen::Index>(dims.size()))
      throw numeric_error("DimensionMismatch",
                          "partial_trace: keep index " + std::to_string(s) +
                              " out of range");

  std::vector<Eigen::Index> strides = detail::subsystem_strides(dims);
  std::vector<Eigen::Index> traced;
  for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(dims.size()); ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

  Eigen::Index kept_dim = 1;
  for (Eigen::Index s : keep) kept_dim *= dims[s];
  Eigen::Index traced_dim = 1;
  for (Eigen::Index s : traced) traced_dim *= dims[s];

  // Flat offset of the c-th kept (resp. traced) multi-index in the full space.
  auto offsets = [&](const std::vector<Eigen::Index>& subs, Eigen::Index count) {
    std::vector<Eigen::Index> off(count, 0);
    for (Eigen::Index c = 0; c < count; ++c) {
      Eigen::Index rem = c;
      for (std::size_t s = subs.size(); s-- > 0;) {
        off[c] += (rem % dims[subs[s]]) * strides[subs[s]];
        rem /= dims[subs[s]];
      }
    }
    return off;
  };
  std::vector<Eigen::Index> kept_off = offsets(keep, kept_dim);
  std::vector<Eigen::Index> traced_off = offsets(traced, traced_dim);

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index a = 0; a < kept_dim; ++a)
    for (Eigen::Index b = 0; b < kept_dim; ++b) {
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < traced_dim; ++t)
        sum += m(kept_off[a] + traced_off[t], kept_off[b] + traced_off[t]);
      out(a, b) = sum;
    }
  return out;
}

inline std::vector<std::string> default_basis_labels(Eigen::Index dim) {
  std::vector<std::string> labels(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    labels[static_cast<std::size_t>(i)] = std::to_string(i);
  return labels;
}

// Normalized pure state over a declared basis.
class StateVector {
 public:
  StateVector(ComplexVector amplitudes, std::vector<std::string> basis_labels = {},
              double norm_tol = tolerances::unit_norm)
      : amplitudes_(std::move(amplitudes)), labels_(std::move(basis_labels)) {
    if (amplitudes_.size() == 0)
      throw numeric_error("DimensionMismatch", "StateVector: empty amplitude list");
    if (!amplitudes_.allFinite())
      throw numeric_error("DomainError", "StateVector: non-finite amplitude");
    double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > norm_tol)
      throw numeric_error("NotNormalized",
                          "StateVector: norm " + std::to_string(norm) +
                              " differs from 1 beyond " + std::to_string(norm_tol));
    if (labels_.empty()) labels_ = default_basis_labels(amplitudes_.size());
    if (static_cast<Eigen::Index>(labels_.size()) != amplitudes_.size())
      throw numeric_error("DimensionMismatch",
                          "StateVector: label count != amplitude count");
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }

 private:
  ComplexVector amplitudes_;
  std::vector<std::string> labels_;
};

// Hermitian, unit-trace, positive-semidefinite matrix over a declared basis.
// Invariants are enforced at construction.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(ComplexMatrix m,
                                   std::vector<std::string> basis_labels = {},
                                   double herm_tol = tolerances::hermiticity,
                                   double trace_tol = tolerances::unit_trace,
                                   double pos_tol = tolerances::positivity) {
    require_square(m, "DensityMatrix");
    if (!m.allFinite())
      throw numeric_error("DomainError", "DensityMatrix: non-finite entry");
    double defect = hermiticity_defect(m);
    if (defect > herm_tol)
      throw numeric_error("NotHermitian",
                          "DensityMatrix: hermiticity defect " +
                              std::to_string(defect));
    double tr = m.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
      throw numeric_error("DomainError",
                          "DensityMatrix: trace " + std::to_string(tr) +
                              " differs from 1 beyond tolerance");
    ComplexMatrix sym = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym,
                                                        Eigen::EigenvaluesOnly);
    double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -pos_tol)
      throw numeric_error("PositivityBreach",
                          "DensityMatrix: min eigenvalue " +
                              std::to_string(min_eig));
    if (basis_labels.empty()) basis_labels = default_basis_labels(sym.rows());
    if (static_cast<Eigen::Index>(basis_labels.size()) != sym.rows())
      throw numeric_error("DimensionMismatch",
                          "DensityMatrix: label count != dimension");
    return DensityMatrix(std::move(sym), std::move(basis_labels), min_eig);
  }

  static DensityMatrix pure(const StateVector& psi) {
    ComplexMatrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return from_matrix(std::move(m), psi.basis_labels());
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  DensityMatrix(ComplexMatrix m, std::vector<std::string> labels, double min_eig)
      : matrix_(std::move(m)), labels_(std::move(labels)),
        min_eigenvalue_(min_eig) {}

  ComplexMatrix matrix_;
  std::vector<std::string> labels_;
  double min_eigenvalue_;
};

// Partial trace at the density-matrix level; result trace renormalization is
// not needed (the map is exactly trace preserving), validation only scrubs
// round-off.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<Eigen::Index>& dims,
                                   const std::vector<Eigen::Index>& keep) {
  ComplexMatrix reduced = partial_trace_matrix(rho.matrix(), dims, keep);
  return DensityMatrix::from_matrix(std::move(reduced));
}

}  // namespace excidyn
