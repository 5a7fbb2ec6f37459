#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "excidyn/hilbert.hpp"

namespace excidyn {

enum class StateFamily { w, ghz, general };

// Qubit 1 is the leftmost tensor factor; basis index is the binary number
// with qubit 1 as the most significant bit. n is capped at 12 to stay inside
// the dense-matrix scope.
inline constexpr int max_qubits = 12;

struct MultiQubitState {
  int n_qubits = 0;
  StateVector vector;
  StateFamily family = StateFamily::general;
};

namespace detail {

inline void check_qubit_count(int n) {
  if (n < 2)
    throw numeric_error("TooFewQubits",
                        "multi-qubit state needs n >= 2, got " + std::to_string(n));
  if (n > max_qubits)
    throw numeric_error("DomainError",
                        "multi-qubit state capped at n = " +
                            std::to_string(max_qubits));
}

inline std::vector<std::string> qubit_basis_labels(int n) {
  Eigen::Index dim = Eigen::Index(1) << n;
  std::vector<std::string> labels(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
      if (i & (Eigen::Index(1) << (n - 1 - q))) bits[static_cast<std::size_t>(q)] = '1';
    labels[static_cast<std::size_t>(i)] = bits;
  }
  return labels;
}

}  // namespace detail

// Symmetric single-excitation state: amplitude 1/sqrt(n) on every
// Hamming-weight-1 basis state.
inline MultiQubitState w_state(int n) {
  detail::check_qubit_count(n);
  Eigen::Index dim = Eigen::Index(1) << n;
  ComplexVector amps = ComplexVector::Zero(dim);
  double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int q = 1; q <= n; ++q) amps[Eigen::Index(1) << (n - q)] = a;
  return MultiQubitState{n, StateVector(std::move(amps),
                                        detail::qubit_basis_labels(n)),
                         StateFamily::w};
}

// alpha |0...0> + beta |1...1>, |alpha|^2 + |beta|^2 = 1.
inline MultiQubitState ghz_state(int n, Complex alpha, Complex beta) {
  detail::check_qubit_count(n);
  double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > tolerances::unit_norm)
    throw numeric_error("NotNormalized",
                        "ghz_state: |alpha|^2 + |beta|^2 = " +
                            std::to_string(norm2));
  Eigen::Index dim = Eigen::Index(1) << n;
  ComplexVector amps = ComplexVector::Zero(dim);
  amps[0] = alpha;
  amps[dim - 1] = beta;
  return MultiQubitState{n, StateVector(std::move(amps),
                                        detail::qubit_basis_labels(n)),
                         StateFamily::ghz};
}

// coefficient k goes on the basis state with qubit k excited.
inline MultiQubitState general_single_excitation(
    const std::vector<Complex>& coeffs) {
  int n = static_cast<int>(coeffs.size());
  detail::check_qubit_count(n);
  double norm2 = 0.0;
  for (Complex c : coeffs) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > tolerances::unit_norm)
    throw numeric_error("NotNormalized",
                        "general_single_excitation: sum |c|^2 = " +
                            std::to_string(norm2));
  Eigen::Index dim = Eigen::Index(1) << n;
  ComplexVector amps = ComplexVector::Zero(dim);
  for (int q = 1; q <= n; ++q)
    amps[Eigen::Index(1) << (n - q)] = coeffs[static_cast<std::size_t>(q - 1)];
  return MultiQubitState{n, StateVector(std::move(amps),
                                        detail::qubit_basis_labels(n)),
                         StateFamily::general};
}

// Reduced state of qubits (a, b), 1-based, a < b after sorting.
inline DensityMatrix reduce_to_pair(const MultiQubitState& state, int qubit_a,
                                    int qubit_b) {
  if (qubit_a == qubit_b || qubit_a < 1 || qubit_b < 1 ||
      qubit_a > state.n_qubits || qubit_b > state.n_qubits)
    throw numeric_error("DomainError", "reduce_to_pair: bad qubit indices");
  DensityMatrix full = DensityMatrix::pure(state.vector);
  std::vector<Eigen::Index> dims(static_cast<std::size_t>(state.n_qubits), 2);
  return partial_trace(full, dims,
                       {Eigen::Index(std::min(qubit_a, qubit_b) - 1),
                        Eigen::Index(std::max(qubit_a, qubit_b) - 1)});
}

}  // namespace excidyn
