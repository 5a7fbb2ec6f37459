#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "excidyn/hilbert.hpp"
#include "excidyn/lindblad.hpp"

namespace excidyn {

struct MeasurePoint {
  double t_ps = 0.0;
  double value = 0.0;
  std::string label;
};

// D(r1, r2) = 1/2 ||r1 - r2||_1
inline double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.dim() != r2.dim())
    throw numeric_error("DimensionMismatch", "trace_distance: unequal dimensions");
  return 0.5 * trace_norm(r1.matrix() - r2.matrix());
}

// Accumulated trace-distance revivals over a shared grid:
// N = sum_k max(0, D(t_{k+1}) - D(t_k)). A lower bound tied to the supplied
// initial pair; the supremum over pairs is out of scope.
inline double blp_nonmarkovianity(const Trajectory& a, const Trajectory& b) {
  if (a.times_ps().size() != b.times_ps().size())
    throw numeric_error("GridMismatch", "blp_nonmarkovianity: grid sizes differ");
  for (std::size_t i = 0; i < a.times_ps().size(); ++i)
    if (a.times_ps()[i] != b.times_ps()[i])
      throw numeric_error("GridMismatch",
                          "blp_nonmarkovianity: grids differ at index " +
                              std::to_string(i));
  double total = 0.0;
  double prev = trace_distance(a.states()[0], b.states()[0]);
  for (std::size_t i = 1; i < a.states().size(); ++i) {
    double cur = trace_distance(a.states()[i], b.states()[i]);
    if (cur > prev) total += cur - prev;
    prev = cur;
  }
  return total;
}

// Qubit channel induced by the excited-state amplitude u:
//   rho11 -> |u|^2 rho11, rho10 -> u rho10, rho00 -> rho00 + (1-|u|^2) rho11.
// CPTP for |u| <= 1. Basis order (|0>, |1>).
class AmplitudeDampingChannel {
 public:
  explicit AmplitudeDampingChannel(Complex u) : u_(u) {
    if (std::abs(u) > 1.0 + 1e-9)
      throw numeric_error("SupNormViolation",
                          "amplitude_damping_channel: |u| = " +
                              std::to_string(std::abs(u)));
  }

  Complex u() const { return u_; }

  ComplexMatrix apply_matrix(const ComplexMatrix& rho) const {
    if (rho.rows() != 2 || rho.cols() != 2)
      throw numeric_error("WrongDimension",
                          "amplitude_damping_channel: expects a qubit state");
    double p = std::min(std::norm(u_), 1.0);
    ComplexMatrix out(2, 2);
    out(1, 1) = p * rho(1, 1);
    out(0, 0) = rho(0, 0) + (1.0 - p) * rho(1, 1);
    out(1, 0) = u_ * rho(1, 0);
    out(0, 1) = std::conj(u_) * rho(0, 1);
    return out;
  }

  DensityMatrix operator()(const DensityMatrix& rho) const {
    return DensityMatrix::from_matrix(apply_matrix(rho.matrix()),
                                      rho.basis_labels());
  }

 private:
  Complex u_;
};

inline AmplitudeDampingChannel amplitude_damping_channel(Complex u) {
  return AmplitudeDampingChannel(u);
}

// -sum lambda log2 lambda over eigenvalues above the floor (0 log 0 = 0).
inline double von_neumann_entropy(const DensityMatrix& rho) {
  HermitianEig eig = hermitian_eig(rho.matrix());
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double lambda = eig.eigenvalues[i];
    if (lambda > tolerances::entropy_eigenvalue_floor)
      s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

namespace detail {

inline DensityMatrix reduce_bipartite(const DensityMatrix& ab, Eigen::Index dA,
                                      Eigen::Index dB, int keep_subsystem) {
  if (dA * dB != ab.dim())
    throw numeric_error("DimensionMismatch",
                        "bipartite reduction: dA*dB != dim");
  return partial_trace(ab, {dA, dB}, {keep_subsystem});
}

}  // namespace detail

// I(A:B) = S(A) + S(B) - S(AB), bits.
inline double mutual_information(const DensityMatrix& ab, Eigen::Index dA,
                                 Eigen::Index dB) {
  DensityMatrix a = detail::reduce_bipartite(ab, dA, dB, 0);
  DensityMatrix b = detail::reduce_bipartite(ab, dA, dB, 1);
  return std::max(0.0, von_neumann_entropy(a) + von_neumann_entropy(b) -
                           von_neumann_entropy(ab));
}

enum class Subsystem { A, B };

// S(AB) - S(conditioning subsystem); may be negative on entangled states.
inline double conditional_entropy(const DensityMatrix& ab, Eigen::Index dA,
                                  Eigen::Index dB,
                                  Subsystem conditioned_on = Subsystem::B) {
  DensityMatrix marginal = detail::reduce_bipartite(
      ab, dA, dB, conditioned_on == Subsystem::B ? 1 : 0);
  return von_neumann_entropy(ab) - von_neumann_entropy(marginal);
}

// Two-qubit concurrence from the spin-flipped spectrum:
// mu_i = decreasing sqrt eigenvalues of rho (sy(x)sy) rho* (sy(x)sy).
inline double concurrence(const DensityMatrix& ab) {
  if (ab.dim() != 4)
    throw numeric_error("WrongDimension", "concurrence: expects a 4x4 state");
  ComplexMatrix syy(4, 4);
  syy.setZero();
  // sigma_y (x) sigma_y = antidiag(-1, 1, 1, -1)
  syy(0, 3) = -1.0;
  syy(1, 2) = 1.0;
  syy(2, 1) = 1.0;
  syy(3, 0) = -1.0;
  ComplexMatrix flipped = syy * ab.matrix().conjugate() * syy;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(ab.matrix() * flipped);
  std::array<double, 4> mu{};
  for (int i = 0; i < 4; ++i)
    mu[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, solver.eigenvalues()[i].real()));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

struct DiscordDecomposition {
  double mutual_info_bits = 0.0;
  double classical_corr_bits = 0.0;
  double discord_bits = 0.0;
  Subsystem measured_subsystem = Subsystem::B;
  double best_theta = 0.0;  // Bloch direction of the optimal projective basis
  double best_phi = 0.0;
};

namespace detail {

inline double entropy2_bits(double a, double d, Complex off) {
  // eigenvalues of [[a, off],[conj(off), d]]
  double mean = 0.5 * (a + d);
  double disc = std::sqrt(std::max(0.0, mean * mean - (a * d - std::norm(off))));
  double l1 = mean + disc, l2 = mean - disc;
  double s = 0.0;
  if (l1 > tolerances::entropy_eigenvalue_floor) s -= l1 * std::log2(l1);
  if (l2 > tolerances::entropy_eigenvalue_floor) s -= l2 * std::log2(l2);
  return std::max(s, 0.0);
}

// Average conditional entropy of A after measuring B along (theta, phi).
// rho indexed with A as the leftmost factor.
inline double avg_conditional_entropy(const ComplexMatrix& rho, double theta,
                                      double phi) {
  Complex e_iphi = std::polar(1.0, phi);
  std::array<std::array<Complex, 2>, 2> kets = {{
      {std::cos(theta / 2.0), e_iphi * std::sin(theta / 2.0)},
      {-std::conj(e_iphi) * std::sin(theta / 2.0), std::cos(theta / 2.0)},
  }};
  double total = 0.0;
  for (const auto& v : kets) {
    // (I (x) <v|) rho (I (x) |v>)
    Complex a = 0.0, d = 0.0, off = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        Complex w = std::conj(v[static_cast<std::size_t>(k)]) *
                    v[static_cast<std::size_t>(l)];
        a += w * rho(0 * 2 + k, 0 * 2 + l);
        d += w * rho(1 * 2 + k, 1 * 2 + l);
        off += w * rho(0 * 2 + k, 1 * 2 + l);
      }
    double p = a.real() + d.real();
    if (p < 1e-14) continue;
    total += p * entropy2_bits(a.real() / p, d.real() / p, off / p);
  }
  return total;
}

inline ComplexMatrix swap_bipartite_qubits(const ComplexMatrix& m) {
  ComplexMatrix out(4, 4);
  auto sw = [](Eigen::Index x) { return ((x & 1) << 1) | (x >> 1); };
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) out(sw(i), sw(j)) = m(i, j);
  return out;
}

}  // namespace detail

// J(A:B) maximized over rank-1 projective measurements of the chosen qubit:
// coarse 64x128 direction grid, then compass refinement to step < 1e-4 rad.
// Discord = I - J. General POVMs are out of scope.
inline DiscordDecomposition discord_two_qubit(const DensityMatrix& ab,
                                              Subsystem measured = Subsystem::B) {
  if (ab.dim() != 4)
    throw numeric_error("WrongDimension", "discord_two_qubit: expects 4x4 state");
  ComplexMatrix rho = measured == Subsystem::B
                          ? ab.matrix()
                          : detail::swap_bipartite_qubits(ab.matrix());

  DensityMatrix rho_dm = DensityMatrix::from_matrix(rho);
  double mutual = mutual_information(rho_dm, 2, 2);
  double entropy_a =
      von_neumann_entropy(detail::reduce_bipartite(rho_dm, 2, 2, 0));

  constexpr int n_theta = 64, n_phi = 128;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    double theta = std::numbers::pi * static_cast<double>(i) / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / n_phi;
      double value = detail::avg_conditional_entropy(rho, theta, phi);
      if (value < best) {
        best = value;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  double step = std::numbers::pi / (n_theta - 1);
  while (step >= 1e-4) {
    bool improved = false;
    const std::array<std::array<double, 2>, 4> moves = {
        {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}};
    for (const auto& mv : moves) {
      double theta = std::clamp(best_theta + mv[0], 0.0, std::numbers::pi);
      double phi = best_phi + mv[1];
      if (phi < 0.0) phi += 2.0 * std::numbers::pi;
      if (phi >= 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
      double value = detail::avg_conditional_entropy(rho, theta, phi);
      if (value < best - 1e-15) {
        best = value;
        best_theta = theta;
        best_phi = phi;
        improved = true;
      }
    }
    if (!improved) step /= 2.0;
  }

  DiscordDecomposition out;
  out.measured_subsystem = measured;
  out.mutual_info_bits = mutual;
  out.classical_corr_bits = std::max(0.0, entropy_a - best);
  out.discord_bits = out.mutual_info_bits - out.classical_corr_bits;
  out.best_theta = best_theta;
  out.best_phi = best_phi;
  return out;
}

}  // namespace excidyn
