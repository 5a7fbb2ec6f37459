#pragma once

#include <cmath>
#include <limits>

#include "excidyn/correlations.hpp"
#include "excidyn/fmo.hpp"
#include "excidyn/hilbert.hpp"

namespace excidyn {

struct ThermoContext {
  double temperature_K = 300.0;
  double kB_cm1_per_K = UnitSystem::codata().kB_cm1_per_K;

  void validate() const {
    if (!(temperature_K > 0.0) || !std::isfinite(temperature_K))
      throw numeric_error("DomainError", "ThermoContext: temperature must be > 0");
  }
};

// tr[rho (ln rho - ln sigma)] in nats over common support; +infinity when
// rho has weight outside sigma's support (eigenvalue threshold 1e-12).
inline double relative_entropy(const DensityMatrix& rho,
                               const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw numeric_error("DimensionMismatch", "relative_entropy: dimensions");
  HermitianEig rho_eig = hermitian_eig(rho.matrix());
  HermitianEig sigma_eig = hermitian_eig(sigma.matrix());

  double term_rho = 0.0;
  for (Eigen::Index i = 0; i < rho_eig.eigenvalues.size(); ++i) {
    double r = rho_eig.eigenvalues[i];
    if (r > tolerances::entropy_eigenvalue_floor) term_rho += r * std::log(r);
  }

  double term_cross = 0.0;
  for (Eigen::Index j = 0; j < sigma_eig.eigenvalues.size(); ++j) {
    double s = sigma_eig.eigenvalues[j];
    ComplexVector w = sigma_eig.eigenvectors.col(j);
    double weight = std::max(0.0, (w.adjoint() * rho.matrix() * w)(0).real());
    if (s <= tolerances::support) {
      if (weight > tolerances::support)
        return std::numeric_limits<double>::infinity();
      continue;
    }
    term_cross += weight * std::log(s);
  }

  double d = term_rho - term_cross;
  if (d < 0.0 && d > -1e-10) d = 0.0;  // scrub round-off at D = 0
  return d;
}

struct WorkReport {
  double dissipated_work_cm1 = 0.0;
  double entropy_production_nats = 0.0;
  double relative_entropy_nats = 0.0;
  bool infinite = false;
};

// <W>_diss = kB T D(rho || rho_reversed); Delta S / kB = D(rho || rho_reversed).
// The reversed-process state is caller-supplied.
inline WorkReport dissipated_work(const DensityMatrix& rho,
                                  const DensityMatrix& rho_reversed,
                                  const ThermoContext& ctx) {
  ctx.validate();
  double d = relative_entropy(rho, rho_reversed);
  WorkReport report;
  report.relative_entropy_nats = d;
  report.entropy_production_nats = d;
  report.infinite = std::isinf(d);
  report.dissipated_work_cm1 = ctx.kB_cm1_per_K * ctx.temperature_K * d;
  return report;
}

struct LostWorkReport {
  double lost_work_cm1 = 0.0;
  double mutual_info_before_bits = 0.0;
  double mutual_info_after_bits = 0.0;
  bool negative = false;  // flagged, never clamped
};

// W_lost = kB T ln2 [I(S:X) - I(S:X')] for a transition that leaves the system
// marginal fixed while the environment piece X evolves through a channel.
inline LostWorkReport predictive_lost_work(const DensityMatrix& before,
                                           const DensityMatrix& after,
                                           Eigen::Index dS, Eigen::Index dX,
                                           const ThermoContext& ctx,
                                           double marginal_tol = 1e-8) {
  ctx.validate();
  if (before.dim() != after.dim() || dS * dX != before.dim())
    throw numeric_error("DimensionMismatch", "predictive_lost_work: dimensions");
  ComplexMatrix sys_before =
      partial_trace_matrix(before.matrix(), {dS, dX}, {0});
  ComplexMatrix sys_after = partial_trace_matrix(after.matrix(), {dS, dX}, {0});
  double drift = (sys_before - sys_after).cwiseAbs().maxCoeff();
  if (drift > marginal_tol)
    throw numeric_error("MarginalChanged",
                        "predictive_lost_work: system marginal drifted by " +
                            std::to_string(drift));
  LostWorkReport report;
  report.mutual_info_before_bits = mutual_information(before, dS, dX);
  report.mutual_info_after_bits = mutual_information(after, dS, dX);
  report.lost_work_cm1 =
      ctx.kB_cm1_per_K * ctx.temperature_K * std::numbers::ln2 *
      (report.mutual_info_before_bits - report.mutual_info_after_bits);
  report.negative = report.lost_work_cm1 < 0.0;
  return report;
}

// exp(-h / kB T) normalized; spectrum shifted by its minimum before
// exponentiation so large gaps cannot underflow the whole trace.
inline DensityMatrix thermal_state(const ComplexMatrix& h_cm1,
                                   const ThermoContext& ctx) {
  ctx.validate();
  HermitianEig eig = hermitian_eig(h_cm1);
  double beta = 1.0 / (ctx.kB_cm1_per_K * ctx.temperature_K);
  double e_min = eig.eigenvalues.minCoeff();
  RealVector weights(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    weights[i] = std::exp(-beta * (eig.eigenvalues[i] - e_min));
  weights /= weights.sum();
  ComplexMatrix rho = eig.eigenvectors * weights.asDiagonal() *
                      eig.eigenvectors.adjoint();
  return DensityMatrix::from_matrix(std::move(rho));
}

}  // namespace excidyn
