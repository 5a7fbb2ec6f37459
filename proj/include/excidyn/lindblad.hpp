#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "excidyn/fmo.hpp"
#include "excidyn/hilbert.hpp"

namespace excidyn {

struct JumpOperator {
  ComplexMatrix op;
  double rate = 0.0;  // ps^-1
  std::string label;
};

// Coherent part (rad/ps) plus weighted jump operators over labeled levels.
class LindbladModel {
 public:
  LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpOperator> jump_ops,
                std::vector<std::string> level_labels = {})
      : hamiltonian_(std::move(hamiltonian)),
        jump_ops_(std::move(jump_ops)),
        labels_(std::move(level_labels)) {
    require_hermitian(hamiltonian_, "LindbladModel");
    for (const JumpOperator& j : jump_ops_) {
      if (j.op.rows() != hamiltonian_.rows() || j.op.cols() != hamiltonian_.cols())
        throw numeric_error("DimensionMismatch",
                            "LindbladModel: jump operator '" + j.label +
                                "' dimension mismatch");
      if (!(j.rate >= 0.0) || !std::isfinite(j.rate))
        throw numeric_error("DomainError",
                            "LindbladModel: rate for '" + j.label +
                                "' must be finite and >= 0");
    }
    if (labels_.empty()) labels_ = default_basis_labels(hamiltonian_.rows());
    if (static_cast<Eigen::Index>(labels_.size()) != hamiltonian_.rows())
      throw numeric_error("DimensionMismatch",
                          "LindbladModel: label count != dimension");
  }

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpOperator>& jump_ops() const { return jump_ops_; }
  const std::vector<std::string>& level_labels() const { return labels_; }

  bool has_level(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

 private:
  ComplexMatrix hamiltonian_;
  std::vector<JumpOperator> jump_ops_;
  std::vector<std::string> labels_;
};

// d(rho)/dt = -i[H, rho] + sum_k g_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
inline ComplexMatrix lindblad_rhs_matrix(const LindbladModel& model,
                                         const ComplexMatrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim())
    throw numeric_error("DimensionMismatch", "lindblad_rhs: state dimension");
  ComplexMatrix out = Complex(0.0, -1.0) *
                      (model.hamiltonian() * rho - rho * model.hamiltonian());
  for (const JumpOperator& j : model.jump_ops()) {
    if (j.rate == 0.0) continue;
    ComplexMatrix ldag_l = j.op.adjoint() * j.op;
    out.noalias() += j.rate * (j.op * rho * j.op.adjoint());
    out.noalias() -= (0.5 * j.rate) * (ldag_l * rho + rho * ldag_l);
  }
  return out;
}

inline ComplexMatrix lindblad_rhs(const LindbladModel& model,
                                  const DensityMatrix& rho) {
  return lindblad_rhs_matrix(model, rho.matrix());
}

// Transport setup over {ground} + sites + {sink}. All rates in ps^-1.
// Defaults are presentation-scale values, not derived quantities.
struct TransportScenario {
  std::string initial_site = "BChl 1";
  double t_final_ps = 1.0;
  double dt_ps = 1e-4;
  double dephasing_rate = 1.0;
  double sink_rate = 1.0;
  double loss_rate = 0.001;
  std::string sink_site = "BChl 3";

  void validate() const {
    if (!(t_final_ps > 0.0) || !(dt_ps > 0.0) || dt_ps >= t_final_ps)
      throw numeric_error("DomainError",
                          "TransportScenario: need 0 < dt_ps < t_final_ps");
    for (double r : {dephasing_rate, sink_rate, loss_rate})
      if (!(r >= 0.0) || !std::isfinite(r))
        throw numeric_error("DomainError",
                            "TransportScenario: rates must be finite and >= 0");
  }
};

// Level ordering contract: ground = 0, sites 1..N in Hamiltonian order,
// sink = N+1. The coherent block is the site Hamiltonian converted to rad/ps.
inline LindbladModel build_fmo_transport_model(const TransportScenario& scenario,
                                               const SiteHamiltonian& sites) {
  scenario.validate();
  Eigen::Index n = sites.n_sites();
  Eigen::Index dim = n + 2;
  Eigen::Index sink_index = 1 + sites.site_index(scenario.sink_site);
  sites.site_index(scenario.initial_site);  // validates the label

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  h.block(1, 1, n, n) =
      (sites.energies_cm1() * UnitSystem::codata().cm1_to_rad_per_ps)
          .cast<Complex>();

  std::vector<JumpOperator> jumps;
  for (Eigen::Index k = 1; k <= n; ++k) {
    ComplexMatrix deph = ComplexMatrix::Zero(dim, dim);
    deph(k, k) = 1.0;
    jumps.push_back({std::move(deph), scenario.dephasing_rate,
                     "dephasing_site" + std::to_string(k)});
    ComplexMatrix loss = ComplexMatrix::Zero(dim, dim);
    loss(0, k) = 1.0;
    jumps.push_back({std::move(loss), scenario.loss_rate,
                     "loss_site" + std::to_string(k)});
  }
  ComplexMatrix sink = ComplexMatrix::Zero(dim, dim);
  sink(dim - 1, sink_index) = 1.0;
  jumps.push_back({std::move(sink), scenario.sink_rate, "sink_transfer"});

  std::vector<std::string> labels;
  labels.push_back("ground");
  for (Eigen::Index k = 1; k <= n; ++k) labels.push_back("site" + std::to_string(k));
  labels.push_back("sink");
  return LindbladModel(std::move(h), std::move(jumps), std::move(labels));
}

// Initial state with the excitation on one labeled site of a transport model.
inline DensityMatrix site_basis_state(const LindbladModel& model,
                                      const std::string& level_label) {
  auto it = std::find(model.level_labels().begin(), model.level_labels().end(),
                      level_label);
  if (it == model.level_labels().end())
    throw numeric_error("UnknownSite", "no level labeled '" + level_label + "'");
  Eigen::Index idx = it - model.level_labels().begin();
  ComplexMatrix m = ComplexMatrix::Zero(model.dim(), model.dim());
  m(idx, idx) = 1.0;
  return DensityMatrix::from_matrix(std::move(m), model.level_labels());
}

// Time grid + recorded states + named scalar channels.
class Trajectory {
 public:
  Trajectory(std::vector<double> times_ps, std::vector<DensityMatrix> states,
             std::vector<std::pair<std::string, std::vector<double>>> channels,
             std::vector<std::string> warnings = {})
      : times_(std::move(times_ps)),
        states_(std::move(states)),
        channels_(std::move(channels)),
        warnings_(std::move(warnings)) {
    if (times_.size() != states_.size())
      throw numeric_error("DimensionMismatch", "Trajectory: times vs states");
    for (const auto& [name, series] : channels_)
      if (series.size() != times_.size())
        throw numeric_error("DimensionMismatch",
                            "Trajectory: channel '" + name + "' length");
  }

  const std::vector<double>& times_ps() const { return times_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<std::pair<std::string, std::vector<double>>>& channels()
      const {
    return channels_;
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool has_channel(const std::string& name) const {
    for (const auto& [n, _] : channels_)
      if (n == name) return true;
    return false;
  }

  const std::vector<double>& channel(const std::string& name) const {
    for (const auto& [n, series] : channels_)
      if (n == name) return series;
    throw numeric_error("NoSinkChannel", "trajectory has no channel '" + name + "'");
  }

 private:
  std::vector<double> times_;
  std::vector<DensityMatrix> states_;
  std::vector<std::pair<std::string, std::vector<double>>> channels_;
  std::vector<std::string> warnings_;
};

struct PropagateOptions {
  // Record every record_stride-th step (plus t = 0 and the final step).
  Eigen::Index record_stride = 1;
  // Hard failure threshold for the smallest eigenvalue of a recorded state.
  double positivity_failure = 1e-6;
  // Skip the precomputed-superoperator fast path (it is cross-checked against
  // the direct evaluation in tests).
  bool force_direct_rhs = false;
};

namespace detail {

// vec(A X B) = (B^T (x) A) vec(X) with column-major vec. The full generator
// acting on vec(rho); built once per propagation for small dimensions.
inline ComplexMatrix lindblad_superoperator(const LindbladModel& model) {
  Eigen::Index d = model.dim();
  ComplexMatrix eye = ComplexMatrix::Identity(d, d);
  ComplexMatrix sup =
      Complex(0.0, -1.0) * (tensor_product(eye, model.hamiltonian()) -
                            tensor_product(model.hamiltonian().transpose(), eye));
  for (const JumpOperator& j : model.jump_ops()) {
    if (j.rate == 0.0) continue;
    ComplexMatrix ldag_l = j.op.adjoint() * j.op;
    sup.noalias() += j.rate * tensor_product(j.op.conjugate(), j.op);
    sup.noalias() -= (0.5 * j.rate) * tensor_product(eye, ldag_l);
    sup.noalias() -= (0.5 * j.rate) * tensor_product(ldag_l.transpose(), eye);
  }
  return sup;
}

inline double generator_scale_estimate(const LindbladModel& model) {
  double h_scale = model.hamiltonian().cwiseAbs().rowwise().sum().maxCoeff();
  double rate_sum = 0.0;
  for (const JumpOperator& j : model.jump_ops()) {
    double op_scale = j.op.cwiseAbs().rowwise().sum().maxCoeff();
    rate_sum += j.rate * op_scale * op_scale;
  }
  return 2.0 * h_scale + 2.0 * rate_sum;
}

}  // namespace detail

// Fixed-step classical 4th-order propagation. After every step the state is
// re-Hermitized and trace-renormalized; the recorded `trace` channel holds the
// pre-renormalization trace of that step, so drift stays observable.
inline Trajectory propagate(const LindbladModel& model, const DensityMatrix& rho0,
                            double t_final_ps, double dt_ps,
                            const PropagateOptions& options = {}) {
  if (rho0.dim() != model.dim())
    throw numeric_error("DimensionMismatch", "propagate: state vs model dimension");
  if (!(t_final_ps > 0.0) || !(dt_ps > 0.0))
    throw numeric_error("DomainError", "propagate: need positive t_final and dt");
  if (options.record_stride < 1)
    throw numeric_error("DomainError", "propagate: record_stride must be >= 1");

  std::vector<std::string> warnings;
  double scale = detail::generator_scale_estimate(model);
  if (scale * dt_ps >= 0.1)
    warnings.push_back("StepTooLarge: generator scale * dt = " +
                       std::to_string(scale * dt_ps) + " >= 0.1");

  Eigen::Index d = model.dim();
  auto n_steps = static_cast<Eigen::Index>(std::llround(t_final_ps / dt_ps));
  if (n_steps < 1) n_steps = 1;

  const bool use_superop = d <= 32 && !options.force_direct_rhs;
  ComplexMatrix superop;
  if (use_superop) superop = detail::lindblad_superoperator(model);

  ComplexMatrix rho = rho0.matrix();
  ComplexVector v;
  ComplexVector k1, k2, k3, k4, scratch;
  if (use_superop) {
    v = Eigen::Map<const ComplexVector>(rho.data(), d * d);
    k1.resize(d * d);
    k2.resize(d * d);
    k3.resize(d * d);
    k4.resize(d * d);
    scratch.resize(d * d);
  }

  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> trace_series, purity_series;
  std::vector<std::vector<double>> populations(static_cast<std::size_t>(d));

  auto record = [&](double t, const ComplexMatrix& state, double raw_trace) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(state,
                                                        Eigen::EigenvaluesOnly);
    double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -options.positivity_failure)
      throw numeric_error("PositivityBreach",
                          "propagate: min eigenvalue " + std::to_string(min_eig) +
                              " at t = " + std::to_string(t));
    times.push_back(t);
    states.push_back(DensityMatrix::from_matrix(
        state, model.level_labels(), tolerances::hermiticity, 1e-8,
        options.positivity_failure));
    trace_series.push_back(raw_trace);
    purity_series.push_back(state.squaredNorm());
    for (Eigen::Index i = 0; i < d; ++i)
      populations[static_cast<std::size_t>(i)].push_back(state(i, i).real());
  };

  record(0.0, rho, rho.trace().real());

  for (Eigen::Index step = 1; step <= n_steps; ++step) {
    if (use_superop) {
      k1.noalias() = superop * v;
      scratch = v + (dt_ps / 2.0) * k1;
      k2.noalias() = superop * scratch;
      scratch = v + (dt_ps / 2.0) * k2;
      k3.noalias() = superop * scratch;
      scratch = v + dt_ps * k3;
      k4.noalias() = superop * scratch;
      v += (dt_ps / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = Eigen::Map<const ComplexMatrix>(v.data(), d, d);
    } else {
      ComplexMatrix m1 = lindblad_rhs_matrix(model, rho);
      ComplexMatrix m2 = lindblad_rhs_matrix(model, rho + (dt_ps / 2.0) * m1);
      ComplexMatrix m3 = lindblad_rhs_matrix(model, rho + (dt_ps / 2.0) * m2);
      ComplexMatrix m4 = lindblad_rhs_matrix(model, rho + dt_ps * m3);
      rho += (dt_ps / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    }

    rho = 0.5 * (rho + rho.adjoint().eval());
    double raw_trace = rho.trace().real();
    if (!(raw_trace > 0.0) || !std::isfinite(raw_trace))
      throw numeric_error("PositivityBreach",
                          "propagate: trace collapsed at step " +
                              std::to_string(step));
    rho /= raw_trace;
    if (use_superop) v = Eigen::Map<const ComplexVector>(rho.data(), d * d);

    if (step % options.record_stride == 0 || step == n_steps)
      record(static_cast<double>(step) * dt_ps, rho, raw_trace);
  }

  std::vector<std::pair<std::string, std::vector<double>>> channels;
  for (Eigen::Index i = 0; i < d; ++i)
    channels.emplace_back("pop_" + model.level_labels()[static_cast<std::size_t>(i)],
                          std::move(populations[static_cast<std::size_t>(i)]));
  channels.emplace_back("trace", std::move(trace_series));
  channels.emplace_back("purity", std::move(purity_series));
  return Trajectory(std::move(times), std::move(states), std::move(channels),
                    std::move(warnings));
}

// Fraction of the excitation delivered to the absorbing sink by t_final.
inline double transfer_efficiency(const Trajectory& traj) {
  if (!traj.has_channel("pop_sink"))
    throw numeric_error("NoSinkChannel",
                        "transfer_efficiency: trajectory lacks a sink level");
  const std::vector<double>& sink = traj.channel("pop_sink");
  return std::clamp(sink.back(), 0.0, 1.0);
}

}  // namespace excidyn
