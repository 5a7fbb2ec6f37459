#pragma once

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "excidyn/config.hpp"
#include "excidyn/correlations.hpp"
#include "excidyn/fmo.hpp"
#include "excidyn/lindblad.hpp"
#include "excidyn/multipartite.hpp"
#include "excidyn/numfmt.hpp"
#include "excidyn/tcl.hpp"
#include "excidyn/thermo.hpp"

namespace excidyn {

namespace rundetail {

inline double real_or(const kv::Document& doc, const std::string& key,
                      double fallback) {
  if (auto v = doc.scalar(key)) return kv::parse_real(*v, "key '" + key + "'");
  return fallback;
}

inline long int_or(const kv::Document& doc, const std::string& key,
                   long fallback) {
  if (auto v = doc.scalar(key)) return kv::parse_int(*v, "key '" + key + "'");
  return fallback;
}

inline std::string str_or(const kv::Document& doc, const std::string& key,
                          const std::string& fallback) {
  if (auto v = doc.scalar(key)) return *v;
  return fallback;
}

inline SiteHamiltonian hamiltonian_from_config(const RunConfig& config) {
  if (auto path = config.doc.scalar("hamiltonian"))
    return load_site_hamiltonian(kv::Document::parse_file(*path));
  return builtin_fmo8();
}

// Accepts either rad/ps or cm^-1 keys (validation guarantees at most one).
inline double rate_key(const kv::Document& doc, const std::string& stem,
                       double fallback_rad_per_ps) {
  if (auto v = doc.scalar(stem + "_rad_per_ps"))
    return kv::parse_real(*v, stem);
  if (auto v = doc.scalar(stem + "_cm1"))
    return cm1_to_angular(kv::parse_real(*v, stem));
  return fallback_rad_per_ps;
}

inline BathSpec bath_from_config(const kv::Document& doc) {
  BathSpec bath;
  bath.gamma0 = rate_key(doc, "gamma0", 0.0);
  bath.delta_omega = rate_key(doc, "delta_omega", 0.0);
  bath.detuning = rate_key(doc, "delta", 0.0);
  bath.omega0 = rate_key(doc, "omega0", 0.0);
  bath.validate();
  return bath;
}

inline TransportScenario scenario_from_config(const kv::Document& doc) {
  TransportScenario s;
  s.initial_site = str_or(doc, "initial_site", s.initial_site);
  s.sink_site = str_or(doc, "sink_site", s.sink_site);
  s.dephasing_rate = real_or(doc, "dephasing_rate", s.dephasing_rate);
  s.sink_rate = real_or(doc, "sink_rate", s.sink_rate);
  s.loss_rate = real_or(doc, "loss_rate", s.loss_rate);
  s.t_final_ps = real_or(doc, "t_final_ps", s.t_final_ps);
  s.dt_ps = real_or(doc, "dt_ps", s.dt_ps);
  s.validate();
  return s;
}

inline std::string amplitude_trace_csv(const AmplitudeTrace& trace) {
  CsvBuilder csv("t_ps=ps, u dimensionless", {"t_ps", "re_u", "im_u", "abs_u2",
                                              "delta_p"});
  for (std::size_t i = 0; i < trace.times_ps.size(); ++i) {
    Complex u = trace.u_values[i];
    csv.add_row({trace.times_ps[i], u.real(), u.imag(), excited_population(u),
                 population_difference(u)});
  }
  return csv.str();
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::vector<std::string> columns = {"t_ps"};
  for (const auto& [name, _] : traj.channels()) columns.push_back(name);
  CsvBuilder csv("t_ps=ps, populations/trace/purity dimensionless", columns);
  for (std::size_t i = 0; i < traj.times_ps().size(); ++i) {
    std::vector<double> row = {traj.times_ps()[i]};
    for (const auto& [_, series] : traj.channels()) row.push_back(series[i]);
    csv.add_row(row);
  }
  return csv.str();
}

inline std::string report_header() {
  return std::string("# excidyn ") + version_string + "\n";
}

inline unsigned sweep_thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EXCIDYN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return hw;
}

// Reduced pair state of two sites of a transport trajectory state, in the
// basis {neither, site_b, site_a, both}; exact within the 0/1-excitation
// manifold the transport model lives in.
inline DensityMatrix site_pair_state(const DensityMatrix& rho, Eigen::Index ia,
                                     Eigen::Index ib) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  double pa = rho.matrix()(ia, ia).real();
  double pb = rho.matrix()(ib, ib).real();
  out(0, 0) = std::max(0.0, 1.0 - pa - pb);
  out(1, 1) = pb;
  out(2, 2) = pa;
  out(2, 1) = rho.matrix()(ia, ib);
  out(1, 2) = rho.matrix()(ib, ia);
  return DensityMatrix::from_matrix(std::move(out), {"00", "01", "10", "11"});
}

inline void run_eig(const RunConfig& config, const std::filesystem::path& out) {
  SiteHamiltonian h = hamiltonian_from_config(config);
  ExcitonBasis basis = diagonalize(h);
  Eigen::Index n = h.n_sites();

  std::vector<std::string> columns = {"exciton", "energy_cm1"};
  for (Eigen::Index s = 1; s <= n; ++s)
    columns.push_back("amp_site" + std::to_string(s));
  CsvBuilder csv("energies in cm^-1, amplitudes dimensionless; rows descend in "
                 "energy",
                 columns);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    std::vector<double> row = {static_cast<double>(k + 1),
                               basis.energies_cm1[k]};
    for (Eigen::Index s = 0; s < n; ++s) row.push_back(basis.site_amplitudes(k, s));
    csv.add_row(row);
  }
  write_file_atomic(out / "excitons.csv", csv.str());

  std::string report = report_header();
  report += "# exciton eigenstructure report; energies in cm^-1\n";
  report += "n_sites: " + std::to_string(n) + "\n";
  report += "energy_sum_cm1: " + format_real(basis.energies_cm1.sum()) + "\n";
  report += "sign_convention: " + basis.sign_convention + "\n";

  bool is_builtin =
      n == 8 && (h.energies_cm1() - builtin_fmo8().energies_cm1())
                        .cwiseAbs()
                        .maxCoeff() < 1e-9;
  if (is_builtin) {
    const auto& reference = fmo8_reference_excitons();
    double max_energy_dev = 0.0, max_amp_dev = 0.0;
    for (std::size_t r = 0; r < reference.size(); ++r) {
      Eigen::Index k = n - 1 - static_cast<Eigen::Index>(r);  // descending
      max_energy_dev = std::max(
          max_energy_dev,
          std::abs(basis.energies_cm1[k] - reference[r].energy_cm1));
      for (Eigen::Index s = 0; s < n; ++s)
        max_amp_dev = std::max(
            max_amp_dev,
            std::abs(std::abs(basis.site_amplitudes(k, s)) -
                     std::abs(reference[r].site_amplitudes[static_cast<std::size_t>(s)])));
    }
    report += "reference_table: builtin-fmo8\n";
    report += "max_energy_deviation_cm1: " + format_real(max_energy_dev) + "\n";
    report += "max_amplitude_deviation: " + format_real(max_amp_dev) + "\n";
    report += "energy_tolerance_cm1: " + format_real(fmo8_reference_energy_tol_cm1) + "\n";
    report += "amplitude_tolerance: " + format_real(fmo8_reference_amplitude_tol) + "\n";
  } else {
    report += "reference_table: none\n";
  }
  write_file_atomic(out / "eig_report.txt", report);
}

inline void run_tcl(const RunConfig& config, const std::filesystem::path& out) {
  double t_final = real_or(config.doc, "t_final_ps", 1.0);
  double dt = real_or(config.doc, "dt_ps", 1e-4);
  std::vector<double> grid = uniform_grid(t_final, dt);

  std::vector<BathSpec> baths;
  std::vector<std::string> suffixes;
  if (auto sweep = config.doc.scalar("sweep_gamma0_rad_per_ps")) {
    std::vector<std::string> items = kv::split_list(*sweep);
    for (std::size_t i = 0; i < items.size(); ++i) {
      BathSpec bath = bath_from_config(config.doc);
      bath.gamma0 = kv::parse_real(items[i], "sweep_gamma0_rad_per_ps");
      baths.push_back(bath);
      suffixes.push_back("_" + std::to_string(i));
    }
  } else {
    baths.push_back(bath_from_config(config.doc));
    suffixes.push_back("");
  }

  auto worker = [&](std::size_t idx) {
    const BathSpec& bath = baths[idx];
    AmplitudeTrace closed = closed_form_trace(bath, grid);
    AmplitudeTrace kernel = amplitude_kernel_integration(bath, grid);
    write_file_atomic(out / ("tcl_closed_form" + suffixes[idx] + ".csv"),
                      amplitude_trace_csv(closed));
    write_file_atomic(out / ("tcl_kernel" + suffixes[idx] + ".csv"),
                      amplitude_trace_csv(kernel));
  };

  unsigned cap = std::min<unsigned>(sweep_thread_cap(),
                                    static_cast<unsigned>(baths.size()));
  if (cap <= 1 || baths.size() == 1) {
    for (std::size_t i = 0; i < baths.size(); ++i) worker(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(baths.size());
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < cap; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < baths.size();
             i = next.fetch_add(1)) {
          try {
            worker(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (std::thread& th : pool) th.join();
    for (std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }
}

inline void run_lindblad(const RunConfig& config,
                         const std::filesystem::path& out) {
  SiteHamiltonian sites = hamiltonian_from_config(config);
  TransportScenario scenario = scenario_from_config(config.doc);
  LindbladModel model = build_fmo_transport_model(scenario, sites);
  DensityMatrix rho0 = site_basis_state(
      model, "site" + std::to_string(1 + sites.site_index(scenario.initial_site)));

  auto n_steps = static_cast<long>(std::llround(scenario.t_final_ps / scenario.dt_ps));
  PropagateOptions options;
  options.record_stride = static_cast<Eigen::Index>(
      int_or(config.doc, "record_stride", std::max<long>(1, n_steps / 1000)));
  Trajectory traj = propagate(model, rho0, scenario.t_final_ps, scenario.dt_ps,
                              options);
  write_file_atomic(out / "trajectory.csv", trajectory_csv(traj));

  std::string report = report_header();
  report += "# transport summary; rates in ps^-1, times in ps\n";
  report += "initial_site: " + scenario.initial_site + "\n";
  report += "sink_site: " + scenario.sink_site + "\n";
  report += "dephasing_rate: " + format_real(scenario.dephasing_rate) + "\n";
  report += "sink_rate: " + format_real(scenario.sink_rate) + "\n";
  report += "loss_rate: " + format_real(scenario.loss_rate) + "\n";
  report += "t_final_ps: " + format_real(scenario.t_final_ps) + "\n";
  report += "transfer_efficiency: " + format_real(transfer_efficiency(traj)) + "\n";
  for (const std::string& w : traj.warnings()) report += "warning: " + w + "\n";
  write_file_atomic(out / "lindblad_report.txt", report);
}

inline void run_nonmarkov(const RunConfig& config,
                          const std::filesystem::path& out) {
  BathSpec bath = bath_from_config(config.doc);
  double t_final = real_or(config.doc, "t_final_ps", 1.0);
  double dt = real_or(config.doc, "dt_ps", 1e-3);
  std::vector<double> grid = uniform_grid(t_final, dt);
  AmplitudeTrace trace = closed_form_trace(bath, grid);

  ComplexMatrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  std::vector<DensityMatrix> states_plus, states_minus;
  states_plus.reserve(grid.size());
  states_minus.reserve(grid.size());
  for (Complex u : trace.u_values) {
    AmplitudeDampingChannel channel(u);
    states_plus.push_back(DensityMatrix::from_matrix(channel.apply_matrix(plus)));
    states_minus.push_back(
        DensityMatrix::from_matrix(channel.apply_matrix(minus)));
  }
  Trajectory traj_plus(grid, states_plus, {});
  Trajectory traj_minus(grid, states_minus, {});
  double measure = blp_nonmarkovianity(traj_plus, traj_minus);

  CsvBuilder csv("t_ps=ps, trace_distance dimensionless",
                 {"t_ps", "trace_distance"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv.add_row({grid[i],
                 trace_distance(traj_plus.states()[i], traj_minus.states()[i])});
  write_file_atomic(out / "trace_distance.csv", csv.str());

  std::string report = report_header();
  report += "# trace-distance revival measure over the fixed |+>/|-> initial "
            "pair;\n";
  report += "# a lower bound (no supremum over initial pairs is attempted)\n";
  report += "gamma0_rad_per_ps: " + format_real(bath.gamma0) + "\n";
  report += "delta_omega_rad_per_ps: " + format_real(bath.delta_omega) + "\n";
  report += "delta_rad_per_ps: " + format_real(bath.detuning) + "\n";
  report += "blp_measure_lower_bound: " + format_real(measure) + "\n";
  report += "critical_ratio_gamma0_over_quarter_delta_omega: " +
            format_real(bath.gamma0 / (bath.delta_omega / 4.0)) + "\n";
  write_file_atomic(out / "blp_report.txt", report);
}

inline void run_measures(const RunConfig& config,
                         const std::filesystem::path& out) {
  SiteHamiltonian sites = hamiltonian_from_config(config);
  TransportScenario scenario = scenario_from_config(config.doc);
  LindbladModel model = build_fmo_transport_model(scenario, sites);
  DensityMatrix rho0 = site_basis_state(
      model, "site" + std::to_string(1 + sites.site_index(scenario.initial_site)));

  auto n_steps = static_cast<long>(std::llround(scenario.t_final_ps / scenario.dt_ps));
  PropagateOptions options;
  options.record_stride = static_cast<Eigen::Index>(
      int_or(config.doc, "record_stride", std::max<long>(1, n_steps / 200)));
  Trajectory traj = propagate(model, rho0, scenario.t_final_ps, scenario.dt_ps,
                              options);

  Eigen::Index ia = 1 + sites.site_index(
      str_or(config.doc, "pair_site_a", "BChl 1"));
  Eigen::Index ib = 1 + sites.site_index(
      str_or(config.doc, "pair_site_b", "BChl 2"));
  bool with_discord = str_or(config.doc, "with_discord", "false") == "true";

  std::vector<MeasurePoint> points;
  auto record = [&points](double t, const char* label, double value) {
    if (!std::isfinite(value))
      throw numeric_error("DomainError",
                          std::string("measures: non-finite value for ") + label);
    points.push_back(MeasurePoint{t, value, label});
  };
  for (std::size_t i = 0; i < traj.times_ps().size(); ++i) {
    double t = traj.times_ps()[i];
    const DensityMatrix& rho = traj.states()[i];
    record(t, "vn_entropy_bits", von_neumann_entropy(rho));
    record(t, "purity", rho.matrix().squaredNorm());
    DensityMatrix pair = site_pair_state(rho, ia, ib);
    record(t, "pair_concurrence", concurrence(pair));
    record(t, "pair_mutual_info_bits", mutual_information(pair, 2, 2));
    if (with_discord)
      record(t, "pair_discord_bits",
             discord_two_qubit(pair, Subsystem::B).discord_bits);
  }
  CsvBuilder csv("t_ps=ps, entropies in bits, others dimensionless; pair = (" +
                     std::to_string(ia) + "," + std::to_string(ib) + ")",
                 {"t_ps", "measure_label", "value"});
  for (const MeasurePoint& p : points) csv.add_mixed_row(p.label, p.t_ps, p.value);
  write_file_atomic(out / "measures.csv", csv.str());

  if (with_discord) {
    DiscordDecomposition d = discord_two_qubit(
        site_pair_state(traj.states().back(), ia, ib), Subsystem::B);
    std::string report = report_header();
    report += "# discord decomposition of the final recorded pair state; "
              "entropies in bits, angles in rad\n";
    report += "t_ps: " + format_real(traj.times_ps().back()) + "\n";
    report += "measured_subsystem: B\n";
    report += "mutual_info_bits: " + format_real(d.mutual_info_bits) + "\n";
    report += "classical_corr_bits: " + format_real(d.classical_corr_bits) + "\n";
    report += "discord_bits: " + format_real(d.discord_bits) + "\n";
    report += "argmax_theta_rad: " + format_real(d.best_theta) + "\n";
    report += "argmax_phi_rad: " + format_real(d.best_phi) + "\n";
    write_file_atomic(out / "discord_report.txt", report);
  }
}

inline void run_thermo(const RunConfig& config,
                       const std::filesystem::path& out) {
  ThermoContext ctx;
  ctx.temperature_K = real_or(config.doc, "temperature_K", 300.0);
  double t_tilde = real_or(config.doc, "temperature_tilde_K", 600.0);
  double depol = real_or(config.doc, "depolarization", 1.0);
  ctx.validate();

  ComplexMatrix h = builtin_fmo8().energies_cm1().cast<Complex>();
  DensityMatrix rho = thermal_state(h, ctx);
  DensityMatrix rho_tilde = thermal_state(h, ThermoContext{t_tilde});
  WorkReport work = dissipated_work(rho, rho_tilde, ctx);

  // correlated-pair erasure fixture: X depolarized by strength `depol`
  ComplexMatrix sx = ComplexMatrix::Zero(4, 4);
  sx(0, 0) = 0.5;
  sx(3, 3) = 0.5;
  DensityMatrix before = DensityMatrix::from_matrix(sx);
  ComplexMatrix marginal_s = partial_trace_matrix(sx, {2, 2}, {0});
  ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
  ComplexMatrix after_m = (1.0 - depol) * sx +
                          depol * tensor_product(marginal_s, mixed);
  DensityMatrix after = DensityMatrix::from_matrix(after_m);
  LostWorkReport lost = predictive_lost_work(before, after, 2, 2, ctx);

  double cm1_to_zJ = UnitSystem::codata().cm1_to_zJ;
  std::string report = report_header();
  report += "# thermodynamic report; work in cm^-1, relative entropy and "
            "entropy production in nats,\n";
  report += "# mutual information in bits; ln2 factors are explicit in the "
            "lost-work formula;\n";
  report += "# zJ values use 1 cm^-1 = " + format_real(cm1_to_zJ) + " zJ (h*c)\n";
  report += "temperature_K: " + format_real(ctx.temperature_K) + "\n";
  report += "temperature_tilde_K: " + format_real(t_tilde) + "\n";
  report += "relative_entropy_nats: " + format_real(work.relative_entropy_nats) + "\n";
  report += "dissipated_work_cm1: " + format_real(work.dissipated_work_cm1) + "\n";
  report += "dissipated_work_zJ: " +
            format_real(work.dissipated_work_cm1 * cm1_to_zJ) + "\n";
  report += "entropy_production_nats: " +
            format_real(work.entropy_production_nats) + "\n";
  report += "depolarization: " + format_real(depol) + "\n";
  report += "mutual_info_before_bits: " +
            format_real(lost.mutual_info_before_bits) + "\n";
  report += "mutual_info_after_bits: " +
            format_real(lost.mutual_info_after_bits) + "\n";
  report += "lost_work_cm1: " + format_real(lost.lost_work_cm1) + "\n";
  report += "lost_work_zJ: " + format_real(lost.lost_work_cm1 * cm1_to_zJ) + "\n";
  report += std::string("warning_negative_lost_work: ") +
            (lost.negative ? "true" : "false") + "\n";
  report += std::string("warning_infinite_relative_entropy: ") +
            (work.infinite ? "true" : "false") + "\n";
  write_file_atomic(out / "thermo_report.txt", report);
}

inline void run_states(const RunConfig& config,
                       const std::filesystem::path& out) {
  std::string family = config.doc.scalar("family").value_or("w");
  int n = static_cast<int>(int_or(config.doc, "n_qubits", 3));

  MultiQubitState state = [&]() {
    if (family == "w") return w_state(n);
    if (family == "ghz") {
      double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      Complex alpha(real_or(config.doc, "alpha_re", inv_sqrt2),
                    real_or(config.doc, "alpha_im", 0.0));
      Complex beta(real_or(config.doc, "beta_re", inv_sqrt2),
                   real_or(config.doc, "beta_im", 0.0));
      return ghz_state(n, alpha, beta);
    }
    std::vector<Complex> coeffs;
    if (auto idx = config.doc.scalar("exciton_index")) {
      long k = kv::parse_int(*idx, "exciton_index");
      ExcitonBasis basis = diagonalize(builtin_fmo8());
      for (Eigen::Index s = 0; s < 8; ++s)
        coeffs.emplace_back(basis.site_amplitudes(k - 1, s), 0.0);
    } else {
      const kv::Entry& block = config.doc.at("coefficients");
      for (const kv::BlockRow& row : block.rows) {
        std::vector<double> pair = kv::parse_real_row(
            row.text, "coefficients line " + std::to_string(row.line));
        if (pair.size() != 2)
          throw config_error("ConfigError",
                             "coefficients line " + std::to_string(row.line) +
                                 ": expected 're im'");
        coeffs.emplace_back(pair[0], pair[1]);
      }
    }
    return general_single_excitation(coeffs);
  }();
  n = state.n_qubits;

  std::string file = report_header();
  file += "family: " + family + "\n";
  file += "n_qubits: " + std::to_string(n) + "\n";
  file += "amplitudes:\n";
  for (Eigen::Index i = 0; i < state.vector.dim(); ++i) {
    Complex a = state.vector.amplitudes()[i];
    file += "  " + format_real(a.real()) + " " + format_real(a.imag()) + "\n";
  }
  write_file_atomic(out / "state.txt", file);

  std::string reductions = report_header();
  reductions += "# pairwise reduced-state measures; concurrence dimensionless, "
                "mutual information in bits\n";
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      DensityMatrix pair = reduce_to_pair(state, a, b);
      reductions += "pair_" + std::to_string(a) + "_" + std::to_string(b) +
                    ": concurrence=" + format_real(concurrence(pair)) +
                    " mutual_info_bits=" +
                    format_real(mutual_information(pair, 2, 2)) + "\n";
    }
  write_file_atomic(out / "reductions.txt", reductions);
}

}  // namespace rundetail

// Dispatch a validated config; creates the output directory, emits the
// command's files. Identical config bytes yield identical output bytes.
inline void run(const RunConfig& config) {
  std::filesystem::path out(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw io_error("cannot create output dir '" + out.string() + "'");

  switch (config.command) {
    case Command::eig: rundetail::run_eig(config, out); break;
    case Command::tcl: rundetail::run_tcl(config, out); break;
    case Command::lindblad: rundetail::run_lindblad(config, out); break;
    case Command::nonmarkov: rundetail::run_nonmarkov(config, out); break;
    case Command::measures: rundetail::run_measures(config, out); break;
    case Command::thermo: rundetail::run_thermo(config, out); break;
    case Command::states: rundetail::run_states(config, out); break;
  }
}

// Convenience entry used by the CLI and by tests: parse + override + validate
// + run.
inline void run_from_file(const std::string& config_path,
                          const std::string& output_dir,
                          const std::vector<std::pair<std::string, std::string>>&
                              overrides = {},
                          const std::string& command_hint = "") {
  kv::Document doc = kv::Document::parse_file(config_path);
  if (!command_hint.empty()) {
    if (auto existing = doc.scalar("command"); existing && *existing != command_hint)
      throw config_error("ConfigError",
                         "config command '" + *existing +
                             "' conflicts with CLI subcommand '" + command_hint +
                             "'");
    doc.set_scalar("command", command_hint);
  }
  for (const auto& [key, value] : overrides) doc.set_scalar(key, value);
  RunConfig config = validate_config(doc);
  for (const auto& [key, value] : overrides) config.overrides[key] = value;
  config.output_dir = output_dir;
  run(config);
}

}  // namespace excidyn
