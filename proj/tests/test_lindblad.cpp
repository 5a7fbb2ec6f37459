#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "excidyn/lindblad.hpp"
#include "testutil.hpp"

using namespace excidyn;
using Catch::Approx;

namespace {

LindbladModel two_level(double rabi_rad_per_ps, double damping_per_ps,
                        double dephasing_per_ps = 0.0) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = rabi_rad_per_ps / 2.0;
  h(1, 0) = rabi_rad_per_ps / 2.0;
  std::vector<JumpOperator> jumps;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  jumps.push_back({lower, damping_per_ps, "decay"});
  ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
  proj(1, 1) = 1.0;
  jumps.push_back({proj, dephasing_per_ps, "dephasing"});
  return LindbladModel(std::move(h), std::move(jumps));
}

DensityMatrix level_state(int dim, int level) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(level, level) = 1.0;
  return DensityMatrix::from_matrix(std::move(m));
}

}  // namespace

TEST_CASE("build_fmo_transport_model structure") {
  TransportScenario scenario;
  scenario.dephasing_rate = 0.0;
  scenario.sink_rate = 0.0;
  scenario.loss_rate = 0.0;
  SiteHamiltonian sites = builtin_fmo8();
  LindbladModel model = build_fmo_transport_model(scenario, sites);

  CHECK(model.dim() == 10);
  CHECK(model.level_labels().front() == "ground");
  CHECK(model.level_labels().back() == "sink");
  // all-zero rates: the jump list still carries its (inert) entries
  CHECK(model.jump_ops().size() == 17);
  for (const JumpOperator& j : model.jump_ops()) CHECK(j.rate == 0.0);

  // coherent block sits in levels 1..8, converted to rad/ps
  CHECK(model.hamiltonian()(1, 2).real() ==
        Approx(-97.9 * UnitSystem::codata().cm1_to_rad_per_ps));
  CHECK(model.hamiltonian()(0, 0) == Complex(0.0, 0.0));
  CHECK(model.hamiltonian()(9, 9) == Complex(0.0, 0.0));

  // sink operator is |9><3| for sink at BChl 3
  TransportScenario with_sink;
  with_sink.sink_rate = 2.0;
  LindbladModel sink_model = build_fmo_transport_model(with_sink, sites);
  const JumpOperator& sink = sink_model.jump_ops().back();
  CHECK(sink.label == "sink_transfer");
  CHECK(sink.op(9, 3) == Complex(1.0, 0.0));
  CHECK(sink.op.cwiseAbs().sum() == Approx(1.0));

  TransportScenario bad;
  bad.sink_site = "BChl 11";
  CHECK_THROWS_WITH(build_fmo_transport_model(bad, sites),
                    Catch::Matchers::ContainsSubstring("UnknownSite"));
  TransportScenario bad_initial;
  bad_initial.initial_site = "BChl 0";
  CHECK_THROWS_WITH(build_fmo_transport_model(bad_initial, sites),
                    Catch::Matchers::ContainsSubstring("UnknownSite"));
}

TEST_CASE("lindblad_rhs fixed points") {
  SECTION("ground state of a decay-only model is stationary") {
    LindbladModel model = two_level(0.0, 1.3);
    ComplexMatrix rhs = lindblad_rhs(model, level_state(2, 0));
    CHECK(rhs.cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("diagonal H, pure dephasing, diagonal state: nothing moves") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 3.0;
    ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
    proj(1, 1) = 1.0;
    LindbladModel model(h, {{proj, 2.0, "dephasing"}});
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.25;
    diag(1, 1) = 0.75;
    ComplexMatrix rhs =
        lindblad_rhs(model, DensityMatrix::from_matrix(diag));
    CHECK(rhs.cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("coherent drive from the ground state") {
    double rabi = 2.0;
    LindbladModel model = two_level(rabi, 0.0);
    ComplexMatrix rhs = lindblad_rhs(model, level_state(2, 0));
    CHECK(rhs(0, 0) == Complex(0.0, 0.0));
    CHECK(rhs(1, 1) == Complex(0.0, 0.0));
    CHECK(std::abs(rhs(1, 0) - Complex(0.0, -rabi / 2.0)) < 1e-15);
    CHECK(std::abs(rhs(0, 1) - Complex(0.0, rabi / 2.0)) < 1e-15);
  }
}

TEST_CASE("lindblad_rhs is trace-free and Hermiticity preserving") {
  std::mt19937 rng(21);
  TransportScenario scenario;
  LindbladModel model = build_fmo_transport_model(scenario, builtin_fmo8());
  for (int rep = 0; rep < 4; ++rep) {
    DensityMatrix rho = testutil::random_density(rng, 10);
    ComplexMatrix rhs = lindblad_rhs(model, rho);
    CHECK(std::abs(rhs.trace()) < 1e-12);
    CHECK((rhs - rhs.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("superoperator path matches the direct evaluation") {
  std::mt19937 rng(22);
  TransportScenario scenario;
  scenario.dephasing_rate = 3.0;
  scenario.sink_rate = 0.7;
  scenario.loss_rate = 0.2;
  LindbladModel model = build_fmo_transport_model(scenario, builtin_fmo8());
  ComplexMatrix superop = detail::lindblad_superoperator(model);
  for (int rep = 0; rep < 3; ++rep) {
    DensityMatrix rho = testutil::random_density(rng, 10);
    ComplexVector vec =
        Eigen::Map<const ComplexVector>(rho.matrix().data(), 100);
    ComplexVector mapped = superop * vec;
    ComplexMatrix direct = lindblad_rhs(model, rho);
    ComplexVector direct_vec =
        Eigen::Map<const ComplexVector>(direct.data(), 100);
    CHECK((mapped - direct_vec).cwiseAbs().maxCoeff() < 1e-12);
  }

  // whole-trajectory agreement between the two propagation paths
  DensityMatrix rho0 = site_basis_state(model, "site1");
  PropagateOptions direct_options;
  direct_options.force_direct_rhs = true;
  Trajectory fast = propagate(model, rho0, 0.05, 1e-4);
  Trajectory slow = propagate(model, rho0, 0.05, 1e-4, direct_options);
  for (std::size_t i = 0; i < fast.times_ps().size(); ++i)
    CHECK((fast.states()[i].matrix() - slow.states()[i].matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("propagate trivial and oracle dynamics") {
  SECTION("zero generator: constant trajectory") {
    LindbladModel model(ComplexMatrix::Zero(3, 3), {});
    std::mt19937 rng(31);
    DensityMatrix rho0 = testutil::random_density(rng, 3);
    Trajectory traj = propagate(model, rho0, 0.1, 1e-3);
    for (const DensityMatrix& s : traj.states())
      CHECK((s.matrix() - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  }
  SECTION("Rabi oscillation against sin^2(Omega t / 2)") {
    double rabi = 1.0;
    LindbladModel model = two_level(rabi, 0.0);
    Trajectory traj = propagate(model, level_state(2, 0), 6.0, 1e-3);
    const std::vector<double>& excited = traj.channel("pop_1");
    for (std::size_t i = 0; i < traj.times_ps().size(); ++i) {
      double expected = std::pow(std::sin(rabi * traj.times_ps()[i] / 2.0), 2);
      CHECK(std::abs(excited[i] - expected) < 1e-6);
    }
  }
  SECTION("amplitude damping against e^{-Gamma t}") {
    double gamma = 0.8;
    LindbladModel model = two_level(0.0, gamma);
    Trajectory traj = propagate(model, level_state(2, 1), 4.0, 1e-3);
    const std::vector<double>& excited = traj.channel("pop_1");
    for (std::size_t i = 0; i < traj.times_ps().size(); ++i)
      CHECK(std::abs(excited[i] -
                     std::exp(-gamma * traj.times_ps()[i])) < 1e-7);
  }
}

TEST_CASE("pure dephasing freezes populations and kills coherence") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 0.4;
  h(1, 1) = 2.1;
  ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
  proj(1, 1) = 1.0;
  LindbladModel model(h, {{proj, 1.5, "dephasing"}});

  ComplexMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  Trajectory traj =
      propagate(model, DensityMatrix::from_matrix(plus), 2.0, 1e-3);
  const std::vector<double>& p0 = traj.channel("pop_0");
  const std::vector<double>& p1 = traj.channel("pop_1");
  double prev_coherence = 0.5;
  for (std::size_t i = 0; i < traj.states().size(); ++i) {
    CHECK(std::abs(p0[i] - 0.5) < 1e-9);
    CHECK(std::abs(p1[i] - 0.5) < 1e-9);
    double coherence = std::abs(traj.states()[i].matrix()(0, 1));
    CHECK(coherence <= prev_coherence + 1e-12);
    prev_coherence = coherence;
  }
}

TEST_CASE("purity stays in range and is conserved by unitary evolution") {
  LindbladModel model = two_level(2.0, 0.0);
  std::mt19937 rng(41);
  DensityMatrix rho0 = testutil::random_density(rng, 2);
  Trajectory traj = propagate(model, rho0, 1.0, 1e-3);
  double initial_purity = rho0.matrix().squaredNorm();
  for (double p : traj.channel("purity")) {
    CHECK(p <= 1.0 + 1e-9);
    CHECK(std::abs(p - initial_purity) < 1e-9);
  }
}

TEST_CASE("trace drift stays at the floating-point floor") {
  TransportScenario scenario;
  scenario.dephasing_rate = 10.0;
  scenario.sink_rate = 10.0;
  scenario.loss_rate = 1.0;
  scenario.t_final_ps = 0.2;
  LindbladModel model = build_fmo_transport_model(scenario, builtin_fmo8());
  Trajectory traj =
      propagate(model, site_basis_state(model, "site1"), 0.2, 1e-4);
  for (double tr : traj.channel("trace")) CHECK(std::abs(tr - 1.0) < 1e-10);
  for (const DensityMatrix& s : traj.states())
    CHECK(s.min_eigenvalue() > -1e-8);
}

TEST_CASE("fourth-order convergence under step halving") {
  LindbladModel model = two_level(3.0, 0.8, 0.4);
  ComplexMatrix start(2, 2);
  start << 0.7, Complex(0.2, -0.1), Complex(0.2, 0.1), 0.3;
  DensityMatrix rho0 = DensityMatrix::from_matrix(start);

  PropagateOptions o1, o2, o4;
  o1.record_stride = 25;
  o2.record_stride = 50;
  o4.record_stride = 100;
  Trajectory coarse = propagate(model, rho0, 2.0, 0.02, o1);
  Trajectory medium = propagate(model, rho0, 2.0, 0.01, o2);
  Trajectory fine = propagate(model, rho0, 2.0, 0.005, o4);
  REQUIRE(coarse.times_ps().size() == medium.times_ps().size());
  REQUIRE(coarse.times_ps().size() == fine.times_ps().size());

  for (std::size_t c = 0; c < coarse.channels().size(); ++c) {
    const auto& [name, coarse_series] = coarse.channels()[c];
    const std::vector<double>& medium_series = medium.channels()[c].second;
    const std::vector<double>& fine_series = fine.channels()[c].second;
    double change21 = 0.0, change42 = 0.0;
    for (std::size_t i = 0; i < coarse_series.size(); ++i) {
      change21 = std::max(change21,
                          std::abs(medium_series[i] - coarse_series[i]));
      change42 = std::max(change42,
                          std::abs(fine_series[i] - medium_series[i]));
    }
    if (change21 < 1e-12) continue;  // channel already at the noise floor
    INFO(name);
    CHECK(change42 < change21 / 15.0);
  }
}

TEST_CASE("transfer_efficiency endpoints") {
  SiteHamiltonian sites = builtin_fmo8();
  SECTION("no sink rate means nothing arrives") {
    TransportScenario scenario;
    scenario.sink_rate = 0.0;
    scenario.loss_rate = 0.0;
    scenario.t_final_ps = 0.2;
    LindbladModel model = build_fmo_transport_model(scenario, sites);
    Trajectory traj =
        propagate(model, site_basis_state(model, "site1"), 0.2, 1e-4);
    CHECK(transfer_efficiency(traj) == Approx(0.0).margin(1e-12));
  }
  SECTION("equal sink and loss from the sink site split the excitation") {
    TransportScenario scenario;
    scenario.dephasing_rate = 0.0;
    scenario.sink_rate = 1.0;
    scenario.loss_rate = 1.0;
    scenario.initial_site = "BChl 3";
    scenario.t_final_ps = 10.0;
    scenario.dt_ps = 1e-3;
    SiteHamiltonian silent(RealMatrix::Zero(8, 8), sites.site_labels());
    LindbladModel model = build_fmo_transport_model(scenario, silent);
    PropagateOptions options;
    options.record_stride = 100;
    Trajectory traj =
        propagate(model, site_basis_state(model, "site3"), 10.0, 1e-3, options);
    CHECK(transfer_efficiency(traj) == Approx(0.5).margin(1e-6));
  }
  SECTION("missing sink channel") {
    LindbladModel model = two_level(1.0, 0.0);
    Trajectory traj = propagate(model, level_state(2, 0), 0.01, 1e-3);
    CHECK_THROWS_WITH(transfer_efficiency(traj),
                      Catch::Matchers::ContainsSubstring("NoSinkChannel"));
  }
}

TEST_CASE("propagate surfaces step-size warnings and positivity failures") {
  LindbladModel model = two_level(200.0, 0.0);
  Trajectory traj = propagate(model, level_state(2, 0), 0.01, 1e-3);
  REQUIRE_FALSE(traj.warnings().empty());
  CHECK(traj.warnings()[0].find("StepTooLarge") != std::string::npos);

  // a step far outside the stability region must fail hard, not silently
  CHECK_THROWS_WITH(
      propagate(two_level(3000.0, 0.0), level_state(2, 0), 0.2, 1e-3),
      Catch::Matchers::ContainsSubstring("PositivityBreach"));
}
