#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "excidyn/run.hpp"

using namespace excidyn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("excidyn_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_config(const fs::path& dir, const std::string& name,
                      const std::string& content) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << content;
  return p;
}

struct CliResult {
  int exit_code = -1;
  std::string stderr_text;
};

CliResult run_cli(const std::string& args) {
  fs::path err_file = fs::temp_directory_path() / "excidyn_cli_stderr.txt";
  std::string cmd = std::string(EXCIDYN_CLI_PATH) + " " + args + " 2>" +
                    err_file.string();
  int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(err_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.stderr_text = buf.str();
  return result;
}

}  // namespace

TEST_CASE("eig command emits the regression report") {
  fs::path dir = fresh_dir("eig");
  fs::path cfg = write_config(dir, "eig.cfg", "command: eig\n");
  run_from_file(cfg.string(), (dir / "out").string());

  std::string report = slurp(dir / "out" / "eig_report.txt");
  CHECK(report.find("reference_table: builtin-fmo8") != std::string::npos);
  CHECK(report.find("energy_sum_cm1: 2220") != std::string::npos);

  std::string csv = slurp(dir / "out" / "excitons.csv");
  CHECK(csv.rfind("# excidyn", 0) == 0);
  CHECK(csv.find("exciton,energy_cm1,amp_site1") != std::string::npos);
  // first data row is the highest exciton
  CHECK(csv.find("\n8,514.25") != std::string::npos);
}

TEST_CASE("tcl command writes both amplitude sources") {
  fs::path dir = fresh_dir("tcl");
  fs::path cfg = write_config(dir, "tcl.cfg",
                              "command: tcl\n"
                              "gamma0_rad_per_ps: 5.0\n"
                              "delta_omega_cm1: 40.0\n"
                              "t_final_ps: 0.2\n"
                              "dt_ps: 0.0005\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string closed = slurp(dir / "out" / "tcl_closed_form.csv");
  std::string kernel = slurp(dir / "out" / "tcl_kernel.csv");
  CHECK(closed.find("t_ps,re_u,im_u,abs_u2,delta_p") != std::string::npos);
  CHECK(kernel.find("t_ps,re_u,im_u,abs_u2,delta_p") != std::string::npos);
  CHECK(closed.find("\n0,1,0,1,1\n") != std::string::npos);
}

TEST_CASE("tcl with zero coupling keeps a flat population column") {
  fs::path dir = fresh_dir("tcl_flat");
  fs::path cfg = write_config(dir, "tcl.cfg",
                              "command: tcl\n"
                              "gamma0_rad_per_ps: 0\n"
                              "delta_omega_rad_per_ps: 5.0\n"
                              "t_final_ps: 0.1\n"
                              "dt_ps: 0.001\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::istringstream lines(slurp(dir / "out" / "tcl_closed_form.csv"));
  std::string line;
  int data_rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    ++data_rows;
    std::vector<double> fields;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) fields.push_back(std::stod(cell));
    REQUIRE(fields.size() == 5);
    CHECK(fields[3] == Catch::Approx(1.0).margin(1e-9));  // abs_u2
  }
  CHECK(data_rows == 101);
}

TEST_CASE("tcl sweep fans out one file pair per value") {
  fs::path dir = fresh_dir("tcl_sweep");
  fs::path cfg = write_config(dir, "tcl.cfg",
                              "command: tcl\n"
                              "gamma0_rad_per_ps: 1.0\n"
                              "delta_omega_rad_per_ps: 8.0\n"
                              "sweep_gamma0_rad_per_ps: 0.5, 2.0, 25.0\n"
                              "t_final_ps: 0.1\n"
                              "dt_ps: 0.001\n");
  run_from_file(cfg.string(), (dir / "out").string());
  for (int i = 0; i < 3; ++i) {
    CHECK(fs::exists(dir / "out" / ("tcl_closed_form_" + std::to_string(i) +
                                    ".csv")));
    CHECK(fs::exists(dir / "out" / ("tcl_kernel_" + std::to_string(i) + ".csv")));
  }

  // thread cap from the environment must not change content
  setenv("EXCIDYN_THREADS", "1", 1);
  run_from_file(cfg.string(), (dir / "serial").string());
  unsetenv("EXCIDYN_THREADS");
  for (int i = 0; i < 3; ++i) {
    std::string name = "tcl_closed_form_" + std::to_string(i) + ".csv";
    CHECK(slurp(dir / "out" / name) == slurp(dir / "serial" / name));
  }
}

TEST_CASE("lindblad command with zero rates keeps the trace column flat") {
  fs::path dir = fresh_dir("lind");
  fs::path cfg = write_config(dir, "lind.cfg",
                              "command: lindblad\n"
                              "dephasing_rate: 0\n"
                              "sink_rate: 0\n"
                              "loss_rate: 0\n"
                              "t_final_ps: 0.05\n"
                              "dt_ps: 0.0001\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string csv = slurp(dir / "out" / "trajectory.csv");
  CHECK(csv.find("t_ps,pop_ground,pop_site1,pop_site2,pop_site3,pop_site4,"
                 "pop_site5,pop_site6,pop_site7,pop_site8,pop_sink,trace,"
                 "purity") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::vector<double> fields;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) fields.push_back(std::stod(cell));
    REQUIRE(fields.size() == 13);
    CHECK(std::abs(fields[11] - 1.0) < 1e-8);  // trace
  }
  std::string report = slurp(dir / "out" / "lindblad_report.txt");
  CHECK(report.find("transfer_efficiency: 0\n") != std::string::npos);
}

TEST_CASE("byte determinism: identical config bytes give identical outputs") {
  fs::path dir = fresh_dir("determinism");
  std::string cfg_text =
      "command: lindblad\n"
      "dephasing_rate: 1.0\n"
      "sink_rate: 1.0\n"
      "loss_rate: 0.001\n"
      "t_final_ps: 0.05\n"
      "dt_ps: 0.0001\n";
  fs::path cfg = write_config(dir, "run.cfg", cfg_text);
  run_from_file(cfg.string(), (dir / "out1").string());
  run_from_file(cfg.string(), (dir / "out2").string());
  CHECK(slurp(dir / "out1" / "trajectory.csv") ==
        slurp(dir / "out2" / "trajectory.csv"));
  CHECK(slurp(dir / "out1" / "lindblad_report.txt") ==
        slurp(dir / "out2" / "lindblad_report.txt"));
}

TEST_CASE("nonmarkov command reports the dichotomy") {
  fs::path dir = fresh_dir("nonmarkov");
  fs::path cfg = write_config(dir, "nm.cfg",
                              "command: nonmarkov\n"
                              "gamma0_rad_per_ps: 25.0\n"
                              "delta_omega_rad_per_ps: 5.0\n"
                              "t_final_ps: 1.0\n"
                              "dt_ps: 0.001\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string report = slurp(dir / "out" / "blp_report.txt");
  CHECK(report.find("blp_measure_lower_bound: 0.6") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "trace_distance.csv"));
}

TEST_CASE("measures command emits the long-format CSV") {
  fs::path dir = fresh_dir("measures");
  fs::path cfg = write_config(dir, "m.cfg",
                              "command: measures\n"
                              "t_final_ps: 0.05\n"
                              "dt_ps: 0.0001\n"
                              "with_discord: true\n"
                              "record_stride: 100\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string csv = slurp(dir / "out" / "measures.csv");
  CHECK(csv.find("t_ps,measure_label,value") != std::string::npos);
  CHECK(csv.find("vn_entropy_bits") != std::string::npos);
  CHECK(csv.find("pair_concurrence") != std::string::npos);
  CHECK(csv.find("pair_discord_bits") != std::string::npos);

  std::string discord = slurp(dir / "out" / "discord_report.txt");
  CHECK(discord.find("mutual_info_bits:") != std::string::npos);
  CHECK(discord.find("discord_bits:") != std::string::npos);
  CHECK(discord.find("argmax_theta_rad:") != std::string::npos);
  CHECK(discord.find("argmax_phi_rad:") != std::string::npos);
}

TEST_CASE("thermo command report fields") {
  fs::path dir = fresh_dir("thermo");
  fs::path cfg = write_config(dir, "t.cfg",
                              "command: thermo\n"
                              "temperature_K: 300\n"
                              "temperature_tilde_K: 600\n"
                              "depolarization: 1.0\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string report = slurp(dir / "out" / "thermo_report.txt");
  CHECK(report.find("relative_entropy_nats:") != std::string::npos);
  CHECK(report.find("dissipated_work_cm1:") != std::string::npos);
  CHECK(report.find("lost_work_cm1: 144.528") != std::string::npos);
  CHECK(report.find("lost_work_zJ: 2.87") != std::string::npos);
  CHECK(report.find("warning_negative_lost_work: false") != std::string::npos);
}

TEST_CASE("states command writes the state file and reductions") {
  fs::path dir = fresh_dir("states");
  fs::path cfg = write_config(dir, "s.cfg",
                              "command: states\nfamily: w\nn_qubits: 3\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string state = slurp(dir / "out" / "state.txt");
  CHECK(state.find("n_qubits: 3") != std::string::npos);
  CHECK(state.find("amplitudes:") != std::string::npos);
  std::string reductions = slurp(dir / "out" / "reductions.txt");
  std::size_t pos = reductions.find("pair_1_2: concurrence=");
  REQUIRE(pos != std::string::npos);
  double c12 = std::stod(reductions.substr(pos + 23));
  CHECK(c12 == Catch::Approx(2.0 / 3.0).margin(1e-9));
}

TEST_CASE("states command maps an exciton row onto the qubit register") {
  fs::path dir = fresh_dir("states_exciton");
  fs::path cfg = write_config(dir, "s.cfg",
                              "command: states\n"
                              "family: single_excitation\n"
                              "exciton_index: 1\n");
  run_from_file(cfg.string(), (dir / "out").string());
  std::string state = slurp(dir / "out" / "state.txt");
  CHECK(state.find("n_qubits: 8") != std::string::npos);
  // dominant weight (|.| ~ 0.937) sits on qubit 3's single-excitation slot,
  // basis index 2^(8-3) = 32 -> the 33rd amplitude row
  std::istringstream lines(state.substr(state.find("amplitudes:")));
  std::string line;
  std::getline(lines, line);
  double biggest = 0.0;
  int row = 0, biggest_row = -1;
  while (std::getline(lines, line)) {
    std::istringstream pair(line);
    double re = 0.0, im = 0.0;
    pair >> re >> im;
    if (std::abs(re) > biggest) {
      biggest = std::abs(re);
      biggest_row = row;
    }
    ++row;
  }
  CHECK(biggest_row == 32);
  CHECK(biggest == Catch::Approx(0.937).margin(0.01));
}

TEST_CASE("command hint conflicts are caught") {
  fs::path dir = fresh_dir("hint");
  fs::path cfg = write_config(dir, "c.cfg", "command: eig\n");
  CHECK_THROWS_WITH(
      run_from_file(cfg.string(), (dir / "out").string(), {}, "tcl"),
      Catch::Matchers::ContainsSubstring("conflicts"));
}

TEST_CASE("set overrides reach validation and execution") {
  fs::path dir = fresh_dir("overrides");
  fs::path cfg = write_config(dir, "c.cfg",
                              "command: lindblad\nsink_rate: 1.0\n"
                              "t_final_ps: 0.02\ndt_ps: 0.0001\n");
  CHECK_THROWS_WITH(
      run_from_file(cfg.string(), (dir / "out").string(),
                    {{"sink_rate", "-3"}}),
      Catch::Matchers::ContainsSubstring("sink_rate"));
  run_from_file(cfg.string(), (dir / "out").string(), {{"sink_rate", "0"}});
  std::string report = slurp(dir / "out" / "lindblad_report.txt");
  CHECK(report.find("transfer_efficiency: 0\n") != std::string::npos);
}

TEST_CASE("CLI process exit codes and error lines") {
  fs::path dir = fresh_dir("cli_proc");
  fs::path good = write_config(dir, "good.cfg", "command: eig\n");
  fs::path bad = write_config(dir, "bad.cfg",
                              "command: lindblad\nsink_rte: 1.0\n");

  CliResult ok = run_cli("eig --config " + good.string() + " --out " +
                         (dir / "out").string());
  CHECK(ok.exit_code == 0);

  CliResult config_err = run_cli("lindblad --config " + bad.string() +
                                 " --out " + (dir / "out2").string());
  CHECK(config_err.exit_code == 2);
  CHECK(config_err.stderr_text.rfind("ERROR ConfigError:", 0) == 0);
  CHECK(config_err.stderr_text.find("did you mean") != std::string::npos);

  CliResult io_err = run_cli("eig --config " + (dir / "missing.cfg").string() +
                             " --out " + (dir / "out3").string());
  CHECK(io_err.exit_code == 4);
  CHECK(io_err.stderr_text.rfind("ERROR IoError:", 0) == 0);

  fs::path breach = write_config(dir, "breach.cfg",
                                 "command: lindblad\n"
                                 "t_final_ps: 1.0\n"
                                 "dt_ps: 0.05\n"
                                 "dephasing_rate: 0\n"
                                 "sink_rate: 0\n"
                                 "loss_rate: 0\n");
  CliResult numeric_err = run_cli("lindblad --config " + breach.string() +
                                  " --out " + (dir / "out4").string());
  CHECK(numeric_err.exit_code == 3);
  CHECK(numeric_err.stderr_text.rfind("ERROR PositivityBreach:", 0) == 0);
}
