#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "excidyn/errors.hpp"
#include "excidyn/kvdoc.hpp"

namespace excidyn {

enum class Command { eig, tcl, lindblad, nonmarkov, measures, thermo, states };

inline const std::vector<std::pair<std::string, Command>>& command_names() {
  static const std::vector<std::pair<std::string, Command>> names = {
      {"eig", Command::eig},           {"tcl", Command::tcl},
      {"lindblad", Command::lindblad}, {"nonmarkov", Command::nonmarkov},
      {"measures", Command::measures}, {"thermo", Command::thermo},
      {"states", Command::states},
  };
  return names;
}

inline std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_names())
    if (cmd == c) return name;
  return "?";
}

struct RunConfig {
  Command command = Command::eig;
  std::vector<std::string> input_paths;  // e.g. referenced Hamiltonian files
  std::string output_dir;
  std::map<std::string, std::string> overrides;  // applied --set pairs
  long seed = 0;  // reserved; no stochastic path currently
  kv::Document doc;  // validated document, post-override
};

namespace schema {

enum class Kind { real, integer, string, real_list, block };

struct Field {
  std::string key;
  Kind kind = Kind::real;
  bool required = false;
  // numeric bounds; min_exclusive means value must be strictly greater
  std::optional<double> min, max;
  bool min_exclusive = false;
  std::vector<std::string> allowed;  // for string enums, empty = free-form
};

inline std::vector<Field> fields_for(Command cmd) {
  using K = Kind;
  std::vector<Field> f;
  f.push_back({"command", K::string, true, {}, {}, false, {}});
  f.push_back({"seed", K::integer, false, 0.0, {}, false, {}});
  auto rate = [](const char* key) {
    return Field{key, K::real, false, 0.0, {}, false, {}};
  };
  auto positive = [](const char* key, bool required = false) {
    return Field{key, K::real, required, 0.0, {}, true, {}};
  };
  switch (cmd) {
    case Command::eig:
      f.push_back({"hamiltonian", K::string, false, {}, {}, false, {}});
      break;
    case Command::tcl:
    case Command::nonmarkov:
      f.push_back(rate("gamma0_rad_per_ps"));  // 0 = decoupled limit
      f.push_back(rate("gamma0_cm1"));
      f.push_back(positive("delta_omega_rad_per_ps"));
      f.push_back(positive("delta_omega_cm1"));
      f.push_back({"delta_rad_per_ps", K::real, false, {}, {}, false, {}});
      f.push_back({"delta_cm1", K::real, false, {}, {}, false, {}});
      f.push_back(rate("omega0_rad_per_ps"));
      f.push_back(rate("omega0_cm1"));
      f.push_back(positive("t_final_ps"));
      f.push_back(positive("dt_ps"));
      if (cmd == Command::tcl)
        f.push_back({"sweep_gamma0_rad_per_ps", K::real_list, false, 0.0, {},
                     false, {}});
      break;
    case Command::lindblad:
    case Command::measures:
      f.push_back({"hamiltonian", K::string, false, {}, {}, false, {}});
      f.push_back({"initial_site", K::string, false, {}, {}, false, {}});
      f.push_back({"sink_site", K::string, false, {}, {}, false, {}});
      f.push_back(rate("dephasing_rate"));
      f.push_back(rate("sink_rate"));
      f.push_back(rate("loss_rate"));
      f.push_back(positive("t_final_ps"));
      f.push_back(positive("dt_ps"));
      f.push_back({"record_stride", K::integer, false, 1.0, {}, false, {}});
      if (cmd == Command::measures) {
        f.push_back({"pair_site_a", K::string, false, {}, {}, false, {}});
        f.push_back({"pair_site_b", K::string, false, {}, {}, false, {}});
        f.push_back({"with_discord", K::string, false, {}, {}, false,
                     {"true", "false"}});
      }
      break;
    case Command::thermo:
      f.push_back(positive("temperature_K"));
      f.push_back(positive("temperature_tilde_K"));
      f.push_back({"depolarization", K::real, false, 0.0, 1.0, false, {}});
      break;
    case Command::states:
      f.push_back({"family", K::string, true, {}, {}, false,
                   {"w", "ghz", "single_excitation"}});
      f.push_back({"n_qubits", K::integer, false, 2.0, 12.0, false, {}});
      f.push_back({"alpha_re", K::real, false, {}, {}, false, {}});
      f.push_back({"alpha_im", K::real, false, {}, {}, false, {}});
      f.push_back({"beta_re", K::real, false, {}, {}, false, {}});
      f.push_back({"beta_im", K::real, false, {}, {}, false, {}});
      f.push_back({"exciton_index", K::integer, false, 1.0, 8.0, false, {}});
      f.push_back({"coefficients", K::block, false, {}, {}, false, {}});
      break;
  }
  return f;
}

// Levenshtein distance, for nearest-key suggestions on unknown keys.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::optional<std::string> nearest_key(
    const std::string& key, const std::vector<Field>& fields) {
  std::size_t best = std::string::npos;
  std::string best_key;
  for (const Field& f : fields) {
    std::size_t d = edit_distance(key, f.key);
    if (d < best) {
      best = d;
      best_key = f.key;
    }
  }
  if (best <= std::max<std::size_t>(3, key.size() / 3)) return best_key;
  return std::nullopt;
}

}  // namespace schema

// Full-document validation: every violation is collected, not just the first.
// Unknown keys are rejected with a nearest-key suggestion.
inline RunConfig validate_config(const kv::Document& doc) {
  std::vector<std::string> violations;
  auto where = [&doc](const kv::Entry& e) {
    return e.line > 0 ? doc.source() + " line " + std::to_string(e.line)
                      : doc.source();
  };

  Command cmd = Command::eig;
  bool command_known = false;
  if (!doc.has("command")) {
    violations.push_back(doc.source() + ": missing required key 'command'");
  } else {
    const kv::Entry& e = doc.at("command");
    if (e.is_block) {
      violations.push_back(where(e) + ": 'command' must be a scalar");
    } else {
      for (const auto& [name, c] : command_names())
        if (name == e.scalar) {
          cmd = c;
          command_known = true;
        }
      if (!command_known)
        violations.push_back(where(e) + ": unknown command '" + e.scalar + "'");
    }
  }

  std::vector<schema::Field> fields = schema::fields_for(cmd);
  if (command_known) {
    for (const kv::Entry& e : doc.entries()) {
      const schema::Field* field = nullptr;
      for (const schema::Field& f : fields)
        if (f.key == e.key) field = &f;
      if (!field) {
        std::string msg = where(e) + ": unknown key '" + e.key + "' for command '" +
                          command_name(cmd) + "'";
        if (auto suggestion = schema::nearest_key(e.key, fields))
          msg += " (did you mean '" + *suggestion + "'?)";
        violations.push_back(msg);
        continue;
      }
      if (field->kind == schema::Kind::block) {
        if (!e.is_block)
          violations.push_back(where(e) + ": '" + e.key + "' must be a block");
        continue;
      }
      if (e.is_block) {
        violations.push_back(where(e) + ": '" + e.key + "' must be a scalar");
        continue;
      }
      try {
        switch (field->kind) {
          case schema::Kind::real: {
            double v = kv::parse_real(e.scalar, where(e) + " key '" + e.key + "'");
            if (field->min && (field->min_exclusive ? !(v > *field->min)
                                                    : !(v >= *field->min)))
              violations.push_back(where(e) + ": '" + e.key + "' must be " +
                                   (field->min_exclusive ? "> " : ">= ") +
                                   kv::trim(std::to_string(*field->min)) +
                                   ", got " + e.scalar);
            if (field->max && !(v <= *field->max))
              violations.push_back(where(e) + ": '" + e.key + "' must be <= " +
                                   std::to_string(*field->max) + ", got " +
                                   e.scalar);
            break;
          }
          case schema::Kind::integer: {
            long v = kv::parse_int(e.scalar, where(e) + " key '" + e.key + "'");
            if (field->min && v < static_cast<long>(*field->min))
              violations.push_back(where(e) + ": '" + e.key + "' must be >= " +
                                   std::to_string(static_cast<long>(*field->min)));
            if (field->max && v > static_cast<long>(*field->max))
              violations.push_back(where(e) + ": '" + e.key + "' must be <= " +
                                   std::to_string(static_cast<long>(*field->max)));
            break;
          }
          case schema::Kind::real_list: {
            for (const std::string& item : kv::split_list(e.scalar)) {
              double v = kv::parse_real(item, where(e) + " key '" + e.key + "'");
              if (field->min && (field->min_exclusive ? !(v > *field->min)
                                                      : !(v >= *field->min)))
                violations.push_back(where(e) + ": '" + e.key +
                                     "' entries must be " +
                                     (field->min_exclusive ? "> " : ">= ") +
                                     std::to_string(*field->min));
            }
            break;
          }
          case schema::Kind::string: {
            if (!field->allowed.empty() &&
                std::find(field->allowed.begin(), field->allowed.end(),
                          e.scalar) == field->allowed.end()) {
              std::string opts;
              for (const std::string& a : field->allowed)
                opts += (opts.empty() ? "" : ", ") + a;
              violations.push_back(where(e) + ": '" + e.key + "' must be one of {" +
                                   opts + "}");
            }
            break;
          }
          case schema::Kind::block:
            break;
        }
      } catch (const Error& err) {
        violations.push_back(err.detail());
      }
    }

    for (const schema::Field& f : fields)
      if (f.required && !doc.has(f.key) && f.key != "command")
        violations.push_back(doc.source() + ": missing required key '" + f.key +
                             "'");

    // unit-suffixed alternatives: exactly one of each required pair
    if (cmd == Command::tcl || cmd == Command::nonmarkov) {
      auto both_or_neither = [&](const char* a, const char* b, bool required) {
        bool ha = doc.has(a), hb = doc.has(b);
        if (ha && hb)
          violations.push_back(doc.source() + ": keys '" + a + "' and '" + b +
                               "' are mutually exclusive");
        if (required && !ha && !hb)
          violations.push_back(doc.source() + ": one of '" + std::string(a) +
                               "' or '" + b + "' is required");
      };
      both_or_neither("gamma0_rad_per_ps", "gamma0_cm1", true);
      both_or_neither("delta_omega_rad_per_ps", "delta_omega_cm1", true);
      both_or_neither("delta_rad_per_ps", "delta_cm1", false);
      both_or_neither("omega0_rad_per_ps", "omega0_cm1", false);
    }
    if (cmd == Command::states) {
      bool coeffs = doc.has("coefficients"), exciton = doc.has("exciton_index");
      if (coeffs && exciton)
        violations.push_back(doc.source() +
                             ": 'coefficients' and 'exciton_index' are mutually "
                             "exclusive");
      if (doc.scalar("family").value_or("") == "single_excitation" && !coeffs &&
          !exciton)
        violations.push_back(doc.source() +
                             ": family single_excitation needs 'coefficients' or "
                             "'exciton_index'");
    }
  }

  if (!violations.empty()) {
    std::string joined;
    for (const std::string& v : violations)
      joined += (joined.empty() ? "" : "\n  ") + v;
    throw config_error("ConfigError", joined);
  }

  RunConfig config;
  config.command = cmd;
  config.doc = doc;
  if (auto seed = doc.scalar("seed"))
    config.seed = kv::parse_int(*seed, "seed");
  if (auto h = doc.scalar("hamiltonian")) config.input_paths.push_back(*h);
  return config;
}

}  // namespace excidyn
