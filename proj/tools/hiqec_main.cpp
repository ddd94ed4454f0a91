// Command-line front end: composes the state / observable / noise / QEC
// pipeline into subcommands with JSON, CSV and plain-text reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hiqec/hiqec.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTolerance = 3;

struct RunConfig {
  int n = 4;
  std::string state = "gaussian"; // gaussian | random | file
  double mu = 0.0;
  bool mu_set = false; // defaults to the register midpoint (2^n - 1)/2
  double sigma = 50.0 / 3.0;
  std::uint64_t seed = 1;
  std::string state_file;
  std::string observable = "phi_power"; // phi_power | path to a file
  int power = 2;

  double p = 1e-3;
  double p_th = 0.0057;
  double c0 = 0.03;
  long n_cycles = 1;
  double epsilon = 1e-2;
  double eps_per_cycle = 0.0;
  bool eps_per_cycle_set = false;
  int d_min = 3;
  int d_max = 51;

  std::string format = "text"; // json | csv | text
  std::string output;          // empty = stdout
  std::string config_path;

  // subcommand extras
  std::string sort = "index"; // expectations: index | magnitude
  bool include_zeros = false; // decompose
  double eps_min = 1e-16;     // sweep
  double eps_max = 1e-3;
  int points_per_decade = 20;
  int trials = -1; // verify; -1 = pick by register size
};

// Machine formats carry 12 significant digits, human text 4.
std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string fmt4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// JSON numbers are rounded through their 12-digit decimal form so reports
// are byte-stable and re-parse to the printed value.
double round12(double x) { return std::stod(fmt12(x)); }

ordered_json json_number(double x) { return ordered_json(round12(x)); }

void write_report(const RunConfig &cfg, const std::string &body) {
  if (cfg.output.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) {
    throw hiqec::ValidationError("cannot write output file: " + cfg.output);
  }
  out << body;
}

// Shared option set; every subcommand accepts the full pipeline
// configuration even when it only uses part of it.
struct OptionRefs {
  CLI::Option *mu = nullptr;
  CLI::Option *eps_per_cycle = nullptr;
};

OptionRefs add_common_options(CLI::App *cmd, RunConfig &cfg) {
  OptionRefs refs;
  cmd->add_option("--n", cfg.n, "Number of qubits")
      ->check(CLI::Range(1, hiqec::kHardQubitLimit));
  cmd->add_option("--state", cfg.state,
                  "State source: gaussian | random | file")
      ->check(CLI::IsMember({"gaussian", "random", "file"}));
  refs.mu = cmd->add_option(
      "--mu", cfg.mu, "Gaussian center in grid units (default (2^n-1)/2)");
  cmd->add_option("--sigma", cfg.sigma,
                  "Gaussian width in grid units (default 50/3)");
  cmd->add_option("--seed", cfg.seed, "Seed for state=random");
  cmd->add_option("--state-file", cfg.state_file,
                  "Amplitude file (JSON array or one value per line)");
  cmd->add_option("--observable", cfg.observable,
                  "Observable: phi_power | path to a diagonal file");
  cmd->add_option("--power", cfg.power, "Field power p for phi_power")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--p", cfg.p, "Physical per-step error rate");
  cmd->add_option("--p-th", cfg.p_th, "Surface-code threshold");
  cmd->add_option("--c0", cfg.c0, "Logical error rate prefactor");
  cmd->add_option("--n-cycles", cfg.n_cycles, "Number of code cycles");
  cmd->add_option("--epsilon", cfg.epsilon,
                  "Target fractional error after n_cycles");
  refs.eps_per_cycle = cmd->add_option(
      "--eps-per-cycle", cfg.eps_per_cycle,
      "Per-cycle error budget (shorthand for epsilon with n_cycles = 1)");
  cmd->add_option("--d-min", cfg.d_min, "Smallest code distance");
  cmd->add_option("--d-max", cfg.d_max, "Largest code distance");
  cmd->add_option("--format", cfg.format, "Output format: json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--output", cfg.output, "Write the report to a file");
  cmd->add_option("--config", cfg.config_path,
                  "JSON config file; command-line flags win");
  return refs;
}

// Applies config-file values underneath any flags given on the command
// line: a key is honored only when its flag was not passed.
void apply_config_file(const CLI::App &cmd, RunConfig &cfg) {
  if (cfg.config_path.empty()) {
    return;
  }
  std::ifstream in(cfg.config_path);
  if (!in) {
    throw hiqec::ValidationError("cannot open config file: " +
                                 cfg.config_path);
  }
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &ex) {
    throw hiqec::ValidationError(std::string("invalid config JSON: ") +
                                 ex.what());
  }
  if (!doc.is_object()) {
    throw hiqec::ValidationError("config file must hold a JSON object");
  }
  auto unset = [&cmd](const std::string &flag) {
    const CLI::Option *opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  auto load = [&doc, &unset](const char *key, const std::string &flag,
                             auto &field) {
    if (doc.contains(key) && unset(flag)) {
      doc.at(key).get_to(field);
      return true;
    }
    return false;
  };
  load("n", "--n", cfg.n);
  load("state", "--state", cfg.state);
  if (load("mu", "--mu", cfg.mu)) {
    cfg.mu_set = true;
  }
  load("sigma", "--sigma", cfg.sigma);
  load("seed", "--seed", cfg.seed);
  load("state_file", "--state-file", cfg.state_file);
  load("observable", "--observable", cfg.observable);
  load("power", "--power", cfg.power);
  load("p", "--p", cfg.p);
  load("p_th", "--p-th", cfg.p_th);
  load("c0", "--c0", cfg.c0);
  load("n_cycles", "--n-cycles", cfg.n_cycles);
  load("epsilon", "--epsilon", cfg.epsilon);
  if (load("eps_per_cycle", "--eps-per-cycle", cfg.eps_per_cycle)) {
    cfg.eps_per_cycle_set = true;
  }
  load("d_min", "--d-min", cfg.d_min);
  load("d_max", "--d-max", cfg.d_max);
  load("format", "--format", cfg.format);
  load("output", "--output", cfg.output);
}

void finalize_config(RunConfig &cfg, const OptionRefs &refs) {
  if (refs.mu != nullptr && refs.mu->count() > 0) {
    cfg.mu_set = true;
  }
  if (refs.eps_per_cycle != nullptr && refs.eps_per_cycle->count() > 0) {
    cfg.eps_per_cycle_set = true;
  }
  if (!cfg.mu_set) {
    cfg.mu = (std::pow(2.0, cfg.n) - 1.0) / 2.0;
  }
  if (cfg.eps_per_cycle_set) {
    cfg.epsilon = cfg.eps_per_cycle;
    cfg.n_cycles = 1;
  }
}

hiqec::RealWavefunction make_state(const RunConfig &cfg) {
  if (cfg.state == "gaussian") {
    return hiqec::gaussian(cfg.n, cfg.mu, cfg.sigma);
  }
  if (cfg.state == "random") {
    return hiqec::random_state(cfg.n, cfg.seed);
  }
  if (cfg.state_file.empty()) {
    throw hiqec::ValidationError("state=file requires --state-file");
  }
  hiqec::RealWavefunction w = hiqec::load_wavefunction(cfg.state_file);
  if (w.num_qubits() != cfg.n) {
    throw hiqec::ValidationError(
        "state file holds " + std::to_string(w.num_qubits()) +
        " qubits but --n is " + std::to_string(cfg.n));
  }
  return w;
}

hiqec::DiagonalObservable make_observable(const RunConfig &cfg) {
  if (cfg.observable == "phi_power") {
    return hiqec::phi_power(cfg.n, cfg.power);
  }
  hiqec::DiagonalObservable o = hiqec::load_observable(cfg.observable);
  if (o.num_qubits() != cfg.n) {
    throw hiqec::ValidationError(
        "observable file holds " + std::to_string(o.num_qubits()) +
        " qubits but --n is " + std::to_string(cfg.n));
  }
  return o;
}

hiqec::SurfaceCodeParams make_params(const RunConfig &cfg) {
  hiqec::SurfaceCodeParams params;
  params.p = cfg.p;
  params.p_th = cfg.p_th;
  params.c0 = cfg.c0;
  params.n_cycles = cfg.n_cycles;
  params.epsilon = cfg.epsilon;
  params.d_min = cfg.d_min;
  params.d_max = cfg.d_max;
  params.validate();
  return params;
}

std::string describe_state(const RunConfig &cfg) {
  if (cfg.state == "gaussian") {
    return "gaussian(mu=" + fmt4(cfg.mu) + ", sigma=" + fmt4(cfg.sigma) + ")";
  }
  if (cfg.state == "random") {
    return "random(seed=" + std::to_string(cfg.seed) + ")";
  }
  return "file(" + cfg.state_file + ")";
}

std::string q_s_label(const std::optional<int> &q) {
  return q ? std::to_string(*q) : "-";
}

// ---------------------------------------------------------------- commands

int cmd_expectations(const RunConfig &cfg) {
  const hiqec::ExpectationVector e = hiqec::expectations(make_state(cfg));
  std::vector<std::uint32_t> order(e.size());
  for (std::uint32_t j = 0; j < e.size(); ++j) {
    order[j] = j;
  }
  if (cfg.sort == "magnitude") {
    std::stable_sort(order.begin(), order.end(),
                     [&e](std::uint32_t a, std::uint32_t b) {
                       return std::abs(e[a]) > std::abs(e[b]);
                     });
  }

  std::ostringstream body;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["n"] = cfg.n;
    doc["state"] = describe_state(cfg);
    doc["rows"] = ordered_json::array();
    for (std::uint32_t j : order) {
      const hiqec::BasisIndex idx(j, cfg.n);
      ordered_json row;
      row["j"] = j;
      row["sequency"] = hiqec::sequency(idx);
      const auto q = hiqec::most_uv_qubit(idx);
      row["q_s"] = q ? ordered_json(*q) : ordered_json(nullptr);
      row["expectation"] = json_number(e[j]);
      doc["rows"].push_back(row);
    }
    body << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    body << "j,sequency,q_s,expectation\n";
    for (std::uint32_t j : order) {
      const hiqec::BasisIndex idx(j, cfg.n);
      body << j << "," << hiqec::sequency(idx) << ","
           << q_s_label(hiqec::most_uv_qubit(idx)) << "," << fmt12(e[j])
           << "\n";
    }
  } else {
    body << "expectations for " << describe_state(cfg) << " on " << cfg.n
         << " qubits\n";
    body << "   j  seq  q_s  <O_j>\n";
    for (std::uint32_t j : order) {
      const hiqec::BasisIndex idx(j, cfg.n);
      char line[96];
      std::snprintf(line, sizeof(line), "%4u %4u %4s  %s\n", j,
                    hiqec::sequency(idx),
                    q_s_label(hiqec::most_uv_qubit(idx)).c_str(),
                    fmt4(e[j]).c_str());
      body << line;
    }
  }
  write_report(cfg, body.str());
  return kExitOk;
}

int cmd_decompose(const RunConfig &cfg) {
  const hiqec::PauliDecomposition b = hiqec::decompose(make_observable(cfg));
  const auto rows = hiqec::sequency_report(b, cfg.include_zeros);

  std::ostringstream body;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["n"] = cfg.n;
    doc["observable"] = cfg.observable == "phi_power"
                            ? "phi^" + std::to_string(cfg.power)
                            : cfg.observable;
    doc["rows"] = ordered_json::array();
    for (const auto &row : rows) {
      ordered_json r;
      r["j"] = row.j;
      r["sequency"] = row.sequency;
      r["q_s"] =
          row.most_uv ? ordered_json(*row.most_uv) : ordered_json(nullptr);
      r["beta"] = json_number(row.beta);
      doc["rows"].push_back(r);
    }
    body << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    body << "j,sequency,q_s,beta\n";
    for (const auto &row : rows) {
      body << row.j << "," << row.sequency << "," << q_s_label(row.most_uv)
           << "," << fmt12(row.beta) << "\n";
    }
  } else {
    body << "decomposition rows (sequency order)\n";
    body << "   j  seq  q_s  beta\n";
    for (const auto &row : rows) {
      char line[96];
      std::snprintf(line, sizeof(line), "%4u %4u %4s  %s\n", row.j,
                    row.sequency, q_s_label(row.most_uv).c_str(),
                    fmt4(row.beta).c_str());
      body << line;
    }
  }
  write_report(cfg, body.str());
  return kExitOk;
}

int cmd_gammas(const RunConfig &cfg) {
  const hiqec::PauliDecomposition b = hiqec::decompose(make_observable(cfg));
  const hiqec::ExpectationVector e = hiqec::expectations(make_state(cfg));
  const double noiseless = hiqec::noiseless_expectation(b, e);
  const hiqec::SensitivityProfile g = hiqec::sensitivities(b, e);

  std::optional<hiqec::DecayFit> fit;
  try {
    fit = hiqec::decay_fit(g);
  } catch (const hiqec::FitError &) {
    // fewer than three positive entries: xi stays undefined
  }

  std::ostringstream body;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["gamma_uv_first"] = ordered_json::array();
    for (double v : g.gamma) {
      doc["gamma_uv_first"].push_back(json_number(v));
    }
    doc["gamma_ir_first"] = ordered_json::array();
    for (double v : g.ir_first()) {
      doc["gamma_ir_first"].push_back(json_number(v));
    }
    doc["xi"] = fit ? json_number(fit->xi) : ordered_json(nullptr);
    doc["fit_quality"] =
        fit ? json_number(fit->quality) : ordered_json(nullptr);
    doc["expectation_noiseless"] = json_number(noiseless);
    body << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    body << "qubit,gamma_uv_first,gamma_ir_first\n";
    const std::vector<double> ir = g.ir_first();
    for (int q = 0; q < g.num_qubits(); ++q) {
      body << q << "," << fmt12(g.gamma[static_cast<std::size_t>(q)]) << ","
           << fmt12(ir[static_cast<std::size_t>(q)]) << "\n";
    }
  } else {
    body << "noise sensitivities for " << describe_state(cfg) << "\n";
    body << "  UV-first (qubit 0 ... " << cfg.n - 1 << "): ";
    for (double v : g.gamma) {
      body << fmt4(v) << " ";
    }
    body << "\n  IR-first (qubit " << cfg.n - 1 << " ... 0): ";
    for (double v : g.ir_first()) {
      body << fmt4(v) << " ";
    }
    body << "\n  noiseless expectation: " << fmt4(noiseless) << "\n";
    if (fit) {
      body << "  decay toward UV: xi = " << fmt4(fit->xi)
           << ", fit quality = " << fmt4(fit->quality) << "\n";
    } else {
      body << "  decay toward UV: undefined (needs 3 positive entries)\n";
    }
  }
  write_report(cfg, body.str());
  return kExitOk;
}

ordered_json assignment_json(const hiqec::DistanceAssignment &a) {
  ordered_json doc;
  doc["d_ir_first"] = a.ir_first();
  doc["total_physical"] = a.total_physical;
  doc["achieved_error_per_cycle"] = json_number(a.achieved_error_per_cycle);
  return doc;
}

void assignment_text(std::ostringstream &body, const std::string &name,
                     const hiqec::DistanceAssignment &a) {
  body << "  " << name << ": d (IR first) = {";
  const std::vector<int> ir = a.ir_first();
  for (std::size_t i = 0; i < ir.size(); ++i) {
    body << ir[i] << (i + 1 < ir.size() ? ", " : "");
  }
  body << "}, physical qubits = " << a.total_physical
       << ", per-cycle error = " << fmt4(a.achieved_error_per_cycle) << "\n";
}

int cmd_optimize(const RunConfig &cfg) {
  const hiqec::SurfaceCodeParams params = make_params(cfg);
  const hiqec::SensitivityProfile g =
      hiqec::sensitivities(hiqec::decompose(make_observable(cfg)),
                           hiqec::expectations(make_state(cfg)));

  const hiqec::DistanceAssignment homo =
      hiqec::homogeneous_distance(g, params);
  const hiqec::DistanceAssignment uniform =
      hiqec::uniform_error_distances(g, params);
  const hiqec::DistanceAssignment optimized =
      hiqec::optimize_distances(g, params);

  const double red_uniform =
      100.0 * (1.0 - static_cast<double>(uniform.total_physical) /
                         static_cast<double>(homo.total_physical));
  const double red_optimized =
      100.0 * (1.0 - static_cast<double>(optimized.total_physical) /
                         static_cast<double>(homo.total_physical));

  std::ostringstream body;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["n"] = cfg.n;
    doc["eps_per_cycle"] = json_number(params.eps_per_cycle());
    doc["gamma_ir_first"] = ordered_json::array();
    for (double v : g.ir_first()) {
      doc["gamma_ir_first"].push_back(json_number(v));
    }
    doc["homogeneous"] = assignment_json(homo);
    doc["uniform_error"] = assignment_json(uniform);
    doc["optimized"] = assignment_json(optimized);
    doc["reduction_uniform_pct"] = json_number(red_uniform);
    doc["reduction_optimized_pct"] = json_number(red_optimized);
    body << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    body << "scheme,total_physical,achieved_error_per_cycle,reduction_pct\n";
    body << "homogeneous," << homo.total_physical << ","
         << fmt12(homo.achieved_error_per_cycle) << "," << fmt12(0.0) << "\n";
    body << "uniform_error," << uniform.total_physical << ","
         << fmt12(uniform.achieved_error_per_cycle) << ","
         << fmt12(red_uniform) << "\n";
    body << "optimized," << optimized.total_physical << ","
         << fmt12(optimized.achieved_error_per_cycle) << ","
         << fmt12(red_optimized) << "\n";
  } else {
    body << "distance assignment for " << describe_state(cfg) << ", budget "
         << fmt4(params.eps_per_cycle()) << " per cycle\n";
    assignment_text(body, "homogeneous  ", homo);
    assignment_text(body, "uniform error", uniform);
    assignment_text(body, "optimized    ", optimized);
    body << "  reduction: uniform error " << fmt4(red_uniform)
         << "%, optimized " << fmt4(red_optimized) << "%\n";
  }
  write_report(cfg, body.str());
  return kExitOk;
}

int cmd_sweep(const RunConfig &cfg) {
  if (!(cfg.eps_min > 0.0) || !(cfg.eps_min < cfg.eps_max) ||
      !(cfg.eps_max < 1.0)) {
    throw hiqec::ParameterError("sweep needs 0 < eps-min < eps-max < 1");
  }
  const hiqec::SurfaceCodeParams params = make_params(cfg);
  const hiqec::SensitivityProfile g =
      hiqec::sensitivities(hiqec::decompose(make_observable(cfg)),
                           hiqec::expectations(make_state(cfg)));
  const std::vector<double> grid =
      hiqec::log_grid(cfg.eps_min, cfg.eps_max, cfg.points_per_decade);
  const std::vector<hiqec::SweepRow> rows =
      hiqec::reduction_sweep(g, params, grid);

  std::ostringstream body;
  auto cell = [](const std::optional<long long> &v) {
    return v ? std::to_string(*v) : std::string();
  };
  auto cellf = [](const std::optional<double> &v) {
    return v ? fmt12(*v) : std::string();
  };
  if (cfg.format == "json") {
    ordered_json doc = ordered_json::array();
    for (const auto &row : rows) {
      ordered_json r;
      r["eps_per_cycle"] = json_number(row.eps_per_cycle);
      r["homogeneous_qubits"] = row.homogeneous_qubits
                                    ? ordered_json(*row.homogeneous_qubits)
                                    : ordered_json(nullptr);
      r["uniform_qubits"] = row.uniform_qubits
                                ? ordered_json(*row.uniform_qubits)
                                : ordered_json(nullptr);
      r["optimized_qubits"] = row.optimized_qubits
                                  ? ordered_json(*row.optimized_qubits)
                                  : ordered_json(nullptr);
      r["reduction_uniform_pct"] =
          row.reduction_uniform_pct ? json_number(*row.reduction_uniform_pct)
                                    : ordered_json(nullptr);
      r["reduction_optimized_pct"] =
          row.reduction_optimized_pct
              ? json_number(*row.reduction_optimized_pct)
              : ordered_json(nullptr);
      doc.push_back(r);
    }
    body << doc.dump(2) << "\n";
  } else {
    // CSV doubles as the text format here: plot data either way
    body << "eps_per_cycle,homogeneous_qubits,uniform_qubits,"
            "optimized_qubits,reduction_uniform_pct,reduction_optimized_pct"
         << "\n";
    for (const auto &row : rows) {
      body << fmt12(row.eps_per_cycle) << "," << cell(row.homogeneous_qubits)
           << "," << cell(row.uniform_qubits) << ","
           << cell(row.optimized_qubits) << ","
           << cellf(row.reduction_uniform_pct) << ","
           << cellf(row.reduction_optimized_pct) << "\n";
    }
  }
  write_report(cfg, body.str());
  return kExitOk;
}

int cmd_verify(const RunConfig &cfg) {
  if (cfg.n > 10) {
    throw hiqec::ResourceError(
        "verify is limited to 10 qubits (dense density-matrix oracle)");
  }
  const hiqec::RealWavefunction w = make_state(cfg);
  const hiqec::DiagonalObservable o = make_observable(cfg);
  const int trials = cfg.trials >= 0 ? cfg.trials : (cfg.n <= 6 ? 50 : 5);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> eta_dist(0.0, 0.25);
  std::uniform_real_distribution<double> diag_dist(-1.0, 1.0);

  auto deviation = [](const hiqec::RealWavefunction &state,
                      const hiqec::DiagonalObservable &obs,
                      const hiqec::NoiseVector &eta) {
    const double via_oracle = hiqec::kraus_oracle(state, obs, eta);
    const double via_formula = hiqec::noisy_expectation(
        hiqec::decompose(obs), hiqec::expectations(state), eta);
    return std::abs(via_oracle - via_formula);
  };

  double max_dev = 0.0;
  // configured instance first, then randomized (state, diagonal, eta) trials
  {
    std::vector<double> eta(static_cast<std::size_t>(cfg.n));
    for (double &x : eta) {
      x = eta_dist(rng);
    }
    max_dev = std::max(max_dev, deviation(w, o, hiqec::NoiseVector(eta)));
    max_dev =
        std::max(max_dev, deviation(w, o, hiqec::NoiseVector::zero(cfg.n)));
  }
  for (int t = 0; t < trials; ++t) {
    const hiqec::RealWavefunction ws =
        hiqec::random_state(cfg.n, cfg.seed + 1000u + t);
    std::vector<double> diag(ws.dimension());
    for (double &x : diag) {
      x = diag_dist(rng);
    }
    std::vector<double> eta(static_cast<std::size_t>(cfg.n));
    for (double &x : eta) {
      x = eta_dist(rng);
    }
    max_dev = std::max(
        max_dev, deviation(ws, hiqec::DiagonalObservable(diag, "random"),
                           hiqec::NoiseVector(eta)));
  }

  const double tolerance = 1e-9;
  const bool pass = max_dev <= tolerance;
  std::ostringstream body;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["n"] = cfg.n;
    doc["trials"] = trials;
    doc["max_abs_deviation"] = json_number(max_dev);
    doc["tolerance"] = json_number(tolerance);
    doc["pass"] = pass;
    body << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    body << "n,trials,max_abs_deviation,tolerance,pass\n";
    body << cfg.n << "," << trials << "," << fmt12(max_dev) << ","
         << fmt12(tolerance) << "," << (pass ? "true" : "false") << "\n";
  } else {
    body << "oracle cross-check on " << cfg.n << " qubits, " << trials
         << " randomized trials\n";
    body << "  max |oracle - product formula| = " << fmt4(max_dev)
         << (pass ? "  (pass)" : "  (FAIL)") << "\n";
  }
  write_report(cfg, body.str());
  return pass ? kExitOk : kExitTolerance;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Walsh-basis noise sensitivities and heterogeneous "
               "surface-code distance allocation"};
  app.require_subcommand(1);

  RunConfig cfg;
  struct Registered {
    CLI::App *cmd;
    OptionRefs refs;
    int (*run)(const RunConfig &);
  };
  std::vector<Registered> commands;

  auto add = [&](const char *name, const char *help,
                 int (*run)(const RunConfig &)) -> CLI::App * {
    CLI::App *cmd = app.add_subcommand(name, help);
    commands.push_back({cmd, add_common_options(cmd, cfg), run});
    return cmd;
  };

  CLI::App *expectations_cmd = add(
      "expectations", "Tabulate <O_j> with sequency labels", &cmd_expectations);
  expectations_cmd
      ->add_option("--sort", cfg.sort, "Row order: index | magnitude")
      ->check(CLI::IsMember({"index", "magnitude"}));

  CLI::App *decompose_cmd =
      add("decompose", "Project an observable onto the Z-string basis",
          &cmd_decompose);
  decompose_cmd->add_flag("--include-zeros", cfg.include_zeros,
                          "Keep rows with vanishing coefficients");

  add("gammas", "Per-qubit noise sensitivities and their UV decay",
      &cmd_gammas);
  add("optimize",
      "Homogeneous, uniform-error and optimized distance assignments",
      &cmd_optimize);

  CLI::App *sweep_cmd =
      add("sweep", "Qubit-reduction curve over a per-cycle error budget grid",
          &cmd_sweep);
  sweep_cmd->add_option("--eps-min", cfg.eps_min, "Smallest per-cycle budget");
  sweep_cmd->add_option("--eps-max", cfg.eps_max, "Largest per-cycle budget");
  sweep_cmd
      ->add_option("--points-per-decade", cfg.points_per_decade,
                   "Grid density")
      ->check(CLI::PositiveNumber);

  CLI::App *verify_cmd =
      add("verify",
          "Cross-check the product formula against the Kraus "
          "density-matrix oracle",
          &cmd_verify);
  verify_cmd->add_option(
      "--trials", cfg.trials,
      "Randomized trials (default 50, or 5 above 6 qubits)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const Registered &entry : commands) {
      if (entry.cmd->parsed()) {
        apply_config_file(*entry.cmd, cfg);
        finalize_config(cfg, entry.refs);
        hiqec::check_qubit_count(cfg.n);
        return entry.run(cfg);
      }
    }
    std::cerr << "no subcommand selected\n";
    return kExitValidation;
  } catch (const hiqec::InfeasibleError &e) {
    std::cerr << "infeasible: " << e.what();
    if (e.binding_qubit >= 0) {
      std::cerr << " (binding qubit " << e.binding_qubit << ")";
    }
    std::cerr << "\n";
    return kExitInfeasible;
  } catch (const hiqec::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
