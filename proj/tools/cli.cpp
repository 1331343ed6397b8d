#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "discbal/harness.hpp"
#include "discbal/oracle.hpp"
#include "json.hpp"

namespace discbal::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Flags shared by run, sweep and diag; each overrides the matching config field.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> n, d, T, trials, seed, threads;
  std::optional<std::string> strategy;
  std::optional<double> c_alg;
  std::optional<std::string> tau;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  bool timing = false;

  void attach(CLI::App& app, bool with_trials) {
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--n", n, "Row count");
    app.add_option("--d", d, "Column sparsity");
    app.add_option("--T", T, "Column count (default n)");
    app.add_option("--strategy", strategy, "alg1 | random | greedy | majority");
    app.add_option("--c-alg", c_alg, "Threshold constant (default 28)");
    app.add_option("--tau", tau, "Threshold override (a positive real or 'inf')");
    app.add_option("--seed", seed, "Master seed");
    if (with_trials) {
      app.add_option("--trials", trials, "Number of trials");
      app.add_option("--threads", threads, "Worker threads (default DISCBAL_THREADS or all cores)");
      app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
      app.add_flag("--timing", timing, "Record wall-clock time per trial");
    }
    app.add_option("--out", out_path, "Output file (default stdout)");
  }

  Json base() const {
    if (!config_path) return Json::object();
    std::string text;
    try {
      text = read_file(*config_path);
    } catch (const IoError& e) {
      throw ConfigError("--config", e.what());
    }
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
    }
  }

  void apply(Json& j) const {
    if (!j.is_object()) throw ConfigError("$", "expected an object");
    if (n) j["n"] = *n;
    if (d) j["d"] = *d;
    if (T) j["T"] = *T;
    if (strategy) j["strategy"] = *strategy;
    if (c_alg) j["c_alg"] = *c_alg;
    if (tau) {
      if (*tau == "inf" || *tau == "infinity") {
        j["tau_override"] = "inf";
      } else {
        try {
          std::size_t used = 0;
          j["tau_override"] = std::stod(*tau, &used);
          if (used != tau->size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
          throw ConfigError("--tau", "expected a positive real or 'inf'");
        }
      }
    }
    if (trials) j["trials"] = *trials;
    if (seed) j["master_seed"] = *seed;
    if (threads) j["threads"] = *threads;
    if (out_path || format || timing) {
      if (!j.contains("output")) j["output"] = Json::object();
      if (out_path) j["output"]["path"] = *out_path;
      if (format) j["output"]["format"] = *format;
      if (timing) j["output"]["timing"] = true;
    }
  }
};

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty())
    out << contents;
  else
    write_file(path, contents);
}

std::string render(const std::vector<TrialRecord>& records, const std::optional<AggregateSummary>& summary,
                   OutputFormat format) {
  std::ostringstream s;
  if (format == OutputFormat::csv)
    write_csv(records, s);
  else
    write_json(records, summary, s);
  return s.str();
}

void warn_range(const ExperimentConfig& c, std::ostream& err) {
  if (!in_proven_regime(c.n, c.d, c.horizon()))
    err << "warning: (n=" << c.n << ", d=" << c.d << ", T=" << c.horizon()
        << ") lies outside 2 <= d <= (ln ln n)^2 / ln ln ln n, T = n\n";
}

std::string point_label(const ExperimentConfig& c) {
  std::ostringstream s;
  s << "n=" << c.n << " d=" << c.d << " T=" << c.horizon() << " strategy=" << to_string(c.strategy)
    << " tau=" << format_real(c.strategy_params().resolved_tau());
  return s.str();
}

int cmd_run(const Overrides& o, std::ostream& out, std::ostream& err) {
  Json j = o.base();
  o.apply(j);
  const ExperimentConfig config = parse_config(j.dump());
  warn_range(config, err);
  const SweepResult result = run_sweep(config);
  emit(config.output.path, render(result.records, result.summary, config.output.format), out);
  err << point_label(config) << " trials=" << config.trials
      << " mean_max_prefix_disc=" << format_real(result.summary.max_prefix_disc.mean) << '\n';
  return kExitOk;
}

int cmd_sweep(const Overrides& o, std::ostream& out, std::ostream& err) {
  if (!o.config_path) throw ConfigError("--config", "sweep requires a config file");
  Json j = o.base();
  o.apply(j);
  const std::vector<ExperimentConfig> points = parse_sweep(j.dump());
  std::vector<TrialRecord> all;
  for (const auto& config : points) {
    warn_range(config, err);
    SweepResult result = run_sweep(config);
    err << point_label(config) << " trials=" << config.trials
        << " mean_max_prefix_disc=" << format_real(result.summary.max_prefix_disc.mean) << '\n';
    all.insert(all.end(), std::make_move_iterator(result.records.begin()),
               std::make_move_iterator(result.records.end()));
  }
  const auto& output = points.front().output;
  emit(output.path, render(all, std::nullopt, output.format), out);
  return kExitOk;
}

int cmd_diag(const Overrides& o, std::uint64_t trial, std::ostream& out, std::ostream& err) {
  Json j = o.base();
  o.apply(j);
  j["trials"] = trial + 1;
  ExperimentConfig config = parse_config(j.dump());
  const std::size_t T = config.horizon();
  RecordOptions& rec = config.record;
  if (config.n >= 16) {
    if (rec.spread_q_max == 0) rec.spread_q_max = 8;
    if (!rec.m_sets) {
      rec.m_sets = true;
      rec.m_k = {0, 1, 2, 3};
    }
  }
  rec.categories = true;
  rec.untouched_rows = true;
  if (rec.stats_times.empty()) rec.stats_times = {T / 4, T / 2, 3 * T / 4};
  warn_range(config, err);
  const TrialRecord record = run_trial(config, trial);
  std::ostringstream s;
  write_json({record}, std::nullopt, s);
  emit(config.output.path, s.str(), out);
  return kExitOk;
}

Instance seeded_instance(std::uint64_t n, std::uint64_t d, std::uint64_t T, std::uint64_t seed, std::uint64_t trial) {
  try {
    return sample_instance(n, d, T, SeedSpec{seed, trial, Stream::columns});
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--n/--d", e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online discrepancy balancing for random sparse binary columns", "discbal"};
  app.require_subcommand(1);

  Overrides run_opts, sweep_opts, diag_opts;
  auto* run = app.add_subcommand("run", "Run the trials of one config");
  run_opts.attach(*run, true);
  auto* sweep = app.add_subcommand("sweep", "Run every point of a config grid");
  sweep_opts.attach(*sweep, true);
  auto* diag = app.add_subcommand("diag", "Re-run one seeded trial with all diagnostics (JSON)");
  diag_opts.attach(*diag, false);
  std::uint64_t diag_trial = 0;
  diag->add_option("--trial", diag_trial, "Trial index");

  auto* oracle = app.add_subcommand("oracle", "Exact offline discrepancy of a small instance");
  std::optional<std::string> oracle_in;
  std::optional<std::uint64_t> on, od, oT;
  std::uint64_t oseed = 0, otrial = 0;
  std::size_t ocap = kOracleDefaultCap;
  bool oforce = false;
  oracle->add_option("--in", oracle_in, "Instance JSON file");
  oracle->add_option("--n", on, "Row count");
  oracle->add_option("--T", oT, "Column count");
  oracle->add_option("--d", od, "Column sparsity");
  oracle->add_option("--seed", oseed, "Master seed");
  oracle->add_option("--trial", otrial, "Trial index");
  oracle->add_option("--cap", ocap, "Refuse instances with more columns than this");
  oracle->add_flag("--force", oforce, "Search even above the cap");

  auto* gen = app.add_subcommand("gen", "Write a seeded instance as JSON");
  std::uint64_t gn = 0, gd = 0, gT = 0, gseed = 0, gtrial = 0;
  std::string gout;
  gen->add_option("--n", gn, "Row count")->required();
  gen->add_option("--T", gT, "Column count")->required();
  gen->add_option("--d", gd, "Column sparsity")->required();
  gen->add_option("--seed", gseed, "Master seed");
  gen->add_option("--trial", gtrial, "Trial index");
  gen->add_option("--out", gout, "Output file (default stdout)");

  std::vector<const char*> argv;
  argv.push_back("discbal");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, out, err);
    if (diag->parsed()) return cmd_diag(diag_opts, diag_trial, out, err);
    if (oracle->parsed()) {
      Instance instance = [&] {
        if (oracle_in) {
          std::string text;
          try {
            text = read_file(*oracle_in);
          } catch (const IoError& e) {
            throw ConfigError("--in", e.what());
          }
          return parse_instance_json(text);
        }
        if (!on || !od || !oT) throw ConfigError("--n/--T/--d", "give --in or all of --n, --T, --d");
        return seeded_instance(*on, *od, *oT, oseed, otrial);
      }();
      const OfflineResult result = offline_min_disc(instance, OracleOptions{ocap, oforce});
      Json j{{"value", result.value}, {"witness", result.witness}};
      out << j.dump() << '\n';
      return kExitOk;
    }
    if (gen->parsed()) {
      const Instance instance = seeded_instance(gn, gd, gT, gseed, gtrial);
      std::ostringstream s;
      write_instance_json(instance, s);
      emit(gout, s.str(), out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace discbal::cli
