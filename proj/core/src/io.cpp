#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "discbal/harness.hpp"
#include "json.hpp"

namespace discbal {

using Json = nlohmann::ordered_json;

namespace {

// Config parsing -----------------------------------------------------------

std::string at(const std::string& path, std::string_view key) { return path + "." + std::string(key); }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(at(path, key), "unknown field");
  }
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

double as_real(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) return kInfiniteTau;
  throw ConfigError(path, "expected a real number");
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::vector<std::size_t> as_u64_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_u64(j[i], at(path, i)));
  return out;
}

RecordOptions parse_record(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path,
                 {"snapshot_times", "spread_q_max", "categories", "m_sets", "untouched_rows", "stats_times"});
  RecordOptions r;
  if (j.contains("snapshot_times")) r.snapshot_times = as_u64_list(j["snapshot_times"], at(path, "snapshot_times"));
  if (j.contains("stats_times")) r.stats_times = as_u64_list(j["stats_times"], at(path, "stats_times"));
  if (j.contains("spread_q_max")) r.spread_q_max = as_u64(j["spread_q_max"], at(path, "spread_q_max"));
  if (j.contains("untouched_rows")) r.untouched_rows = as_bool(j["untouched_rows"], at(path, "untouched_rows"));
  if (j.contains("categories")) {
    const Json& c = j["categories"];
    const std::string cp = at(path, "categories");
    if (c.is_boolean()) {
      r.categories = c.get<bool>();
    } else {
      require_object(c, cp);
      reject_unknown(c, cp, {"depth"});
      r.categories = true;
      if (c.contains("depth")) r.category_depth = as_u64(c["depth"], at(cp, "depth"));
    }
  }
  if (j.contains("m_sets")) {
    const Json& m = j["m_sets"];
    const std::string mp = at(path, "m_sets");
    require_object(m, mp);
    reject_unknown(m, mp, {"base", "k"});
    r.m_sets = true;
    if (m.contains("base")) r.m_base = as_real(m["base"], at(mp, "base"));
    r.m_k = m.contains("k") ? as_u64_list(m["k"], at(mp, "k")) : std::vector<std::size_t>{0};
  }
  return r;
}

OutputOptions parse_output(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"path", "format", "timing"});
  OutputOptions o;
  if (j.contains("path")) {
    if (!j["path"].is_string()) throw ConfigError(at(path, "path"), "expected a string");
    o.path = j["path"].get<std::string>();
  }
  if (j.contains("format")) {
    const Json& f = j["format"];
    if (f == "csv") o.format = OutputFormat::csv;
    else if (f == "json") o.format = OutputFormat::json;
    else throw ConfigError(at(path, "format"), "expected \"csv\" or \"json\"");
  }
  if (j.contains("timing")) o.timing = as_bool(j["timing"], at(path, "timing"));
  return o;
}

ExperimentConfig config_from_json(const Json& j) {
  const std::string root = "$";
  require_object(j, root);
  reject_unknown(j, root,
                 {"schema_version", "n", "d", "T", "strategy", "c_alg", "tau_override", "trials", "master_seed",
                  "threads", "record", "output"});
  if (j.contains("schema_version") && as_u64(j["schema_version"], "$.schema_version") != kSchemaVersion)
    throw ConfigError("$.schema_version", "unsupported schema version");
  ExperimentConfig c;
  if (!j.contains("n")) throw ConfigError("$.n", "required");
  if (!j.contains("d")) throw ConfigError("$.d", "required");
  c.n = as_u64(j["n"], "$.n");
  c.d = as_u64(j["d"], "$.d");
  if (j.contains("T")) c.T = as_u64(j["T"], "$.T");
  if (j.contains("strategy")) {
    const Json& s = j["strategy"];
    std::optional<StrategyKind> kind = s.is_string() ? parse_strategy(s.get<std::string>()) : std::nullopt;
    if (!kind) throw ConfigError("$.strategy", "expected one of alg1, random, greedy, majority");
    c.strategy = *kind;
  }
  if (j.contains("c_alg")) c.c_alg = as_real(j["c_alg"], "$.c_alg");
  if (j.contains("tau_override") && !j["tau_override"].is_null())
    c.tau_override = as_real(j["tau_override"], "$.tau_override");
  if (j.contains("trials")) c.trials = as_u64(j["trials"], "$.trials");
  if (j.contains("master_seed")) c.master_seed = as_u64(j["master_seed"], "$.master_seed");
  if (j.contains("threads")) c.threads = as_u64(j["threads"], "$.threads");
  if (j.contains("record")) c.record = parse_record(j["record"], "$.record");
  if (j.contains("output")) c.output = parse_output(j["output"], "$.output");
  c.validate();
  return c;
}

Json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError("$", what + " is not valid JSON: " + e.what());
  }
}

// Export helpers -----------------------------------------------------------

Json real_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("$", "bad real value '" + s + "'");
  }
  return j.get<double>();
}

Json moments_json(const Moments& m) {
  return Json{{"mean", m.mean}, {"min", m.min}, {"max", m.max}, {"stddev", m.stddev}};
}

Json diagnostics_json(const TrialDiagnostics& d) {
  Json out = Json::object();
  if (!d.snapshots.empty()) {
    Json arr = Json::array();
    for (const auto& s : d.snapshots) arr.push_back({{"t", s.time}, {"norm", s.norm}, {"nonzero", s.nonzero}});
    out["snapshots"] = std::move(arr);
  }
  if (!d.spreads.empty()) {
    Json arr = Json::array();
    for (const auto& s : d.spreads) {
      Json e{{"q", s.entry.q}, {"k", s.entry.k}, {"s", s.entry.s}, {"reached", s.reached}};
      if (s.spread)
        e["spread"] = {{"t", s.spread->time}, {"ell", s.spread->ell}, {"r", s.spread->r}, {"size", s.spread->size}};
      else
        e["spread"] = nullptr;
      arr.push_back(std::move(e));
    }
    out["spreads"] = std::move(arr);
  }
  if (d.categories) {
    out["categories"] = {{"depth", d.categories->depth},
                         {"sizes", d.categories->sizes},
                         {"categorized", d.categories->categorized},
                         {"uncovered_exceptional", d.categories->uncovered_exceptional}};
  }
  if (d.m_base) out["m_base"] = real_json(*d.m_base);
  if (!d.m_sets.empty()) {
    Json arr = Json::array();
    for (const auto& m : d.m_sets) arr.push_back({{"k", m.k}, {"count", m.count}});
    out["m_sets"] = std::move(arr);
  }
  if (d.untouched_rows) out["untouched_rows"] = *d.untouched_rows;
  if (!d.exceptional_series.empty()) {
    Json arr = Json::array();
    for (const auto& s : d.exceptional_series)
      arr.push_back({{"t", s.time}, {"e_size", s.exceptional}, {"corrected", s.corrected}});
    out["exceptional_series"] = std::move(arr);
  }
  return out;
}

TrialDiagnostics diagnostics_from(const Json& j) {
  TrialDiagnostics d;
  if (j.contains("snapshots"))
    for (const auto& s : j["snapshots"])
      d.snapshots.push_back({s["t"].get<std::size_t>(), s["norm"].get<Partial>(), s["nonzero"].get<std::size_t>()});
  if (j.contains("spreads")) {
    for (const auto& s : j["spreads"]) {
      SpreadDiagnostic sd;
      sd.entry = {s["q"].get<std::size_t>(), s["k"].get<std::uint64_t>(), s["s"].get<std::uint64_t>()};
      sd.reached = s["reached"].get<bool>();
      if (!s["spread"].is_null()) {
        const auto& r = s["spread"];
        sd.spread = SpreadReport{r["t"].get<std::size_t>(), r["ell"].get<Partial>(), r["r"].get<Partial>(),
                                 r["size"].get<std::size_t>()};
      }
      d.spreads.push_back(sd);
    }
  }
  if (j.contains("categories")) {
    const auto& c = j["categories"];
    d.categories = CategoryDiagnostic{c["depth"].get<std::size_t>(), c["sizes"].get<std::vector<std::size_t>>(),
                                      c["categorized"].get<std::size_t>(),
                                      c["uncovered_exceptional"].get<std::size_t>()};
  }
  if (j.contains("m_base")) d.m_base = real_from(j["m_base"]);
  if (j.contains("m_sets"))
    for (const auto& m : j["m_sets"]) d.m_sets.push_back({m["k"].get<std::size_t>(), m["count"].get<std::size_t>()});
  if (j.contains("untouched_rows")) d.untouched_rows = j["untouched_rows"].get<std::size_t>();
  if (j.contains("exceptional_series"))
    for (const auto& s : j["exceptional_series"])
      d.exceptional_series.push_back(
          {s["t"].get<std::size_t>(), s["e_size"].get<std::size_t>(), s["corrected"].get<std::size_t>()});
  return d;
}

Json record_json(const TrialRecord& r) {
  Json j{{"trial", r.trial_index},
         {"master_seed", r.master_seed},
         {"column_seed", r.column_seed},
         {"sigma_seed", r.sigma_seed},
         {"n", r.n},
         {"d", r.d},
         {"T", r.T},
         {"strategy", std::string(to_string(r.strategy))},
         {"tau", real_json(r.tau)},
         {"final_disc", r.final_disc},
         {"max_prefix_disc", r.max_prefix_disc},
         {"e_size", r.e_size_final},
         {"corrected", r.corrected_columns},
         {"divergence", r.sign_divergence_count},
         {"correction_violations", r.correction_violations},
         {"proven_regime", r.proven_regime},
         {"wall_ms", r.wall_time_ms}};
  if (r.diagnostics) j["diagnostics"] = diagnostics_json(*r.diagnostics);
  return j;
}

TrialRecord record_from(const Json& j) {
  TrialRecord r;
  r.trial_index = j["trial"].get<std::size_t>();
  r.master_seed = j["master_seed"].get<std::uint64_t>();
  r.column_seed = j["column_seed"].get<std::uint64_t>();
  r.sigma_seed = j["sigma_seed"].get<std::uint64_t>();
  r.n = j["n"].get<std::size_t>();
  r.d = j["d"].get<std::size_t>();
  r.T = j["T"].get<std::size_t>();
  const auto kind = parse_strategy(j["strategy"].get<std::string>());
  if (!kind) throw ConfigError("$.records[].strategy", "unknown strategy");
  r.strategy = *kind;
  r.tau = real_from(j["tau"]);
  r.final_disc = j["final_disc"].get<Partial>();
  r.max_prefix_disc = j["max_prefix_disc"].get<Partial>();
  r.e_size_final = j["e_size"].get<std::size_t>();
  r.corrected_columns = j["corrected"].get<std::size_t>();
  r.sign_divergence_count = j["divergence"].get<std::size_t>();
  r.correction_violations = j["correction_violations"].get<std::size_t>();
  r.proven_regime = j["proven_regime"].get<bool>();
  r.wall_time_ms = j["wall_ms"].get<double>();
  if (j.contains("diagnostics")) r.diagnostics = diagnostics_from(j["diagnostics"]);
  return r;
}

Json summary_to_json(const AggregateSummary& s) {
  Json j{{"trials", s.trials},
         {"max_prefix_disc", moments_json(s.max_prefix_disc)},
         {"final_disc", moments_json(s.final_disc)},
         {"e_size", moments_json(s.e_size_final)},
         {"frac_exceptional_nonempty", s.frac_exceptional_nonempty},
         {"frac_corrected", s.frac_corrected}};
  if (!s.spread_reached.empty()) j["spread_reached"] = s.spread_reached;
  if (!s.m_set_nonempty.empty()) j["m_set_nonempty"] = s.m_set_nonempty;
  if (s.untouched_rows) j["untouched_rows"] = moments_json(*s.untouched_rows);
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  return config_from_json(parse_json_text(json_text, "config"));
}

std::vector<ExperimentConfig> parse_sweep(std::string_view json_text) {
  const Json j = parse_json_text(json_text, "sweep config");
  require_object(j, "$");
  constexpr std::string_view grid_fields[] = {"n", "d", "T", "strategy", "c_alg", "tau_override"};

  std::vector<Json> points{j};
  for (std::string_view field : grid_fields) {
    const std::string key(field);
    if (!j.contains(key) || !j[key].is_array()) continue;
    if (j[key].empty()) throw ConfigError("$." + key, "grid axis is empty");
    std::vector<Json> expanded;
    for (const auto& p : points) {
      for (const auto& v : j[key]) {
        Json q = p;
        q[key] = v;
        expanded.push_back(std::move(q));
      }
    }
    points = std::move(expanded);
  }
  std::vector<ExperimentConfig> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(config_from_json(p));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.column_seed << ',' << r.n << ',' << r.d << ',' << r.T << ','
        << to_string(r.strategy) << ',' << format_real(r.tau) << ',' << r.final_disc << ',' << r.max_prefix_disc
        << ',' << r.e_size_final << ',' << r.corrected_columns << ',' << r.sign_divergence_count << ','
        << format_real(r.wall_time_ms) << '\n';
  }
}

void write_json(const std::vector<TrialRecord>& records, const std::optional<AggregateSummary>& summary,
                std::ostream& out) {
  Json doc{{"schema_version", kSchemaVersion}};
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  doc["records"] = std::move(arr);
  if (summary) doc["summary"] = summary_to_json(*summary);
  out << doc.dump(2) << '\n';
}

std::vector<TrialRecord> parse_records_json(std::string_view json_text) {
  const Json doc = parse_json_text(json_text, "record file");
  if (!doc.is_object() || !doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion)
    throw ConfigError("$.schema_version", "missing or unsupported schema version");
  std::vector<TrialRecord> out;
  try {
    for (const auto& r : doc.at("records")) out.push_back(record_from(r));
  } catch (const Json::exception& e) {
    throw ConfigError("$.records", e.what());
  }
  return out;
}

std::string summary_json(const AggregateSummary& summary) { return summary_to_json(summary).dump(2); }

void write_instance_json(const Instance& instance, std::ostream& out) {
  Json cols = Json::array();
  for (std::size_t t = 0; t < instance.columns(); ++t) {
    Json col = Json::array();
    for (RowIndex r : instance.column(t)) col.push_back(r + 1);
    cols.push_back(std::move(col));
  }
  Json doc{{"schema_version", kSchemaVersion},
           {"n", instance.rows()},
           {"d", instance.sparsity()},
           {"T", instance.columns()},
           {"columns", std::move(cols)}};
  out << doc.dump() << '\n';
}

Instance parse_instance_json(std::string_view json_text) {
  const Json doc = parse_json_text(json_text, "instance file");
  require_object(doc, "$");
  reject_unknown(doc, "$", {"schema_version", "n", "d", "T", "columns"});
  if (!doc.contains("schema_version") || as_u64(doc["schema_version"], "$.schema_version") != kSchemaVersion)
    throw ConfigError("$.schema_version", "missing or unsupported schema version");
  for (const char* key : {"n", "d", "columns"})
    if (!doc.contains(key)) throw ConfigError(std::string("$.") + key, "required");
  const std::size_t n = as_u64(doc["n"], "$.n");
  const std::size_t d = as_u64(doc["d"], "$.d");
  if (n == 0 || n > std::numeric_limits<RowIndex>::max()) throw ConfigError("$.n", "out of range");
  if (d == 0 || d > n) throw ConfigError("$.d", "must lie in [1, n]");
  const Json& cols = doc["columns"];
  if (!cols.is_array()) throw ConfigError("$.columns", "expected an array");
  if (doc.contains("T") && as_u64(doc["T"], "$.T") != cols.size())
    throw ConfigError("$.T", "does not match the number of columns");
  Instance instance(n, d);
  instance.reserve(cols.size());
  for (std::size_t t = 0; t < cols.size(); ++t) {
    const std::string path = at(std::string("$.columns"), t);
    if (!cols[t].is_array()) throw ConfigError(path, "expected an array of row indices");
    std::vector<RowIndex> support;
    for (std::size_t k = 0; k < cols[t].size(); ++k) {
      const std::uint64_t row = as_u64(cols[t][k], at(path, k));
      if (row == 0 || row > n) throw ConfigError(at(path, k), "row index outside [1, n]");
      support.push_back(static_cast<RowIndex>(row - 1));
    }
    try {
      instance.push_back(SparseColumn(std::move(support), n));
    } catch (const std::exception& e) {
      throw ConfigError(path, e.what());
    }
  }
  return instance;
}

}  // namespace discbal
