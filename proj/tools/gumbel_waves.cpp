// Copyright 2026 The gumbel-waves Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gumbel/analysis.hpp"
#include "gumbel/dfmm.hpp"
#include "gumbel/engine.hpp"
#include "gumbel/gw.hpp"
#include "gumbel/io.hpp"
#include "gumbel/qmm.hpp"
#include "gumbel/sfmm.hpp"
#include "gumbel/tails.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gumbel;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const std::map<std::string, ConfigFile::Section> kDefaults = {
    {"run", {{"seed", "1"}, {"replicas", "1"}, {"jobs", "1"}}},
    {"tail", {{"variant", "type1"}, {"n", "1"}, {"alpha", "1"}, {"L", ""}}},
    {"model",
     {{"variant", "fmm"},
      {"beta", "0.01"},
      {"horizon", "100"},
      {"initial_fitness", "1"},
      {"initial_count", "1"},
      {"family_cap", "100000"},
      {"exact_cap", "1000000"},
      {"individual_mutant_cap", "10000"},
      {"top_k", "64"},
      {"bulk_bins", "64"},
      {"max_log10_X", "inf"}}},
    {"dfmm", {{"beta", "0.1"}, {"t", "1000"}, {"x0", ""}, {"check_signs", "1"}}},
    {"sfmm", {{"beta", "0.1"}, {"horizon", "1000"}, {"switch_threshold", "1000000"}}},
    {"qmm",
     {{"alpha", "2"},
      {"c", format_double(20.0 * std::numbers::ln10)},
      {"beta", "1e-20"},
      {"logX0", format_double(100.0 * std::numbers::ln10)},
      {"horizon", "1000"},
      {"half_bin", "2"},
      {"series_stride", "100"},
      {"record", ""}}},
    {"gw", {{"theta", "50"}, {"epsilon", "0.25"}, {"horizon", "20"}, {"switch_threshold", "1000000"}}},
};

struct Override {
  CLI::Option* option;
  std::string section;
  std::string key;
  std::string value;
};

struct Context {
  std::string config_path;
  std::vector<std::unique_ptr<Override>> overrides;
  fs::path out;
  std::vector<fs::path> written;
  ConfigFile cfg;

  const std::string& get(const std::string& section, const std::string& key) const {
    const auto& sec = cfg.section(section);
    auto it = sec.find(key);
    if (it == sec.end()) throw std::invalid_argument("missing config key " + section + "." + key);
    return it->second;
  }
  double real(const std::string& s, const std::string& k) const { return parse_double(get(s, k)); }
  long long integer(const std::string& s, const std::string& k) const { return parse_int(get(s, k)); }
  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("run", "seed")); }
  int replicas() const { return static_cast<int>(integer("run", "replicas")); }
  int jobs() const { return std::max(1, static_cast<int>(integer("run", "jobs"))); }

  std::ofstream open(const std::string& name) {
    fs::create_directories(out);
    const fs::path p = out / name;
    written.push_back(p);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string());
    return f;
  }
  void write_json(const std::string& name, const json& j) {
    auto f = open(name);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed for " + name);
  }
};

void add_override(CLI::App* app, Context& ctx, const std::string& flag, const std::string& section,
                  const std::string& key, const std::string& help) {
  auto o = std::make_unique<Override>();
  o->section = section;
  o->key = key;
  o->option = app->add_option(flag, o->value, help);
  ctx.overrides.push_back(std::move(o));
}

void add_tail_overrides(CLI::App* app, Context& ctx) {
  add_override(app, ctx, "--tail", "tail", "variant", "type1, type2 or discrete");
  add_override(app, ctx, "--n", "tail", "n", "iteration order n");
  add_override(app, ctx, "--alpha", "tail", "alpha", "tail exponent");
  add_override(app, ctx, "--L", "tail", "L", "slowly varying factors k:gamma,...");
  add_override(app, ctx, "--c", "tail", "c", "grid constant of the discrete tail");
}

void resolve(Context& ctx) {
  ConfigFile file;
  if (!ctx.config_path.empty()) file = ConfigFile::load(ctx.config_path);
  for (const auto& [name, keys] : kDefaults) ctx.cfg.section(name) = keys;
  for (const auto& [name, keys] : file.sections()) {
    if (!kDefaults.count(name)) throw std::invalid_argument("unknown config section [" + name + "]");
    for (const auto& [k, v] : keys) ctx.cfg.section(name)[k] = v;
  }
  for (const auto& o : ctx.overrides) {
    if (o->option->count() > 0) ctx.cfg.section(o->section)[o->key] = o->value;
  }
}

json config_json(const Context& ctx, std::initializer_list<const char*> sections) {
  json j = json::object();
  for (const char* s : sections) {
    json sec = json::object();
    for (const auto& [k, v] : ctx.cfg.section(s)) sec[k] = v;
    j[s] = sec;
  }
  return j;
}

json sidecar(const Context& ctx, const std::string& command, std::initializer_list<const char*> sections) {
  json j;
  j["command"] = command;
  j["version"] = GUMBEL_WAVES_VERSION;
  j["seed"] = ctx.seed();
  j["config"] = config_json(ctx, sections);
  return j;
}

json flags_json(const ApproximationFlags& f) {
  json j;
  j["merged_families"] = f.merged_families;
  j["deterministic_family_steps"] = f.deterministic_family_steps;
  j["mmm_bulk_generations"] = f.mmm_bulk_generations;
  j["dropped_zero_fitness_mutants"] = f.dropped_zero_fitness_mutants;
  return j;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

TailSpec tail_of(const Context& ctx) {
  TailSpec t = tail_from_keys(ctx.cfg.section("tail"));
  validate(t);
  return t;
}

TypeI type1_of(const Context& ctx) {
  const TailSpec t = tail_of(ctx);
  if (!std::holds_alternative<TypeI>(t)) throw std::invalid_argument("this command needs a type1 tail");
  return std::get<TypeI>(t);
}

std::string suffixed(const std::string& stem, int r, int replicas, const std::string& ext) {
  return replicas > 1 ? stem + "_r" + std::to_string(r) + ext : stem + ext;
}

template <typename F>
void parallel_for(int count, int jobs, F&& body) {
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min(jobs, count); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void cmd_simulate(Context& ctx) {
  ModelParams p;
  p.tail = tail_of(ctx);
  p.variant = parse_variant(ctx.get("model", "variant"));
  p.beta = ctx.real("model", "beta");
  p.seed = ctx.seed();
  p.family_cap = static_cast<std::size_t>(ctx.integer("model", "family_cap"));
  p.exact_cap = ctx.real("model", "exact_cap");
  p.individual_mutant_cap = ctx.real("model", "individual_mutant_cap");
  p.top_k = static_cast<int>(ctx.integer("model", "top_k"));
  p.bulk_bins = static_cast<int>(ctx.integer("model", "bulk_bins"));
  validate(p);
  const int horizon = static_cast<int>(ctx.integer("model", "horizon"));
  StopConditions stop;
  stop.max_log_X = ctx.real("model", "max_log10_X") * std::numbers::ln10;
  const Population initial =
      Population::single(ctx.real("model", "initial_fitness"), ctx.real("model", "initial_count"));
  const int replicas = ctx.replicas();
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");

  std::vector<Trajectory> trajs(static_cast<std::size_t>(replicas));
  parallel_for(replicas, ctx.jobs(), [&](int r) {
    ModelParams pr = p;
    if (replicas > 1) pr.seed = derive_seed(p.seed, static_cast<std::uint64_t>(r));
    trajs[static_cast<std::size_t>(r)] = run(pr, initial, horizon, stop);
  });

  json j = sidecar(ctx, "simulate", {"run", "tail", "model"});
  json reps = json::array();
  int survivors = 0;
  for (int r = 0; r < replicas; ++r) {
    const auto& tr = trajs[static_cast<std::size_t>(r)];
    const std::string name = suffixed("trajectory", r, replicas, ".csv");
    auto f = ctx.open(name);
    write_trajectory_csv(f, tr);
    if (tr.termination != "extinct") ++survivors;
    json e;
    e["replica"] = r;
    e["seed"] = tr.params.seed;
    e["file"] = name;
    e["termination"] = tr.termination;
    e["approximation_flags"] = flags_json(tr.flags);
    reps.push_back(e);
  }
  j["replicas"] = reps;
  const SurvivalEstimate s = wilson_interval(survivors, replicas);
  j["survival"] = {{"survivors", survivors}, {"estimate", s.estimate}, {"lower", s.lower}, {"upper", s.upper}};
  ctx.write_json("simulate.json", j);
}

json saddle_json(const SaddlePoint& sp) {
  json j;
  j["x_c"] = sp.x_c;
  j["kappa"] = sp.kappa;
  j["d"] = sp.d;
  j["x_c_asymptotic"] = sp.x_c_asymptotic;
  j["kappa_asymptotic"] = sp.kappa_asymptotic;
  j["kappa_asymptotic_xc"] = sp.kappa_asymptotic_xc;
  j["d_asymptotic"] = sp.d_asymptotic;
  j["dh_at_x_c"] = sp.dh_at_x_c;
  return j;
}

void cmd_dfmm(Context& ctx) {
  DfmmConfig c;
  c.tail = type1_of(ctx);
  c.beta = ctx.real("dfmm", "beta");
  c.t = ctx.integer("dfmm", "t");
  if (!ctx.get("dfmm", "x0").empty()) c.x0 = ctx.integer("dfmm", "x0");
  c.check_signs = ctx.integer("dfmm", "check_signs") != 0;
  validate(c);
  const WaveProfile wp = wave_profile(c);
  auto f = ctx.open("wave.csv");
  write_wave_csv(f, wp.f, wp.Phi);
  json j = sidecar(ctx, "dfmm", {"run", "tail", "dfmm"});
  j["approximation_flags"] = json::object();
  j["t"] = wp.t;
  j["x0"] = wp.x0;
  j["S"] = wp.S;
  j["sigma"] = wp.sigma;
  j["log10_X"] = wp.logX / std::numbers::ln10;
  j["v"] = v_n(c.tail, static_cast<double>(c.t));
  j["s"] = s_n(c.tail, static_cast<double>(c.t));
  j["saddle"] = saddle_json(wp.saddle);
  if (wp.signs) {
    j["signs"] = {{"first_valid_k", wp.signs->first_valid_k},
                  {"violations", wp.signs->violations},
                  {"holds_past_x_c", wp.signs->holds_past_x_c}};
  }
  ctx.write_json("dfmm.json", j);
}

void cmd_sfmm(Context& ctx) {
  SfmmConfig c;
  c.tail = type1_of(ctx);
  c.beta = ctx.real("sfmm", "beta");
  c.horizon = static_cast<int>(ctx.integer("sfmm", "horizon"));
  c.switch_threshold = static_cast<std::uint64_t>(ctx.integer("sfmm", "switch_threshold"));
  c.seed = ctx.seed();
  validate(c);
  const int replicas = ctx.replicas();
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  std::vector<SfmmRun> runs(static_cast<std::size_t>(replicas));
  parallel_for(replicas, ctx.jobs(), [&](int r) {
    SfmmConfig cr = c;
    if (replicas > 1) cr.seed = derive_seed(c.seed, static_cast<std::uint64_t>(r));
    runs[static_cast<std::size_t>(r)] = run_sfmm(cr);
  });
  json j = sidecar(ctx, "sfmm", {"run", "tail", "sfmm"});
  j["approximation_flags"] = json::object();
  j["v"] = v_n(c.tail, c.horizon);
  j["s"] = s_n(c.tail, c.horizon);
  json reps = json::array();
  for (int r = 0; r < replicas; ++r) {
    const auto& run = runs[static_cast<std::size_t>(r)];
    const SfmmSummary sum = sfmm_summary(run, c.horizon);
    const std::string wave = suffixed("wave", r, replicas, ".csv");
    const std::string fam = suffixed("families", r, replicas, ".csv");
    {
      auto f = ctx.open(wave);
      write_wave_csv(f, sum.efd.f, sum.efd.cum);
    }
    {
      auto f = ctx.open(fam);
      write_family_csv(f, run);
    }
    reps.push_back({{"replica", r},
                    {"seed", replicas > 1 ? derive_seed(c.seed, static_cast<std::uint64_t>(r)) : c.seed},
                    {"wave", wave},
                    {"families", fam},
                    {"S", sum.S},
                    {"sigma", sum.sigma},
                    {"log10_X", sum.log_X / std::numbers::ln10},
                    {"alive", sum.alive}});
  }
  j["replicas"] = reps;
  ctx.write_json("sfmm.json", j);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(static_cast<int>(parse_int(item)));
  }
  return out;
}

void cmd_qmm(Context& ctx, bool record_log2) {
  QmmConfig c;
  c.alpha = ctx.real("qmm", "alpha");
  c.c = ctx.real("qmm", "c");
  c.beta = ctx.real("qmm", "beta");
  c.logX0 = ctx.real("qmm", "logX0");
  c.horizon = static_cast<int>(ctx.integer("qmm", "horizon"));
  validate(c);
  const int j_half = static_cast<int>(ctx.integer("qmm", "half_bin"));
  if (j_half < 1) throw std::invalid_argument("half_bin must be >= 1");
  std::vector<int> times = parse_int_list(ctx.get("qmm", "record"));
  if (record_log2) {
    for (long long t = 1; t <= c.horizon; t *= 2) times.push_back(static_cast<int>(t));
  }
  times.push_back(c.horizon);
  const QmmRun run = qmm_run(c, times, static_cast<int>(ctx.integer("qmm", "series_stride")));
  json snaps = json::array();
  for (const auto& s : run.snapshots) {
    const std::string name = "snapshot_t" + std::to_string(s.t) + ".csv";
    auto f = ctx.open(name);
    write_snapshot_csv(f, s, c, j_half);
    snaps.push_back({{"t", s.t}, {"file", name}, {"S", s.S}, {"sigma", s.sigma}, {"k_max", s.k_max}});
  }
  {
    auto f = ctx.open("series.csv");
    write_series_csv(f, run.series);
  }
  json j = sidecar(ctx, "qmm", {"run", "qmm"});
  j["approximation_flags"] = json::object();
  j["snapshots"] = snaps;
  ctx.write_json("qmm.json", j);
}

void cmd_predict(Context& ctx, const std::vector<double>& ts) {
  const TailSpec tail = tail_of(ctx);
  json j;
  j["command"] = "predict";
  j["version"] = GUMBEL_WAVES_VERSION;
  j["seed"] = ctx.seed();
  j["config"] = config_json(ctx, {"tail"});
  json rows = json::array();
  for (double t : ts) {
    const GrowthPrediction p = predict(tail, t);
    rows.push_back({{"t", t},
                    {"u", opt_json(p.u)},
                    {"log_u", opt_json(p.log_u)},
                    {"v", opt_json(p.v)},
                    {"s", opt_json(p.s)},
                    {"logX_scale", p.logX_scale},
                    {"exponent_target", p.exponent_target},
                    {"w_exponent_target", p.w_exponent_target},
                    {"log_log_X", opt_json(p.log_log_X)},
                    {"log_log_W", opt_json(p.log_log_W)}});
  }
  j["predictions"] = rows;
  std::cout << j.dump(2) << '\n';
}

void cmd_gw_check(Context& ctx) {
  const double theta = ctx.real("gw", "theta");
  const double eps = ctx.real("gw", "epsilon");
  const ConcentrationEnvelope env = envelope(theta, eps);
  GwConfig g;
  g.theta = theta;
  g.horizon = static_cast<int>(ctx.integer("gw", "horizon"));
  g.switch_threshold = static_cast<std::uint64_t>(ctx.integer("gw", "switch_threshold"));
  const int replicas = ctx.replicas();
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  std::vector<GwPath> paths(static_cast<std::size_t>(replicas));
  parallel_for(replicas, ctx.jobs(), [&](int r) {
    Rng rng(derive_seed(ctx.seed(), static_cast<std::uint64_t>(r)));
    paths[static_cast<std::size_t>(r)] = gw_simulate_hybrid(g, rng);
  });
  long long violations = 0;
  for (const auto& p : paths) violations += band_violated(p, theta, env.halfwidth) ? 1 : 0;
  {
    auto f = ctx.open("ensemble.csv");
    write_ensemble_csv(f, paths);
  }
  const double p_value = binomial_upper_tail(violations, replicas, std::min(1.0, env.failure_bound));
  json j = sidecar(ctx, "gw-check", {"run", "gw"});
  j["approximation_flags"] = {{"switch_threshold", g.switch_threshold}};
  j["envelope"] = {{"halfwidth", env.halfwidth},
                   {"failure_bound", env.failure_bound},
                   {"c", env.c},
                   {"admissible", env.admissibility.admissible},
                   {"failed_conditions", env.admissibility.failed},
                   {"details", env.admissibility.details}};
  j["violations"] = violations;
  j["frequency"] = static_cast<double>(violations) / replicas;
  j["p_value"] = p_value;
  j["pass"] = p_value > 1e-3;
  ctx.write_json("gw.json", j);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  }
  Eigen::ArrayXd column(const std::string& name) const {
    const std::size_t c = col(name);
    Eigen::ArrayXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = rows[i].at(c);
    return out;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& s : split(line)) row.push_back(parse_double(s));
    if (row.size() != t.header.size()) throw std::runtime_error("ragged CSV row: " + line);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_table(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return read_table(in);
}

std::vector<Verdict> analyze_wave(Context& ctx, const fs::path& input) {
  const Table t = read_table(input);
  const Eigen::ArrayXd f = t.column("f");
  const Eigen::ArrayXd Phi = t.column("Phi");
  Eigen::ArrayXd lw(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) lw[i] = std::log(Phi[i] - (i > 0 ? Phi[i - 1] : 0.0));
  const Efd efd = efd_from_log_weights(f, lw, "wave");
  const StandardizedWave w = standardized_wave(efd, efd.S, efd.sigma);
  auto out = ctx.open("standardized.csv");
  write_standardized_csv(out, w);
  return {{"ks_to_gaussian", ks_to_gaussian(w), 0.0, 0.02, ks_to_gaussian(w) <= 0.02, "empirical S and sigma"}};
}

std::vector<Verdict> analyze_trajectory(Context& ctx, const fs::path& input) {
  const Table t = read_table(input);
  std::vector<TrajectoryRecord> recs;
  const auto ct = t.col("t"), cx = t.col("log10_X"), cxi = t.col("log10_Xi"), cw = t.col("W"), cq = t.col("Q"),
             cs = t.col("S"), csg = t.col("sigma"), ce = t.col("extinct");
  for (const auto& r : t.rows) {
    recs.push_back({static_cast<int>(r[ct]), r[cx] * std::numbers::ln10, r[cxi] * std::numbers::ln10, r[cw], r[cq],
                    r[cs], r[csg], r[ce] != 0.0});
  }
  const auto rows = growth_exponents(recs, tail_of(ctx));
  auto out = ctx.open("growth.csv");
  out << "t,statistic,target,w_statistic,w_target\n";
  for (const auto& g : rows) {
    out << format_double(g.t) << ',' << format_double(g.statistic) << ',' << format_double(g.target) << ','
        << format_double(g.w_statistic) << ',' << format_double(g.w_target) << '\n';
  }
  if (rows.empty()) throw std::runtime_error("no usable trajectory rows");
  const auto& last = rows.back();
  const double rel = std::abs(last.statistic / last.target - 1.0);
  return {{"growth_exponent_relative_error", rel, 0.0, 0.25, rel <= 0.25, "last record"}};
}

std::vector<Verdict> analyze_qmm(Context& ctx, const fs::path& dir) {
  std::ifstream meta_in(dir / "qmm.json");
  if (!meta_in) throw std::runtime_error("no qmm.json in " + dir.string());
  const json meta = json::parse(meta_in);
  const double alpha = parse_double(meta["config"]["qmm"]["alpha"].get<std::string>());
  const Table series = read_table(dir / "series.csv");
  const Eigen::ArrayXd t = series.column("t");
  const Eigen::ArrayXd S = series.column("S");
  const Eigen::ArrayXd sigma = series.column("sigma");
  const double T = t[t.size() - 1];
  double from = t[0];
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] <= T / 10.0) from = t[i];
  }
  std::vector<double> ft, fs_;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t[i] >= from) {
      ft.push_back(t[i]);
      fs_.push_back(sigma[i]);
    }
  }
  std::vector<Verdict> v;
  const SlopeFit fit = width_exponent(ft, fs_, 0.0);
  const double target = 1.0 / alpha - 0.5;
  v.push_back({"width_exponent", fit.slope, target, 0.05, std::abs(fit.slope - target) <= 0.05, "last decade"});
  const double ratio = S[S.size() - 1] / std::pow(T / alpha, 1.0 / alpha);
  v.push_back({"mean_fitness_ratio", ratio, 1.0, 0.1, std::abs(ratio - 1.0) <= 0.1, "S_t / (t/alpha)^(1/alpha)"});

  const std::string snap = "snapshot_t" + std::to_string(static_cast<long long>(T)) + ".csv";
  std::ifstream in(dir / snap);
  if (!in) throw std::runtime_error("missing " + snap);
  std::string head, values;
  std::getline(in, head);
  std::getline(in, values);
  const auto sv = split(values);
  if (sv.size() != 4) throw std::runtime_error("malformed snapshot header in " + snap);
  const Table dens = read_table(in);
  const auto [y, g] = standardized_density(dens.column("F"), dens.column("psi_density"), parse_double(sv[1]),
                                           parse_double(sv[2]));
  {
    auto out = ctx.open("standardized_density.csv");
    out << "y,density\n";
    for (Eigen::Index i = 0; i < y.size(); ++i) out << format_double(y[i]) << ',' << format_double(g[i]) << '\n';
  }
  const double err = density_sup_error(y, g);
  v.push_back({"density_sup_error", err, 0.0, 0.02, err <= 0.02, "|y| <= 3"});
  return v;
}

void cmd_analyze(Context& ctx, const std::string& kind, const std::string& input, std::string verdicts) {
  std::vector<Verdict> v;
  if (kind == "wave") {
    v = analyze_wave(ctx, input);
  } else if (kind == "trajectory") {
    v = analyze_trajectory(ctx, input);
  } else if (kind == "qmm") {
    v = analyze_qmm(ctx, input);
  } else {
    throw std::invalid_argument("unknown analysis kind " + kind);
  }
  if (verdicts.empty()) verdicts = "verdicts.json";
  auto out = ctx.open(verdicts);
  write_verdicts_json(out, v);
}

fs::path default_out() {
  const char* env = std::getenv("GUMBEL_WAVES_OUT");
  return env && *env ? fs::path(env) : fs::path(".");
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  CLI::App app{"Branching populations with selection and mutation under Gumbel-type tails"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GUMBEL_WAVES_VERSION);
  std::string out;
  app.add_option("--config", ctx.config_path, "key = value config file with [section] headers")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (default $GUMBEL_WAVES_OUT or .)");
  add_override(&app, ctx, "--seed", "run", "seed", "master seed");
  add_override(&app, ctx, "--replicas", "run", "replicas", "independent replicas");
  add_override(&app, ctx, "--jobs", "run", "jobs", "worker threads for replicas");

  auto* sim = app.add_subcommand("simulate", "FMM or MMM trajectories");
  add_tail_overrides(sim, ctx);
  add_override(sim, ctx, "--variant", "model", "variant", "fmm or mmm");
  add_override(sim, ctx, "--beta", "model", "beta", "mutation probability");
  add_override(sim, ctx, "--horizon", "model", "horizon", "generations");
  add_override(sim, ctx, "--max-log10-X", "model", "max_log10_X", "stop once log10 X exceeds this");

  auto* dfmm = app.add_subcommand("dfmm", "deterministic fittest mutant wave");
  add_tail_overrides(dfmm, ctx);
  add_override(dfmm, ctx, "--beta", "dfmm", "beta", "mutation probability");
  add_override(dfmm, ctx, "--t", "dfmm", "t", "generation");
  add_override(dfmm, ctx, "--x0", "dfmm", "x0", "first founder generation");

  auto* sfmm = app.add_subcommand("sfmm", "semi-deterministic fittest mutant wave");
  add_tail_overrides(sfmm, ctx);
  add_override(sfmm, ctx, "--beta", "sfmm", "beta", "mutation probability");
  add_override(sfmm, ctx, "--horizon", "sfmm", "horizon", "generations");

  auto* qmm = app.add_subcommand("qmm", "deterministic multiple mutant frequency recursion");
  bool record_log2 = false;
  add_override(qmm, ctx, "--alpha", "qmm", "alpha", "grid exponent");
  add_override(qmm, ctx, "--c", "qmm", "c", "grid constant");
  add_override(qmm, ctx, "--beta", "qmm", "beta", "mutation probability");
  add_override(qmm, ctx, "--horizon", "qmm", "horizon", "generations");
  add_override(qmm, ctx, "--half-bin", "qmm", "half_bin", "density half bin j");
  add_override(qmm, ctx, "--series-stride", "qmm", "series_stride", "generations between series rows");
  add_override(qmm, ctx, "--record", "qmm", "record", "comma separated snapshot times");
  qmm->add_flag("--record-log2", record_log2, "snapshots at powers of two");

  auto* pred = app.add_subcommand("predict", "growth predictors of a tail");
  add_tail_overrides(pred, ctx);
  std::vector<double> ts;
  pred->add_option("--t", ts, "generations")->required();

  auto* gw = app.add_subcommand("gw-check", "Galton-Watson concentration envelope check");
  add_override(gw, ctx, "--theta", "gw", "theta", "offspring mean");
  add_override(gw, ctx, "--epsilon", "gw", "epsilon", "band exponent");
  add_override(gw, ctx, "--horizon", "gw", "horizon", "generations");

  auto* an = app.add_subcommand("analyze", "verdicts over CLI outputs");
  add_tail_overrides(an, ctx);
  std::string kind, input, verdicts;
  an->add_option("--kind", kind, "wave, trajectory or qmm")->required();
  an->add_option("--input", input, "CSV file, or the qmm output directory")->required();
  an->add_option("--verdicts", verdicts, "verdict JSON file name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  ctx.out = out.empty() ? default_out() : fs::path(out);

  try {
    resolve(ctx);
    if (*sim) cmd_simulate(ctx);
    if (*dfmm) cmd_dfmm(ctx);
    if (*sfmm) cmd_sfmm(ctx);
    if (*qmm) cmd_qmm(ctx, record_log2);
    if (*pred) cmd_predict(ctx, ts);
    if (*gw) cmd_gw_check(ctx);
    if (*an) cmd_analyze(ctx, kind, input, verdicts);
  } catch (const std::invalid_argument& e) {
    for (const auto& p : ctx.written) fs::remove(p);
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    for (const auto& p : ctx.written) fs::remove(p);
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
