#include "hetkc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetkc/connectivity.hpp"
#include "hetkc/experiments.hpp"
#include "hetkc/graphgen.hpp"
#include "hetkc/model.hpp"

namespace hetkc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---- config (de)serialization --------------------------------------------

std::int64_t as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(key, "expected a non-negative integer");
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

template <typename T, typename Elem>
std::vector<T> as_array(const json& v, const std::string& key, Elem elem) {
  if (!v.is_array()) throw ConfigError(key, "expected an array");
  std::vector<T> out;
  for (const auto& x : v) out.push_back(static_cast<T>(elem(x, key)));
  return out;
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"command", [](RunConfig& c, const json& v, const std::string& k) { c.command = as_string(v, k); }},
      {"figure", [](RunConfig& c, const json& v, const std::string& k) { c.figure = static_cast<int>(as_int(v, k)); }},
      {"name", [](RunConfig& c, const json& v, const std::string& k) { c.name = as_string(v, k); }},
      {"n", [](RunConfig& c, const json& v, const std::string& k) { c.n = as_int(v, k); }},
      {"mu", [](RunConfig& c, const json& v, const std::string& k) { c.mu = as_array<double>(v, k, as_real); }},
      {"K", [](RunConfig& c, const json& v, const std::string& k) { c.K = as_array<std::int64_t>(v, k, as_int); }},
      {"K1",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (v.is_null()) {
           c.K1.reset();
         } else {
           c.K1 = as_int(v, k);
         }
       }},
      {"offsets", [](RunConfig& c, const json& v, const std::string& k) { c.offsets = as_array<std::int64_t>(v, k, as_int); }},
      {"P", [](RunConfig& c, const json& v, const std::string& k) { c.P = as_int(v, k); }},
      {"alpha", [](RunConfig& c, const json& v, const std::string& k) { c.alpha = as_real(v, k); }},
      {"k", [](RunConfig& c, const json& v, const std::string& k) { c.k = as_array<std::size_t>(v, k, as_uint); }},
      {"sweep_variable", [](RunConfig& c, const json& v, const std::string& k) { c.sweep_variable = as_string(v, k); }},
      {"sweep_values", [](RunConfig& c, const json& v, const std::string& k) { c.sweep_values = as_array<double>(v, k, as_real); }},
      {"trials", [](RunConfig& c, const json& v, const std::string& k) { c.trials = as_uint(v, k); }},
      {"seed", [](RunConfig& c, const json& v, const std::string& k) { c.seed = as_uint(v, k); }},
      {"max_deletions", [](RunConfig& c, const json& v, const std::string& k) { c.max_deletions = as_uint(v, k); }},
      {"out", [](RunConfig& c, const json& v, const std::string& k) { c.out = as_string(v, k); }},
      {"workers", [](RunConfig& c, const json& v, const std::string& k) { c.workers = as_uint(v, k); }},
      {"dump_graphs", [](RunConfig& c, const json& v, const std::string& k) { c.dump_graphs = as_bool(v, k); }},
      {"plot_script", [](RunConfig& c, const json& v, const std::string& k) { c.plot_script = as_bool(v, k); }},
  };
  return table;
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["figure"] = c.figure;
  j["name"] = c.name;
  j["n"] = c.n;
  j["mu"] = c.mu;
  j["K"] = c.K;
  j["K1"] = c.K1 ? json(*c.K1) : json(nullptr);
  j["offsets"] = c.offsets;
  j["P"] = c.P;
  j["alpha"] = c.alpha;
  j["k"] = c.k;
  j["sweep_variable"] = c.sweep_variable;
  j["sweep_values"] = c.sweep_values;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["max_deletions"] = c.max_deletions;
  j["out"] = c.out;
  j["workers"] = c.workers;
  j["dump_graphs"] = c.dump_graphs;
  j["plot_script"] = c.plot_script;
  return j;
}

// ---- parameter resolution --------------------------------------------------

void check_config(const RunConfig& c) {
  if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  if (c.k.empty()) throw ConfigError("k", "at least one connectivity order is required");
  for (std::size_t k : c.k) {
    if (k < 1) throw ConfigError("k", "orders must be at least 1");
  }
  if (c.sweep_variable != "K1" && c.sweep_variable != "alpha") {
    throw ConfigError("sweep_variable", "must be \"K1\" or \"alpha\"");
  }
  if (c.command == "figure" && (c.figure < 1 || c.figure > 4)) {
    throw ConfigError("figure", "must be 1, 2, 3 or 4");
  }
  if (c.name.empty() || c.name.find_first_of(",\n\r/\\") != std::string::npos) {
    throw ConfigError("name", "must be non-empty without commas, newlines or slashes");
  }
}

NetworkParams base_params(const RunConfig& c) {
  NetworkParams p;
  p.n = c.n;
  p.mu = c.mu;
  p.P = c.P;
  p.alpha = c.alpha;
  return p;
}

std::vector<std::int64_t> ring_sizes(const std::vector<std::int64_t>& offsets, std::int64_t K1,
                                     std::size_t classes) {
  if (offsets.size() != classes) {
    throw ConfigError("offsets", "needs one entry per class (" + std::to_string(classes) + ")");
  }
  std::vector<std::int64_t> K;
  for (std::int64_t o : offsets) K.push_back(K1 + o);
  return K;
}

/// Explicit K, else K1 + offsets, else nothing.
std::optional<std::vector<std::int64_t>> resolved_K(const RunConfig& c) {
  if (!c.K.empty()) return c.K;
  if (c.K1) return ring_sizes(c.offsets, *c.K1, c.mu.size());
  return std::nullopt;
}

CriticalK1Query threshold_query(const RunConfig& c, std::size_t k) {
  return {c.n, static_cast<int>(k), c.alpha, c.mu, c.offsets, c.P};
}

// ---- outputs ---------------------------------------------------------------

struct Curve {
  SweepSummary summary;
  std::string label;           ///< legend text
  std::optional<std::int64_t> K1;  ///< reliability: K1 in use
};

fs::path output_dir(const RunConfig& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

constexpr const char* kDeletionRule =
    "deletions up to the cut size remove cut members; past the cut, nodes are removed from the "
    "largest remaining component, nearest to the deleted set first, ties by node id";

void write_metadata(const fs::path& path, const RunConfig& c, const std::vector<Curve>& curves) {
  json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["command"] = c.command;
  meta["config"] = config_json(c);
  bool reliability = false;
  json list = json::array();
  for (const auto& curve : curves) {
    json e;
    e["name"] = curve.summary.experiment;
    e["csv"] = curve.summary.experiment + ".csv";
    e["label"] = curve.label;
    e["kind"] = curve.summary.kind == SummaryKind::Sweep ? "sweep" : "reliability";
    json predicted = json::object();
    for (const auto& [k, K1] : curve.summary.predicted_K1) predicted[std::to_string(k)] = K1;
    e["predicted_K1"] = predicted;
    if (curve.K1) e["K1"] = *curve.K1;
    e["warnings"] = curve.summary.warnings;
    list.push_back(e);
    reliability = reliability || curve.summary.kind == SummaryKind::Reliability;
  }
  meta["curves"] = list;
  if (reliability) {
    meta["deletion_extension"] = {{"applied", true}, {"rule", kDeletionRule}};
  }
  write_text(path, meta.dump(2) + "\n");
}

std::string python_literal(const std::string& s) {
  return json(s).dump();  // JSON string escapes are valid Python
}

void write_plot_script(const fs::path& path, const std::string& title, const std::string& xlabel,
                       const std::vector<Curve>& curves) {
  std::ostringstream py;
  py << "# Plots the CSV files next to this script. Requires matplotlib.\n"
     << "import csv\nimport os\n\nimport matplotlib.pyplot as plt\n\n"
     << "HERE = os.path.dirname(os.path.abspath(__file__))\n"
     << "CURVES = [\n";
  for (const auto& c : curves) {
    py << "    (" << python_literal(c.summary.experiment + ".csv") << ", "
       << python_literal(c.label) << ", ";
    if (c.summary.predicted_K1.size() == 1) {
      py << c.summary.predicted_K1.begin()->second;
    } else {
      py << "None";
    }
    py << "),\n";
  }
  py << "]\n\n"
     << "fig, ax = plt.subplots()\n"
     << "for path, label, threshold in CURVES:\n"
     << "    with open(os.path.join(HERE, path), newline=\"\") as f:\n"
     << "        rows = list(csv.reader(f))[1:]\n"
     << "    xs = [float(r[1]) for r in rows]\n"
     << "    ys = [float(r[5]) for r in rows]\n"
     << "    (line,) = ax.plot(xs, ys, marker=\"o\", markersize=3, label=label)\n"
     << "    if threshold is not None:\n"
     << "        ax.axvline(threshold, color=line.get_color(), linestyle=\"--\", linewidth=0.8)\n"
     << "ax.set_xlabel(" << python_literal(xlabel) << ")\n"
     << "ax.set_ylabel(\"empirical probability\")\n"
     << "ax.set_ylim(-0.02, 1.02)\n"
     << "ax.set_title(" << python_literal(title) << ")\n"
     << "ax.legend()\n"
     << "fig.savefig(os.path.join(HERE, " << python_literal(path.stem().string() + ".png")
     << "), dpi=150)\n";
  write_text(path, py.str());
}

void print_curve(std::ostream& out, const Curve& c) {
  const bool sweep = c.summary.kind == SummaryKind::Sweep;
  out << c.summary.experiment << " (" << c.label << ")\n";
  out << (sweep ? "  value" : "  deletions") << "  k  successes/trials  prob  +-95%\n";
  for (const auto& r : c.summary.rows) {
    out << "  " << format_real(r.sweep_value) << "  " << r.k << "  " << r.successes << '/'
        << r.trials << "  " << format_real(r.prob()) << "  " << format_real(r.wilson_half_width())
        << '\n';
  }
  for (const auto& [k, K1] : c.summary.predicted_K1) {
    out << "  predicted K1 for k=" << k << ": " << K1;
    if (const auto x = empirical_crossing(c.summary, k)) {
      out << " (empirical 50% crossing: " << format_real(*x) << ')';
    }
    out << '\n';
  }
  for (const auto& w : c.summary.warnings) out << "  warning: " << w << '\n';
}

void dump_point_graphs(const fs::path& dir, const std::string& stem, const ExperimentSpec& spec) {
  for (std::size_t j = 0; j < spec.points(); ++j) {
    const Graph g = sample_intersection_model(spec.params_at(j), trial_seed(spec.master_seed, j, 0));
    const std::string suffix = spec.points() > 1 ? "_" + std::to_string(j) : std::string();
    std::ostringstream os;
    write_edge_list(os, g);
    write_text(dir / (stem + suffix + ".edges"), os.str());
  }
}

/// Rows of `s` with order k, renamed.
SweepSummary select_k(const SweepSummary& s, std::size_t k, const std::string& name) {
  SweepSummary out;
  out.experiment = name;
  out.kind = s.kind;
  std::copy_if(s.rows.begin(), s.rows.end(), std::back_inserter(out.rows),
               [k](const SweepRow& r) { return r.k == k; });
  if (const auto it = s.predicted_K1.find(k); it != s.predicted_K1.end()) {
    out.predicted_K1.insert(*it);
  }
  const std::string tag = "k=" + std::to_string(k) + ":";
  std::copy_if(s.warnings.begin(), s.warnings.end(), std::back_inserter(out.warnings),
               [&](const std::string& w) { return w.rfind(tag, 0) == 0; });
  return out;
}

struct Job {
  ExperimentSpec spec;
  bool reliability = false;
  std::optional<std::int64_t> K1;
  std::string label;
};

/// Runs the jobs, writes one CSV per curve plus the sidecar (and optional
/// plot script and graph dumps), and prints a summary.
int run_jobs(const RunConfig& c, const std::string& stem, const std::string& title,
             const std::string& xlabel, const std::vector<Job>& jobs, std::ostream& out,
             bool split_by_k = false) {
  for (const auto& job : jobs) job.spec.validate();
  const fs::path dir = output_dir(c);
  const RunOptions opts{c.workers};

  std::vector<Curve> curves;
  for (const auto& job : jobs) {
    if (job.reliability) {
      curves.push_back({run_reliability_experiment(job.spec, c.max_deletions, opts), job.label,
                        job.K1});
    } else if (split_by_k) {
      const SweepSummary all = run_transition_sweep(job.spec, opts);
      for (std::size_t k : job.spec.ks) {
        curves.push_back({select_k(all, k, job.spec.name + "_k" + std::to_string(k)),
                          "k=" + std::to_string(k), std::nullopt});
      }
    } else {
      curves.push_back({run_transition_sweep(job.spec, opts), job.label, job.K1});
    }
    if (c.dump_graphs) dump_point_graphs(dir, job.spec.name, job.spec);
  }

  for (const auto& curve : curves) {
    const fs::path csv = dir / (curve.summary.experiment + ".csv");
    emit_csv(curve.summary, csv);
    print_curve(out, curve);
    out << "  wrote " << csv.string() << '\n';
  }
  write_metadata(dir / (stem + ".json"), c, curves);
  if (c.plot_script) write_plot_script(dir / (stem + ".py"), title, xlabel, curves);
  return kExitOk;
}

// ---- subcommands -----------------------------------------------------------

int cmd_threshold(const RunConfig& c, std::ostream& out) {
  std::ostringstream table;
  table << "k  K1  lambda1  critical  gamma_n\n";
  for (std::size_t k : c.k) {
    const CriticalK1Query q = threshold_query(c, k);
    const CriticalK1 res = critical_k1(q);
    const ScalingEvaluation ev = evaluate_scaling(q.params_at(res.K1), static_cast<int>(k));
    table << k << "  " << res.K1 << "  " << format_real(res.lambda1) << "  "
          << format_real(res.threshold) << "  " << format_real(ev.gamma_n) << '\n';
  }
  out << table.str();
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  NetworkParams p = base_params(c);
  const auto K = resolved_K(c);
  if (!K) throw ConfigError("K", "simulate needs K or K1");
  p.K = *K;
  p.validate();
  const Graph g = sample_intersection_model(p, RngSeed{c.seed, 0});

  out << "n: " << g.size() << '\n' << "edges: " << g.edge_count() << '\n';
  if (g.size() == 0) return kExitOk;
  out << "min_degree: " << min_degree(g) << '\n';
  out << "connected: " << (is_connected(g) ? "yes" : "no") << '\n';
  if (g.size() >= 2) {
    const CutResult cut = vertex_connectivity(g);
    out << "kappa: " << cut.kappa << '\n' << "cut:";
    for (NodeId v : cut.cut_nodes) out << ' ' << v;
    out << '\n';
  }
  for (std::size_t k : c.k) {
    out << k << "-connected: " << (is_k_connected(g, k) ? "yes" : "no") << '\n';
  }
  if (c.dump_graphs) {
    const fs::path path = output_dir(c) / (c.name + ".edges");
    std::ostringstream os;
    write_edge_list(os, g);
    write_text(path, os.str());
    out << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.sweep_values.empty()) throw ConfigError("sweep_values", "must not be empty");
  Job job;
  job.spec.name = c.name;
  job.spec.base = base_params(c);
  job.spec.ks = c.k;
  job.spec.trials = c.trials;
  job.spec.master_seed = c.seed;
  job.spec.sweep.values = c.sweep_values;
  if (c.sweep_variable == "K1") {
    job.spec.sweep.variable = SweepVariable::K1;
    job.spec.sweep.offsets = c.offsets;
    job.label = "K1 sweep";
  } else {
    const auto K = resolved_K(c);
    if (!K) throw ConfigError("K", "alpha sweeps need K or K1");
    job.spec.base.K = *K;
    job.spec.sweep.variable = SweepVariable::Alpha;
    job.label = "alpha sweep";
  }
  return run_jobs(c, c.name, c.name, c.sweep_variable, {job}, out);
}

Job reliability_job(const RunConfig& c, std::size_t k_design, const std::string& name) {
  Job job;
  job.reliability = true;
  job.spec.name = name;
  job.spec.base = base_params(c);
  job.spec.ks = {k_design};
  job.spec.trials = c.trials;
  job.spec.master_seed = c.seed;
  if (const auto K = resolved_K(c)) {
    job.spec.base.K = *K;
  } else {
    const CriticalK1 crit = critical_k1(threshold_query(c, k_design));
    job.spec.base.K = ring_sizes(c.offsets, crit.K1, c.mu.size());
  }
  job.K1 = job.spec.base.K.front();
  job.label = "k=" + std::to_string(k_design) + ", K1=" + std::to_string(*job.K1);
  return job;
}

int cmd_reliability(const RunConfig& c, std::ostream& out) {
  const Job job = reliability_job(c, c.k.front(), c.name);
  return run_jobs(c, c.name, c.name, "deleted nodes", {job}, out);
}

std::vector<double> integer_range(int lo, int hi) {
  std::vector<double> v;
  for (int x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

/// The built-in figure presets: n = 500, mu = (1/2, 1/2), P = 10^4 and
/// K2 = K1 + 10 unless noted. Trials, seed, workers, output directory and
/// max_deletions come from the config.
int cmd_figure(RunConfig c, std::ostream& out) {
  c.n = 500;
  c.mu = {0.5, 0.5};
  c.P = 10000;
  c.offsets = {0, 10};
  const std::string stem = "fig" + std::to_string(c.figure);

  auto sweep_job = [&](const std::string& name) {
    Job job;
    job.spec.name = name;
    job.spec.base = base_params(c);
    job.spec.trials = c.trials;
    job.spec.master_seed = c.seed;
    return job;
  };

  std::vector<Job> jobs;
  switch (c.figure) {
    case 1:
      for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
        Job job = sweep_job(stem + "_alpha" + format_real(alpha));
        job.spec.base.alpha = alpha;
        job.spec.ks = {2};
        job.spec.sweep = {SweepVariable::K1, integer_range(5, 40), c.offsets};
        job.label = "alpha=" + format_real(alpha);
        jobs.push_back(job);
      }
      return run_jobs(c, stem, "2-connectivity vs K1", "K1", jobs, out);
    case 2: {
      Job job = sweep_job(stem);
      job.spec.base.alpha = 0.4;
      job.spec.ks = {4, 6, 8, 10};
      job.spec.sweep = {SweepVariable::K1, integer_range(15, 40), c.offsets};
      jobs.push_back(job);
      return run_jobs(c, stem, "k-connectivity vs K1 (alpha=0.4)", "K1", jobs, out, true);
    }
    case 3: {
      std::vector<double> alphas;
      for (int i = 1; i <= 20; ++i) alphas.push_back(i / 20.0);
      const std::pair<std::int64_t, std::int64_t> rings[] = {{10, 70}, {20, 60}, {30, 50}, {40, 40}};
      for (const auto& [K1, K2] : rings) {
        Job job = sweep_job(stem + "_K" + std::to_string(K1) + "_" + std::to_string(K2));
        job.spec.base.K = {K1, K2};
        job.spec.ks = {2};
        job.spec.sweep = {SweepVariable::Alpha, alphas, {}};
        job.label = "K=(" + std::to_string(K1) + "," + std::to_string(K2) + ")";
        jobs.push_back(job);
      }
      return run_jobs(c, stem, "2-connectivity vs alpha", "alpha", jobs, out);
    }
    default: {
      c.alpha = 0.4;
      c.K.clear();
      c.K1.reset();
      for (std::size_t k : {8, 10, 12, 14}) {
        jobs.push_back(reliability_job(c, k, stem + "_k" + std::to_string(k)));
      }
      return run_jobs(c, stem, "connectivity after minimum-cut deletions", "deleted nodes", jobs,
                      out);
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config file " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::size_t default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2); }

RunConfig parse_config(std::string_view json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  const auto& table = setters();
  for (const auto& [key, value] : j.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown config key");
    it->second(base, value, key);
  }
  return base;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heterogeneous random key graphs under on/off channels: thresholds and "
               "k-connectivity simulations",
               kToolName};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t trials = 0, workers = 0;
  bool dump_graphs = false, plot_script = false, print_config = false;
  int figure_id = 0;

  auto* o_config = app.add_option("--config", config_path, "JSON config file (flat keys)");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_trials = app.add_option("--trials", trials, "samples per sweep point");
  auto* o_workers = app.add_option("--workers", workers, "worker threads (default: all cores)");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  app.add_flag("--dump-graphs", dump_graphs, "write sampled graphs as edge lists");
  app.add_flag("--plot-script", plot_script, "write a matplotlib script next to the CSVs");
  app.add_flag("--print-config", print_config, "print the resolved config as JSON and exit");

  app.add_subcommand("threshold", "critical K1 per k");
  app.add_subcommand("simulate", "sample one graph and report its connectivity");
  app.add_subcommand("sweep", "k-connectivity transition over K1 or alpha");
  app.add_subcommand("reliability", "connectivity after deleting minimum-cut nodes");
  auto* fig = app.add_subcommand("figure", "run a built-in figure preset");
  fig->add_option("id", figure_id, "figure number (1-4)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig c;
    c.workers = default_workers();
    if (o_config->count() > 0) c = parse_config(read_file(config_path), c);
    c.command = app.get_subcommands().front()->get_name();
    if (c.command == "figure") c.figure = figure_id;
    if (o_seed->count() > 0) c.seed = seed;
    if (o_trials->count() > 0) c.trials = trials;
    if (o_workers->count() > 0) c.workers = workers;
    if (o_out->count() > 0) c.out = out_dir;
    if (dump_graphs) c.dump_graphs = true;
    if (plot_script) c.plot_script = true;
    check_config(c);

    if (print_config) {
      out << config_to_json(c) << '\n';
      return kExitOk;
    }
    if (c.command == "threshold") return cmd_threshold(c, out);
    if (c.command == "simulate") return cmd_simulate(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    if (c.command == "reliability") return cmd_reliability(c, out);
    return cmd_figure(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParams& e) {
    err << "invalid parameter " << e.what() << '\n';
    return kExitConfig;
  } catch (const Unsatisfiable& e) {
    err << "unsatisfiable: " << e.what() << '\n';
    return kExitUnsatisfiable;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace hetkc
