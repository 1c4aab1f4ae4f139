// Command-line front end for the ECC engine and its validation oracles.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecc/enumerator.hpp"
#include "ecc/engine.hpp"
#include "ecc/error.hpp"
#include "ecc/metrics.hpp"
#include "ecc/report.hpp"
#include "ecc/schedule.hpp"
#include "ecc/simulator.hpp"

namespace {

constexpr int kExitModel = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompare = 3;

struct Options {
  std::string config;
  std::optional<int> nodes;
  std::optional<double> theta;
  std::optional<int> workers;
  std::vector<std::string> sets;
  std::string format = "csv";
  std::string output;
  std::string pdf;
  std::string dump;
  bool progress = false;
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  std::uint64_t max_leaves = 10'000'000;
  double sigma = 3.0;
  std::string sweep_param;
  double sweep_from = 0, sweep_to = 0, sweep_step = 1;
  int debug_i = 1, debug_j = 1;
};

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ecc::RawConfig build_raw(const Options& o) {
  ecc::RawConfig raw;
  if (!o.config.empty()) raw = ecc::read_config_file(o.config);
  if (const char* env = std::getenv("ECC_WORKERS"); env != nullptr && *env != '\0') {
    raw["workers"] = env;
  }
  if (o.nodes) raw["n_nodes"] = std::to_string(*o.nodes);
  if (o.theta) raw["theta"] = number_text(*o.theta);
  if (o.workers) raw["workers"] = std::to_string(*o.workers);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    }
    raw[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return raw;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ecc::Error(ecc::ErrorCode::OutOfRange, "cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const Options& o, std::ostream& out, const ecc::MetricsReport& m,
          const ecc::ReportPrefix& prefix = {},
          const std::vector<std::pair<std::string, double>>& extra = {}, bool header = true) {
  if (o.format == "json") {
    out << ecc::json_report(m, prefix, extra) << '\n';
  } else {
    if (header) out << ecc::csv_header(prefix) << '\n';
    out << ecc::csv_row(m, prefix) << '\n';
  }
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ecc::Error(ecc::ErrorCode::OutOfRange, "cannot write " + path);
  body(f);
}

ecc::RunOptions run_options(const Options& o) {
  ecc::RunOptions ro;
  if (o.progress) {
    ro.progress = [](const ecc::Progress& p) {
      std::cerr << "examined " << p.examined << "  finalized " << p.finalized << "  pending "
                << p.pending << "  " << static_cast<std::uint64_t>(p.examined / std::max(p.elapsed_s, 1e-9))
                << " chains/s\n";
    };
  }
  return ro;
}

struct Analysis {
  ecc::EccResult result;
  ecc::MetricsReport metrics;
};

Analysis analyze(const ecc::DerivedModel& model, const Options& o) {
  Analysis a;
  a.result = ecc::run_ecc(model, run_options(o));
  a.metrics = ecc::compute_metrics(model, a.result);
  return a;
}

std::vector<std::pair<std::string, double>> engine_extras(const ecc::EccResult& r) {
  return {{"examined", static_cast<double>(r.examined)},
          {"max_conservation_error", r.max_conservation_error},
          {"max_residual_error", r.max_residual_error},
          {"leaked_chains", static_cast<double>(r.leaked_chains)},
          {"budget_exceeded", r.budget_exceeded ? 1.0 : 0.0}};
}

int cmd_analyze(const Options& o) {
  const auto model = ecc::validate_config(build_raw(o));
  const auto a = analyze(model, o);
  Sink sink(o.output);
  emit(o, sink.out(), a.metrics, {}, engine_extras(a.result));
  write_file(o.pdf, [&](std::ostream& f) { ecc::write_latency_pdf(f, model, a.metrics); });
  write_file(o.dump, [&](std::ostream& f) { ecc::write_chain_dump(f, a.result.chains); });
  if (a.result.budget_exceeded) {
    std::cerr << "BudgetExceeded: stopped after " << a.result.examined
              << " chains; results above are partial\n";
    return kExitModel;
  }
  return 0;
}

void dump_histogram(std::ostream& f, const ecc::SimReport& rep) {
  for (const auto& [key, count] : rep.histogram) {
    ecc::Chain c;
    for (const auto& [kind, start] : key) c = c.extend({kind, start, start});
    f << ecc::format_chain(c, static_cast<double>(count) / static_cast<double>(rep.runs)) << '\n';
  }
}

ecc::SimReport run_simulation(const ecc::DerivedModel& model, const Options& o) {
  ecc::SimOptions so;
  so.runs = o.runs;
  so.seed = o.seed;
  so.workers = model.config.workers;
  so.keep_histogram = !o.dump.empty();
  return ecc::simulate(model, so);
}

int cmd_simulate(const Options& o) {
  const auto model = ecc::validate_config(build_raw(o));
  const auto rep = run_simulation(model, o);
  Sink sink(o.output);
  emit(o, sink.out(), rep.metrics, {},
       {{"runs", static_cast<double>(rep.runs)},
        {"r_se_pct", 100.0 * rep.delivery_ratio_se},
        {"l_se_ms", 1e3 * rep.latency_mean_se_s},
        {"e_se_mj", 1e3 * rep.energy_se_j}});
  write_file(o.pdf, [&](std::ostream& f) { ecc::write_latency_pdf(f, model, rep.metrics); });
  write_file(o.dump, [&](std::ostream& f) { dump_histogram(f, rep); });
  return 0;
}

int cmd_enumerate(const Options& o) {
  const auto model = ecc::validate_config(build_raw(o));
  const auto start = std::chrono::steady_clock::now();
  const auto dist = ecc::enumerate_exact(model, o.max_leaves);
  auto m = ecc::exact_metrics(model, dist);
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Sink sink(o.output);
  emit(o, sink.out(), m, {},
       {{"leaves", static_cast<double>(dist.leaves)},
        {"total_mass", static_cast<double>(dist.total())}});
  write_file(o.pdf, [&](std::ostream& f) { ecc::write_latency_pdf(f, model, m); });
  write_file(o.dump, [&](std::ostream& f) {
    for (const auto& [key, out] : dist.outcomes) {
      ecc::Chain c;
      for (const auto& [kind, s] : key) c = c.extend({kind, s, s});
      f << ecc::format_chain(c, static_cast<double>(out.prob)) << '\n';
    }
  });
  return 0;
}

int cmd_sweep(const Options& o) {
  if (!(o.sweep_step > 0) || o.sweep_to < o.sweep_from) {
    throw CLI::ValidationError("--step", "need --step > 0 and --to >= --from");
  }
  const auto base = build_raw(o);
  Sink sink(o.output);
  bool first = true;
  const auto points = static_cast<long>(std::floor((o.sweep_to - o.sweep_from) / o.sweep_step + 1e-9));
  int status = 0;
  for (long k = 0; k <= points; ++k) {
    const double v = o.sweep_from + static_cast<double>(k) * o.sweep_step;
    auto raw = base;
    const bool integral = std::floor(v) == v;
    const std::string text = integral ? std::to_string(static_cast<long long>(v)) : number_text(v);
    raw[o.sweep_param] = text;
    const auto model = ecc::validate_config(raw);
    const auto a = analyze(model, o);
    emit(o, sink.out(), a.metrics, {{"param", o.sweep_param}, {"value", text}},
         engine_extras(a.result), first);
    first = false;
    if (a.result.budget_exceeded) status = kExitModel;
  }
  return status;
}

int cmd_compare(const Options& o) {
  const auto model = ecc::validate_config(build_raw(o));
  const auto a = analyze(model, o);
  const auto sim = run_simulation(model, o);
  struct Row {
    std::string metric;
    double ecc, sim, se;
  };
  const std::vector<Row> rows = {
      {"r_pct", 100 * a.metrics.delivery_ratio, 100 * sim.metrics.delivery_ratio,
       100 * sim.delivery_ratio_se},
      {"l_ms", 1e3 * a.metrics.latency_mean_s, 1e3 * sim.metrics.latency_mean_s,
       1e3 * sim.latency_mean_se_s},
  };
  Sink sink(o.output);
  auto& out = sink.out();
  bool ok = true;
  auto json = nlohmann::ordered_json::array();
  if (o.format == "csv") out << "metric,ecc,sim,se,z,ok\n";
  for (const auto& r : rows) {
    const double z = r.se > 0 ? (r.ecc - r.sim) / r.se : (r.ecc == r.sim ? 0.0 : INFINITY);
    const bool pass = std::abs(z) <= o.sigma;
    ok = ok && pass;
    if (o.format == "json") {
      json.push_back({{"metric", r.metric}, {"ecc", r.ecc}, {"sim", r.sim}, {"se", r.se},
                      {"z", z}, {"ok", pass}});
    } else {
      out << r.metric << ',' << r.ecc << ',' << r.sim << ',' << r.se << ',' << z << ','
          << (pass ? "yes" : "NO") << '\n';
    }
  }
  if (o.format == "json") out << json.dump() << '\n';
  if (a.result.budget_exceeded) return kExitModel;
  return ok ? 0 : kExitCompare;
}

int cmd_debug_lambda(const Options& o) {
  auto raw = build_raw(o);
  if (!raw.contains("n_nodes")) raw["n_nodes"] = "1";
  const auto model = ecc::validate_config(raw);
  const ecc::Schedule sched(model);
  if (o.debug_i < 1 || o.debug_i > model.b_max || o.debug_j < 1 || o.debug_j > model.t_max) {
    throw CLI::ValidationError("lambda", "state index outside [1, B_max] x [1, T_max]");
  }
  Sink sink(o.output);
  bool first = true;
  for (auto t : sched.lambda_set({o.debug_i, o.debug_j})) {
    sink.out() << (first ? "" : " ") << t;
    first = false;
  }
  sink.out() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event Chains Computation for IEEE 802.15.4 unslotted CSMA/CA"};
  app.require_subcommand(1);
  Options o;

  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("-n,--nodes", o.nodes, "number of sensor nodes");
    sub->add_option("--theta", o.theta, "chain probability threshold");
    sub->add_option("-j,--workers", o.workers, "worker threads (default: $ECC_WORKERS or 1)");
    sub->add_option("--set", o.sets, "override any configuration key (key=value)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", o.output, "write the report here instead of stdout");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "run ECC and print the metrics");
  add_model_options(analyze_cmd);
  analyze_cmd->add_option("--pdf", o.pdf, "write the latency PDF (t_ms,p)");
  analyze_cmd->add_option("--dump", o.dump, "write every finalized chain");
  analyze_cmd->add_flag("--progress", o.progress, "report progress on stderr");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo simulation of the protocol");
  add_model_options(simulate_cmd);
  simulate_cmd->add_option("--runs", o.runs, "independent runs")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", o.seed, "experiment seed");
  simulate_cmd->add_option("--pdf", o.pdf, "write the latency PDF (t_ms,p)");
  simulate_cmd->add_option("--dump", o.dump, "write the outcome histogram");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "exact joint enumeration (tiny models)");
  add_model_options(enumerate_cmd);
  enumerate_cmd->add_option("--max-leaves", o.max_leaves, "refuse larger trees");
  enumerate_cmd->add_option("--pdf", o.pdf, "write the latency PDF (t_ms,p)");
  enumerate_cmd->add_option("--dump", o.dump, "write the exact outcome distribution");

  auto* sweep_cmd = app.add_subcommand("sweep", "run ECC over a range of one parameter");
  add_model_options(sweep_cmd);
  sweep_cmd->add_option("--param", o.sweep_param, "configuration key to vary")->required();
  sweep_cmd->add_option("--from", o.sweep_from)->required();
  sweep_cmd->add_option("--to", o.sweep_to)->required();
  sweep_cmd->add_option("--step", o.sweep_step);
  sweep_cmd->add_flag("--progress", o.progress, "report progress on stderr");

  auto* compare_cmd = app.add_subcommand("compare", "ECC against the simulator");
  add_model_options(compare_cmd);
  compare_cmd->add_option("--runs", o.runs, "simulation runs")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--seed", o.seed, "experiment seed");
  compare_cmd->add_option("--sigma", o.sigma, "allowed |z| per metric");
  compare_cmd->add_flag("--progress", o.progress, "report progress on stderr");

  auto* debug_cmd = app.add_subcommand("debug", "inspect model internals");
  debug_cmd->require_subcommand(1);
  auto* lambda_cmd = debug_cmd->add_subcommand("lambda", "print the CCA instants of state (i, j)");
  add_model_options(lambda_cmd);
  lambda_cmd->add_option("stage", o.debug_i, "backoff stage")->required();
  lambda_cmd->add_option("attempt", o.debug_j, "transmission attempt")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(o);
    if (simulate_cmd->parsed()) return cmd_simulate(o);
    if (enumerate_cmd->parsed()) return cmd_enumerate(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (compare_cmd->parsed()) return cmd_compare(o);
    if (lambda_cmd->parsed()) return cmd_debug_lambda(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ecc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  }
  return kExitUsage;
}
