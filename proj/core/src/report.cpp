#include "ecc/report.hpp"

#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

namespace ecc {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> columns(const MetricsReport& m) {
  return {
      {"n", std::to_string(m.n_nodes)},
      {"theta", fmt("%g", m.theta)},
      {"coverage", fmt("%.9f", m.coverage)},
      {"chains", std::to_string(m.chain_count)},
      {"r_pct", fmt("%.6f", 100.0 * m.delivery_ratio)},
      {"l_ms", fmt("%.6f", 1e3 * m.latency_mean_s)},
      {"e_mj", fmt("%.6f", 1e3 * m.energy_j)},
      {"time_s", fmt("%.3f", m.wall_time_s)},
  };
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ',';
    out += parts[k];
  }
  return out;
}

}  // namespace

std::string csv_header(const ReportPrefix& prefix) {
  std::vector<std::string> names;
  for (const auto& [k, v] : prefix) names.push_back(k);
  for (const auto& [k, v] : columns(MetricsReport{})) names.push_back(k);
  return join(names);
}

std::string csv_row(const MetricsReport& m, const ReportPrefix& prefix) {
  std::vector<std::string> values;
  for (const auto& [k, v] : prefix) values.push_back(v);
  for (const auto& [k, v] : columns(m)) values.push_back(v);
  return join(values);
}

std::string json_report(const MetricsReport& m, const ReportPrefix& prefix,
                        const std::vector<std::pair<std::string, double>>& extra) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : prefix) j[k] = v;
  for (const auto& [k, v] : columns(m)) {
    if (k == "n" || k == "chains") {
      j[k] = std::stoull(v);
    } else {
      j[k] = std::stod(v);
    }
  }
  for (const auto& [k, v] : extra) j[k] = v;
  return j.dump();
}

void write_latency_pdf(std::ostream& out, const DerivedModel& model, const MetricsReport& m) {
  out << "t_ms,p\n";
  for (const auto& [t, p] : m.latency_pdf) {
    out << fmt("%.3f", 1e3 * model.to_seconds(static_cast<double>(t))) << ','
        << fmt("%.17g", p) << '\n';
  }
}

void write_chain_dump(std::ostream& out, const std::vector<FinalChain>& chains) {
  for (const auto& c : chains) out << format_chain(c.chain, c.prob) << '\n';
}

}  // namespace ecc
