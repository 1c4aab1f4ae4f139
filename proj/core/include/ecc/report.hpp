#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ecc/engine.hpp"
#include "ecc/metrics.hpp"

namespace ecc {

/// Extra named columns placed before the standard ones, e.g. the swept
/// parameter of a sweep row.
using ReportPrefix = std::vector<std::pair<std::string, std::string>>;

/// `n,theta,coverage,chains,r_pct,l_ms,e_mj,time_s`
std::string csv_header(const ReportPrefix& prefix = {});
std::string csv_row(const MetricsReport& m, const ReportPrefix& prefix = {});

/// One JSON object with the CSV columns as keys (same rounding), plus any
/// `extra` numeric fields.
std::string json_report(const MetricsReport& m, const ReportPrefix& prefix = {},
                        const std::vector<std::pair<std::string, double>>& extra = {});

/// Two columns `t_ms,p`.
void write_latency_pdf(std::ostream& out, const DerivedModel& model, const MetricsReport& m);

/// One chain per line, see format_chain.
void write_chain_dump(std::ostream& out, const std::vector<FinalChain>& chains);

}  // namespace ecc
