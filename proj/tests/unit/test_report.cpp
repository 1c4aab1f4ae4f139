#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "ecc/engine.hpp"
#include "ecc/report.hpp"
#include "support.hpp"

using namespace ecc;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, sep);) out.push_back(tok);
  return out;
}

}  // namespace

TEST(Report, CsvHeader) {
  EXPECT_EQ(csv_header(), "n,theta,coverage,chains,r_pct,l_ms,e_mj,time_s");
  EXPECT_EQ(csv_header({{"param", "x"}, {"value", "1"}}),
            "param,value,n,theta,coverage,chains,r_pct,l_ms,e_mj,time_s");
}

TEST(Report, JsonCarriesCsvValues) {
  const auto m = ecc::test::model_with(3, 1e-5);
  const auto rep = compute_metrics(m, run_ecc(m));
  const auto names = split(csv_header(), ',');
  const auto values = split(csv_row(rep), ',');
  const auto j = nlohmann::json::parse(json_report(rep));
  ASSERT_EQ(names.size(), values.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    EXPECT_EQ(j.at(names[k]).get<double>(), std::stod(values[k])) << names[k];
  }
}

TEST(Report, LatencyPdfColumns) {
  const auto m = ecc::test::model_with(1);
  const auto rep = compute_metrics(m, run_ecc(m));
  std::ostringstream os;
  write_latency_pdf(os, m, rep);
  const auto lines = split(os.str(), '\n');
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(lines[0], "t_ms,p");
  EXPECT_EQ(lines[1], "5.120,0.125");
  EXPECT_EQ(lines[8], "7.360,0.125");
}

TEST(Report, ChainDumpParsesBack) {
  const auto m = ecc::test::model_with(2, 1e-3);
  const auto res = run_ecc(m);
  std::ostringstream os;
  write_chain_dump(os, res.chains);
  const auto lines = split(os.str(), '\n');
  ASSERT_EQ(lines.size(), res.chains.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    EXPECT_EQ(parse_chain_line(lines[k]).prob, res.chains[k].prob);
  }
}
