#include "ecc/params.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "ecc/error.hpp"

namespace ecc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::GridMisaligned: return "GridMisaligned";
    case ErrorCode::NormalizationViolation: return "NormalizationViolation";
    case ErrorCode::InvalidComposition: return "InvalidComposition";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyChainSet: return "EmptyChainSet";
    case ErrorCode::TreeTooLarge: return "TreeTooLarge";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void out_of_range(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::OutOfRange, key + " " + why);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    out_of_range(key, "has non-numeric value '" + text + "'");
  }
  return value;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct KeyBinding {
  std::string name;
  std::function<void(ModelConfig&, const std::string&)> set;
  std::function<std::string(const ModelConfig&)> get;
};

template <class T, class M>
KeyBinding bind(std::string name, M member) {
  KeyBinding kb;
  kb.name = name;
  kb.set = [member, name](ModelConfig& c, const std::string& v) {
    std::invoke(member, c) = parse_number<T>(name, v);
  };
  kb.get = [member](const ModelConfig& c) {
    const auto value = std::invoke(member, const_cast<ModelConfig&>(c));
    if constexpr (std::is_floating_point_v<T>) {
      return fmt_double(value);
    } else {
      return std::to_string(value);
    }
  };
  return kb;
}

const std::vector<KeyBinding>& bindings() {
  static const std::vector<KeyBinding> table = {
      bind<int>("n_nodes", [](ModelConfig& c) -> int& { return c.n_nodes; }),
      bind<double>("theta", [](ModelConfig& c) -> double& { return c.theta; }),
      bind<int>("workers", [](ModelConfig& c) -> int& { return c.workers; }),
      bind<std::uint64_t>("max_chains", [](ModelConfig& c) -> std::uint64_t& { return c.max_chains; }),
      bind<int>("mac_min_be", [](ModelConfig& c) -> int& { return c.mac.min_be; }),
      bind<int>("mac_max_be", [](ModelConfig& c) -> int& { return c.mac.max_be; }),
      bind<int>("mac_max_csma_backoffs",
                [](ModelConfig& c) -> int& { return c.mac.max_csma_backoffs; }),
      bind<int>("mac_max_frame_retries",
                [](ModelConfig& c) -> int& { return c.mac.max_frame_retries; }),
      bind<Instant>("d_bp", [](ModelConfig& c) -> Instant& { return c.timing.d_bp; }),
      bind<Instant>("d_cca", [](ModelConfig& c) -> Instant& { return c.timing.d_cca; }),
      bind<Instant>("d_tat", [](ModelConfig& c) -> Instant& { return c.timing.d_tat; }),
      bind<Instant>("d_tx", [](ModelConfig& c) -> Instant& { return c.timing.d_tx; }),
      bind<Instant>("d_ack", [](ModelConfig& c) -> Instant& { return c.timing.d_ack; }),
      bind<double>("symbol_duration_s",
                   [](ModelConfig& c) -> double& { return c.timing.symbol_duration_s; }),
      bind<double>("energy.tx_ma", [](ModelConfig& c) -> double& { return c.energy.tx_ma; }),
      bind<double>("energy.rx_ma", [](ModelConfig& c) -> double& { return c.energy.rx_ma; }),
      bind<double>("energy.idle_ma", [](ModelConfig& c) -> double& { return c.energy.idle_ma; }),
      bind<double>("energy.off_ma", [](ModelConfig& c) -> double& { return c.energy.off_ma; }),
      bind<double>("energy.volt", [](ModelConfig& c) -> double& { return c.energy.volt; }),
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& b : bindings()) k.push_back(b.name);
    return k;
  }();
  return keys;
}

DerivedModel derive(const ModelConfig& cfg) {
  const auto& mac = cfg.mac;
  const auto& tm = cfg.timing;
  const auto& en = cfg.energy;

  if (cfg.n_nodes < 1) out_of_range("n_nodes", "must be >= 1");
  if (!(cfg.theta >= 0.0 && cfg.theta < 1.0)) out_of_range("theta", "must lie in [0, 1)");
  if (cfg.workers < 1) out_of_range("workers", "must be >= 1");
  if (cfg.max_chains < 1) out_of_range("max_chains", "must be >= 1");
  if (mac.min_be < 0 || mac.min_be > 8) out_of_range("mac_min_be", "must lie in [0, 8]");
  if (mac.max_be < mac.min_be || mac.max_be > 8) {
    out_of_range("mac_max_be", "must lie in [mac_min_be, 8]");
  }
  if (mac.max_csma_backoffs < 0) out_of_range("mac_max_csma_backoffs", "must be >= 0");
  if (mac.max_frame_retries < 0) out_of_range("mac_max_frame_retries", "must be >= 0");
  if (tm.d_bp <= 0) out_of_range("d_bp", "must be > 0");
  if (tm.d_cca < 0) out_of_range("d_cca", "must be >= 0");
  if (tm.d_tat < 0) out_of_range("d_tat", "must be >= 0");
  if (tm.d_tx <= 0) out_of_range("d_tx", "must be > 0");
  if (tm.d_ack < 0) out_of_range("d_ack", "must be >= 0");
  if (!(tm.symbol_duration_s > 0.0)) out_of_range("symbol_duration_s", "must be > 0");
  if (en.tx_ma < 0) out_of_range("energy.tx_ma", "must be >= 0");
  if (en.rx_ma < 0) out_of_range("energy.rx_ma", "must be >= 0");
  if (en.idle_ma < 0) out_of_range("energy.idle_ma", "must be >= 0");
  if (en.off_ma < 0) out_of_range("energy.off_ma", "must be >= 0");
  if (en.volt < 0) out_of_range("energy.volt", "must be >= 0");

  // A node that finds the channel busy backs off from t* + d_cca + d_tat;
  // that offset has to be whole slots or CCA instants leave the grid.
  if ((tm.d_cca + tm.d_tat) % tm.d_bp != 0 || tm.d_cca + tm.d_tat == 0) {
    throw Error(ErrorCode::GridMisaligned,
                "d_cca + d_tat = " + std::to_string(tm.d_cca + tm.d_tat) +
                    " is not a positive multiple of d_bp = " + std::to_string(tm.d_bp));
  }

  DerivedModel m;
  m.config = cfg;
  m.b_max = mac.max_csma_backoffs + 1;
  m.t_max = mac.max_frame_retries + 1;
  for (int i = 1; i <= m.b_max; ++i) {
    m.w.push_back(1 << std::min(mac.min_be + i - 1, mac.max_be));
  }
  m.cca_step = tm.d_cca + tm.d_tat;
  m.d_diff = (tm.d_bp - tm.d_tx % tm.d_bp) % tm.d_bp;
  m.success_span = m.align_up(tm.d_cca + tm.d_tat + tm.d_tx + tm.d_tat + tm.d_ack);
  m.failure_span = m.align_up(tm.d_cca + tm.d_tat + tm.d_tx);
  // The timeout expires two slots after the failure's finish instant, so the
  // first retry CCA lands in [f + 2 d_bp, f + (W_1 + 1) d_bp].
  m.d_to = m.failure_span - (tm.d_cca + tm.d_tat + tm.d_tx) + 2 * tm.d_bp;
  m.d_rtx = tm.d_cca + tm.d_tat + tm.d_tx + m.d_to;
  return m;
}

DerivedModel validate_config(const RawConfig& raw) {
  ModelConfig cfg;
  cfg.n_nodes = 0;
  for (const auto& [key, value] : raw) {
    const auto& table = bindings();
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const KeyBinding& b) { return b.name == key; });
    if (it == table.end()) throw Error(ErrorCode::UnknownKey, "unrecognised key '" + key + "'");
    it->set(cfg, trim(value));
  }
  if (!raw.contains("n_nodes")) throw Error(ErrorCode::MissingKey, "n_nodes is required");
  return derive(cfg);
}

RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::OutOfRange,
                  "line " + std::to_string(lineno) + " is not of the form key=value");
    }
    raw[trim(std::string_view(body).substr(0, eq))] =
        trim(std::string_view(body).substr(eq + 1));
  }
  return raw;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingKey, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RawConfig to_raw(const ModelConfig& cfg) {
  RawConfig raw;
  for (const auto& b : bindings()) raw[b.name] = b.get(cfg);
  return raw;
}

}  // namespace ecc
