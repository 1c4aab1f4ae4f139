#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ecc {

// All time quantities are integer counts of radio symbols. The 2.4 GHz
// O-QPSK PHY runs at 62.5 ksymbol/s, i.e. 16 us per symbol.
using Instant = std::int64_t;

struct MacParams {
  int min_be = 3;
  int max_be = 4;
  int max_csma_backoffs = 2;
  int max_frame_retries = 1;
};

struct TimingParams {
  Instant d_bp = 20;    // backoff period (slot)
  Instant d_cca = 8;
  Instant d_tat = 12;   // rx<->tx turnaround
  Instant d_tx = 266;   // 133-byte frame
  Instant d_ack = 22;
  double symbol_duration_s = 16e-6;
};

// CC2420 current draws in milliamps.
struct EnergyParams {
  double tx_ma = 17.4;
  double rx_ma = 18.8;
  double idle_ma = 0.426;
  double off_ma = 0.0;
  double volt = 3.0;
};

struct ModelConfig {
  int n_nodes = 0;
  double theta = 0.0;
  int workers = 1;
  std::uint64_t max_chains = 50'000'000;
  MacParams mac;
  TimingParams timing;
  EnergyParams energy;
};

/// Validated configuration plus every quantity derived from it. Immutable
/// once built, so it can be shared read-only between worker threads.
struct DerivedModel {
  ModelConfig config;

  std::vector<int> w;   // backoff window per stage, w[0] is W_1
  int b_max = 0;        // CCAs allowed per transmission attempt
  int t_max = 0;        // transmission attempts allowed per packet

  Instant cca_step = 0;      // d_cca + d_tat, a whole number of slots
  Instant d_diff = 0;        // end of a frame to the next slot boundary
  Instant d_to = 0;          // acknowledgement timeout
  Instant d_rtx = 0;         // d_cca + d_tat + d_tx + d_to
  Instant success_span = 0;  // event start to finish for a delivered frame
  Instant failure_span = 0;  // event start to finish for a collision

  int n_nodes() const { return config.n_nodes; }
  double theta() const { return config.theta; }
  Instant d_bp() const { return config.timing.d_bp; }
  const TimingParams& timing() const { return config.timing; }
  const EnergyParams& energy() const { return config.energy; }

  /// W_i for a 1-based backoff stage.
  int window(int stage) const { return w.at(static_cast<std::size_t>(stage - 1)); }

  Instant align_up(Instant x) const {
    const Instant bp = d_bp();
    return (x + bp - 1) / bp * bp;
  }
  Instant to_slots(Instant t) const { return t / d_bp(); }
  double to_seconds(double symbols) const { return symbols * config.timing.symbol_duration_s; }
};

/// Checks every invariant of `cfg` and fills in the derived quantities.
/// Throws ecc::Error (OutOfRange, GridMisaligned) naming the offending key.
DerivedModel derive(const ModelConfig& cfg);

using RawConfig = std::map<std::string, std::string>;

/// Builds a model from flat key/value pairs. `n_nodes` is required; every
/// other key falls back to the IEEE 802.15.4 defaults above.
DerivedModel validate_config(const RawConfig& raw);

/// Reads a `key = value` file. Blank lines and `#` comments are ignored.
RawConfig read_config_file(const std::filesystem::path& path);
RawConfig parse_config_text(const std::string& text);

/// Flattens a config back to the key/value form accepted by validate_config.
RawConfig to_raw(const ModelConfig& cfg);

const std::vector<std::string>& config_keys();

}  // namespace ecc
