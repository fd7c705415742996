#pragma once

#include <cstdint>
#include <string>

#include "masrm/channel.hpp"
#include "masrm/types.hpp"

namespace masrm {

/// Invalid or inconsistent run configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complete description of one scenario. Internal units are linear
/// milliwatts and meters; dB/dBm appear only in config keys with explicit
/// _db/_dbm suffixes and are converted at parse time.
struct SystemConfig {
  int num_tx{4};           // M, movable transmit antennas
  int num_rx_ir{4};        // N_I
  int num_rx_eve{4};       // N_E
  int num_streams{4};      // d <= min(M, N_I); defaults to min(M, N_I)
  int num_paths{6};        // L, per link
  double p_max{10.0};      // transmit power budget, mW (10 dBm)
  double sigma2_i{1e-8};   // noise power, mW (-80 dBm)
  double sigma2_e{1e-8};
  double wavelength{0.01};    // meters
  double min_distance{0.005}; // D, meters; defaults to wavelength / 2
  double region_size{0.04};   // A (region is A x A), meters; defaults to 4 wavelengths
  double g0{1e-4};            // -40 dB reference gain
  double alpha{2.8};
  double d_min{20.0};
  double d_max{100.0};
  int trials{400};
  std::uint64_t base_seed{1};

  // Solver controls.
  double epsilon1{1e-7};  // position-loop convergence
  double epsilon2{1e-5};  // outer-loop convergence
  int n_max{500};
  int mm_max_iter{200};
  int screening_iters{30};  // truncated solves inside greedy selection

  TransmitRegion region() const { return {0.5 * region_size}; }
  GeometryConfig geometry() const {
    return {num_paths, num_rx_ir, num_rx_eve, wavelength, g0, alpha, d_min, d_max};
  }

  void validate() const;  // throws ConfigError
};

/// Parses a flat key = value file (dotted keys, '#' comments). Unknown keys
/// and malformed values raise ConfigError. Recognized power/gain keys accept
/// either linear values or a _dbm/_db-suffixed variant.
SystemConfig parse_config_file(const std::string& path);
SystemConfig parse_config_text(const std::string& text);

double dbm_to_mw(double dbm);
double db_to_linear(double db);

}  // namespace masrm
