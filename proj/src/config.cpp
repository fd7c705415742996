#include "masrm/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace masrm {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (num_tx < 1) fail("system.M must be >= 1");
  if (num_rx_ir < 1 || num_rx_eve < 1) fail("receiver antenna counts must be >= 1");
  if (num_streams < 1 || num_streams > std::min(num_tx, num_rx_ir))
    fail("system.d must satisfy 1 <= d <= min(M, N_I)");
  if (num_paths < 1) fail("system.L must be >= 1");
  if (!(p_max > 0.0)) fail("p_max must be > 0");
  if (!(sigma2_i > 0.0) || !(sigma2_e > 0.0)) fail("noise powers must be > 0");
  if (!(wavelength > 0.0)) fail("wavelength must be > 0");
  if (min_distance < 0.0) fail("system.D must be >= 0");
  if (!(region_size > 0.0)) fail("system.A must be > 0");
  if (!(g0 > 0.0)) fail("channel.g0 must be > 0");
  if (!(alpha >= 0.0)) fail("channel.alpha must be >= 0");
  if (!(d_min > 0.0) || d_max < d_min) fail("distance range must satisfy 0 < d_min <= d_max");
  if (trials < 0) fail("run.trials must be >= 0");
  if (!(epsilon1 > 0.0) || !(epsilon2 > 0.0)) fail("tolerances must be > 0");
  if (n_max < 1 || mm_max_iter < 1 || screening_iters < 1)
    fail("iteration limits must be >= 1");
  // A packing of M antennas with spacing D must exist; the half-wavelength
  // grid used for initialization is the constructive witness.
  if (num_tx >= 2) {
    const double diag = 2.0 * std::sqrt(2.0) * region().half_width;
    if (min_distance > diag)
      fail("min distance exceeds the region diagonal; no placement exists");
    try {
      validate_positions(planar_grid(num_tx, 0.5 * wavelength), region(), min_distance);
    } catch (const std::invalid_argument& e) {
      fail(std::string("initial antenna grid is infeasible for this region: ") + e.what());
    }
  }
}

namespace {

struct RawConfig {
  std::map<std::string, double> values;

  bool has(const std::string& k) const { return values.count(k) > 0; }

  double take(const std::string& k, bool& seen) {
    seen = true;
    const double v = values.at(k);
    values.erase(k);
    return v;
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Applies `key` (possibly with a _dbm/_db alternative) to `out`, converting
// decibel variants to linear. Both forms of the same setting is an error.
void assign(RawConfig& raw, const std::string& key, double& out,
            const std::string& db_key = {}, bool dbm = false) {
  bool lin_seen = false, db_seen = false;
  double lin = 0.0, db = 0.0;
  if (raw.has(key)) lin = raw.take(key, lin_seen);
  if (!db_key.empty() && raw.has(db_key)) db = raw.take(db_key, db_seen);
  if (lin_seen && db_seen)
    throw ConfigError("both " + key + " and " + db_key + " given");
  if (lin_seen) out = lin;
  if (db_seen) out = dbm ? dbm_to_mw(db) : db_to_linear(db);
}

void assign_int(RawConfig& raw, const std::string& key, int& out) {
  if (!raw.has(key)) return;
  bool seen = false;
  const double v = raw.take(key, seen);
  if (v != std::floor(v)) throw ConfigError(key + " must be an integer");
  out = static_cast<int>(v);
}

}  // namespace

SystemConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    try {
      size_t used = 0;
      const double num = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      if (raw.values.count(key))
        throw ConfigError("duplicate key " + key);
      raw.values[key] = num;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(lineno) + ": cannot parse value '" +
                        val + "'");
    }
  }

  SystemConfig cfg;
  bool d_given = raw.has("system.d");
  bool dmin_given = raw.has("system.D");
  bool area_given = raw.has("system.A");

  assign_int(raw, "system.M", cfg.num_tx);
  assign_int(raw, "system.N_I", cfg.num_rx_ir);
  assign_int(raw, "system.N_E", cfg.num_rx_eve);
  assign_int(raw, "system.d", cfg.num_streams);
  assign_int(raw, "system.L", cfg.num_paths);
  assign(raw, "system.p_max", cfg.p_max, "system.p_max_dbm", true);
  assign(raw, "system.sigma2_i", cfg.sigma2_i, "system.sigma2_i_dbm", true);
  assign(raw, "system.sigma2_e", cfg.sigma2_e, "system.sigma2_e_dbm", true);
  assign(raw, "system.wavelength", cfg.wavelength);
  assign(raw, "system.D", cfg.min_distance);
  assign(raw, "system.A", cfg.region_size);
  assign(raw, "channel.g0", cfg.g0, "channel.g0_db", false);
  assign(raw, "channel.alpha", cfg.alpha);
  assign(raw, "channel.d_min", cfg.d_min);
  assign(raw, "channel.d_max", cfg.d_max);
  assign_int(raw, "run.trials", cfg.trials);
  if (raw.has("run.base_seed")) {
    bool seen = false;
    const double v = raw.take("run.base_seed", seen);
    if (v < 0 || v != std::floor(v)) throw ConfigError("run.base_seed must be a non-negative integer");
    cfg.base_seed = static_cast<std::uint64_t>(v);
  }
  assign(raw, "solver.epsilon1", cfg.epsilon1);
  assign(raw, "solver.epsilon2", cfg.epsilon2);
  assign_int(raw, "solver.n_max", cfg.n_max);
  assign_int(raw, "solver.mm_max_iter", cfg.mm_max_iter);
  assign_int(raw, "baselines.screening_iters", cfg.screening_iters);

  if (!raw.values.empty())
    throw ConfigError("unknown config key: " + raw.values.begin()->first);

  if (!d_given) cfg.num_streams = std::min(cfg.num_tx, cfg.num_rx_ir);
  if (!dmin_given) cfg.min_distance = 0.5 * cfg.wavelength;
  if (!area_given) cfg.region_size = 4.0 * cfg.wavelength;

  cfg.validate();
  return cfg;
}

SystemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace masrm
