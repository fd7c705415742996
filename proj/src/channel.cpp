#include "masrm/channel.hpp"

#include <algorithm>
#include <string>

namespace masrm {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_angles(const Eigen::ArrayXd& a, const char* what) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    require(std::isfinite(a[i]), std::string(what) + " contains a non-finite angle");
    require(a[i] >= -1e-12 && a[i] <= M_PI + 1e-12,
            std::string(what) + " angle outside [0, pi]");
  }
}

}  // namespace

void LinkGeometry::validate() const {
  require(theta_t.size() > 0, "geometry has no transmit paths");
  require(theta_t.size() == phi_t.size(), "transmit angle arrays disagree in length");
  require(theta_r.size() > 0, "geometry has no receive paths");
  require(theta_r.size() == phi_r.size(), "receive angle arrays disagree in length");
  require(prm.rows() == theta_r.size() && prm.cols() == theta_t.size(),
          "path-response matrix shape does not match the path counts");
  require(!rx_positions.empty(), "geometry has no receive antennas");
  require(prm.allFinite(), "path-response matrix contains non-finite entries");
  require(std::isfinite(distance) && distance > 0.0, "link distance must be positive");
  check_angles(theta_t, "theta_t");
  check_angles(phi_t, "phi_t");
  check_angles(theta_r, "theta_r");
  check_angles(phi_r, "phi_r");
  for (const auto& p : rx_positions)
    require(p.is_finite(), "receive antenna position is not finite");
}

double path_phase_advance(Position2D t, double theta, double phi) {
  return t.x * std::sin(theta) * std::cos(phi) + t.y * std::cos(theta);
}

CVector transmit_frv(Position2D t, const LinkGeometry& g, double wavelength) {
  require(t.is_finite(), "transmit position is not finite");
  require(wavelength > 0.0, "wavelength must be positive");
  const double k0 = 2.0 * M_PI / wavelength;
  const int lt = g.num_tx_paths();
  CVector out(lt);
  for (int j = 0; j < lt; ++j)
    out[j] = std::polar(1.0, k0 * path_phase_advance(t, g.theta_t[j], g.phi_t[j]));
  return out;
}

CMatrix transmit_frm(const std::vector<Position2D>& positions,
                     const LinkGeometry& g, double wavelength) {
  require(!positions.empty(), "no transmit positions given");
  CMatrix out(g.num_tx_paths(), static_cast<Eigen::Index>(positions.size()));
  for (size_t m = 0; m < positions.size(); ++m)
    out.col(static_cast<Eigen::Index>(m)) = transmit_frv(positions[m], g, wavelength);
  return out;
}

CMatrix receive_frm(const LinkGeometry& g, double wavelength) {
  require(wavelength > 0.0, "wavelength must be positive");
  const int lr = g.num_rx_paths();
  const int n = g.num_rx_antennas();
  const double k0 = 2.0 * M_PI / wavelength;
  CMatrix out(lr, n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < lr; ++i)
      out(i, c) = std::polar(
          1.0, k0 * path_phase_advance(g.rx_positions[c], g.theta_r[i], g.phi_r[i]));
  return out;
}

CMatrix assemble_channel(const LinkGeometry& g,
                         const std::vector<Position2D>& positions,
                         double wavelength) {
  g.validate();
  return receive_frm(g, wavelength).adjoint() *
         (g.prm * transmit_frm(positions, g, wavelength));
}

namespace {

LinkGeometry sample_link(Rng& rng, const GeometryConfig& cfg, int rx_antennas) {
  LinkGeometry g;
  const int paths = cfg.num_paths;
  g.distance = rng.uniform(cfg.d_min, cfg.d_max);
  g.theta_t.resize(paths);
  g.phi_t.resize(paths);
  g.theta_r.resize(paths);
  g.phi_r.resize(paths);
  for (int j = 0; j < paths; ++j) g.theta_t[j] = rng.uniform(0.0, M_PI);
  for (int j = 0; j < paths; ++j) g.phi_t[j] = rng.uniform(0.0, M_PI);
  for (int i = 0; i < paths; ++i) g.theta_r[i] = rng.uniform(0.0, M_PI);
  for (int i = 0; i < paths; ++i) g.phi_r[i] = rng.uniform(0.0, M_PI);
  const double var = cfg.g0 * std::pow(g.distance, -cfg.alpha) / paths;
  g.prm = CMatrix::Zero(paths, paths);
  for (int l = 0; l < paths; ++l) g.prm(l, l) = rng.complex_normal(var);
  g.rx_positions = planar_grid(rx_antennas, 0.5 * cfg.wavelength);
  return g;
}

}  // namespace

std::pair<LinkGeometry, LinkGeometry> sample_geometry(Rng& rng,
                                                      const GeometryConfig& cfg) {
  if (cfg.num_paths < 1) throw std::invalid_argument("num_paths must be >= 1");
  if (cfg.rx_antennas_ir < 1 || cfg.rx_antennas_eve < 1)
    throw std::invalid_argument("receiver antenna counts must be >= 1");
  if (!(cfg.wavelength > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  if (!(cfg.g0 > 0.0)) throw std::invalid_argument("g0 must be > 0");
  if (!(cfg.d_min > 0.0 && cfg.d_max >= cfg.d_min))
    throw std::invalid_argument("distance range must satisfy 0 < d_min <= d_max");
  LinkGeometry ir = sample_link(rng, cfg, cfg.rx_antennas_ir);
  LinkGeometry eve = sample_link(rng, cfg, cfg.rx_antennas_eve);
  return {std::move(ir), std::move(eve)};
}

LinkGeometry perturb_geometry(const LinkGeometry& g, double mu, double epsilon,
                              Rng& rng) {
  if (mu < 0.0 || epsilon < 0.0)
    throw std::invalid_argument("perturbation levels must be non-negative");
  g.validate();
  LinkGeometry out = g;
  const int lt = g.num_tx_paths();
  for (int j = 0; j < lt; ++j)
    out.theta_t[j] = std::clamp(g.theta_t[j] + rng.uniform(-0.5 * mu, 0.5 * mu), 0.0, M_PI);
  for (int j = 0; j < lt; ++j)
    out.phi_t[j] = std::clamp(g.phi_t[j] + rng.uniform(-0.5 * mu, 0.5 * mu), 0.0, M_PI);
  const int diag = static_cast<int>(std::min(g.prm.rows(), g.prm.cols()));
  for (int l = 0; l < diag; ++l) {
    const Complex s = g.prm(l, l);
    out.prm(l, l) = s + std::abs(s) * rng.complex_normal(epsilon);
  }
  return out;
}

}  // namespace masrm
