#pragma once

#include <utility>
#include <vector>

#include "masrm/rng.hpp"
#include "masrm/types.hpp"

namespace masrm {

/// Multipath geometry of one transmitter->receiver link under the planar
/// far-field model. Each transmit path j has elevation theta_t[j] and
/// azimuth phi_t[j]; each receive path i has theta_r[i], phi_r[i]. The
/// path-response matrix couples receive paths (rows) to transmit paths
/// (columns). Receive antennas sit at fixed rx_positions in the receiver's
/// own 2-D plane.
struct LinkGeometry {
  Eigen::ArrayXd theta_t;  // transmit elevations, radians in [0, pi]
  Eigen::ArrayXd phi_t;    // transmit azimuths,   radians in [0, pi]
  Eigen::ArrayXd theta_r;  // receive elevations
  Eigen::ArrayXd phi_r;    // receive azimuths
  CMatrix prm;             // path responses, num_rx_paths x num_tx_paths
  std::vector<Position2D> rx_positions;
  double distance{0.0};    // link distance, meters

  int num_tx_paths() const { return static_cast<int>(theta_t.size()); }
  int num_rx_paths() const { return static_cast<int>(theta_r.size()); }
  int num_rx_antennas() const { return static_cast<int>(rx_positions.size()); }

  void validate() const;  // throws std::invalid_argument on malformed geometry
};

/// Parameters of the random link model.
struct GeometryConfig {
  int num_paths{6};        // transmit paths == receive paths per link
  int rx_antennas_ir{4};
  int rx_antennas_eve{4};
  double wavelength{0.01};  // meters
  double g0{1e-4};          // average channel power gain at 1 m (linear)
  double alpha{2.8};        // path-loss exponent
  double d_min{20.0};       // link distance range, meters
  double d_max{100.0};
};

/// Per-path phase advance of a transmit antenna at position t:
/// rho_j(t) = x sin(theta_j) cos(phi_j) + y cos(theta_j).
double path_phase_advance(Position2D t, double theta, double phi);

/// Transmit field-response vector: [exp(i 2 pi / wavelength * rho_j(t))]_j.
CVector transmit_frv(Position2D t, const LinkGeometry& g, double wavelength);

/// Stacks transmit field-response vectors for all antennas into an
/// num_tx_paths x M matrix (column m corresponds to positions[m]).
CMatrix transmit_frm(const std::vector<Position2D>& positions,
                     const LinkGeometry& g, double wavelength);

/// Receive field-response matrix, num_rx_paths x num_rx_antennas, built from
/// the same phase-advance rule applied to the receive path angles.
CMatrix receive_frm(const LinkGeometry& g, double wavelength);

/// Channel matrix H = F^H * PRM * G, num_rx_antennas x M.
CMatrix assemble_channel(const LinkGeometry& g,
                         const std::vector<Position2D>& positions,
                         double wavelength);

/// Draws IR and eavesdropper link geometries. Both links share the model:
/// distance ~ U[d_min, d_max]; all angles i.i.d. U[0, pi]; diagonal
/// path-response matrix with entries CN(0, g0 d^-alpha / num_paths).
/// Receive arrays are centered half-wavelength grids.
/// Draw order per link: distance, theta_t, phi_t, theta_r, phi_r, prm;
/// the IR link is drawn first.
std::pair<LinkGeometry, LinkGeometry> sample_geometry(Rng& rng,
                                                      const GeometryConfig& cfg);

/// Imperfect channel knowledge: every transmit angle gets an independent
/// U[-mu/2, mu/2] offset (clamped to [0, pi]) and every diagonal
/// path-response entry s becomes s + |s| e with e ~ CN(0, epsilon).
/// Draw order: theta_t offsets, phi_t offsets, prm errors.
LinkGeometry perturb_geometry(const LinkGeometry& g, double mu, double epsilon,
                              Rng& rng);

}  // namespace masrm
